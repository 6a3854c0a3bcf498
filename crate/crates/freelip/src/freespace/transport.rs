//! Exact transportation simplex.
//!
//! Solves min sum c_ij x_ij over x >= 0 with fixed row sums (supplies) and
//! column sums (demands), by primal network simplex on the complete
//! bipartite graph with arbitrary-precision rational pivoting. Entering and
//! leaving arcs follow Bland's least-index rule, which rules out cycling on
//! degenerate instances without perturbation.

use std::collections::{HashMap, VecDeque};

use num_traits::Zero;

use crate::scalar::Rational;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct TransportSolution {
    /// Positive flows on arcs (row, col).
    pub flows: Vec<(usize, usize, Rational)>,
    /// Row potentials; dual-feasible with the column potentials:
    /// u_i + v_j <= c_ij everywhere, with equality on flow-carrying arcs.
    pub u: Vec<Rational>,
    pub v: Vec<Rational>,
    pub cost: Rational,
}

/// Solves the balanced transportation problem. `supplies` and `demands`
/// must be strictly positive with equal totals.
pub fn solve(
    cost: &[Vec<Rational>],
    supplies: &[Rational],
    demands: &[Rational],
) -> Result<TransportSolution> {
    let m = supplies.len();
    let k = demands.len();
    debug_assert!(m > 0 && k > 0);
    debug_assert!(cost.len() == m && cost.iter().all(|r| r.len() == k));
    debug_assert!(supplies.iter().chain(demands.iter()).all(|x| x > &Rational::zero()));
    debug_assert_eq!(
        supplies.iter().sum::<Rational>(),
        demands.iter().sum::<Rational>()
    );

    // Northwest-corner initial basis: m + k - 1 arcs forming a spanning tree
    // of the bipartite node set (degenerate zero flows allowed).
    let mut basis: Vec<(usize, usize)> = Vec::with_capacity(m + k - 1);
    let mut flow: HashMap<(usize, usize), Rational> = HashMap::new();
    {
        let mut rem_s = supplies.to_vec();
        let mut rem_d = demands.to_vec();
        let (mut i, mut j) = (0usize, 0usize);
        loop {
            let q = rem_s[i].clone().min(rem_d[j].clone());
            basis.push((i, j));
            flow.insert((i, j), q.clone());
            rem_s[i] -= q.clone();
            rem_d[j] -= q;
            if i == m - 1 && j == k - 1 {
                break;
            }
            if rem_s[i].is_zero() && i < m - 1 {
                i += 1;
            } else {
                j += 1;
            }
        }
    }
    debug_assert_eq!(basis.len(), m + k - 1);

    // Node ids: rows 0..m, cols m..m+k.
    let node_of_col = |j: usize| m + j;
    let mut iterations = 0usize;
    let iteration_cap = 1000 + 50 * m * k * (m + k);

    loop {
        iterations += 1;
        if iterations > iteration_cap {
            return Err(Error::Convergence(
                "transportation simplex exceeded its iteration cap".into(),
            ));
        }

        // Adjacency of the basis tree.
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m + k]; // (neighbor, basis idx)
        for (b, &(i, j)) in basis.iter().enumerate() {
            adj[i].push((node_of_col(j), b));
            adj[node_of_col(j)].push((i, b));
        }

        // Potentials from the tree: u[0] anchored at 0.
        let mut u = vec![None::<Rational>; m];
        let mut v = vec![None::<Rational>; k];
        u[0] = Some(Rational::zero());
        let mut queue = VecDeque::from([0usize]);
        while let Some(node) = queue.pop_front() {
            for &(next, b) in &adj[node] {
                let (i, j) = basis[b];
                if next >= m {
                    if v[next - m].is_none() {
                        v[next - m] = Some(&cost[i][j] - u[i].as_ref().unwrap());
                        queue.push_back(next);
                    }
                } else if u[next].is_none() {
                    u[next] = Some(&cost[i][j] - v[j].as_ref().unwrap());
                    queue.push_back(next);
                }
            }
        }
        let u: Vec<Rational> = u.into_iter().map(|x| x.expect("basis tree spans rows")).collect();
        let v: Vec<Rational> = v.into_iter().map(|x| x.expect("basis tree spans cols")).collect();

        // Bland entering rule: first arc in row-major order with negative
        // reduced cost.
        let mut entering = None;
        'scan: for i in 0..m {
            for j in 0..k {
                if flow.contains_key(&(i, j)) {
                    continue;
                }
                if cost[i][j].clone() - &u[i] - &v[j] < Rational::zero() {
                    entering = Some((i, j));
                    break 'scan;
                }
            }
        }
        let (ei, ej) = match entering {
            Some(e) => e,
            None => {
                // Optimal: collect positive flows and total cost.
                let mut flows: Vec<(usize, usize, Rational)> = flow
                    .iter()
                    .filter(|(_, q)| !q.is_zero())
                    .map(|(&(i, j), q)| (i, j, q.clone()))
                    .collect();
                flows.sort_by_key(|&(i, j, _)| (i, j));
                let cost_total = flows
                    .iter()
                    .map(|(i, j, q)| q * &cost[*i][*j])
                    .sum::<Rational>();
                return Ok(TransportSolution { flows, u, v, cost: cost_total });
            }
        };

        // Unique tree path from row ei to col ej; the entering arc closes it
        // into a cycle. Arcs an even number of steps from the entering arc
        // gain theta, odd ones lose it.
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; m + k]; // (prev node, basis idx)
        let mut seen = vec![false; m + k];
        seen[ei] = true;
        let mut queue = VecDeque::from([ei]);
        while let Some(node) = queue.pop_front() {
            if node == node_of_col(ej) {
                break;
            }
            for &(next, b) in &adj[node] {
                if !seen[next] {
                    seen[next] = true;
                    parent[next] = Some((node, b));
                    queue.push_back(next);
                }
            }
        }
        let mut path = Vec::new(); // basis indices from col ej back to row ei
        let mut node = node_of_col(ej);
        while node != ei {
            let (prev, b) = parent[node].expect("basis tree is connected");
            path.push(b);
            node = prev;
        }

        // Walking the cycle from the entering arc, path arcs alternate -,+,-,...
        let mut minus_arcs = Vec::new();
        for (step, &b) in path.iter().enumerate() {
            if step % 2 == 0 {
                minus_arcs.push(b);
            }
        }
        let theta = minus_arcs
            .iter()
            .map(|&b| flow[&basis[b]].clone())
            .min()
            .expect("cycle has at least one reverse arc");
        // Bland leaving rule: among minimum-ratio reverse arcs, the one with
        // the least (row, col) index.
        let leaving = *minus_arcs
            .iter()
            .filter(|&&b| flow[&basis[b]] == theta)
            .min_by_key(|&&b| basis[b])
            .expect("at least one minimizer");

        for (step, &b) in path.iter().enumerate() {
            let arc = basis[b];
            let q = flow.get_mut(&arc).unwrap();
            if step % 2 == 0 {
                *q -= theta.clone();
            } else {
                *q += theta.clone();
            }
        }
        let left = basis[leaving];
        flow.remove(&left);
        basis[leaving] = (ei, ej);
        flow.insert((ei, ej), theta);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio};

    fn rats(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn one_by_one() {
        let sol = solve(&[vec![rat(7)]], &rats(&[3]), &rats(&[3])).unwrap();
        assert_eq!(sol.cost, rat(21));
        assert_eq!(sol.flows, vec![(0, 0, rat(3))]);
    }

    #[test]
    fn classic_balanced_instance() {
        // Known optimum 12: supplies [1,2], demands [2,1],
        // costs [[2,4],[3,1]] -> x00=1, x10=1, x11=1 cost 2+3+1=6.
        let sol = solve(
            &[vec![rat(2), rat(4)], vec![rat(3), rat(1)]],
            &rats(&[1, 2]),
            &rats(&[2, 1]),
        )
        .unwrap();
        assert_eq!(sol.cost, rat(6));
        // dual feasibility and complementary slackness, exactly
        for (i, row) in [[rat(2), rat(4)], [rat(3), rat(1)]].iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                assert!(&sol.u[i] + &sol.v[j] <= *c);
            }
        }
        for (i, j, q) in &sol.flows {
            assert!(!q.is_zero());
            let c = [[rat(2), rat(4)], [rat(3), rat(1)]][*i][*j].clone();
            assert_eq!(&sol.u[*i] + &sol.v[*j], c);
        }
    }

    #[test]
    fn degenerate_ties_terminate() {
        // All supplies equal all demands pairwise; plenty of degenerate pivots.
        let n = 5;
        let cost: Vec<Vec<Rational>> = (0..n)
            .map(|i| (0..n).map(|j| rat(((i * 7 + j * 3) % 5 + 1) as i64)).collect())
            .collect();
        let sol = solve(&cost, &rats(&[1; 5]), &rats(&[1; 5])).unwrap();
        let direct: Rational = sol.flows.iter().map(|(i, j, q)| q * &cost[*i][*j]).sum();
        assert_eq!(sol.cost, direct);
        // Strong duality: primal cost equals dual objective.
        let dual: Rational = sol.u.iter().sum::<Rational>() + sol.v.iter().sum::<Rational>();
        assert_eq!(sol.cost, dual);
    }

    #[test]
    fn fractional_masses() {
        let sol = solve(
            &[vec![rat(1), rat(2)], vec![rat(2), rat(1)]],
            &[ratio(1, 2), ratio(3, 2)],
            &[ratio(5, 4), ratio(3, 4)],
        )
        .unwrap();
        // dual objective must equal primal cost exactly
        let dual = &sol.u[0] * ratio(1, 2)
            + &sol.u[1] * ratio(3, 2)
            + &sol.v[0] * ratio(5, 4)
            + &sol.v[1] * ratio(3, 4);
        assert_eq!(sol.cost, dual);
    }
}
