//! Independent brute-force norm oracle for small supports.
//!
//! Solves the dual program
//!     sup { sum_i alpha_i f(x_i) : f 1-Lipschitz, f(basepoint) = 0 }
//! by enumerating the basic feasible points of the constraint polytope. A
//! vertex is pinned by a spanning set of tight constraints
//! f(x) - f(y) = +-d(x, y) over the support plus basepoint, i.e. by a
//! spanning tree with a sign per edge. Trees are enumerated through Pruefer
//! sequences, signs by depth-first assignment with feasibility pruning.
//!
//! Everything runs in scaled i128 integers, so this path shares no code
//! with the simplex solver it cross-checks.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::scalar::Rational;
use crate::{Error, Result};

use super::Molecule;

const MAX_SUPPORT: usize = 6;

/// Exact free-space norm by dual vertex enumeration. Supports at most
/// 6 points (7 nodes with the basepoint).
pub fn brute_force_norm(m: &Molecule<Rational>) -> Result<Rational> {
    let support = m.support();
    if support.len() > MAX_SUPPORT {
        return Err(Error::Unsupported(format!(
            "brute-force oracle handles support <= {MAX_SUPPORT}, got {}",
            support.len()
        )));
    }
    if support.is_empty() {
        return Ok(Rational::zero());
    }
    let space = m.space();
    let mut nodes = vec![space.basepoint()];
    nodes.extend(&support);
    let n = nodes.len();

    // Common denominators: distances scale by dist_lcm, coefficients by
    // coeff_lcm; the integer objective then divides by their product.
    let mut dist_lcm = BigInt::one();
    for a in 0..n {
        for b in (a + 1)..n {
            dist_lcm = dist_lcm.lcm(space.dist(nodes[a], nodes[b]).denom());
        }
    }
    let mut coeff_lcm = BigInt::one();
    for c in m.coeffs().values() {
        coeff_lcm = coeff_lcm.lcm(c.denom());
    }
    let to_i128 = |x: &Rational, scale: &BigInt| -> Result<i128> {
        let scaled = x * Rational::from_integer(scale.clone());
        debug_assert!(scaled.denom().is_one());
        scaled
            .numer()
            .to_i128()
            .ok_or_else(|| Error::Unsupported("oracle instance too large for i128".into()))
    };
    let mut dist = vec![vec![0i128; n]; n];
    for a in 0..n {
        for b in 0..n {
            if a != b {
                dist[a][b] = to_i128(space.dist(nodes[a], nodes[b]), &dist_lcm)?;
            }
        }
    }
    let coeff: Vec<i128> = support
        .iter()
        .map(|&i| to_i128(&m.coeff(i), &coeff_lcm))
        .collect::<Result<_>>()?;

    let mut best: Option<i128> = None;
    let mut seq = vec![0usize; n.saturating_sub(2)];
    loop {
        let edges = prufer_decode(&seq, n);
        search_tree(&edges, &dist, &coeff, n, &mut best)?;
        // next Pruefer sequence
        let mut pos = seq.len();
        while pos > 0 {
            pos -= 1;
            seq[pos] += 1;
            if seq[pos] < n {
                break;
            }
            seq[pos] = 0;
            if pos == 0 {
                pos = usize::MAX;
                break;
            }
        }
        if seq.is_empty() || pos == usize::MAX {
            break;
        }
    }

    let best = best.expect("the polytope has at least one vertex");
    Ok(Rational::new(
        BigInt::from(best),
        &dist_lcm * &coeff_lcm,
    ))
}

/// Standard Pruefer decoding; for n = 2 the sequence is empty and the tree
/// is the single edge.
fn prufer_decode(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    debug_assert_eq!(seq.len() + 2, n);
    let mut degree = vec![1u32; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &s in seq {
        let leaf = (0..n).find(|&j| degree[j] == 1).expect("a leaf always exists");
        edges.push((leaf, s));
        degree[leaf] = 0;
        degree[s] -= 1;
    }
    let mut rest = (0..n).filter(|&j| degree[j] >= 1);
    let (a, b) = (rest.next().unwrap(), rest.next().unwrap());
    edges.push((a, b));
    edges
}

/// Depth-first sign assignment over one spanning tree: node values are
/// forced by the tree edges up to a sign each; every assignment feasible for
/// all pair constraints is a candidate (and every polytope vertex arises
/// this way for some tree).
fn search_tree(
    edges: &[(usize, usize)],
    dist: &[Vec<i128>],
    coeff: &[i128],
    n: usize,
    best: &mut Option<i128>,
) -> Result<()> {
    // Preorder walk rooted at the basepoint node 0.
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut order: Vec<(usize, usize)> = Vec::with_capacity(n - 1); // (node, parent)
    let mut stack = vec![0usize];
    let mut seen = vec![false; n];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                order.push((w, v));
                stack.push(w);
            }
        }
    }
    debug_assert_eq!(order.len(), n - 1);

    let mut values = vec![0i128; n];
    let mut assigned = vec![0usize; n]; // nodes assigned so far, in order
    assigned[0] = 0;
    assign(&order, 0, dist, coeff, &mut values, &mut assigned, best)?;
    Ok(())
}

fn assign(
    order: &[(usize, usize)],
    depth: usize,
    dist: &[Vec<i128>],
    coeff: &[i128],
    values: &mut [i128],
    assigned: &mut [usize],
    best: &mut Option<i128>,
) -> Result<()> {
    if depth == order.len() {
        let objective: i128 = coeff
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                a.checked_mul(values[i + 1])
                    .ok_or(Error::Unsupported("oracle overflow".into()))
            })
            .sum::<Result<i128>>()?;
        if best.map_or(true, |b| objective > b) {
            *best = Some(objective);
        }
        return Ok(());
    }
    let (v, p) = order[depth];
    for sign in [1i128, -1] {
        let candidate = values[p] + sign * dist[p][v];
        let feasible = assigned[..depth + 1]
            .iter()
            .all(|&u| (candidate - values[u]).abs() <= dist[u][v]);
        if feasible {
            values[v] = candidate;
            assigned[depth + 1] = v;
            assign(order, depth + 1, dist, coeff, values, assigned, best)?;
        }
    }
    Ok(())
}
