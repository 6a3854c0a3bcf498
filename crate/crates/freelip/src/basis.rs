//! Shortlex retractions, their free-space lifts, and the basis they induce.
//!
//! Over a Cayley ball, G_n denotes the first n elements of the shortlex
//! enumeration. The retraction P_n sends an element to a normal-form prefix
//! inside G_n via a three-case formula; its linearization L_n pushes molecule
//! coefficients along P_n. The audit checks, exhaustively and in exact
//! arithmetic, that the P_n commute, are idempotent, satisfy the K+1
//! Lipschitz bound for the measured prefix-divergence constant K, and agree
//! with the longest-prefix characterization they are claimed to equal.
//!
//! Audits run on the auditable core: elements of length <= radius - 1, whose
//! neighbours all lie in the ball. Distances between core elements are exact
//! ambient-group word distances.

use std::sync::Arc;

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::freespace::Molecule;
use crate::groups::{audit_combability, CayleyBall, CombabilityReport};
use crate::metric::Space;
use crate::scalar::Rational;
use crate::{Error, Result};

/// A Cayley ball with the machinery for the retractions P_n, n <= n_max.
#[derive(Debug)]
pub struct BasisSystem {
    ball: CayleyBall,
    n_max: usize,
    core: usize,
    comb: CombabilityReport,
    /// Enumeration indices of each core element's normal-form prefixes,
    /// identity first, the element itself last; strictly increasing.
    prefixes: Vec<Vec<usize>>,
    /// Exact pairwise word distances between core elements.
    dist: Vec<Vec<u32>>,
    /// Core elements as a pointed metric space (basepoint the identity).
    space: Arc<Space<Rational>>,
    core_edges: Vec<(usize, usize)>,
}

/// One basis element: delta(g_n) - delta(parent(g_n)) at 1-based index n >= 2.
#[derive(Debug, Clone)]
pub struct BasisVector {
    pub index: usize,
    pub vector: Molecule,
}

impl BasisSystem {
    /// Builds the system with n_max equal to the full auditable core.
    pub fn new(ball: CayleyBall) -> Result<Self> {
        let core = ball.core_size();
        Self::with_n_max(ball, core)
    }

    pub fn with_n_max(ball: CayleyBall, n_max: usize) -> Result<Self> {
        let core = ball.core_size();
        if core == 0 {
            return Err(Error::OutOfRange("ball radius must be >= 1".into()));
        }
        if n_max == 0 || n_max > core {
            return Err(Error::OutOfRange(format!(
                "n_max must lie in 1..={core}, got {n_max}"
            )));
        }
        let comb = audit_combability(&ball)?;

        let prefixes: Vec<Vec<usize>> = (0..core)
            .map(|g| {
                let mut chain = Vec::with_capacity(ball.length(g) as usize + 1);
                let mut k = g;
                chain.push(g);
                while k != 0 {
                    k = ball.parent(k);
                    chain.push(k);
                }
                chain.reverse();
                chain
            })
            .collect();

        let dist: Vec<Vec<u32>> = (0..core)
            .into_par_iter()
            .map(|i| {
                (0..core)
                    .map(|j| u32::try_from(ball.group_distance(i, j)).expect("core distances are small"))
                    .collect()
            })
            .collect();

        let names: Vec<String> = (0..core).map(|i| ball.element_name(i)).collect();
        let table: Vec<Vec<Rational>> = dist
            .iter()
            .map(|row| row.iter().map(|&d| Rational::from_integer(d.into())).collect())
            .collect();
        let space = Arc::new(Space::new(names, "1", table)?);

        let core_edges: Vec<(usize, usize)> = ball
            .edges()
            .iter()
            .copied()
            .filter(|&(a, b)| a < core && b < core)
            .collect();

        Ok(BasisSystem { ball, n_max, core, comb, prefixes, dist, space, core_edges })
    }

    pub fn ball(&self) -> &CayleyBall {
        &self.ball
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn core_len(&self) -> usize {
        self.core
    }

    pub fn combability(&self) -> &CombabilityReport {
        &self.comb
    }

    pub fn combability_constant(&self) -> u32 {
        self.comb.combability_constant()
    }

    /// The core as a pointed metric space; molecules for [`Self::project`]
    /// and [`Self::expand`] live over this space.
    pub fn space(&self) -> &Arc<Space<Rational>> {
        &self.space
    }

    pub fn delta(&self, g: usize) -> Result<Molecule> {
        Molecule::delta(self.space.clone(), g)
    }

    fn check_args(&self, n: usize, g: usize) -> Result<()> {
        if n < 1 || n > self.n_max {
            return Err(Error::OutOfRange(format!("n must lie in 1..={}, got {n}", self.n_max)));
        }
        if g >= self.core {
            return Err(Error::OutOfRange(format!(
                "element {g} is outside the auditable core (size {})",
                self.core
            )));
        }
        Ok(())
    }

    /// The three-case retraction: g itself if g is among the first n
    /// elements; otherwise the normal-form prefix of length m or m - 1,
    /// whichever lands among them, where m is the largest length in G_n.
    pub fn retraction(&self, n: usize, g: usize) -> Result<usize> {
        self.check_args(n, g)?;
        if g < n {
            return Ok(g);
        }
        let m = self.ball.length(n - 1) as usize;
        let chain = &self.prefixes[g];
        debug_assert!(chain.len() > m, "|g| >= m when g is outside G_n");
        let at_m = chain[m];
        if at_m < n {
            Ok(at_m)
        } else {
            Ok(chain[m - 1])
        }
    }

    /// The longest-prefix characterization: the prefix of g with the largest
    /// enumeration index still inside G_n. The audit asserts this agrees
    /// with [`Self::retraction`] everywhere.
    pub fn retraction_largest_prefix(&self, n: usize, g: usize) -> Result<usize> {
        self.check_args(n, g)?;
        let chain = &self.prefixes[g];
        let inside = chain.partition_point(|&idx| idx < n);
        debug_assert!(inside >= 1, "the identity is in every G_n");
        Ok(chain[inside - 1])
    }

    /// The lift L_n: coefficients pushed forward along the retraction;
    /// anything landing on the identity is dropped.
    pub fn project(&self, n: usize, m: &Molecule) -> Result<Molecule> {
        if !Arc::ptr_eq(m.space(), &self.space) && *m.space().as_ref() != *self.space.as_ref() {
            return Err(Error::OutOfRange("molecule lives over a different space".into()));
        }
        let mut image = Vec::with_capacity(m.coeffs().len());
        for (&g, c) in m.coeffs() {
            image.push((self.retraction(n, g)?, c.clone()));
        }
        Molecule::new(self.space.clone(), image)
    }

    /// The basis vector at 1-based index n >= 2 (index 1 is the identity and
    /// carries none).
    pub fn basis_vector(&self, n: usize) -> Result<BasisVector> {
        if n < 2 || n > self.n_max {
            return Err(Error::OutOfRange(format!(
                "basis index must lie in 2..={}, got {n}",
                self.n_max
            )));
        }
        let g = n - 1;
        let vector = Molecule::pair(self.space.clone(), g, self.ball.parent(g))?;
        Ok(BasisVector { index: n, vector })
    }

    /// Expansion coefficients: c_n sums the coefficients of support elements
    /// having g_n among their normal-form prefixes. Telescoping along each
    /// geodesic makes sum c_n b_n reconstruct the molecule exactly, with
    /// partial sums equal to the projections L_n.
    pub fn expand(&self, m: &Molecule) -> Result<Vec<(usize, Rational)>> {
        use std::collections::BTreeMap;
        if !Arc::ptr_eq(m.space(), &self.space) && *m.space().as_ref() != *self.space.as_ref() {
            return Err(Error::OutOfRange("molecule lives over a different space".into()));
        }
        let mut coeffs: BTreeMap<usize, Rational> = BTreeMap::new();
        for (&g, c) in m.coeffs() {
            for &p in &self.prefixes[g][1..] {
                let entry = coeffs.entry(p + 1).or_insert_with(|| Rational::from_integer(0.into()));
                *entry += c;
            }
        }
        Ok(coeffs.into_iter().filter(|(_, c)| !num_traits::Zero::is_zero(c)).collect())
    }

    /// Sum of c_n b_n over the given expansion.
    pub fn reconstruct(&self, expansion: &[(usize, Rational)]) -> Result<Molecule> {
        self.partial_sum(expansion, self.n_max)
    }

    /// Sum of c_k b_k over k <= n.
    pub fn partial_sum(&self, expansion: &[(usize, Rational)], n: usize) -> Result<Molecule> {
        let mut acc = Molecule::zero(self.space.clone());
        for (k, c) in expansion {
            if *k > n {
                continue;
            }
            acc = acc.add(&self.basis_vector(*k)?.vector.scale(c));
        }
        Ok(acc)
    }

    /// Exhaustive audit of the retraction claims; see [`ClaimReport`].
    pub fn audit_claim(&self) -> ClaimReport {
        let core = self.core;
        let n_max = self.n_max;

        // Retraction tables, both formulas, all n and all core elements.
        let literal: Vec<Vec<u32>> = (1..=n_max)
            .into_par_iter()
            .map(|n| {
                (0..core)
                    .map(|g| self.retraction(n, g).expect("audited arguments in range") as u32)
                    .collect()
            })
            .collect();
        let largest: Vec<Vec<u32>> = (1..=n_max)
            .into_par_iter()
            .map(|n| {
                (0..core)
                    .map(|g| {
                        self.retraction_largest_prefix(n, g).expect("audited arguments in range")
                            as u32
                    })
                    .collect()
            })
            .collect();

        let records: Vec<ClaimAuditRecord> = (1..=n_max)
            .into_par_iter()
            .map(|n| {
                let rn = &literal[n - 1];
                let formulas_agree = rn == &largest[n - 1];
                let idempotent = (0..core).all(|g| rn[rn[g] as usize] == rn[g]);
                let commuting = (1..=n_max).all(|m| {
                    let rm = &literal[m - 1];
                    (0..core).all(|g| rn[rm[g] as usize] == rm[rn[g] as usize])
                });
                // Exact Lipschitz constant: max over pairs of
                // d(P_n x, P_n y) / d(x, y), tracked as a fraction.
                let (mut num, mut den) = (0u64, 1u64);
                for x in 0..core {
                    for y in (x + 1)..core {
                        let a = u64::from(self.dist[rn[x] as usize][rn[y] as usize]);
                        let b = u64::from(self.dist[x][y]);
                        if u128::from(a) * u128::from(den) > u128::from(num) * u128::from(b) {
                            num = a;
                            den = b;
                        }
                    }
                }
                // den >= 1 throughout, so the gcd is positive
                let g = num.gcd(&den);
                let (num, den) = (num / g, den / g);
                // Boundary-edge bound from the claim's first case: edges with
                // exactly one endpoint inside G_n.
                let case1_max = self
                    .core_edges
                    .iter()
                    .filter(|&&(a, b)| (a < n) != (b < n))
                    .map(|&(a, b)| self.dist[rn[a] as usize][rn[b] as usize])
                    .max()
                    .unwrap_or(0);
                ClaimAuditRecord {
                    n,
                    lip_exact: format!("{num}/{den}"),
                    lip_num: num,
                    lip_den: den,
                    case1_max,
                    idempotent,
                    commuting,
                    formulas_agree,
                }
            })
            .collect();

        let k = self.combability_constant();
        let bound = u64::from(k) + 1;
        let mut max_lip = (0u64, 1u64);
        for r in &records {
            if u128::from(r.lip_num) * u128::from(max_lip.1)
                > u128::from(max_lip.0) * u128::from(r.lip_den)
            {
                max_lip = (r.lip_num, r.lip_den);
            }
        }
        ClaimReport {
            k,
            n_max,
            core_size: core,
            k_plus_1_bound_ok: records.iter().all(|r| r.lip_num <= bound * r.lip_den),
            case1_bound_ok: records.iter().all(|r| r.case1_max <= 2),
            commuting_all: records.iter().all(|r| r.commuting),
            idempotent_all: records.iter().all(|r| r.idempotent),
            formulas_agree_all: records.iter().all(|r| r.formulas_agree),
            basis_constant_observed: format!("{}/{}", max_lip.0, max_lip.1),
            max_lip,
            records,
        }
    }
}

/// Per-n audit results.
#[derive(Debug, Clone, Serialize)]
pub struct ClaimAuditRecord {
    pub n: usize,
    /// Exact Lipschitz constant of P_n on the core, as "p/q".
    pub lip_exact: String,
    /// Reduced fraction behind `lip_exact`.
    #[serde(skip)]
    pub lip_num: u64,
    #[serde(skip)]
    pub lip_den: u64,
    /// Max d(P_n g, P_n h) over core edges with one endpoint in G_n.
    pub case1_max: u32,
    pub idempotent: bool,
    /// P_n commutes with every P_m, m <= n_max.
    pub commuting: bool,
    /// Three-case formula agrees with the longest-prefix characterization.
    pub formulas_agree: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClaimReport {
    pub k: u32,
    pub n_max: usize,
    pub core_size: usize,
    pub k_plus_1_bound_ok: bool,
    pub case1_bound_ok: bool,
    pub commuting_all: bool,
    pub idempotent_all: bool,
    pub formulas_agree_all: bool,
    /// Largest observed operator norm sup_n ||L_n||, as "p/q".
    pub basis_constant_observed: String,
    #[serde(skip)]
    pub max_lip: (u64, u64),
    pub records: Vec<ClaimAuditRecord>,
}

impl ClaimReport {
    pub fn all_ok(&self) -> bool {
        self.k_plus_1_bound_ok
            && self.case1_bound_ok
            && self.commuting_all
            && self.idempotent_all
            && self.formulas_agree_all
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freespace::kr_norm;
    use crate::groups::{Element, Group};
    use crate::scalar::{rat, ratio};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn system(group: Group, radius: u32) -> BasisSystem {
        BasisSystem::new(CayleyBall::build(group, radius).unwrap()).unwrap()
    }

    #[test]
    fn retraction_trivial_cases() {
        let sys = system(Group::free(2).unwrap(), 4);
        // g in G_n is fixed
        for n in 1..=5 {
            for g in 0..n {
                assert_eq!(sys.retraction(n, g).unwrap(), g);
            }
        }
        // n = 1: everything lands on the identity
        for g in 0..sys.core_len() {
            assert_eq!(sys.retraction(1, g).unwrap(), 0);
        }
    }

    #[test]
    fn retraction_walks_the_parent_chain() {
        let sys = system(Group::free(2).unwrap(), 4);
        // G_2 = {1, a}; ab retracts to a
        let ab = sys.ball().index_of_element(&Element::FreeWord(vec![0, 2])).unwrap();
        let a = sys.ball().index_of_element(&Element::FreeWord(vec![0])).unwrap();
        assert_eq!(sys.retraction(2, ab).unwrap(), a);
        assert_eq!(sys.retraction_largest_prefix(2, ab).unwrap(), a);
    }

    #[test]
    fn out_of_range_arguments() {
        let sys = system(Group::free(1).unwrap(), 3);
        assert!(sys.retraction(0, 0).is_err());
        assert!(sys.retraction(sys.n_max() + 1, 0).is_err());
        assert!(sys.retraction(1, sys.core_len()).is_err());
    }

    #[test]
    fn project_examples() {
        let sys = system(Group::free_abelian(2, vec![]).unwrap(), 4);
        let n = 5; // G_5 = ball of radius 1 in Z^2
        // supported inside G_n: fixed
        let m = Molecule::new(sys.space().clone(), [(1, rat(2)), (3, rat(-1))]).unwrap();
        assert_eq!(sys.project(n, &m).unwrap(), m);
        // single delta: moves to delta of the retraction
        let g = sys
            .ball()
            .index_of_element(&Element::Abelian(vec![1, 1], vec![]))
            .unwrap();
        let img = sys.project(n, &sys.delta(g).unwrap()).unwrap();
        let pg = sys.retraction(n, g).unwrap();
        assert_eq!(img, sys.delta(pg).unwrap());
        // n = 1 kills everything
        assert!(sys.project(1, &m).unwrap().is_zero());
    }

    #[test]
    fn claim_audit_small_groups() {
        let z = system(Group::free_abelian(1, vec![]).unwrap(), 8);
        let rz = z.audit_claim();
        assert!(rz.all_ok());
        assert!(rz.max_lip.0 <= 2 * rz.max_lip.1); // lip <= 2

        let z2 = system(Group::free_abelian(2, vec![]).unwrap(), 6);
        let r2 = z2.audit_claim();
        assert_eq!(r2.k, 2);
        assert!(r2.all_ok());
        assert!(r2.max_lip.0 <= 3 * r2.max_lip.1); // lip <= K + 1 = 3

        let f2 = system(Group::free(2).unwrap(), 6);
        let rf = f2.audit_claim();
        assert!(rf.all_ok());
        assert!(rf.max_lip.0 <= 2 * rf.max_lip.1); // lip <= 2
    }

    #[test]
    fn basis_vectors_are_unit_and_filtered_by_projections() {
        let sys = system(Group::free(2).unwrap(), 4);
        for n in 2..=sys.n_max().min(12) {
            let b = sys.basis_vector(n).unwrap();
            assert_eq!(kr_norm(&b.vector).unwrap().value, rat(1));
            assert_eq!(sys.project(n, &b.vector).unwrap(), b.vector);
            assert!(sys.project(n - 1, &b.vector).unwrap().is_zero());
        }
        assert!(sys.basis_vector(1).is_err());
    }

    #[test]
    fn expansion_examples_and_reconstruction() {
        let sys = system(Group::free_abelian(2, vec![]).unwrap(), 4);
        // a basis vector expands to itself
        let b = sys.basis_vector(7).unwrap();
        assert_eq!(sys.expand(&b.vector).unwrap(), vec![(7, rat(1))]);
        // delta of a length-3 element: three unit coefficients at its prefixes
        let g = sys
            .ball()
            .index_of_element(&Element::Abelian(vec![1, 2], vec![]))
            .unwrap();
        let exp = sys.expand(&sys.delta(g).unwrap()).unwrap();
        assert_eq!(exp.len(), 3);
        assert!(exp.iter().all(|(_, c)| *c == rat(1)));
        let back = sys.reconstruct(&exp).unwrap();
        assert_eq!(back, sys.delta(g).unwrap());
        // zero molecule: empty expansion
        assert!(sys.expand(&Molecule::zero(sys.space().clone())).unwrap().is_empty());
    }

    #[test]
    fn partial_sums_equal_projections() {
        let sys = system(Group::free(2).unwrap(), 4);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let m = random_molecule(&sys, &mut rng);
            let exp = sys.expand(&m).unwrap();
            for n in 1..=sys.n_max() {
                assert_eq!(sys.partial_sum(&exp, n).unwrap(), sys.project(n, &m).unwrap());
            }
            assert_eq!(sys.reconstruct(&exp).unwrap(), m);
        }
    }

    #[test]
    fn projections_compose_to_the_minimum() {
        let sys = system(Group::free_abelian(2, vec![]).unwrap(), 4);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let m = random_molecule(&sys, &mut rng);
            for n in (1..=sys.n_max()).step_by(7) {
                for k in (1..=sys.n_max()).step_by(5) {
                    let a = sys.project(n, &sys.project(k, &m).unwrap()).unwrap();
                    let b = sys.project(k, &sys.project(n, &m).unwrap()).unwrap();
                    let c = sys.project(n.min(k), &m).unwrap();
                    assert_eq!(a, c);
                    assert_eq!(b, c);
                }
            }
        }
    }

    #[test]
    fn projection_norm_bound_holds_on_random_molecules() {
        let sys = system(Group::free_abelian(2, vec![]).unwrap(), 4);
        let bound = rat(i64::from(sys.combability_constant()) + 1);
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..25 {
            let m = random_molecule(&sys, &mut rng);
            let norm = kr_norm(&m).unwrap().value;
            for n in [1, 3, sys.n_max() / 2, sys.n_max()] {
                let n = n.max(1);
                let proj = sys.project(n, &m).unwrap();
                let pnorm = kr_norm(&proj).unwrap().value;
                assert!(pnorm <= &bound * &norm);
            }
        }
    }

    #[test]
    fn rank_of_projection_image() {
        let sys = system(Group::free(2).unwrap(), 3);
        for n in [1, 2, 5, sys.n_max()] {
            // L_n fixes delta(g_i) for i < n and kills nothing else needed:
            // the image is the span of those n - 1 independent deltas.
            for g in 0..n {
                let d = sys.delta(g).unwrap();
                assert_eq!(sys.project(n, &d).unwrap(), d);
            }
            for g in 0..sys.core_len() {
                let img = sys.project(n, &sys.delta(g).unwrap()).unwrap();
                assert!(img.support().iter().all(|&x| x < n));
            }
        }
    }

    fn random_molecule(sys: &BasisSystem, rng: &mut ChaCha8Rng) -> Molecule {
        let core = sys.core_len();
        let size = rng.gen_range(1..=6.min(core));
        let coeffs: Vec<(usize, Rational)> = (0..size)
            .map(|_| {
                let g = rng.gen_range(0..core);
                let num = rng.gen_range(-4i64..=4);
                let den = rng.gen_range(1i64..=3);
                (g, ratio(num, den))
            })
            .collect();
        Molecule::new(sys.space().clone(), coeffs).unwrap()
    }
}
