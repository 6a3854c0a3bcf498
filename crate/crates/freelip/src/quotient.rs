//! Quotient metrics and Haar-averaging projections over finite groups.
//!
//! A [`FiniteMetricGroup`] couples a multiplication table with a
//! left-invariant rational metric (verified exhaustively on construction).
//! For a subgroup H, the quotient distance
//! D(gH, fH) = min over h1, h2 of d(g h1, f h2) and the uniform average
//! P'(g) = (1/|H|) sum_h (delta(g h) - delta(h)) realize a norm-one
//! projection of the free space onto an isometric copy of the quotient
//! free-space, when one of three invariance hypotheses holds. Everything
//! here is exact; audits report findings rather than trusting the theory.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use crate::freespace::{kr_norm, Molecule};
use crate::groups::table_axioms;
use crate::metric::{Space, Violation};
use crate::scalar::{format_rational, Rational};
use crate::{Error, Result};

/// A finite group with a compatible left-invariant rational metric.
#[derive(Debug, Clone)]
pub struct FiniteMetricGroup {
    table: Vec<Vec<usize>>,
    inv: Vec<usize>,
    identity: usize,
    labels: Vec<String>,
    dist: Vec<Vec<Rational>>,
    space: Arc<Space<Rational>>,
}

impl FiniteMetricGroup {
    /// Validates the group axioms, that `dist` is a genuine metric, and that
    /// it is left-invariant.
    pub fn new(
        table: Vec<Vec<usize>>,
        dist: Vec<Vec<Rational>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let (identity, inv) = table_axioms(&table)?;
        let n = table.len();
        let labels = match labels {
            Some(ls) if ls.len() == n => ls,
            Some(_) => return Err(Error::InvalidGroup("labels length must match table size".into())),
            None => (0..n).map(|i| format!("g{i}")).collect(),
        };
        if dist.len() != n || dist.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidGroup(format!("metric table must be {n} x {n}")));
        }
        let space = Space::new(labels.clone(), &labels[identity], dist.clone())?;
        if let Some(v) = space.validate_exact().first() {
            return Err(Error::InvalidSpace(format!("group metric is not a metric: {v}")));
        }
        for h in 0..n {
            for g in 0..n {
                for f in 0..n {
                    if dist[table[h][g]][table[h][f]] != dist[g][f] {
                        return Err(Error::InvalidGroup(format!(
                            "metric is not left-invariant at h={h}, g={g}, f={f}"
                        )));
                    }
                }
            }
        }
        Ok(FiniteMetricGroup { table, inv, identity, labels, dist, space: Arc::new(space) })
    }

    /// Word metric from a symmetric generating set.
    pub fn from_word_metric(
        table: Vec<Vec<usize>>,
        generators: Vec<usize>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        // Delegates generating-set validation (symmetry, generation) and the
        // length computation to the groups module.
        let g = crate::groups::Group::finite_table(table.clone(), generators, labels.clone())?;
        let (_, inv) = table_axioms(&table)?;
        let n = table.len();
        let lengths: Vec<u64> = (0..n)
            .map(|x| g.word_length(&crate::groups::Element::Index(x)))
            .collect();
        let dist: Vec<Vec<Rational>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| Rational::from_integer(lengths[table[inv[a]][b]].into()))
                    .collect()
            })
            .collect();
        FiniteMetricGroup::new(table, dist, labels)
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv_of(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn dist(&self, a: usize, b: usize) -> &Rational {
        &self.dist[a][b]
    }

    /// The group as a pointed metric space, basepoint the identity.
    pub fn space(&self) -> &Arc<Space<Rational>> {
        &self.space
    }

    pub fn is_right_invariant(&self) -> bool {
        let n = self.order();
        (0..n).all(|h| {
            (0..n).all(|g| (0..n).all(|f| self.dist[self.table[g][h]][self.table[f][h]] == self.dist[g][f]))
        })
    }

    pub fn is_bi_invariant(&self) -> bool {
        // left-invariance holds by construction
        self.is_right_invariant()
    }

    pub fn is_right_h_invariant(&self, h: &Subgroup) -> bool {
        let n = self.order();
        h.elements().iter().all(|&k| {
            (0..n).all(|g| (0..n).all(|f| self.dist[self.table[g][k]][self.table[f][k]] == self.dist[g][f]))
        })
    }
}

/// The bi-invariant majorant D(g, f) = max over h in G of d(g h, f h).
/// Dominates d entrywise and is bi-invariant; both facts are re-verified by
/// the constructor and by [`FiniteMetricGroup::is_bi_invariant`].
pub fn biinvariant_majorant(group: &FiniteMetricGroup) -> Result<FiniteMetricGroup> {
    let n = group.order();
    let dist: Vec<Vec<Rational>> = (0..n)
        .map(|g| {
            (0..n)
                .map(|f| {
                    (0..n)
                        .map(|h| group.dist(group.mul(g, h), group.mul(f, h)).clone())
                        .max()
                        .expect("group is nonempty")
                })
                .collect()
        })
        .collect();
    let out = FiniteMetricGroup::new(group.table.clone(), dist, Some(group.labels.clone()))?;
    debug_assert!(out.is_bi_invariant());
    Ok(out)
}

/// A validated subgroup, stored as sorted element indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn new(group: &FiniteMetricGroup, elements: impl IntoIterator<Item = usize>) -> Result<Self> {
        let set: BTreeSet<usize> = elements.into_iter().collect();
        if set.iter().any(|&x| x >= group.order()) {
            return Err(Error::InvalidGroup("subgroup element out of range".into()));
        }
        if !set.contains(&group.identity()) {
            return Err(Error::InvalidGroup("subgroup must contain the identity".into()));
        }
        for &a in &set {
            if !set.contains(&group.inv_of(a)) {
                return Err(Error::InvalidGroup(format!(
                    "subgroup not closed under inverse at {}",
                    group.label(a)
                )));
            }
            for &b in &set {
                if !set.contains(&group.mul(a, b)) {
                    return Err(Error::InvalidGroup(format!(
                        "subgroup not closed under product at ({}, {})",
                        group.label(a),
                        group.label(b)
                    )));
                }
            }
        }
        Ok(Subgroup { elements: set.into_iter().collect() })
    }

    pub fn trivial(group: &FiniteMetricGroup) -> Self {
        Subgroup { elements: vec![group.identity()] }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_normal(&self, group: &FiniteMetricGroup) -> bool {
        (0..group.order()).all(|g| {
            self.elements
                .iter()
                .all(|&h| self.contains(group.mul(group.mul(g, h), group.inv_of(g))))
        })
    }

    pub fn is_proper_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.len() < other.elements.len()
            && self.elements.iter().all(|x| other.contains(*x))
    }
}

/// The invariance hypotheses admitting the averaging projection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Hypothesis {
    /// (i) d left-invariant and H normal.
    LeftInvariantNormal,
    /// (ii) d right-invariant and H normal.
    RightInvariantNormal,
    /// (iii) d left-invariant and right H-invariant.
    LeftInvariantRightHInvariant,
}

/// All hypotheses that hold for (G, d, H). Left-invariance of d is a
/// construction invariant of [`FiniteMetricGroup`].
pub fn detect_hypotheses(group: &FiniteMetricGroup, h: &Subgroup) -> Vec<Hypothesis> {
    let mut out = Vec::new();
    let normal = h.is_normal(group);
    if normal {
        out.push(Hypothesis::LeftInvariantNormal);
        if group.is_right_invariant() {
            out.push(Hypothesis::RightInvariantNormal);
        }
    }
    if group.is_right_h_invariant(h) {
        out.push(Hypothesis::LeftInvariantRightHInvariant);
    }
    out
}

/// Left cosets gH with the quotient distance
/// D(gH, fH) = min over h1, h2 of d(g h1, f h2).
#[derive(Debug, Clone)]
pub struct QuotientStructure {
    /// Cosets as sorted element lists, ordered by least element.
    pub cosets: Vec<Vec<usize>>,
    pub coset_of: Vec<usize>,
    pub dist: Vec<Vec<Rational>>,
    pub normal: bool,
    pub hypotheses: Vec<Hypothesis>,
    /// Triangle or axiom failures of D; empty whenever a hypothesis holds.
    pub metric_violations: Vec<Violation>,
    space: Option<Arc<Space<Rational>>>,
}

impl QuotientStructure {
    pub fn new(group: &FiniteMetricGroup, h: &Subgroup) -> Result<Self> {
        let n = group.order();
        let mut coset_of = vec![usize::MAX; n];
        let mut cosets: Vec<Vec<usize>> = Vec::new();
        for g in 0..n {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let mut coset: Vec<usize> = h.elements().iter().map(|&k| group.mul(g, k)).collect();
            coset.sort_unstable();
            let id = cosets.len();
            for &x in &coset {
                coset_of[x] = id;
            }
            cosets.push(coset);
        }
        let m = cosets.len();
        let mut dist = vec![vec![Rational::zero(); m]; m];
        for a in 0..m {
            for b in (a + 1)..m {
                let d = cosets[a]
                    .iter()
                    .flat_map(|&x| cosets[b].iter().map(move |&y| group.dist(x, y).clone()))
                    .min()
                    .expect("cosets are nonempty");
                dist[a][b] = d.clone();
                dist[b][a] = d;
            }
        }
        let labels: Vec<String> = cosets
            .iter()
            .map(|c| format!("[{}]", group.label(c[0])))
            .collect();
        let base = labels[coset_of[group.identity()]].clone();
        let space = Space::new(labels, &base, dist.clone())?;
        let metric_violations = space.validate_exact();
        Ok(QuotientStructure {
            cosets,
            coset_of,
            dist,
            normal: h.is_normal(group),
            hypotheses: detect_hypotheses(group, h),
            space: if metric_violations.is_empty() { Some(Arc::new(space)) } else { None },
            metric_violations,
        })
    }

    pub fn coset_count(&self) -> usize {
        self.cosets.len()
    }

    /// The quotient as a pointed metric space, available iff D is a metric.
    pub fn space(&self) -> Option<&Arc<Space<Rational>>> {
        self.space.as_ref()
    }
}

/// Which side the averaging translates on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ProjectionFormula {
    /// P'(g) = (1/|H|) sum_h (delta(g h) - delta(h)); needs right-invariance
    /// of d under H (hypothesis (ii) or (iii)).
    RightTranslate,
    /// P'(g) = (1/|H|) sum_h (delta(h g) - delta(h)); the normal-subgroup
    /// case (hypothesis (i)).
    LeftTranslate,
}

/// The Haar-averaging projection: exact rational molecules P'(g) for every
/// g, extended linearly to the free space.
#[derive(Debug, Clone)]
pub struct AveragingProjection {
    group: Arc<FiniteMetricGroup>,
    subgroup: Subgroup,
    formula: ProjectionFormula,
    hypotheses: Vec<Hypothesis>,
    images: Vec<Molecule>,
}

impl AveragingProjection {
    /// Picks right translation whenever (ii) or (iii) admits it, falling
    /// back to left translation for the normal-subgroup case (i).
    pub fn new(group: &Arc<FiniteMetricGroup>, h: &Subgroup) -> Result<Self> {
        let hypotheses = detect_hypotheses(group, h);
        if hypotheses.is_empty() {
            let mut why = vec!["d is left-invariant".to_string()];
            why.push(if h.is_normal(group) {
                "H is normal".into()
            } else {
                "H is not normal".into()
            });
            why.push(if group.is_right_invariant() {
                "d is right-invariant".into()
            } else {
                "d is not right-invariant".into()
            });
            why.push(if group.is_right_h_invariant(h) {
                "d is right H-invariant".into()
            } else {
                "d is not right H-invariant".into()
            });
            return Err(Error::NoHypothesis(why.join("; ")));
        }
        let formula = if hypotheses.contains(&Hypothesis::RightInvariantNormal)
            || hypotheses.contains(&Hypothesis::LeftInvariantRightHInvariant)
        {
            ProjectionFormula::RightTranslate
        } else {
            ProjectionFormula::LeftTranslate
        };
        Self::with_formula(group, h, formula)
    }

    /// Builds with an explicit formula, provided some hypothesis admitting it
    /// holds.
    pub fn with_formula(
        group: &Arc<FiniteMetricGroup>,
        h: &Subgroup,
        formula: ProjectionFormula,
    ) -> Result<Self> {
        let hypotheses = detect_hypotheses(group, h);
        let admissible = match formula {
            ProjectionFormula::RightTranslate => {
                hypotheses.contains(&Hypothesis::RightInvariantNormal)
                    || hypotheses.contains(&Hypothesis::LeftInvariantRightHInvariant)
            }
            ProjectionFormula::LeftTranslate => {
                hypotheses.contains(&Hypothesis::LeftInvariantNormal)
            }
        };
        if !admissible {
            return Err(Error::NoHypothesis(format!(
                "{formula:?} is not admissible; hypotheses holding: {hypotheses:?}"
            )));
        }
        let n = group.order();
        let weight = Rational::new(1.into(), (h.len() as i64).into());
        let images = (0..n)
            .map(|g| {
                let mut terms = Vec::with_capacity(2 * h.len());
                for &k in h.elements() {
                    let translated = match formula {
                        ProjectionFormula::RightTranslate => group.mul(g, k),
                        ProjectionFormula::LeftTranslate => group.mul(k, g),
                    };
                    terms.push((translated, weight.clone()));
                    terms.push((k, -weight.clone()));
                }
                Molecule::new(group.space().clone(), terms)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AveragingProjection {
            group: group.clone(),
            subgroup: h.clone(),
            formula,
            hypotheses,
            images,
        })
    }

    pub fn formula(&self) -> ProjectionFormula {
        self.formula
    }

    pub fn hypotheses(&self) -> &[Hypothesis] {
        &self.hypotheses
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    /// P'(g) as a molecule.
    pub fn image_of_delta(&self, g: usize) -> &Molecule {
        &self.images[g]
    }

    /// Linear extension to molecules.
    pub fn apply(&self, m: &Molecule) -> Molecule {
        let mut acc = Molecule::zero(self.group.space().clone());
        for (&g, c) in m.coeffs() {
            acc = acc.add(&self.images[g].scale(c));
        }
        acc
    }
}

/// Findings for one projection formula.
#[derive(Debug, Clone, Serialize)]
pub struct ProjectionAudit {
    pub formula: ProjectionFormula,
    /// P(P(delta(g))) = P(delta(g)) for every g, exactly.
    pub idempotent: bool,
    /// P'(g) = P'(g k) for every g and k in H.
    pub constant_on_cosets: bool,
    /// Exact Lipschitz constant of g -> P'(g); by the lift-norm identity
    /// this is the operator norm of P.
    pub lip: String,
    /// 1 for a proper nontrivial quotient, 0 when H = G, 1 when H trivial.
    pub lip_expected: String,
    pub lip_ok: bool,
    /// kr_norm(P'(g1) - P'(g2)) = D(g1 H, g2 H) on all coset pairs.
    pub isometry_ok: bool,
}

/// Full audit of Prop-style claims for (G, d, H).
#[derive(Debug, Clone, Serialize)]
pub struct QuotientAuditReport {
    pub group_order: usize,
    pub subgroup_order: usize,
    pub coset_count: usize,
    pub normal: bool,
    pub hypotheses: Vec<Hypothesis>,
    /// D is a metric (no violations); expected whenever a hypothesis holds.
    pub quotient_metric_ok: bool,
    pub audits: Vec<ProjectionAudit>,
}

impl QuotientAuditReport {
    pub fn all_ok(&self) -> bool {
        self.quotient_metric_ok
            && !self.audits.is_empty()
            && self.audits.iter().all(|a| {
                a.idempotent && a.constant_on_cosets && a.lip_ok && a.isometry_ok
            })
    }
}

/// Runs every admissible formula through the exact audit.
pub fn audit_projection(group: &Arc<FiniteMetricGroup>, h: &Subgroup) -> Result<QuotientAuditReport> {
    let quotient = QuotientStructure::new(group, h)?;
    if quotient.hypotheses.is_empty() {
        // Propagate the diagnostic from the constructor path.
        AveragingProjection::new(group, h)?;
        unreachable!("constructor rejects when no hypothesis holds");
    }
    let mut audits = Vec::new();
    for formula in [ProjectionFormula::RightTranslate, ProjectionFormula::LeftTranslate] {
        let proj = match AveragingProjection::with_formula(group, h, formula) {
            Ok(p) => p,
            Err(Error::NoHypothesis(_)) => continue,
            Err(e) => return Err(e),
        };
        audits.push(audit_one(group, h, &quotient, &proj)?);
    }
    Ok(QuotientAuditReport {
        group_order: group.order(),
        subgroup_order: h.len(),
        coset_count: quotient.coset_count(),
        normal: quotient.normal,
        hypotheses: quotient.hypotheses.clone(),
        quotient_metric_ok: quotient.metric_violations.is_empty(),
        audits,
    })
}

fn audit_one(
    group: &Arc<FiniteMetricGroup>,
    h: &Subgroup,
    quotient: &QuotientStructure,
    proj: &AveragingProjection,
) -> Result<ProjectionAudit> {
    let n = group.order();

    let idempotent = (0..n).all(|g| proj.apply(proj.image_of_delta(g)) == *proj.image_of_delta(g));

    let constant_on_cosets = (0..n).all(|g| {
        h.elements().iter().all(|&k| {
            let mate = match proj.formula() {
                ProjectionFormula::RightTranslate => group.mul(g, k),
                ProjectionFormula::LeftTranslate => group.mul(k, g),
            };
            proj.image_of_delta(mate) == proj.image_of_delta(g)
        })
    });

    // Exact Lipschitz constant of g -> P'(g): max over pairs of
    // ||P'(g) - P'(f)|| / d(g, f). Pairs are independent; the max reduction
    // is order-free.
    use rayon::prelude::*;
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|g| ((g + 1)..n).map(move |f| (g, f))).collect();
    let ratios = pairs
        .par_iter()
        .map(|&(g, f)| {
            kr_norm(&proj.image_of_delta(g).sub(proj.image_of_delta(f)))
                .map(|cert| cert.value / group.dist(g, f))
        })
        .collect::<Result<Vec<Rational>>>()?;
    let lip = ratios.into_iter().max().unwrap_or_else(Rational::zero);
    let expected = if quotient.coset_count() == 1 {
        Rational::zero()
    } else {
        Rational::from_integer(1.into())
    };
    let lip_ok = lip == expected;

    let m = quotient.coset_count();
    let coset_pairs: Vec<(usize, usize)> =
        (0..m).flat_map(|a| ((a + 1)..m).map(move |b| (a, b))).collect();
    let isometry_ok = coset_pairs
        .par_iter()
        .map(|&(a, b)| {
            let ga = quotient.cosets[a][0];
            let gb = quotient.cosets[b][0];
            kr_norm(&proj.image_of_delta(ga).sub(proj.image_of_delta(gb)))
                .map(|cert| cert.value == quotient.dist[a][b])
        })
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .all(|ok| ok);

    Ok(ProjectionAudit {
        formula: proj.formula(),
        idempotent,
        constant_on_cosets,
        lip: format_rational(&lip),
        lip_expected: format_rational(&expected),
        lip_ok,
        isometry_ok,
    })
}

/// One level of a quotient tower.
#[derive(Debug, Clone, Serialize)]
pub struct TowerLevel {
    pub subgroup_order: usize,
    /// diam_D(H_n) for the bi-invariant majorant D.
    pub eps: String,
    pub error: String,
    pub bound: String,
    pub within_bound: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TowerReport {
    pub levels: Vec<TowerLevel>,
    pub final_error_zero: bool,
    pub all_within_bound: bool,
}

/// Exact error decay along a decreasing subgroup chain ending at the trivial
/// subgroup: at each level, ||m - P_n m|| <= 2 (sum |alpha_i|) eps_n with
/// eps_n the majorant diameter of H_n, and the final error is zero.
pub fn tower_convergence(
    group: &Arc<FiniteMetricGroup>,
    chain: &[Subgroup],
    m: &Molecule,
) -> Result<TowerReport> {
    if chain.is_empty() {
        return Err(Error::OutOfRange("tower chain is empty".into()));
    }
    for w in chain.windows(2) {
        if !w[1].is_proper_subset_of(&w[0]) {
            return Err(Error::OutOfRange(
                "tower chain must be strictly decreasing".into(),
            ));
        }
    }
    if chain.last().unwrap().elements() != [group.identity()] {
        return Err(Error::OutOfRange("tower chain must end at the trivial subgroup".into()));
    }

    let majorant = biinvariant_majorant(group)?;
    let alpha_sum = m.coeff_abs_sum();
    let two = Rational::from_integer(2.into());

    let mut levels = Vec::with_capacity(chain.len());
    let mut final_error_zero = false;
    for (level, h) in chain.iter().enumerate() {
        let mut eps = Rational::zero();
        for &a in h.elements() {
            for &b in h.elements() {
                if majorant.dist(a, b) > &eps {
                    eps = majorant.dist(a, b).clone();
                }
            }
        }
        let proj = AveragingProjection::new(group, h)?;
        let error = kr_norm(&m.sub(&proj.apply(m)))?.value;
        let bound = &two * &alpha_sum * &eps;
        if level == chain.len() - 1 {
            final_error_zero = error.is_zero();
        }
        levels.push(TowerLevel {
            subgroup_order: h.len(),
            eps: format_rational(&eps),
            error: format_rational(&error),
            bound: format_rational(&bound),
            within_bound: error <= bound,
        });
    }
    Ok(TowerReport {
        all_within_bound: levels.iter().all(|l| l.within_bound),
        final_error_zero,
        levels,
    })
}

/// Multiplication table and labels of the dihedral group of order 2n,
/// elements s^b r^k with b in {0, 1} and k mod n, index b n + k.
pub fn dihedral_table(n: usize) -> (Vec<Vec<usize>>, Vec<String>) {
    assert!(n >= 1);
    let idx = |b: usize, k: usize| b * n + k;
    let mut table = vec![vec![0; 2 * n]; 2 * n];
    for b1 in 0..2 {
        for k1 in 0..n {
            for b2 in 0..2 {
                for k2 in 0..n {
                    // s^b1 r^k1 s^b2 r^k2 = s^(b1+b2) r^(k1 (-1)^b2 + k2)
                    let b = (b1 + b2) % 2;
                    let k = if b2 == 1 { (n - k1) % n + k2 } else { k1 + k2 } % n;
                    table[idx(b1, k1)][idx(b2, k2)] = idx(b, k % n);
                }
            }
        }
    }
    let mut labels = Vec::with_capacity(2 * n);
    for b in 0..2usize {
        for k in 0..n {
            labels.push(match (b, k) {
                (0, 0) => "1".to_string(),
                (0, 1) => "r".to_string(),
                (0, _) => format!("r{k}"),
                (1, 0) => "s".to_string(),
                (1, 1) => "sr".to_string(),
                _ => format!("sr{k}"),
            });
        }
    }
    (table, labels)
}

/// Multiplication table of a direct product, element (i, j) at index
/// i * |B| + j.
pub fn direct_product_table(a: &[Vec<usize>], b: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let (na, nb) = (a.len(), b.len());
    let mut table = vec![vec![0; na * nb]; na * nb];
    for i1 in 0..na {
        for j1 in 0..nb {
            for i2 in 0..na {
                for j2 in 0..nb {
                    table[i1 * nb + j1][i2 * nb + j2] = a[i1][i2] * nb + b[j1][j2];
                }
            }
        }
    }
    table
}

/// Multiplication table and labels of the symmetric group on n letters;
/// elements are the permutations of 0..n in lexicographic order, composed as
/// (p * q)(i) = p(q(i)), labelled by one-line notation.
pub fn symmetric_table(n: usize) -> (Vec<Vec<usize>>, Vec<String>) {
    assert!((1..=5).contains(&n), "symmetric_table is for small n");
    let mut perms: Vec<Vec<usize>> = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        perms.push(p.clone());
        // next lexicographic permutation
        let Some(i) = (0..n - 1).rev().find(|&i| p[i] < p[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
        p.swap(i, j);
        p[i + 1..].reverse();
    }
    let find = |q: &[usize]| perms.iter().position(|r| r == q).unwrap();
    let table = perms
        .iter()
        .map(|a| {
            perms
                .iter()
                .map(|b| {
                    let composed: Vec<usize> = (0..n).map(|i| a[b[i]]).collect();
                    find(&composed)
                })
                .collect()
        })
        .collect();
    let labels = perms
        .iter()
        .map(|q| q.iter().map(|&x| (x + 1).to_string()).collect::<String>())
        .collect();
    (table, labels)
}

/// Parity of a permutation in one-line notation (true = even).
pub fn permutation_is_even(p: &[usize]) -> bool {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in (i + 1)..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 0
}
