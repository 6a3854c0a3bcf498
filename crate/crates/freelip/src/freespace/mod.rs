//! Exact Kantorovich-Rubinstein norms of finitely supported molecules.
//!
//! The free-space norm of a molecule over a finite pointed metric space is a
//! transportation cost: positive mass ships to negative mass, with the
//! basepoint absorbing any imbalance for free (delta at the basepoint is the
//! zero vector). [`kr_norm`] solves that problem with exact rational
//! pivoting and returns both certificates: an optimal flow and a 1-Lipschitz
//! dual witness vanishing at the basepoint, agreeing exactly.
//!
//! [`brute_force_norm`] is an independent oracle for small supports; it
//! never touches the simplex code path.

mod oracle;
mod transport;

pub use oracle::brute_force_norm;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use serde::ser::SerializeMap;
use serde::Serialize;

use crate::metric::{MetricScalar, Space};
use crate::scalar::{format_rational, rational_from_f64, Rational};
use crate::{Error, Result};

/// A finitely supported signed rational combination of point evaluations.
/// The basepoint never carries a coefficient: it is dropped on construction
/// and by every operation.
#[derive(Debug, Clone, PartialEq)]
pub struct Molecule<S: MetricScalar = Rational> {
    space: Arc<Space<S>>,
    coeffs: BTreeMap<usize, Rational>,
}

impl<S: MetricScalar> Molecule<S> {
    pub fn new(
        space: Arc<Space<S>>,
        coeffs: impl IntoIterator<Item = (usize, Rational)>,
    ) -> Result<Self> {
        let mut normalized = BTreeMap::new();
        for (i, c) in coeffs {
            if i >= space.len() {
                return Err(Error::OutOfRange(format!(
                    "point index {i} out of range for a {}-point space",
                    space.len()
                )));
            }
            if i == space.basepoint() || c.is_zero() {
                continue;
            }
            let entry = normalized.entry(i).or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                normalized.remove(&i);
            }
        }
        Ok(Molecule { space, coeffs: normalized })
    }

    pub fn zero(space: Arc<Space<S>>) -> Self {
        Molecule { space, coeffs: BTreeMap::new() }
    }

    /// The evaluation molecule delta(x). delta(basepoint) is the zero molecule.
    pub fn delta(space: Arc<Space<S>>, i: usize) -> Result<Self> {
        Molecule::new(space, [(i, Rational::from_integer(1.into()))])
    }

    /// delta(x) - delta(y).
    pub fn pair(space: Arc<Space<S>>, x: usize, y: usize) -> Result<Self> {
        Molecule::new(
            space,
            [
                (x, Rational::from_integer(1.into())),
                (y, Rational::from_integer((-1).into())),
            ],
        )
    }

    pub fn space(&self) -> &Arc<Space<S>> {
        &self.space
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, Rational> {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(&i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn support(&self) -> Vec<usize> {
        self.coeffs.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Sum of |coefficients|.
    pub fn coeff_abs_sum(&self) -> Rational {
        self.coeffs.values().map(|c| c.abs()).sum()
    }

    fn same_space(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.space, &other.space) || self.space == other.space
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(self.same_space(other), "molecules live over different spaces");
        let mut coeffs = self.coeffs.clone();
        for (&i, c) in &other.coeffs {
            let entry = coeffs.entry(i).or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                coeffs.remove(&i);
            }
        }
        Molecule { space: self.space.clone(), coeffs }
    }

    pub fn neg(&self) -> Self {
        Molecule {
            space: self.space.clone(),
            coeffs: self.coeffs.iter().map(|(&i, c)| (i, -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, by: &Rational) -> Self {
        if by.is_zero() {
            return Molecule::zero(self.space.clone());
        }
        Molecule {
            space: self.space.clone(),
            coeffs: self.coeffs.iter().map(|(&i, c)| (i, c * by)).collect(),
        }
    }

    /// Pushforward along a point map fixing the basepoint: coefficients move
    /// to image points, anything landing on the basepoint is dropped.
    pub fn pushforward(&self, map: impl Fn(usize) -> usize) -> Result<Self> {
        Molecule::new(
            self.space.clone(),
            self.coeffs.iter().map(|(&i, c)| (map(i), c.clone())),
        )
    }
}

impl Molecule<Rational> {
    /// Serializes coefficients keyed by point name, values as "p/q".
    pub fn to_json(&self) -> serde_json::Value {
        let coeffs: serde_json::Map<String, serde_json::Value> = self
            .coeffs
            .iter()
            .map(|(&i, c)| {
                (
                    self.space.point_name(i).to_string(),
                    serde_json::Value::String(format_rational(c)),
                )
            })
            .collect();
        serde_json::json!({ "coeffs": coeffs })
    }
}

/// Optimal flow plus dual witness proving a free-space norm value.
#[derive(Debug, Clone)]
pub struct TransportCertificate {
    pub value: Rational,
    /// (source point, sink point, mass) with positive mass; the basepoint may
    /// appear at either end.
    pub flow: Vec<(usize, usize, Rational)>,
    /// 1-Lipschitz function on support and basepoint, zero at the basepoint,
    /// pairing with the molecule to exactly `value`.
    pub dual_witness: BTreeMap<usize, Rational>,
}

impl TransportCertificate {
    /// Checks every certificate invariant exactly: flow conservation at all
    /// non-basepoint points, the 1-Lipschitz condition for the witness, and
    /// strong duality (flow cost = value = dual pairing).
    pub fn verify(&self, m: &Molecule<Rational>) -> Result<()> {
        let space = m.space();
        let bp = space.basepoint();
        let fail = |msg: String| Err(Error::Convergence(format!("certificate invalid: {msg}")));

        let mut net: BTreeMap<usize, Rational> = BTreeMap::new();
        let mut cost = Rational::zero();
        for (s, t, q) in &self.flow {
            if q <= &Rational::zero() {
                return fail("non-positive flow mass".into());
            }
            *net.entry(*s).or_insert_with(Rational::zero) += q;
            *net.entry(*t).or_insert_with(Rational::zero) -= q;
            cost += q * space.dist(*s, *t);
        }
        for (&x, outflow) in &net {
            if x == bp {
                continue;
            }
            if *outflow != m.coeff(x) {
                return fail(format!("flow does not conserve mass at {}", space.point_name(x)));
            }
        }
        for (&x, c) in m.coeffs() {
            if !net.contains_key(&x) && !c.is_zero() {
                return fail(format!("no flow at supported point {}", space.point_name(x)));
            }
        }
        if cost != self.value {
            return fail("flow cost differs from claimed value".into());
        }

        match self.dual_witness.get(&bp) {
            Some(w) if w.is_zero() => {}
            _ => return fail("witness must vanish at the basepoint".into()),
        }
        let keys: Vec<usize> = self.dual_witness.keys().copied().collect();
        for (a, &x) in keys.iter().enumerate() {
            for &y in &keys[a + 1..] {
                let diff = (&self.dual_witness[&x] - &self.dual_witness[&y]).abs();
                if &diff > space.dist(x, y) {
                    return fail(format!(
                        "witness is not 1-Lipschitz on ({}, {})",
                        space.point_name(x),
                        space.point_name(y)
                    ));
                }
            }
        }
        let pairing: Rational = m
            .coeffs()
            .iter()
            .map(|(&i, c)| {
                c * self
                    .dual_witness
                    .get(&i)
                    .cloned()
                    .unwrap_or_else(Rational::zero)
            })
            .sum();
        if pairing != self.value {
            return fail("dual pairing differs from claimed value".into());
        }
        Ok(())
    }

    pub fn to_json(&self, space: &Space<Rational>) -> serde_json::Value {
        let flow: Vec<serde_json::Value> = self
            .flow
            .iter()
            .map(|(s, t, q)| {
                serde_json::json!([
                    space.point_name(*s),
                    space.point_name(*t),
                    format_rational(q)
                ])
            })
            .collect();
        let witness: serde_json::Map<String, serde_json::Value> = self
            .dual_witness
            .iter()
            .map(|(&i, w)| {
                (
                    space.point_name(i).to_string(),
                    serde_json::Value::String(format_rational(w)),
                )
            })
            .collect();
        serde_json::json!({
            "value": format_rational(&self.value),
            "flow": flow,
            "dual_witness": witness,
        })
    }
}

impl Serialize for TransportCertificate {
    fn serialize<Se: serde::Serializer>(&self, ser: Se) -> std::result::Result<Se::Ok, Se::Error> {
        let mut map = ser.serialize_map(Some(3))?;
        map.serialize_entry("value", &format_rational(&self.value))?;
        let flow: Vec<(usize, usize, String)> = self
            .flow
            .iter()
            .map(|(s, t, q)| (*s, *t, format_rational(q)))
            .collect();
        map.serialize_entry("flow", &flow)?;
        let witness: BTreeMap<usize, String> = self
            .dual_witness
            .iter()
            .map(|(&i, w)| (i, format_rational(w)))
            .collect();
        map.serialize_entry("dual_witness", &witness)?;
        map.end()
    }
}

/// Exact free-space norm with verified certificates. Molecules over float
/// spaces are rejected at the type level; use [`kr_norm_float`].
pub fn kr_norm(m: &Molecule<Rational>) -> Result<TransportCertificate> {
    let space = m.space();
    let bp = space.basepoint();

    let mut sources: Vec<(usize, Rational)> = Vec::new();
    let mut sinks: Vec<(usize, Rational)> = Vec::new();
    let mut imbalance = Rational::zero();
    for (&i, c) in m.coeffs() {
        imbalance += c;
        if c.is_positive() {
            sources.push((i, c.clone()));
        } else {
            sinks.push((i, -c.clone()));
        }
    }
    if imbalance.is_positive() {
        sinks.push((bp, imbalance.clone()));
    } else if imbalance.is_negative() {
        sources.push((bp, -imbalance.clone()));
    }
    if sources.is_empty() {
        // Zero molecule.
        let cert = TransportCertificate {
            value: Rational::zero(),
            flow: Vec::new(),
            dual_witness: BTreeMap::from([(bp, Rational::zero())]),
        };
        cert.verify(m)?;
        return Ok(cert);
    }

    let cost: Vec<Vec<Rational>> = sources
        .iter()
        .map(|&(p, _)| sinks.iter().map(|&(n, _)| space.dist(p, n).clone()).collect())
        .collect();
    let supplies: Vec<Rational> = sources.iter().map(|(_, q)| q.clone()).collect();
    let demands: Vec<Rational> = sinks.iter().map(|(_, q)| q.clone()).collect();
    let sol = transport::solve(&cost, &supplies, &demands)?;

    // Strong duality of the bipartite program, exact.
    let dual_objective: Rational = sol.u.iter().zip(&supplies).map(|(u, s)| u * s).sum::<Rational>()
        + sol.v.iter().zip(&demands).map(|(v, t)| v * t).sum::<Rational>();
    if dual_objective != sol.cost {
        return Err(Error::Convergence(
            "simplex potentials do not certify the primal cost".into(),
        ));
    }

    let flow = sol
        .flows
        .iter()
        .map(|(i, j, q)| (sources[*i].0, sinks[*j].0, q.clone()))
        .collect();

    // Dual potentials give f(source_i) = u_i, f(sink_j) = -v_j, feasible on
    // source-sink pairs only. The lower envelope of sink cones
    //   g(x) = min_j f(sink_j) + d(x, sink_j)
    // is 1-Lipschitz on the whole space, matches or improves the pairing,
    // and by weak duality cannot exceed the optimum, so after recentering at
    // the basepoint it pairs to exactly the optimal value.
    let f_sink: Vec<Rational> = sol.v.iter().map(|v| -v.clone()).collect();
    let envelope = |x: usize| -> Rational {
        sinks
            .iter()
            .zip(&f_sink)
            .map(|(&(n, _), fv)| fv + space.dist(x, n))
            .min()
            .expect("at least one sink when sources exist")
    };
    let at_bp = envelope(bp);
    let mut dual_witness = BTreeMap::from([(bp, Rational::zero())]);
    for &i in m.support().iter() {
        dual_witness.insert(i, envelope(i) - &at_bp);
    }

    let cert = TransportCertificate { value: sol.cost, flow, dual_witness };
    cert.verify(m)?;
    Ok(cert)
}

/// Norm certificate for a molecule over a float-valued space.
#[derive(Debug, Clone, Serialize)]
pub struct FloatCertificate {
    /// Midpoint of the primal and dual values.
    pub value: f64,
    /// |primal - dual| after float evaluation.
    pub gap: f64,
    pub flow: Vec<(usize, usize, f64)>,
    pub dual_witness: BTreeMap<usize, f64>,
}

/// Free-space norm over a float space. Every finite f64 distance is a dyadic
/// rational, so the instance is rationalized exactly and solved by the exact
/// simplex; the reported gap is pure float-evaluation rounding and must land
/// under `tol`.
pub fn kr_norm_float(m: &Molecule<f64>, tol: f64) -> Result<FloatCertificate> {
    if tol <= 0.0 {
        return Err(Error::OutOfRange(format!("tolerance must be positive, got {tol}")));
    }
    let space = m.space();
    let bp = space.basepoint();

    // Subspace on support + basepoint, distances converted exactly.
    let mut nodes: Vec<usize> = m.support();
    if !nodes.contains(&bp) {
        nodes.insert(0, bp);
    }
    let names: Vec<String> = nodes.iter().map(|&i| space.point_name(i).to_string()).collect();
    let mut table = vec![vec![Rational::zero(); nodes.len()]; nodes.len()];
    for (a, &x) in nodes.iter().enumerate() {
        for (b, &y) in nodes.iter().enumerate() {
            if a != b {
                table[a][b] = rational_from_f64(*space.dist(x, y))?;
            }
        }
    }
    let sub = Arc::new(Space::new(names, space.point_name(bp), table)?);
    let coeffs: Vec<(usize, Rational)> = m
        .coeffs()
        .iter()
        .map(|(&i, c)| {
            (
                nodes.iter().position(|&n| n == i).expect("support is in nodes"),
                c.clone(),
            )
        })
        .collect();
    let sub_mol = Molecule::new(sub, coeffs)?;
    let cert = kr_norm(&sub_mol)?;

    // Re-evaluate both sides in floats over the original space.
    let primal: f64 = cert
        .flow
        .iter()
        .map(|(s, t, q)| q.to_f64().unwrap() * space.dist(nodes[*s], nodes[*t]))
        .sum();
    let dual: f64 = cert
        .dual_witness
        .iter()
        .map(|(&i, w)| m.coeff(nodes[i]).to_f64().unwrap() * w.to_f64().unwrap())
        .sum();
    let gap = (primal - dual).abs();
    if gap > tol {
        return Err(Error::Convergence(format!(
            "primal/dual float gap {gap} exceeds tolerance {tol}"
        )));
    }
    Ok(FloatCertificate {
        value: 0.5 * (primal + dual),
        gap,
        flow: cert
            .flow
            .iter()
            .map(|(s, t, q)| (nodes[*s], nodes[*t], q.to_f64().unwrap()))
            .collect(),
        dual_witness: cert
            .dual_witness
            .iter()
            .map(|(&i, w)| (nodes[i], w.to_f64().unwrap()))
            .collect(),
    })
}

use num_traits::ToPrimitive;

/// Exact Lipschitz constant of a point map between rational spaces:
/// max over pairs of d(map x, map y) / d(x, y). The identity gives 1,
/// constant maps give 0.
pub fn lip_constant(map: &[usize], domain: &Space<Rational>, codomain: &Space<Rational>) -> Rational {
    assert_eq!(map.len(), domain.len(), "map must be total on the domain");
    assert!(map.iter().all(|&i| i < codomain.len()), "map must land in the codomain");
    let mut best = Rational::zero();
    for x in 0..domain.len() {
        for y in (x + 1)..domain.len() {
            let num = codomain.dist(map[x], map[y]);
            let den = domain.dist(x, y);
            // num/den > best  <=>  num > best * den (den > 0)
            if num > &(&best * den) {
                best = num / den;
            }
        }
    }
    best
}
