//! Pointed finite metric spaces and the hyperboloid model.
//!
//! A [`Space`] carries a distance table over named points with one
//! distinguished basepoint. Distances are either exact rationals (group and
//! quotient constructions) or floats (hyperbolic nets, harmonic grids); the
//! two kinds never mix inside one space.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::scalar::{format_rational, parse_rational, Rational};
use crate::{Error, Result};

/// Which scalar kind a space's distance table uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarKind {
    Rational,
    Float,
}

/// Scalar admissible as a distance value.
pub trait MetricScalar: Clone + PartialEq + PartialOrd + Send + Sync {
    fn kind() -> ScalarKind;
    fn zero_val() -> Self;
    fn sum(a: &Self, b: &Self) -> Self;
    /// `a <= b`, with slack `tol` for the float kind (rationals compare exactly).
    fn leq(a: &Self, b: &Self, tol: f64) -> bool;
    fn eq_tol(a: &Self, b: &Self, tol: f64) -> bool;
    fn positive(a: &Self) -> bool;
    fn as_f64(&self) -> f64;
}

impl MetricScalar for Rational {
    fn kind() -> ScalarKind {
        ScalarKind::Rational
    }
    fn zero_val() -> Self {
        Rational::zero()
    }
    fn sum(a: &Self, b: &Self) -> Self {
        a + b
    }
    fn leq(a: &Self, b: &Self, _tol: f64) -> bool {
        a <= b
    }
    fn eq_tol(a: &Self, b: &Self, _tol: f64) -> bool {
        a == b
    }
    fn positive(a: &Self) -> bool {
        a.is_positive()
    }
    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl MetricScalar for f64 {
    fn kind() -> ScalarKind {
        ScalarKind::Float
    }
    fn zero_val() -> Self {
        0.0
    }
    fn sum(a: &Self, b: &Self) -> Self {
        a + b
    }
    fn leq(a: &Self, b: &Self, tol: f64) -> bool {
        *a <= *b + tol
    }
    fn eq_tol(a: &Self, b: &Self, tol: f64) -> bool {
        (a - b).abs() <= tol
    }
    fn positive(a: &Self) -> bool {
        *a > 0.0
    }
    fn as_f64(&self) -> f64 {
        *self
    }
}

/// Default comparison slack for float-valued spaces.
pub const FLOAT_METRIC_TOL: f64 = 1e-9;

/// A finite metric space with a distinguished basepoint.
#[derive(Debug, Clone)]
pub struct Space<S: MetricScalar> {
    points: Vec<String>,
    basepoint: usize,
    dist: Vec<Vec<S>>,
    index: HashMap<String, usize>,
}

impl<S: MetricScalar> PartialEq for Space<S> {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points && self.basepoint == other.basepoint && self.dist == other.dist
    }
}

impl<S: MetricScalar> Space<S> {
    /// Builds a space from named points, the basepoint's name, and a full
    /// distance table. Checks shape only; metric axioms are checked by
    /// [`Space::validate`].
    pub fn new(points: Vec<String>, basepoint: &str, dist: Vec<Vec<S>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidSpace("no points".into()));
        }
        let mut index = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            if index.insert(p.clone(), i).is_some() {
                return Err(Error::InvalidSpace(format!("duplicate point id {p:?}")));
            }
        }
        let basepoint = *index
            .get(basepoint)
            .ok_or_else(|| Error::InvalidSpace(format!("basepoint {basepoint:?} not a point")))?;
        if dist.len() != points.len() || dist.iter().any(|row| row.len() != points.len()) {
            return Err(Error::InvalidSpace(format!(
                "distance table must be {n} x {n}",
                n = points.len()
            )));
        }
        Ok(Space {
            points,
            basepoint,
            dist,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn point_name(&self, i: usize) -> &str {
        &self.points[i]
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn dist(&self, i: usize, j: usize) -> &S {
        &self.dist[i][j]
    }

    /// All metric-axiom violations, in point-index order. Empty iff the
    /// table is a genuine metric (within `tol` for float scalars).
    pub fn validate(&self, tol: f64) -> Vec<Violation> {
        let n = self.len();
        let zero = S::zero_val();
        let mut violations = Vec::new();
        for i in 0..n {
            if !S::eq_tol(&self.dist[i][i], &zero, tol) {
                violations.push(Violation::NonzeroDiagonal {
                    point: self.points[i].clone(),
                });
            }
            for j in (i + 1)..n {
                if !S::eq_tol(&self.dist[i][j], &self.dist[j][i], tol) {
                    violations.push(Violation::Asymmetric {
                        a: self.points[i].clone(),
                        b: self.points[j].clone(),
                    });
                }
                if !S::positive(&self.dist[i][j]) {
                    violations.push(Violation::NonPositive {
                        a: self.points[i].clone(),
                        b: self.points[j].clone(),
                    });
                }
            }
        }
        // Triangle sweep is the O(n^3) part; parallelize over the first leg
        // and flatten in index order so the report is deterministic.
        let triangle: Vec<Vec<Violation>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut local = Vec::new();
                for j in 0..n {
                    if j == i {
                        continue;
                    }
                    for k in 0..n {
                        if k == i || k == j {
                            continue;
                        }
                        let via = S::sum(&self.dist[i][j], &self.dist[j][k]);
                        if !S::leq(&self.dist[i][k], &via, tol) {
                            local.push(Violation::Triangle {
                                a: self.points[i].clone(),
                                via: self.points[j].clone(),
                                b: self.points[k].clone(),
                            });
                        }
                    }
                }
                local
            })
            .collect();
        violations.extend(triangle.into_iter().flatten());
        violations
    }
}

impl Space<Rational> {
    /// Exact validation (no tolerance enters rational comparisons).
    pub fn validate_exact(&self) -> Vec<Violation> {
        self.validate(0.0)
    }

    /// Convenience constructor from integer distances.
    pub fn from_integer_table(
        points: Vec<String>,
        basepoint: &str,
        dist: Vec<Vec<u64>>,
    ) -> Result<Self> {
        let table = dist
            .into_iter()
            .map(|row| row.into_iter().map(|d| Rational::from_integer(d.into())).collect())
            .collect();
        Space::new(points, basepoint, table)
    }
}

/// A metric-axiom violation; data, not an error.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    NonzeroDiagonal { point: String },
    Asymmetric { a: String, b: String },
    NonPositive { a: String, b: String },
    /// d(a, b) > d(a, via) + d(via, b).
    Triangle { a: String, via: String, b: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonzeroDiagonal { point } => write!(f, "d({point},{point}) != 0"),
            Violation::Asymmetric { a, b } => write!(f, "d({a},{b}) != d({b},{a})"),
            Violation::NonPositive { a, b } => write!(f, "d({a},{b}) <= 0"),
            Violation::Triangle { a, via, b } => {
                write!(f, "triangle failure: d({a},{b}) > d({a},{via}) + d({via},{b})")
            }
        }
    }
}

/// A space of either scalar kind, as read from or written to JSON.
#[derive(Debug, Clone, PartialEq)]
pub enum AnySpace {
    Rational(Arc<Space<Rational>>),
    Float(Arc<Space<f64>>),
}

impl AnySpace {
    pub fn kind(&self) -> ScalarKind {
        match self {
            AnySpace::Rational(_) => ScalarKind::Rational,
            AnySpace::Float(_) => ScalarKind::Float,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            AnySpace::Rational(s) => s.len(),
            AnySpace::Float(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Violations with the default float tolerance.
    pub fn validate(&self) -> Vec<Violation> {
        match self {
            AnySpace::Rational(s) => s.validate(0.0),
            AnySpace::Float(s) => s.validate(FLOAT_METRIC_TOL),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct SpaceWire {
    points: Vec<String>,
    basepoint: String,
    dist: Vec<Vec<serde_json::Value>>,
    scalar: ScalarKind,
}

impl Serialize for AnySpace {
    fn serialize<Se: serde::Serializer>(&self, ser: Se) -> std::result::Result<Se::Ok, Se::Error> {
        let wire = match self {
            AnySpace::Rational(s) => SpaceWire {
                points: s.points.clone(),
                basepoint: s.points[s.basepoint].clone(),
                dist: s
                    .dist
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|d| serde_json::Value::String(format_rational(d)))
                            .collect()
                    })
                    .collect(),
                scalar: ScalarKind::Rational,
            },
            AnySpace::Float(s) => SpaceWire {
                points: s.points.clone(),
                basepoint: s.points[s.basepoint].clone(),
                dist: s
                    .dist
                    .iter()
                    .map(|row| row.iter().map(|d| serde_json::json!(d)).collect())
                    .collect(),
                scalar: ScalarKind::Float,
            },
        };
        wire.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for AnySpace {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = SpaceWire::deserialize(de)?;
        // A rational space must carry only "p/q" strings and a float space
        // only numbers; anything else is a mixed-kind table and is rejected.
        match wire.scalar {
            ScalarKind::Rational => {
                let mut table = Vec::with_capacity(wire.dist.len());
                for row in &wire.dist {
                    let mut out = Vec::with_capacity(row.len());
                    for v in row {
                        match v {
                            serde_json::Value::String(s) => out.push(
                                parse_rational(s).map_err(|e| D::Error::custom(e.to_string()))?,
                            ),
                            other => {
                                return Err(D::Error::custom(format!(
                                    "rational space entry must be a \"p/q\" string, got {other}"
                                )))
                            }
                        }
                    }
                    table.push(out);
                }
                Space::new(wire.points, &wire.basepoint, table)
                    .map(|s| AnySpace::Rational(Arc::new(s)))
                    .map_err(|e| D::Error::custom(e.to_string()))
            }
            ScalarKind::Float => {
                let mut table = Vec::with_capacity(wire.dist.len());
                for row in &wire.dist {
                    let mut out = Vec::with_capacity(row.len());
                    for v in row {
                        match v.as_f64() {
                            Some(x) => out.push(x),
                            None => {
                                return Err(D::Error::custom(format!(
                                    "float space entry must be a number, got {v}"
                                )))
                            }
                        }
                    }
                    table.push(out);
                }
                Space::new(wire.points, &wire.basepoint, table)
                    .map(|s| AnySpace::Float(Arc::new(s)))
                    .map_err(|e| D::Error::custom(e.to_string()))
            }
        }
    }
}

/// Replaces every distance with its alpha-th power. Concavity of t^alpha on
/// alpha in (0,1] preserves the triangle inequality. alpha = 1 returns the
/// space unchanged; otherwise the result is float-valued.
pub fn snowflake(space: &AnySpace, alpha: f64) -> Result<AnySpace> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::OutOfRange(format!(
            "snowflake exponent must lie in (0, 1], got {alpha}"
        )));
    }
    if alpha == 1.0 {
        return Ok(space.clone());
    }
    let (points, basepoint, table) = match space {
        AnySpace::Rational(s) => (
            s.points.clone(),
            s.points[s.basepoint].clone(),
            s.dist
                .iter()
                .map(|row| row.iter().map(|d| d.as_f64().powf(alpha)).collect())
                .collect::<Vec<Vec<f64>>>(),
        ),
        AnySpace::Float(s) => (
            s.points.clone(),
            s.points[s.basepoint].clone(),
            s.dist
                .iter()
                .map(|row| row.iter().map(|d| d.powf(alpha)).collect())
                .collect(),
        ),
    };
    Ok(AnySpace::Float(Arc::new(Space::new(points, &basepoint, table)?)))
}

/// A point on the hyperboloid sheet: quadratic form value -1, last
/// coordinate positive.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperboloidPoint {
    coords: Vec<f64>,
}

/// Tolerance for the hyperboloid sheet constraint.
pub const HYPERBOLOID_TOL: f64 = 1e-12;

impl HyperboloidPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::OutOfRange(
                "hyperboloid point needs at least 2 coordinates".into(),
            ));
        }
        let p = HyperboloidPoint { coords };
        let q = p.form(&p);
        if (q + 1.0).abs() > HYPERBOLOID_TOL {
            return Err(Error::OutOfRange(format!(
                "point not on the hyperboloid: <x,x> = {q}, expected -1"
            )));
        }
        if *p.coords.last().unwrap() <= 0.0 {
            return Err(Error::OutOfRange("last coordinate must be positive".into()));
        }
        Ok(p)
    }

    /// The bilinear form sum_{i<n} x_i y_i - x_n y_n.
    pub fn form(&self, other: &HyperboloidPoint) -> f64 {
        let n = self.coords.len();
        let mut s = 0.0;
        for i in 0..n - 1 {
            s += self.coords[i] * other.coords[i];
        }
        s - self.coords[n - 1] * other.coords[n - 1]
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

/// Hyperbolic distance `arccosh(-<x,y>)`. The argument is clamped to
/// [1, inf) first: rounding can drive -<x,x> to 1 - 1e-16.
pub fn hyperbolic_distance(x: &HyperboloidPoint, y: &HyperboloidPoint) -> Result<f64> {
    if x.coords.len() != y.coords.len() {
        return Err(Error::OutOfRange(format!(
            "dimension mismatch: {} vs {}",
            x.coords.len(),
            y.coords.len()
        )));
    }
    let arg = (-x.form(y)).max(1.0);
    Ok(arg.acosh())
}

/// Greedy scan net: keeps a sample iff it is at distance >= eps from every
/// point kept so far. The first sample is always kept and becomes the
/// basepoint; output is deterministic in sample order.
pub fn greedy_net(samples: &[HyperboloidPoint], eps: f64) -> Result<Space<f64>> {
    if samples.is_empty() {
        return Err(Error::OutOfRange("greedy_net needs at least one sample".into()));
    }
    if eps <= 0.0 {
        return Err(Error::OutOfRange(format!("net separation must be > 0, got {eps}")));
    }
    let mut kept: Vec<(usize, &HyperboloidPoint)> = Vec::new();
    for (i, s) in samples.iter().enumerate() {
        let mut covered = false;
        for &(_, k) in &kept {
            if hyperbolic_distance(s, k)? < eps {
                covered = true;
                break;
            }
        }
        if !covered {
            kept.push((i, s));
        }
    }
    let n = kept.len();
    let mut dist = vec![vec![0.0; n]; n];
    for a in 0..n {
        for b in (a + 1)..n {
            let d = hyperbolic_distance(kept[a].1, kept[b].1)?;
            dist[a][b] = d;
            dist[b][a] = d;
        }
    }
    let points: Vec<String> = kept.iter().map(|(i, _)| format!("p{i}")).collect();
    let basepoint = points[0].clone();
    Space::new(points, &basepoint, dist)
}

/// Pseudorandom hyperboloid points: spatial part uniform in
/// [-spread, spread]^dim, last coordinate solved from the sheet constraint.
/// Fixed seed gives a fixed sample list.
pub fn sample_hyperboloid(dim: usize, count: usize, spread: f64, seed: u64) -> Vec<HyperboloidPoint> {
    assert!(dim >= 1, "hyperboloid dimension must be >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut coords: Vec<f64> = (0..dim).map(|_| rng.gen_range(-spread..spread)).collect();
            let norm_sq: f64 = coords.iter().map(|x| x * x).sum();
            coords.push((1.0 + norm_sq).sqrt());
            HyperboloidPoint::new(coords).expect("constructed point satisfies the sheet constraint")
        })
        .collect()
}
