//! Cesàro-Gegenbauer summability kernels on the 2-sphere.
//!
//! For dimension d = 3 the Gegenbauer weight is Lambda = 1/2, the Gegenbauer
//! polynomials are the Legendre polynomials, and the weighted L^1 norm is
//! (1/2) int_{-1}^{1} |f|. The degree-n Cesàro kernel of order delta is
//!
//! ```text
//! K_n^delta(t) = (1/A_n^delta) sum_{k<=n} A_{n-k}^delta (2k+1) P_k(t)
//! ```
//!
//! with A_k^delta the binomial coefficients C(k + delta, k). Convolving a
//! function on the sphere with this zonal kernel damps its degree-k
//! spherical-harmonic component by A_{n-k}^delta / A_n^delta and kills
//! everything above degree n, so the operator has rank at most (n+1)^2.
//!
//! All polynomial evaluation goes through three-term recurrences; explicit
//! expansions lose too much precision past degree 30.

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::{Error, Result};

/// A_k^delta = C(k + delta, k) via A_k = A_{k-1} (delta + k) / k.
pub fn cesaro_coefficients(delta: f64, n: usize) -> Vec<f64> {
    let mut a = Vec::with_capacity(n + 1);
    a.push(1.0);
    for k in 1..=n {
        let prev = a[k - 1];
        a.push(prev * (delta + k as f64) / k as f64);
    }
    a
}

/// Kernel description: dimension, Cesàro order, degree.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SphereKernelSpec {
    pub dimension: usize,
    pub delta: f64,
    pub degree: usize,
}

impl SphereKernelSpec {
    /// Only d = 3 is supported (Legendre case); the order must satisfy
    /// delta >= d - 1, the nonnegativity threshold.
    pub fn new(dimension: usize, delta: f64, degree: usize) -> Result<Self> {
        if dimension != 3 {
            return Err(Error::Unsupported(format!(
                "sphere kernels are implemented for dimension 3, got {dimension}"
            )));
        }
        if delta < (dimension - 1) as f64 {
            return Err(Error::OutOfRange(format!(
                "Cesàro order must be >= d - 1 = {}, got {delta}",
                dimension - 1
            )));
        }
        Ok(SphereKernelSpec { dimension, delta, degree })
    }

    pub fn lambda(&self) -> f64 {
        (self.dimension as f64 - 2.0) / 2.0
    }

    /// Coefficient of P_k in K_n^delta: A_{n-k} (2k+1) / A_n.
    pub fn legendre_coefficients(&self) -> Vec<f64> {
        let a = cesaro_coefficients(self.delta, self.degree);
        let an = a[self.degree];
        (0..=self.degree)
            .map(|k| a[self.degree - k] * (2 * k + 1) as f64 / an)
            .collect()
    }

    /// Damping factor on degree-k spherical harmonics: A_{n-k} / A_n,
    /// zero beyond the kernel degree.
    pub fn damping(&self) -> Vec<f64> {
        let a = cesaro_coefficients(self.delta, self.degree);
        let an = a[self.degree];
        (0..=self.degree).map(|k| a[self.degree - k] / an).collect()
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1]; exact for polynomials of
/// degree <= 2q - 1.
pub fn gauss_legendre(q: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(q >= 1);
    let mut nodes = vec![0.0; q];
    let mut weights = vec![0.0; q];
    for i in 0..q {
        let mut x = (PI * (i as f64 + 0.75) / (q as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, p_prev) = legendre_pair(q, x);
            let dp = q as f64 * (x * p - p_prev) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (p, p_prev) = legendre_pair(q, x);
        let dp = q as f64 * (x * p - p_prev) / (x * x - 1.0);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        let _ = p;
    }
    // ascending order is handier for reports
    let mut idx: Vec<usize> = (0..q).collect();
    idx.sort_by(|&a, &b| nodes[a].partial_cmp(&nodes[b]).unwrap());
    (
        idx.iter().map(|&i| nodes[i]).collect(),
        idx.iter().map(|&i| weights[i]).collect(),
    )
}

/// (P_q(x), P_{q-1}(x)) by the three-term recurrence.
fn legendre_pair(q: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    if q == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=q {
        let next = ((2 * k - 1) as f64 * x * p - (k - 1) as f64 * p_prev) / k as f64;
        p_prev = p;
        p = next;
    }
    (p, p_prev)
}

/// P_0(x) .. P_n(x).
pub fn legendre_values(n: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n == 0 {
        return out;
    }
    out.push(x);
    for k in 2..=n {
        let next = ((2 * k - 1) as f64 * x * out[k - 1] - (k - 1) as f64 * out[k - 2]) / k as f64;
        out.push(next);
    }
    out
}

/// Kernel values on a Gauss-Legendre rule together with the weighted L^1
/// norm and the observed minimum.
#[derive(Debug, Clone, Serialize)]
pub struct KernelEvaluation {
    pub spec: SphereKernelSpec,
    pub quadrature_points: usize,
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
    /// c_Lambda int |K| w_Lambda; for d = 3 this is (1/2) int |K|.
    pub weighted_l1_norm: f64,
    pub min_value: f64,
}

/// Evaluates K_n^delta on a rule exact for degree 2n polynomials and
/// computes its weighted L^1 norm. The kernel is nonnegative for
/// delta >= d - 1, so the norm equals the unit constant term up to rounding.
pub fn cesaro_kernel(spec: &SphereKernelSpec) -> KernelEvaluation {
    let n = spec.degree;
    let q = n + 4;
    let (nodes, weights) = gauss_legendre(q);
    let coeffs = spec.legendre_coefficients();
    let values: Vec<f64> = nodes
        .par_iter()
        .map(|&x| {
            let p = legendre_values(n, x);
            coeffs.iter().zip(&p).map(|(c, v)| c * v).sum()
        })
        .collect();
    let weighted_l1_norm = 0.5
        * nodes
            .iter()
            .zip(&weights)
            .zip(&values)
            .map(|((_, w), v)| w * v.abs())
            .sum::<f64>();
    let min_value = values.iter().copied().fold(f64::INFINITY, f64::min);
    KernelEvaluation {
        spec: *spec,
        quadrature_points: q,
        nodes,
        values,
        weighted_l1_norm,
        min_value,
    }
}

/// Orthonormalized associated Legendre values Q_km(x) for k <= l_max,
/// m <= k, normalized so int_{-1}^{1} Q_km^2 dx = 1. Row k holds m = 0..k.
pub fn orthonormal_alp(l_max: usize, x: f64) -> Vec<Vec<f64>> {
    let u = (1.0 - x * x).max(0.0).sqrt();
    let mut q = vec![Vec::new(); l_max + 1];
    let mut diag = 1.0 / 2.0f64.sqrt(); // Q_00
    for m in 0..=l_max {
        if m > 0 {
            diag *= u * ((2 * m + 1) as f64 / (2 * m) as f64).sqrt();
        }
        q[m].resize(m + 1, 0.0);
        q[m][m] = diag;
        if m < l_max {
            q[m + 1].resize(m + 2, 0.0);
            q[m + 1][m] = ((2 * m + 3) as f64).sqrt() * x * diag;
        }
        for k in (m + 2)..=l_max {
            let kk = k as f64;
            let mm = m as f64;
            let a = ((4.0 * kk * kk - 1.0) / (kk * kk - mm * mm)).sqrt();
            let b = (((kk - 1.0) * (kk - 1.0) - mm * mm) / (4.0 * (kk - 1.0) * (kk - 1.0) - 1.0))
                .sqrt();
            q[k].resize(k + 1, 0.0);
            q[k][m] = a * (x * q[k - 1][m] - b * q[k - 2][m]);
        }
    }
    q
}

/// Product quadrature grid: Gauss-Legendre in the polar cosine, equispaced
/// in azimuth.
#[derive(Debug, Clone)]
pub struct SphereGrid {
    pub polar_nodes: Vec<f64>,
    pub polar_weights: Vec<f64>,
    pub n_azimuth: usize,
}

impl SphereGrid {
    pub fn new(n_polar: usize, n_azimuth: usize) -> Result<Self> {
        if n_polar < 1 || n_azimuth < 1 {
            return Err(Error::OutOfRange("grid needs at least one node per axis".into()));
        }
        let (polar_nodes, polar_weights) = gauss_legendre(n_polar);
        Ok(SphereGrid { polar_nodes, polar_weights, n_azimuth })
    }

    pub fn azimuth(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.n_azimuth as f64
    }

    pub fn len(&self) -> usize {
        self.polar_nodes.len() * self.n_azimuth
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Polynomial exactness degree: integrands of this total degree are
    /// integrated exactly by the product rule.
    pub fn exactness_degree(&self) -> usize {
        (2 * self.polar_nodes.len() - 1).min(self.n_azimuth - 1)
    }

    /// Unit vector of grid point (q, j).
    pub fn direction(&self, q: usize, j: usize) -> [f64; 3] {
        let x = self.polar_nodes[q];
        let s = (1.0 - x * x).max(0.0).sqrt();
        let phi = self.azimuth(j);
        [s * phi.cos(), s * phi.sin(), x]
    }
}

/// Samples on a [`SphereGrid`], row-major polar x azimuth.
#[derive(Debug, Clone)]
pub struct SphereFunction {
    pub grid: Arc<SphereGrid>,
    pub values: Vec<f64>,
}

impl SphereFunction {
    pub fn from_fn(grid: Arc<SphereGrid>, f: impl Fn([f64; 3]) -> f64) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for q in 0..grid.polar_nodes.len() {
            for j in 0..grid.n_azimuth {
                values.push(f(grid.direction(q, j)));
            }
        }
        SphereFunction { grid, values }
    }

    pub fn value(&self, q: usize, j: usize) -> f64 {
        self.values[q * self.grid.n_azimuth + j]
    }

    pub fn sup_distance(&self, other: &SphereFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Real spherical-harmonic coefficients up to l_max. Row k holds 2k+1
/// entries: m = 0, then (cos, sin) pairs for m = 1..k.
#[derive(Debug, Clone)]
pub struct SphericalCoefficients {
    pub l_max: usize,
    pub data: Vec<Vec<f64>>,
}

impl SphericalCoefficients {
    pub fn zero(l_max: usize) -> Self {
        SphericalCoefficients {
            l_max,
            data: (0..=l_max).map(|k| vec![0.0; 2 * k + 1]).collect(),
        }
    }

    /// Largest degree with a coefficient above `tol` in absolute value.
    pub fn effective_degree(&self, tol: f64) -> usize {
        (0..=self.l_max)
            .rev()
            .find(|&k| self.data[k].iter().any(|c| c.abs() > tol))
            .unwrap_or(0)
    }
}

/// Forward analysis by quadrature; exact for band-limited samples when the
/// grid's exactness degree covers l_max plus the sample degree.
pub fn analyze(f: &SphereFunction, l_max: usize) -> SphericalCoefficients {
    let grid = &f.grid;
    let n_az = grid.n_azimuth;
    let d_phi = 2.0 * PI / n_az as f64;
    // Azimuthal moments per polar node: sums of f * cos(m phi), f * sin(m phi).
    let moments: Vec<(Vec<f64>, Vec<f64>)> = (0..grid.polar_nodes.len())
        .into_par_iter()
        .map(|q| {
            let mut cos_m = vec![0.0; l_max + 1];
            let mut sin_m = vec![0.0; l_max + 1];
            for j in 0..n_az {
                let v = f.value(q, j);
                let phi = grid.azimuth(j);
                for m in 0..=l_max {
                    cos_m[m] += v * (m as f64 * phi).cos();
                    sin_m[m] += v * (m as f64 * phi).sin();
                }
            }
            (cos_m, sin_m)
        })
        .collect();

    let mut out = SphericalCoefficients::zero(l_max);
    for (q, &x) in grid.polar_nodes.iter().enumerate() {
        let w = grid.polar_weights[q] * d_phi / (4.0 * PI);
        let alp = orthonormal_alp(l_max, x);
        let (cos_m, sin_m) = &moments[q];
        for k in 0..=l_max {
            out.data[k][0] += w * 2.0f64.sqrt() * alp[k][0] * cos_m[0];
            for m in 1..=k {
                out.data[k][2 * m - 1] += w * 2.0 * alp[k][m] * cos_m[m];
                out.data[k][2 * m] += w * 2.0 * alp[k][m] * sin_m[m];
            }
        }
    }
    out
}

/// Synthesis back onto a grid.
pub fn synthesize(coeffs: &SphericalCoefficients, grid: Arc<SphereGrid>) -> SphereFunction {
    let l_max = coeffs.l_max;
    let n_az = grid.n_azimuth;
    let values: Vec<f64> = (0..grid.polar_nodes.len())
        .into_par_iter()
        .flat_map(|q| {
            let x = grid.polar_nodes[q];
            let alp = orthonormal_alp(l_max, x);
            // Fold the polar part into per-m Fourier amplitudes.
            let mut amp_cos = vec![0.0; l_max + 1];
            let mut amp_sin = vec![0.0; l_max + 1];
            for k in 0..=l_max {
                amp_cos[0] += coeffs.data[k][0] * 2.0f64.sqrt() * alp[k][0];
                for m in 1..=k {
                    amp_cos[m] += coeffs.data[k][2 * m - 1] * 2.0 * alp[k][m];
                    amp_sin[m] += coeffs.data[k][2 * m] * 2.0 * alp[k][m];
                }
            }
            (0..n_az)
                .map(|j| {
                    let phi = grid.azimuth(j);
                    let mut v = amp_cos[0];
                    for m in 1..=l_max {
                        v += amp_cos[m] * (m as f64 * phi).cos()
                            + amp_sin[m] * (m as f64 * phi).sin();
                    }
                    v
                })
                .collect::<Vec<f64>>()
        })
        .collect();
    SphereFunction { grid, values }
}

/// Point evaluation of a coefficient expansion at a unit vector.
pub fn evaluate_at(coeffs: &SphericalCoefficients, dir: [f64; 3]) -> f64 {
    let x = dir[2].clamp(-1.0, 1.0);
    let phi = dir[1].atan2(dir[0]);
    let alp = orthonormal_alp(coeffs.l_max, x);
    let mut v = 0.0;
    for k in 0..=coeffs.l_max {
        v += coeffs.data[k][0] * 2.0f64.sqrt() * alp[k][0];
        for m in 1..=k {
            v += 2.0
                * alp[k][m]
                * (coeffs.data[k][2 * m - 1] * (m as f64 * phi).cos()
                    + coeffs.data[k][2 * m] * (m as f64 * phi).sin());
        }
    }
    v
}

/// Zonal convolution with the Cesàro kernel: spherical-harmonic analysis,
/// per-degree damping by A_{n-k}/A_n, synthesis. Rejects grids whose
/// exactness degree is below 2n (the analysis would alias).
pub fn sphere_convolve(f: &SphereFunction, spec: &SphereKernelSpec) -> Result<SphereFunction> {
    let n = spec.degree;
    if f.grid.exactness_degree() < 2 * n {
        return Err(Error::OutOfRange(format!(
            "grid exactness degree {} is below 2n = {}",
            f.grid.exactness_degree(),
            2 * n
        )));
    }
    let mut coeffs = analyze(f, n);
    let damping = spec.damping();
    for k in 0..=n {
        for c in coeffs.data[k].iter_mut() {
            *c *= damping[k];
        }
    }
    Ok(synthesize(&coeffs, f.grid.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cesaro_coefficient_recurrence_matches_binomials() {
        let a = cesaro_coefficients(2.0, 6);
        for (k, &v) in a.iter().enumerate() {
            let expected = ((k + 1) * (k + 2)) as f64 / 2.0;
            assert!((v - expected).abs() < 1e-12);
        }
        assert!((cesaro_coefficients(2.5, 1)[1] - 3.5).abs() < 1e-15);
    }

    #[test]
    fn spec_validation() {
        assert!(SphereKernelSpec::new(4, 3.0, 5).is_err());
        assert!(SphereKernelSpec::new(3, 1.5, 5).is_err());
        let spec = SphereKernelSpec::new(3, 2.0, 5).unwrap();
        assert_eq!(spec.lambda(), 0.5);
        // unit constant term: coefficient of P_0 is exactly 1
        assert_eq!(spec.legendre_coefficients()[0], 1.0);
    }

    #[test]
    fn quadrature_is_exact_for_legendre_products() {
        let n = 20;
        let (nodes, weights) = gauss_legendre(n + 2);
        for a in [0usize, 1, 5, n] {
            for b in [0usize, 2, n] {
                let integral: f64 = nodes
                    .iter()
                    .zip(&weights)
                    .map(|(&x, &w)| {
                        let p = legendre_values(n, x);
                        w * p[a] * p[b]
                    })
                    .sum();
                let expected = if a == b { 2.0 / (2 * a + 1) as f64 } else { 0.0 };
                assert!((integral - expected).abs() < 1e-12, "a={a}, b={b}");
            }
        }
    }

    #[test]
    fn degree_zero_kernel_is_one() {
        let spec = SphereKernelSpec::new(3, 2.0, 0).unwrap();
        let eval = cesaro_kernel(&spec);
        assert!(eval.values.iter().all(|v| (v - 1.0).abs() < 1e-14));
        assert!((eval.weighted_l1_norm - 1.0).abs() < 1e-14);
    }

    #[test]
    fn degree_one_kernel_closed_form() {
        // K_1^2(t) = 1 + t: A_0 = 1, A_1 = 3, (1/3)(3 P_0 + 1*3*P_1)
        let spec = SphereKernelSpec::new(3, 2.0, 1).unwrap();
        let eval = cesaro_kernel(&spec);
        for (x, v) in eval.nodes.iter().zip(&eval.values) {
            assert!((v - (1.0 + x)).abs() < 1e-12);
        }
        assert!(eval.min_value >= -1e-12);
        assert!((eval.weighted_l1_norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kernels_stay_nonnegative_with_unit_norm() {
        for n in [5, 25, 50] {
            let spec = SphereKernelSpec::new(3, 2.0, n).unwrap();
            let eval = cesaro_kernel(&spec);
            assert!(eval.min_value >= -1e-10, "n = {n}: min {}", eval.min_value);
            assert!(
                (eval.weighted_l1_norm - 1.0).abs() <= 1e-8,
                "n = {n}: norm {}",
                eval.weighted_l1_norm
            );
        }
    }

    #[test]
    fn orthonormal_alp_matches_low_degree_closed_forms() {
        for &x in &[-0.9, -0.3, 0.2, 0.8] {
            let q = orthonormal_alp(2, x);
            assert!((q[0][0] - 1.0 / 2.0f64.sqrt()).abs() < 1e-14);
            assert!((q[1][0] - (1.5f64).sqrt() * x).abs() < 1e-14);
            let p20 = (2.5f64).sqrt() * 0.5 * (3.0 * x * x - 1.0);
            assert!((q[2][0] - p20).abs() < 1e-13);
        }
    }

    #[test]
    fn constant_function_is_fixed() {
        let grid = Arc::new(SphereGrid::new(12, 25).unwrap());
        let one = SphereFunction::from_fn(grid, |_| 1.0);
        let spec = SphereKernelSpec::new(3, 2.0, 4).unwrap();
        let out = sphere_convolve(&one, &spec).unwrap();
        for v in &out.values {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn first_degree_zonal_damps_by_one_third() {
        let grid = Arc::new(SphereGrid::new(10, 21).unwrap());
        // Y_{1,0} = sqrt(3) * z
        let f = SphereFunction::from_fn(grid, |d| 3.0f64.sqrt() * d[2]);
        let spec = SphereKernelSpec::new(3, 2.0, 1).unwrap();
        let out = sphere_convolve(&f, &spec).unwrap();
        for (a, b) in f.values.iter().zip(&out.values) {
            assert!((b - a / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn harmonic_basis_is_orthonormal_under_the_product_rule() {
        let l = 4;
        let grid = Arc::new(SphereGrid::new(l + 2, 2 * l + 3).unwrap());
        for k in 0..=l {
            for slot in 0..(2 * k + 1) {
                let mut unit = SphericalCoefficients::zero(l);
                unit.data[k][slot] = 1.0;
                let f = synthesize(&unit, grid.clone());
                let back = analyze(&f, l);
                for k2 in 0..=l {
                    for slot2 in 0..(2 * k2 + 1) {
                        let expected = f64::from(u8::from(k == k2 && slot == slot2));
                        assert!(
                            (back.data[k2][slot2] - expected).abs() < 1e-12,
                            "({k},{slot}) vs ({k2},{slot2}): {}",
                            back.data[k2][slot2]
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn analysis_synthesis_round_trip() {
        let grid = Arc::new(SphereGrid::new(16, 33).unwrap());
        // band-limited test function of degree 3
        let f = SphereFunction::from_fn(grid.clone(), |d| {
            1.0 + d[0] + 2.0 * d[1] * d[2] + d[0] * d[1] * d[2]
        });
        let coeffs = analyze(&f, 5);
        let back = synthesize(&coeffs, grid);
        assert!(f.sup_distance(&back) < 1e-11);
    }

    #[test]
    fn convolution_is_rotation_equivariant() {
        let n = 6;
        let grid = Arc::new(SphereGrid::new(2 * n + 2, 4 * n + 3).unwrap());
        let base = SphereFunction::from_fn(grid.clone(), |d| {
            (1.0 + d[0]).powi(3) - 0.5 * d[1] * d[2] + d[2].powi(2) * d[0]
        });
        let spec = SphereKernelSpec::new(3, 2.0, n).unwrap();

        let (beta, gamma) = (0.6f64, 1.9f64);
        let rotate = |v: [f64; 3]| -> [f64; 3] {
            // Ry(beta) then Rz(gamma)
            let r1 = [
                beta.cos() * v[0] + beta.sin() * v[2],
                v[1],
                -beta.sin() * v[0] + beta.cos() * v[2],
            ];
            [
                gamma.cos() * r1[0] - gamma.sin() * r1[1],
                gamma.sin() * r1[0] + gamma.cos() * r1[1],
                r1[2],
            ]
        };
        // rotated samples f(R^{-1} x) via evaluation of the analyzed expansion
        let coeffs = analyze(&base, n + 3);
        let inverse_rotate = |v: [f64; 3]| -> [f64; 3] {
            let r1 = [
                gamma.cos() * v[0] + gamma.sin() * v[1],
                -gamma.sin() * v[0] + gamma.cos() * v[1],
                v[2],
            ];
            [
                beta.cos() * r1[0] - beta.sin() * r1[2],
                r1[1],
                beta.sin() * r1[0] + beta.cos() * r1[2],
            ]
        };
        let rotated = SphereFunction::from_fn(grid.clone(), |d| {
            evaluate_at(&coeffs, inverse_rotate(d))
        });

        let conv_then_rotate = {
            let conv = sphere_convolve(&base, &spec).unwrap();
            let conv_coeffs = analyze(&conv, n);
            SphereFunction::from_fn(grid.clone(), |d| evaluate_at(&conv_coeffs, inverse_rotate(d)))
        };
        let rotate_then_conv = sphere_convolve(&rotated, &spec).unwrap();
        assert!(conv_then_rotate.sup_distance(&rotate_then_conv) < 1e-8);
        let _ = rotate;
    }

    #[test]
    fn output_is_finite_rank_in_coefficient_space() {
        let n = 4;
        let grid = Arc::new(SphereGrid::new(14, 29).unwrap());
        let f = SphereFunction::from_fn(grid, |d| (2.0 + d[0] + d[1]).powi(6));
        let spec = SphereKernelSpec::new(3, 2.0, n).unwrap();
        let out = sphere_convolve(&f, &spec).unwrap();
        let coeffs = analyze(&out, 6);
        assert!(coeffs.effective_degree(1e-10) <= n);
    }

    #[test]
    fn coarse_grids_are_rejected() {
        let grid = Arc::new(SphereGrid::new(4, 9).unwrap());
        let f = SphereFunction::from_fn(grid, |d| d[2]);
        let spec = SphereKernelSpec::new(3, 2.0, 8).unwrap();
        assert!(sphere_convolve(&f, &spec).is_err());
    }
}
