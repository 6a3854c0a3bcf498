//! Fejér summability on the circle.
//!
//! Functions are held as Fourier coefficients (Hermitian, so real-valued) or
//! ingested from equispaced grid samples through a discrete Fourier
//! transform. Convolution with the degree-n Fejér kernel damps coefficient k
//! by 1 - |k|/(n+1) and truncates beyond n, so the operator has rank at most
//! 2n+1 by construction. Lipschitz constants are estimated by exhaustive
//! divided differences over grid pairs in the arc-length metric
//! min(|s-t|, 2 pi - |s-t|), optionally snowflaked.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::{Error, Result};

/// Agreement tolerance for the coefficient/grid round trip.
pub const ROUND_TRIP_TOL: f64 = 1e-10;

/// A real-valued function on the circle, stored as Fourier coefficients
/// h(k) for |k| <= degree.
#[derive(Debug, Clone)]
pub struct CircleFunction {
    /// Index k + degree holds h(k).
    coeffs: Vec<Complex64>,
}

impl CircleFunction {
    /// From coefficients h(-n)..h(n) (length 2n+1). Enforces the
    /// real-valuedness condition h(-k) = conj(h(k)) within 1e-10, then
    /// symmetrizes so it holds exactly.
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() % 2 != 1 {
            return Err(Error::OutOfRange("coefficient list must have odd length".into()));
        }
        let n = coeffs.len() / 2;
        for k in 0..=n {
            let diff = (coeffs[n - k] - coeffs[n + k].conj()).norm();
            if diff > 1e-10 {
                return Err(Error::OutOfRange(format!(
                    "coefficients are not Hermitian at k = {k}: defect {diff}"
                )));
            }
        }
        let mut sym = coeffs.clone();
        for k in 0..=n {
            let avg = 0.5 * (coeffs[n + k] + coeffs[n - k].conj());
            sym[n + k] = avg;
            sym[n - k] = avg.conj();
        }
        sym[n].im = 0.0;
        Ok(CircleFunction { coeffs: sym })
    }

    pub fn constant(c: f64) -> Self {
        CircleFunction { coeffs: vec![Complex64::new(c, 0.0)] }
    }

    /// cos(k t).
    pub fn cosine(k: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * k + 1];
        coeffs[0] = Complex64::new(0.5, 0.0);
        coeffs[2 * k] = Complex64::new(0.5, 0.0);
        if k == 0 {
            coeffs = vec![Complex64::new(1.0, 0.0)];
        }
        CircleFunction { coeffs }
    }

    /// Trigonometric interpolant of samples on the equispaced grid
    /// t_j = 2 pi j / M, truncated to the given degree (< M/2).
    pub fn from_samples(samples: &[f64], degree: usize) -> Result<Self> {
        let m = samples.len();
        if m < 2 * degree + 1 {
            return Err(Error::OutOfRange(format!(
                "{m} samples cannot resolve degree {degree}"
            )));
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * degree + 1];
        for (idx, c) in coeffs.iter_mut().enumerate() {
            let k = idx as i64 - degree as i64;
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, &v) in samples.iter().enumerate() {
                let angle = -2.0 * PI * (k as f64) * (j as f64) / (m as f64);
                acc += v * Complex64::new(angle.cos(), angle.sin());
            }
            *c = acc / m as f64;
        }
        CircleFunction::from_coeffs(coeffs)
    }

    /// Random real trigonometric polynomial with unit-scale coefficients;
    /// fixed seed gives a fixed function.
    pub fn random_trig(degree: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * degree + 1];
        coeffs[degree] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
        for k in 1..=degree {
            let scale = 1.0 / k as f64;
            let c = Complex64::new(
                rng.gen_range(-scale..scale),
                rng.gen_range(-scale..scale),
            );
            coeffs[degree + k] = c;
            coeffs[degree - k] = c.conj();
        }
        CircleFunction { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() / 2
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        let n = self.degree() as i64;
        if k.abs() > n {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(k + n) as usize]
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let n = self.degree() as i64;
        let mut acc = Complex64::new(0.0, 0.0);
        for k in -n..=n {
            let angle = (k as f64) * t;
            acc += self.coeff(k) * Complex64::new(angle.cos(), angle.sin());
        }
        acc.re
    }

    /// Values on the equispaced grid of m points.
    pub fn sample(&self, m: usize) -> Vec<f64> {
        (0..m)
            .into_par_iter()
            .map(|j| self.eval(2.0 * PI * j as f64 / m as f64))
            .collect()
    }

    /// Largest coefficient index carrying a nonzero coefficient.
    pub fn rank_support(&self) -> usize {
        let n = self.degree() as i64;
        (0..=n)
            .rev()
            .find(|&k| self.coeff(k).norm() > 0.0 || self.coeff(-k).norm() > 0.0)
            .unwrap_or(0) as usize
    }
}

/// The Fejér kernel of degree n: coefficients 1 - |k|/(n+1) for |k| <= n.
#[derive(Debug, Clone, Copy)]
pub struct FejerKernel {
    pub degree: usize,
}

impl FejerKernel {
    pub fn new(degree: usize) -> Self {
        FejerKernel { degree }
    }

    pub fn coefficient(&self, k: i64) -> f64 {
        let n = self.degree as i64;
        if k.abs() > n {
            0.0
        } else {
            1.0 - (k.abs() as f64) / (n as f64 + 1.0)
        }
    }

    /// Kernel values on the equispaced grid, summed from coefficients.
    pub fn values_on_grid(&self, m: usize) -> Vec<f64> {
        (0..m)
            .into_par_iter()
            .map(|j| {
                let t = 2.0 * PI * j as f64 / m as f64;
                let mut acc = self.coefficient(0);
                for k in 1..=self.degree as i64 {
                    acc += 2.0 * self.coefficient(k) * ((k as f64) * t).cos();
                }
                acc
            })
            .collect()
    }

    /// The kernel-side conditions: unit mass and evenness hold exactly in
    /// coefficients, nonnegativity is checked on the grid.
    pub fn audit(&self, m: usize) -> FejerKernelAudit {
        let n = self.degree as i64;
        let unit_mass_exact = self.coefficient(0) == 1.0;
        let symmetric_exact = (0..=n).all(|k| self.coefficient(k) == self.coefficient(-k));
        let grid_min = self
            .values_on_grid(m)
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        FejerKernelAudit {
            degree: self.degree,
            grid_points: m,
            unit_mass_exact,
            symmetric_exact,
            grid_min,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FejerKernelAudit {
    pub degree: usize,
    pub grid_points: usize,
    pub unit_mass_exact: bool,
    pub symmetric_exact: bool,
    pub grid_min: f64,
}

/// Convolution with the degree-n Fejér kernel: coefficient damping, zero
/// beyond n. The output carries at most 2n+1 coefficients.
pub fn fejer_convolve(f: &CircleFunction, n: usize) -> CircleFunction {
    let kernel = FejerKernel::new(n);
    let out_deg = n.min(f.degree());
    let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * out_deg + 1];
    for k in -(out_deg as i64)..=(out_deg as i64) {
        coeffs[(k + out_deg as i64) as usize] = f.coeff(k) * kernel.coefficient(k);
    }
    CircleFunction { coeffs }
}

/// Product-kernel convolution on the 2-torus: coefficient (k1, k2) damps by
/// the product of the one-dimensional Fejér factors.
pub fn fejer_convolve_torus2(
    coeffs: &[Vec<Complex64>],
    n: usize,
) -> Vec<Vec<Complex64>> {
    let kernel = FejerKernel::new(n);
    let rows = coeffs.len();
    let cols = if rows == 0 { 0 } else { coeffs[0].len() };
    let r0 = (rows as i64 - 1) / 2;
    let c0 = (cols as i64 - 1) / 2;
    coeffs
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, &c)| {
                    c * kernel.coefficient(i as i64 - r0) * kernel.coefficient(j as i64 - c0)
                })
                .collect()
        })
        .collect()
}

/// Exhaustive divided-difference Lipschitz estimate over grid pairs, with
/// the arc-length metric raised to `alpha`.
pub fn lip_constant_on_grid(samples: &[f64], alpha: f64) -> f64 {
    let m = samples.len();
    let arc = |k: usize| -> f64 {
        let k = k.min(m - k);
        2.0 * PI * k as f64 / m as f64
    };
    (1..=m / 2)
        .into_par_iter()
        .map(|k| {
            let den = arc(k).powf(alpha);
            let mut best: f64 = 0.0;
            for j in 0..m {
                let diff = (samples[(j + k) % m] - samples[j]).abs();
                if diff > best {
                    best = diff;
                }
            }
            best / den
        })
        .reduce(|| 0.0, f64::max)
}

#[derive(Debug, Clone, Serialize)]
pub struct YoungAudit {
    pub degree: usize,
    pub grid_points: usize,
    pub alpha: f64,
    pub lip_f: f64,
    pub lip_convolved: f64,
    /// lip_convolved <= lip_f * (1 + 10/M).
    pub within_bound: bool,
}

/// Convolution is nonexpansive in the Lipschitz seminorm (the kernel has
/// unit L^1 mass); checked on the grid with slack 10/M, for the arc metric
/// and its snowflakes.
pub fn audit_young(f: &CircleFunction, n: usize, m: usize, alphas: &[f64]) -> Vec<YoungAudit> {
    let tf = fejer_convolve(f, n);
    let sf = f.sample(m);
    let stf = tf.sample(m);
    alphas
        .iter()
        .map(|&alpha| {
            let lip_f = lip_constant_on_grid(&sf, alpha);
            let lip_convolved = lip_constant_on_grid(&stf, alpha);
            YoungAudit {
                degree: n,
                grid_points: m,
                alpha,
                lip_f,
                lip_convolved,
                within_bound: lip_convolved <= lip_f * (1.0 + 10.0 / m as f64),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceAudit {
    pub grid_points: usize,
    /// (degree, sup-norm error on the grid).
    pub errors: Vec<(usize, f64)>,
    /// Each error at most 1.05 times the previous one.
    pub monotone_ok: bool,
    pub final_error: f64,
    pub target: f64,
    pub final_ok: bool,
}

/// Sup-norm errors ||T_n f - f|| over the grid along a degree schedule;
/// requires the sequence to be nonincreasing up to factor 1.05 and the last
/// error to land under `target`.
pub fn audit_pointwise_convergence(
    f: &CircleFunction,
    degrees: &[usize],
    m: usize,
    target: f64,
) -> ConvergenceAudit {
    let sf = f.sample(m);
    let errors: Vec<(usize, f64)> = degrees
        .iter()
        .map(|&n| {
            let stf = fejer_convolve(f, n).sample(m);
            let err = sf
                .iter()
                .zip(&stf)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            (n, err)
        })
        .collect();
    let monotone_ok = errors.windows(2).all(|w| w[1].1 <= 1.05 * w[0].1);
    let final_error = errors.last().map(|e| e.1).unwrap_or(0.0);
    ConvergenceAudit {
        grid_points: m,
        errors,
        monotone_ok,
        final_error,
        target,
        final_ok: final_error < target,
    }
}

/// The sawtooth |t - pi|, Lipschitz with constant 1 in the arc metric,
/// sampled on the m-point grid.
pub fn sawtooth_samples(m: usize) -> Vec<f64> {
    (0..m)
        .map(|j| (2.0 * PI * j as f64 / m as f64 - PI).abs())
        .collect()
}
