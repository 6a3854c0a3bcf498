//! Computable pieces of Lipschitz-free space theory over groups, at desk scale.
//!
//! The crate is organized around a handful of finite, exactly checkable
//! constructions:
//!
//! - [`metric`]: pointed finite metric spaces (exact-rational or float),
//!   metric transforms, and greedy nets on the hyperboloid model.
//! - [`groups`]: finitely generated groups with ordered symmetric generating
//!   sets, shortlex Cayley balls, and the prefix-divergence (combability)
//!   audit.
//! - [`freespace`]: exact Kantorovich-Rubinstein norms of finitely supported
//!   molecules, with primal flow and dual Lipschitz-witness certificates.
//! - [`basis`]: shortlex retractions, their lifts to free-space projections,
//!   and the Schauder expansion they induce.
//! - [`quotient`]: finite metric groups, quotient metrics, bi-invariant
//!   majorants, and Haar-averaging projections onto quotient free-spaces.
//! - [`harmonic`]: Fejér summability on the circle and Cesàro-Gegenbauer
//!   kernels on the 2-sphere, with numerically certified kernel properties.
//!
//! All group-side arithmetic is exact (arbitrary-precision rationals); the
//! hyperbolic and harmonic modules use floats with stated tolerances.

pub mod basis;
mod error;
pub mod freespace;
pub mod groups;
pub mod harmonic;
pub mod metric;
pub mod quotient;
pub mod scalar;

pub use error::{Error, Result};
