//! Summability-kernel convolution operators on the circle and the 2-sphere.

pub mod circle;
pub mod sphere;

pub use circle::{
    audit_pointwise_convergence, audit_young, fejer_convolve, fejer_convolve_torus2,
    lip_constant_on_grid, sawtooth_samples, CircleFunction, ConvergenceAudit, FejerKernel,
    FejerKernelAudit, YoungAudit,
};
pub use sphere::{
    analyze, cesaro_coefficients, cesaro_kernel, evaluate_at, gauss_legendre, legendre_values,
    orthonormal_alp, sphere_convolve, synthesize, KernelEvaluation, SphereFunction, SphereGrid,
    SphereKernelSpec, SphericalCoefficients,
};
