//! Spherical needlets on S²: filter construction, needlet frames over
//! positive quadrature rules, discrete analysis and synthesis, filtered
//! hyperinterpolation, and the Wendland convergence experiments built on
//! top of them.
//!
//! The approximation pipeline works on the two-sphere with the normalized
//! surface measure (total mass one). Kernel and polynomial primitives in
//! [`special`] and [`needlet::FilteredKernel`] are generic in the sphere
//! dimension.

pub mod cli;
pub mod error;
pub mod filter;
pub mod local;
pub mod needlet;
pub mod quadrature;
pub mod special;
pub mod wendland;

pub use error::{Error, Result};
pub use filter::{FrameFilter, NeedletFilter, SquaredFilter};
pub use local::SphericalCap;
pub use needlet::{FilteredKernel, FunctionSample, NeedletCoefficients, NeedletFrame};
pub use quadrature::{QuadratureRule, QuadratureSource, RuleSource};
pub use wendland::{FourierCoeffTable, WendlandTestFunction};

/// A point in R³; on the sphere unless stated otherwise.
pub type Vec3 = [f64; 3];

#[inline]
pub fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

pub fn normalize(a: &Vec3) -> Vec3 {
    let n = norm(a);
    [a[0] / n, a[1] / n, a[2] / n]
}

/// Geodesic distance between two unit vectors.
pub fn geodesic_distance(a: &Vec3, b: &Vec3) -> f64 {
    dot(a, b).clamp(-1.0, 1.0).acos()
}

/// Unit vector from polar angle `theta` (measured from +z) and azimuth `phi`.
pub fn from_spherical(theta: f64, phi: f64) -> Vec3 {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [st * cp, st * sp, ct]
}
