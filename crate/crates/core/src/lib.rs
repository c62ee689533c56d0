//! Separable Schrödinger and Hamilton–Jacobi equations for a charged particle
//! in an external electromagnetic field.
//!
//! The crate builds, for each of the eleven orthogonal coordinate systems that
//! admit separation, the time-dependent frame, the Stäckel data, the
//! separable vector potentials, and the reduced ordinary differential
//! equations; it then integrates those equations numerically, reassembles
//! the wavefunction (or the classical action) and checks it against the
//! original partial differential equation with finite-difference residuals.
//!
//! Module map:
//!
//! * [`elliptic`] – Jacobi elliptic functions and complete elliptic integrals.
//! * [`coords`] – the coordinate maps `z(ω)`, Jacobians, inversion, sampling.
//! * [`profile`] – smooth time profiles with analytic derivatives.
//! * [`frame`] – rotating, scaling and translating frames `x = T H z + w`.
//! * [`stackel`] – Stäckel matrices, metric coefficients and `T_a(t)`.
//! * [`potential`] – magnetic, electrostatic and generalized Coulomb potentials.
//! * [`separate`] – reduced ODEs, their solutions and the separated `ψ` / `u`.
//! * [`verify`] – residual engines and geometric audits.
//! * [`cli`] – scenario files and the command-line front end.

pub mod cli;
pub mod coords;
pub mod elliptic;
mod error;
pub mod frame;
pub mod hermite;
pub mod potential;
pub mod profile;
pub mod quadrature;
pub mod separate;
pub mod stackel;
pub mod verify;

pub use error::{Error, Result};

/// Cartesian position or coordinate triple `(ω₁, ω₂, ω₃)`.
pub type Vec3 = nalgebra::Vector3<f64>;
/// Real 3×3 matrix.
pub type Mat3 = nalgebra::Matrix3<f64>;
pub use num_complex::Complex64;

/// Inverse of a 3×3 matrix through its adjugate.
///
/// Returns `None` when `|det| <= 1e-12 · ‖m‖³` (Frobenius norm).
pub fn invert3(m: &Mat3) -> Option<Mat3> {
    let det = m.determinant();
    let scale = m.norm().powi(3);
    if !det.is_finite() || det.abs() <= 1e-12 * scale {
        return None;
    }
    let c = |r0: usize, c0: usize, r1: usize, c1: usize| m[(r0, c0)] * m[(r1, c1)] - m[(r0, c1)] * m[(r1, c0)];
    let adj = Mat3::new(
        c(1, 1, 2, 2),
        -c(0, 1, 2, 2),
        c(0, 1, 1, 2),
        -c(1, 0, 2, 2),
        c(0, 0, 2, 2),
        -c(0, 0, 1, 2),
        c(1, 0, 2, 1),
        -c(0, 0, 2, 1),
        c(0, 0, 1, 1),
    );
    Some(adj / det)
}
