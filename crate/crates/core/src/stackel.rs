//! Stäckel matrices `F_{ij}(ω_i)`, metric coefficients `R_i²` and the time
//! functions `T_a(t)` of a frame.
//!
//! Row `i` of a Stäckel matrix depends on `ω_i` alone and the three pieces
//! are tied by `Σ_i F_{ij}(ω_i) R_i⁻² = T_j(t)`.

use crate::coords::{CoordinateSystem, SplitClass, SystemId};
use crate::elliptic::jacobi;
use crate::frame::FrameSpec;
use crate::{Mat3, Result, Vec3};

/// Row `axis` (0-based) of the Stäckel matrix, evaluated at `omega_a`.
pub fn stackel_row(system: &CoordinateSystem, axis: usize, omega_a: f64) -> [f64; 3] {
    use SystemId::*;
    let w = omega_a;
    let a = system.a();
    let (k, kp) = (system.k(), system.kprime());
    match (system.id(), axis) {
        (Cartesian, i) => {
            let mut row = [0.0; 3];
            row[i] = 1.0;
            row
        }
        (Cylindrical, 0) => [(2.0 * w).exp(), -1.0, 0.0],
        (Cylindrical, 1) => [0.0, 1.0, 0.0],
        (ParabolicCylindrical, 0) => [w * w, -1.0, 0.0],
        (ParabolicCylindrical, 1) => [w * w, 1.0, 0.0],
        (EllipticCylindrical, 0) => [a * a * w.cosh().powi(2), 1.0, 0.0],
        (EllipticCylindrical, 1) => [-a * a * w.cos().powi(2), -1.0, 0.0],
        (Spherical, 0) => [w.powi(-4), -w.powi(-2), 0.0],
        (Spherical, 1) => [0.0, w.cosh().powi(-2), -1.0],
        (ProlateSpheroidal | ProlateSpheroidalIiPlus | ProlateSpheroidalIiMinus, 0) => {
            let c = w.sinh().powi(-2);
            [a * a * c * c, -c, -1.0]
        }
        (ProlateSpheroidal | ProlateSpheroidalIiPlus | ProlateSpheroidalIiMinus, 1) => {
            let c = w.cosh().powi(-2);
            [a * a * c * c, c, -1.0]
        }
        (OblateSpheroidal, 0) => {
            let c = w.sin().powi(-2);
            [a * a * c * c, -c, 1.0]
        }
        (OblateSpheroidal, 1) => {
            let c = w.cosh().powi(-2);
            [-a * a * c * c, c, -1.0]
        }
        (Parabolic, 0) => [(4.0 * w).exp(), -(2.0 * w).exp(), -1.0],
        (Parabolic, 1) => [(4.0 * w).exp(), (2.0 * w).exp(), -1.0],
        (Paraboloidal, 0) => {
            let c = (2.0 * w).cosh();
            [a * a * c * c, -a * c, -1.0]
        }
        (Paraboloidal, 1) => {
            let c = (2.0 * w).cos();
            [-a * a * c * c, a * c, 1.0]
        }
        (Paraboloidal, 2) => {
            let c = (2.0 * w).cosh();
            [a * a * c * c, a * c, -1.0]
        }
        (Ellipsoidal, 0) => {
            let j = jacobi(w, k).expect("valid modulus");
            let d = (j.dn / j.sn).powi(2);
            [a * a * d * d, -d, 1.0]
        }
        (Ellipsoidal, 1) => {
            let c = (kp * jacobi(w, kp).expect("valid modulus").cn).powi(2);
            [-a * a * c * c, c, -1.0]
        }
        (Ellipsoidal, 2) => {
            let c = (k * jacobi(w, k).expect("valid modulus").cn).powi(2);
            [a * a * c * c, c, 1.0]
        }
        (Conical, 0) => [w.powi(-4), -w.powi(-2), 0.0],
        (Conical, 1) => [0.0, (kp * jacobi(w, kp).expect("valid modulus").cn).powi(2), -1.0],
        (Conical, 2) => [0.0, (k * jacobi(w, k).expect("valid modulus").cn).powi(2), 1.0],
        // every remaining third row is the Cartesian-like (0, 0, 1)
        (_, 2) => [0.0, 0.0, 1.0],
        (_, _) => unreachable!("axis index is 0, 1 or 2"),
    }
}

/// The Stäckel matrix at `omega`: entry `(i, j)` is `F_{ij}(ω_i)`.
pub fn stackel_values(system: &CoordinateSystem, omega: &Vec3) -> Result<Mat3> {
    system.check_domain(omega)?;
    let mut m = Mat3::zeros();
    for i in 0..3 {
        let row = stackel_row(system, i, omega[i]);
        for j in 0..3 {
            m[(i, j)] = row[j];
        }
    }
    Ok(m)
}

/// `T₁, T₂, T₃` for a frame used with a system of the given split class.
pub fn t_functions_for(class: SplitClass, frame: &FrameSpec, t: f64) -> [f64; 3] {
    let h = frame.h(t);
    let inv = |v: f64| 1.0 / (v * v);
    match class {
        SplitClass::Complete => [inv(h[0]), inv(h[1]), inv(h[2])],
        SplitClass::Partial => [inv(h[0]), 0.0, inv(h[2])],
        SplitClass::Nonsplit => [inv(h[0]), 0.0, 0.0],
    }
}

pub fn t_functions(system: &CoordinateSystem, frame: &FrameSpec, t: f64) -> [f64; 3] {
    t_functions_for(system.split_class(), frame, t)
}

/// `R_i²` for the unit static frame, i.e. the squared column norms of the
/// Jacobian of `z(ω)`.
pub fn unit_metric(system: &CoordinateSystem, omega: &Vec3) -> [f64; 3] {
    use SystemId::*;
    let (w1, w2, w3) = (omega[0], omega[1], omega[2]);
    let a2 = system.a() * system.a();
    let (k, kp) = (system.k(), system.kprime());
    match system.id() {
        Cartesian => [1.0; 3],
        Cylindrical => {
            let r = (2.0 * w1).exp();
            [r, r, 1.0]
        }
        ParabolicCylindrical => {
            let r = w1 * w1 + w2 * w2;
            [r, r, 1.0]
        }
        EllipticCylindrical => {
            let r = 0.5 * a2 * ((2.0 * w1).cosh() - (2.0 * w2).cos());
            [r, r, 1.0]
        }
        Spherical => {
            let r = w1.powi(-2) * w2.cosh().powi(-2);
            [w1.powi(-4), r, r]
        }
        ProlateSpheroidal | ProlateSpheroidalIiPlus | ProlateSpheroidalIiMinus => {
            let s = w1.sinh().powi(-2);
            let c = w2.cosh().powi(-2);
            [a2 * s * (s + c), a2 * c * (s + c), a2 * s * c]
        }
        OblateSpheroidal => {
            let s = w1.sin().powi(-2);
            let c = w2.cosh().powi(-2);
            [a2 * s * (s - c), a2 * c * (s - c), a2 * s * c]
        }
        Parabolic => {
            let (e1, e2) = ((2.0 * w1).exp(), (2.0 * w2).exp());
            [e1 * (e1 + e2), e2 * (e1 + e2), e1 * e2]
        }
        Paraboloidal => {
            let p = (2.0 * w1).cosh();
            let q = (2.0 * w2).cos();
            let r = (2.0 * w3).cosh();
            [a2 * (p - q) * (p + r), a2 * (p - q) * (q + r), a2 * (p + r) * (q + r)]
        }
        Ellipsoidal => {
            let j1 = jacobi(w1, k).expect("valid modulus");
            let c2 = (kp * jacobi(w2, kp).expect("valid modulus").cn).powi(2);
            let c3 = (k * jacobi(w3, k).expect("valid modulus").cn).powi(2);
            let d = (j1.dn / j1.sn).powi(2);
            [a2 * (d - c2) * (d + c3), a2 * (d - c2) * (c2 + c3), a2 * (d + c3) * (c2 + c3)]
        }
        Conical => {
            let c2 = (kp * jacobi(w2, kp).expect("valid modulus").cn).powi(2);
            let c3 = (k * jacobi(w3, k).expect("valid modulus").cn).powi(2);
            let r = w1.powi(-2) * (c2 + c3);
            [w1.powi(-4), r, r]
        }
    }
}

/// `R_i²` under `frame` at time `t`: the unit metric divided by `T₁`, with
/// Cartesian-like axes divided by their own `T_i`.
pub fn metric_r_squared(system: &CoordinateSystem, frame: &FrameSpec, t: f64, omega: &Vec3) -> Result<[f64; 3]> {
    system.check_domain(omega)?;
    frame.check_compatible(system)?;
    let unit = unit_metric(system, omega);
    // the split class of the system decides which h scales which axis;
    // for admissible frames the tied scalings coincide
    let h = frame.h(t);
    let h2 = |i: usize| h[i] * h[i];
    Ok(match system.split_class() {
        SplitClass::Complete => [unit[0] * h2(0), unit[1] * h2(1), unit[2] * h2(2)],
        SplitClass::Partial => [unit[0] * h2(0), unit[1] * h2(0), unit[2] * h2(2)],
        SplitClass::Nonsplit => [unit[0] * h2(0), unit[1] * h2(0), unit[2] * h2(0)],
    })
}
