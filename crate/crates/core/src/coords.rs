//! The eleven separable orthogonal coordinate systems `x = z(ω)` (plus the
//! two shifted prolate spheroidal variants used by the Coulomb problem).
//!
//! Every system is arranged so that each `ω_a` is a harmonic function of
//! `x`. The domains are the principal boxes of the classical list; no chart
//! gluing is attempted, so inversion is always local and seeded by a guess.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::elliptic::{jacobi, Jacobi, Modulus};
use crate::{invert3, Error, Mat3, Result, Vec3};

/// Margin kept from singular domain boundaries.
pub const EPS_DOM: f64 = 1e-6;

/// Margin used when drawing samples from a finite domain end.
pub const SAMPLE_MARGIN: f64 = 1e-2;

/// Unbounded axes are sampled on `[-SAMPLE_HALF_WIDTH, SAMPLE_HALF_WIDTH]`.
pub const SAMPLE_HALF_WIDTH: f64 = 3.0;

/// Samples whose Jacobian column norms differ by more than this ratio are
/// redrawn.
pub const SAMPLE_CONDITION_LIMIT: f64 = 1e3;

const NEWTON_MAX_ITER: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemId {
    Cartesian,
    Cylindrical,
    ParabolicCylindrical,
    EllipticCylindrical,
    Spherical,
    ProlateSpheroidal,
    /// Prolate spheroidal with `z₃ = a(coth ω₁ tanh ω₂ + 1)`.
    ProlateSpheroidalIiPlus,
    /// Prolate spheroidal with `z₃ = a(coth ω₁ tanh ω₂ − 1)`.
    ProlateSpheroidalIiMinus,
    OblateSpheroidal,
    Parabolic,
    Paraboloidal,
    Ellipsoidal,
    Conical,
}

/// How many Cartesian-like axes a system keeps; fixes which frame scalings
/// may differ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitClass {
    /// Case 1: `h₁, h₂, h₃` independent.
    Complete,
    /// Cases 2–4: `h₁ = h₂`.
    Partial,
    /// Cases 5–11: `h₁ = h₂ = h₃`.
    Nonsplit,
}

impl SystemId {
    pub const ALL: [SystemId; 13] = [
        SystemId::Cartesian,
        SystemId::Cylindrical,
        SystemId::ParabolicCylindrical,
        SystemId::EllipticCylindrical,
        SystemId::Spherical,
        SystemId::ProlateSpheroidal,
        SystemId::ProlateSpheroidalIiPlus,
        SystemId::ProlateSpheroidalIiMinus,
        SystemId::OblateSpheroidal,
        SystemId::Parabolic,
        SystemId::Paraboloidal,
        SystemId::Ellipsoidal,
        SystemId::Conical,
    ];

    /// The eleven base systems, one per case.
    pub const BASE: [SystemId; 11] = [
        SystemId::Cartesian,
        SystemId::Cylindrical,
        SystemId::ParabolicCylindrical,
        SystemId::EllipticCylindrical,
        SystemId::Spherical,
        SystemId::ProlateSpheroidal,
        SystemId::OblateSpheroidal,
        SystemId::Parabolic,
        SystemId::Paraboloidal,
        SystemId::Ellipsoidal,
        SystemId::Conical,
    ];

    /// Case number 1–11 in the classical list (the shifted prolate variants
    /// report 6).
    pub fn case(self) -> u8 {
        use SystemId::*;
        match self {
            Cartesian => 1,
            Cylindrical => 2,
            ParabolicCylindrical => 3,
            EllipticCylindrical => 4,
            Spherical => 5,
            ProlateSpheroidal | ProlateSpheroidalIiPlus | ProlateSpheroidalIiMinus => 6,
            OblateSpheroidal => 7,
            Parabolic => 8,
            Paraboloidal => 9,
            Ellipsoidal => 10,
            Conical => 11,
        }
    }

    pub fn split_class(self) -> SplitClass {
        match self.case() {
            1 => SplitClass::Complete,
            2..=4 => SplitClass::Partial,
            _ => SplitClass::Nonsplit,
        }
    }

    pub fn name(self) -> &'static str {
        use SystemId::*;
        match self {
            Cartesian => "cartesian",
            Cylindrical => "cylindrical",
            ParabolicCylindrical => "parabolic_cylindrical",
            EllipticCylindrical => "elliptic_cylindrical",
            Spherical => "spherical",
            ProlateSpheroidal => "prolate_spheroidal",
            ProlateSpheroidalIiPlus => "prolate_spheroidal_ii_plus",
            ProlateSpheroidalIiMinus => "prolate_spheroidal_ii_minus",
            OblateSpheroidal => "oblate_spheroidal",
            Parabolic => "parabolic",
            Paraboloidal => "paraboloidal",
            Ellipsoidal => "ellipsoidal",
            Conical => "conical",
        }
    }

    /// Whether the scale `a` enters the map.
    pub fn uses_scale(self) -> bool {
        use SystemId::*;
        matches!(
            self,
            EllipticCylindrical
                | ProlateSpheroidal
                | ProlateSpheroidalIiPlus
                | ProlateSpheroidalIiMinus
                | OblateSpheroidal
                | Paraboloidal
                | Ellipsoidal
        )
    }

    /// Whether the modulus `k` enters the map.
    pub fn uses_modulus(self) -> bool {
        matches!(self, SystemId::Ellipsoidal | SystemId::Conical)
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SystemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SystemId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown coordinate system `{s}`")))
    }
}

/// One coordinate axis of a domain box.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    /// The map degenerates at the lower end; points must keep [`EPS_DOM`].
    pub lo_singular: bool,
    pub hi_singular: bool,
}

impl Interval {
    const fn real_line() -> Self {
        Self {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
            lo_singular: false,
            hi_singular: false,
        }
    }

    const fn new(lo: f64, hi: f64, lo_singular: bool, hi_singular: bool) -> Self {
        Self {
            lo,
            hi,
            lo_singular,
            hi_singular,
        }
    }

    fn lower_limit(&self) -> f64 {
        if self.lo_singular {
            self.lo + EPS_DOM
        } else {
            self.lo
        }
    }

    fn upper_limit(&self) -> f64 {
        if self.hi_singular {
            self.hi - EPS_DOM
        } else {
            self.hi
        }
    }

    pub fn contains(&self, v: f64) -> bool {
        v.is_finite() && v >= self.lower_limit() && v <= self.upper_limit()
    }

    /// Clamp into the box shrunk by [`EPS_DOM`] at every finite end.
    pub fn clamp(&self, v: f64) -> f64 {
        v.max(self.lo + EPS_DOM).min(self.hi - EPS_DOM)
    }

    /// Bounded sampling range.
    pub fn sampling_range(&self) -> (f64, f64) {
        let lo = if self.lo.is_finite() {
            self.lo + SAMPLE_MARGIN
        } else {
            -SAMPLE_HALF_WIDTH
        };
        let hi = if self.hi.is_finite() {
            self.hi - SAMPLE_MARGIN
        } else if self.lo.is_finite() {
            self.lo + SAMPLE_HALF_WIDTH
        } else {
            SAMPLE_HALF_WIDTH
        };
        (lo, hi)
    }
}

/// A coordinate system together with its geometric parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoordinateSystem {
    id: SystemId,
    a: f64,
    modulus: Modulus,
}

impl CoordinateSystem {
    /// `a > 0` is the length scale, `0 < k < 1` the elliptic modulus; both
    /// are stored for every system but only enter where the map uses them.
    pub fn new(id: SystemId, a: f64, k: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::Domain {
                what: "scale a",
                value: a,
                range: "(0, ∞)",
            });
        }
        Ok(Self {
            id,
            a,
            modulus: Modulus::new(k)?,
        })
    }

    /// `a = 1`, `k = 0.6`.
    pub fn standard(id: SystemId) -> Self {
        Self::new(id, 1.0, 0.6).expect("standard parameters are valid")
    }

    pub fn id(&self) -> SystemId {
        self.id
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn k(&self) -> f64 {
        self.modulus.k()
    }

    pub fn kprime(&self) -> f64 {
        self.modulus.kprime()
    }

    pub fn split_class(&self) -> SplitClass {
        self.id.split_class()
    }

    /// The principal domain box.
    pub fn domain(&self) -> [Interval; 3] {
        use SystemId::*;
        let line = Interval::real_line();
        let positive = Interval::new(0.0, f64::INFINITY, true, false);
        let turn = Interval::new(0.0, 2.0 * PI, false, false);
        match self.id {
            Cartesian => [line; 3],
            Cylindrical => [line, turn, line],
            ParabolicCylindrical => [positive, line, line],
            EllipticCylindrical => [positive, Interval::new(-PI, PI, false, false), line],
            Spherical | ProlateSpheroidal | ProlateSpheroidalIiPlus | ProlateSpheroidalIiMinus => {
                [positive, line, turn]
            }
            OblateSpheroidal => [Interval::new(0.0, FRAC_PI_2, true, true), line, turn],
            Parabolic => [line, line, turn],
            Paraboloidal => [line, Interval::new(0.0, PI, false, false), line],
            Ellipsoidal | Conical => {
                let kq = self.modulus.quarter_period();
                let kpq = self.modulus.complementary_quarter_period();
                let first = if self.id == Ellipsoidal {
                    Interval::new(0.0, kq, true, true)
                } else {
                    positive
                };
                [
                    first,
                    Interval::new(-kpq, kpq, false, false),
                    Interval::new(0.0, 4.0 * kq, false, false),
                ]
            }
        }
    }

    pub fn check_domain(&self, omega: &Vec3) -> Result<()> {
        for (axis, iv) in self.domain().iter().enumerate() {
            if !iv.contains(omega[axis]) {
                return Err(Error::OutsideDomain {
                    system: self.id,
                    axis: axis + 1,
                    value: omega[axis],
                });
            }
        }
        Ok(())
    }

    fn elliptic_triplet(&self, omega: &Vec3) -> (Jacobi, Jacobi, Jacobi) {
        let (k, kp) = (self.k(), self.kprime());
        // moduli are validated at construction, so these cannot fail
        let j1 = jacobi(omega[0], k).expect("valid modulus");
        let j2 = jacobi(omega[1], kp).expect("valid modulus");
        let j3 = jacobi(omega[2], k).expect("valid modulus");
        (j1, j2, j3)
    }

    /// `z(ω)` without a domain check.
    pub fn forward_unchecked(&self, omega: &Vec3) -> Vec3 {
        use SystemId::*;
        let (w1, w2, w3) = (omega[0], omega[1], omega[2]);
        let a = self.a;
        match self.id {
            Cartesian => *omega,
            Cylindrical => {
                let r = w1.exp();
                Vec3::new(r * w2.cos(), r * w2.sin(), w3)
            }
            ParabolicCylindrical => Vec3::new(0.5 * (w1 * w1 - w2 * w2), w1 * w2, w3),
            EllipticCylindrical => Vec3::new(
                a * w1.cosh() * w2.cos(),
                a * w1.sinh() * w2.sin(),
                w3,
            ),
            Spherical => {
                let rho = 1.0 / (w1 * w2.cosh());
                Vec3::new(rho * w3.cos(), rho * w3.sin(), w2.tanh() / w1)
            }
            ProlateSpheroidal | ProlateSpheroidalIiPlus | ProlateSpheroidalIiMinus => {
                let rho = a / (w1.sinh() * w2.cosh());
                let shift = match self.id {
                    ProlateSpheroidalIiPlus => a,
                    ProlateSpheroidalIiMinus => -a,
                    _ => 0.0,
                };
                Vec3::new(
                    rho * w3.cos(),
                    rho * w3.sin(),
                    a * w2.tanh() / w1.tanh() + shift,
                )
            }
            OblateSpheroidal => {
                let rho = a / (w1.sin() * w2.cosh());
                Vec3::new(rho * w3.cos(), rho * w3.sin(), a * w2.tanh() / w1.tan())
            }
            Parabolic => {
                let r = (w1 + w2).exp();
                Vec3::new(
                    r * w3.cos(),
                    r * w3.sin(),
                    0.5 * ((2.0 * w1).exp() - (2.0 * w2).exp()),
                )
            }
            Paraboloidal => Vec3::new(
                2.0 * a * w1.cosh() * w2.cos() * w3.sinh(),
                2.0 * a * w1.sinh() * w2.sin() * w3.cosh(),
                0.5 * a * ((2.0 * w1).cosh() + (2.0 * w2).cos() - (2.0 * w3).cosh()),
            ),
            Ellipsoidal => {
                let (j1, j2, j3) = self.elliptic_triplet(omega);
                Vec3::new(
                    a * j2.dn * j3.sn / j1.sn,
                    a * j1.dn / j1.sn * j2.cn * j3.cn,
                    a * j1.cn / j1.sn * j2.sn * j3.dn,
                )
            }
            Conical => {
                let (_, j2, j3) = self.elliptic_triplet(omega);
                Vec3::new(j2.dn * j3.sn / w1, j2.cn * j3.cn / w1, j2.sn * j3.dn / w1)
            }
        }
    }

    /// `z(ω)`; errors when `ω` is outside the domain box.
    pub fn forward(&self, omega: &Vec3) -> Result<Vec3> {
        self.check_domain(omega)?;
        Ok(self.forward_unchecked(omega))
    }

    /// Analytic Jacobian `∂z/∂ω` (column `i` is `∂z/∂ω_i`) without domain or
    /// singularity checks.
    pub fn jacobian_unchecked(&self, omega: &Vec3) -> Mat3 {
        use SystemId::*;
        let (w1, w2, w3) = (omega[0], omega[1], omega[2]);
        let a = self.a;
        match self.id {
            Cartesian => Mat3::identity(),
            Cylindrical => {
                let r = w1.exp();
                let (s, c) = w2.sin_cos();
                Mat3::new(r * c, -r * s, 0.0, r * s, r * c, 0.0, 0.0, 0.0, 1.0)
            }
            ParabolicCylindrical => Mat3::new(w1, -w2, 0.0, w2, w1, 0.0, 0.0, 0.0, 1.0),
            EllipticCylindrical => {
                let (s2, c2) = w2.sin_cos();
                let (sh, ch) = (w1.sinh(), w1.cosh());
                Mat3::new(
                    a * sh * c2,
                    -a * ch * s2,
                    0.0,
                    a * ch * s2,
                    a * sh * c2,
                    0.0,
                    0.0,
                    0.0,
                    1.0,
                )
            }
            Spherical => {
                let (s3, c3) = w3.sin_cos();
                let sech = 1.0 / w2.cosh();
                let th = w2.tanh();
                let rho = sech / w1;
                // ∂ρ/∂ω₁ = −ρ/ω₁, ∂ρ/∂ω₂ = −ρ tanh ω₂
                Mat3::new(
                    -rho / w1 * c3,
                    -rho * th * c3,
                    -rho * s3,
                    -rho / w1 * s3,
                    -rho * th * s3,
                    rho * c3,
                    -th / (w1 * w1),
                    sech * sech / w1,
                    0.0,
                )
            }
            ProlateSpheroidal | ProlateSpheroidalIiPlus | ProlateSpheroidalIiMinus => {
                let (s3, c3) = w3.sin_cos();
                let (sh1, ch1) = (w1.sinh(), w1.cosh());
                let sech2 = 1.0 / w2.cosh();
                let th2 = w2.tanh();
                let rho = a / sh1 * sech2;
                let drho1 = -rho * ch1 / sh1;
                let drho2 = -rho * th2;
                Mat3::new(
                    drho1 * c3,
                    drho2 * c3,
                    -rho * s3,
                    drho1 * s3,
                    drho2 * s3,
                    rho * c3,
                    -a * th2 / (sh1 * sh1),
                    a * ch1 / sh1 * sech2 * sech2,
                    0.0,
                )
            }
            OblateSpheroidal => {
                let (s3, c3) = w3.sin_cos();
                let (s1, c1) = w1.sin_cos();
                let sech2 = 1.0 / w2.cosh();
                let th2 = w2.tanh();
                let rho = a / s1 * sech2;
                let drho1 = -rho * c1 / s1;
                let drho2 = -rho * th2;
                Mat3::new(
                    drho1 * c3,
                    drho2 * c3,
                    -rho * s3,
                    drho1 * s3,
                    drho2 * s3,
                    rho * c3,
                    -a * th2 / (s1 * s1),
                    a * c1 / s1 * sech2 * sech2,
                    0.0,
                )
            }
            Parabolic => {
                let r = (w1 + w2).exp();
                let (s3, c3) = w3.sin_cos();
                Mat3::new(
                    r * c3,
                    r * c3,
                    -r * s3,
                    r * s3,
                    r * s3,
                    r * c3,
                    (2.0 * w1).exp(),
                    -(2.0 * w2).exp(),
                    0.0,
                )
            }
            Paraboloidal => {
                let (ch1, sh1) = (w1.cosh(), w1.sinh());
                let (s2, c2) = w2.sin_cos();
                let (ch3, sh3) = (w3.cosh(), w3.sinh());
                Mat3::new(
                    2.0 * a * sh1 * c2 * sh3,
                    -2.0 * a * ch1 * s2 * sh3,
                    2.0 * a * ch1 * c2 * ch3,
                    2.0 * a * ch1 * s2 * ch3,
                    2.0 * a * sh1 * c2 * ch3,
                    2.0 * a * sh1 * s2 * sh3,
                    a * (2.0 * w1).sinh(),
                    -a * (2.0 * w2).sin(),
                    -a * (2.0 * w3).sinh(),
                )
            }
            Ellipsoidal => {
                let (k, kp) = (self.k(), self.kprime());
                let (j1, j2, j3) = self.elliptic_triplet(omega);
                let (s1, c1, d1) = (j1.sn, j1.cn, j1.dn);
                let (s2, c2, d2) = (j2.sn, j2.cn, j2.dn);
                let (s3, c3, d3) = (j3.sn, j3.cn, j3.dn);
                let inv = 1.0 / s1;
                let inv2 = inv * inv;
                Mat3::new(
                    -a * d2 * s3 * c1 * d1 * inv2,
                    -a * kp * kp * s2 * c2 * s3 * inv,
                    a * d2 * c3 * d3 * inv,
                    -a * c1 * c2 * c3 * inv2,
                    -a * d1 * inv * s2 * d2 * c3,
                    -a * d1 * inv * c2 * s3 * d3,
                    -a * d1 * s2 * d3 * inv2,
                    a * c1 * inv * c2 * d2 * d3,
                    -a * c1 * inv * s2 * k * k * s3 * c3,
                )
            }
            Conical => {
                let (k, kp) = (self.k(), self.kprime());
                let (_, j2, j3) = self.elliptic_triplet(omega);
                let (s2, c2, d2) = (j2.sn, j2.cn, j2.dn);
                let (s3, c3, d3) = (j3.sn, j3.cn, j3.dn);
                let r = 1.0 / w1;
                let z = Vec3::new(d2 * s3, c2 * c3, s2 * d3) * r;
                Mat3::new(
                    -z[0] * r,
                    -kp * kp * s2 * c2 * s3 * r,
                    d2 * c3 * d3 * r,
                    -z[1] * r,
                    -s2 * d2 * c3 * r,
                    -c2 * s3 * d3 * r,
                    -z[2] * r,
                    c2 * d2 * d3 * r,
                    -s2 * k * k * s3 * c3 * r,
                )
            }
        }
    }

    /// Analytic Jacobian `∂z/∂ω`; errors outside the domain or when
    /// `|det J| ≤ 1e-12 ‖J‖³`.
    pub fn jacobian(&self, omega: &Vec3) -> Result<Mat3> {
        self.check_domain(omega)?;
        let j = self.jacobian_unchecked(omega);
        if invert3(&j).is_none() {
            return Err(Error::Singular {
                system: self.id,
                omega: [omega[0], omega[1], omega[2]],
            });
        }
        Ok(j)
    }

    fn clamp(&self, omega: &Vec3) -> Vec3 {
        let d = self.domain();
        Vec3::new(d[0].clamp(omega[0]), d[1].clamp(omega[1]), d[2].clamp(omega[2]))
    }

    /// Solve `z(ω) = target` by Newton iteration from `guess`.
    ///
    /// Iterates are clamped to the domain box shrunk by [`EPS_DOM`]. On
    /// success `‖z(ω) − target‖ ≤ 1e-11 (1 + ‖target‖)`; the result is
    /// then polished to rounding level.
    pub fn invert(&self, target: &Vec3, guess: &Vec3) -> Result<Vec3> {
        let tol = 1e-11 * (1.0 + target.norm());
        let mut omega = self.clamp(guess);
        let mut residual = (self.forward_unchecked(&omega) - target).norm();
        let fail = |omega: &Vec3, residual: f64| Error::Inversion {
            system: self.id,
            last: [omega[0], omega[1], omega[2]],
            residual,
        };
        let mut polish = 0;
        for _ in 0..NEWTON_MAX_ITER {
            if residual <= tol {
                polish += 1;
                if polish > 2 || residual == 0.0 {
                    return Ok(omega);
                }
            }
            let jac = self.jacobian_unchecked(&omega);
            let Some(inv) = invert3(&jac) else {
                return Err(fail(&omega, residual));
            };
            let step = inv * (self.forward_unchecked(&omega) - target);
            let mut scale = 1.0;
            let mut accepted = false;
            for _ in 0..20 {
                let trial = self.clamp(&(omega - step * scale));
                let r = (self.forward_unchecked(&trial) - target).norm();
                if r.is_finite() && (r < residual || (residual <= tol && r <= tol)) {
                    omega = trial;
                    residual = r;
                    accepted = true;
                    break;
                }
                scale *= 0.5;
            }
            if !accepted {
                if residual <= tol {
                    return Ok(omega);
                }
                return Err(fail(&omega, residual));
            }
        }
        if residual <= tol {
            Ok(omega)
        } else {
            Err(fail(&omega, residual))
        }
    }

    /// Ratio of the largest to the smallest Jacobian column norm.
    pub fn column_condition(&self, omega: &Vec3) -> f64 {
        let j = self.jacobian_unchecked(omega);
        let norms = [j.column(0).norm(), j.column(1).norm(), j.column(2).norm()];
        let max = norms.iter().cloned().fold(0.0, f64::max);
        let min = norms.iter().cloned().fold(f64::INFINITY, f64::min);
        if min > 0.0 {
            max / min
        } else {
            f64::INFINITY
        }
    }

    /// The bounded box samples are drawn from.
    pub fn sampling_box(&self) -> [(f64, f64); 3] {
        let d = self.domain();
        [d[0].sampling_range(), d[1].sampling_range(), d[2].sampling_range()]
    }

    /// Deterministic interior samples drawn uniformly from
    /// [`sampling_box`](Self::sampling_box); points whose Jacobian column
    /// norms differ by more than [`SAMPLE_CONDITION_LIMIT`] are redrawn.
    pub fn sample_domain(&self, seed: u64, n: usize) -> Vec<Vec3> {
        sample_box(self, &self.sampling_box(), seed, n)
    }
}

/// Deterministic samples from an explicit box inside the domain of `system`,
/// with the same conditioning filter as
/// [`CoordinateSystem::sample_domain`].
pub fn sample_box(system: &CoordinateSystem, bounds: &[(f64, f64); 3], seed: u64, n: usize) -> Vec<Vec3> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    let mut attempts = 0usize;
    while out.len() < n && attempts < 1000 * n.max(1) {
        attempts += 1;
        let omega = Vec3::new(
            draw(&mut rng, bounds[0]),
            draw(&mut rng, bounds[1]),
            draw(&mut rng, bounds[2]),
        );
        if system.check_domain(&omega).is_err() {
            continue;
        }
        if system.column_condition(&omega) > SAMPLE_CONDITION_LIMIT {
            continue;
        }
        out.push(omega);
    }
    out
}

fn draw(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if hi > lo {
        rng.gen_range(lo..hi)
    } else {
        lo
    }
}
