//! Time-dependent frames `x = T(t) H(t) z(ω) + w(t)`.
//!
//! `T` is the Euler rotation built from `α, β, γ`, `H = diag(h₁, h₂, h₃)` a
//! positive scaling and `w` a translation. Which scalings may differ is fixed
//! by the split class of the coordinate system the frame is used with:
//! complete allows three independent `h_i`, partial needs `h₁ = h₂`, nonsplit
//! needs `h₁ = h₂ = h₃`.

use serde::{Deserialize, Serialize};

use crate::coords::{CoordinateSystem, SplitClass};
use crate::profile::{probe_grid, Jet, Profile};
use crate::{invert3, Error, Mat3, Result, Vec3};

/// Probe window and resolution used for construction-time checks.
pub const PROBE_WINDOW: (f64, f64) = (-2.0, 2.0);
pub const PROBE_POINTS: usize = 64;

/// Tolerance for the equal-scaling constraints of the split classes.
pub const CLASS_TOLERANCE: f64 = 1e-12;

/// Rates below this count as a non-rotating frame.
pub const ROTATION_TOLERANCE: f64 = 1e-10;

fn unit() -> Profile {
    Profile::constant(1.0)
}

fn units() -> [Profile; 3] {
    [unit(), unit(), unit()]
}

/// Raw frame profiles as they appear in a scenario. Missing angles and
/// translations default to zero, missing scalings to one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameProfiles {
    #[serde(default)]
    pub alpha: Profile,
    #[serde(default)]
    pub beta: Profile,
    #[serde(default)]
    pub gamma: Profile,
    #[serde(default = "units")]
    pub h: [Profile; 3],
    #[serde(default)]
    pub w: [Profile; 3],
}

impl Default for FrameProfiles {
    fn default() -> Self {
        Self {
            alpha: Profile::zero(),
            beta: Profile::zero(),
            gamma: Profile::zero(),
            h: units(),
            w: Default::default(),
        }
    }
}

/// A validated frame.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameSpec {
    profiles: FrameProfiles,
    class: SplitClass,
}

/// The three rotation-rate expressions
/// `α̇ + β̇ cos γ`, `β̇ cos α sin γ − γ̇ sin α`, `β̇ sin α sin γ + γ̇ cos α`.
pub fn rate_expressions(alpha: Jet, beta: Jet, gamma: Jet) -> [f64; 3] {
    let (sa, ca) = alpha.value.sin_cos();
    let (sg, cg) = gamma.value.sin_cos();
    [
        alpha.d1 + beta.d1 * cg,
        beta.d1 * ca * sg - gamma.d1 * sa,
        beta.d1 * sa * sg + gamma.d1 * ca,
    ]
}

/// The Euler rotation matrix for angles `(α, β, γ)`.
pub fn euler_matrix(alpha: f64, beta: f64, gamma: f64) -> Mat3 {
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    let (sg, cg) = gamma.sin_cos();
    Mat3::new(
        ca * cb - sa * sb * cg,
        -ca * sb - sa * cb * cg,
        sa * sg,
        sa * cb + ca * sb * cg,
        -sa * sb + ca * cb * cg,
        -ca * sg,
        sb * sg,
        cb * sg,
        cg,
    )
}

/// The skew matrix with `(2,1)`, `(3,1)`, `(3,2)` entries `r₁, r₂, r₃`.
pub fn skew_from_rates(r: [f64; 3]) -> Mat3 {
    Mat3::new(0.0, -r[0], -r[1], r[0], 0.0, -r[2], r[1], r[2], 0.0)
}

/// Axial vector `(K₃₂, K₁₃, K₂₁)` of the skew part of `m`, so that
/// `skew(m)·x = axial × x`.
pub fn axial_vector(m: &Mat3) -> Vec3 {
    let k = 0.5 * (m - m.transpose());
    Vec3::new(k[(2, 1)], k[(0, 2)], k[(1, 0)])
}

impl FrameSpec {
    /// Validates `h_i > 0`, the equal-scaling rule of `class` and the
    /// derivative consistency of every profile on the probe grid.
    pub fn new(profiles: FrameProfiles, class: SplitClass) -> Result<Self> {
        let (lo, hi) = PROBE_WINDOW;
        let named = [
            ("alpha", &profiles.alpha),
            ("beta", &profiles.beta),
            ("gamma", &profiles.gamma),
            ("h1", &profiles.h[0]),
            ("h2", &profiles.h[1]),
            ("h3", &profiles.h[2]),
            ("w1", &profiles.w[0]),
            ("w2", &profiles.w[1]),
            ("w3", &profiles.w[2]),
        ];
        for (name, p) in named {
            let scale = probe_grid(lo, hi, PROBE_POINTS)
                .map(|t| p.jet(t).d1.abs())
                .fold(1.0, f64::max);
            let mismatch = p.derivative_mismatch(lo, hi, PROBE_POINTS);
            if !(mismatch <= 1e-6 * scale) {
                return Err(Error::Config(format!(
                    "profile {name} has inconsistent derivatives (mismatch {mismatch:e})"
                )));
            }
        }
        for t in probe_grid(lo, hi, PROBE_POINTS) {
            let h = profiles.h.each_ref().map(|p| p.value(t));
            if let Some(i) = h.iter().position(|v| !(*v > 0.0)) {
                return Err(Error::Config(format!(
                    "scaling h{} must stay positive, found {} at t = {t}",
                    i + 1,
                    h[i]
                )));
            }
            let tied: &[(usize, usize)] = match class {
                SplitClass::Complete => &[],
                SplitClass::Partial => &[(0, 1)],
                SplitClass::Nonsplit => &[(0, 1), (0, 2)],
            };
            for &(i, j) in tied {
                if (h[i] - h[j]).abs() > CLASS_TOLERANCE * h[i].abs().max(1.0) {
                    return Err(Error::Config(format!(
                        "{class:?} frames need h{} = h{}, they differ at t = {t}",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Self { profiles, class })
    }

    /// `T = H = I`, `w = 0`.
    pub fn identity(class: SplitClass) -> Self {
        Self::new(FrameProfiles::default(), class).expect("identity frame is valid")
    }

    pub fn profiles(&self) -> &FrameProfiles {
        &self.profiles
    }

    pub fn class(&self) -> SplitClass {
        self.class
    }

    /// A frame can serve a system whose split class is no stricter than the
    /// frame's own.
    pub fn check_compatible(&self, system: &CoordinateSystem) -> Result<()> {
        if self.class < system.split_class() {
            return Err(Error::Config(format!(
                "a {:?} frame cannot be used with the {:?} system {}",
                self.class,
                system.split_class(),
                system.id()
            )));
        }
        Ok(())
    }

    fn angles(&self, t: f64) -> (Jet, Jet, Jet) {
        (
            self.profiles.alpha.jet(t),
            self.profiles.beta.jet(t),
            self.profiles.gamma.jet(t),
        )
    }

    pub fn rotation_matrix(&self, t: f64) -> Mat3 {
        let (a, b, g) = self.angles(t);
        euler_matrix(a.value, b.value, g.value)
    }

    pub fn rate_expressions(&self, t: f64) -> [f64; 3] {
        let (a, b, g) = self.angles(t);
        rate_expressions(a, b, g)
    }

    /// `Ṫ T⁻¹` from the closed-form skew matrix.
    pub fn rotation_rate(&self, t: f64) -> Mat3 {
        skew_from_rates(self.rate_expressions(t))
    }

    pub fn rotation_derivative(&self, t: f64) -> Mat3 {
        self.rotation_rate(t) * self.rotation_matrix(t)
    }

    /// Largest rotation-rate expression over the probe grid.
    pub fn max_rotation_rate(&self) -> f64 {
        let (lo, hi) = PROBE_WINDOW;
        probe_grid(lo, hi, PROBE_POINTS)
            .flat_map(|t| self.rate_expressions(t))
            .map(f64::abs)
            .fold(0.0, f64::max)
    }

    pub fn is_rotating(&self) -> bool {
        self.max_rotation_rate() > ROTATION_TOLERANCE
    }

    pub fn scaling(&self, t: f64) -> [Jet; 3] {
        self.profiles.h.each_ref().map(|p| p.jet(t))
    }

    pub fn translation(&self, t: f64) -> [Jet; 3] {
        self.profiles.w.each_ref().map(|p| p.jet(t))
    }

    pub fn h(&self, t: f64) -> Vec3 {
        let s = self.scaling(t);
        Vec3::new(s[0].value, s[1].value, s[2].value)
    }

    pub fn w(&self, t: f64) -> Vec3 {
        let s = self.translation(t);
        Vec3::new(s[0].value, s[1].value, s[2].value)
    }

    pub fn w_dot(&self, t: f64) -> Vec3 {
        let s = self.translation(t);
        Vec3::new(s[0].d1, s[1].d1, s[2].d1)
    }

    /// `ḣ_i / h_i`.
    pub fn log_rates(&self, t: f64) -> Vec3 {
        let s = self.scaling(t);
        Vec3::new(s[0].d1 / s[0].value, s[1].d1 / s[1].value, s[2].d1 / s[2].value)
    }

    /// `M = Ṫ T⁻¹ + T Ḣ H⁻¹ T⁻¹`.
    pub fn m_matrix(&self, t: f64) -> Mat3 {
        let rot = self.rotation_matrix(t);
        let stretch = Mat3::from_diagonal(&self.log_rates(t));
        self.rotation_rate(t) + rot * stretch * rot.transpose()
    }

    /// `T H`, the linear part of the frame map.
    pub fn linear_part(&self, t: f64) -> Mat3 {
        self.rotation_matrix(t) * Mat3::from_diagonal(&self.h(t))
    }

    /// `x = T H z(ω) + w`.
    pub fn embed(&self, system: &CoordinateSystem, t: f64, omega: &Vec3) -> Result<Vec3> {
        self.check_compatible(system)?;
        let z = system.forward(omega)?;
        Ok(self.linear_part(t) * z + self.w(t))
    }

    /// Inverse of [`embed`](Self::embed), Newton-seeded with `guess`.
    pub fn locate(&self, system: &CoordinateSystem, t: f64, x: &Vec3, guess: &Vec3) -> Result<Vec3> {
        self.check_compatible(system)?;
        let h = self.h(t);
        let local = self.rotation_matrix(t).transpose() * (x - self.w(t));
        let z = Vec3::new(local[0] / h[0], local[1] / h[1], local[2] / h[2]);
        system.invert(&z, guess)
    }

    /// Cartesian gradients `∇ω_i`, the rows of `(T H J)⁻¹`.
    pub fn omega_gradients(&self, system: &CoordinateSystem, t: f64, omega: &Vec3) -> Result<[Vec3; 3]> {
        self.check_compatible(system)?;
        let j = self.linear_part(t) * system.jacobian(omega)?;
        let inv = invert3(&j).ok_or(Error::Singular {
            system: system.id(),
            omega: [omega[0], omega[1], omega[2]],
        })?;
        Ok([0, 1, 2].map(|i| inv.row(i).transpose()))
    }
}
