//! Reduced equations and separated solutions.
//!
//! A separated solution has the form
//! `ψ(t, x) = Q(t, x) φ₀(t) φ₁(ω₁) φ₂(ω₂) φ₃(ω₃)` where
//!
//! * `i φ₀' = (T₀(t) − T_i(t) λ_i) φ₀`, solved by quadrature of the exponent;
//! * `φ_a'' = (F_{a0}(ω_a) + F_{ai}(ω_a) λ_i) φ_a`, integrated numerically on
//!   a compact range and stored as a quintic Hermite interpolant;
//! * `Q = 1` for magnetic and Coulomb potentials, `Q = e^{iS}` for
//!   electrostatic ones.
//!
//! The Hamilton–Jacobi counterpart `u = S + φ₀(t) + Σ φ_a(ω_a)` uses
//! `φ₀' = −T̃₀ − T_i λ_i` and `φ_a' = ±(−F_{a0} + F_{ai} λ_i)^{1/2}`.

use std::fmt::Write as _;

use nalgebra::Matrix4x3;
use num_complex::Complex64;
use ode_solvers::dop_shared::IntegrationError;
use ode_solvers::{Dopri5, OutputType, System, Vector4};
use serde::{Deserialize, Serialize};

use crate::coords::{CoordinateSystem, SystemId};
use crate::hermite::{ComplexHermite, Node};
use crate::potential::{PotentialKind, PotentialSpec};
use crate::quadrature::{gauss_legendre_8, integrate};
use crate::stackel::{stackel_values, t_functions};
use crate::{Error, Result, Vec3};

/// Integrator tolerances.
pub const ODE_RTOL: f64 = 1e-10;
pub const ODE_ATOL: f64 = 1e-12;

/// Minimum number of steps across an integration range.
pub const MIN_STEPS: f64 = 400.0;

/// Relative tolerance of the `φ₀` exponent quadrature.
pub const PHI0_RTOL: f64 = 1e-12;

/// Points at which Hamilton–Jacobi radicands are checked.
pub const RADICAND_GRID: usize = 256;

/// Real separation constants `λ₁, λ₂, λ₃`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SeparationConstants {
    pub lambda: [f64; 3],
}

impl SeparationConstants {
    pub fn new(lambda: [f64; 3]) -> Result<Self> {
        if lambda.iter().any(|l| !l.is_finite()) {
            return Err(Error::Config(format!("separation constants must be finite, got {lambda:?}")));
        }
        Ok(Self { lambda })
    }
}

/// `F_{a0}(ω_a) + Σ_i F_{ai}(ω_a) λ_i`; `axis` is 1-based.
pub fn ode_coefficient(spec: &PotentialSpec, axis: usize, omega_a: f64, lambda: &SeparationConstants) -> Result<f64> {
    check_axis(axis)?;
    spec.ode_coefficient(axis - 1, omega_a, &lambda.lambda)
}

fn check_axis(axis: usize) -> Result<()> {
    if !(1..=3).contains(&axis) {
        return Err(Error::Usage(format!("axis must be 1, 2 or 3, got {axis}")));
    }
    Ok(())
}

/// Fraction of each sampling range kept by [`default_ranges`].
pub const DEFAULT_RANGE_FRACTION: f64 = 0.6;

/// The central part of the sampling box of `system`, away from coordinate
/// singularities; a convenient integration box for the reduced equations.
///
/// The paraboloidal map folds across the line `ω₂ = π/2, ω₃ = 0`, so its
/// third range is taken from the positive half only.
pub fn default_ranges(system: &CoordinateSystem) -> [(f64, f64); 3] {
    let mut ranges = system.sampling_box().map(|(lo, hi)| {
        let pad = 0.5 * (1.0 - DEFAULT_RANGE_FRACTION) * (hi - lo);
        (lo + pad, hi - pad)
    });
    if system.id() == SystemId::Paraboloidal {
        ranges[2] = (0.1 * ranges[2].1, ranges[2].1);
    }
    ranges
}

/// `φ₀(t)`, evaluated by quadrature from the anchor `t₀` where `φ₀ = 1`.
#[derive(Clone, Debug)]
pub struct Phi0 {
    spec: PotentialSpec,
    lambda: [f64; 3],
    t0: f64,
    range: (f64, f64),
    imaginary_t0: bool,
}

impl Phi0 {
    pub fn anchor(&self) -> f64 {
        self.t0
    }

    pub fn range(&self) -> (f64, f64) {
        self.range
    }

    /// The constants used in the exponent; differs from the solution's
    /// `λ` only for deliberately mismatched diagnostics.
    pub fn lambda(&self) -> [f64; 3] {
        self.lambda
    }

    pub fn includes_imaginary_t0(&self) -> bool {
        self.imaginary_t0
    }

    /// `∫_{t₀}^{t} (T₀ − T_i λ_i) dτ`.
    pub fn exponent(&self, t: f64) -> Result<Complex64> {
        let real = integrate(
            |tau| {
                let tt = t_functions(self.spec.system(), self.spec.frame(), tau);
                self.spec.t0_tilde().value(tau) - (0..3).map(|i| tt[i] * self.lambda[i]).sum::<f64>()
            },
            self.t0,
            t,
            PHI0_RTOL,
            1e-15,
        )?;
        let imag = if self.imaginary_t0 {
            integrate(|tau| -0.5 * self.spec.frame().log_rates(tau).sum(), self.t0, t, PHI0_RTOL, 1e-15)?
        } else {
            0.0
        };
        Ok(Complex64::new(real, imag))
    }

    pub fn eval(&self, t: f64) -> Result<Complex64> {
        let (lo, hi) = self.range;
        if !(t >= lo && t <= hi) {
            return Err(Error::OutOfRange { axis: 0, value: t, lo, hi });
        }
        Ok((Complex64::new(0.0, -1.0) * self.exponent(t)?).exp())
    }
}

/// `φ₀` for `spec` and `λ`, anchored at `t0 ∈ t_range`.
pub fn solve_phi0(spec: &PotentialSpec, lambda: &SeparationConstants, t_range: (f64, f64), t0: f64) -> Result<Phi0> {
    solve_phi0_with(spec, lambda.lambda, t_range, t0, true)
}

/// As [`solve_phi0`], optionally dropping the imaginary part of `T₀`.
pub fn solve_phi0_with(
    spec: &PotentialSpec,
    lambda: [f64; 3],
    t_range: (f64, f64),
    t0: f64,
    imaginary_t0: bool,
) -> Result<Phi0> {
    let (lo, hi) = t_range;
    if !(lo < hi && t0 >= lo && t0 <= hi) {
        return Err(Error::Config(format!(
            "time range [{lo}, {hi}] must be nonempty and contain the anchor {t0}"
        )));
    }
    Ok(Phi0 {
        spec: spec.clone(),
        lambda,
        t0,
        range: t_range,
        imaginary_t0,
    })
}

struct Fundamental<F: Fn(f64) -> f64> {
    coefficient: F,
}

impl<F: Fn(f64) -> f64> System<f64, Vector4<f64>> for Fundamental<F> {
    // two real solutions u, v of y'' = c y: state (u, v, u', v')
    fn system(&self, x: f64, y: &Vector4<f64>, dy: &mut Vector4<f64>) {
        let c = (self.coefficient)(x);
        dy[0] = y[2];
        dy[1] = y[3];
        dy[2] = c * y[0];
        dy[3] = c * y[1];
    }
}

/// Integrate `φ'' = c(ω) φ` on `[lo, hi]` from `φ(lo) = value`,
/// `φ'(lo) = slope`.
///
/// The two real fundamental solutions are integrated once with a
/// Dormand–Prince 5(4) pair and combined, so the result is exactly linear
/// in the initial data. `axis` only labels errors.
pub fn solve_linear_ode(
    coefficient: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    initial: (Complex64, Complex64),
    axis: usize,
) -> Result<ComplexHermite> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Config(format!("integration range [{lo}, {hi}] is empty")));
    }
    let width = hi - lo;
    let system = Fundamental {
        coefficient: &coefficient,
    };
    let mut stepper = Dopri5::from_param(
        system,
        lo,
        hi,
        width,
        Vector4::new(1.0, 0.0, 0.0, 1.0),
        ODE_RTOL,
        ODE_ATOL,
        0.9,
        0.04,
        0.2,
        10.0,
        width / MIN_STEPS,
        0.0,
        1_000_000,
        u32::MAX,
        OutputType::Sparse,
    );
    stepper.integrate().map_err(|e| {
        let (at, reason) = match e {
            IntegrationError::MaxNumStepReached { x, n_step } => (x, format!("more than {n_step} steps needed")),
            IntegrationError::StepSizeUnderflow { x } => (x, "step size underflow".to_string()),
            IntegrationError::StiffnessDetected { x } => (x, "stiffness detected".to_string()),
        };
        Error::Integration { axis, at, reason }
    })?;
    let (value, slope) = initial;
    let mut nodes: Vec<Node> = Vec::with_capacity(stepper.x_out().len());
    for (x, y) in stepper.x_out().iter().zip(stepper.y_out()) {
        if !y.iter().all(|v| v.is_finite()) {
            return Err(Error::Integration {
                axis,
                at: *x,
                reason: "solution overflowed".into(),
            });
        }
        if nodes.last().is_some_and(|n| *x <= n.x) {
            continue;
        }
        let phi = value * y[0] + slope * y[1];
        let dphi = value * y[2] + slope * y[3];
        nodes.push(Node {
            x: *x,
            value: phi,
            slope: dphi,
            curvature: coefficient(*x) * phi,
        });
    }
    ComplexHermite::new(nodes)
}

/// One integrated factor `φ_a` of a separated solution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisSolution {
    /// 1-based axis index.
    pub axis: usize,
    pub initial: (Complex64, Complex64),
    interpolant: ComplexHermite,
}

impl AxisSolution {
    pub fn range(&self) -> (f64, f64) {
        (self.interpolant.lo(), self.interpolant.hi())
    }

    pub fn interpolant(&self) -> &ComplexHermite {
        &self.interpolant
    }

    /// `(φ_a(ω), φ_a'(ω))`.
    pub fn eval(&self, omega: f64) -> Result<(Complex64, Complex64)> {
        self.interpolant.eval(omega).ok_or(Error::OutOfRange {
            axis: self.axis,
            value: omega,
            lo: self.interpolant.lo(),
            hi: self.interpolant.hi(),
        })
    }

    /// Nodes as CSV: `omega,re_phi,im_phi,re_dphi,im_dphi`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("omega,re_phi,im_phi,re_dphi,im_dphi\n");
        for n in self.interpolant.nodes() {
            let _ = writeln!(
                out,
                "{:e},{:e},{:e},{:e},{:e}",
                n.x, n.value.re, n.value.im, n.slope.re, n.slope.im
            );
        }
        out
    }
}

/// Integrate `φ_a` for `spec` on `range`; `axis` is 1-based.
pub fn solve_phi_a(
    spec: &PotentialSpec,
    axis: usize,
    lambda: &SeparationConstants,
    range: (f64, f64),
    initial: (Complex64, Complex64),
) -> Result<AxisSolution> {
    check_axis(axis)?;
    let iv = spec.system().domain()[axis - 1];
    for end in [range.0, range.1] {
        if !iv.contains(end) {
            return Err(Error::OutsideDomain {
                system: spec.system().id(),
                axis,
                value: end,
            });
        }
    }
    let l = lambda.lambda;
    let interpolant = solve_linear_ode(
        |w| spec.ode_coefficient_unchecked(axis - 1, w, &l),
        range.0,
        range.1,
        initial,
        axis,
    )?;
    Ok(AxisSolution {
        axis,
        initial,
        interpolant,
    })
}

/// The modulation factor `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Modulation {
    /// `Q = 1`.
    Unit,
    /// `Q = e^{iS}`.
    Phase,
}

impl Modulation {
    pub fn for_kind(kind: PotentialKind) -> Self {
        match kind {
            PotentialKind::Electrostatic => Modulation::Phase,
            _ => Modulation::Unit,
        }
    }
}

/// Ranges, initial data and time window of a separation run.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparationSetup {
    pub ranges: [(f64, f64); 3],
    pub initial: [(Complex64, Complex64); 3],
    pub t_range: (f64, f64),
    pub t0: f64,
}

impl SeparationSetup {
    /// Unit initial data `(1, 0)` on every axis.
    pub fn new(ranges: [(f64, f64); 3], t_range: (f64, f64), t0: f64) -> Self {
        let one = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        Self {
            ranges,
            initial: [one; 3],
            t_range,
            t0,
        }
    }
}

/// `ψ = Q φ₀ φ₁ φ₂ φ₃`.
#[derive(Clone, Debug)]
pub struct SeparatedSolution {
    spec: PotentialSpec,
    lambda: SeparationConstants,
    phi0: Phi0,
    axes: [AxisSolution; 3],
    modulation: Modulation,
}

impl SeparatedSolution {
    /// Integrates all four reduced equations.
    pub fn build(spec: &PotentialSpec, lambda: SeparationConstants, setup: &SeparationSetup) -> Result<Self> {
        let phi0 = solve_phi0(spec, &lambda, setup.t_range, setup.t0)?;
        let axes = [1, 2, 3].map(|a| solve_phi_a(spec, a, &lambda, setup.ranges[a - 1], setup.initial[a - 1]));
        let [a1, a2, a3] = axes;
        Self::from_parts(
            spec.clone(),
            lambda,
            phi0,
            [a1?, a2?, a3?],
            Modulation::for_kind(spec.kind()),
        )
    }

    /// Assemble from pieces without any consistency check between them;
    /// used for stored solutions and deliberate mismatches.
    pub fn from_parts(
        spec: PotentialSpec,
        lambda: SeparationConstants,
        phi0: Phi0,
        axes: [AxisSolution; 3],
        modulation: Modulation,
    ) -> Result<Self> {
        for (i, a) in axes.iter().enumerate() {
            if a.axis != i + 1 {
                return Err(Error::Config(format!("axis solution {} stored in slot {}", a.axis, i + 1)));
            }
            let iv = spec.system().domain()[i];
            let (lo, hi) = a.range();
            if !iv.contains(lo) || !iv.contains(hi) {
                return Err(Error::OutsideDomain {
                    system: spec.system().id(),
                    axis: i + 1,
                    value: if iv.contains(lo) { hi } else { lo },
                });
            }
        }
        Ok(Self {
            spec,
            lambda,
            phi0,
            axes,
            modulation,
        })
    }

    pub fn spec(&self) -> &PotentialSpec {
        &self.spec
    }

    pub fn lambda(&self) -> &SeparationConstants {
        &self.lambda
    }

    pub fn phi0(&self) -> &Phi0 {
        &self.phi0
    }

    pub fn axes(&self) -> &[AxisSolution; 3] {
        &self.axes
    }

    pub fn modulation(&self) -> Modulation {
        self.modulation
    }

    pub fn ranges(&self) -> [(f64, f64); 3] {
        [self.axes[0].range(), self.axes[1].range(), self.axes[2].range()]
    }

    /// `ψ` at time `t` and coordinates `ω` (`x` is needed only for `Q`).
    pub fn evaluate_at(&self, t: f64, omega: &Vec3, x: &Vec3) -> Result<Complex64> {
        let mut psi = self.phi0.eval(t)?;
        for (a, axis) in self.axes.iter().enumerate() {
            psi *= axis.eval(omega[a])?.0;
        }
        if self.modulation == Modulation::Phase {
            psi *= Complex64::new(0.0, self.spec.phase_unchecked(t, x)).exp();
        }
        Ok(psi)
    }

    /// `ψ(t, x)`; `omega_hint` seeds the inversion `x → ω`.
    pub fn evaluate_psi(&self, t: f64, x: &Vec3, omega_hint: &Vec3) -> Result<Complex64> {
        let omega = self
            .spec
            .frame()
            .locate(self.spec.system(), t, x, omega_hint)?;
        self.evaluate_at(t, &omega, x)
    }
}

/// Singular values (descending) of the 4×3 matrix with rows
/// `(T₁, T₂, T₃)` and the Stäckel rows: the derivatives of the four reduced
/// equations with respect to `λ`.
pub fn separation_rank(spec: &PotentialSpec, t: f64, omega: &Vec3) -> Result<[f64; 3]> {
    let f = stackel_values(spec.system(), omega)?;
    let tt = t_functions(spec.system(), spec.frame(), t);
    let m = Matrix4x3::new(
        tt[0],
        tt[1],
        tt[2],
        f[(0, 0)],
        f[(0, 1)],
        f[(0, 2)],
        f[(1, 0)],
        f[(1, 1)],
        f[(1, 2)],
        f[(2, 0)],
        f[(2, 1)],
        f[(2, 2)],
    );
    let sv = m.svd(false, false).singular_values;
    let mut out = [sv[0], sv[1], sv[2]];
    out.sort_by(|a, b| b.total_cmp(a));
    Ok(out)
}

const HJ_PANELS: usize = 256;

/// One additive action term `φ_a`.
#[derive(Clone, Debug, PartialEq)]
pub struct HjAxis {
    pub axis: usize,
    pub sign: f64,
    lo: f64,
    hi: f64,
    cumulative: Vec<f64>,
}

impl HjAxis {
    pub fn range(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    fn panel_width(&self) -> f64 {
        (self.hi - self.lo) / HJ_PANELS as f64
    }
}

/// Hamilton–Jacobi action `u = S + φ₀(t) + Σ φ_a(ω_a)`.
#[derive(Clone, Debug)]
pub struct HjAction {
    spec: PotentialSpec,
    lambda: SeparationConstants,
    t0: f64,
    axes: [HjAxis; 3],
    offsets: [f64; 3],
}

fn radicand(spec: &PotentialSpec, axis: usize, omega: f64, lambda: &[f64; 3]) -> f64 {
    // −F_{a0} + F_{ai} λ_i
    let c = spec.ode_coefficient_unchecked(axis, omega, lambda);
    let f0 = spec.f0_value(axis, omega);
    c - 2.0 * f0
}

/// Build the action on `ranges` with branch `signs` (each ±1) and time
/// anchor `t0` (`φ₀(t0) = 0`).
pub fn hj_solve(
    spec: &PotentialSpec,
    lambda: &SeparationConstants,
    ranges: [(f64, f64); 3],
    signs: [f64; 3],
    t0: f64,
) -> Result<HjAction> {
    let l = lambda.lambda;
    let mut axes = Vec::with_capacity(3);
    for a in 0..3 {
        let (lo, hi) = ranges[a];
        if !(lo < hi) {
            return Err(Error::Config(format!("range of axis {} is empty", a + 1)));
        }
        if signs[a] != 1.0 && signs[a] != -1.0 {
            return Err(Error::Config(format!("branch sign of axis {} must be ±1", a + 1)));
        }
        let iv = spec.system().domain()[a];
        for end in [lo, hi] {
            if !iv.contains(end) {
                return Err(Error::OutsideDomain {
                    system: spec.system().id(),
                    axis: a + 1,
                    value: end,
                });
            }
        }
        for i in 0..RADICAND_GRID {
            let w = lo + (hi - lo) * i as f64 / (RADICAND_GRID - 1) as f64;
            let r = radicand(spec, a, w, &l);
            if !(r >= 0.0) {
                return Err(Error::TurningPoint {
                    axis: a + 1,
                    at: w,
                    radicand: r,
                });
            }
        }
        let width = (hi - lo) / HJ_PANELS as f64;
        let mut cumulative = Vec::with_capacity(HJ_PANELS + 1);
        cumulative.push(0.0);
        let mut acc = 0.0;
        for p in 0..HJ_PANELS {
            let (x0, x1) = (lo + width * p as f64, lo + width * (p + 1) as f64);
            acc += integrate(|w| radicand(spec, a, w, &l).max(0.0).sqrt(), x0, x1, 1e-13, 1e-15)?;
            cumulative.push(acc);
        }
        axes.push(HjAxis {
            axis: a + 1,
            sign: signs[a],
            lo,
            hi,
            cumulative,
        });
    }
    let axes: [HjAxis; 3] = axes.try_into().expect("three axes");
    Ok(HjAction {
        spec: spec.clone(),
        lambda: *lambda,
        t0,
        axes,
        offsets: [0.0; 3],
    })
}

impl HjAction {
    pub fn spec(&self) -> &PotentialSpec {
        &self.spec
    }

    pub fn lambda(&self) -> &SeparationConstants {
        &self.lambda
    }

    pub fn axes(&self) -> &[HjAxis; 3] {
        &self.axes
    }

    /// The same action with `φ_a` shifted by constants.
    pub fn with_offsets(mut self, offsets: [f64; 3]) -> Self {
        self.offsets = offsets;
        self
    }

    /// `φ₀(t) = −∫_{t₀}^{t} (T̃₀ + T_i λ_i) dτ`.
    pub fn phi0(&self, t: f64) -> Result<f64> {
        let l = self.lambda.lambda;
        let v = integrate(
            |tau| {
                let tt = t_functions(self.spec.system(), self.spec.frame(), tau);
                self.spec.t0_tilde().value(tau) + (0..3).map(|i| tt[i] * l[i]).sum::<f64>()
            },
            self.t0,
            t,
            PHI0_RTOL,
            1e-15,
        )?;
        Ok(-v)
    }

    /// `φ_a(ω)` on 1-based `axis`.
    pub fn phi_a(&self, axis: usize, omega: f64) -> Result<f64> {
        check_axis(axis)?;
        let ax = &self.axes[axis - 1];
        if !(omega >= ax.lo && omega <= ax.hi) {
            return Err(Error::OutOfRange {
                axis,
                value: omega,
                lo: ax.lo,
                hi: ax.hi,
            });
        }
        let width = ax.panel_width();
        let p = (((omega - ax.lo) / width) as usize).min(HJ_PANELS - 1);
        let start = ax.lo + width * p as f64;
        let l = self.lambda.lambda;
        let partial = gauss_legendre_8(
            |w| radicand(&self.spec, axis - 1, w, &l).max(0.0).sqrt(),
            start,
            omega,
        );
        Ok(ax.sign * (ax.cumulative[p] + partial) + self.offsets[axis - 1])
    }

    /// `u` at time `t` and coordinates `ω` (`x` is needed for `S`).
    pub fn evaluate_at(&self, t: f64, omega: &Vec3, x: &Vec3) -> Result<f64> {
        let mut u = self.phi0(t)?;
        for a in 0..3 {
            u += self.phi_a(a + 1, omega[a])?;
        }
        if self.spec.kind() == PotentialKind::Electrostatic {
            u += self.spec.phase_unchecked(t, x);
        }
        Ok(u)
    }

    /// `u(t, x)`; `omega_hint` seeds the inversion.
    pub fn action(&self, t: f64, x: &Vec3, omega_hint: &Vec3) -> Result<f64> {
        let omega = self
            .spec
            .frame()
            .locate(self.spec.system(), t, x, omega_hint)?;
        self.evaluate_at(t, &omega, x)
    }
}
