//! Finite-difference residuals and geometric audits.
//!
//! All derivatives of the field under test use 4th-order central stencils
//! (five points per direction). Potentials come analytically from
//! [`PotentialSpec`]. Each residual is reported with a scale, the largest
//! magnitude among the individual terms of the equation at that point.

use std::fmt::Write as _;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coords::{sample_box, CoordinateSystem};
use crate::frame::FrameSpec;
use crate::potential::PotentialSpec;
use crate::separate::{HjAction, SeparatedSolution};
use crate::stackel::{metric_r_squared, stackel_values, t_functions};
use crate::{Error, Mat3, Result, Vec3};

/// Default time step, relative to the local time scale.
pub const DEFAULT_HT: f64 = 1e-3;
/// Default spatial step, relative to the local coordinate length.
pub const DEFAULT_HX: f64 = 1e-3;
/// Spatial step of the harmonicity audit, relative to the local length.
pub const HARMONIC_HX: f64 = 1e-3;
/// Fraction of each range kept clear of residual samples at either end.
pub const SAMPLE_INSET: f64 = 0.1;
/// Stencil order of every finite difference here.
pub const STENCIL_ORDER: u32 = 4;

/// A complex field `ψ(t, x)`. `omega_hint` is a nearby coordinate triple
/// for fields that need the inversion `x → ω`.
pub trait ComplexField: Sync {
    fn eval(&self, t: f64, x: &Vec3, omega_hint: &Vec3) -> Result<Complex64>;
}

/// A real field `u(t, x)`.
pub trait RealField: Sync {
    fn eval(&self, t: f64, x: &Vec3, omega_hint: &Vec3) -> Result<f64>;
}

/// Adapts a closure `(t, x) ↦ value` to [`ComplexField`] or [`RealField`].
pub struct FnField<F>(pub F);

impl<F: Fn(f64, &Vec3) -> Complex64 + Sync> ComplexField for FnField<F> {
    fn eval(&self, t: f64, x: &Vec3, _: &Vec3) -> Result<Complex64> {
        Ok((self.0)(t, x))
    }
}

impl<F: Fn(f64, &Vec3) -> f64 + Sync> RealField for FnField<F> {
    fn eval(&self, t: f64, x: &Vec3, _: &Vec3) -> Result<f64> {
        Ok((self.0)(t, x))
    }
}

impl ComplexField for SeparatedSolution {
    fn eval(&self, t: f64, x: &Vec3, omega_hint: &Vec3) -> Result<Complex64> {
        self.evaluate_psi(t, x, omega_hint)
    }
}

impl RealField for HjAction {
    fn eval(&self, t: f64, x: &Vec3, omega_hint: &Vec3) -> Result<f64> {
        self.action(t, x, omega_hint)
    }
}

/// A residual value with its scale.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointResidual<T> {
    pub value: T,
    pub scale: f64,
}

impl PointResidual<Complex64> {
    pub fn magnitude(&self) -> f64 {
        self.value.norm()
    }
}

impl PointResidual<f64> {
    pub fn magnitude(&self) -> f64 {
        self.value.abs()
    }
}

/// `|residual| / scale`, with `0/0 = 0`.
pub fn relative(residual: f64, scale: f64) -> f64 {
    if residual == 0.0 {
        0.0
    } else {
        residual / scale
    }
}

fn d1(f: &[Complex64; 5], h: f64) -> Complex64 {
    (f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12.0 * h)
}

fn d2(f: &[Complex64; 5], h: f64) -> Complex64 {
    (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h)
}

const OFFSETS: [f64; 5] = [-2.0, -1.0, 0.0, 1.0, 2.0];

/// Values, first and second derivatives along the three axes, plus the
/// center value.
struct SpatialStencil {
    center: Complex64,
    gradient: [Complex64; 3],
    laplacian: Complex64,
}

fn node_error(node: usize) -> impl FnOnce(Error) -> Error {
    move |e| Error::Stencil {
        node,
        source: Box::new(e),
    }
}

fn spatial_stencil(
    f: &dyn Fn(f64, &Vec3, &Vec3) -> Result<Complex64>,
    t: f64,
    x: &Vec3,
    hint: &Vec3,
    hx: f64,
) -> Result<SpatialStencil> {
    let center = f(t, x, hint).map_err(node_error(0))?;
    let mut gradient = [Complex64::new(0.0, 0.0); 3];
    let mut laplacian = Complex64::new(0.0, 0.0);
    for axis in 0..3 {
        let mut v = [center; 5];
        for (j, o) in OFFSETS.iter().enumerate() {
            if j == 2 {
                continue;
            }
            let mut p = *x;
            p[axis] += o * hx;
            let node = 1 + 4 * axis + if j < 2 { j } else { j - 1 };
            v[j] = f(t, &p, hint).map_err(node_error(node))?;
        }
        gradient[axis] = d1(&v, hx);
        laplacian += d2(&v, hx);
    }
    Ok(SpatialStencil {
        center,
        gradient,
        laplacian,
    })
}

fn time_derivative(
    f: &dyn Fn(f64, &Vec3, &Vec3) -> Result<Complex64>,
    t: f64,
    x: &Vec3,
    hint: &Vec3,
    center: Complex64,
    ht: f64,
) -> Result<Complex64> {
    let mut v = [center; 5];
    for (j, o) in OFFSETS.iter().enumerate() {
        if j == 2 {
            continue;
        }
        let node = 13 + if j < 2 { j } else { j - 1 };
        v[j] = f(t + o * ht, x, hint).map_err(node_error(node))?;
    }
    Ok(d1(&v, ht))
}

fn max_norm(terms: &[Complex64]) -> f64 {
    terms.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Residual of the time-dependent equation
/// `iψ_t − eA₀ψ + Δψ + 2ieĀ·∇ψ + ie(∇·Ā)ψ − e²Ā·Āψ`.
pub fn se_residual(
    psi: &dyn ComplexField,
    spec: &PotentialSpec,
    t: f64,
    x: &Vec3,
    omega_hint: &Vec3,
    ht: f64,
    hx: f64,
) -> Result<PointResidual<Complex64>> {
    let f = |t: f64, x: &Vec3, h: &Vec3| psi.eval(t, x, h);
    let s = spatial_stencil(&f, t, x, omega_hint, hx)?;
    let psi_t = time_derivative(&f, t, x, omega_hint, s.center, ht)?;
    let field = spec.vector_potential(t, x, omega_hint)?;
    let e = spec.charge();
    let i = Complex64::i();
    let ea = field.a * e;
    let a_dot_grad = s.gradient[0] * ea[0] + s.gradient[1] * ea[1] + s.gradient[2] * ea[2];
    let terms = [
        i * psi_t,
        -(e * field.a0) * s.center,
        s.laplacian,
        2.0 * i * a_dot_grad,
        i * (e * field.div_a) * s.center,
        -ea.norm_squared() * s.center,
    ];
    Ok(PointResidual {
        value: terms.iter().sum(),
        scale: max_norm(&terms),
    })
}

/// Residual of the stationary equation
/// `−Δψ − 2ieĀ·∇ψ − ie(∇·Ā)ψ + e²Ā·Āψ + eA₀ψ + Eψ` with the potentials
/// frozen at time `t`. A plane wave `e^{ik·x}` needs `E = −|k|²`.
pub fn stationary_residual(
    psi: &dyn ComplexField,
    spec: &PotentialSpec,
    t: f64,
    energy: f64,
    x: &Vec3,
    omega_hint: &Vec3,
    hx: f64,
) -> Result<PointResidual<Complex64>> {
    let f = |t: f64, x: &Vec3, h: &Vec3| psi.eval(t, x, h);
    let s = spatial_stencil(&f, t, x, omega_hint, hx)?;
    let field = spec.vector_potential(t, x, omega_hint)?;
    let e = spec.charge();
    let i = Complex64::i();
    let ea = field.a * e;
    let a_dot_grad = s.gradient[0] * ea[0] + s.gradient[1] * ea[1] + s.gradient[2] * ea[2];
    let terms = [
        -s.laplacian,
        -2.0 * i * a_dot_grad,
        -i * (e * field.div_a) * s.center,
        ea.norm_squared() * s.center,
        (e * field.a0) * s.center,
        energy * s.center,
    ];
    Ok(PointResidual {
        value: terms.iter().sum(),
        scale: max_norm(&terms),
    })
}

/// Residual of `u_t + eA₀ + (∇u + eĀ)·(∇u + eĀ)`.
pub fn hj_residual(
    u: &dyn RealField,
    spec: &PotentialSpec,
    t: f64,
    x: &Vec3,
    omega_hint: &Vec3,
    ht: f64,
    hx: f64,
) -> Result<PointResidual<f64>> {
    let f = |t: f64, x: &Vec3, h: &Vec3| u.eval(t, x, h).map(|v| Complex64::new(v, 0.0));
    let s = spatial_stencil(&f, t, x, omega_hint, hx)?;
    let u_t = time_derivative(&f, t, x, omega_hint, s.center, ht)?.re;
    let field = spec.vector_potential(t, x, omega_hint)?;
    let e = spec.charge();
    let p = Vec3::new(s.gradient[0].re, s.gradient[1].re, s.gradient[2].re) + field.a * e;
    let terms = [u_t, e * field.a0, p.norm_squared()];
    Ok(PointResidual {
        value: terms.iter().sum(),
        scale: terms.iter().map(|v| v.abs()).fold(0.0, f64::max),
    })
}

/// `∇ × Ā` by 4th-order central differences.
pub fn fd_curl(spec: &PotentialSpec, t: f64, x: &Vec3, h: f64) -> Vec3 {
    let a = |p: &Vec3| spec.e_vector_potential(t, p) / spec.charge();
    // jac[(i, j)] = ∂A_i/∂x_j
    let mut jac = Mat3::zeros();
    for j in 0..3 {
        let mut v = [Vec3::zeros(); 5];
        for (k, o) in OFFSETS.iter().enumerate() {
            let mut p = *x;
            p[j] += o * h;
            v[k] = a(&p);
        }
        let col = (v[0] - 8.0 * v[1] + 8.0 * v[3] - v[4]) / (12.0 * h);
        jac.set_column(j, &col);
    }
    Vec3::new(
        jac[(2, 1)] - jac[(1, 2)],
        jac[(0, 2)] - jac[(2, 0)],
        jac[(1, 0)] - jac[(0, 1)],
    )
}

/// Step sizes relative to the local time scale (see [`local_time_scale`])
/// and the local coordinate length `1 / maxᵢ ‖∇ωᵢ‖`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Steps {
    pub ht: f64,
    pub hx: f64,
}

impl Default for Steps {
    fn default() -> Self {
        Self {
            ht: DEFAULT_HT,
            hx: DEFAULT_HX,
        }
    }
}

/// `1 / maxᵢ ‖∇ωᵢ‖` at `(t, ω)`.
pub fn local_length(system: &CoordinateSystem, frame: &FrameSpec, t: f64, omega: &Vec3) -> Result<f64> {
    let g = frame.omega_gradients(system, t, omega)?;
    Ok(1.0 / g.iter().map(|v| v.norm()).fold(0.0, f64::max))
}

/// `1 / max(1, maxᵢ |∂ωᵢ/∂t|)`, the time over which the coordinates of a
/// fixed point change by order one.
pub fn local_time_scale(system: &CoordinateSystem, frame: &FrameSpec, t: f64, omega: &Vec3) -> Result<f64> {
    let z = system.forward(omega)?;
    let h = frame.scaling(t);
    let h_dot = Mat3::from_diagonal(&Vec3::new(h[0].d1, h[1].d1, h[2].d1));
    let l_dot = frame.rotation_derivative(t) * Mat3::from_diagonal(&frame.h(t)) + frame.rotation_matrix(t) * h_dot;
    let g = frame.omega_gradients(system, t, omega)?;
    let v = l_dot * z + frame.w_dot(t);
    let rate = g.iter().map(|gi| gi.dot(&v).abs()).fold(0.0, f64::max);
    Ok(1.0 / rate.max(1.0))
}

/// A residual sample point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub omega: Vec3,
}

fn inset(range: (f64, f64)) -> (f64, f64) {
    let pad = SAMPLE_INSET * (range.1 - range.0);
    (range.0 + pad, range.1 - pad)
}

/// Deterministic samples in the coordinate box `ranges` and time window
/// `t_range`, each shrunk by [`SAMPLE_INSET`] at both ends so that stencils
/// stay inside.
pub fn interior_samples(
    system: &CoordinateSystem,
    ranges: &[(f64, f64); 3],
    t_range: (f64, f64),
    seed: u64,
    n: usize,
) -> Vec<Sample> {
    let bounds = ranges.map(inset);
    let omegas = sample_box(system, &bounds, seed, n);
    let (lo, hi) = inset(t_range);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    omegas
        .into_iter()
        .map(|omega| Sample {
            t: if hi > lo { rng.gen_range(lo..hi) } else { lo },
            omega,
        })
        .collect()
}

/// One row of a [`ResidualReport`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualRecord {
    pub index: usize,
    pub check: String,
    pub t: f64,
    pub x: [f64; 3],
    pub residual: f64,
    pub scale: f64,
    pub relative: f64,
    pub ht: f64,
    pub hx: f64,
}

/// Maximum and mean relative residual of one check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub check: String,
    pub count: usize,
    pub max: f64,
    pub mean: f64,
}

/// Per-point residuals with summaries; records are sorted by sample index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub equation: String,
    pub stencil_order: u32,
    pub summary: CheckSummary,
    pub checks: Vec<CheckSummary>,
    pub records: Vec<ResidualRecord>,
}

fn summarize(check: &str, records: &[&ResidualRecord]) -> CheckSummary {
    let count = records.len();
    let max = records.iter().map(|r| r.relative).fold(0.0, f64::max);
    let mean = if count == 0 {
        0.0
    } else {
        records.iter().map(|r| r.relative).sum::<f64>() / count as f64
    };
    CheckSummary {
        check: check.to_string(),
        count,
        max,
        mean,
    }
}

impl ResidualReport {
    pub fn new(equation: &str, records: Vec<ResidualRecord>) -> Self {
        let mut names: Vec<&str> = Vec::new();
        for r in &records {
            if !names.contains(&r.check.as_str()) {
                names.push(&r.check);
            }
        }
        let checks = names
            .iter()
            .map(|n| summarize(n, &records.iter().filter(|r| r.check == *n).collect::<Vec<_>>()))
            .collect();
        let summary = summarize("all", &records.iter().collect::<Vec<_>>());
        Self {
            equation: equation.to_string(),
            stencil_order: STENCIL_ORDER,
            summary,
            checks,
            records,
        }
    }

    pub fn max_relative(&self) -> f64 {
        self.summary.max
    }

    pub fn check(&self, name: &str) -> Option<&CheckSummary> {
        self.checks.iter().find(|c| c.check == name)
    }

    /// `index,check,t,x1,x2,x3,residual,scale,relative,ht,hx`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,check,t,x1,x2,x3,residual,scale,relative,ht,hx\n");
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
                r.index, r.check, r.t, r.x[0], r.x[1], r.x[2], r.residual, r.scale, r.relative, r.ht, r.hx
            );
        }
        out
    }
}

fn record(index: usize, check: &str, t: f64, x: &Vec3, residual: f64, scale: f64, ht: f64, hx: f64) -> ResidualRecord {
    ResidualRecord {
        index,
        check: check.to_string(),
        t,
        x: [x[0], x[1], x[2]],
        residual,
        scale,
        relative: relative(residual, scale),
        ht,
        hx,
    }
}

/// Absolute `(ht, hx)` at a sample: the relative steps times the local
/// time scale and length.
pub fn local_steps(spec: &PotentialSpec, sample: &Sample, steps: Steps) -> Result<(f64, f64)> {
    let (sys, frame) = (spec.system(), spec.frame());
    Ok((
        steps.ht * local_time_scale(sys, frame, sample.t, &sample.omega)?,
        steps.hx * local_length(sys, frame, sample.t, &sample.omega)?,
    ))
}

/// Time-dependent residuals of `psi` at `samples`.
pub fn se_report(psi: &dyn ComplexField, spec: &PotentialSpec, samples: &[Sample], steps: Steps) -> Result<ResidualReport> {
    let records = samples
        .par_iter()
        .enumerate()
        .map(|(index, s)| {
            let x = spec.frame().embed(spec.system(), s.t, &s.omega)?;
            let (ht, hx) = local_steps(spec, s, steps)?;
            let r = se_residual(psi, spec, s.t, &x, &s.omega, ht, hx)?;
            Ok(record(index, "se", s.t, &x, r.magnitude(), r.scale, ht, hx))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ResidualReport::new("schrodinger", records))
}

/// Stationary residuals at time `t` and coordinate samples `omegas`.
pub fn stationary_report(
    psi: &dyn ComplexField,
    spec: &PotentialSpec,
    t: f64,
    energy: f64,
    omegas: &[Vec3],
    steps: Steps,
) -> Result<ResidualReport> {
    let records = omegas
        .par_iter()
        .enumerate()
        .map(|(index, omega)| {
            let x = spec.frame().embed(spec.system(), t, omega)?;
            let hx = steps.hx * local_length(spec.system(), spec.frame(), t, omega)?;
            let r = stationary_residual(psi, spec, t, energy, &x, omega, hx)?;
            Ok(record(index, "stationary", t, &x, r.magnitude(), r.scale, 0.0, hx))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ResidualReport::new("stationary", records))
}

/// Hamilton–Jacobi residuals of `u` at `samples`.
pub fn hj_report(u: &dyn RealField, spec: &PotentialSpec, samples: &[Sample], steps: Steps) -> Result<ResidualReport> {
    let records = samples
        .par_iter()
        .enumerate()
        .map(|(index, s)| {
            let x = spec.frame().embed(spec.system(), s.t, &s.omega)?;
            let (ht, hx) = local_steps(spec, s, steps)?;
            let r = hj_residual(u, spec, s.t, &x, &s.omega, ht, hx)?;
            Ok(record(index, "hj", s.t, &x, r.magnitude(), r.scale, ht, hx))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ResidualReport::new("hamilton_jacobi", records))
}

/// Stäckel matrix provider for [`geometry_audit_with`].
pub type StackelFn = dyn Fn(&CoordinateSystem, &Vec3) -> Result<Mat3> + Sync;

/// Geometric identities at `n` deterministic interior samples:
/// `orthogonality` (largest |cos| between two coordinate gradients),
/// `stackel` (relative violation of `Σᵢ F_{ia}‖∇ωᵢ‖² = T_a`),
/// `harmonicity` (`|Δω_a| R_a ℓ` by finite differences, `ℓ` the local
/// length) and `column_norm` (relative mismatch of `R_i²` against the
/// squared Jacobian column norms).
pub fn geometry_audit(system: &CoordinateSystem, frame: &FrameSpec, t: f64, n: usize, seed: u64) -> Result<ResidualReport> {
    geometry_audit_with(system, frame, t, n, seed, &stackel_values)
}

/// [`geometry_audit`] with a substitute Stäckel matrix.
pub fn geometry_audit_with(
    system: &CoordinateSystem,
    frame: &FrameSpec,
    t: f64,
    n: usize,
    seed: u64,
    stackel: &StackelFn,
) -> Result<ResidualReport> {
    frame.check_compatible(system)?;
    let samples = system.sample_domain(seed, n);
    let per_sample = samples
        .par_iter()
        .enumerate()
        .map(|(index, omega)| audit_point(system, frame, t, index, omega, stackel))
        .collect::<Result<Vec<_>>>()?;
    Ok(ResidualReport::new("geometry", per_sample.into_iter().flatten().collect()))
}

fn audit_point(
    system: &CoordinateSystem,
    frame: &FrameSpec,
    t: f64,
    index: usize,
    omega: &Vec3,
    stackel: &StackelFn,
) -> Result<Vec<ResidualRecord>> {
    let x = frame.embed(system, t, omega)?;
    let g = frame.omega_gradients(system, t, omega)?;
    let norms2 = g.map(|v| v.norm_squared());
    let ell = 1.0 / norms2.iter().map(|v| v.sqrt()).fold(0.0, f64::max);

    let mut orth = 0.0f64;
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        orth = orth.max(g[i].dot(&g[j]).abs() / (norms2[i] * norms2[j]).sqrt());
    }

    let f = stackel(system, omega)?;
    let tt = t_functions(system, frame, t);
    let mut stack = 0.0f64;
    for a in 0..3 {
        let sum: f64 = (0..3).map(|i| f[(i, a)] * norms2[i]).sum();
        let size: f64 = (0..3).map(|i| (f[(i, a)] * norms2[i]).abs()).sum::<f64>().max(tt[a].abs());
        stack = stack.max(relative((sum - tt[a]).abs(), size));
    }

    let r2 = metric_r_squared(system, frame, t, omega)?;
    let jac = frame.linear_part(t) * system.jacobian(omega)?;
    let mut cols = 0.0f64;
    for i in 0..3 {
        let c = jac.column(i).norm_squared();
        cols = cols.max((r2[i] - c).abs() / c);
    }

    // keep the stencil away from the domain edges
    let dom = system.domain();
    let edge = (0..3)
        .map(|a| (omega[a] - dom[a].lo).min(dom[a].hi - omega[a]))
        .fold(f64::INFINITY, f64::min);
    let hx = (HARMONIC_HX * ell).min(0.4 * edge * ell);
    let coords = |_t: f64, p: &Vec3, hint: &Vec3| frame.locate(system, t, p, hint);
    let mut lap = Vec3::zeros();
    for axis in 0..3 {
        let mut v = [*omega; 5];
        for (k, o) in OFFSETS.iter().enumerate() {
            if k == 2 {
                continue;
            }
            let mut p = x;
            p[axis] += o * hx;
            v[k] = coords(t, &p, omega).map_err(node_error(1 + 4 * axis + k.min(3)))?;
        }
        for a in 0..3 {
            // differences relative to the center keep rounding low
            let c = omega[a];
            let d = [v[0][a] - c, v[1][a] - c, 0.0, v[3][a] - c, v[4][a] - c];
            lap[a] += (-d[0] + 16.0 * d[1] + 16.0 * d[3] - d[4]) / (12.0 * hx * hx);
        }
    }
    let harm = (0..3)
        .map(|a| lap[a].abs() / norms2[a].sqrt() * ell)
        .fold(0.0, f64::max);

    Ok(vec![
        record(index, "orthogonality", t, &x, orth, 1.0, 0.0, 0.0),
        record(index, "stackel", t, &x, stack, 1.0, 0.0, 0.0),
        record(index, "harmonicity", t, &x, harm, 1.0, 0.0, hx),
        record(index, "column_norm", t, &x, cols, 1.0, 0.0, 0.0),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coords::{SplitClass, SystemId};
    use crate::profile::Profile;

    fn free() -> PotentialSpec {
        let sys = CoordinateSystem::standard(SystemId::Cartesian);
        PotentialSpec::magnetic_unchecked(sys, FrameSpec::identity(SplitClass::Complete), Default::default(), Profile::zero(), 1.0)
            .unwrap()
    }

    fn plane_wave(k: Vec3, dispersion: f64) -> FnField<impl Fn(f64, &Vec3) -> Complex64 + Sync> {
        FnField(move |t: f64, x: &Vec3| Complex64::new(0.0, k.dot(x) - dispersion * k.norm_squared() * t).exp())
    }

    #[test]
    fn plane_wave_satisfies_the_free_equation() {
        let k = Vec3::new(1.2, -0.7, 0.4);
        let spec = free();
        for x in [Vec3::zeros(), Vec3::new(0.3, 1.1, -0.8)] {
            let r = se_residual(&plane_wave(k, 1.0), &spec, 0.2, &x, &x, 1e-3, 1e-3).unwrap();
            assert!(r.magnitude() <= 1e-7 * k.norm_squared(), "{}", r.magnitude());
        }
    }

    #[test]
    fn wrong_dispersion_leaves_k_squared() {
        let k = Vec3::new(1.2, -0.7, 0.4);
        let r = se_residual(&plane_wave(k, 2.0), &free(), 0.0, &Vec3::zeros(), &Vec3::zeros(), 1e-3, 1e-3).unwrap();
        assert!((r.magnitude() - k.norm_squared()).abs() < 1e-6);
    }

    #[test]
    fn stationary_plane_wave_needs_negative_energy() {
        let k = Vec3::new(0.5, 1.5, -1.0);
        let psi = plane_wave(k, 0.0);
        let x = Vec3::new(0.1, 0.2, 0.3);
        let good = stationary_residual(&psi, &free(), 0.0, -k.norm_squared(), &x, &x, 1e-3).unwrap();
        assert!(good.magnitude() < 1e-8);
        let bad = stationary_residual(&psi, &free(), 0.0, k.norm_squared(), &x, &x, 1e-3).unwrap();
        assert!((bad.magnitude() - 2.0 * k.norm_squared()).abs() < 1e-6);
        let one = FnField(|_: f64, _: &Vec3| Complex64::new(1.0, 0.0));
        let r = stationary_residual(&one, &free(), 0.0, 0.0, &x, &x, 1e-3).unwrap();
        assert_eq!(r.magnitude(), 0.0);
    }

    #[test]
    fn hamilton_jacobi_examples() {
        let spec = free();
        let x = Vec3::new(0.4, -0.2, 0.9);
        let exact = FnField(|t: f64, x: &Vec3| -3.0 * t + x.sum());
        assert!(hj_residual(&exact, &spec, 0.3, &x, &x, 1e-3, 1e-3).unwrap().magnitude() < 1e-9);
        let wrong = FnField(|t: f64, x: &Vec3| -t + 2.0 * x[0]);
        let r = hj_residual(&wrong, &spec, 0.3, &x, &x, 1e-3, 1e-3).unwrap();
        assert!((r.value - 3.0).abs() < 1e-9);
        assert!((r.scale - 4.0).abs() < 1e-9);
    }

    #[test]
    fn fourth_order_convergence() {
        let k = Vec3::new(2.0, -1.5, 1.0);
        let psi = plane_wave(k, 1.0);
        let x = Vec3::new(0.3, 0.1, -0.2);
        let hs = [0.1, 0.05, 0.025];
        let r: Vec<f64> = hs
            .iter()
            .map(|h| se_residual(&psi, &free(), 0.1, &x, &x, *h, *h).unwrap().magnitude())
            .collect();
        let slope = (r[0] / r[2]).ln() / (hs[0] / hs[2]).ln();
        assert!(slope >= 3.5, "{slope}");
    }

    #[test]
    fn curl_of_the_linear_potential_is_uniform() {
        let sys = CoordinateSystem::standard(SystemId::Spherical);
        let frame = FrameSpec::new(
            crate::frame::FrameProfiles {
                alpha: Profile::linear(0.7),
                beta: Profile::sin(0.3, 1.1, 0.0, 0.5),
                ..Default::default()
            },
            SplitClass::Nonsplit,
        )
        .unwrap();
        let spec = PotentialSpec::magnetic(sys, frame, Default::default(), Profile::zero(), 1.3).unwrap();
        let b = spec.magnetic_field(0.4);
        for x in [Vec3::new(0.1, 0.2, 0.3), Vec3::new(-2.0, 1.0, 5.0)] {
            assert!((fd_curl(&spec, 0.4, &x, 1e-2) - b).norm() < 1e-8 * (1.0 + b.norm()));
        }
    }

    #[test]
    fn report_is_sorted_and_serializable() {
        let spec = free();
        let k = Vec3::new(0.3, 0.2, 0.1);
        let samples = interior_samples(spec.system(), &[(-1.0, 1.0); 3], (0.0, 1.0), 5, 20);
        assert_eq!(samples.len(), 20);
        let report = se_report(&plane_wave(k, 1.0), &spec, &samples, Steps::default()).unwrap();
        assert!(report.records.iter().enumerate().all(|(i, r)| r.index == i));
        assert!(report.max_relative() < 1e-6);
        assert_eq!(report.to_csv().lines().count(), 21);
        let back: ResidualReport = serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
        assert_eq!(back, report);
    }

    #[test]
    fn cartesian_geometry_is_exact() {
        let sys = CoordinateSystem::standard(SystemId::Cartesian);
        let report = geometry_audit(&sys, &FrameSpec::identity(SplitClass::Complete), 0.0, 50, 1).unwrap();
        for c in &report.checks {
            assert!(c.max <= 1e-12, "{}: {}", c.check, c.max);
        }
    }

    #[test]
    fn corrupted_stackel_entry_is_detected() {
        let sys = CoordinateSystem::standard(SystemId::Spherical);
        let flip = |s: &CoordinateSystem, w: &Vec3| {
            let mut f = stackel_values(s, w)?;
            f[(1, 1)] = -f[(1, 1)];
            Ok(f)
        };
        let frame = FrameSpec::identity(SplitClass::Nonsplit);
        let good = geometry_audit(&sys, &frame, 0.0, 30, 2).unwrap();
        let bad = geometry_audit_with(&sys, &frame, 0.0, 30, 2, &flip).unwrap();
        assert!(good.check("stackel").unwrap().max < 1e-12);
        assert!(bad.check("stackel").unwrap().max > 0.1);
    }
}
