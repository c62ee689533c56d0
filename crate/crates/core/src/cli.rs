//! Scenario files and the command-line front end.
//!
//! A scenario is a JSON document with `"schema": 1`; unknown keys are
//! rejected. Every subcommand writes deterministic artifacts into `--out`:
//! `report.json` and `report.csv`, plus `phi_<a>.csv` and `solution.json`
//! for `separate`. Exit codes: 0 success, 1 configuration, 2 numerical
//! (including a failed `--assert-tol`), 3 I/O.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::coords::{CoordinateSystem, SystemId};
use crate::frame::{FrameProfiles, FrameSpec};
use crate::potential::{CoulombSystem, PotentialKind, PotentialSpec};
use crate::profile::Profile;
use crate::separate::{
    default_ranges, hj_solve, solve_phi0_with, solve_phi_a, AxisSolution, Modulation, SeparatedSolution,
    SeparationConstants, SeparationSetup,
};
use crate::verify::{geometry_audit, hj_report, interior_samples, se_report, ResidualRecord, ResidualReport, Steps};
use crate::{Error, Result, Vec3};

/// Output directory used when neither `--out` nor the scenario names one.
pub const DEFAULT_OUT: &str = "emsep-out";

/// The only scenario schema version understood here.
pub const SCHEMA_VERSION: u32 = 1;

fn one() -> f64 {
    1.0
}

fn yes() -> bool {
    true
}

fn default_k() -> f64 {
    0.6
}

fn default_samples() -> usize {
    100
}

fn default_seed() -> u64 {
    1
}

fn default_signs() -> [f64; 3] {
    [1.0; 3]
}

fn default_grid() -> usize {
    4
}

fn default_time_range() -> [f64; 2] {
    [0.0, 1.0]
}

/// Coordinate system and its parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub id: SystemId,
    #[serde(default = "one")]
    pub a: f64,
    #[serde(default = "default_k")]
    pub k: f64,
}

/// Potential kind and its free data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialConfig {
    pub kind: PotentialKind,
    #[serde(default = "one")]
    pub e_charge: f64,
    /// `F_{a0}` as functions of `ω_a`.
    #[serde(default)]
    pub f0: [Profile; 3],
    #[serde(default)]
    pub t0_tilde: Profile,
    /// Coulomb charge.
    #[serde(default)]
    pub q: f64,
    /// Sign of the `∓` term of the prolate II Coulomb equation; defaults to
    /// the sign matching the system's `z₃` shift.
    #[serde(default)]
    pub coulomb_sign: Option<f64>,
    /// Accept a magnetic-kind potential in a frame that never rotates.
    #[serde(default = "yes")]
    pub allow_zero_field: bool,
}

impl Default for PotentialConfig {
    fn default() -> Self {
        Self {
            kind: PotentialKind::Magnetic,
            e_charge: 1.0,
            f0: Default::default(),
            t0_tilde: Profile::zero(),
            q: 0.0,
            coulomb_sign: None,
            allow_zero_field: true,
        }
    }
}

/// Initial data `(φ_a, φ_a')` at the lower end of a range, as `[re, im]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialData {
    pub value: [f64; 2],
    #[serde(default)]
    pub slope: [f64; 2],
}

impl InitialData {
    fn pair(&self) -> (Complex64, Complex64) {
        (
            Complex64::new(self.value[0], self.value[1]),
            Complex64::new(self.slope[0], self.slope[1]),
        )
    }
}

/// Time anchor and window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    #[serde(default)]
    pub t0: f64,
    #[serde(default = "default_time_range")]
    pub range: [f64; 2],
}

impl Default for TimeConfig {
    fn default() -> Self {
        Self {
            t0: 0.0,
            range: default_time_range(),
        }
    }
}

/// Hamilton–Jacobi branch signs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HjConfig {
    #[serde(default = "default_signs")]
    pub signs: [f64; 3],
}

impl Default for HjConfig {
    fn default() -> Self {
        Self {
            signs: default_signs(),
        }
    }
}

/// Tabulation grid of `build-potential`: points per coordinate axis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "default_grid")]
    pub points: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { points: default_grid() }
    }
}

/// Where artifacts go when `--out` is not given.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
}

/// Deliberate mismatches for negative controls.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Diagnostics {
    /// Constants used in the `φ₀` exponent instead of `lambda`.
    #[serde(default)]
    pub phi0_lambda: Option<[f64; 3]>,
    /// Drop the imaginary part of `T₀` from `φ₀`.
    #[serde(default)]
    pub drop_imaginary_t0: bool,
    /// Override the modulation factor.
    #[serde(default)]
    pub modulation: Option<Modulation>,
}

/// A complete run description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: u32,
    pub system: SystemConfig,
    #[serde(default)]
    pub frame: FrameProfiles,
    #[serde(default)]
    pub potential: PotentialConfig,
    #[serde(default)]
    pub lambda: [f64; 3],
    #[serde(default)]
    pub initial: Option<[InitialData; 3]>,
    #[serde(default)]
    pub omega_ranges: Option<[[f64; 2]; 3]>,
    #[serde(default)]
    pub time: TimeConfig,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub steps: Steps,
    #[serde(default)]
    pub hj: HjConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub diagnostics: Diagnostics,
    #[serde(default)]
    pub output: Option<OutputConfig>,
}

/// A scenario with every module-level object constructed and validated.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub system: CoordinateSystem,
    pub frame: FrameSpec,
    pub spec: PotentialSpec,
    pub lambda: SeparationConstants,
    pub setup: SeparationSetup,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let scenario: Scenario = serde_json::from_str(text)?;
        if scenario.schema != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "unsupported scenario schema {}, expected {SCHEMA_VERSION}",
                scenario.schema
            )));
        }
        scenario.prepare()?;
        Ok(scenario)
    }

    /// A minimal scenario for `system` with default settings.
    pub fn for_system(id: SystemId) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            system: SystemConfig {
                id,
                a: 1.0,
                k: default_k(),
            },
            frame: FrameProfiles::default(),
            potential: PotentialConfig::default(),
            lambda: [0.0; 3],
            initial: None,
            omega_ranges: None,
            time: TimeConfig::default(),
            samples: default_samples(),
            seed: default_seed(),
            steps: Steps::default(),
            hj: HjConfig::default(),
            grid: GridConfig::default(),
            diagnostics: Diagnostics::default(),
            output: None,
        }
    }

    pub fn system(&self) -> Result<CoordinateSystem> {
        CoordinateSystem::new(self.system.id, self.system.a, self.system.k)
    }

    pub fn frame_spec(&self) -> Result<FrameSpec> {
        let system = self.system()?;
        FrameSpec::new(self.frame.clone(), system.split_class())
    }

    pub fn potential_spec(&self) -> Result<PotentialSpec> {
        let system = self.system()?;
        let frame = self.frame_spec()?;
        let p = &self.potential;
        match p.kind {
            PotentialKind::Magnetic if p.allow_zero_field => {
                PotentialSpec::magnetic_unchecked(system, frame, p.f0.clone(), p.t0_tilde.clone(), p.e_charge)
            }
            PotentialKind::Magnetic => {
                PotentialSpec::magnetic(system, frame, p.f0.clone(), p.t0_tilde.clone(), p.e_charge)
            }
            PotentialKind::Electrostatic => {
                PotentialSpec::electrostatic(system, frame, p.f0.clone(), p.t0_tilde.clone(), p.e_charge)
            }
            PotentialKind::Coulomb => match p.coulomb_sign {
                Some(sign) => PotentialSpec::coulomb_with_sign(system, frame, p.q, p.e_charge, sign),
                None => PotentialSpec::coulomb(system, frame, p.q, p.e_charge),
            },
        }
    }

    pub fn ranges(&self) -> Result<[(f64, f64); 3]> {
        let system = self.system()?;
        Ok(match self.omega_ranges {
            Some(r) => r.map(|[lo, hi]| (lo, hi)),
            None => default_ranges(&system),
        })
    }

    pub fn prepare(&self) -> Result<Prepared> {
        let system = self.system()?;
        let frame = self.frame_spec()?;
        let spec = self.potential_spec()?;
        let lambda = SeparationConstants::new(self.lambda)?;
        let ranges = self.ranges()?;
        let domain = system.domain();
        for (a, (lo, hi)) in ranges.iter().enumerate() {
            if !(lo < hi) {
                return Err(Error::Config(format!("omega range {} is empty", a + 1)));
            }
            for v in [*lo, *hi] {
                if !domain[a].contains(v) {
                    return Err(Error::Config(format!(
                        "omega range {} endpoint {v} is outside the domain of the {} system",
                        a + 1,
                        system.id().name()
                    )));
                }
            }
        }
        let [lo, hi] = self.time.range;
        if !(lo < hi && self.time.t0 >= lo && self.time.t0 <= hi) {
            return Err(Error::Config(format!(
                "time range [{lo}, {hi}] must be nonempty and contain t0 = {}",
                self.time.t0
            )));
        }
        if self.steps.ht <= 0.0 || self.steps.hx <= 0.0 {
            return Err(Error::Config("steps must be positive".into()));
        }
        if self.hj.signs.iter().any(|s| *s != 1.0 && *s != -1.0) {
            return Err(Error::Config("hj signs must be +1 or -1".into()));
        }
        if self.grid.points < 1 {
            return Err(Error::Config("grid needs at least one point per axis".into()));
        }
        let mut setup = SeparationSetup::new(ranges, (lo, hi), self.time.t0);
        if let Some(init) = &self.initial {
            setup.initial = init.map(|d| d.pair());
        }
        Ok(Prepared {
            system,
            frame,
            spec,
            lambda,
            setup,
        })
    }

    /// Integrate the separated solution, applying any diagnostics.
    pub fn build_solution(&self) -> Result<SeparatedSolution> {
        let p = self.prepare()?;
        let d = &self.diagnostics;
        let phi0 = solve_phi0_with(
            &p.spec,
            d.phi0_lambda.unwrap_or(p.lambda.lambda),
            p.setup.t_range,
            p.setup.t0,
            !d.drop_imaginary_t0,
        )?;
        let axes = [1, 2, 3].map(|a| solve_phi_a(&p.spec, a, &p.lambda, p.setup.ranges[a - 1], p.setup.initial[a - 1]));
        let [a1, a2, a3] = axes;
        let modulation = d.modulation.unwrap_or(Modulation::for_kind(p.spec.kind()));
        SeparatedSolution::from_parts(p.spec, p.lambda, phi0, [a1?, a2?, a3?], modulation)
    }
}

/// Header block of every artifact.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub scenario_sha256: Option<String>,
    pub seed: u64,
}

impl Provenance {
    fn new(scenario_text: Option<&str>, seed: u64) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            scenario_sha256: scenario_text.map(|t| format!("{:x}", Sha256::digest(t.as_bytes()))),
            seed,
        }
    }
}

/// `φ₀` parameters as stored in `solution.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Phi0Record {
    pub t0: f64,
    pub range: [f64; 2],
    pub lambda: [f64; 3],
    pub imaginary_t0: bool,
}

/// `solution.json`: the scenario plus the integrated factors, enough to
/// evaluate `ψ` without integrating again.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StoredSolution {
    pub provenance: Provenance,
    pub scenario: Scenario,
    pub modulation: Modulation,
    pub phi0: Phi0Record,
    pub axes: [AxisSolution; 3],
}

impl StoredSolution {
    pub fn new(provenance: Provenance, scenario: Scenario, solution: &SeparatedSolution) -> Self {
        let phi0 = solution.phi0();
        let (lo, hi) = phi0.range();
        Self {
            provenance,
            scenario,
            modulation: solution.modulation(),
            phi0: Phi0Record {
                t0: phi0.anchor(),
                range: [lo, hi],
                lambda: phi0.lambda(),
                imaginary_t0: phi0.includes_imaginary_t0(),
            },
            axes: solution.axes().clone(),
        }
    }

    pub fn solution(&self) -> Result<SeparatedSolution> {
        let p = self.scenario.prepare()?;
        let phi0 = solve_phi0_with(
            &p.spec,
            self.phi0.lambda,
            (self.phi0.range[0], self.phi0.range[1]),
            self.phi0.t0,
            self.phi0.imaginary_t0,
        )?;
        SeparatedSolution::from_parts(p.spec, p.lambda, phi0, self.axes.clone(), self.modulation)
    }
}

#[derive(Serialize)]
struct Artifact<'a, T: Serialize> {
    provenance: &'a Provenance,
    command: &'a str,
    result: T,
}

#[derive(Parser, Debug)]
#[command(name = "emsep", version, about = "Separated Schrödinger and Hamilton–Jacobi equations with residual checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Scenario file (JSON, schema 1).
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Output directory; defaults to the scenario's `output.dir`, then
    /// `emsep-out`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the scenario sample count.
    #[arg(long)]
    samples: Option<usize>,
    /// Fail with exit code 2 when the largest relative residual exceeds this.
    #[arg(long)]
    assert_tol: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the eleven separable systems and their domains.
    ListSystems,
    /// Audit orthogonality, the Stäckel relation, harmonicity and metric
    /// coefficients.
    AuditGeometry {
        #[command(flatten)]
        common: Common,
        /// System to audit with a static unit frame when no scenario is given.
        #[arg(long)]
        system: Option<SystemId>,
    },
    /// Tabulate A₀, Ā, ∇·Ā and B on a coordinate grid at t0.
    BuildPotential {
        #[command(flatten)]
        common: Common,
    },
    /// Integrate the reduced equations and store the solution.
    Separate {
        #[command(flatten)]
        common: Common,
    },
    /// Schrödinger residuals of a stored or freshly built solution.
    Verify {
        #[command(flatten)]
        common: Common,
        /// A `solution.json` written by `separate`.
        #[arg(long)]
        solution: Option<PathBuf>,
    },
    /// Build the Hamilton–Jacobi action and report its residuals.
    Hj {
        #[command(flatten)]
        common: Common,
    },
    /// Separate the generalized Coulomb problem in its four systems.
    CoulombDemo {
        #[command(flatten)]
        common: Common,
    },
}

/// Parse `args` (including the program name), run, and return the exit
/// code. Human-readable summaries go to `stdout`, errors to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if code == 0 { write!(stdout, "{e}") } else { write!(stderr, "{e}") };
            return code;
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

struct Loaded {
    out: PathBuf,
    scenario: Scenario,
    text: Option<String>,
    seed: u64,
    samples: usize,
}

fn load(common: &Common) -> Result<Loaded> {
    let path = common
        .scenario
        .as_ref()
        .ok_or_else(|| Error::Usage("--scenario <path> is required".into()))?;
    let text = fs::read_to_string(path)?;
    let scenario = Scenario::from_json(&text)?;
    Ok(with_overrides(scenario, Some(text), common))
}

fn with_overrides(scenario: Scenario, text: Option<String>, common: &Common) -> Loaded {
    let seed = common.seed.unwrap_or(scenario.seed);
    let samples = common.samples.unwrap_or(scenario.samples);
    let out = common
        .out
        .clone()
        .or_else(|| scenario.output.as_ref().map(|o| o.dir.clone()))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    Loaded {
        out,
        scenario,
        text,
        seed,
        samples,
    }
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), contents)?;
    Ok(())
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_file(dir, name, &text)
}

fn write_report(dir: &Path, provenance: &Provenance, command: &str, report: &ResidualReport) -> Result<()> {
    write_json(
        dir,
        "report.json",
        &Artifact {
            provenance,
            command,
            result: report,
        },
    )?;
    write_file(dir, "report.csv", &report.to_csv())
}

fn summary_line(out: &mut dyn Write, report: &ResidualReport) -> Result<()> {
    for c in &report.checks {
        writeln!(
            out,
            "{:<14} max {:.3e}  mean {:.3e}  ({} points)",
            c.check, c.max, c.mean, c.count
        )?;
    }
    Ok(())
}

fn check_tolerance(common: &Common, report: &ResidualReport) -> Result<()> {
    if let Some(tol) = common.assert_tol {
        if !(report.max_relative() <= tol) {
            return Err(Error::Assertion(format!(
                "largest relative residual {:.3e} exceeds {tol:e}",
                report.max_relative()
            )));
        }
    }
    Ok(())
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::ListSystems => list_systems(out),
        Command::AuditGeometry { common, system } => audit(&common, system, out),
        Command::BuildPotential { common } => build_potential(&common, out),
        Command::Separate { common } => separate(&common, out),
        Command::Verify { common, solution } => verify(&common, solution.as_deref(), out),
        Command::Hj { common } => hj(&common, out),
        Command::CoulombDemo { common } => coulomb_demo(&common, out),
    }
}

fn format_interval(lo: f64, hi: f64) -> String {
    let f = |v: f64| {
        if v == f64::INFINITY {
            "inf".to_string()
        } else if v == f64::NEG_INFINITY {
            "-inf".to_string()
        } else {
            format!("{v:.6}")
        }
    };
    format!("[{}, {}]", f(lo), f(hi))
}

/// The table printed by `list-systems`.
pub fn systems_table() -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:<30} {:>4}  {:<9} domain (ω₁; ω₂; ω₃)", "system", "case", "class");
    for id in SystemId::ALL {
        let sys = CoordinateSystem::standard(id);
        let d = sys.domain();
        let _ = writeln!(
            s,
            "{:<30} {:>4}  {:<9} {}; {}; {}",
            id.name(),
            id.case(),
            format!("{:?}", id.split_class()).to_lowercase(),
            format_interval(d[0].lo, d[0].hi),
            format_interval(d[1].lo, d[1].hi),
            format_interval(d[2].lo, d[2].hi),
        );
    }
    s
}

fn list_systems(out: &mut dyn Write) -> Result<()> {
    write!(out, "{}", systems_table())?;
    Ok(())
}

fn audit(common: &Common, system: Option<SystemId>, out: &mut dyn Write) -> Result<()> {
    let loaded = match (&common.scenario, system) {
        (Some(_), _) => load(common)?,
        (None, Some(id)) => with_overrides(Scenario::for_system(id), None, common),
        (None, None) => return Err(Error::Usage("give --scenario or --system".into())),
    };
    let sc = &loaded.scenario;
    let report = geometry_audit(&sc.system()?, &sc.frame_spec()?, sc.time.t0, loaded.samples, loaded.seed)?;
    let provenance = Provenance::new(loaded.text.as_deref(), loaded.seed);
    write_report(&loaded.out, &provenance, "audit-geometry", &report)?;
    summary_line(out, &report)?;
    check_tolerance(common, &report)
}

/// One row of the `build-potential` table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PotentialRow {
    pub t: f64,
    pub omega: [f64; 3],
    pub x: [f64; 3],
    pub a0: f64,
    pub a: [f64; 3],
    pub div_a: f64,
    pub b: [f64; 3],
}

/// `A₀`, `Ā`, `∇·Ā` and `B` on a `points³` grid spanning the scenario's
/// coordinate ranges at `t0`.
pub fn potential_table(scenario: &Scenario) -> Result<Vec<PotentialRow>> {
    let p = scenario.prepare()?;
    let n = scenario.grid.points;
    let t = p.setup.t0;
    let b = p.spec.magnetic_field(t);
    let node = |(lo, hi): (f64, f64), i: usize| {
        if n == 1 {
            0.5 * (lo + hi)
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    };
    let mut rows = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let r = p.setup.ranges;
                let omega = Vec3::new(node(r[0], i), node(r[1], j), node(r[2], k));
                let x = p.frame.embed(&p.system, t, &omega)?;
                let f = p.spec.vector_potential(t, &x, &omega)?;
                rows.push(PotentialRow {
                    t,
                    omega: [omega[0], omega[1], omega[2]],
                    x: [x[0], x[1], x[2]],
                    a0: f.a0,
                    a: [f.a[0], f.a[1], f.a[2]],
                    div_a: f.div_a,
                    b: [b[0], b[1], b[2]],
                });
            }
        }
    }
    Ok(rows)
}

fn build_potential(common: &Common, out: &mut dyn Write) -> Result<()> {
    let loaded = load(common)?;
    let rows = potential_table(&loaded.scenario)?;
    let provenance = Provenance::new(loaded.text.as_deref(), loaded.seed);
    #[derive(Serialize)]
    struct Table<'a> {
        rows: &'a [PotentialRow],
    }
    write_json(
        &loaded.out,
        "report.json",
        &Artifact {
            provenance: &provenance,
            command: "build-potential",
            result: Table { rows: &rows },
        },
    )?;
    let mut csv = String::from("t,omega1,omega2,omega3,x1,x2,x3,a0,a1,a2,a3,div_a,b1,b2,b3\n");
    for r in &rows {
        let vals = [
            r.t, r.omega[0], r.omega[1], r.omega[2], r.x[0], r.x[1], r.x[2], r.a0, r.a[0], r.a[1], r.a[2], r.div_a,
            r.b[0], r.b[1], r.b[2],
        ];
        let line: Vec<String> = vals.iter().map(|v| format!("{v:e}")).collect();
        let _ = writeln!(csv, "{}", line.join(","));
    }
    write_file(&loaded.out, "report.csv", &csv)?;
    let b = rows.first().map(|r| r.b).unwrap_or([0.0; 3]);
    writeln!(out, "{} grid points, B(t0) = ({:.6e}, {:.6e}, {:.6e})", rows.len(), b[0], b[1], b[2])?;
    Ok(())
}

fn separate(common: &Common, out: &mut dyn Write) -> Result<()> {
    let loaded = load(common)?;
    let solution = loaded.scenario.build_solution()?;
    let provenance = Provenance::new(loaded.text.as_deref(), loaded.seed);
    for axis in solution.axes() {
        write_file(&loaded.out, &format!("phi_{}.csv", axis.axis), &axis.to_csv())?;
    }
    let stored = StoredSolution::new(provenance.clone(), loaded.scenario.clone(), &solution);
    write_json(&loaded.out, "solution.json", &stored)?;

    #[derive(Serialize)]
    struct AxisSummary {
        axis: usize,
        range: [f64; 2],
        nodes: usize,
    }
    let axes: Vec<AxisSummary> = solution
        .axes()
        .iter()
        .map(|a| AxisSummary {
            axis: a.axis,
            range: [a.range().0, a.range().1],
            nodes: a.interpolant().nodes().len(),
        })
        .collect();
    write_json(
        &loaded.out,
        "report.json",
        &Artifact {
            provenance: &provenance,
            command: "separate",
            result: &axes,
        },
    )?;
    let mut csv = String::from("axis,lo,hi,nodes\n");
    for a in &axes {
        let _ = writeln!(csv, "{},{:e},{:e},{}", a.axis, a.range[0], a.range[1], a.nodes);
        writeln!(out, "φ{} on [{:.6}, {:.6}]: {} nodes", a.axis, a.range[0], a.range[1], a.nodes)?;
    }
    write_file(&loaded.out, "report.csv", &csv)?;
    Ok(())
}

fn verify(common: &Common, solution_path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    let (loaded, solution) = match solution_path {
        Some(path) => {
            let stored: StoredSolution = serde_json::from_str(&fs::read_to_string(path)?)?;
            let solution = stored.solution()?;
            let mut loaded = with_overrides(stored.scenario.clone(), None, common);
            if common.seed.is_none() {
                loaded.seed = stored.provenance.seed;
            }
            (loaded, solution)
        }
        None => {
            let loaded = load(common)?;
            let solution = loaded.scenario.build_solution()?;
            (loaded, solution)
        }
    };
    let sc = &loaded.scenario;
    let system = sc.system()?;
    let samples = interior_samples(&system, &solution.ranges(), solution.phi0().range(), loaded.seed, loaded.samples);
    let report = se_report(&solution, solution.spec(), &samples, sc.steps)?;
    let mut provenance = Provenance::new(loaded.text.as_deref(), loaded.seed);
    if let (None, Some(path)) = (&loaded.text, solution_path) {
        let stored: StoredSolution = serde_json::from_str(&fs::read_to_string(path)?)?;
        provenance.scenario_sha256 = stored.provenance.scenario_sha256;
    }
    write_report(&loaded.out, &provenance, "verify", &report)?;
    summary_line(out, &report)?;
    check_tolerance(common, &report)
}

fn hj(common: &Common, out: &mut dyn Write) -> Result<()> {
    let loaded = load(common)?;
    let p = loaded.scenario.prepare()?;
    let action = hj_solve(&p.spec, &p.lambda, p.setup.ranges, loaded.scenario.hj.signs, p.setup.t0)?;
    let samples = interior_samples(&p.system, &p.setup.ranges, p.setup.t_range, loaded.seed, loaded.samples);
    let report = hj_report(&action, &p.spec, &samples, loaded.scenario.steps)?;
    let provenance = Provenance::new(loaded.text.as_deref(), loaded.seed);
    write_report(&loaded.out, &provenance, "hj", &report)?;
    summary_line(out, &report)?;
    check_tolerance(common, &report)
}

/// Separation constants used by `coulomb-demo` unless the scenario sets
/// nonzero ones.
pub const COULOMB_DEMO_LAMBDA: [f64; 3] = [0.3, -0.6, 0.45];

/// Initial data `(1, i)` used by `coulomb-demo` unless the scenario sets
/// its own: the real and imaginary parts are independent solutions, so the
/// factors have no zeros and the relative residual stays well conditioned.
pub const NODE_FREE_INITIAL: InitialData = InitialData {
    value: [1.0, 0.0],
    slope: [0.0, 1.0],
};

/// Residual reports of the Coulomb problem in all of its separating systems,
/// both prolate II pairings included. Uses the scenario's charge, frame,
/// constants and time window; coordinate ranges are the systems' defaults.
pub fn coulomb_demo_report(scenario: &Scenario, seed: u64, samples: usize) -> Result<ResidualReport> {
    let lambda = if scenario.lambda == [0.0; 3] {
        COULOMB_DEMO_LAMBDA
    } else {
        scenario.lambda
    };
    let mut records: Vec<ResidualRecord> = Vec::new();
    for c in CoulombSystem::ALL {
        let mut sc = scenario.clone();
        sc.system = SystemConfig {
            id: c.system_id(),
            a: scenario.system.a,
            k: scenario.system.k,
        };
        sc.potential.kind = PotentialKind::Coulomb;
        sc.potential.coulomb_sign = None;
        sc.lambda = lambda;
        sc.omega_ranges = None;
        sc.initial = Some(scenario.initial.unwrap_or([NODE_FREE_INITIAL; 3]));
        sc.diagnostics = Diagnostics::default();
        let solution = sc.build_solution()?;
        let system = sc.system()?;
        let pts = interior_samples(&system, &solution.ranges(), solution.phi0().range(), seed, samples);
        let report = se_report(&solution, solution.spec(), &pts, sc.steps)?;
        let name = format!("{:?}", c);
        let name = serde_json::to_value(c)?.as_str().map(str::to_string).unwrap_or(name);
        records.extend(report.records.into_iter().map(|mut r| {
            r.check = name.clone();
            r
        }));
    }
    Ok(ResidualReport::new("schrodinger", records))
}

fn coulomb_demo(common: &Common, out: &mut dyn Write) -> Result<()> {
    let loaded = match &common.scenario {
        Some(_) => load(common)?,
        None => {
            let mut sc = Scenario::for_system(SystemId::Spherical);
            sc.potential = PotentialConfig {
                kind: PotentialKind::Coulomb,
                q: 1.0,
                ..PotentialConfig::default()
            };
            with_overrides(sc, None, common)
        }
    };
    let report = coulomb_demo_report(&loaded.scenario, loaded.seed, loaded.samples)?;
    let provenance = Provenance::new(loaded.text.as_deref(), loaded.seed);
    write_report(&loaded.out, &provenance, "coulomb-demo", &report)?;
    summary_line(out, &report)?;
    check_tolerance(common, &report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("emsep").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn list_systems_prints_every_system() {
        let (code, out, _) = run_capture(&["list-systems"]);
        assert_eq!(code, 0);
        for id in SystemId::ALL {
            assert!(out.contains(id.name()), "{}", id.name());
        }
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = r#"{"schema": 1, "system": {"id": "cartesian"}, "colour": "blue"}"#;
        assert!(matches!(Scenario::from_json(text), Err(Error::Json(_))));
        let text = r#"{"schema": 2, "system": {"id": "cartesian"}}"#;
        assert!(matches!(Scenario::from_json(text), Err(Error::Config(_))));
        let text = r#"{"schema": 1, "system": {"id": "cartesian"}, "lambda": [1, 2, 3]}"#;
        let sc = Scenario::from_json(text).unwrap();
        assert_eq!(sc.samples, 100);
    }

    #[test]
    fn invalid_scenarios_exit_with_code_one() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        fs::write(&path, r#"{"schema": 1, "system": {"id": "spherical"}, "omega_ranges": [[-1, 1], [0, 1], [0, 1]]}"#)
            .unwrap();
        let (code, _, err) = run_capture(&["separate", "--scenario", path.to_str().unwrap()]);
        assert_eq!(code, 1, "{err}");
        let (code, _, _) = run_capture(&["separate"]);
        assert_eq!(code, 1);
        let (code, _, _) = run_capture(&["no-such-command"]);
        assert_eq!(code, 1);
        let (code, _, _) = run_capture(&["verify", "--scenario", "/nonexistent/scenario.json"]);
        assert_eq!(code, 3);
    }

    #[test]
    fn audit_cartesian_by_name() {
        let dir = tempfile::tempdir().unwrap();
        let (code, out, err) = run_capture(&[
            "audit-geometry",
            "--system",
            "cartesian",
            "--samples",
            "20",
            "--assert-tol",
            "1e-12",
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "{err}");
        assert!(out.contains("stackel"));
        assert!(dir.path().join("report.json").exists());
        assert!(dir.path().join("report.csv").exists());
    }
}
