//! Frozen-time slice of a separated solution in a static frame: the
//! stationary equation holds with `E = Σ T_a λ_a − T̃₀`.

use emsep::coords::{CoordinateSystem, SystemId};
use emsep::frame::FrameSpec;
use emsep::potential::PotentialSpec;
use emsep::profile::Profile;
use emsep::separate::{default_ranges, SeparatedSolution, SeparationConstants, SeparationSetup};
use emsep::stackel::t_functions;
use emsep::verify::{interior_samples, stationary_report, Steps};

pub fn main() -> emsep::Result<()> {
    let sys = CoordinateSystem::standard(SystemId::Spherical);
    let t0_tilde = 0.1;
    let f0 = [Profile::poly(vec![0.2, -0.1]), Profile::zero(), Profile::zero()];
    let spec = PotentialSpec::magnetic_unchecked(
        sys,
        FrameSpec::identity(sys.split_class()),
        f0,
        Profile::constant(t0_tilde),
        1.0,
    )?;
    let lambda = SeparationConstants::new([0.3, -0.6, 0.45])?;
    let ranges = default_ranges(&sys);
    let psi = SeparatedSolution::build(&spec, lambda, &SeparationSetup::new(ranges, (0.0, 1.0), 0.0))?;
    let t = 0.5;
    let tf = t_functions(&sys, spec.frame(), t);
    let energy: f64 = (0..3).map(|a| tf[a] * lambda.lambda[a]).sum::<f64>() - t0_tilde;
    let omegas: Vec<_> = interior_samples(&sys, &ranges, (0.0, 1.0), 5, 100).iter().map(|s| s.omega).collect();
    for e in [energy, energy + 0.05] {
        let report = stationary_report(&psi, &spec, t, e, &omegas, Steps::default())?;
        println!("E = {e:+.4}: max relative residual {:.2e}", report.max_relative());
    }
    Ok(())
}
