//! Electrostatic separation with `Q = exp(iS)` in an expanding frame, and
//! the negative control that drops the imaginary part of `T₀`.

use emsep::coords::{CoordinateSystem, SystemId};
use emsep::frame::{FrameProfiles, FrameSpec};
use emsep::potential::PotentialSpec;
use emsep::profile::Profile;
use emsep::separate::{
    default_ranges, solve_phi0_with, Modulation, SeparatedSolution, SeparationConstants, SeparationSetup,
};
use emsep::verify::{interior_samples, se_report, Steps};

pub fn main() -> emsep::Result<()> {
    let sys = CoordinateSystem::standard(SystemId::ProlateSpheroidal);
    let frame = FrameSpec::new(
        FrameProfiles {
            h: std::array::from_fn(|_| Profile::exp(1.0, 0.3)),
            w: [Profile::linear(0.3), Profile::zero(), Profile::zero()],
            ..Default::default()
        },
        sys.split_class(),
    )?;
    let f0 = [Profile::poly(vec![0.2, -0.1]), Profile::zero(), Profile::zero()];
    let spec = PotentialSpec::electrostatic(sys, frame, f0, Profile::constant(0.1), 1.0)?;
    let lambda = SeparationConstants::new([0.3, -0.6, 0.45])?;
    let ranges = default_ranges(&sys);
    let psi = SeparatedSolution::build(&spec, lambda, &SeparationSetup::new(ranges, (0.0, 1.0), 0.0))?;
    let samples = interior_samples(&sys, &ranges, (0.0, 1.0), 3, 100);
    let good = se_report(&psi, &spec, &samples, Steps::default())?;
    println!("separated solution:      max relative residual {:.2e}", good.max_relative());

    let phi0 = solve_phi0_with(&spec, lambda.lambda, (0.0, 1.0), 0.0, false)?;
    let bad = SeparatedSolution::from_parts(spec.clone(), lambda, phi0, psi.axes().clone(), Modulation::Phase)?;
    let control = se_report(&bad, &spec, &samples, Steps::default())?;
    println!("real T0 (control):       max relative residual {:.2e}", control.max_relative());
    Ok(())
}
