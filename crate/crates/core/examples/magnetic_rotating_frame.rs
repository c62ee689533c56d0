//! Separated Schrödinger solution in a rotating, scaling and translating
//! frame with a uniform time-dependent magnetic field.

use emsep::coords::{CoordinateSystem, SystemId};
use emsep::frame::{FrameProfiles, FrameSpec};
use emsep::potential::PotentialSpec;
use emsep::profile::Profile;
use emsep::separate::{default_ranges, SeparatedSolution, SeparationConstants, SeparationSetup};
use emsep::verify::{interior_samples, se_report, Steps};

pub fn main() -> emsep::Result<()> {
    for id in [SystemId::Cartesian, SystemId::Cylindrical, SystemId::Spherical, SystemId::Ellipsoidal] {
        let sys = CoordinateSystem::standard(id);
        let scaling = || Profile::exp(1.0, 0.25);
        let profiles = FrameProfiles {
            alpha: Profile::linear(0.5),
            beta: Profile::sin(0.2, 1.3, 0.0, 0.4),
            h: [scaling(), scaling(), scaling()],
            w: [Profile::linear(0.2), Profile::zero(), Profile::constant(-0.3)],
            ..Default::default()
        };
        let frame = FrameSpec::new(profiles, id.split_class())?;
        let f0 = [Profile::poly(vec![0.2, -0.1]), Profile::zero(), Profile::zero()];
        let spec = PotentialSpec::magnetic(sys, frame, f0, Profile::constant(0.1), 1.0)?;
        let lambda = SeparationConstants::new([0.3, -0.6, 0.45])?;
        let ranges = default_ranges(&sys);
        let psi = SeparatedSolution::build(&spec, lambda, &SeparationSetup::new(ranges, (0.0, 1.0), 0.0))?;
        let samples = interior_samples(&sys, &ranges, (0.0, 1.0), 7, 100);
        let report = se_report(&psi, &spec, &samples, Steps::default())?;
        let b = spec.magnetic_field(0.5);
        println!(
            "{:<14} B(0.5) = ({:+.3}, {:+.3}, {:+.3})  max relative residual {:.2e}",
            id.name(),
            b[0],
            b[1],
            b[2],
            report.max_relative()
        );
    }
    Ok(())
}
