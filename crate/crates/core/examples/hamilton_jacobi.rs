//! Separated Hamilton–Jacobi actions and turning-point detection.

use emsep::coords::{CoordinateSystem, SystemId};
use emsep::frame::FrameSpec;
use emsep::potential::PotentialSpec;
use emsep::profile::Profile;
use emsep::separate::{default_ranges, hj_solve, SeparationConstants};
use emsep::verify::{hj_report, interior_samples, Steps};

pub fn main() -> emsep::Result<()> {
    let sys = CoordinateSystem::standard(SystemId::Spherical);
    let spec = PotentialSpec::coulomb(sys, FrameSpec::identity(sys.split_class()), 1.0, 1.0)?;
    let lambda = SeparationConstants::new([10.0, 1.0, 0.1])?;
    let ranges = default_ranges(&sys);
    let u = hj_solve(&spec, &lambda, ranges, [1.0, -1.0, 1.0], 0.0)?;
    let samples = interior_samples(&sys, &ranges, (0.0, 1.0), 4, 100);
    let report = hj_report(&u, &spec, &samples, Steps::default())?;
    println!("coulomb spherical: max relative residual {:.2e}", report.max_relative());

    let cart = CoordinateSystem::standard(SystemId::Cartesian);
    let free = PotentialSpec::magnetic_unchecked(
        cart,
        FrameSpec::identity(cart.split_class()),
        Default::default(),
        Profile::zero(),
        1.0,
    )?;
    let bad = SeparationConstants::new([-1.0, 1.0, 1.0])?;
    match hj_solve(&free, &bad, [(-2.0, 2.0); 3], [1.0; 3], 0.0) {
        Err(e) => println!("negative radicand rejected: {e}"),
        Ok(_) => println!("negative radicand was not detected"),
    }
    Ok(())
}
