//! The generalized Coulomb problem separated in spherical, both prolate II,
//! parabolic and conical coordinates.

use emsep::cli::{coulomb_demo_report, PotentialConfig, Scenario};
use emsep::coords::{CoordinateSystem, SystemId};
use emsep::frame::FrameSpec;
use emsep::potential::{PotentialKind, PotentialSpec};
use emsep::Vec3;

pub fn main() -> emsep::Result<()> {
    let mut scenario = Scenario::for_system(SystemId::Spherical);
    scenario.potential = PotentialConfig {
        kind: PotentialKind::Coulomb,
        q: 1.0,
        ..Default::default()
    };
    let report = coulomb_demo_report(&scenario, 21, 100)?;
    for c in &report.checks {
        println!("{:<18} max {:.2e}  mean {:.2e}", c.check, c.max, c.mean);
    }

    let sys = CoordinateSystem::standard(SystemId::Spherical);
    let spec = PotentialSpec::coulomb(sys, FrameSpec::identity(sys.split_class()), 1.0, 1.0)?;
    let omega = Vec3::new(0.8, 0.3, 1.2);
    let x = sys.forward(&omega)?;
    let field = spec.vector_potential(0.0, &x, &omega)?;
    println!("static frame: e A0 = {:.15}, q/|x| = {:.15}", field.a0 * spec.charge(), 1.0 / x.norm());
    Ok(())
}
