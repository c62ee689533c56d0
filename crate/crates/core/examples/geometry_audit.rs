//! Orthogonality, Stäckel relation, harmonicity and metric coefficients for
//! every system in a static unit frame.

use emsep::coords::{CoordinateSystem, SystemId};
use emsep::frame::FrameSpec;
use emsep::verify::geometry_audit;

pub fn main() -> emsep::Result<()> {
    println!("{:<30} {:>10} {:>10} {:>10} {:>10}", "system", "orth", "stackel", "harmonic", "column");
    for id in SystemId::ALL {
        let sys = CoordinateSystem::standard(id);
        let report = geometry_audit(&sys, &FrameSpec::identity(id.split_class()), 0.0, 200, 1)?;
        let max = |name: &str| report.check(name).map_or(f64::NAN, |c| c.max);
        println!(
            "{:<30} {:>10.2e} {:>10.2e} {:>10.2e} {:>10.2e}",
            id.name(),
            max("orthogonality"),
            max("stackel"),
            max("harmonicity"),
            max("column_norm")
        );
    }
    Ok(())
}
