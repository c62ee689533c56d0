//! The eleven separable coordinate systems with their domains and Stäckel
//! rows at a sample point.

use emsep::coords::{CoordinateSystem, SystemId};
use emsep::stackel::stackel_values;

pub fn main() -> emsep::Result<()> {
    print!("{}", emsep::cli::systems_table());
    println!();
    for id in SystemId::ALL {
        let sys = CoordinateSystem::standard(id);
        let omega = sys.sample_domain(1, 1)[0];
        let s = stackel_values(&sys, &omega)?;
        println!("{:<30} det S = {:+.6e} at ω = {:.4?}", id.name(), s.determinant(), omega.as_slice());
    }
    Ok(())
}
