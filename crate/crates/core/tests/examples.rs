//! Every runnable example completes without error.

#[path = "../examples/elliptic_functions.rs"]
mod elliptic_functions;

#[test]
fn elliptic_functions_runs() {
    elliptic_functions::main().unwrap();
}

#[path = "../examples/list_systems.rs"]
mod list_systems;

#[test]
fn list_systems_runs() {
    list_systems::main().unwrap();
}

#[path = "../examples/geometry_audit.rs"]
mod geometry_audit;

#[test]
fn geometry_audit_runs() {
    geometry_audit::main().unwrap();
}

#[path = "../examples/magnetic_rotating_frame.rs"]
mod magnetic_rotating_frame;

#[test]
fn magnetic_rotating_frame_runs() {
    magnetic_rotating_frame::main().unwrap();
}

#[path = "../examples/electrostatic_expanding_frame.rs"]
mod electrostatic_expanding_frame;

#[test]
fn electrostatic_expanding_frame_runs() {
    electrostatic_expanding_frame::main().unwrap();
}

#[path = "../examples/coulomb_four_systems.rs"]
mod coulomb_four_systems;

#[test]
fn coulomb_four_systems_runs() {
    coulomb_four_systems::main().unwrap();
}

#[path = "../examples/hamilton_jacobi.rs"]
mod hamilton_jacobi;

#[test]
fn hamilton_jacobi_runs() {
    hamilton_jacobi::main().unwrap();
}

#[path = "../examples/stationary_slice.rs"]
mod stationary_slice;

#[test]
fn stationary_slice_runs() {
    stationary_slice::main().unwrap();
}
