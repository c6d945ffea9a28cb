mod picard_lattice {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/picard_lattice.rs"
    ));
}

#[test]
fn picard_lattice_runs() {
    picard_lattice::run_example().expect("picard_lattice example should run");
}

mod mukai_isometries {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/mukai_isometries.rs"
    ));
}

#[test]
fn mukai_isometries_runs() {
    mukai_isometries::run_example().expect("mukai_isometries example should run");
}

mod pell_solver {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/pell_solver.rs"
    ));
}

#[test]
fn pell_solver_runs() {
    pell_solver::run_example().expect("pell_solver example should run");
}

mod family_dlist {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/family_dlist.rs"
    ));
}

#[test]
fn family_dlist_runs() {
    family_dlist::run_example().expect("family_dlist example should run");
}

mod infinite_orbit {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/infinite_orbit.rs"
    ));
}

#[test]
fn infinite_orbit_runs() {
    infinite_orbit::run_example().expect("infinite_orbit example should run");
}

mod beauville_bogomolov {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/beauville_bogomolov.rs"
    ));
}

#[test]
fn beauville_bogomolov_runs() {
    beauville_bogomolov::run_example().expect("beauville_bogomolov example should run");
}

mod json_report {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/json_report.rs"
    ));
}

#[test]
fn json_report_runs() {
    json_report::run_example().expect("json_report example should run");
}
