//! Scaled degrees of simulated graphs against the product forms of their limits.

use atgraph::identities::{run_identity, IdentitySpec, Route, YsForm};

#[test]
fn urn_limit_from_simulation() {
    let spec = IdentitySpec::UrnImmigration { w: 1, b: 1, beta: 0.5, which: 0, route: Route::Simulation { n: 1_000_000 } };
    let report = run_identity(&spec, 20_000, 41).unwrap();
    assert!(report.passed, "{:?}", report.summary_lines());
}

#[test]
fn ys_limit_from_simulation() {
    let spec = IdentitySpec::YsLimits { beta: 0.5, times: vec![1, 3], form: YsForm::GammaMarginal, route: Route::Simulation { n: 1_000_000 } };
    let report = run_identity(&spec, 10_000, 42).unwrap();
    assert!(report.passed, "{:?}", report.summary_lines());
}

#[test]
fn pa_limit_from_simulation() {
    let spec = IdentitySpec::PaLimits { d: 1, alpha: 0.5, r: 2, which: 4, route: Route::Simulation { n: 1_000_000 } };
    let report = run_identity(&spec, 10_000, 43).unwrap();
    assert!(report.passed, "{:?}", report.summary_lines());
}
