//! Under a true identity, component KS p-values are uniform across seeds.

use atgraph::identities::{identity_draws, CrpForm, IdentitySpec, Route, YsForm};
use atgraph::stats::{ks_one_sample, ks_two_sample};

fn p_values(spec: &IdentitySpec, m: usize, seeds: std::ops::Range<u64>) -> Vec<f64> {
    let mut ps = vec![];
    for seed in seeds {
        let draws = identity_draws(spec, m, 1_000 + seed).unwrap();
        for c in draws.comparisons {
            ps.push(ks_two_sample(&c.lhs, &c.rhs).unwrap().p_value);
        }
    }
    ps
}

fn assert_uniform(spec: &IdentitySpec, m: usize, seeds: u64) {
    let ps = p_values(spec, m, 0..seeds);
    let ks = ks_one_sample(&ps, |x| x.clamp(0.0, 1.0)).unwrap();
    let small = ps.iter().filter(|&&p| p < 1e-3).count();
    assert!(ks.p_value > 1e-3 && small <= 1, "{}: uniformity p = {}, {} tiny of {}: {ps:?}", spec.label(), ks.p_value, small, ps.len());
}

#[test]
fn beta_gamma_and_split() {
    assert_uniform(&IdentitySpec::BetaGammaAlgebra { a: 0.5, b: 2.0 }, 10_000, 20);
    assert_uniform(&IdentitySpec::BetaProductSplit { a: 0.5, b: 1.0, c: 2.0 }, 10_000, 40);
}

#[test]
fn pa_exact_all_four() {
    for which in 1..=4 {
        assert_uniform(&IdentitySpec::PaLimits { d: 1, alpha: 0.5, r: 2, which, route: Route::Exact }, 10_000, 15);
    }
    assert_uniform(&IdentitySpec::PaLimits { d: 1, alpha: -0.5, r: 3, which: 4, route: Route::Exact }, 10_000, 10);
}

#[test]
fn crp_all_forms() {
    for form in [CrpForm::Joint, CrpForm::Marginal, CrpForm::Conditional] {
        assert_uniform(&IdentitySpec::CrpLimits { alpha: 0.5, theta: 1.0, times: vec![1, 3, 4], form }, 10_000, 15);
    }
}

#[test]
fn ys_all_forms() {
    for form in [YsForm::Joint, YsForm::Marginal, YsForm::GammaMarginal, YsForm::Conditional] {
        assert_uniform(&IdentitySpec::YsLimits { beta: 0.5, times: vec![1, 3, 6], form, route: Route::Exact }, 10_000, 8);
    }
}

#[test]
fn urn_all_forms() {
    for which in 1..=3 {
        assert_uniform(&IdentitySpec::UrnImmigration { w: 2, b: 1, beta: 0.3, which, route: Route::Exact }, 10_000, 15);
    }
}
