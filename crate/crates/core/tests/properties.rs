use atgraph::arrivals::ArrivalSpec;
use atgraph::asymptotics::{
    limit_pmf_sublinear, limit_pmf_yule, limit_survival_sublinear, limit_survival_yule, ntl_increments,
};
use atgraph::graph::multigraph_from_labels;
use atgraph::io::{format_edge_list, format_labels, parse_edge_list, parse_labels};
use atgraph::likelihood::{log_prob_labels, log_prob_sequential};
use atgraph::partition::{check_coherence, enumerate_partitions, phi, phi_inverse, ConditionalLaw, CrpMarginalLaw, Partition};
use atgraph::report::TestReport;
use atgraph::rng::{stream, Component};
use atgraph::samplers::{attachment_probabilities, sample_db, sample_stick_breaking};
use atgraph::schedule::validate_schedule;
use atgraph::{ArrivalSchedule, ArrivalTime, Label, LabelSequence, ModelParams, Provenance};
use num_rational::Ratio;
use proptest::prelude::*;

/// Each choice picks a label among the existing ones or the next new one.
fn labels_from_choices(choices: &[u32]) -> Vec<Label> {
    let mut max = 0;
    let mut out = Vec::with_capacity(choices.len() + 1);
    out.push(1);
    max += 1;
    for &c in choices {
        let l = c % (max + 1) + 1;
        max = max.max(l);
        out.push(l);
    }
    out
}

fn schedule_from_gaps(gaps: &[u64]) -> ArrivalSchedule {
    let mut t = 1;
    let mut times = vec![1];
    for g in gaps {
        t += g;
        times.push(t);
    }
    ArrivalSchedule::from_finite(times, Provenance::Fixed).unwrap()
}

fn label_vec() -> impl Strategy<Value = Vec<Label>> {
    prop::collection::vec(any::<u32>(), 0..40).prop_map(|c| labels_from_choices(&c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn valid_labels_are_accepted_and_survive_serialization(labels in label_vec(), alpha in -3.0f64..0.99) {
        let seq = LabelSequence::new(labels.clone()).unwrap();
        let (a, back) = parse_labels(&format_labels(alpha, &seq)).unwrap();
        prop_assert_eq!(back.as_slice(), &labels[..]);
        prop_assert_eq!(a, Some(alpha));
        let view = multigraph_from_labels(&labels).unwrap();
        prop_assert_eq!(view.labels().as_slice(), &labels[..]);
        if labels.len() % 2 == 0 {
            let edges = parse_edge_list(&format_edge_list(&seq)).unwrap();
            prop_assert_eq!(edges.as_slice(), &labels[..]);
        }
    }

    #[test]
    fn labels_skipping_ahead_are_rejected(labels in label_vec(), pos in any::<prop::sample::Index>()) {
        let mut bad = labels.clone();
        let i = pos.index(bad.len());
        let max_before = bad[..i].iter().copied().max().unwrap_or(0);
        bad[i] = max_before + 2;
        prop_assert!(LabelSequence::new(bad).is_err());
    }

    #[test]
    fn degrees_sum_to_prefix_length(labels in label_vec()) {
        for n in 1..=labels.len() {
            let view = multigraph_from_labels(&labels[..n]).unwrap();
            prop_assert_eq!(view.degrees().iter().sum::<u64>(), n as u64);
            prop_assert_eq!(view.num_vertices(), *labels[..n].iter().max().unwrap() as usize);
        }
    }

    #[test]
    fn closed_form_matches_sequential_product(labels in label_vec(), alpha in -3.0f64..0.99) {
        let view = multigraph_from_labels(&labels).unwrap();
        let schedule = ArrivalSchedule::from_finite(view.arrival_times().to_vec(), Provenance::Fixed).unwrap();
        let params = ModelParams::new(alpha).unwrap();
        let seq = LabelSequence::new(labels).unwrap();
        let closed = log_prob_labels(&params, &schedule, &seq).unwrap().value;
        let product = log_prob_sequential(&params, &schedule, &seq).unwrap().value;
        prop_assert!(closed.is_finite());
        prop_assert!((closed - product).abs() < 1e-12 * closed.abs().max(1.0), "{} vs {}", closed, product);
    }

    #[test]
    fn mismatched_schedule_has_zero_probability(labels in label_vec(), alpha in -1.0f64..0.9, shift in 1u64..3) {
        let view = multigraph_from_labels(&labels).unwrap();
        prop_assume!(view.num_vertices() >= 2);
        let mut times = view.arrival_times().to_vec();
        times[1] += shift;
        for i in 2..times.len() {
            if times[i] <= times[i - 1] {
                times[i] = times[i - 1] + 1;
            }
        }
        let schedule = ArrivalSchedule::from_finite(times, Provenance::Fixed).unwrap();
        let lp = log_prob_labels(&ModelParams::new(alpha).unwrap(), &schedule, &LabelSequence::new(labels).unwrap()).unwrap();
        prop_assert!(lp.is_impossible());
    }

    #[test]
    fn exact_probabilities_sum_to_one(n in 1usize..=7, gaps in prop::collection::vec(1u64..4, 0..6), alpha in -2.0f64..0.95) {
        let schedule = schedule_from_gaps(&gaps);
        let params = ModelParams::new(alpha).unwrap();
        let total: f64 = enumerate_partitions(n)
            .iter()
            .map(|p| log_prob_labels(&params, &schedule, p.labels()).unwrap().value.exp())
            .sum();
        prop_assert!((total - 1.0).abs() < 1e-10, "sum = {}", total);
    }

    #[test]
    fn phi_is_a_bijection(labels in label_vec()) {
        let seq = LabelSequence::new(labels).unwrap();
        let part = phi_inverse(&seq);
        prop_assert_eq!(&phi(&part), &seq);
        let again = Partition::from_blocks(&part.blocks()).unwrap();
        prop_assert_eq!(again, part);
    }

    #[test]
    fn conditional_law_is_coherent(n in 2usize..=6, gaps in prop::collection::vec(1u64..3, 0..4), alpha in -1.5f64..0.95) {
        let law = ConditionalLaw { params: ModelParams::new(alpha).unwrap(), schedule: schedule_from_gaps(&gaps) };
        let report = check_coherence(&law, n, 8, 1e-12).unwrap();
        prop_assert!(report.passed, "{:?}", report.summary_lines());
    }

    #[test]
    fn crp_marginal_law_is_coherent(n in 2usize..=6, alpha in 0.0f64..0.95, theta in 0.0f64..5.0) {
        let report = check_coherence(&CrpMarginalLaw { alpha, theta }, n, 8, 1e-12).unwrap();
        prop_assert!(report.passed, "{:?}", report.summary_lines());
    }

    #[test]
    fn schedule_validation(gaps in prop::collection::vec(1u64..10, 0..10), infs in 0usize..3, bad in any::<prop::sample::Index>()) {
        let mut raw: Vec<ArrivalTime> = schedule_from_gaps(&gaps).finite_times().iter().map(|&t| ArrivalTime::Finite(t)).collect();
        let n_finite = raw.len();
        raw.extend(std::iter::repeat(ArrivalTime::Infinite).take(infs));
        let s = validate_schedule(&raw).unwrap();
        prop_assert_eq!(s.num_finite(), n_finite);
        prop_assert_eq!(s.to_raw().into_iter().take(n_finite).collect::<Vec<_>>(), raw[..n_finite].to_vec());

        if n_finite >= 2 {
            let i = 1 + bad.index(n_finite - 1);
            let mut broken = raw.clone();
            broken[i] = raw[i - 1];
            prop_assert!(validate_schedule(&broken).is_err());
        }
        if infs > 0 {
            let mut late = raw.clone();
            late.push(ArrivalTime::Finite(u64::MAX));
            prop_assert!(validate_schedule(&late).is_err());
        }
        let mut shifted = raw.clone();
        shifted[0] = ArrivalTime::Finite(2);
        prop_assume!(n_finite == 1 || !matches!(raw.get(1), Some(ArrivalTime::Finite(2))));
        prop_assert!(validate_schedule(&shifted).is_err());
    }

    #[test]
    fn samplers_are_deterministic_and_consistent(seed in any::<u64>(), gaps in prop::collection::vec(1u64..4, 0..20), alpha in -2.0f64..0.95, n in 1u64..80) {
        let schedule = schedule_from_gaps(&gaps);
        let params = ModelParams::new(alpha).unwrap();
        let a = sample_db(&params, &schedule, n, &mut stream(seed, Component::Graph)).unwrap();
        let b = sample_db(&params, &schedule, n, &mut stream(seed, Component::Graph)).unwrap();
        prop_assert_eq!(&a.labels, &b.labels);
        let c = sample_stick_breaking(&params, &schedule, n, &mut stream(seed, Component::Graph)).unwrap();
        let d = sample_stick_breaking(&params, &schedule, n, &mut stream(seed, Component::Graph)).unwrap();
        prop_assert_eq!(&c.labels, &d.labels);
        for out in [&a, &c] {
            prop_assert_eq!(out.labels.len() as u64, n);
            let view = multigraph_from_labels(out.labels.as_slice()).unwrap();
            let expected: Vec<u64> = schedule.finite_times().iter().copied().filter(|&t| t <= n).collect();
            prop_assert_eq!(view.arrival_times(), &expected[..]);
            if schedule.in_t2() {
                prop_assert!(view.is_prefix_connected());
            }
            let lp = log_prob_labels(&params, &schedule, &out.labels).unwrap();
            prop_assert!(lp.value.is_finite());
        }
    }

    #[test]
    fn attachment_probabilities_sum_to_one(degrees in prop::collection::vec(1u64..50, 1..20), num in -20i64..20, den in 1i64..10) {
        prop_assume!(Ratio::new(num, den) < Ratio::from_integer(1));
        let probs = attachment_probabilities(&degrees, &Ratio::new(num, den));
        prop_assert_eq!(probs.iter().fold(Ratio::from_integer(0), |acc, p| acc + p), Ratio::from_integer(1));
    }

    #[test]
    fn ntl_increments_are_fractions(xs in prop::collection::vec(0.0f64..10.0, 1..30)) {
        prop_assume!(xs[0] > 0.0);
        let inc = ntl_increments(&xs).unwrap();
        prop_assert_eq!(inc[0], 1.0);
        prop_assert!(inc.iter().all(|&v| (0.0..=1.0).contains(&v)));
        let mut rest = 1.0;
        let mut rebuilt = vec![0.0; xs.len()];
        for j in (0..xs.len()).rev() {
            rebuilt[j] = rest * inc[j];
            rest *= 1.0 - inc[j];
        }
        let total: f64 = xs.iter().sum();
        for (r, x) in rebuilt.iter().zip(&xs) {
            prop_assert!((r - x / total).abs() < 1e-12);
        }
    }

    #[test]
    fn limit_pmfs_add_up_with_their_tails(alpha in 0.01f64..0.99, gamma in 0.05f64..20.0, lin_alpha in -3.0f64..0.99, d_max in 1usize..300) {
        let p = limit_pmf_sublinear(alpha, d_max).unwrap();
        let s = limit_survival_sublinear(alpha, d_max as u64).unwrap();
        prop_assert!(p.iter().all(|&v| v > 0.0));
        prop_assert!((p.iter().sum::<f64>() + s - 1.0).abs() < 1e-10);
        let q = limit_pmf_yule(lin_alpha, gamma, d_max).unwrap();
        let t = limit_survival_yule(lin_alpha, gamma, d_max as u64).unwrap();
        prop_assert!((q.iter().sum::<f64>() + t - 1.0).abs() < 1e-10);
    }

    #[test]
    fn bonferroni_root_follows_smallest_leaf(ps in prop::collection::vec(0.0f64..1.0, 1..10), level in 0.001f64..0.2) {
        let m = ps.len() as f64;
        let leaves = ps.iter().enumerate().map(|(i, &p)| TestReport::statistical(format!("leaf {i}"), 0.0, p, level, 10)).collect();
        let root = TestReport::composite("family", leaves).bonferroni(level);
        let min_p = ps.iter().copied().fold(f64::INFINITY, f64::min);
        prop_assert_eq!(root.passed, ps.iter().all(|&p| p > level / m));
        prop_assert!((root.p_value.unwrap() - (m * min_p).min(1.0)).abs() < 1e-15);
        prop_assert!(root.components.iter().all(|c| (c.threshold - level / m).abs() < 1e-15));
    }

    #[test]
    fn arrival_specs_round_trip(d in 1u64..100, beta in 0.01f64..1.0, lambda in 0.01f64..20.0, a in 0.0f64..0.99, th in 0.0f64..10.0, which in 0usize..5) {
        let spec = match which {
            0 => ArrivalSpec::Constant(d),
            1 => ArrivalSpec::Geometric(beta),
            2 => ArrivalSpec::ShiftedPoisson(lambda),
            3 => ArrivalSpec::Crp { alpha: a, theta: th },
            _ => ArrivalSpec::Doubled(Box::new(ArrivalSpec::Geometric(beta))),
        };
        let text = spec.to_string();
        prop_assert_eq!(text.parse::<ArrivalSpec>().unwrap(), spec);
    }
}
