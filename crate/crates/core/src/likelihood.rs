//! Exact probabilities of label sequences and partitions given arrival times, the
//! Gibbs-like coefficients `V^{α,T}_{n,k}`, and marginalization over CRP arrivals.

use crate::arrivals::ln_gap_survival;
use crate::error::{bad_params, Error, Result};
use crate::graph::{LabelSequence, MultigraphView};
use crate::params::ModelParams;
use crate::scalar::{ln_gamma_ratio, Field, Real};
use crate::schedule::ArrivalSchedule;
use serde::Serialize;

/// A natural-log probability. `-∞` comes with a reason.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LogProb<S = f64> {
    pub value: S,
    pub diagnostic: Option<String>,
}

impl<S: Real> LogProb<S> {
    fn finite(value: S) -> Self {
        LogProb { value, diagnostic: None }
    }

    fn impossible(reason: String) -> Self {
        LogProb { value: S::neg_infinity(), diagnostic: Some(reason) }
    }

    pub fn is_impossible(&self) -> bool {
        self.value == S::neg_infinity()
    }

    /// Turns an impossible outcome into [`Error::Inconsistent`].
    pub fn into_result(self) -> Result<S> {
        match self.diagnostic {
            Some(reason) if self.value == S::neg_infinity() => Err(Error::Inconsistent(reason)),
            _ => Ok(self.value),
        }
    }
}

/// Why `labels` cannot occur under `schedule`, if it cannot.
pub fn schedule_mismatch(schedule: &ArrivalSchedule, view: &MultigraphView) -> Option<String> {
    let n = view.num_edge_ends() as u64;
    let expected = &schedule.finite_times()[..schedule.vertices_by(n)];
    let observed = view.arrival_times();
    if expected == observed {
        return None;
    }
    let i = expected.iter().zip(observed).position(|(a, b)| a != b).unwrap_or(expected.len().min(observed.len()));
    let show = |v: Option<&u64>| v.map_or("inf".to_string(), |t| t.to_string());
    Some(format!(
        "vertex {} arrives at end {} but the schedule says {}",
        i + 1,
        show(observed.get(i)),
        show(expected.get(i))
    ))
}

fn delta_one<S: Real>(j: usize) -> S {
    if j == 1 {
        S::one()
    } else {
        S::zero()
    }
}

/// `ln V^{α,T}_{n,k} = −ln Γ(n−kα) + Σ_j [ln Γ(T_j − jα) − ln Γ(T_j − 1 − (j−1)α + δ₁(j))]`.
fn ln_v_unchecked<S: Real>(alpha: S, n: u64, arrival_times: &[u64]) -> S {
    let k = S::from_usize(arrival_times.len()).unwrap();
    let mut acc = -(S::from_count(n) - k * alpha).lgamma();
    for (i, &t) in arrival_times.iter().enumerate() {
        let j = S::from_usize(i + 1).unwrap();
        let t = S::from_count(t);
        acc = acc + (t - j * alpha).lgamma() - (t - S::one() - (j - S::one()) * alpha + delta_one::<S>(i + 1)).lgamma();
    }
    acc
}

fn ln_block_weights<S: Real>(alpha: S, sizes: impl Iterator<Item = u64>) -> S {
    let base = (S::one() - alpha).lgamma();
    sizes.fold(S::zero(), |acc, c| acc + (S::from_count(c) - alpha).lgamma() - base)
}

/// Exact log-probability of a label sequence given the arrival times:
/// `Γ(n−kα)^{-1} Π_j Γ(T_j−jα)Γ(c_j−α) / (Γ(T_j−1−(j−1)α+δ₁(j)) Γ(1−α))`.
pub fn log_prob_labels<S: Real>(params: &ModelParams<S>, schedule: &ArrivalSchedule, labels: &LabelSequence) -> Result<LogProb<S>> {
    if labels.is_empty() {
        return Ok(LogProb::finite(S::zero()));
    }
    let view = MultigraphView::new(labels.clone());
    if let Some(reason) = schedule_mismatch(schedule, &view) {
        return Ok(LogProb::impossible(reason));
    }
    let alpha = params.alpha();
    let value = ln_v_unchecked(alpha, view.num_edge_ends() as u64, view.arrival_times())
        + ln_block_weights(alpha, view.degrees().iter().copied());
    Ok(LogProb::finite(value))
}

/// The same probability as a product of one-step `P_α` conditionals.
pub fn log_prob_sequential<S: Real>(params: &ModelParams<S>, schedule: &ArrivalSchedule, labels: &LabelSequence) -> Result<LogProb<S>> {
    let alpha = params.alpha();
    let times = schedule.finite_times();
    let mut counts: Vec<u64> = Vec::new();
    let mut acc = S::zero();
    for (i, &l) in labels.as_slice().iter().enumerate() {
        let n = i as u64 + 1;
        let arrival = times.get(counts.len()) == Some(&n);
        let new = l as usize > counts.len();
        if arrival != new {
            return Ok(LogProb::impossible(format!("end {n}: label {l} contradicts the schedule")));
        }
        if new {
            counts.push(1);
            continue;
        }
        let k = S::from_usize(counts.len()).unwrap();
        let c = &mut counts[l as usize - 1];
        acc = acc + ((S::from_count(*c) - alpha) / (S::from_count(i as u64) - k * alpha)).ln();
        *c += 1;
    }
    Ok(LogProb::finite(acc))
}

/// Sequential product in exact arithmetic; zero when the labels contradict the schedule.
pub fn prob_sequential_exact<F: Field>(alpha: &F, schedule: &ArrivalSchedule, labels: &LabelSequence) -> F {
    let times = schedule.finite_times();
    let mut counts: Vec<u64> = Vec::new();
    let mut acc = F::one();
    for (i, &l) in labels.as_slice().iter().enumerate() {
        let n = i as u64 + 1;
        let arrival = times.get(counts.len()) == Some(&n);
        let new = l as usize > counts.len();
        if arrival != new {
            return F::zero();
        }
        if new {
            counts.push(1);
            continue;
        }
        let k = F::from_usize(counts.len()).unwrap();
        let c = &mut counts[l as usize - 1];
        let num = F::from_u64(*c).unwrap() - alpha.clone();
        let den = F::from_u64(i as u64).unwrap() - k * alpha.clone();
        acc = acc * num / den;
        *c += 1;
    }
    acc
}

fn check_partition_shape(arrival_times: &[u64], block_sizes: &[u64]) -> Result<u64> {
    if arrival_times.len() != block_sizes.len() {
        return Err(Error::Inconsistent(format!(
            "{} arrival times for {} blocks",
            arrival_times.len(),
            block_sizes.len()
        )));
    }
    if arrival_times.first() != Some(&1) {
        return Err(Error::Inconsistent("first arrival time must be 1".into()));
    }
    if arrival_times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Inconsistent("arrival times must increase".into()));
    }
    if block_sizes.contains(&0) {
        return Err(Error::Inconsistent("empty block".into()));
    }
    let n: u64 = block_sizes.iter().sum();
    let mut before = 0u64;
    for j in 1..arrival_times.len() {
        before += block_sizes[j - 1];
        // Every element before T_{j+1} lies in blocks 1..j.
        if before < arrival_times[j] - 1 {
            return Err(Error::Inconsistent(format!(
                "blocks 1..{j} hold {before} elements but block {} opens at {}",
                j + 1,
                arrival_times[j]
            )));
        }
    }
    if *arrival_times.last().unwrap() > n {
        return Err(Error::Inconsistent("last arrival after n".into()));
    }
    Ok(n)
}

/// Log-probability that the urn produces a given partition with these record indices
/// and block sizes (any partition with them has the same probability).
pub fn log_prob_partition<S: Real>(params: &ModelParams<S>, arrival_times: &[u64], block_sizes: &[u64]) -> Result<S> {
    let n = check_partition_shape(arrival_times, block_sizes)?;
    let alpha = params.alpha();
    Ok(ln_v_unchecked(alpha, n, arrival_times) + ln_block_weights(alpha, block_sizes.iter().copied()))
}

/// `ln V^{α,T}_{n,k}` for the first `k` arrival times.
pub fn ln_v_alpha_t<S: Real>(n: u64, k: usize, params: &ModelParams<S>, arrival_times: &[u64]) -> Result<S> {
    if k == 0 || arrival_times.len() < k {
        return Err(Error::Inconsistent(format!("need {k} arrival times, have {}", arrival_times.len())));
    }
    let t = &arrival_times[..k];
    if t[0] != 1 || t.windows(2).any(|w| w[1] <= w[0]) || t[k - 1] > n {
        return Err(Error::Inconsistent(format!("arrival times {t:?} invalid for n = {n}")));
    }
    Ok(ln_v_unchecked(params.alpha(), n, t))
}

pub fn v_alpha_t<S: Real>(n: u64, k: usize, params: &ModelParams<S>, arrival_times: &[u64]) -> Result<S> {
    ln_v_alpha_t(n, k, params, arrival_times).map(|v| v.exp())
}

fn check_crp(alpha: f64, theta: f64) -> Result<()> {
    if !(0.0..1.0).contains(&alpha) || !(theta > -alpha) {
        return Err(bad_params(format!("CRP needs alpha in [0,1) and theta > -alpha, got ({alpha}, {theta})")));
    }
    Ok(())
}

/// `ln P(T_{k+1} = T_k + t | T_1..T_k)` under CRP(α,θ) arrivals:
/// `(θ+αk) Γ(θ+T_k) Γ(T_k+t−1−αk) / (Γ(θ+T_k+t) Γ(T_k−αk))`.
pub fn crp_arrival_log_pmf<S: Real>(alpha: S, theta: S, t_k: u64, k: usize, t: u64) -> Result<S> {
    check_crp(alpha.to_f64().unwrap(), theta.to_f64().unwrap())?;
    if t == 0 || k == 0 || (t_k as usize) < k {
        return Err(bad_params(format!("need t >= 1 and 1 <= k <= T_k, got t={t}, k={k}, T_k={t_k}")));
    }
    let kk = S::from_usize(k).unwrap();
    let tk = S::from_count(t_k);
    Ok((theta + alpha * kk).ln() + ln_gamma_ratio(tk - alpha * kk, S::from_count(t - 1)) - ln_gamma_ratio(theta + tk, S::from_count(t)))
}

/// `ln P(T_{k+1} > n | T_k)` under CRP(α,θ) arrivals.
pub fn crp_no_arrival_log_prob(alpha: f64, theta: f64, t_k: u64, k: usize, n: u64) -> f64 {
    ln_gap_survival(t_k as f64 - alpha * k as f64, theta + alpha * k as f64, n.saturating_sub(t_k))
}

/// `ln P(T_1..T_k = arrival_times, T_{k+1} > n)` under CRP(α,θ) arrivals.
pub fn crp_pattern_log_prob(alpha: f64, theta: f64, arrival_times: &[u64], n: u64) -> Result<f64> {
    let mut acc = 0.0;
    for (i, w) in arrival_times.windows(2).enumerate() {
        acc += crp_arrival_log_pmf(alpha, theta, w[0], i + 1, w[1] - w[0])?;
    }
    let k = arrival_times.len();
    Ok(acc + crp_no_arrival_log_prob(alpha, theta, arrival_times[k - 1], k, n))
}

/// `ln P(Π_n = π)` for the partition with these labels when the arrival times are
/// themselves CRP(α,θ) record indices.
pub fn crp_marginal_log_prob(alpha: f64, theta: f64, labels: &LabelSequence) -> Result<f64> {
    let view = MultigraphView::new(labels.clone());
    let n = view.num_edge_ends() as u64;
    let lw = crp_pattern_log_prob(alpha, theta, view.arrival_times(), n)?;
    let lp = log_prob_partition(&ModelParams::new(alpha)?, view.arrival_times(), view.degrees())?;
    Ok(lw + lp)
}

pub const DEFAULT_ENUMERATION_CAP: usize = 12;

/// Result of marginalizing `V^{α,T}_{n,k}` over arrival patterns.
#[derive(Clone, Debug, Serialize)]
pub struct GibbsCoefficient {
    pub n: u64,
    pub k: usize,
    pub value: f64,
    /// Number of arrival patterns `1 = T_1 < … < T_k ≤ n`.
    pub patterns: usize,
    /// `(max − min)/mean` of the per-pattern values; zero (to rounding) when the
    /// marginal partition law is exchangeable.
    pub spread: f64,
}

/// Calls `f` on every increasing `(T_1 = 1, T_2, …, T_k)` with `T_k ≤ n`.
pub fn for_each_arrival_pattern(n: u64, k: usize, mut f: impl FnMut(&[u64])) {
    fn rec(n: u64, k: usize, cur: &mut Vec<u64>, f: &mut dyn FnMut(&[u64])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        let remaining = (k - cur.len()) as u64;
        let start = cur.last().unwrap() + 1;
        // Leave room for the remaining arrivals.
        for t in start..=n + 1 - remaining {
            cur.push(t);
            rec(n, k, cur, f);
            cur.pop();
        }
    }
    if k == 0 || k as u64 > n {
        return;
    }
    let mut cur = vec![1u64];
    rec(n, k, &mut cur, &mut f);
}

/// `V_{n,k}` of the exchangeable partition obtained by drawing arrival times from
/// CRP(α,θ) and then running the (α,T)-urn.
///
/// Each pattern `T` contributes `P(T_{1:k} = T, T_{k+1} > n) · V^{α,T}_{n,k}`, which is
/// the probability of any partition with record indices `T` divided by its block
/// weights. Exchangeability makes this the same number for every pattern; the value
/// returned is the mean and `spread` measures the disagreement.
pub fn gibbs_v_marginal(n: u64, k: usize, alpha: f64, theta: f64, cap: usize) -> Result<GibbsCoefficient> {
    check_crp(alpha, theta)?;
    if n as usize > cap {
        return Err(Error::CapExceeded { n: n as usize, cap });
    }
    if k == 0 || k as u64 > n {
        return Err(bad_params(format!("need 1 <= k <= n, got n={n}, k={k}")));
    }
    let params = ModelParams::new(alpha)?;
    let mut values = Vec::new();
    let mut failure = None;
    for_each_arrival_pattern(n, k, |t| match crp_pattern_log_prob(alpha, theta, t, n) {
        Ok(lw) => values.push((lw + ln_v_unchecked(params.alpha(), n, t)).exp()),
        Err(e) => failure = Some(e),
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let max = values.iter().cloned().fold(f64::MIN, f64::max);
    let min = values.iter().cloned().fold(f64::MAX, f64::min);
    Ok(GibbsCoefficient { n, k, value: mean, patterns: values.len(), spread: (max - min) / mean })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::Provenance;
    use num_rational::Ratio;

    fn sched(t: &[u64]) -> ArrivalSchedule {
        ArrivalSchedule::from_finite(t.to_vec(), Provenance::Fixed).unwrap()
    }

    fn labels(l: &[u32]) -> LabelSequence {
        LabelSequence::new(l.to_vec()).unwrap()
    }

    #[test]
    fn forced_sequences_have_probability_one() {
        for &a in &[-1.0, 0.0, 0.5, 0.9] {
            let p = ModelParams::<f64>::new(a).unwrap();
            let lp = log_prob_labels(&p, &sched(&[1, 2]), &labels(&[1, 2])).unwrap();
            assert!(lp.value.abs() < 1e-14);
            let lp = log_prob_labels(&p, &sched(&[1]), &labels(&[1, 1])).unwrap();
            assert!(lp.value.abs() < 1e-14);
        }
    }

    #[test]
    fn one_third_example() {
        let p = ModelParams::<f64>::new(0.0).unwrap();
        let lp = log_prob_labels(&p, &sched(&[1, 2]), &labels(&[1, 2, 1, 1])).unwrap();
        assert!((lp.value - (1.0f64 / 3.0).ln()).abs() < 1e-14);
        let exact = prob_sequential_exact(&Ratio::from_integer(0i64), &sched(&[1, 2]), &labels(&[1, 2, 1, 1]));
        assert_eq!(exact, Ratio::new(1, 3));
    }

    #[test]
    fn inconsistent_is_minus_infinity() {
        let p = ModelParams::<f64>::new(0.0).unwrap();
        let lp = log_prob_labels(&p, &sched(&[1, 3]), &labels(&[1, 2, 1, 1])).unwrap();
        assert!(lp.is_impossible());
        assert!(matches!(lp.into_result(), Err(Error::Inconsistent(_))));
        assert!(log_prob_sequential(&p, &sched(&[1, 3]), &labels(&[1, 2])).unwrap().is_impossible());
        // A vertex that the schedule promises before n but which never shows up.
        assert!(log_prob_labels(&p, &sched(&[1, 2]), &labels(&[1, 1, 1])).unwrap().is_impossible());
    }

    #[test]
    fn partition_hand_value() {
        // α = 1/2, blocks (2,1), T = (1,3): the only sequence is (1,1,2) with
        // probability P(L_2 = 1) = 1 (one vertex) then forced arrival: 1.
        let p = ModelParams::<f64>::new(0.5).unwrap();
        let v = log_prob_partition(&p, &[1, 3], &[2, 1]).unwrap();
        assert!(v.abs() < 1e-14);
        // blocks (3,1), T = (1,2): sequence (1,2,1,1): (1−½)/(2−1)·(2−½)/(3−1) = 3/8.
        let v = log_prob_partition(&p, &[1, 2], &[3, 1]).unwrap();
        assert!((v - (3.0f64 / 8.0).ln()).abs() < 1e-14);
        assert!(log_prob_partition(&p, &[1], &[2]).unwrap().abs() < 1e-14);
        assert!(matches!(log_prob_partition(&p, &[1, 4], &[1, 2]), Err(Error::Inconsistent(_))));
    }

    #[test]
    fn v_examples() {
        let p = ModelParams::<f64>::new(0.3).unwrap();
        assert!((v_alpha_t(1, 1, &p, &[1]).unwrap() - 1.0).abs() < 1e-14);
        let p32 = ModelParams::new(0.3f32).unwrap();
        assert!((v_alpha_t(1, 1, &p32, &[1]).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn crp_pmf_example() {
        let v: f64 = crp_arrival_log_pmf(0.5, 1.0, 1, 1, 1).unwrap();
        assert!((v - 0.75f64.ln()).abs() < 1e-14);
        let total: f64 = (1..=10_000).map(|t| crp_arrival_log_pmf(0.0f64, 1.0, 1, 1, t).unwrap().exp()).sum();
        assert!(total <= 1.0 + 1e-12);
        // Deficit equals the no-arrival probability.
        let deficit = crp_no_arrival_log_prob(0.0, 1.0, 1, 1, 10_001).exp();
        assert!((total + deficit - 1.0).abs() < 1e-10);
        assert!(crp_arrival_log_pmf(1.2f64, 1.0, 1, 1, 1).is_err());
    }

    #[test]
    fn gibbs_v_is_crp_closed_form() {
        // V_{n,k} = Π_{i<k}(θ+iα) / (θ+1)_{n−1}.
        let (alpha, theta) = (0.3, 1.0);
        for n in 1..=7u64 {
            for k in 1..=n as usize {
                let g = gibbs_v_marginal(n, k, alpha, theta, 12).unwrap();
                let num: f64 = (1..k).map(|i| theta + i as f64 * alpha).product();
                let den: f64 = (1..n).map(|i| theta + i as f64).product();
                assert!((g.value / (num / den) - 1.0).abs() < 1e-12, "n={n} k={k}");
                assert!(g.spread < 1e-12);
            }
        }
        assert!(matches!(gibbs_v_marginal(13, 2, 0.3, 1.0, 12), Err(Error::CapExceeded { .. })));
    }
}
