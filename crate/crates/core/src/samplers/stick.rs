use super::SamplerOutput;
use crate::error::{bad_params, Error, Result};
use crate::graph::{Label, LabelSequence};
use crate::params::ModelParams;
use crate::schedule::ArrivalSchedule;
use rand::Rng;
use rand_distr::{Beta, Distribution};
use serde::{Deserialize, Serialize};

/// Realized stick-breaking variables `Ψ_1 = 1, Ψ_2, …` and the products
/// `W_{j,k} = Π_{ℓ=j+1}^{k} (1 − Ψ_ℓ)`.
///
/// Internally keeps `L_j = −Σ_{ℓ≤j} ln(1 − Ψ_ℓ)` (increasing), so that
/// `W_{j,k} = exp(L_j − L_k)` and locating a uniform in the interval partition of
/// `[0,1)` is a binary search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StickWeights {
    psi: Vec<f64>,
    log_q: Vec<f64>,
}

impl Default for StickWeights {
    fn default() -> Self {
        StickWeights { psi: vec![1.0], log_q: vec![0.0] }
    }
}

impl StickWeights {
    pub fn from_psi(psi: Vec<f64>) -> Result<Self> {
        if psi.first() != Some(&1.0) {
            return Err(bad_params("Psi_1 must equal 1"));
        }
        let mut w = StickWeights::default();
        for (j, &p) in psi.iter().enumerate().skip(1) {
            if !(p > 0.0 && p <= 1.0) {
                return Err(bad_params(format!("Psi_{} = {p} outside (0,1]", j + 1)));
            }
            w.push(p);
        }
        Ok(w)
    }

    /// Appends `Ψ_{k+1}`.
    pub fn push(&mut self, psi: f64) {
        // Ψ = 1 exactly would make L infinite and W undefined as a difference;
        // the nearest double below 1 is indistinguishable in law.
        let clamped = psi.min(1.0 - f64::EPSILON / 2.0);
        let last = *self.log_q.last().unwrap();
        self.log_q.push(last - (-clamped).ln_1p());
        self.psi.push(psi);
    }

    pub fn psi(&self) -> &[f64] {
        &self.psi
    }

    pub fn len(&self) -> usize {
        self.psi.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `W_{j,k}` for `0 ≤ j ≤ k ≤ len`, with `W_{0,k} = 0`.
    pub fn w(&self, j: usize, k: usize) -> f64 {
        assert!(j <= k && k <= self.len() && k >= 1);
        if j == 0 {
            0.0
        } else {
            (self.log_q[j - 1] - self.log_q[k - 1]).exp()
        }
    }

    /// `I_{j,k} = [W_{j−1,k}, W_{j,k})`.
    pub fn interval(&self, j: usize, k: usize) -> (f64, f64) {
        (self.w(j - 1, k), self.w(j, k))
    }

    /// The `j` with `u ∈ I_{j,k}`, for `u ∈ [0,1)`.
    pub fn locate(&self, u: f64, k: usize) -> Label {
        let x = u.ln() + self.log_q[k - 1];
        let below = self.log_q[..k].partition_point(|&l| l <= x);
        (below + 1).min(k) as Label
    }

    /// `ln W_{1,k}`.
    pub fn ln_w1(&self, k: usize) -> f64 {
        -self.log_q[k - 1]
    }
}

/// Beta parameters `(1−α, t_j − 1 − (j−1)α)` of `Ψ_j`.
pub fn psi_beta_params(alpha: f64, t_j: u64, j: usize) -> Result<(f64, f64)> {
    let a = 1.0 - alpha;
    let b = t_j as f64 - 1.0 - (j as f64 - 1.0) * alpha;
    if !(a > 0.0) || !(b > 0.0) {
        return Err(Error::BadParams(format!("Psi_{j}: Beta({a}, {b}) needs positive parameters")));
    }
    Ok((a, b))
}

fn draw_psi<R: Rng + ?Sized>(alpha: f64, t_j: u64, j: usize, rng: &mut R) -> Result<f64> {
    let (a, b) = psi_beta_params(alpha, t_j, j)?;
    Ok(Beta::new(a, b).map_err(|e| bad_params(e.to_string()))?.sample(rng))
}

/// Independent `Ψ_j ~ Beta(1−α, t_j−1−(j−1)α)` for `2 ≤ j ≤ k`, with `Ψ_1 = 1`.
pub fn sample_psi<R: Rng + ?Sized>(params: &ModelParams, schedule: &ArrivalSchedule, k: usize, rng: &mut R) -> Result<StickWeights> {
    let times = schedule.finite_times();
    if k > times.len() {
        return Err(bad_params(format!("schedule has only {} finite arrivals, asked for {k}", times.len())));
    }
    let mut w = StickWeights::default();
    for (i, &t) in times.iter().enumerate().take(k).skip(1) {
        w.push(draw_psi(params.alpha(), t, i + 1, rng)?);
    }
    Ok(w)
}

/// `ln W_{1,k} = Σ_{ℓ=2}^{k} ln(1−Ψ_ℓ)`, without storing the Ψ's.
pub fn sample_ln_w1<R: Rng + ?Sized>(params: &ModelParams, schedule: &ArrivalSchedule, k: usize, rng: &mut R) -> Result<f64> {
    let times = schedule.finite_times();
    if k > times.len() {
        return Err(bad_params(format!("schedule has only {} finite arrivals, asked for {k}", times.len())));
    }
    let mut s = 0.0;
    for (i, &t) in times.iter().enumerate().take(k).skip(1) {
        s += (-draw_psi(params.alpha(), t, i + 1, rng)?).ln_1p();
    }
    Ok(s)
}

/// Stick-breaking construction: `L_n = k` at arrival times, otherwise
/// `L_n = j` for the interval `I_{j,k}` holding a fresh uniform. Uniforms are drawn
/// only at non-arrival steps.
pub fn sample_stick_breaking<R: Rng + ?Sized>(
    params: &ModelParams,
    schedule: &ArrivalSchedule,
    n_ends: u64,
    rng: &mut R,
) -> Result<SamplerOutput> {
    if n_ends == 0 {
        return Err(bad_params("n_ends must be >= 1"));
    }
    let times = schedule.finite_times();
    let mut w = StickWeights::default();
    let mut k = 1usize;
    let mut labels = Vec::with_capacity(n_ends as usize);
    labels.push(1);
    for n in 2..=n_ends {
        if times.get(k) == Some(&n) {
            k += 1;
            w.push(draw_psi(params.alpha(), n, k, rng)?);
            labels.push(k as Label);
        } else {
            let u: f64 = rng.random();
            labels.push(w.locate(u, k));
        }
    }
    Ok(SamplerOutput { labels: LabelSequence::from_vec_unchecked(labels), psi: Some(w), schedule: schedule.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, Component};
    use crate::schedule::Provenance;

    #[test]
    fn w_diagonal_is_one_and_intervals_tile() {
        let mut rng = stream(4, Component::Stick);
        let schedule = ArrivalSchedule::from_finite(vec![1, 2, 4, 5, 9, 12], Provenance::Fixed).unwrap();
        for _ in 0..100 {
            let w = sample_psi(&ModelParams::new(0.3).unwrap(), &schedule, 6, &mut rng).unwrap();
            for k in 1..=6 {
                assert!((w.w(k, k) - 1.0).abs() < 1e-15);
                let mut prev = 0.0;
                for j in 1..=k {
                    let (lo, hi) = w.interval(j, k);
                    assert_eq!(lo, prev);
                    assert!(hi >= lo);
                    prev = hi;
                }
                assert!((prev - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn locate_matches_interval_scan() {
        let w = StickWeights::from_psi(vec![1.0, 0.5, 0.25, 0.8]).unwrap();
        // W_{1,4} = 0.5·0.75·0.2 = 0.075, W_{2,4} = 0.15, W_{3,4} = 0.2.
        assert!((w.w(1, 4) - 0.075).abs() < 1e-15);
        for i in 0..1000 {
            let u = i as f64 / 1000.0;
            let j = w.locate(u, 4) as usize;
            let (lo, hi) = w.interval(j, 4);
            assert!(lo <= u && u < hi, "u={u} j={j} [{lo},{hi})");
        }
        assert_eq!(w.locate(0.0, 4), 1);
    }

    #[test]
    fn single_vertex_always_label_one() {
        let mut rng = stream(4, Component::Stick);
        let out = sample_stick_breaking(&ModelParams::new(0.9).unwrap(), &ArrivalSchedule::single_vertex(), 50, &mut rng).unwrap();
        assert!(out.labels.as_slice().iter().all(|&l| l == 1));
    }

    #[test]
    fn nonpositive_beta_reports_vertex() {
        assert!(matches!(psi_beta_params(0.5, 1, 2), Err(Error::BadParams(m)) if m.contains("Psi_2")));
    }
}
