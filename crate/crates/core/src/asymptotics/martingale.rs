use super::TrajectoryStats;
use crate::error::{bad_params, Result};
use crate::scalar::{ln_beta, ln_gamma_ratio};
use crate::schedule::ArrivalSchedule;

fn check_p(alpha: f64, p: &[f64]) -> Result<()> {
    if p.is_empty() {
        return Err(bad_params("p must have at least one entry"));
    }
    let bound = -(1.0 - alpha) / 2.0;
    if let Some((j, &pj)) = p.iter().enumerate().find(|(_, &pj)| !(pj > bound)) {
        return Err(bad_params(format!("p_{} = {pj} must exceed -(1-alpha)/2 = {bound}", j + 1)));
    }
    Ok(())
}

/// Martingale `Z_n(p, t)` in log form, for one graph:
///
/// `Z_n = Γ(n−kα)/Γ(n−kα+p̄) · Π_{j≤r} Γ(D_j−α+p_j)/Γ(D_j−α)
///        · Π_{ℓ=r+1}^{k} Γ(t_ℓ−ℓα+p̄) Γ(t_ℓ−1−(ℓ−1)α) / (Γ(t_ℓ−ℓα) Γ(t_ℓ−1−(ℓ−1)α+p̄))`
///
/// with `r = p.len()`, `p̄ = Σ p_j`, `k` vertices after `n ≥ t_r` ends and `D_j` the
/// degree of vertex `j`.
pub struct MartingaleWeights {
    alpha: f64,
    p: Vec<f64>,
    p_bar: f64,
    times: Vec<u64>,
    /// `prefix[i]` = arrival product over `ℓ = r+1 ..= r+i`.
    prefix: Vec<f64>,
}

impl MartingaleWeights {
    pub fn new(alpha: f64, p: &[f64], schedule: &ArrivalSchedule) -> Result<Self> {
        check_p(alpha, p)?;
        let r = p.len();
        if schedule.num_finite() < r {
            return Err(bad_params(format!("schedule has {} arrivals, p needs {r}", schedule.num_finite())));
        }
        Ok(MartingaleWeights {
            alpha,
            p: p.to_vec(),
            p_bar: p.iter().sum(),
            times: schedule.finite_times().to_vec(),
            prefix: vec![0.0],
        })
    }

    fn arrival_term(&self, l: usize) -> f64 {
        let (a, pb) = (self.alpha, self.p_bar);
        let t = self.times[l - 1] as f64;
        let lf = l as f64;
        ln_gamma_ratio(t - lf * a, pb) - ln_gamma_ratio(t - 1.0 - (lf - 1.0) * a, pb)
    }

    /// `ln Z_n` given `k` vertices and head degrees `D_1..D_r`.
    pub fn ln_z(&mut self, n: u64, k: usize, head: &[u64]) -> Result<f64> {
        let r = self.p.len();
        if head.len() < r || k < r || n < self.times[r - 1] {
            return Err(bad_params(format!("Z_n needs n >= t_r = {} and r = {r} head degrees", self.times[r - 1])));
        }
        while self.prefix.len() <= k - r {
            let i = self.prefix.len();
            let next = self.prefix[i - 1] + self.arrival_term(r + i);
            self.prefix.push(next);
        }
        let a = self.alpha;
        let mut acc = -ln_gamma_ratio(n as f64 - k as f64 * a, self.p_bar) + self.prefix[k - r];
        for (j, &pj) in self.p.iter().enumerate() {
            acc += ln_gamma_ratio(head[j] as f64 - a, pj);
        }
        Ok(acc)
    }
}

/// `Z_n(p, t)` at every checkpoint with `n ≥ t_r`.
pub fn martingale_statistic(alpha: f64, p: &[f64], schedule: &ArrivalSchedule, trajectory: &TrajectoryStats) -> Result<Vec<(u64, f64)>> {
    let mut w = MartingaleWeights::new(alpha, p, schedule)?;
    let t_r = schedule.finite_times()[p.len() - 1];
    trajectory
        .checkpoints
        .iter()
        .filter(|c| c.n >= t_r)
        .map(|c| Ok((c.n, w.ln_z(c.n, c.num_vertices, &c.head_degrees)?.exp())))
        .collect()
}

/// `E[Z_{t_r}] = Π_{j=2}^{r} E[Ψ_j^{p_j} (1−Ψ_j)^{p̄_{j−1}}]`, a product of Beta moments.
pub fn expected_z_at_tr(alpha: f64, p: &[f64], schedule: &ArrivalSchedule) -> Result<f64> {
    check_p(alpha, p)?;
    let times = schedule.finite_times();
    if times.len() < p.len() {
        return Err(bad_params("schedule shorter than p"));
    }
    let mut acc = 0.0;
    let mut p_bar = p[0];
    for j in 2..=p.len() {
        let a = 1.0 - alpha;
        let b = times[j - 1] as f64 - 1.0 - (j as f64 - 1.0) * alpha;
        acc += ln_beta(a + p[j - 1], b + p_bar) - ln_beta(a, b);
        p_bar += p[j - 1];
    }
    Ok(acc.exp())
}

/// `|m_2/m_1 − 1|` for the seed-averaged martingale at two times.
pub fn martingale_flatness(mean_n1: f64, mean_n2: f64) -> f64 {
    (mean_n2 / mean_n1 - 1.0).abs()
}
