use super::TrajectoryStats;
use crate::error::{bad_params, Error, Result};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DensityEstimate {
    /// Fitted exponent in `|V_n| ≈ μ^{−σ} n^σ`.
    pub sigma: f64,
    pub mu: f64,
    /// `1/σ`.
    pub epsilon: f64,
    /// False when `σ` is indistinguishable from zero (finitely many vertices).
    pub in_regime: bool,
    pub points: usize,
}

/// Below this the vertex count is treated as not growing.
pub const MIN_SIGMA: f64 = 0.05;

/// Weighted least squares of `ln |V_n|` on `ln n` over the last three decades of
/// checkpoints (weights `|V_n|`, so late, less noisy points dominate). Needs at least
/// two decades.
pub fn density_exponent(trajectory: &TrajectoryStats) -> Result<DensityEstimate> {
    let cps = &trajectory.checkpoints;
    let (first, last) = match (cps.first(), cps.last()) {
        (Some(f), Some(l)) => (f.n, l.n),
        _ => return Err(Error::InsufficientData("no checkpoints".into())),
    };
    if (last as f64) < 100.0 * first as f64 {
        return Err(Error::InsufficientData(format!("checkpoints span {first}..{last}, need two decades")));
    }
    let lower = (last as f64 / 1000.0).max(first as f64);
    let pts: Vec<(f64, f64, f64)> = cps
        .iter()
        .filter(|c| c.n as f64 >= lower && c.num_vertices > 0)
        .map(|c| ((c.n as f64).ln(), (c.num_vertices as f64).ln(), c.num_vertices as f64))
        .collect();
    let sw: f64 = pts.iter().map(|p| p.2).sum();
    let mx = pts.iter().map(|p| p.2 * p.0).sum::<f64>() / sw;
    let my = pts.iter().map(|p| p.2 * p.1).sum::<f64>() / sw;
    let sxx: f64 = pts.iter().map(|p| p.2 * (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| p.2 * (p.0 - mx) * (p.1 - my)).sum();
    let sigma = sxy / sxx;
    let intercept = my - sigma * mx;
    let in_regime = sigma > MIN_SIGMA;
    let (mu, epsilon) = if in_regime { ((-intercept / sigma).exp(), 1.0 / sigma) } else { (f64::INFINITY, f64::INFINITY) };
    Ok(DensityEstimate { sigma, mu, epsilon, in_regime, points: pts.len() })
}

/// Hurwitz zeta `ζ(s, q) = Σ_{k≥0} (q+k)^{−s}` for `s > 1`, `q > 0`.
pub fn hurwitz_zeta(s: f64, q: f64) -> f64 {
    const N: usize = 24;
    let mut sum = 0.0;
    for k in 0..N {
        sum += (q + k as f64).powf(-s);
    }
    // Euler–Maclaurin remainder from x = q + N.
    let x = q + N as f64;
    let xs = x.powf(-s);
    let mut tail = x * xs / (s - 1.0) + 0.5 * xs;
    let b = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0];
    let mut fact = 1.0; // (2j)!
    let mut rising = s; // s (s+1) … (s+2j−2)
    let mut xpow = xs / x; // x^{−s−2j+1}
    for (j, bj) in b.iter().enumerate() {
        let two_j = 2 * (j + 1);
        fact *= (two_j - 1) as f64 * two_j as f64;
        tail += bj / fact * rising * xpow;
        rising *= (s + two_j as f64 - 1.0) * (s + two_j as f64);
        xpow /= x * x;
    }
    sum + tail
}

/// How the lower cutoff of the tail fit is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum DMinRule {
    /// Largest `d` whose upper tail `{D ≥ d}` still holds this fraction of the mass.
    TailFraction(f64),
    Fixed(u64),
}

impl Default for DMinRule {
    fn default() -> Self {
        DMinRule::TailFraction(0.01)
    }
}

pub const MIN_TAIL_OBSERVATIONS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TailFit {
    /// Discrete power-law exponent on `{d ≥ d_min}`.
    pub eta: f64,
    pub standard_error: f64,
    pub d_min: u64,
    /// Weight (observation count) at or above `d_min`.
    pub n_tail: f64,
    /// Normalized log-likelihood ratio of power law against a geometric tail;
    /// strongly negative means an exponential tail fits better.
    pub vuong_z: f64,
    pub power_law_plausible: bool,
}

/// Vuong statistic below which the power law is rejected.
pub const VUONG_REJECT: f64 = -2.0;

/// Maximum-likelihood discrete power law `P(D = d) = d^{−η}/ζ(η, d_min)` on the
/// tail of a degree sample.
pub fn tail_exponent(values: &[u64], rule: DMinRule) -> Result<TailFit> {
    let mut pairs: Vec<(u64, f64)> = Vec::new();
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    for v in sorted {
        match pairs.last_mut() {
            Some((d, w)) if *d == v => *w += 1.0,
            _ => pairs.push((v, 1.0)),
        }
    }
    fit_weighted(&pairs, rule, MIN_TAIL_OBSERVATIONS as f64)
}

/// Tail fit of a pmf (`pmf[d-1] = P(D = d)`) treated as `pseudo_count` observations.
pub fn tail_exponent_pmf(pmf: &[f64], pseudo_count: f64, rule: DMinRule) -> Result<TailFit> {
    let pairs: Vec<(u64, f64)> = pmf
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > 0.0)
        .map(|(i, &p)| (i as u64 + 1, p * pseudo_count))
        .collect();
    fit_weighted(&pairs, rule, MIN_TAIL_OBSERVATIONS as f64)
}

fn fit_weighted(pairs: &[(u64, f64)], rule: DMinRule, min_tail: f64) -> Result<TailFit> {
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    if total <= 0.0 {
        return Err(Error::EmptySample);
    }
    let d_min = match rule {
        DMinRule::Fixed(d) => d.max(1),
        DMinRule::TailFraction(f) => {
            if !(f > 0.0 && f <= 1.0) {
                return Err(bad_params(format!("tail fraction {f} outside (0,1]")));
            }
            let mut above = total;
            let mut best = pairs.first().map_or(1, |p| p.0.max(1));
            for &(d, w) in pairs {
                if above / total >= f {
                    best = d.max(1);
                } else {
                    break;
                }
                above -= w;
            }
            best
        }
    };
    let tail: Vec<(f64, f64)> = pairs.iter().filter(|p| p.0 >= d_min).map(|&(d, w)| (d as f64, w)).collect();
    let n_tail: f64 = tail.iter().map(|p| p.1).sum();
    if n_tail < min_tail {
        return Err(Error::InsufficientTail { observed: n_tail as usize, d_min, required: min_tail as usize });
    }
    let sum_ln: f64 = tail.iter().map(|&(d, w)| w * d.ln()).sum();
    let q = d_min as f64;
    let loglik = |eta: f64| -eta * sum_ln - n_tail * hurwitz_zeta(eta, q).ln();
    // Golden section on a concave log-likelihood.
    let (mut lo, mut hi) = (1.0 + 1e-6, 30.0);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut x1, mut x2) = (hi - g * (hi - lo), lo + g * (hi - lo));
    let (mut f1, mut f2) = (loglik(x1), loglik(x2));
    while hi - lo > 1e-9 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = loglik(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = loglik(x1);
        }
    }
    let eta = 0.5 * (lo + hi);
    let h = 1e-4;
    let curvature = -(loglik(eta + h) - 2.0 * loglik(eta) + loglik(eta - h)) / (h * h);
    let standard_error = if curvature > 0.0 { curvature.sqrt().recip() } else { f64::NAN };

    // Geometric tail on {d_min, d_min+1, …}: P(d) = (1−ρ) ρ^{d−d_min}.
    let mean_excess = tail.iter().map(|&(d, w)| w * (d - q)).sum::<f64>() / n_tail;
    let rho = mean_excess / (1.0 + mean_excess);
    let ln_z = hurwitz_zeta(eta, q).ln();
    let diffs: Vec<(f64, f64)> = tail
        .iter()
        .map(|&(d, w)| {
            let lp = -eta * d.ln() - ln_z;
            let le = if rho > 0.0 { (1.0 - rho).ln() + (d - q) * rho.ln() } else { 0.0 };
            (lp - le, w)
        })
        .collect();
    let mean_diff = diffs.iter().map(|&(l, w)| l * w).sum::<f64>() / n_tail;
    let var = diffs.iter().map(|&(l, w)| w * (l - mean_diff).powi(2)).sum::<f64>() / n_tail;
    let vuong_z = if var > 0.0 { mean_diff * n_tail.sqrt() / var.sqrt() } else { 0.0 };
    Ok(TailFit { eta, standard_error, d_min, n_tail, vuong_z, power_law_plausible: vuong_z > VUONG_REJECT })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_known_values() {
        let pi2_6 = std::f64::consts::PI.powi(2) / 6.0;
        assert!((hurwitz_zeta(2.0, 1.0) - pi2_6).abs() < 1e-12);
        assert!((hurwitz_zeta(2.0, 3.0) - (pi2_6 - 1.0 - 0.25)).abs() < 1e-12);
        assert!((hurwitz_zeta(3.0, 1.0) - 1.202_056_903_159_594).abs() < 1e-12);
        assert!((hurwitz_zeta(1.5, 1.0) - 2.612_375_348_685_488).abs() < 1e-11);
    }

    #[test]
    fn exact_zipf_pmf_recovers_exponent() {
        let eta = 2.5;
        let z = hurwitz_zeta(eta, 10.0);
        let pmf: Vec<f64> = (1..=2_000_000u64).map(|d| if d >= 10 { (d as f64).powf(-eta) / z } else { 0.0 }).collect();
        let fit = tail_exponent_pmf(&pmf, 1e6, DMinRule::Fixed(10)).unwrap();
        assert!((fit.eta - eta).abs() < 1e-3, "{}", fit.eta);
        assert!(fit.power_law_plausible);
    }

    #[test]
    fn geometric_pmf_is_flagged() {
        let pmf: Vec<f64> = (1..=400u64).map(|d| 0.3 * 0.7f64.powi(d as i32 - 1)).collect();
        let fit = tail_exponent_pmf(&pmf, 1e5, DMinRule::default()).unwrap();
        assert!(!fit.power_law_plausible, "{fit:?}");
    }

    #[test]
    fn thin_tail_is_an_error() {
        let values = vec![1u64; 50];
        assert!(matches!(tail_exponent(&values, DMinRule::default()), Err(Error::InsufficientTail { .. })));
    }
}
