//! Test statistics: Kolmogorov–Smirnov, Pearson chi-square, total variation, Spearman.

use crate::error::{Error, Result};
use serde::Serialize;
use statrs::function::gamma::gamma_ur;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
    pub n_lhs: usize,
    pub n_rhs: usize,
}

/// Kolmogorov distribution tail `Q(λ) = 2 Σ_{j≥1} (−1)^{j−1} e^{−2j²λ²}`.
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        // Dual series, fast for small λ.
        let y = (-std::f64::consts::PI.powi(2) / (8.0 * lambda * lambda)).exp();
        let s = y + y.powi(9) + y.powi(25) + y.powi(49);
        return (1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * s).clamp(0.0, 1.0);
    }
    let x = (-2.0 * lambda * lambda).exp();
    let mut sum = 0.0;
    let mut sign = 1.0;
    for j in 1..=100i32 {
        let term = x.powi(j * j);
        sum += sign * term;
        if term < 1e-17 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

fn sorted(xs: &[f64]) -> Result<Vec<f64>> {
    if xs.iter().any(|x| x.is_nan()) {
        return Err(Error::BadParams("NaN in sample".into()));
    }
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(v)
}

/// Two-sample KS statistic with the asymptotic p-value
/// `Q((√n_e + 0.12 + 0.11/√n_e) D)`, `n_e = nm/(n+m)`. Ties are stepped over together.
pub fn ks_two_sample(xs: &[f64], ys: &[f64]) -> Result<TestResult> {
    if xs.is_empty() || ys.is_empty() {
        return Err(Error::EmptySample);
    }
    let (a, b) = (sorted(xs)?, sorted(ys)?);
    let (n, m) = (a.len(), b.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < n && j < m {
        let x = a[i].min(b[j]);
        while i < n && a[i] == x {
            i += 1;
        }
        while j < m && b[j] == x {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let ne = (n as f64 * m as f64) / (n + m) as f64;
    let sq = ne.sqrt();
    let p = kolmogorov_q((sq + 0.12 + 0.11 / sq) * d);
    Ok(TestResult { statistic: d, p_value: p, n_lhs: n, n_rhs: m })
}

/// One-sample KS against a continuous cdf.
pub fn ks_one_sample(xs: &[f64], cdf: impl Fn(f64) -> f64) -> Result<TestResult> {
    if xs.is_empty() {
        return Err(Error::EmptySample);
    }
    let a = sorted(xs)?;
    let n = a.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in a.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs()).max(((i + 1) as f64 / n - f).abs());
    }
    let sq = n.sqrt();
    let p = kolmogorov_q((sq + 0.12 + 0.11 / sq) * d);
    Ok(TestResult { statistic: d, p_value: p, n_lhs: a.len(), n_rhs: 0 })
}

fn chi2_sf(stat: f64, dof: usize) -> f64 {
    if stat.is_infinite() {
        return 0.0;
    }
    if stat <= 0.0 {
        return 1.0;
    }
    gamma_ur(dof as f64 / 2.0, stat / 2.0)
}

pub const MIN_EXPECTED: f64 = 5.0;

/// Pearson goodness of fit of `counts` to `pmf` (cell `i` ↔ `pmf[i]`). Adjacent cells
/// are pooled until each expected count is at least 5; mass the pmf leaves
/// unassigned becomes one extra cell with observed count 0.
pub fn chi_square_gof(counts: &[u64], pmf: &[f64]) -> Result<TestResult> {
    if counts.len() != pmf.len() {
        return Err(Error::LengthMismatch(counts.len(), pmf.len()));
    }
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::EmptySample);
    }
    let nf = total as f64;
    let mut cells: Vec<(f64, f64)> = counts.iter().zip(pmf).map(|(&c, &p)| (c as f64, p * nf)).collect();
    let rest = 1.0 - pmf.iter().sum::<f64>();
    if rest > 1e-12 {
        cells.push((0.0, rest * nf));
    }
    let pooled = pool(cells);
    if pooled.len() < 2 {
        return Err(Error::DegenerateSupport(format!("{} cell(s) after pooling", pooled.len())));
    }
    let stat: f64 = pooled
        .iter()
        .map(|&(o, e)| if e > 0.0 { (o - e).powi(2) / e } else if o > 0.0 { f64::INFINITY } else { 0.0 })
        .sum();
    Ok(TestResult { statistic: stat, p_value: chi2_sf(stat, pooled.len() - 1), n_lhs: total as usize, n_rhs: 0 })
}

fn pool(cells: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::new();
    let mut acc = (0.0, 0.0);
    for (o, e) in cells {
        acc.0 += o;
        acc.1 += e;
        if acc.1 >= MIN_EXPECTED {
            out.push(acc);
            acc = (0.0, 0.0);
        }
    }
    if acc.0 > 0.0 || acc.1 > 0.0 {
        match out.last_mut() {
            Some(last) => {
                last.0 += acc.0;
                last.1 += acc.1;
            }
            None => out.push(acc),
        }
    }
    out
}

/// Chi-square test that two count vectors come from one distribution.
pub fn chi_square_homogeneity(a: &[u64], b: &[u64]) -> Result<TestResult> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    let (na, nb) = (a.iter().sum::<u64>() as f64, b.iter().sum::<u64>() as f64);
    if na == 0.0 || nb == 0.0 {
        return Err(Error::EmptySample);
    }
    let frac_a = na / (na + nb);
    let min_frac = frac_a.min(1.0 - frac_a);
    // Pool on the combined count so both expected counts reach the minimum.
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let mut acc = (0.0, 0.0);
    for (&x, &y) in a.iter().zip(b) {
        acc.0 += x as f64;
        acc.1 += y as f64;
        if (acc.0 + acc.1) * min_frac >= MIN_EXPECTED {
            cells.push(acc);
            acc = (0.0, 0.0);
        }
    }
    if acc.0 + acc.1 > 0.0 {
        match cells.last_mut() {
            Some(last) => {
                last.0 += acc.0;
                last.1 += acc.1;
            }
            None => cells.push(acc),
        }
    }
    if cells.len() < 2 {
        return Err(Error::DegenerateSupport(format!("{} cell(s) after pooling", cells.len())));
    }
    let mut stat = 0.0;
    for &(x, y) in &cells {
        let row = x + y;
        let (ea, eb) = (row * frac_a, row * (1.0 - frac_a));
        stat += (x - ea).powi(2) / ea + (y - eb).powi(2) / eb;
    }
    Ok(TestResult { statistic: stat, p_value: chi2_sf(stat, cells.len() - 1), n_lhs: na as usize, n_rhs: nb as usize })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TvDistance {
    pub distance: f64,
    /// Mass of each pmf outside the compared support.
    pub tail_a: f64,
    pub tail_b: f64,
}

/// `½ Σ_{i<support} |a_i − b_i|`; entries past either vector's end count as zero.
pub fn tv_distance(pmf_a: &[f64], pmf_b: &[f64], support: usize) -> TvDistance {
    let get = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
    let distance = 0.5 * (0..support).map(|i| (get(pmf_a, i) - get(pmf_b, i)).abs()).sum::<f64>();
    let mass = |v: &[f64]| (0..support).map(|i| get(v, i)).sum::<f64>();
    TvDistance { distance, tail_a: (1.0 - mass(pmf_a)).max(0.0), tail_b: (1.0 - mass(pmf_b)).max(0.0) }
}

/// Average ranks (1-based) with ties sharing their mean rank.
pub fn ranks(xs: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&i, &j| xs[i].partial_cmp(&xs[j]).unwrap_or(std::cmp::Ordering::Equal));
    let mut r = vec![0.0; xs.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && xs[idx[j + 1]] == xs[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            r[k] = avg;
        }
        i = j + 1;
    }
    r
}

pub fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    sxy / (sxx * syy).sqrt()
}

/// Spearman rank correlation.
pub fn rank_correlation(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch(xs.len(), ys.len()));
    }
    if xs.len() < 2 {
        return Err(Error::InsufficientData("rank correlation needs two pairs".into()));
    }
    Ok(pearson(&ranks(xs), &ranks(ys)))
}

/// Counts of the values `1..=d_max`; `counts[d-1]` is the number equal to `d`, and
/// the second value is how many exceed `d_max` (values of 0 are not expected).
pub fn degree_counts(values: &[u64], d_max: usize) -> (Vec<u64>, u64) {
    let mut counts = vec![0u64; d_max];
    let mut tail = 0;
    for &v in values {
        if v >= 1 && (v as usize) <= d_max {
            counts[v as usize - 1] += 1;
        } else {
            tail += 1;
        }
    }
    (counts, tail)
}

pub fn normalize(counts: &[u64], total: u64) -> Vec<f64> {
    counts.iter().map(|&c| c as f64 / total as f64).collect()
}

/// Mean and standard error.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ks_identical_and_shifted() {
        let xs: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        let r = ks_two_sample(&xs, &xs).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
        let ys: Vec<f64> = xs.iter().map(|x| x + 500.0).collect();
        let r = ks_two_sample(&xs, &ys).unwrap();
        assert!((r.statistic - 0.5).abs() < 1e-9);
        assert!(r.p_value < 1e-6);
        assert!(matches!(ks_two_sample(&[], &xs), Err(Error::EmptySample)));
    }

    #[test]
    fn kolmogorov_branches_meet() {
        let a = kolmogorov_q(1.18 - 1e-9);
        let b = kolmogorov_q(1.18 + 1e-9);
        assert!((a - b).abs() < 1e-8);
        // Known value Q(1.36) ≈ 0.0494.
        assert!((kolmogorov_q(1.36) - 0.0494).abs() < 5e-4);
    }

    #[test]
    fn chi_square_examples() {
        let pmf = vec![1.0 / 6.0; 6];
        let r = chi_square_gof(&[1000; 6], &pmf).unwrap();
        assert!(r.statistic.abs() < 1e-9);
        assert!(r.p_value > 0.999);
        let r = chi_square_gof(&[1200, 1600, 1600, 1600, 1600, 2400], &pmf).unwrap();
        assert!(r.p_value < 1e-6);
        assert!(matches!(chi_square_gof(&[3], &[1.0]), Err(Error::DegenerateSupport(_))));
        // Pooling: tiny cells merge.
        let r = chi_square_gof(&[50, 48, 1, 1], &[0.5, 0.48, 0.01, 0.01]).unwrap();
        assert!(r.p_value > 0.5);
    }

    #[test]
    fn homogeneity() {
        let r = chi_square_homogeneity(&[100, 200, 300], &[100, 200, 300]).unwrap();
        assert!(r.statistic.abs() < 1e-12);
        let r = chi_square_homogeneity(&[100, 200, 300], &[300, 200, 100]).unwrap();
        assert!(r.p_value < 1e-6);
    }

    #[test]
    fn tv_examples() {
        assert_eq!(tv_distance(&[0.5, 0.5], &[0.5, 0.5], 2).distance, 0.0);
        assert_eq!(tv_distance(&[1.0, 0.0], &[0.0, 1.0], 2).distance, 1.0);
        assert!((tv_distance(&[0.5, 0.5], &[0.6, 0.4], 2).distance - 0.1).abs() < 1e-15);
        let t = tv_distance(&[0.5, 0.3], &[0.5, 0.5], 2);
        assert!((t.tail_a - 0.2).abs() < 1e-15);
    }

    #[test]
    fn spearman_examples() {
        let xs: Vec<f64> = (0..100).map(|i| (i as f64).sin()).collect();
        let neg: Vec<f64> = xs.iter().map(|x| -x).collect();
        assert!((rank_correlation(&xs, &xs).unwrap() - 1.0).abs() < 1e-12);
        assert!((rank_correlation(&xs, &neg).unwrap() + 1.0).abs() < 1e-12);
        assert!(matches!(rank_correlation(&xs, &xs[1..]), Err(Error::LengthMismatch(..))));
        assert_eq!(ranks(&[3.0, 1.0, 3.0]), vec![2.5, 1.0, 2.5]);
    }
}
