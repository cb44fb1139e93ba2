//! Arrival schedule generators: deterministic, i.i.d. interarrivals, CRP-induced and doubled.
//!
//! Conventions: `Geometric(β)` lives on {1,2,…} with mean 1/β (an arrival happens at
//! each step with probability β); `ShiftedPoisson(λ)` is `1 + Poisson(λ)`.

use crate::error::{bad_params, Error, Result};
use crate::scalar::ln_gamma_ratio;
use crate::schedule::{ArrivalSchedule, Provenance};
use rand::Rng;
use rand_distr::{Distribution, Geometric, Poisson};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum InterarrivalSpec {
    Constant(u64),
    Geometric(f64),
    ShiftedPoisson(f64),
    /// `(value, probability)` pairs.
    Custom(Vec<(u64, f64)>),
}

impl InterarrivalSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            InterarrivalSpec::Constant(c) if *c >= 1 => Ok(()),
            InterarrivalSpec::Constant(c) => Err(bad_params(format!("constant interarrival must be >= 1, got {c}"))),
            InterarrivalSpec::Geometric(b) if *b > 0.0 && *b <= 1.0 => Ok(()),
            InterarrivalSpec::Geometric(b) => Err(bad_params(format!("geometric beta must be in (0,1], got {b}"))),
            InterarrivalSpec::ShiftedPoisson(l) if *l > 0.0 && l.is_finite() => Ok(()),
            InterarrivalSpec::ShiftedPoisson(l) => Err(bad_params(format!("poisson lambda must be > 0, got {l}"))),
            InterarrivalSpec::Custom(table) => {
                if table.is_empty() {
                    return Err(bad_params("empty interarrival pmf"));
                }
                if let Some(&(v, _)) = table.iter().find(|(v, _)| *v == 0) {
                    return Err(bad_params(format!("interarrival support value {v} < 1")));
                }
                if table.iter().any(|(_, p)| !(*p >= 0.0)) {
                    return Err(bad_params("negative interarrival probability"));
                }
                let total: f64 = table.iter().map(|(_, p)| p).sum();
                if (total - 1.0).abs() > 1e-12 {
                    return Err(bad_params(format!("interarrival pmf sums to {total}")));
                }
                Ok(())
            }
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            InterarrivalSpec::Constant(c) => *c as f64,
            InterarrivalSpec::Geometric(b) => 1.0 / b,
            InterarrivalSpec::ShiftedPoisson(l) => 1.0 + l,
            InterarrivalSpec::Custom(table) => table.iter().map(|&(v, p)| v as f64 * p).sum(),
        }
    }

    /// `P(Δ = d)`.
    pub fn pmf(&self, d: u64) -> f64 {
        match self {
            InterarrivalSpec::Constant(c) => (d == *c) as u8 as f64,
            InterarrivalSpec::Geometric(b) if d >= 1 => b * (1.0 - b).powf((d - 1) as f64),
            InterarrivalSpec::ShiftedPoisson(l) if d >= 1 => {
                let j = (d - 1) as f64;
                (j * l.ln() - l - libm::lgamma(j + 1.0)).exp()
            }
            InterarrivalSpec::Custom(table) => table.iter().filter(|(v, _)| *v == d).map(|(_, p)| p).sum(),
            _ => 0.0,
        }
    }

    /// One draw; `self` must already be validated.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        match self {
            InterarrivalSpec::Constant(c) => *c,
            InterarrivalSpec::Geometric(b) => {
                if *b >= 1.0 {
                    1
                } else {
                    1 + Geometric::new(*b).expect("validated").sample(rng)
                }
            }
            InterarrivalSpec::ShiftedPoisson(l) => 1 + Poisson::new(*l).expect("validated").sample(rng) as u64,
            InterarrivalSpec::Custom(table) => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for &(v, p) in table {
                    acc += p;
                    if u < acc {
                        return v;
                    }
                }
                table.iter().rev().find(|(_, p)| *p > 0.0).map_or(table[0].0, |&(v, _)| v)
            }
        }
    }
}

impl fmt::Display for InterarrivalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InterarrivalSpec::Constant(c) => write!(f, "every:{c}"),
            InterarrivalSpec::Geometric(b) => write!(f, "geom:{b}"),
            InterarrivalSpec::ShiftedPoisson(l) => write!(f, "poisplus:{l}"),
            InterarrivalSpec::Custom(table) => {
                write!(f, "pmf:")?;
                for (i, (v, p)) in table.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}={p}")?;
                }
                Ok(())
            }
        }
    }
}

/// `t_j = 2d(j−1) + 1` for `j ≤ k_max`, ∞ after.
pub fn constant_schedule(d: u64, k_max: usize) -> Result<ArrivalSchedule> {
    if d == 0 || k_max == 0 {
        return Err(bad_params("constant schedule needs d >= 1 and k_max >= 1"));
    }
    let times = (0..k_max as u64).map(|j| 2 * d * j + 1).collect();
    ArrivalSchedule::from_finite(times, Provenance::Constant { d })
}

/// `T_1 = 1`, `T_k = T_{k−1} + Δ_k` with i.i.d. `Δ_k`, for `k ≤ k_max`.
pub fn iid_schedule<R: Rng + ?Sized>(spec: &InterarrivalSpec, k_max: usize, rng: &mut R) -> Result<ArrivalSchedule> {
    spec.validate()?;
    if k_max == 0 {
        return Err(bad_params("k_max must be >= 1"));
    }
    let mut times = Vec::with_capacity(k_max);
    let mut t = 1u64;
    times.push(t);
    for _ in 1..k_max {
        t += spec.sample(rng);
        times.push(t);
    }
    ArrivalSchedule::from_finite(times, Provenance::Iid(spec.clone()))
}

/// As [`iid_schedule`] but keeps every arrival up to end `n_max` instead of a vertex count.
pub fn iid_schedule_until<R: Rng + ?Sized>(spec: &InterarrivalSpec, n_max: u64, rng: &mut R) -> Result<ArrivalSchedule> {
    spec.validate()?;
    let mut times = vec![1u64];
    let mut t = 1u64;
    loop {
        t += spec.sample(rng);
        if t > n_max {
            break;
        }
        times.push(t);
    }
    ArrivalSchedule::from_finite(times, Provenance::Iid(spec.clone()))
}

fn check_crp(alpha: f64, theta: f64) -> Result<()> {
    if !(0.0..1.0).contains(&alpha) || !(theta > -alpha) || !theta.is_finite() {
        return Err(bad_params(format!("CRP needs alpha in [0,1) and theta > -alpha, got ({alpha}, {theta})")));
    }
    Ok(())
}

/// CRP(α,θ) record indices up to `n_max` ends, by sequential thinning: with `n` ends
/// placed and `k` blocks, end `n+1` opens a block with probability `(θ+αk)/(θ+n)`.
pub fn crp_schedule<R: Rng + ?Sized>(alpha: f64, theta: f64, n_max: u64, rng: &mut R) -> Result<ArrivalSchedule> {
    check_crp(alpha, theta)?;
    if n_max == 0 {
        return Err(bad_params("n_max must be >= 1"));
    }
    let mut process = CrpArrivals::new(alpha, theta)?;
    let mut times = vec![];
    for n in 1..=n_max {
        if process.is_arrival(n, times.len(), rng) {
            times.push(n);
        }
    }
    ArrivalSchedule::from_finite(times, Provenance::Crp { alpha, theta })
}

/// CRP(α,θ) record indices for the first `k_max` blocks, drawing each gap by inverting
/// its survival function. Cost is O(log) per block instead of O(1) per end, which
/// matters in the sub-linear regime where `T_k` grows like `k^{1/α}`. Arrivals past
/// `n_cap` are ∞.
pub fn crp_schedule_by_gaps<R: Rng + ?Sized>(
    alpha: f64,
    theta: f64,
    k_max: usize,
    n_cap: u64,
    rng: &mut R,
) -> Result<ArrivalSchedule> {
    check_crp(alpha, theta)?;
    if k_max == 0 {
        return Err(bad_params("k_max must be >= 1"));
    }
    let mut times = vec![1u64];
    while times.len() < k_max {
        let t = *times.last().unwrap();
        match crp_next_arrival(alpha, theta, t, times.len() as u64, n_cap, rng) {
            Some(next) => times.push(next),
            None => break,
        }
    }
    ArrivalSchedule::from_finite(times, Provenance::Crp { alpha, theta })
}

/// Next CRP record index after `t_k = t` with `k` blocks, or `None` beyond `n_cap`.
pub fn crp_next_arrival<R: Rng + ?Sized>(alpha: f64, theta: f64, t: u64, k: u64, n_cap: u64, rng: &mut R) -> Option<u64> {
    let a = t as f64 - alpha * k as f64;
    let c = theta + alpha * k as f64;
    let ln_u = rng.random::<f64>().ln();
    let cap = n_cap.saturating_sub(t);
    first_event(a, c, ln_u, cap).map(|m| t + m)
}

/// log `P(no event in the next m steps)` for a chain whose per-step event probability
/// after `i` further steps is `c/(a + c + i)`: `Π_{i<m} (a+i)/(a+c+i)`.
pub(crate) fn ln_gap_survival(a: f64, c: f64, m: u64) -> f64 {
    ln_gamma_ratio(a, c) - ln_gamma_ratio(a + m as f64, c)
}

/// Smallest `m ≥ 1` with `ln_gap_survival(a, c, m) < ln_u`, or `None` if it exceeds `cap`.
pub(crate) fn first_event(a: f64, c: f64, ln_u: f64, cap: u64) -> Option<u64> {
    if cap == 0 {
        return None;
    }
    if c <= 0.0 {
        return None;
    }
    let f = |m: u64| ln_gap_survival(a, c, m) < ln_u;
    // Guess from the power-law approximation S(m) ≈ (a/(a+m))^c.
    let guess = a * ((-ln_u / c).exp() - 1.0);
    let mut m = if guess.is_finite() { guess.clamp(1.0, cap as f64) as u64 } else { cap };
    let (mut lo, mut hi);
    if f(m) {
        hi = m;
        let mut step = 1u64;
        loop {
            if hi <= 1 {
                return Some(1);
            }
            let probe = hi.saturating_sub(step).max(1);
            if f(probe) {
                hi = probe;
                step = step.saturating_mul(2);
            } else {
                lo = probe;
                break;
            }
        }
    } else {
        lo = m;
        let mut step = 1u64;
        loop {
            if lo >= cap {
                return None;
            }
            m = lo.saturating_add(step).min(cap);
            if f(m) {
                hi = m;
                break;
            }
            lo = m;
            step = step.saturating_mul(2);
        }
    }
    // Invariant: !f(lo), f(hi).
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if f(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// `T_2 = 2Δ_2`, `T_k = T_{k−1} + 2Δ_k`: every arrival after the first is even.
pub fn doubled_schedule(base_interarrivals: &[u64], k_max: usize) -> Result<ArrivalSchedule> {
    if base_interarrivals.contains(&0) {
        return Err(bad_params("interarrivals must be >= 1"));
    }
    if k_max == 0 {
        return Err(bad_params("k_max must be >= 1"));
    }
    let mut times = vec![1u64];
    let mut t = 0u64;
    for &d in base_interarrivals.iter().take(k_max - 1) {
        t += 2 * d;
        times.push(t);
    }
    ArrivalSchedule::from_finite(times, Provenance::Doubled(Box::new(Provenance::Fixed)))
}

/// Doubled i.i.d. schedule keeping arrivals up to end `n_max`.
pub fn doubled_iid_schedule_until<R: Rng + ?Sized>(spec: &InterarrivalSpec, n_max: u64, rng: &mut R) -> Result<ArrivalSchedule> {
    spec.validate()?;
    let mut times = vec![1u64];
    let mut t = 0u64;
    loop {
        t += 2 * spec.sample(rng);
        if t > n_max {
            break;
        }
        times.push(t);
    }
    ArrivalSchedule::from_finite(times, Provenance::Doubled(Box::new(Provenance::Iid(spec.clone()))))
}

/// Online arrival rule used by the streaming simulators.
pub trait ArrivalProcess {
    /// Whether end `n` (1-based) opens a new vertex, given `k` vertices among the first `n − 1` ends.
    fn is_arrival<R: Rng + ?Sized>(&mut self, n: u64, k: usize, rng: &mut R) -> bool;
}

/// Arrivals read off a realized schedule.
#[derive(Clone, Debug)]
pub struct FixedArrivals<'a> {
    schedule: &'a ArrivalSchedule,
}

impl<'a> FixedArrivals<'a> {
    pub fn new(schedule: &'a ArrivalSchedule) -> Self {
        FixedArrivals { schedule }
    }
}

impl ArrivalProcess for FixedArrivals<'_> {
    fn is_arrival<R: Rng + ?Sized>(&mut self, n: u64, k: usize, _rng: &mut R) -> bool {
        self.schedule.finite_times().get(k) == Some(&n)
    }
}

/// CRP(α,θ) thinning, optionally after a fixed prefix `T_1..T_r`.
#[derive(Clone, Debug)]
pub struct CrpArrivals {
    alpha: f64,
    theta: f64,
    prefix: Vec<u64>,
}

impl CrpArrivals {
    pub fn new(alpha: f64, theta: f64) -> Result<Self> {
        check_crp(alpha, theta)?;
        Ok(CrpArrivals { alpha, theta, prefix: vec![] })
    }

    /// Conditions on `T_1..T_r = prefix`; later arrivals follow the CRP rule.
    pub fn with_prefix(mut self, prefix: &ArrivalSchedule) -> Self {
        self.prefix = prefix.finite_times().to_vec();
        self
    }
}

impl ArrivalProcess for CrpArrivals {
    fn is_arrival<R: Rng + ?Sized>(&mut self, n: u64, k: usize, rng: &mut R) -> bool {
        if n == 1 {
            return true;
        }
        if k < self.prefix.len() {
            return self.prefix[k] == n;
        }
        let p = (self.theta + self.alpha * k as f64) / (self.theta + (n - 1) as f64);
        rng.random::<f64>() < p
    }
}

/// i.i.d. interarrivals drawn on the fly, optionally after a fixed prefix.
#[derive(Clone, Debug)]
pub struct IidArrivals {
    spec: InterarrivalSpec,
    prefix: Vec<u64>,
    next: Option<u64>,
}

impl IidArrivals {
    pub fn new(spec: InterarrivalSpec) -> Result<Self> {
        spec.validate()?;
        Ok(IidArrivals { spec, prefix: vec![1], next: None })
    }

    pub fn with_prefix(mut self, prefix: &ArrivalSchedule) -> Self {
        self.prefix = prefix.finite_times().to_vec();
        self
    }
}

impl ArrivalProcess for IidArrivals {
    fn is_arrival<R: Rng + ?Sized>(&mut self, n: u64, k: usize, rng: &mut R) -> bool {
        if k < self.prefix.len() {
            return self.prefix[k] == n;
        }
        let next = *self.next.get_or_insert_with(|| self.prefix[self.prefix.len() - 1] + self.spec.sample(rng));
        if n == next {
            self.next = Some(next + self.spec.sample(rng));
            true
        } else {
            false
        }
    }
}

/// Arrival grammar accepted by the command line:
/// `constant:d | every:c | geom:β | poisplus:λ | pmf:v=p,… | crp:α,θ | file:path | doubled:<spec>`.
///
/// `constant:d` is the d-edges-per-vertex scheme (Δ ≡ 2d); `every:c` is Δ ≡ c.
#[derive(Clone, Debug, PartialEq)]
pub enum ArrivalSpec {
    Constant(u64),
    Every(u64),
    Geometric(f64),
    ShiftedPoisson(f64),
    Pmf(Vec<(u64, f64)>),
    Crp { alpha: f64, theta: f64 },
    File(PathBuf),
    Doubled(Box<ArrivalSpec>),
}

impl ArrivalSpec {
    /// The interarrival law, for specs that have one.
    pub fn interarrival(&self) -> Option<InterarrivalSpec> {
        match self {
            ArrivalSpec::Constant(d) => Some(InterarrivalSpec::Constant(2 * d)),
            ArrivalSpec::Every(c) => Some(InterarrivalSpec::Constant(*c)),
            ArrivalSpec::Geometric(b) => Some(InterarrivalSpec::Geometric(*b)),
            ArrivalSpec::ShiftedPoisson(l) => Some(InterarrivalSpec::ShiftedPoisson(*l)),
            ArrivalSpec::Pmf(t) => Some(InterarrivalSpec::Custom(t.clone())),
            _ => None,
        }
    }

    /// Mean interarrival time, when the schedule is linear.
    pub fn mean_interarrival(&self) -> Option<f64> {
        match self {
            ArrivalSpec::Doubled(base) => base.interarrival().map(|s| 2.0 * s.mean()),
            other => other.interarrival().map(|s| s.mean()),
        }
    }

    /// Every arrival up to end `n_max`.
    pub fn realize<R: Rng + ?Sized>(&self, n_max: u64, rng: &mut R) -> Result<ArrivalSchedule> {
        match self {
            ArrivalSpec::Constant(d) => {
                if *d == 0 {
                    return Err(bad_params("constant:d needs d >= 1"));
                }
                constant_schedule(*d, ((n_max.max(1) - 1) / (2 * d) + 1) as usize)
            }
            ArrivalSpec::Crp { alpha, theta } => crp_schedule(*alpha, *theta, n_max, rng),
            ArrivalSpec::File(path) => crate::io::read_schedule_file(path),
            ArrivalSpec::Doubled(base) => {
                let spec = base
                    .interarrival()
                    .ok_or_else(|| bad_params("doubled: needs an interarrival spec (constant, every, geom, poisplus, pmf)"))?;
                doubled_iid_schedule_until(&spec, n_max, rng)
            }
            other => iid_schedule_until(&other.interarrival().expect("interarrival spec"), n_max, rng),
        }
    }
}

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{what}: {s:?}: {e}")))
}

fn parse_u64(s: &str, what: &str) -> Result<u64> {
    s.trim().parse::<u64>().map_err(|e| Error::Parse(format!("{what}: {s:?}: {e}")))
}

impl FromStr for ArrivalSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("arrival spec {s:?} has no ':'")))?;
        let spec = match kind.trim() {
            "constant" => ArrivalSpec::Constant(parse_u64(arg, "constant")?),
            "every" => ArrivalSpec::Every(parse_u64(arg, "every")?),
            "geom" => ArrivalSpec::Geometric(parse_f64(arg, "geom")?),
            "poisplus" => ArrivalSpec::ShiftedPoisson(parse_f64(arg, "poisplus")?),
            "pmf" => {
                let table = arg
                    .split(',')
                    .map(|cell| {
                        let (v, p) = cell
                            .split_once('=')
                            .ok_or_else(|| Error::Parse(format!("pmf cell {cell:?} is not v=p")))?;
                        Ok((parse_u64(v, "pmf value")?, parse_f64(p, "pmf probability")?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                ArrivalSpec::Pmf(table)
            }
            "crp" => {
                let (a, t) = arg
                    .split_once(',')
                    .ok_or_else(|| Error::Parse("crp needs alpha,theta".into()))?;
                ArrivalSpec::Crp { alpha: parse_f64(a, "crp alpha")?, theta: parse_f64(t, "crp theta")? }
            }
            "file" => ArrivalSpec::File(PathBuf::from(arg)),
            "doubled" => ArrivalSpec::Doubled(Box::new(arg.parse()?)),
            other => return Err(Error::Parse(format!("unknown arrival kind {other:?}"))),
        };
        spec.check()?;
        Ok(spec)
    }
}

impl ArrivalSpec {
    fn check(&self) -> Result<()> {
        match self {
            ArrivalSpec::Constant(0) => Err(bad_params("constant:d needs d >= 1")),
            ArrivalSpec::Crp { alpha, theta } => check_crp(*alpha, *theta),
            ArrivalSpec::File(_) => Ok(()),
            ArrivalSpec::Doubled(base) => {
                base.check()?;
                if base.interarrival().is_none() {
                    return Err(bad_params("doubled: needs an interarrival spec"));
                }
                Ok(())
            }
            other => other.interarrival().expect("interarrival spec").validate(),
        }
    }
}

impl fmt::Display for ArrivalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArrivalSpec::Constant(d) => write!(f, "constant:{d}"),
            ArrivalSpec::Crp { alpha, theta } => write!(f, "crp:{alpha},{theta}"),
            ArrivalSpec::File(p) => write!(f, "file:{}", p.display()),
            ArrivalSpec::Doubled(b) => write!(f, "doubled:{b}"),
            other => write!(f, "{}", other.interarrival().expect("interarrival spec")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, Component};
    use crate::schedule::ArrivalTime;

    #[test]
    fn constant_examples() {
        let s = constant_schedule(1, 3).unwrap();
        assert_eq!(s.finite_times(), &[1, 3, 5]);
        assert_eq!(s.time(4), ArrivalTime::Infinite);
        assert_eq!(constant_schedule(2, 2).unwrap().finite_times(), &[1, 5]);
        assert_eq!(constant_schedule(7, 1).unwrap().finite_times(), &[1]);
        assert!(constant_schedule(0, 1).is_err());
    }

    #[test]
    fn iid_examples() {
        let mut rng = stream(1, Component::Arrivals);
        let s = iid_schedule(&InterarrivalSpec::Geometric(1.0), 5, &mut rng).unwrap();
        assert_eq!(s.finite_times(), &[1, 2, 3, 4, 5]);
        let s = iid_schedule(&InterarrivalSpec::Custom(vec![(2, 1.0)]), 4, &mut rng).unwrap();
        assert_eq!(s.finite_times(), &[1, 3, 5, 7]);
        assert!(iid_schedule(&InterarrivalSpec::Custom(vec![(2, 0.5)]), 4, &mut rng).is_err());
        assert!(iid_schedule(&InterarrivalSpec::Custom(vec![(0, 1.0)]), 4, &mut rng).is_err());
    }

    #[test]
    fn geometric_mean() {
        let mut rng = stream(2, Component::Arrivals);
        let spec = InterarrivalSpec::Geometric(0.5);
        let m = 1_000_000;
        let mean = (0..m).map(|_| spec.sample(&mut rng) as f64).sum::<f64>() / m as f64;
        // sd of the mean is sqrt(2)/1000
        assert!((mean - 2.0).abs() < 0.01, "{mean}");
        assert_eq!(spec.mean(), 2.0);
    }

    #[test]
    fn doubled_examples() {
        let s = doubled_schedule(&[1, 1, 1], 4).unwrap();
        assert_eq!(s.finite_times(), &[1, 2, 4, 6]);
        assert!(s.in_t2());
        let s = doubled_schedule(&[3], 5).unwrap();
        assert_eq!(s.finite_times(), &[1, 6]);
        assert_eq!(s.time(3), ArrivalTime::Infinite);
    }

    #[test]
    fn gap_inversion_matches_survival() {
        // P(T_2 = 2 | T_1 = 1) = (θ+α)/(θ+1) = 0.75 for α=0.5, θ=1.
        let (a, c) = (1.0 - 0.5, 1.0 + 0.5);
        assert!((ln_gap_survival(a, c, 1) - 0.25f64.ln()).abs() < 1e-14);
        assert_eq!(first_event(a, c, 0.7f64.ln(), 100), Some(1));
        assert_eq!(first_event(a, c, 0.2f64.ln(), 100), Some(2));
        // Monotone in u and consistent with a linear scan.
        for &(a, c) in &[(1.0, 0.3), (5.5, 2.0), (1e6, 3.0), (20.0, 0.01)] {
            for i in 1..50 {
                let ln_u = (i as f64 / 50.0).ln();
                let got = first_event(a, c, ln_u, 1 << 40);
                let mut m = 1;
                while m < 1 << 20 && ln_gap_survival(a, c, m) >= ln_u {
                    m += 1;
                }
                if m < 1 << 20 {
                    assert_eq!(got, Some(m), "a={a} c={c} u={i}");
                }
            }
        }
        assert_eq!(first_event(20.0, 0.01, (0.5f64).ln(), 1000), None);
    }

    #[test]
    fn grammar_round_trip() {
        for s in ["constant:2", "every:3", "geom:0.5", "poisplus:2", "pmf:1=0.5,3=0.5", "crp:0.5,1", "doubled:every:1", "file:/tmp/x"] {
            let spec: ArrivalSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("crp:1.5,1".parse::<ArrivalSpec>().is_err());
        assert!("doubled:crp:0.5,1".parse::<ArrivalSpec>().is_err());
        assert!("geom".parse::<ArrivalSpec>().is_err());
        assert_eq!("doubled:every:1".parse::<ArrivalSpec>().unwrap().mean_interarrival(), Some(2.0));
    }

    #[test]
    fn realize_constant_covers_horizon() {
        let mut rng = stream(3, Component::Arrivals);
        let s = ArrivalSpec::Constant(1).realize(10, &mut rng).unwrap();
        assert_eq!(s.finite_times(), &[1, 3, 5, 7, 9]);
        let s = "doubled:every:1".parse::<ArrivalSpec>().unwrap().realize(7, &mut rng).unwrap();
        assert_eq!(s.finite_times(), &[1, 2, 4, 6]);
    }
}
