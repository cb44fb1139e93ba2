//! Beta, gamma, generalized gamma, positive stable and Mittag–Leffler variates.

use crate::arrivals::crp_next_arrival;
use crate::error::{bad_params, Error, Result};
use rand::Rng;
use rand_distr::{Beta, Distribution, Exp1, Gamma};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

pub const DEFAULT_CRP_LIMIT_N: u64 = 1_000_000;

/// How `ML(σ, θ)` is drawn.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
pub enum MlMethod {
    /// Polynomially tilted stable via a gamma mixture of exponentially tilted stables.
    /// Exact for `θ ≥ 0`; `θ < 0` falls back to `CrpLimit` at the default size.
    #[default]
    Exact,
    /// `K_n / n^σ` for the block count of a `CRP(σ, θ)` at size `n`. Approximate.
    CrpLimit { n: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum DistSpec {
    Beta { a: f64, b: f64 },
    Gamma { a: f64 },
    /// `𝒢_a^b`.
    GenGamma { a: f64, b: f64 },
    /// Positive stable with `E[e^{−λZ}] = e^{−λ^σ}`.
    Stable { sigma: f64 },
    /// `Z_σ^{−σ}`.
    Ml { sigma: f64 },
    GenMl { sigma: f64, theta: f64, method: MlMethod },
    /// Product of independent draws.
    Product(Vec<DistSpec>),
    Scaled(Box<DistSpec>, f64),
    Power(Box<DistSpec>, f64),
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(bad_params(format!("{name} must be positive, got {x}")))
    }
}

fn stable_index(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma < 1.0 {
        Ok(())
    } else {
        Err(bad_params(format!("sigma must lie in (0,1), got {sigma}")))
    }
}

impl DistSpec {
    pub fn beta(a: f64, b: f64) -> Self {
        DistSpec::Beta { a, b }
    }

    pub fn gamma(a: f64) -> Self {
        DistSpec::Gamma { a }
    }

    pub fn gen_ml(sigma: f64, theta: f64) -> Self {
        DistSpec::GenMl { sigma, theta, method: MlMethod::Exact }
    }

    pub fn times(self, other: DistSpec) -> Self {
        match self {
            DistSpec::Product(mut v) => {
                v.push(other);
                DistSpec::Product(v)
            }
            s => DistSpec::Product(vec![s, other]),
        }
    }

    pub fn pow(self, b: f64) -> Self {
        DistSpec::Power(Box::new(self), b)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            DistSpec::Beta { a, b } => positive("a", *a).and(positive("b", *b)),
            DistSpec::Gamma { a } => positive("a", *a),
            DistSpec::GenGamma { a, b } => {
                positive("a", *a)?;
                if b.is_finite() { Ok(()) } else { Err(bad_params("power must be finite")) }
            }
            DistSpec::Stable { sigma } | DistSpec::Ml { sigma } => stable_index(*sigma),
            DistSpec::GenMl { sigma, theta, method } => {
                stable_index(*sigma)?;
                if !(*theta > -sigma) {
                    return Err(bad_params(format!("theta must exceed -sigma, got {theta}")));
                }
                match method {
                    MlMethod::CrpLimit { n } if *n < 2 => Err(bad_params("CRP limit size must be >= 2")),
                    _ => Ok(()),
                }
            }
            DistSpec::Product(v) => {
                if v.is_empty() {
                    return Err(bad_params("empty product"));
                }
                v.iter().try_for_each(|d| d.validate())
            }
            DistSpec::Scaled(d, c) => {
                positive("scale", *c)?;
                d.validate()
            }
            DistSpec::Power(d, b) => {
                if !b.is_finite() {
                    return Err(bad_params("power must be finite"));
                }
                d.validate()
            }
        }
    }

    /// True if any factor is drawn by an approximate method.
    pub fn is_approximate(&self) -> bool {
        match self {
            DistSpec::GenMl { method: MlMethod::CrpLimit { .. }, .. } => true,
            DistSpec::GenMl { theta, method: MlMethod::Exact, .. } => *theta < 0.0,
            DistSpec::Product(v) => v.iter().any(|d| d.is_approximate()),
            DistSpec::Scaled(d, _) | DistSpec::Power(d, _) => d.is_approximate(),
            _ => false,
        }
    }

    /// `ln E[X^q]`, or `None` where the moment is infinite.
    pub fn ln_moment(&self, q: f64) -> Option<f64> {
        let lg = libm::lgamma;
        match *self {
            DistSpec::Beta { a, b } => (a + q > 0.0).then(|| lg(a + q) + lg(a + b) - lg(a) - lg(a + b + q)),
            DistSpec::Gamma { a } => (a + q > 0.0).then(|| lg(a + q) - lg(a)),
            DistSpec::GenGamma { a, b } => DistSpec::Gamma { a }.ln_moment(q * b),
            DistSpec::Stable { sigma } => (q < sigma).then(|| lg(1.0 - q / sigma) - lg(1.0 - q)),
            DistSpec::Ml { sigma } => DistSpec::gen_ml(sigma, 0.0).ln_moment(q),
            DistSpec::GenMl { sigma, theta, .. } => {
                (theta / sigma + 1.0 + q > 0.0 && theta + 1.0 + q * sigma > 0.0).then(|| {
                    lg(theta + 1.0) + lg(theta / sigma + 1.0 + q) - lg(theta / sigma + 1.0) - lg(theta + 1.0 + q * sigma)
                })
            }
            DistSpec::Product(ref v) => v.iter().map(|d| d.ln_moment(q)).sum(),
            DistSpec::Scaled(ref d, c) => d.ln_moment(q).map(|m| m + q * c.ln()),
            DistSpec::Power(ref d, b) => d.ln_moment(q * b),
        }
    }

    pub fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            DistSpec::Beta { a, b } => beta(a, b, rng),
            DistSpec::Gamma { a } => gamma(a, rng),
            DistSpec::GenGamma { a, b } => gamma(a, rng).powf(b),
            DistSpec::Stable { sigma } => stable(sigma, rng),
            DistSpec::Ml { sigma } => stable(sigma, rng).powf(-sigma),
            DistSpec::GenMl { sigma, theta, method } => match method {
                MlMethod::Exact if theta >= 0.0 => gen_ml_exact(sigma, theta, rng),
                MlMethod::Exact => gen_ml_crp_limit(sigma, theta, DEFAULT_CRP_LIMIT_N, rng),
                MlMethod::CrpLimit { n } => gen_ml_crp_limit(sigma, theta, n, rng),
            },
            DistSpec::Product(ref v) => v.iter().map(|d| d.sample_one(rng)).product(),
            DistSpec::Scaled(ref d, c) => c * d.sample_one(rng),
            DistSpec::Power(ref d, b) => d.sample_one(rng).powf(b),
        }
    }
}

/// `m` i.i.d. draws.
pub fn sample_dist<R: Rng + ?Sized>(spec: &DistSpec, m: usize, rng: &mut R) -> Result<Vec<f64>> {
    spec.validate()?;
    Ok((0..m).map(|_| spec.sample_one(rng)).collect())
}

pub(crate) fn gamma<R: Rng + ?Sized>(a: f64, rng: &mut R) -> f64 {
    if a == 1.0 {
        return Exp1.sample(rng);
    }
    Gamma::new(a, 1.0).expect("gamma shape checked by caller").sample(rng)
}

pub(crate) fn beta<R: Rng + ?Sized>(a: f64, b: f64, rng: &mut R) -> f64 {
    if b == 1.0 {
        return (1.0 - rng.random::<f64>()).powf(1.0 / a);
    }
    if a == 1.0 {
        return 1.0 - (1.0 - rng.random::<f64>()).powf(1.0 / b);
    }
    Beta::new(a, b).expect("beta parameters checked by caller").sample(rng)
}

/// Kanter's representation: `Z = (A(U)/E)^{(1−σ)/σ}` with
/// `A(u) = sin(σπu)^{σ/(1−σ)} sin((1−σ)πu) / sin(πu)^{1/(1−σ)}`.
pub(crate) fn stable<R: Rng + ?Sized>(sigma: f64, rng: &mut R) -> f64 {
    let u: f64 = loop {
        let u = rng.random::<f64>();
        if u > 0.0 {
            break u;
        }
    };
    let e: f64 = Exp1.sample(rng);
    let s = 1.0 - sigma;
    let ln_a = sigma / s * (sigma * PI * u).sin().ln() + (s * PI * u).sin().ln() - (PI * u).sin().ln() / s;
    (s / sigma * (ln_a - e.ln())).exp()
}

/// `ML(σ, θ)` for `θ ≥ 0`, exact.
///
/// `Z_{σ,θ}` with density `∝ z^{−θ} f_σ(z)` is an exponentially tilted stable with
/// tilt `λ = V^{1/σ}`, `V ~ Gamma(θ/σ)`. The tilted stable is an `n`-fold sum of
/// rescaled stables each tilted by `λ n^{−1/σ}` and drawn by rejection; with
/// `n = ⌈V⌉` every rejection step accepts with probability at least `1/e`.
pub(crate) fn gen_ml_exact<R: Rng + ?Sized>(sigma: f64, theta: f64, rng: &mut R) -> f64 {
    if theta == 0.0 {
        return stable(sigma, rng).powf(-sigma);
    }
    let v = gamma(theta / sigma, rng);
    let n = v.ceil().max(1.0);
    let scale = n.powf(-1.0 / sigma);
    let tilt = v.powf(1.0 / sigma) * scale;
    let mut sum = 0.0;
    for _ in 0..n as u64 {
        loop {
            let z = stable(sigma, rng);
            if rng.random::<f64>() <= (-tilt * z).exp() {
                sum += z;
                break;
            }
        }
    }
    (scale * sum).powf(-sigma)
}

/// `K_n / n^σ`, the scaled block count of a `CRP(σ, θ)` after `n` customers.
pub(crate) fn gen_ml_crp_limit<R: Rng + ?Sized>(sigma: f64, theta: f64, n: u64, rng: &mut R) -> f64 {
    let (mut t, mut k) = (1u64, 1u64);
    while let Some(next) = crp_next_arrival(sigma, theta, t, k, n, rng) {
        t = next;
        k += 1;
    }
    k as f64 / (n as f64).powf(sigma)
}

impl fmt::Display for DistSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistSpec::Beta { a, b } => write!(f, "beta:{a},{b}"),
            DistSpec::Gamma { a } => write!(f, "gamma:{a}"),
            DistSpec::GenGamma { a, b } => write!(f, "gga:{a},{b}"),
            DistSpec::Stable { sigma } => write!(f, "stable:{sigma}"),
            DistSpec::Ml { sigma } => write!(f, "ml:{sigma}"),
            DistSpec::GenMl { sigma, theta, method: MlMethod::Exact } => write!(f, "ml:{sigma},{theta}"),
            DistSpec::GenMl { sigma, theta, method: MlMethod::CrpLimit { n } } => write!(f, "ml:{sigma},{theta},crp{n}"),
            DistSpec::Product(v) => {
                for (i, d) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    write!(f, "{d}")?;
                }
                Ok(())
            }
            DistSpec::Scaled(d, c) => write!(f, "scale:{c}:({d})"),
            DistSpec::Power(d, b) => write!(f, "({d})^{b}"),
        }
    }
}

/// Grammar: `beta:a,b | gamma:a | gga:a,b | stable:σ | ml:σ | ml:σ,θ | ml:σ,θ,crpN`,
/// joined with `*` for products.
impl FromStr for DistSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains('*') {
            let parts = s.split('*').map(str::parse).collect::<Result<Vec<DistSpec>>>()?;
            let d = DistSpec::Product(parts);
            d.validate()?;
            return Ok(d);
        }
        let (kind, args) = s.split_once(':').ok_or_else(|| Error::Parse(format!("expected kind:args, got {s:?}")))?;
        let args: Vec<&str> = args.split(',').map(str::trim).collect();
        let num = |i: usize| -> Result<f64> {
            args.get(i)
                .ok_or_else(|| Error::Parse(format!("{kind} needs more arguments")))?
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("{kind}: {e}")))
        };
        let arity = |n: usize| -> Result<()> {
            if args.len() == n { Ok(()) } else { Err(Error::Parse(format!("{kind} takes {n} argument(s)"))) }
        };
        let d = match kind {
            "beta" => {
                arity(2)?;
                DistSpec::Beta { a: num(0)?, b: num(1)? }
            }
            "gamma" => {
                arity(1)?;
                DistSpec::Gamma { a: num(0)? }
            }
            "gga" => {
                arity(2)?;
                DistSpec::GenGamma { a: num(0)?, b: num(1)? }
            }
            "stable" => {
                arity(1)?;
                DistSpec::Stable { sigma: num(0)? }
            }
            "ml" => match args.len() {
                1 => DistSpec::Ml { sigma: num(0)? },
                2 => DistSpec::gen_ml(num(0)?, num(1)?),
                3 => {
                    let n = args[2]
                        .strip_prefix("crp")
                        .and_then(|x| x.parse().ok())
                        .ok_or_else(|| Error::Parse(format!("expected crpN, got {:?}", args[2])))?;
                    DistSpec::GenMl { sigma: num(0)?, theta: num(1)?, method: MlMethod::CrpLimit { n } }
                }
                _ => return Err(Error::Parse("ml takes 1 to 3 arguments".into())),
            },
            other => return Err(Error::Parse(format!("unknown distribution {other:?}"))),
        };
        d.validate()?;
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, Component};
    use crate::stats::{ks_two_sample, mean_se};

    fn check_moment(spec: &DistSpec, q: f64, m: usize, seed: u64) {
        let mut rng = stream(seed, Component::Identity);
        let xs: Vec<f64> = sample_dist(spec, m, &mut rng).unwrap().into_iter().map(|x| x.powf(q)).collect();
        let (mean, se) = mean_se(&xs);
        let target = spec.ln_moment(q).unwrap().exp();
        assert!((mean - target).abs() < 4.0 * se, "{spec} q={q}: {mean} ± {se} vs {target}");
    }

    #[test]
    fn gamma_mean() {
        let mut rng = stream(1, Component::Identity);
        let xs = sample_dist(&DistSpec::gamma(1.0), 1_000_000, &mut rng).unwrap();
        assert!((mean_se(&xs).0 - 1.0).abs() < 0.005);
    }

    #[test]
    fn beta_mean_matches_formula() {
        // Marginal of Ψ_2 at t_2 = 3, α = 0.5.
        check_moment(&DistSpec::beta(0.5, 1.5), 1.0, 200_000, 2);
        check_moment(&DistSpec::beta(2.0, 1.0), 1.0, 200_000, 3);
        check_moment(&DistSpec::beta(1.0, 3.5), 2.0, 200_000, 4);
    }

    #[test]
    fn stable_moments() {
        for &s in &[0.3, 0.5, 0.8] {
            check_moment(&DistSpec::Stable { sigma: s }, s / 3.0, 200_000, 5);
            check_moment(&DistSpec::Ml { sigma: s }, 2.0, 200_000, 6);
        }
    }

    #[test]
    fn ml_half_second_moment_vs_gamma_route() {
        // Z_{1/2} = 1/(4 𝒢_{1/2}), so M_{1/2} = 2 𝒢_{1/2}^{1/2}.
        let m = 400_000;
        let mut rng = stream(7, Component::Identity);
        let a: Vec<f64> = sample_dist(&DistSpec::Ml { sigma: 0.5 }, m, &mut rng).unwrap().iter().map(|x| x * x).collect();
        let b: Vec<f64> = (0..m).map(|_| 4.0 * gamma(0.5, &mut rng)).collect();
        let (ma, mb) = (mean_se(&a).0, mean_se(&b).0);
        assert!((ma / mb - 1.0).abs() < 0.01, "{ma} vs {mb}");
    }

    #[test]
    fn gen_ml_moments() {
        for &(s, t) in &[(0.5, 1.0), (2.0 / 3.0, 4.0 / 3.0), (0.3, 0.2), (0.5, 5.0)] {
            check_moment(&DistSpec::gen_ml(s, t), 1.0, 200_000, 8);
            check_moment(&DistSpec::gen_ml(s, t), -0.5, 200_000, 9);
        }
    }

    #[test]
    fn gen_ml_is_size_biased_ml() {
        // ML(σ, σ) is ML(σ) size-biased; compare by KS against weighted resampling.
        let (s, m) = (0.5, 40_000);
        let mut rng = stream(10, Component::Identity);
        let direct = sample_dist(&DistSpec::gen_ml(s, s), m, &mut rng).unwrap();
        let base = sample_dist(&DistSpec::Ml { sigma: s }, 20 * m, &mut rng).unwrap();
        let max = base.iter().cloned().fold(0.0, f64::max);
        let biased: Vec<f64> = base.into_iter().filter(|&x| rng.random::<f64>() < x / max).collect();
        assert!(ks_two_sample(&direct, &biased).unwrap().p_value > 0.001);
    }

    #[test]
    fn crp_limit_is_close_and_flagged() {
        let spec = DistSpec::GenMl { sigma: 0.5, theta: 1.0, method: MlMethod::CrpLimit { n: 100_000 } };
        assert!(spec.is_approximate());
        assert!(!DistSpec::gen_ml(0.5, 1.0).is_approximate());
        let mut rng = stream(11, Component::Identity);
        let xs = sample_dist(&spec, 20_000, &mut rng).unwrap();
        let target = spec.ln_moment(1.0).unwrap().exp();
        assert!((mean_se(&xs).0 / target - 1.0).abs() < 0.03);
    }

    #[test]
    fn grammar_round_trip() {
        for s in ["beta:0.5,2", "gamma:1", "gga:3,0.5", "stable:0.4", "ml:0.5", "ml:0.5,1", "ml:0.5,1,crp1000", "beta:1,1*ml:0.5,1"] {
            let d: DistSpec = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
        }
        assert!("ml:1.5".parse::<DistSpec>().is_err());
        assert!("ml:0.5,-0.6".parse::<DistSpec>().is_err());
        assert!("beta:1".parse::<DistSpec>().is_err());
    }
}
