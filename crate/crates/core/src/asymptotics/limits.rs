use crate::error::{bad_params, Result};
use crate::scalar::Real;
use rand::Rng;
use rand_distr::{Beta, Distribution, Gamma, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

fn check_sublinear<S: Real>(alpha: S) -> Result<()> {
    if !(alpha > S::zero() && alpha < S::one()) {
        return Err(bad_params(format!("sub-linear regime needs alpha in (0,1), got {alpha}")));
    }
    Ok(())
}

/// `γ = (μ−α)/(μ−1)` for mean interarrival `μ > 1`.
pub fn gamma_linear<S: Real>(alpha: S, mu: S) -> Result<S> {
    if !(mu > S::one()) || !(alpha < S::one()) {
        return Err(bad_params(format!("linear regime needs mu > 1 and alpha < 1, got mu={mu}, alpha={alpha}")));
    }
    Ok((mu - alpha) / (mu - S::one()))
}

/// `p_d = α Γ(d−α) / (Γ(d+1) Γ(1−α))` for `d = 1..=d_max` (index `d−1`).
pub fn limit_pmf_sublinear<S: Real>(alpha: S, d_max: usize) -> Result<Vec<S>> {
    check_sublinear(alpha)?;
    let c = alpha.ln() - (S::one() - alpha).lgamma();
    Ok((1..=d_max)
        .map(|d| {
            let d = S::from_usize(d).unwrap();
            (c + (d - alpha).lgamma() - (d + S::one()).lgamma()).exp()
        })
        .collect())
}

/// `P(D > d) = Γ(d+1−α) / (Γ(d+1) Γ(1−α))`.
pub fn limit_survival_sublinear<S: Real>(alpha: S, d: u64) -> Result<S> {
    check_sublinear(alpha)?;
    let d = S::from_count(d);
    Ok(((d + S::one() - alpha).lgamma() - (d + S::one()).lgamma() - (S::one() - alpha).lgamma()).exp())
}

/// `p_d = γ Γ(d−α) Γ(1−α+γ) / (Γ(d+1−α+γ) Γ(1−α))` with `γ = (μ−α)/(μ−1)`.
pub fn limit_pmf_linear<S: Real>(alpha: S, mu: S, d_max: usize) -> Result<Vec<S>> {
    limit_pmf_yule(alpha, gamma_linear(alpha, mu)?, d_max)
}

/// The linear-regime pmf parameterized by `γ > 0` directly.
pub fn limit_pmf_yule<S: Real>(alpha: S, gamma: S, d_max: usize) -> Result<Vec<S>> {
    if !(gamma > S::zero()) || !(alpha < S::one()) {
        return Err(bad_params(format!("need gamma > 0 and alpha < 1, got gamma={gamma}, alpha={alpha}")));
    }
    let one = S::one();
    let c = gamma.ln() + (one - alpha + gamma).lgamma() - (one - alpha).lgamma();
    Ok((1..=d_max)
        .map(|d| {
            let d = S::from_usize(d).unwrap();
            (c + (d - alpha).lgamma() - (d + one - alpha + gamma).lgamma()).exp()
        })
        .collect())
}

/// `P(D > d) = Γ(d+1−α) Γ(1−α+γ) / (Γ(d+1−α+γ) Γ(1−α))`.
pub fn limit_survival_yule<S: Real>(alpha: S, gamma: S, d: u64) -> Result<S> {
    if !(gamma > S::zero()) || !(alpha < S::one()) {
        return Err(bad_params(format!("need gamma > 0 and alpha < 1, got gamma={gamma}, alpha={alpha}")));
    }
    let one = S::one();
    let d = S::from_count(d);
    Ok(((d + one - alpha).lgamma() + (one - alpha + gamma).lgamma()
        - (d + one - alpha + gamma).lgamma()
        - (one - alpha).lgamma())
    .exp())
}

/// Degree regime of the limit law.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Regime {
    /// `|V| ~ n^α`, `α ∈ (0,1)`.
    SubLinear { alpha: f64 },
    /// Mean interarrival `μ > 1`.
    Linear { alpha: f64, mu: f64 },
}

impl Regime {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Regime::SubLinear { alpha } => check_sublinear(alpha),
            Regime::Linear { alpha, mu } => gamma_linear(alpha, mu).map(|_| ()),
        }
    }

    pub fn alpha(&self) -> f64 {
        match *self {
            Regime::SubLinear { alpha } | Regime::Linear { alpha, .. } => alpha,
        }
    }

    /// γ of the linear regime; 1 in the sub-linear regime (degrees scale like `n`).
    pub fn gamma(&self) -> f64 {
        match *self {
            Regime::SubLinear { .. } => 1.0,
            Regime::Linear { alpha, mu } => (mu - alpha) / (mu - 1.0),
        }
    }

    /// First Beta parameter of the mixing variable: `α` or `γ`.
    fn mixing_shape(&self) -> f64 {
        match *self {
            Regime::SubLinear { alpha } => alpha,
            Regime::Linear { .. } => self.gamma(),
        }
    }

    pub fn pmf(&self, d_max: usize) -> Result<Vec<f64>> {
        match *self {
            Regime::SubLinear { alpha } => limit_pmf_sublinear(alpha, d_max),
            Regime::Linear { alpha, mu } => limit_pmf_linear(alpha, mu, d_max),
        }
    }

    pub fn survival(&self, d: u64) -> Result<f64> {
        match *self {
            Regime::SubLinear { alpha } => limit_survival_sublinear(alpha, d),
            Regime::Linear { alpha, .. } => limit_survival_yule(alpha, self.gamma(), d),
        }
    }

    /// Power-law exponent of the limit pmf: `1+α` or `1+γ`.
    pub fn tail_exponent(&self) -> f64 {
        1.0 + self.mixing_shape()
    }
}

/// Geometric on {1,2,…} with success probability `p`.
fn geometric_from_one<R: Rng + ?Sized>(p: f64, rng: &mut R) -> u64 {
    if p >= 1.0 {
        return 1;
    }
    let u = 1.0 - rng.random::<f64>();
    // Float-to-int casts saturate, so vanishing p gives u64::MAX rather than garbage.
    1 + (u.ln() / (-p).ln_1p()).floor() as u64
}

fn poisson<R: Rng + ?Sized>(lambda: f64, rng: &mut R) -> u64 {
    if !(lambda > 0.0) {
        return 0;
    }
    if lambda > 1e12 {
        let z: f64 = StandardNormal.sample(rng);
        return (lambda + lambda.sqrt() * z).round().max(0.0) as u64;
    }
    Poisson::new(lambda).expect("positive finite rate").sample(rng) as u64
}

/// Mixed-geometric limit degree: `B ~ Beta(α, 1−α)` (sub-linear) or `Beta(γ, 1−α)`
/// (linear), then `D ~ Geom(B)` on {1,2,…}.
pub fn sample_limit_degree_geom<R: Rng + ?Sized>(regime: &Regime, rng: &mut R) -> Result<u64> {
    regime.validate()?;
    let b = Beta::new(regime.mixing_shape(), 1.0 - regime.alpha()).map_err(|e| bad_params(e.to_string()))?;
    Ok(geometric_from_one(b.sample(rng), rng))
}

/// How the Poisson rate's odds factor is drawn.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum OddsVariant {
    /// `(1−B)/B` with `B ~ Beta(a, 1)`.
    #[default]
    BetaOdds,
    /// `G_1/G_a`, equal in law to `(1−B)/B`.
    GammaRatio,
}

/// Mixed-Poisson limit degree: `D = 1 + Poisson(G_{1−α} (1−B)/B)` with
/// `B ~ Beta(α, 1)` or `Beta(γ, 1)`.
pub fn sample_limit_degree_poisson<R: Rng + ?Sized>(regime: &Regime, variant: OddsVariant, rng: &mut R) -> Result<u64> {
    regime.validate()?;
    let a = regime.mixing_shape();
    let odds = match variant {
        OddsVariant::BetaOdds => {
            // Beta(a, 1) = U^{1/a}.
            let b = (1.0 - rng.random::<f64>()).powf(1.0 / a);
            (1.0 - b) / b
        }
        OddsVariant::GammaRatio => {
            let g1: f64 = Gamma::new(1.0, 1.0).unwrap().sample(rng);
            let ga: f64 = Gamma::new(a, 1.0).map_err(|e| bad_params(e.to_string()))?.sample(rng);
            g1 / ga
        }
    };
    let g: f64 = Gamma::new(1.0 - regime.alpha(), 1.0).map_err(|e| bad_params(e.to_string()))?.sample(rng);
    Ok(1 + poisson(g * odds, rng))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sublinear_hand_values() {
        let p = limit_pmf_sublinear(0.5f64, 3).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-14);
        // p_2 = α(1−α)/2
        assert!((p[1] - 0.125).abs() < 1e-14);
        assert!((limit_survival_sublinear(0.5f64, 0).unwrap() - 1.0).abs() < 1e-14);
        assert!(limit_pmf_sublinear(1.0f64, 3).is_err());
    }

    #[test]
    fn yule_simon_hand_values() {
        let p = limit_pmf_linear(0.0f64, 2.0, 3).unwrap();
        assert!((p[0] - 2.0 / 3.0).abs() < 1e-14);
        assert!((p[1] - 1.0 / 6.0).abs() < 1e-14);
        assert!((p[2] - 1.0 / 15.0).abs() < 1e-14);
        for &g in &[1.5, 2.0, 7.0] {
            let p = limit_pmf_yule(0.0f64, g, 1).unwrap();
            assert!((p[0] - g / (1.0 + g)).abs() < 1e-14);
        }
        assert!(limit_pmf_linear(0.0f64, 1.0, 3).is_err());
    }

    #[test]
    fn survival_telescopes() {
        for regime in [Regime::SubLinear { alpha: 0.3 }, Regime::Linear { alpha: -0.5, mu: 3.0 }] {
            let p = regime.pmf(200).unwrap();
            for d in 1..=200u64 {
                let diff = regime.survival(d - 1).unwrap() - regime.survival(d).unwrap();
                assert!((diff - p[d as usize - 1]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn boundary_geometric_is_one() {
        let mut rng = crate::rng::stream(1, crate::rng::Component::Limits);
        assert_eq!(geometric_from_one(1.0, &mut rng), 1);
        assert_eq!(poisson(0.0, &mut rng), 0);
    }
}
