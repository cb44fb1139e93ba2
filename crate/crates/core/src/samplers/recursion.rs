use crate::error::{bad_params, Result};
use crate::params::ModelParams;
use rand::Rng;
use rand_distr::{Distribution, Gamma};

fn gamma<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> Result<f64> {
    if shape == 0.0 {
        return Ok(0.0);
    }
    Ok(Gamma::new(shape, 1.0).map_err(|e| bad_params(e.to_string()))?.sample(rng))
}

/// Ψ variables from shared gamma variables: with `G^{(i)} ~ Gamma(1−α)` and
/// `G_{Δ−1} ~ Gamma(Δ−1)` (zero when `Δ = 1`),
/// `Ψ'_j = G^{(j)} / (Σ_{i≤j} G^{(i)} + Σ_{i<j} G_{Δ_{i+1}−1})`.
/// The result has `interarrivals.len() + 1` entries and `Ψ'_1 = 1`.
pub fn sample_psi_recursion<R: Rng + ?Sized>(params: &ModelParams, interarrivals: &[u64], rng: &mut R) -> Result<Vec<f64>> {
    if interarrivals.contains(&0) {
        return Err(bad_params("interarrivals must be >= 1"));
    }
    let a = 1.0 - params.alpha();
    let mut out = Vec::with_capacity(interarrivals.len() + 1);
    out.push(1.0);
    let mut denom = gamma(a, rng)?;
    for &d in interarrivals {
        denom += gamma((d - 1) as f64, rng)?;
        let g = gamma(a, rng)?;
        denom += g;
        out.push(g / denom);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, Component};

    #[test]
    fn first_is_one_and_rest_in_unit_interval() {
        let mut rng = stream(8, Component::Stick);
        let psi = sample_psi_recursion(&ModelParams::new(0.5).unwrap(), &[1, 2, 5], &mut rng).unwrap();
        assert_eq!(psi.len(), 4);
        assert_eq!(psi[0], 1.0);
        assert!(psi[1..].iter().all(|&p| p > 0.0 && p < 1.0));
        assert_eq!(sample_psi_recursion(&ModelParams::new(0.5).unwrap(), &[], &mut rng).unwrap(), vec![1.0]);
    }
}
