//! Degree statistics along trajectories, limit laws, and convergence diagnostics.

mod estimators;
mod limits;
mod martingale;
mod trajectory;

pub use estimators::{
    density_exponent, hurwitz_zeta, tail_exponent, tail_exponent_pmf, DMinRule, DensityEstimate, TailFit,
    MIN_SIGMA, MIN_TAIL_OBSERVATIONS, VUONG_REJECT,
};
pub use limits::{
    gamma_linear, limit_pmf_linear, limit_pmf_sublinear, limit_pmf_yule, limit_survival_sublinear, limit_survival_yule,
    sample_limit_degree_geom, sample_limit_degree_poisson, OddsVariant, Regime,
};
pub use martingale::{expected_z_at_tr, martingale_flatness, martingale_statistic, MartingaleWeights};
pub use trajectory::{
    degree_histogram, log_checkpoints, scaled_degrees, simulate_trajectory, trajectory_from_labels, Checkpoint,
    EmpiricalPmf, ScaledDegrees, ScaledRow, TrajectoryStats,
};

use crate::error::{bad_params, Error, Result};

/// Left-relative increments `X_j / Σ_{i≤j} X_i`.
pub fn ntl_increments(xs: &[f64]) -> Result<Vec<f64>> {
    if let Some(x) = xs.iter().find(|x| !(**x >= 0.0)) {
        return Err(bad_params(format!("entries must be nonnegative, got {x}")));
    }
    let mut sum = 0.0;
    xs.iter()
        .enumerate()
        .map(|(j, &x)| {
            sum += x;
            if sum > 0.0 {
                Ok(x / sum)
            } else {
                Err(Error::ZeroSum(j + 1))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ntl_examples() {
        assert_eq!(ntl_increments(&[1.0, 1.0]).unwrap(), vec![1.0, 0.5]);
        assert_eq!(ntl_increments(&[3.0]).unwrap(), vec![1.0]);
        assert!(matches!(ntl_increments(&[0.0, 1.0]), Err(Error::ZeroSum(1))));
        assert!(ntl_increments(&[-1.0]).is_err());
    }
}
