use crate::error::{bad_params, Result};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

/// The attachment offset α; a vertex of degree `c` has weight `c − α`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams<S = f64> {
    alpha: S,
}

impl<S: Real> ModelParams<S> {
    pub fn new(alpha: S) -> Result<Self> {
        if !alpha.is_finite() || alpha >= S::one() {
            return Err(bad_params(format!("alpha must be finite and < 1, got {alpha}")));
        }
        Ok(ModelParams { alpha })
    }

    pub fn alpha(&self) -> S {
        self.alpha
    }

    pub fn cast<T: Real>(&self) -> ModelParams<T> {
        ModelParams { alpha: T::from(self.alpha).expect("alpha representable") }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_below_one() {
        assert!(ModelParams::new(0.999f64).is_ok());
        assert!(ModelParams::new(-5.0f64).is_ok());
        assert!(ModelParams::new(1.0f64).is_err());
        assert!(ModelParams::new(f64::NAN).is_err());
        assert_eq!(ModelParams::new(0.5f64).unwrap().cast::<f32>().alpha(), 0.5f32);
    }
}
