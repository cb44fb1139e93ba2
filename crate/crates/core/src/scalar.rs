//! Scalar abstractions.
//!
//! Analytic routines (likelihoods, limit pmfs, martingale weights) are generic over
//! [`Real`]; the exact-arithmetic checks use any [`Field`], typically [`crate::Rational`].

use num_traits::{Float, FromPrimitive, Num};
use std::fmt::{Debug, Display};

/// A floating point type with a log-gamma function.
pub trait Real: Float + FromPrimitive + Debug + Display + Default + Send + Sync + 'static {
    fn lgamma(self) -> Self;

    /// Lossy conversion from `f64`, used for literals.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    fn from_count(x: u64) -> Self {
        Self::from_u64(x).expect("count representable")
    }
}

impl Real for f64 {
    fn lgamma(self) -> f64 {
        libm::lgamma(self)
    }
}

impl Real for f32 {
    fn lgamma(self) -> f32 {
        libm::lgammaf(self)
    }
}

/// Exact arithmetic (rationals) for probability checks that must hold without rounding.
pub trait Field: Num + Clone + PartialOrd + FromPrimitive + Debug {}

impl<T> Field for T where T: Num + Clone + PartialOrd + FromPrimitive + Debug {}

/// `ln Γ(a + x) − ln Γ(a)`.
///
/// For large arguments the plain difference of log-gammas loses most of its digits
/// (both terms are about `a ln a`), so a Stirling difference is used there.
pub fn ln_gamma_ratio<S: Real>(a: S, x: S) -> S {
    let ten = S::lit(10.0);
    if a < ten || a + x < ten {
        return (a + x).lgamma() - a.lgamma();
    }
    let half = S::lit(0.5);
    let b = a + x;
    let main = (a - half) * (x / a).ln_1p() + x * b.ln() - x;
    let c1 = (b.recip() - a.recip()) / S::lit(12.0);
    let c3 = (b.powi(3).recip() - a.powi(3).recip()) / S::lit(360.0);
    let c5 = (b.powi(5).recip() - a.powi(5).recip()) / S::lit(1260.0);
    main + c1 - c3 + c5
}

/// `ln B(a, b)`.
pub fn ln_beta<S: Real>(a: S, b: S) -> S {
    a.lgamma() + b.lgamma() - (a + b).lgamma()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_gamma_matches_factorials() {
        let mut fact = 1.0f64;
        for n in 1..20u64 {
            assert!((f64::from_count(n).lgamma() - fact.ln()).abs() < 1e-12);
            fact *= n as f64;
        }
        assert!((0.5f64.lgamma() - std::f64::consts::PI.sqrt().ln()).abs() < 1e-14);
        assert!((0.5f32.lgamma() - std::f32::consts::PI.sqrt().ln()).abs() < 1e-6);
    }

    #[test]
    fn gamma_ratio_agrees_with_direct_difference() {
        for &(a, x) in &[(10.5, 0.3), (12.0, 7.0), (50.0, -3.5), (1e3, 0.25), (20.0, 1e4), (3.0, 30.0)] {
            let direct = libm::lgamma(a + x) - libm::lgamma(a);
            let r: f64 = ln_gamma_ratio(a, x);
            assert!((r - direct).abs() < 1e-11 * direct.abs().max(1.0), "{a} {x}: {r} vs {direct}");
        }
        // Γ(a+1)/Γ(a) = a, at a size where lgamma differences are hopeless.
        let a = 1e12f64;
        assert!((ln_gamma_ratio(a, 1.0) - a.ln()).abs() < 1e-12);
        assert!((ln_gamma_ratio(a, 2.0) - (a * (a + 1.0)).ln()).abs() < 1e-12);
    }

    #[test]
    fn ln_beta_of_ones() {
        assert!(ln_beta(1.0f64, 1.0).abs() < 1e-15);
        assert!((ln_beta(2.0f64, 3.0) - (1.0f64 / 12.0).ln()).abs() < 1e-13);
    }
}
