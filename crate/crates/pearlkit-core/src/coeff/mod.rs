//! Coefficient rings: GF(2), the rationals, Laurent polynomials over either,
//! and the field of rational functions in `t`.

mod field;
mod laurent;
mod linalg;
mod ratfunc;

pub use field::{BaseField, Field, Gf2, Rational, ScalarField};
pub use laurent::LaurentPoly;
pub use linalg::{invert_matrix, mat_vec, rank, rat_solve};
pub use ratfunc::RationalFunction;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoeffError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(&'static str),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("minimal Maslov number must be at least 2, got {0}")]
    MaslovTooSmall(u32),
    #[error("rational {0} has an even denominator and no reduction mod 2")]
    NotReducibleMod2(alloc::string::String),
}

/// Holds the minimal Maslov number `N`; `t` has degree `-N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GradingContext {
    maslov: u32,
}

impl GradingContext {
    pub fn new(maslov: u32) -> Result<Self, CoeffError> {
        if maslov < 2 {
            return Err(CoeffError::MaslovTooSmall(maslov));
        }
        Ok(GradingContext { maslov })
    }

    pub fn maslov(&self) -> u32 {
        self.maslov
    }

    pub fn n(&self) -> i64 {
        i64::from(self.maslov)
    }

    pub fn t_degree(&self) -> i64 {
        -self.n()
    }

    /// Degree of `x t^k` given `|x|`.
    pub fn monomial_degree(&self, base: i64, k: i64) -> i64 {
        base - k * self.n()
    }

    /// The exponent `k` with `base - k N = degree`, if there is one.
    pub fn exponent_for(&self, base: i64, degree: i64) -> Option<i64> {
        let diff = base - degree;
        (diff.rem_euclid(self.n()) == 0).then(|| diff.div_euclid(self.n()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grading_context_rejects_small_maslov() {
        assert_eq!(GradingContext::new(1), Err(CoeffError::MaslovTooSmall(1)));
        assert!(GradingContext::new(0).is_err());
        let c = GradingContext::new(3).unwrap();
        assert_eq!(c.t_degree(), -3);
        assert_eq!(c.monomial_degree(2, 1), -1);
        assert_eq!(c.exponent_for(2, -1), Some(1));
        assert_eq!(c.exponent_for(2, 0), None);
        assert_eq!(c.exponent_for(2, 5), Some(-1));
    }
}
