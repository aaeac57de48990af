use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::CoeffError;

pub type Rational = num_rational::BigRational;

/// Minimal field interface used by every generic routine in the crate.
///
/// Method names avoid `add`/`mul` so they never collide with the operator
/// traits on the implementing types.
pub trait Field: Clone + PartialEq + Eq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    /// `None` exactly for zero.
    fn inverse(&self) -> Option<Self>;
    /// Image of an integer under the unique ring map from Z.
    fn from_i64(n: i64) -> Self;

    fn minus(&self, rhs: &Self) -> Self {
        self.plus(&rhs.negated())
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaseField {
    Gf2,
    Rational,
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BaseField::Gf2 => "gf2",
            BaseField::Rational => "rational",
        })
    }
}

/// A prime or characteristic-zero base field that can be named at runtime.
pub trait ScalarField: Field + fmt::Display {
    const TAG: BaseField;
    /// Reduction to GF(2), when it is defined.
    fn to_gf2(&self) -> Result<Gf2, CoeffError>;
    fn from_rational(q: &Rational) -> Result<Self, CoeffError>;
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Gf2(pub bool);

impl Gf2 {
    pub const ZERO: Gf2 = Gf2(false);
    pub const ONE: Gf2 = Gf2(true);
}

impl fmt::Debug for Gf2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Gf2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.0 { "1" } else { "0" })
    }
}

impl Field for Gf2 {
    fn zero() -> Self {
        Gf2(false)
    }
    fn one() -> Self {
        Gf2(true)
    }
    fn is_zero(&self) -> bool {
        !self.0
    }
    fn plus(&self, rhs: &Self) -> Self {
        Gf2(self.0 ^ rhs.0)
    }
    fn negated(&self) -> Self {
        *self
    }
    fn times(&self, rhs: &Self) -> Self {
        Gf2(self.0 & rhs.0)
    }
    fn inverse(&self) -> Option<Self> {
        self.0.then_some(*self)
    }
    fn from_i64(n: i64) -> Self {
        Gf2(n.rem_euclid(2) == 1)
    }
}

impl ScalarField for Gf2 {
    const TAG: BaseField = BaseField::Gf2;
    fn to_gf2(&self) -> Result<Gf2, CoeffError> {
        Ok(*self)
    }
    fn from_rational(q: &Rational) -> Result<Self, CoeffError> {
        q.to_gf2()
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn inverse(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn from_i64(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
}

impl ScalarField for Rational {
    const TAG: BaseField = BaseField::Rational;
    fn to_gf2(&self) -> Result<Gf2, CoeffError> {
        let two = BigInt::from(2);
        if self.denom().is_even() {
            return Err(CoeffError::NotReducibleMod2(alloc::format!("{self}")));
        }
        // numerator odd and denominator odd means the class is 1
        Ok(Gf2(self.numer().abs().mod_floor(&two).is_one()))
    }
    fn from_rational(q: &Rational) -> Result<Self, CoeffError> {
        Ok(q.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn gf2_arithmetic() {
        let one = Gf2::ONE;
        assert_eq!(one.plus(&one), Gf2::ZERO);
        assert_eq!(one.times(&one), one);
        assert_eq!(Gf2::ZERO.inverse(), None);
        assert_eq!(one.inverse(), Some(one));
        assert_eq!(Gf2::from_i64(-3), one);
        assert_eq!(Gf2::from_i64(4), Gf2::ZERO);
    }

    #[test]
    fn rational_arithmetic() {
        assert_eq!(q(1, 2).plus(&q(1, 3)), q(5, 6));
        assert_eq!(q(2, 3).inverse(), Some(q(3, 2)));
        assert_eq!(<Rational as Field>::zero().inverse(), None);
        assert_eq!(q(1, 2).minus(&q(1, 2)), <Rational as Field>::zero());
    }

    #[test]
    fn reduction_mod_two() {
        assert_eq!(q(3, 5).to_gf2(), Ok(Gf2::ONE));
        assert_eq!(q(-4, 3).to_gf2(), Ok(Gf2::ZERO));
        assert_eq!(q(-1, 1).to_gf2(), Ok(Gf2::ONE));
        assert!(q(1, 2).to_gf2().is_err());
    }
}
