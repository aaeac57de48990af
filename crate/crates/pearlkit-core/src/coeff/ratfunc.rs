use core::fmt;

use super::field::Field;
use super::laurent::LaurentPoly;
use super::CoeffError;

/// Element of `F(t)` kept in a canonical form: the numerator is a Laurent
/// polynomial, the denominator a monic polynomial with nonzero constant term,
/// and the two share no common factor.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalFunction<F> {
    num: LaurentPoly<F>,
    den: LaurentPoly<F>,
}

impl<F: Field> RationalFunction<F> {
    pub fn new(num: LaurentPoly<F>, den: LaurentPoly<F>) -> Result<Self, CoeffError> {
        if den.is_zero() {
            return Err(CoeffError::ZeroDenominator);
        }
        Ok(Self::normalized(num, den))
    }

    pub fn from_laurent(p: LaurentPoly<F>) -> Self {
        Self::normalized(p, LaurentPoly::one())
    }

    pub fn constant(c: F) -> Self {
        Self::from_laurent(LaurentPoly::constant(c))
    }

    pub fn t_power(k: i64) -> Self {
        Self::from_laurent(LaurentPoly::t_power(k))
    }

    fn normalized(num: LaurentPoly<F>, den: LaurentPoly<F>) -> Self {
        if num.is_zero() {
            return RationalFunction { num, den: LaurentPoly::one() };
        }
        let (s, n0) = num.split_lowest();
        let (r, d0) = den.split_lowest();
        let g = n0.gcd(&d0);
        let (n1, _) = n0.div_rem(&g);
        let (d1, _) = d0.div_rem(&g);
        let inv = d1.leading_coeff().and_then(F::inverse).expect("denominator is nonzero");
        RationalFunction { num: n1.scaled(&inv).shifted(s - r), den: d1.scaled(&inv) }
    }

    pub fn numerator(&self) -> &LaurentPoly<F> {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly<F> {
        &self.den
    }

    /// The Laurent polynomial this equals, when the denominator is 1.
    pub fn as_laurent(&self) -> Option<&LaurentPoly<F>> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn into_laurent(self) -> Option<LaurentPoly<F>> {
        self.den.is_one().then_some(self.num)
    }
}

impl<F: Field> Field for RationalFunction<F> {
    fn zero() -> Self {
        RationalFunction { num: LaurentPoly::zero(), den: LaurentPoly::one() }
    }
    fn one() -> Self {
        RationalFunction { num: LaurentPoly::one(), den: LaurentPoly::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn plus(&self, rhs: &Self) -> Self {
        if self.den == rhs.den {
            return Self::normalized(self.num.plus(&rhs.num), self.den.clone());
        }
        Self::normalized(self.num.times(&rhs.den).plus(&rhs.num.times(&self.den)), self.den.times(&rhs.den))
    }
    fn negated(&self) -> Self {
        RationalFunction { num: self.num.negated(), den: self.den.clone() }
    }
    fn times(&self, rhs: &Self) -> Self {
        Self::normalized(self.num.times(&rhs.num), self.den.times(&rhs.den))
    }
    fn inverse(&self) -> Option<Self> {
        (!self.is_zero()).then(|| Self::normalized(self.den.clone(), self.num.clone()))
    }
    fn from_i64(n: i64) -> Self {
        Self::constant(F::from_i64(n))
    }
}

impl<F: Field + fmt::Display> fmt::Display for RationalFunction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{Gf2, Rational};
    use num_bigint::BigInt;
    use proptest::prelude::*;

    type RQ = RationalFunction<Rational>;
    type R2 = RationalFunction<Gf2>;

    fn pq(terms: &[(i64, i64)]) -> LaurentPoly<Rational> {
        LaurentPoly::from_terms(terms.iter().map(|&(e, c)| (e, Rational::from_integer(BigInt::from(c)))))
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(RQ::new(pq(&[(0, 1)]), LaurentPoly::zero()), Err(CoeffError::ZeroDenominator));
    }

    #[test]
    fn canonical_form_cancels_common_factors() {
        // (t^2 - 1) / (2t - 2) = (t + 1) / 2
        let f = RQ::new(pq(&[(0, -1), (2, 1)]), pq(&[(0, -2), (1, 2)])).unwrap();
        assert_eq!(f.denominator(), &LaurentPoly::one());
        assert_eq!(f.as_laurent().unwrap(), &pq(&[(0, 1), (1, 1)]).scaled(&Rational::new(1.into(), 2.into())));
    }

    #[test]
    fn t_powers_move_to_numerator() {
        let f = RQ::new(pq(&[(0, 1)]), pq(&[(3, 1)])).unwrap();
        assert_eq!(f.as_laurent().unwrap(), &pq(&[(-3, 1)]));
        let g = RQ::new(pq(&[(2, 1)]), pq(&[(1, 1), (2, 1)])).unwrap();
        // t^2 / (t + t^2) = t / (1 + t)
        assert_eq!(g.numerator(), &pq(&[(1, 1)]));
        assert_eq!(g.denominator(), &pq(&[(0, 1), (1, 1)]));
    }

    #[test]
    fn gf2_inverse_of_one_plus_t() {
        let f = R2::from_laurent(LaurentPoly::from_terms([(0, Gf2::ONE), (1, Gf2::ONE)]));
        let inv = f.inverse().unwrap();
        assert!(inv.as_laurent().is_none());
        assert_eq!(inv.times(&f), R2::one());
    }

    fn arb_rf() -> impl Strategy<Value = RQ> {
        let poly = proptest::collection::vec((-2i64..3, -3i64..4), 0..3).prop_map(|v| pq(&v));
        (poly.clone(), poly).prop_filter_map("nonzero denominator", |(n, d)| RQ::new(n, d).ok())
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb_rf(), b in arb_rf(), c in arb_rf()) {
            prop_assert_eq!(a.times(&b).times(&c), a.times(&b.times(&c)));
            prop_assert_eq!(a.times(&b.plus(&c)), a.times(&b).plus(&a.times(&c)));
            prop_assert_eq!(a.plus(&b), b.plus(&a));
            if let Some(inv) = a.inverse() {
                prop_assert_eq!(inv.times(&a), RQ::one());
            }
        }
    }
}
