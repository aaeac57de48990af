use alloc::collections::BTreeMap;
use core::fmt;

use super::field::Field;

/// Finite Laurent polynomial in `t`; only nonzero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentPoly<F> {
    terms: BTreeMap<i64, F>,
}

impl<F: Field> Default for LaurentPoly<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Field> LaurentPoly<F> {
    pub fn zero() -> Self {
        LaurentPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: F, exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { terms }
    }

    pub fn t_power(exp: i64) -> Self {
        Self::monomial(F::one(), exp)
    }

    /// Sums the given terms; repeated exponents accumulate.
    pub fn from_terms<I: IntoIterator<Item = (i64, F)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, &c);
        }
        p
    }

    pub fn add_term(&mut self, exp: i64, c: &F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(old) => {
                let s = old.plus(c);
                if s.is_zero() {
                    self.terms.remove(&exp);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(exp, c.clone());
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(F::is_one)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &F)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: i64) -> F {
        self.terms.get(&exp).cloned().unwrap_or_else(F::zero)
    }

    /// Lowest exponent with a nonzero coefficient; `None` stands for the
    /// bottom level of the zero polynomial.
    pub fn filtration_level(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Membership in the positive subring (no negative powers of `t`).
    pub fn is_positive(&self) -> bool {
        self.filtration_level().is_none_or(|e| e >= 0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&e| e == 0)
    }

    pub fn leading_coeff(&self) -> Option<&F> {
        self.terms.values().next_back()
    }

    pub fn plus(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c);
        }
        out
    }

    pub fn negated(&self) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (*e, c.negated())).collect() }
    }

    pub fn minus(&self, rhs: &Self) -> Self {
        self.plus(&rhs.negated())
    }

    pub fn times(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea + eb, &ca.times(cb));
            }
        }
        out
    }

    pub fn scaled(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { terms: self.terms.iter().map(|(e, a)| (*e, a.times(c))).collect() }
    }

    /// Multiplication by `t^k`.
    pub fn shifted(&self, k: i64) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.times(&base);
            }
            base = base.times(&base);
            n >>= 1;
        }
        acc
    }

    /// Splits off the lowest power of `t`: `self = t^s * rest` with `rest`
    /// having a nonzero constant term. Zero gives `(0, 0)`.
    pub fn split_lowest(&self) -> (i64, Self) {
        match self.filtration_level() {
            None => (0, Self::zero()),
            Some(s) => (s, self.shifted(-s)),
        }
    }

    /// Polynomial long division; both operands must be positive and the
    /// divisor nonzero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(self.is_positive() && divisor.is_positive(), "div_rem needs polynomials");
        let d_deg = divisor.max_exponent().expect("division by zero polynomial");
        let d_inv = divisor.leading_coeff().and_then(F::inverse).expect("nonzero leading coefficient");
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(r_deg) = rem.max_exponent() {
            if r_deg < d_deg {
                break;
            }
            let c = rem.leading_coeff().expect("nonzero").times(&d_inv);
            let step = Self::monomial(c, r_deg - d_deg);
            rem = rem.minus(&divisor.times(&step));
            quot = quot.plus(&step);
        }
        (quot, rem)
    }

    /// Monic greatest common divisor of two polynomials; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Self {
        match self.leading_coeff().and_then(F::inverse) {
            Some(inv) => self.scaled(&inv),
            None => self.clone(),
        }
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> LaurentPoly<G> {
        LaurentPoly::from_terms(self.terms.iter().map(|(e, c)| (*e, f(c))))
    }
}

impl<F: Field + fmt::Display> fmt::Display for LaurentPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            match (*e, c.is_one()) {
                (0, _) => write!(f, "{c}")?,
                (_, true) => write!(f, "t^{e}")?,
                (_, false) => write!(f, "{c} t^{e}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{Gf2, Rational};
    use alloc::string::ToString;
    use alloc::vec::Vec;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    type P2 = LaurentPoly<Gf2>;
    type PQ = LaurentPoly<Rational>;

    fn p2(exps: &[i64]) -> P2 {
        P2::from_terms(exps.iter().map(|&e| (e, Gf2::ONE)))
    }

    fn pq(terms: &[(i64, i64)]) -> PQ {
        PQ::from_terms(terms.iter().map(|&(e, c)| (e, Rational::from_integer(BigInt::from(c)))))
    }

    #[test]
    fn squaring_in_characteristic_two() {
        assert_eq!(p2(&[0, 1]).times(&p2(&[0, 1])), p2(&[0, 2]));
    }

    #[test]
    fn identity_and_shift() {
        let p = p2(&[-3, 0, 4]);
        assert_eq!(p.times(&P2::one()), p);
        assert_eq!(p2(&[-1, 0]).times(&P2::t_power(1)), p2(&[0, 1]));
    }

    #[test]
    fn filtration_and_positivity() {
        assert_eq!(p2(&[2, 5]).filtration_level(), Some(2));
        assert_eq!(P2::one().filtration_level(), Some(0));
        assert_eq!(P2::zero().filtration_level(), None);
        assert!(p2(&[0, 3]).is_positive());
        assert!(!p2(&[-1]).is_positive());
        assert!(P2::zero().is_positive());
    }

    #[test]
    fn duplicate_terms_cancel_in_from_terms() {
        assert!(p2(&[3, 3]).is_zero());
    }

    #[test]
    fn division_and_gcd_over_rationals() {
        // (t-1)(t+2) and (t-1)(t+3)
        let a = pq(&[(0, -1), (1, 1)]).times(&pq(&[(0, 2), (1, 1)]));
        let b = pq(&[(0, -1), (1, 1)]).times(&pq(&[(0, 3), (1, 1)]));
        assert_eq!(a.gcd(&b), pq(&[(0, -1), (1, 1)]));
        let (q, r) = a.div_rem(&pq(&[(0, 2), (1, 1)]));
        assert!(r.is_zero());
        assert_eq!(q, pq(&[(0, -1), (1, 1)]));
    }

    #[test]
    fn display_forms() {
        assert_eq!(p2(&[0, 2]).to_string(), "1 + t^2");
        assert_eq!(P2::zero().to_string(), "0");
        assert_eq!(pq(&[(-1, 3)]).to_string(), "3 t^-1");
    }

    fn arb_p2() -> impl Strategy<Value = P2> {
        proptest::collection::vec(-6i64..6, 0..6).prop_map(|v| p2(&v))
    }

    fn arb_pq() -> impl Strategy<Value = PQ> {
        proptest::collection::vec((-4i64..4, -3i64..4), 0..4).prop_map(|v| pq(&v))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn gf2_ring_axioms(a in arb_p2(), b in arb_p2(), c in arb_p2()) {
            prop_assert_eq!(a.times(&b).times(&c), a.times(&b.times(&c)));
            prop_assert_eq!(a.times(&b.plus(&c)), a.times(&b).plus(&a.times(&c)));
            prop_assert_eq!(a.times(&b), b.times(&a));
            prop_assert_eq!(a.plus(&b).times(&a.plus(&b)), a.times(&a).plus(&b.times(&b)));
        }

        #[test]
        fn rational_ring_axioms(a in arb_pq(), b in arb_pq(), c in arb_pq()) {
            prop_assert_eq!(a.times(&b).times(&c), a.times(&b.times(&c)));
            prop_assert_eq!(a.times(&b.plus(&c)), a.times(&b).plus(&a.times(&c)));
            prop_assert!(a.minus(&a).is_zero());
        }

        #[test]
        fn filtration_is_multiplicative(a in arb_pq(), b in arb_pq()) {
            let prod = a.times(&b);
            match (a.filtration_level(), b.filtration_level()) {
                (Some(x), Some(y)) => prop_assert_eq!(prod.filtration_level(), Some(x + y)),
                _ => prop_assert!(prod.is_zero()),
            }
        }

        #[test]
        fn canonical_form_has_no_zero_entries(a in arb_pq(), b in arb_pq()) {
            let s = a.plus(&b);
            let zeros: Vec<_> = s.terms().filter(|(_, c)| Field::is_zero(*c)).collect();
            prop_assert!(zeros.is_empty());
        }
    }
}
