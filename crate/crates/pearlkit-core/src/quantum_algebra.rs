//! Finitely presented graded algebras over the positive Novikov ring, module
//! actions of an ambient algebra on a Lagrangian one, and the inclusion map.
//!
//! Structure constants are stored per pair of basis elements as formal sums
//! `sum c e_k t^e`. Questions about invertibility are answered over the
//! rational-function field `F(t)`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coeff::{
    invert_matrix, rank, rat_solve, CoeffError, Field, Gf2, GradingContext, LaurentPoly, RationalFunction, ScalarField,
};
use crate::pearl_complex::{Generator, PearlComplex};
use crate::sample::{below, range_i64};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error("duplicate basis element `{0}`")]
    DuplicateBasis(String),
    #[error("unknown basis element `{0}`")]
    UnknownBasis(String),
    #[error("product `{0} * {1}` given twice")]
    DuplicateProduct(String, String),
    #[error("entry for `{0}` given twice")]
    DuplicateEntry(String),
    #[error("no unit declared")]
    MissingUnit,
    #[error("unit `{name}` has degree {degree}, expected the top degree {top}")]
    UnitDegree { name: String, degree: i64, top: i64 },
    #[error("negative exponent in a structure constant of `{0}`")]
    NegativeExponent(String),
    #[error("no augmentation supplied")]
    MissingAugmentation,
    #[error("basis element `{0}` has odd degree")]
    OddDegree(String),
    #[error("the intersection pairing is degenerate")]
    DegeneratePairing,
    #[error("the element is zero")]
    ZeroElement,
    #[error("ambient and Lagrangian algebras use different Maslov numbers")]
    ContextMismatch,
    #[error("complex and algebra disagree: {0}")]
    Mismatch(String),
}

/// Finite sum `sum c e_i t^e` with nonzero coefficients; exponents may be
/// negative (Laurent ring).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Element<F> {
    terms: BTreeMap<(usize, i64), F>,
}

impl<F: Field> Default for Element<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Field> Element<F> {
    pub fn zero() -> Self {
        Element { terms: BTreeMap::new() }
    }

    pub fn basis(i: usize) -> Self {
        Self::term(F::one(), i, 0)
    }

    pub fn term(c: F, i: usize, exp: i64) -> Self {
        let mut e = Self::zero();
        e.add_term(i, exp, &c);
        e
    }

    pub fn from_terms<I: IntoIterator<Item = (F, usize, i64)>>(terms: I) -> Self {
        let mut e = Self::zero();
        for (c, i, x) in terms {
            e.add_term(i, x, &c);
        }
        e
    }

    pub fn add_term(&mut self, i: usize, exp: i64, c: &F) {
        if c.is_zero() {
            return;
        }
        let key = (i, exp);
        let sum = match self.terms.get(&key) {
            Some(old) => old.plus(c),
            None => c.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, i64, &F)> + '_ {
        self.terms.iter().map(|((i, e), c)| (*i, *e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: usize, exp: i64) -> F {
        self.terms.get(&(i, exp)).cloned().unwrap_or_else(F::zero)
    }

    pub fn plus(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for ((i, e), c) in &rhs.terms {
            out.add_term(*i, *e, c);
        }
        out
    }

    pub fn negated(&self) -> Self {
        Element { terms: self.terms.iter().map(|(k, c)| (*k, c.negated())).collect() }
    }

    pub fn minus(&self, rhs: &Self) -> Self {
        self.plus(&rhs.negated())
    }

    pub fn scaled(&self, c: &F) -> Self {
        Element::from_terms(self.terms.iter().map(|((i, e), a)| (a.times(c), *i, *e)))
    }

    pub fn shifted(&self, k: i64) -> Self {
        Element { terms: self.terms.iter().map(|((i, e), c)| ((*i, e + k), c.clone())).collect() }
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().map(|(_, e)| *e).min()
    }

    pub fn is_positive(&self) -> bool {
        self.min_exponent().is_none_or(|e| e >= 0)
    }

    /// Coefficient of basis element `i` as a Laurent polynomial.
    pub fn component(&self, i: usize) -> LaurentPoly<F> {
        LaurentPoly::from_terms(self.terms.iter().filter(|((b, _), _)| *b == i).map(|((_, e), c)| (*e, c.clone())))
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> Result<G, CoeffError>) -> Result<Element<G>, CoeffError> {
        let mut out = Element::zero();
        for ((i, e), c) in &self.terms {
            out.add_term(*i, *e, &f(c)?);
        }
        Ok(out)
    }
}

/// Minimal `t`-power part: `(k, head)` with `x = head t^k + higher terms`.
pub fn leading_order<F: Field>(x: &Element<F>) -> Result<(i64, Element<F>), AlgebraError> {
    let k = x.min_exponent().ok_or(AlgebraError::ZeroElement)?;
    let head = Element::from_terms(x.terms().filter(|(_, e, _)| *e == k).map(|(i, _, c)| (c.clone(), i, 0)));
    Ok((k, head))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantumAlgebra<F> {
    name: String,
    ctx: GradingContext,
    top: i64,
    basis: Vec<Generator>,
    index: BTreeMap<String, usize>,
    unit: usize,
    mul: Vec<Vec<Element<F>>>,
    aug: Option<Vec<F>>,
}

#[derive(Debug, Clone)]
pub struct AlgebraBuilder<F> {
    name: String,
    ctx: GradingContext,
    top: i64,
    basis: Vec<Generator>,
    index: BTreeMap<String, usize>,
    unit: Option<usize>,
    mul: BTreeMap<(usize, usize), Element<F>>,
    aug: BTreeMap<usize, F>,
    has_aug: bool,
}

impl<F: Field> AlgebraBuilder<F> {
    pub fn basis(&mut self, name: &str, degree: i64) -> Result<usize, AlgebraError> {
        if self.index.contains_key(name) {
            return Err(AlgebraError::DuplicateBasis(name.to_string()));
        }
        let id = self.basis.len();
        self.basis.push(Generator { name: name.to_string(), degree });
        self.index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn lookup(&self, name: &str) -> Result<usize, AlgebraError> {
        self.index.get(name).copied().ok_or_else(|| AlgebraError::UnknownBasis(name.to_string()))
    }

    pub fn unit(&mut self, name: &str) -> Result<(), AlgebraError> {
        self.unit = Some(self.lookup(name)?);
        Ok(())
    }

    pub fn product(&mut self, a: &str, b: &str, value: Element<F>) -> Result<(), AlgebraError> {
        let key = (self.lookup(a)?, self.lookup(b)?);
        if self.mul.insert(key, value).is_some() {
            return Err(AlgebraError::DuplicateProduct(a.to_string(), b.to_string()));
        }
        Ok(())
    }

    /// Product given as `(coefficient, basis name, exponent)` triples.
    pub fn product_terms(&mut self, a: &str, b: &str, terms: &[(F, &str, i64)]) -> Result<(), AlgebraError> {
        let value = self.element(terms)?;
        self.product(a, b, value)
    }

    pub fn element(&self, terms: &[(F, &str, i64)]) -> Result<Element<F>, AlgebraError> {
        let mut e = Element::zero();
        for (c, n, x) in terms {
            e.add_term(self.lookup(n)?, *x, c);
        }
        Ok(e)
    }

    pub fn aug(&mut self, name: &str, value: F) -> Result<(), AlgebraError> {
        let id = self.lookup(name)?;
        self.has_aug = true;
        if self.aug.insert(id, value).is_some() {
            return Err(AlgebraError::DuplicateEntry(name.to_string()));
        }
        Ok(())
    }

    /// Declares an explicit augmentation that is zero everywhere unless set.
    pub fn explicit_aug(&mut self) {
        self.has_aug = true;
    }

    pub fn build(self) -> Result<QuantumAlgebra<F>, AlgebraError> {
        let unit = self.unit.ok_or(AlgebraError::MissingUnit)?;
        let u = &self.basis[unit];
        if u.degree != self.top {
            return Err(AlgebraError::UnitDegree { name: u.name.clone(), degree: u.degree, top: self.top });
        }
        let n = self.basis.len();
        let mut mul = vec![vec![Element::zero(); n]; n];
        for ((a, b), v) in self.mul {
            if !v.is_positive() {
                return Err(AlgebraError::NegativeExponent(format!("{} * {}", self.basis[a].name, self.basis[b].name)));
            }
            mul[a][b] = v;
        }
        let aug = self.has_aug.then(|| (0..n).map(|i| self.aug.get(&i).cloned().unwrap_or_else(F::zero)).collect());
        Ok(QuantumAlgebra {
            name: self.name,
            ctx: self.ctx,
            top: self.top,
            basis: self.basis,
            index: self.index,
            unit,
            mul,
            aug,
        })
    }
}

/// Diagnostics from [`QuantumAlgebra::verify_algebra`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AlgebraReport {
    /// `(i, j)` products with a term of the wrong degree.
    pub homogeneity: Vec<(usize, usize)>,
    /// Basis elements `x` with `1 * x != x` or `x * 1 != x`.
    pub unit: Vec<usize>,
    /// Triples `(i, j, k)` with `(e_i e_j) e_k != e_i (e_j e_k)`.
    pub associativity: Vec<(usize, usize, usize)>,
    pub commutative: bool,
}

impl AlgebraReport {
    pub fn passes(&self) -> bool {
        self.homogeneity.is_empty() && self.unit.is_empty() && self.associativity.is_empty()
    }
}

/// Outcome of a search for an invertible element of one pure degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InvertibleSearch<F> {
    Yes(Element<F>),
    /// Nothing found; `exhaustive` tells whether every 0/1 combination of the
    /// slice monomials was tried (for GF(2) that settles the question).
    ProbablyNo {
        exhaustive: bool,
        tried: usize,
    },
}

/// Monomial count up to which the 0/1 search is exhaustive.
pub const EXHAUSTIVE_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerClass<F> {
    pub element: Element<F>,
    pub degree_zero: bool,
    pub basis_independent: bool,
}

impl<F: ScalarField> QuantumAlgebra<F> {
    pub fn builder(name: &str, maslov: u32, top: i64) -> Result<AlgebraBuilder<F>, AlgebraError> {
        Ok(AlgebraBuilder {
            name: name.to_string(),
            ctx: GradingContext::new(maslov)?,
            top,
            basis: Vec::new(),
            index: BTreeMap::new(),
            unit: None,
            mul: BTreeMap::new(),
            aug: BTreeMap::new(),
            has_aug: false,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ctx(&self) -> GradingContext {
        self.ctx
    }

    pub fn top(&self) -> i64 {
        self.top
    }

    pub fn basis(&self) -> &[Generator] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn unit_element(&self) -> Element<F> {
        Element::basis(self.unit)
    }

    pub fn lookup(&self, name: &str) -> Result<usize, AlgebraError> {
        self.index.get(name).copied().ok_or_else(|| AlgebraError::UnknownBasis(name.to_string()))
    }

    pub fn element(&self, terms: &[(F, &str, i64)]) -> Result<Element<F>, AlgebraError> {
        let mut e = Element::zero();
        for (c, n, x) in terms {
            e.add_term(self.lookup(n)?, *x, c);
        }
        Ok(e)
    }

    pub fn basis_element(&self, name: &str) -> Result<Element<F>, AlgebraError> {
        Ok(Element::basis(self.lookup(name)?))
    }

    pub fn structure_constant(&self, i: usize, j: usize) -> &Element<F> {
        &self.mul[i][j]
    }

    pub fn explicit_aug(&self) -> Option<&[F]> {
        self.aug.as_deref()
    }

    /// The augmentation: explicit if supplied, else 1 on degree-0 basis elements.
    pub fn augmentation(&self) -> Vec<F> {
        match &self.aug {
            Some(a) => a.clone(),
            None => self.basis.iter().map(|b| if b.degree == 0 { F::one() } else { F::zero() }).collect(),
        }
    }

    pub fn epsilon(&self, x: &Element<F>) -> LaurentPoly<F> {
        let aug = self.augmentation();
        LaurentPoly::from_terms(x.terms().map(|(i, e, c)| (e, c.times(&aug[i]))))
    }

    pub fn multiply(&self, a: &Element<F>, b: &Element<F>) -> Element<F> {
        let mut out = Element::zero();
        for (i, ei, ci) in a.terms() {
            for (j, ej, cj) in b.terms() {
                let c = ci.times(cj);
                for (k, ek, ck) in self.mul[i][j].terms() {
                    out.add_term(k, ei + ej + ek, &c.times(ck));
                }
            }
        }
        out
    }

    pub fn power(&self, a: &Element<F>, n: u32) -> Element<F> {
        let mut acc = self.unit_element();
        for _ in 0..n {
            acc = self.multiply(&acc, a);
        }
        acc
    }

    /// Degree of `e_i t^e`.
    pub fn term_degree(&self, i: usize, exp: i64) -> i64 {
        self.ctx.monomial_degree(self.basis[i].degree, exp)
    }

    /// The single degree of a homogeneous element, `None` if zero or mixed.
    pub fn pure_degree(&self, x: &Element<F>) -> Option<i64> {
        let mut degs = x.terms().map(|(i, e, _)| self.term_degree(i, e));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn verify_algebra(&self) -> AlgebraReport {
        let n = self.dim();
        let mut report = AlgebraReport { commutative: true, ..AlgebraReport::default() };
        for i in 0..n {
            for j in 0..n {
                let want = self.basis[i].degree + self.basis[j].degree - self.top;
                if self.mul[i][j].terms().any(|(k, e, _)| self.term_degree(k, e) != want || e < 0) {
                    report.homogeneity.push((i, j));
                }
                if self.mul[i][j] != self.mul[j][i] {
                    report.commutative = false;
                }
            }
        }
        let u = self.unit_element();
        for x in 0..n {
            let e = Element::basis(x);
            if self.multiply(&u, &e) != e || self.multiply(&e, &u) != e {
                report.unit.push(x);
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ij = &self.mul[i][j];
                for k in 0..n {
                    let left = self.multiply(ij, &Element::basis(k));
                    let right = self.multiply(&Element::basis(i), &self.mul[j][k]);
                    if left != right {
                        report.associativity.push((i, j, k));
                    }
                }
            }
        }
        report
    }

    /// Nondegeneracy of `(e_i, e_j) -> eps(e_i * e_j)` over `F(t)`; needs an
    /// explicit augmentation.
    pub fn frobenius_check(&self) -> Result<bool, AlgebraError> {
        if self.aug.is_none() {
            return Err(AlgebraError::MissingAugmentation);
        }
        let n = self.dim();
        let m: Vec<Vec<RationalFunction<F>>> = (0..n)
            .map(|i| (0..n).map(|j| RationalFunction::from_laurent(self.epsilon(&self.mul[i][j]))).collect())
            .collect();
        Ok(rank(&m)? == n)
    }

    pub fn to_coords(&self, x: &Element<F>) -> Vec<RationalFunction<F>> {
        (0..self.dim()).map(|i| RationalFunction::from_laurent(x.component(i))).collect()
    }

    /// Converts coordinates back to an element when every entry is Laurent.
    pub fn from_coords(&self, v: &[RationalFunction<F>]) -> Option<Element<F>> {
        let mut out = Element::zero();
        for (i, c) in v.iter().enumerate() {
            for (e, a) in c.as_laurent()?.terms() {
                out.add_term(i, e, a);
            }
        }
        Some(out)
    }

    /// Product of coordinate vectors over `F(t)`.
    pub fn multiply_coords(&self, a: &[RationalFunction<F>], b: &[RationalFunction<F>]) -> Vec<RationalFunction<F>> {
        let n = self.dim();
        let mut out = vec![RationalFunction::zero(); n];
        for i in 0..n {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if b[j].is_zero() {
                    continue;
                }
                let c = a[i].times(&b[j]);
                for (k, e, ck) in self.mul[i][j].terms() {
                    let term = RationalFunction::from_laurent(LaurentPoly::monomial(ck.clone(), e)).times(&c);
                    out[k] = out[k].plus(&term);
                }
            }
        }
        out
    }

    /// Matrix of `y -> x * y` (column `j` is `x * e_j`).
    pub fn left_mult_matrix(&self, x: &Element<F>) -> Vec<Vec<RationalFunction<F>>> {
        let n = self.dim();
        let cols: Vec<Vec<RationalFunction<F>>> =
            (0..n).map(|j| self.to_coords(&self.multiply(x, &Element::basis(j)))).collect();
        (0..n).map(|r| (0..n).map(|c| cols[c][r].clone()).collect()).collect()
    }

    /// Two-sided inverse over `F(t)`, as coordinates.
    pub fn invert(&self, x: &Element<F>) -> Option<Vec<RationalFunction<F>>> {
        let m = self.left_mult_matrix(x);
        let unit = self.to_coords(&self.unit_element());
        let y = rat_solve(&m, &unit).ok()??;
        let xc = self.to_coords(x);
        (self.multiply_coords(&y, &xc) == unit).then_some(y)
    }

    pub fn is_invertible(&self, x: &Element<F>) -> bool {
        self.invert(x).is_some()
    }

    /// Inverse as an element, when it has Laurent-polynomial coordinates.
    pub fn invert_laurent(&self, x: &Element<F>) -> Option<Element<F>> {
        self.from_coords(&self.invert(x)?)
    }

    fn derived_pairing(&self) -> Vec<Vec<F>> {
        let aug = self.augmentation();
        let n = self.dim();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        self.mul[i][j]
                            .terms()
                            .filter(|(_, e, _)| *e == 0)
                            .fold(F::zero(), |acc, (k, _, c)| acc.plus(&c.times(&aug[k])))
                    })
                    .collect()
            })
            .collect()
    }

    /// `sum_i e_i * e_i^#`, with `#` the dual basis for the classical
    /// intersection pairing (supplied, or read off from the `t^0` part of
    /// `eps(e_i * e_j)`), checked for pure degree 0 and recomputed in a random
    /// degree-preserving basis.
    pub fn quantum_euler(&self, pairing: Option<&[Vec<F>]>) -> Result<EulerClass<F>, AlgebraError> {
        if let Some(b) = self.basis.iter().find(|b| b.degree % 2 != 0) {
            return Err(AlgebraError::OddDegree(b.name.clone()));
        }
        let n = self.dim();
        let p: Vec<Vec<F>> = match pairing {
            Some(p) => {
                if p.len() != n || p.iter().any(|r| r.len() != n) {
                    return Err(CoeffError::DimensionMismatch("pairing matrix shape").into());
                }
                p.to_vec()
            }
            None => self.derived_pairing(),
        };
        let basis: Vec<Element<F>> = (0..n).map(Element::basis).collect();
        let element = self.euler_in_basis(&basis, &p)?;
        let degree_zero = element.terms().all(|(i, e, _)| self.term_degree(i, e) == 0);

        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let change = self.random_graded_basis(&mut rng);
        let new_pairing: Vec<Vec<F>> =
            (0..n).map(|a| (0..n).map(|b| bilinear(&p, &change[a], &change[b])).collect()).collect();
        let new_basis: Vec<Element<F>> = change
            .iter()
            .map(|col| Element::from_terms(col.iter().enumerate().map(|(i, c)| (c.clone(), i, 0))))
            .collect();
        let other = self.euler_in_basis(&new_basis, &new_pairing)?;
        Ok(EulerClass { basis_independent: other == element, element, degree_zero })
    }

    fn euler_in_basis(&self, basis: &[Element<F>], pairing: &[Vec<F>]) -> Result<Element<F>, AlgebraError> {
        let inv = invert_matrix(pairing)?.ok_or(AlgebraError::DegeneratePairing)?;
        let mut out = Element::zero();
        for (i, bi) in basis.iter().enumerate() {
            for (k, bk) in basis.iter().enumerate() {
                let c = &inv[k][i];
                if !c.is_zero() {
                    out = out.plus(&self.multiply(bi, bk).scaled(c));
                }
            }
        }
        Ok(out)
    }

    /// Columns of a random invertible matrix that only mixes basis elements
    /// of equal degree.
    fn random_graded_basis(&self, rng: &mut ChaCha8Rng) -> Vec<Vec<F>> {
        let n = self.dim();
        let mut cols = vec![vec![F::zero(); n]; n];
        let mut degrees: Vec<i64> = self.basis.iter().map(|b| b.degree).collect();
        degrees.sort_unstable();
        degrees.dedup();
        for d in degrees {
            let idx: Vec<usize> = (0..n).filter(|&i| self.basis[i].degree == d).collect();
            loop {
                let block: Vec<Vec<F>> =
                    idx.iter().map(|_| idx.iter().map(|_| F::from_i64(range_i64(rng, -2, 3))).collect()).collect();
                if rank(&block).unwrap_or(0) == idx.len() {
                    for (a, &ia) in idx.iter().enumerate() {
                        for (b, &ib) in idx.iter().enumerate() {
                            cols[ia][ib] = block[a][b].clone();
                        }
                    }
                    break;
                }
            }
        }
        cols
    }

    pub fn is_semisimple(&self, pairing: Option<&[Vec<F>]>) -> Result<bool, AlgebraError> {
        let e = self.quantum_euler(pairing)?;
        Ok(self.is_invertible(&e.element))
    }

    /// Monomials `e_i t^k` of total degree `l` (one per eligible basis element).
    pub fn degree_slice(&self, l: i64) -> Vec<(usize, i64)> {
        (0..self.dim()).filter_map(|i| self.ctx.exponent_for(self.basis[i].degree, l).map(|k| (i, k))).collect()
    }

    /// Looks for an invertible element of pure degree `l`.
    pub fn has_invertible_of_degree(&self, l: i64, samples: usize) -> InvertibleSearch<F> {
        let slice = self.degree_slice(l);
        let m = slice.len();
        let mut tried = 0;
        let build = |coeffs: &[F]| Element::from_terms(slice.iter().zip(coeffs).map(|(&(i, k), c)| (c.clone(), i, k)));
        let exhaustive = m <= EXHAUSTIVE_LIMIT;
        if exhaustive {
            for mask in 1u32..(1u32 << m) {
                let coeffs: Vec<F> = (0..m).map(|b| if mask >> b & 1 == 1 { F::one() } else { F::zero() }).collect();
                let x = build(&coeffs);
                tried += 1;
                if self.is_invertible(&x) {
                    return InvertibleSearch::Yes(x);
                }
            }
        }
        if m > 0 && (!exhaustive || F::TAG != crate::coeff::BaseField::Gf2) {
            let mut rng = ChaCha8Rng::seed_from_u64(0x1417 ^ l as u64);
            for _ in 0..samples {
                let coeffs: Vec<F> = (0..m)
                    .map(|_| match F::TAG {
                        crate::coeff::BaseField::Gf2 => F::from_i64(below(&mut rng, 2) as i64),
                        crate::coeff::BaseField::Rational => F::from_i64(range_i64(&mut rng, -5, 5)),
                    })
                    .collect();
                let x = build(&coeffs);
                if x.is_zero() {
                    continue;
                }
                tried += 1;
                if self.is_invertible(&x) {
                    return InvertibleSearch::Yes(x);
                }
            }
        }
        InvertibleSearch::ProbablyNo { exhaustive, tried }
    }

    /// Applies `f` to every coefficient (for example reduction mod 2).
    pub fn map_coeffs<G: ScalarField>(
        &self,
        f: impl Fn(&F) -> Result<G, CoeffError>,
    ) -> Result<QuantumAlgebra<G>, AlgebraError> {
        let mul = self
            .mul
            .iter()
            .map(|row| row.iter().map(|e| e.map(&f)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let aug = match &self.aug {
            Some(a) => Some(a.iter().map(&f).collect::<Result<Vec<_>, _>>()?),
            None => None,
        };
        Ok(QuantumAlgebra {
            name: self.name.clone(),
            ctx: self.ctx,
            top: self.top,
            basis: self.basis.clone(),
            index: self.index.clone(),
            unit: self.unit,
            mul,
            aug,
        })
    }

    pub fn reduce_mod2(&self) -> Result<QuantumAlgebra<Gf2>, AlgebraError> {
        self.map_coeffs(|c| c.to_gf2())
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn format_element(&self, x: &Element<F>) -> String {
        format_element(&self.basis, x)
    }
}

fn bilinear<F: Field>(p: &[Vec<F>], a: &[F], b: &[F]) -> F {
    let mut acc = F::zero();
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            acc = acc.plus(&ai.times(bj).times(&p[i][j]));
        }
    }
    acc
}

/// Renders `c name t^k + ...`; coefficient 1 and `t^0` are left out.
pub fn format_element<F: Field + fmt::Display>(basis: &[Generator], x: &Element<F>) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let parts: Vec<String> = x
        .terms()
        .map(|(i, e, c)| {
            let mut s = String::new();
            if !c.is_one() {
                s.push_str(&c.to_string());
                s.push(' ');
            }
            s.push_str(&basis[i].name);
            if e != 0 {
                s.push_str(&format!(" t^{e}"));
            }
            s
        })
        .collect();
    parts.join(" + ")
}

/// An ambient algebra acting on a Lagrangian algebra, with an optional
/// inclusion map and classical intersection pairing on the ambient side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleAction<F> {
    pub name: String,
    pub ambient: QuantumAlgebra<F>,
    pub lagr: QuantumAlgebra<F>,
    act: Vec<Vec<Element<F>>>,
    incl: Option<Vec<Element<F>>>,
    pair: Option<Vec<Vec<F>>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModuleReport {
    pub homogeneity: Vec<String>,
    pub associativity: Vec<String>,
    pub unit: Vec<String>,
    pub two_sided: Vec<String>,
    pub inclusion: Vec<String>,
    pub pairing: Vec<String>,
}

impl ModuleReport {
    pub fn passes(&self) -> bool {
        self.homogeneity.is_empty()
            && self.associativity.is_empty()
            && self.unit.is_empty()
            && self.two_sided.is_empty()
            && self.inclusion.is_empty()
            && self.pairing.is_empty()
    }
}

impl<F: ScalarField> ModuleAction<F> {
    pub fn new(name: &str, ambient: QuantumAlgebra<F>, lagr: QuantumAlgebra<F>) -> Result<Self, AlgebraError> {
        if ambient.ctx != lagr.ctx {
            return Err(AlgebraError::ContextMismatch);
        }
        let act = vec![vec![Element::zero(); lagr.dim()]; ambient.dim()];
        Ok(ModuleAction { name: name.to_string(), ambient, lagr, act, incl: None, pair: None })
    }

    pub fn set_act(&mut self, a: &str, x: &str, value: Element<F>) -> Result<(), AlgebraError> {
        let (i, j) = (self.ambient.lookup(a)?, self.lagr.lookup(x)?);
        if !self.act[i][j].is_zero() {
            return Err(AlgebraError::DuplicateProduct(a.to_string(), x.to_string()));
        }
        if !value.is_positive() {
            return Err(AlgebraError::NegativeExponent(format!("{a} * {x}")));
        }
        self.act[i][j] = value;
        Ok(())
    }

    pub fn act_terms(&mut self, a: &str, x: &str, terms: &[(F, &str, i64)]) -> Result<(), AlgebraError> {
        let v = self.lagr.element(terms)?;
        self.set_act(a, x, v)
    }

    pub fn set_incl(&mut self, x: &str, value: Element<F>) -> Result<(), AlgebraError> {
        let j = self.lagr.lookup(x)?;
        let n = self.lagr.dim();
        let incl = self.incl.get_or_insert_with(|| vec![Element::zero(); n]);
        if !incl[j].is_zero() {
            return Err(AlgebraError::DuplicateEntry(x.to_string()));
        }
        incl[j] = value;
        Ok(())
    }

    pub fn incl_terms(&mut self, x: &str, terms: &[(F, &str, i64)]) -> Result<(), AlgebraError> {
        let v = self.ambient.element(terms)?;
        self.set_incl(x, v)
    }

    /// Marks the inclusion as present even if every value is zero.
    pub fn declare_incl(&mut self) {
        let n = self.lagr.dim();
        self.incl.get_or_insert_with(|| vec![Element::zero(); n]);
    }

    pub fn set_pair(&mut self, a: &str, b: &str, value: F) -> Result<(), AlgebraError> {
        let (i, j) = (self.ambient.lookup(a)?, self.ambient.lookup(b)?);
        let n = self.ambient.dim();
        let pair = self.pair.get_or_insert_with(|| vec![vec![F::zero(); n]; n]);
        if !pair[i][j].is_zero() {
            return Err(AlgebraError::DuplicateEntry(format!("{a} . {b}")));
        }
        pair[i][j] = value;
        Ok(())
    }

    pub fn act_entry(&self, a: usize, x: usize) -> &Element<F> {
        &self.act[a][x]
    }

    pub fn incl(&self) -> Option<&[Element<F>]> {
        self.incl.as_deref()
    }

    pub fn pair(&self) -> Option<&[Vec<F>]> {
        self.pair.as_deref()
    }

    /// `a * x` for an ambient element `a` and a Lagrangian element `x`.
    pub fn act(&self, a: &Element<F>, x: &Element<F>) -> Element<F> {
        let mut out = Element::zero();
        for (i, ei, ci) in a.terms() {
            for (j, ej, cj) in x.terms() {
                let c = ci.times(cj);
                for (k, ek, ck) in self.act[i][j].terms() {
                    out.add_term(k, ei + ej + ek, &c.times(ck));
                }
            }
        }
        out
    }

    pub fn include(&self, x: &Element<F>) -> Option<Element<F>> {
        let incl = self.incl.as_ref()?;
        let mut out = Element::zero();
        for (j, ej, cj) in x.terms() {
            out = out.plus(&incl[j].shifted(ej).scaled(cj));
        }
        Some(out)
    }

    /// Matrix of `x -> a * x` on the Lagrangian side over `F(t)`.
    pub fn act_matrix(&self, a: &Element<F>) -> Vec<Vec<RationalFunction<F>>> {
        let n = self.lagr.dim();
        let cols: Vec<Vec<RationalFunction<F>>> =
            (0..n).map(|j| self.lagr.to_coords(&self.act(a, &Element::basis(j)))).collect();
        (0..n).map(|r| (0..n).map(|c| cols[c][r].clone()).collect()).collect()
    }

    /// Whether `x -> a * x` is an isomorphism of the Lagrangian module.
    pub fn acts_invertibly(&self, a: &Element<F>) -> bool {
        rank(&self.act_matrix(a)).is_ok_and(|r| r == self.lagr.dim())
    }

    pub fn verify_module(&self) -> ModuleReport {
        let mut r = ModuleReport::default();
        let (am, la) = (&self.ambient, &self.lagr);
        let an = |i: usize| am.basis[i].name.as_str();
        let ln = |i: usize| la.basis[i].name.as_str();
        let shift = am.top;
        for a in 0..am.dim() {
            for x in 0..la.dim() {
                let want = am.basis[a].degree + la.basis[x].degree - shift;
                if self.act[a][x].terms().any(|(k, e, _)| la.term_degree(k, e) != want) {
                    r.homogeneity.push(format!("{} * {}", an(a), ln(x)));
                }
            }
        }
        if let Some(incl) = &self.incl {
            for x in 0..la.dim() {
                if incl[x].terms().any(|(k, e, _)| am.term_degree(k, e) != la.basis[x].degree) {
                    r.homogeneity.push(format!("i({})", ln(x)));
                }
            }
        }
        let basis_a = |i: usize| Element::<F>::basis(i);
        for x in 0..la.dim() {
            let ex = basis_a(x);
            if self.act(&am.unit_element(), &ex) != ex {
                r.unit.push(ln(x).to_string());
            }
        }
        for a in 0..am.dim() {
            for b in 0..am.dim() {
                let ab = am.multiply(&basis_a(a), &basis_a(b));
                for x in 0..la.dim() {
                    let left = self.act(&ab, &basis_a(x));
                    let right = self.act(&basis_a(a), &self.act(&basis_a(b), &basis_a(x)));
                    if left != right {
                        r.associativity.push(format!("({} {}) {}", an(a), an(b), ln(x)));
                    }
                }
            }
        }
        for a in 0..am.dim() {
            for x in 0..la.dim() {
                for y in 0..la.dim() {
                    let ea = basis_a(a);
                    let one = self.act(&ea, &la.multiply(&basis_a(x), &basis_a(y)));
                    let two = la.multiply(&basis_a(x), &self.act(&ea, &basis_a(y)));
                    let three = la.multiply(&self.act(&ea, &basis_a(x)), &basis_a(y));
                    if one != two || one != three {
                        r.two_sided.push(format!("{} ({} {})", an(a), ln(x), ln(y)));
                    }
                }
            }
        }
        if let Some(incl) = &self.incl {
            for a in 0..am.dim() {
                for x in 0..la.dim() {
                    let left = self.include(&self.act(&basis_a(a), &basis_a(x))).expect("inclusion present");
                    let right = am.multiply(&basis_a(a), &incl[x]);
                    if left != right {
                        r.inclusion.push(format!("i({} * {})", an(a), ln(x)));
                    }
                }
            }
            if let Some(pair) = &self.pair {
                for h in 0..am.dim() {
                    for x in 0..la.dim() {
                        let kron = LaurentPoly::from_terms(incl[x].terms().map(|(k, e, c)| (e, c.times(&pair[h][k]))));
                        if kron != la.epsilon(&self.act(&basis_a(h), &basis_a(x))) {
                            r.pairing.push(format!("<{}, i({})>", an(h), ln(x)));
                        }
                    }
                }
            }
        }
        r
    }

    pub fn map_coeffs<G: ScalarField>(
        &self,
        f: impl Fn(&F) -> Result<G, CoeffError> + Copy,
    ) -> Result<ModuleAction<G>, AlgebraError> {
        let map_rows = |rows: &Vec<Vec<Element<F>>>| -> Result<Vec<Vec<Element<G>>>, CoeffError> {
            rows.iter().map(|row| row.iter().map(|e| e.map(f)).collect()).collect()
        };
        Ok(ModuleAction {
            name: self.name.clone(),
            ambient: self.ambient.map_coeffs(f)?,
            lagr: self.lagr.map_coeffs(f)?,
            act: map_rows(&self.act)?,
            incl: match &self.incl {
                Some(v) => Some(v.iter().map(|e| e.map(f)).collect::<Result<Vec<_>, _>>()?),
                None => None,
            },
            pair: match &self.pair {
                Some(p) => Some(
                    p.iter()
                        .map(|row| row.iter().map(f).collect::<Result<Vec<_>, _>>())
                        .collect::<Result<Vec<_>, _>>()?,
                ),
                None => None,
            },
        })
    }
}

/// Leibniz rule for the first page differential against the classical
/// (`t^0`) part of a product: `d1(xy) = d1(x) y + x d1(y)` on all basis pairs.
///
/// The complex must be minimal and its generators must carry the names of
/// the algebra basis; `d1` is the `t^1` block.
pub fn leibniz_check(complex: &PearlComplex, algebra: &QuantumAlgebra<Gf2>) -> Result<bool, AlgebraError> {
    if !complex.is_minimal() {
        return Err(AlgebraError::Mismatch("complex has a t^0 block".into()));
    }
    if complex.len() != algebra.dim() {
        return Err(AlgebraError::Mismatch("generator count differs from basis size".into()));
    }
    let to_alg: Vec<usize> = complex.generators().iter().map(|g| algebra.lookup(&g.name)).collect::<Result<_, _>>()?;
    let mut d1 = vec![Element::<Gf2>::zero(); algebra.dim()];
    for (g, &a) in to_alg.iter().enumerate() {
        for &(t, j) in complex.terms(g) {
            if j == 1 {
                d1[a].add_term(to_alg[t], 0, &Gf2::ONE);
            }
        }
    }
    let classical = |x: &Element<Gf2>, y: &Element<Gf2>| -> Element<Gf2> {
        let p = algebra.multiply(x, y);
        Element::from_terms(p.terms().filter(|(_, e, _)| *e == 0).map(|(i, e, c)| (*c, i, e)))
    };
    let apply_d1 = |x: &Element<Gf2>| -> Element<Gf2> {
        let mut out = Element::zero();
        for (i, e, c) in x.terms() {
            out = out.plus(&d1[i].shifted(e).scaled(c));
        }
        out
    };
    for x in 0..algebra.dim() {
        for y in 0..algebra.dim() {
            let (ex, ey) = (Element::basis(x), Element::basis(y));
            let lhs = apply_d1(&classical(&ex, &ey));
            let rhs = classical(&apply_d1(&ex), &ey).plus(&classical(&ex, &apply_d1(&ey)));
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Rational;

    const ONE: Gf2 = Gf2::ONE;

    fn cp2() -> QuantumAlgebra<Gf2> {
        let mut b = QuantumAlgebra::<Gf2>::builder("cp2", 2, 4).unwrap();
        b.basis("u", 4).unwrap();
        b.basis("h", 2).unwrap();
        b.basis("p", 0).unwrap();
        b.unit("u").unwrap();
        for x in ["u", "h", "p"] {
            b.product_terms("u", x, &[(ONE, x, 0)]).unwrap();
            if x != "u" {
                b.product_terms(x, "u", &[(ONE, x, 0)]).unwrap();
            }
        }
        b.product_terms("h", "h", &[(ONE, "p", 0)]).unwrap();
        b.product_terms("h", "p", &[(ONE, "u", 3)]).unwrap();
        b.product_terms("p", "h", &[(ONE, "u", 3)]).unwrap();
        b.product_terms("p", "p", &[(ONE, "h", 3)]).unwrap();
        b.aug("p", ONE).unwrap();
        b.build().unwrap()
    }

    #[test]
    fn cp2_is_a_commutative_algebra() {
        let a = cp2();
        let r = a.verify_algebra();
        assert!(r.passes(), "{r:?}");
        assert!(r.commutative);
        let h = a.basis_element("h").unwrap();
        assert_eq!(a.power(&h, 3), Element::term(ONE, a.lookup("u").unwrap(), 3));
        assert!(a.frobenius_check().unwrap());
    }

    #[test]
    fn injected_associativity_failure_is_reported() {
        let mut b = QuantumAlgebra::<Gf2>::builder("bad", 2, 4).unwrap();
        b.basis("u", 4).unwrap();
        b.basis("h", 2).unwrap();
        b.basis("p", 0).unwrap();
        b.unit("u").unwrap();
        for x in ["u", "h", "p"] {
            b.product_terms("u", x, &[(ONE, x, 0)]).unwrap();
            if x != "u" {
                b.product_terms(x, "u", &[(ONE, x, 0)]).unwrap();
            }
        }
        b.product_terms("h", "h", &[(ONE, "p", 0)]).unwrap();
        b.product_terms("h", "p", &[(ONE, "u", 3)]).unwrap();
        b.product_terms("p", "h", &[(ONE, "u", 3)]).unwrap();
        // p * p should be h t^3
        let r = b.build().unwrap().verify_algebra();
        assert!(!r.associativity.is_empty());
        assert!(r.homogeneity.is_empty());
    }

    #[test]
    fn inverse_of_h_in_cp2() {
        let a = cp2();
        let h = a.basis_element("h").unwrap();
        let inv = a.invert_laurent(&h).unwrap();
        assert_eq!(inv, a.power(&h, 2).shifted(-3));
        assert_eq!(a.multiply(&inv, &h), a.unit_element());
        let zero = Element::zero();
        assert!(!a.is_invertible(&zero));
    }

    #[test]
    fn leading_order_cases() {
        let a = cp2();
        let x = a.element(&[(ONE, "h", 1), (ONE, "u", 2)]).unwrap();
        let (k, head) = leading_order(&x).unwrap();
        assert_eq!(k, 1);
        assert_eq!(head, a.basis_element("h").unwrap());
        assert_eq!(leading_order::<Gf2>(&Element::zero()), Err(AlgebraError::ZeroElement));
    }

    #[test]
    fn invertible_slices() {
        let a = cp2();
        match a.has_invertible_of_degree(4, 10) {
            InvertibleSearch::Yes(w) => assert!(a.is_invertible(&w)),
            other => panic!("{other:?}"),
        }
        assert_eq!(a.has_invertible_of_degree(3, 10), InvertibleSearch::ProbablyNo { exhaustive: true, tried: 0 });
    }

    #[test]
    fn builder_errors() {
        let mut b = QuantumAlgebra::<Gf2>::builder("x", 2, 2).unwrap();
        b.basis("u", 2).unwrap();
        assert_eq!(b.basis("u", 0), Err(AlgebraError::DuplicateBasis("u".into())));
        assert!(b.clone().build().is_err());
        b.basis("p", 0).unwrap();
        b.unit("p").unwrap();
        assert!(matches!(b.clone().build(), Err(AlgebraError::UnitDegree { .. })));
        b.unit("u").unwrap();
        b.product_terms("u", "u", &[(ONE, "u", 0)]).unwrap();
        assert!(b.product_terms("u", "u", &[(ONE, "u", 0)]).is_err());
        assert!(b.product_terms("p", "p", &[(ONE, "u", -1)]).is_ok());
        assert!(matches!(b.build(), Err(AlgebraError::NegativeExponent(_))));
    }

    #[test]
    fn euler_of_cp2_over_rationals() {
        let a = cp2().map_coeffs(|c| Ok(Rational::from_i64(i64::from(c.0)))).unwrap();
        let e = a.quantum_euler(None).unwrap();
        assert!(e.degree_zero);
        assert!(e.basis_independent);
        // 3 p + ... has degree 0: p, h t, u t^2 each with coefficient 1... in fact 3 copies
        assert!(a.is_semisimple(None).unwrap());
        let odd = {
            let mut b = QuantumAlgebra::<Rational>::builder("o", 2, 1).unwrap();
            b.basis("u", 1).unwrap();
            b.unit("u").unwrap();
            b.product_terms("u", "u", &[(Rational::from_i64(1), "u", 0)]).unwrap();
            b.build().unwrap()
        };
        assert_eq!(odd.quantum_euler(None), Err(AlgebraError::OddDegree("u".into())));
    }
}
