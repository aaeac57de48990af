//! Pearl complexes: finitely many graded generators and a differential
//! `d = sum_j D_j t^j` with GF(2) blocks `D_j`.
//!
//! Because `d` has degree -1 and `t` has degree `-N`, an entry `x -> y` of
//! `D_j` forces `|y| = |x| - 1 + jN`. So every homology computation reduces
//! to finite GF(2) linear algebra on one degree slice at a time.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::coeff::{CoeffError, GradingContext};
use crate::gf2::{BitMatrix, BitVec, Echelon};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PearlError {
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate term `{target} t^{exp}` in the differential of `{generator}`")]
    DuplicateTerm { generator: String, target: String, exp: u32 },
    #[error("complex is not valid: {0}")]
    Invalid(ValidationReport),
    #[error("the top degree is not declared")]
    MissingTop,
    #[error("complex has a nonzero t^0 block and is not minimal")]
    NotMinimal,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(&'static str),
    #[error("window [{lo}, {hi}] is empty")]
    EmptyWindow { lo: i64, hi: i64 },
    #[error("internal consistency check failed: {0}")]
    Internal(&'static str),
}

/// A finite GF(2) combination of monomials `g t^e` (`e` may be negative).
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Chain(BTreeSet<(usize, i64)>);

impl Chain {
    pub fn new() -> Self {
        Chain(BTreeSet::new())
    }

    pub fn monomial(generator: usize, exp: i64) -> Self {
        let mut c = Chain::new();
        c.toggle(generator, exp);
        c
    }

    pub fn toggle(&mut self, generator: usize, exp: i64) {
        if !self.0.remove(&(generator, exp)) {
            self.0.insert((generator, exp));
        }
    }

    pub fn xor_assign(&mut self, other: &Chain) {
        for &(g, e) in &other.0 {
            self.toggle(g, e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, generator: usize, exp: i64) -> bool {
        self.0.contains(&(generator, exp))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.0.iter().copied()
    }

    pub fn shifted(&self, k: i64) -> Chain {
        Chain(self.0.iter().map(|&(g, e)| (g, e + k)).collect())
    }
}

impl FromIterator<(usize, i64)> for Chain {
    fn from_iter<I: IntoIterator<Item = (usize, i64)>>(iter: I) -> Self {
        let mut c = Chain::new();
        for (g, e) in iter {
            c.toggle(g, e);
        }
        c
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomogeneityViolation {
    pub source: String,
    pub target: String,
    pub exp: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub homogeneity: Vec<HomogeneityViolation>,
    /// Exponents `j` at which `sum_{a+b=j} D_a D_b` is nonzero.
    pub square_nonzero: Vec<i64>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.homogeneity.is_empty() && self.square_nonzero.is_empty()
    }
}

impl core::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.is_valid() {
            return f.write_str("valid");
        }
        let mut first = true;
        for v in &self.homogeneity {
            if !first {
                f.write_str("; ")?;
            }
            first = false;
            write!(f, "inhomogeneous term {} -> {} t^{}", v.source, v.target, v.exp)?;
        }
        for j in &self.square_nonzero {
            if !first {
                f.write_str("; ")?;
            }
            first = false;
            write!(f, "d^2 nonzero at t^{j}")?;
        }
        Ok(())
    }
}

/// Betti numbers over a window of degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedDims {
    pub window: (i64, i64),
    pub dims: BTreeMap<i64, usize>,
    pub periodic_tail: bool,
}

impl GradedDims {
    pub fn get(&self, degree: i64) -> Option<usize> {
        self.dims.get(&degree).copied()
    }

    pub fn total(&self) -> usize {
        self.dims.values().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PearlComplex {
    name: String,
    ctx: GradingContext,
    top: Option<i64>,
    generators: Vec<Generator>,
    index: BTreeMap<String, usize>,
    /// Per source generator: the set of `(target, j)` with `D_j[source -> target] = 1`.
    diff: Vec<BTreeSet<(usize, u32)>>,
}

#[derive(Debug, Clone)]
pub struct PearlComplexBuilder {
    inner: PearlComplex,
}

impl PearlComplexBuilder {
    pub fn top(mut self, n: i64) -> Self {
        self.inner.top = Some(n);
        self
    }

    pub fn generator(&mut self, name: &str, degree: i64) -> Result<usize, PearlError> {
        if self.inner.index.contains_key(name) {
            return Err(PearlError::DuplicateGenerator(name.to_string()));
        }
        let id = self.inner.generators.len();
        self.inner.generators.push(Generator { name: name.to_string(), degree });
        self.inner.index.insert(name.to_string(), id);
        self.inner.diff.push(BTreeSet::new());
        Ok(id)
    }

    pub fn with_generator(mut self, name: &str, degree: i64) -> Result<Self, PearlError> {
        self.generator(name, degree)?;
        Ok(self)
    }

    pub fn term(&mut self, source: &str, target: &str, exp: u32) -> Result<(), PearlError> {
        let s = self.inner.lookup(source)?;
        let t = self.inner.lookup(target)?;
        if !self.inner.diff[s].insert((t, exp)) {
            return Err(PearlError::DuplicateTerm { generator: source.to_string(), target: target.to_string(), exp });
        }
        Ok(())
    }

    pub fn with_term(mut self, source: &str, target: &str, exp: u32) -> Result<Self, PearlError> {
        self.term(source, target, exp)?;
        Ok(self)
    }

    pub fn set_top(&mut self, n: i64) {
        self.inner.top = Some(n);
    }

    pub fn build(self) -> PearlComplex {
        self.inner
    }
}

/// The monomials `g t^e` of one total degree, indexed for matrix work.
#[derive(Debug, Clone, Default)]
pub struct Slice {
    pub degree: i64,
    pub monomials: Vec<(usize, i64)>,
    index: BTreeMap<(usize, i64), usize>,
}

impl Slice {
    fn new(degree: i64, monomials: Vec<(usize, i64)>) -> Self {
        let index = monomials.iter().enumerate().map(|(k, m)| (*m, k)).collect();
        Slice { degree, monomials, index }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn position(&self, generator: usize, exp: i64) -> Option<usize> {
        self.index.get(&(generator, exp)).copied()
    }

    /// Coordinates of a chain; `None` if it has a monomial outside the slice.
    pub fn coords(&self, chain: &Chain) -> Option<BitVec> {
        let mut v = BitVec::zeros(self.len());
        for (g, e) in chain.iter() {
            v.flip(self.position(g, e)?);
        }
        Some(v)
    }

    pub fn chain(&self, v: &BitVec) -> Chain {
        v.ones().map(|k| self.monomials[k]).collect()
    }
}

impl PearlComplex {
    pub fn builder(name: &str, maslov: u32) -> Result<PearlComplexBuilder, PearlError> {
        let ctx = GradingContext::new(maslov)?;
        Ok(PearlComplexBuilder {
            inner: PearlComplex {
                name: name.to_string(),
                ctx,
                top: None,
                generators: Vec::new(),
                index: BTreeMap::new(),
                diff: Vec::new(),
            },
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn ctx(&self) -> GradingContext {
        self.ctx
    }

    pub fn maslov(&self) -> i64 {
        self.ctx.n()
    }

    pub fn top(&self) -> Option<i64> {
        self.top
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn degree(&self, g: usize) -> i64 {
        self.generators[g].degree
    }

    pub fn lookup(&self, name: &str) -> Result<usize, PearlError> {
        self.index.get(name).copied().ok_or_else(|| PearlError::UnknownGenerator(name.to_string()))
    }

    /// Terms `(target, j)` of `d` applied to a generator.
    pub fn terms(&self, g: usize) -> &BTreeSet<(usize, u32)> {
        &self.diff[g]
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.generators.iter().map(|g| g.degree).min()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.generators.iter().map(|g| g.degree).max()
    }

    pub fn max_exponent(&self) -> Option<u32> {
        self.diff.iter().flat_map(|s| s.iter().map(|&(_, j)| j)).max()
    }

    /// `D_j` as a matrix (rows and columns indexed by generators).
    pub fn block(&self, j: u32) -> BitMatrix {
        let n = self.len();
        let mut m = BitMatrix::zeros(n, n);
        for (s, terms) in self.diff.iter().enumerate() {
            for &(t, e) in terms {
                if e == j {
                    m.set(t, s, true);
                }
            }
        }
        m
    }

    pub fn is_minimal(&self) -> bool {
        self.diff.iter().all(|s| s.iter().all(|&(_, j)| j > 0))
    }

    pub fn apply_d(&self, chain: &Chain) -> Chain {
        let mut out = Chain::new();
        for (g, e) in chain.iter() {
            for &(t, j) in &self.diff[g] {
                out.toggle(t, e + i64::from(j));
            }
        }
        out
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let n = self.maslov();
        for (s, terms) in self.diff.iter().enumerate() {
            for &(t, j) in terms {
                if self.degree(t) != self.degree(s) - 1 + i64::from(j) * n {
                    report.homogeneity.push(HomogeneityViolation {
                        source: self.generators[s].name.clone(),
                        target: self.generators[t].name.clone(),
                        exp: j,
                    });
                }
            }
        }
        let mut bad = BTreeSet::new();
        for g in 0..self.len() {
            let dd = self.apply_d(&self.apply_d(&Chain::monomial(g, 0)));
            bad.extend(dd.iter().map(|(_, e)| e));
        }
        report.square_nonzero = bad.into_iter().collect();
        report
    }

    pub fn ensure_valid(&self) -> Result<(), PearlError> {
        let r = self.validate();
        if r.is_valid() {
            Ok(())
        } else {
            Err(PearlError::Invalid(r))
        }
    }

    /// Degree slice over the positive ring (`positive`) or the full Laurent ring.
    pub fn slice(&self, degree: i64, positive: bool) -> Slice {
        let mut monos = Vec::new();
        for (g, gen) in self.generators.iter().enumerate() {
            if let Some(e) = self.ctx.exponent_for(gen.degree, degree) {
                if !positive || e >= 0 {
                    monos.push((g, e));
                }
            }
        }
        Slice::new(degree, monos)
    }

    /// Matrix of `d` from `from` into `to`; panics if the image leaves `to`
    /// (impossible for valid complexes and matching slices).
    pub fn d_matrix(&self, from: &Slice, to: &Slice) -> BitMatrix {
        let cols = from
            .monomials
            .iter()
            .map(|&(g, e)| to.coords(&self.apply_d(&Chain::monomial(g, e))).expect("d leaves the target slice"))
            .collect();
        BitMatrix::from_columns(to.len(), cols)
    }

    fn degree_homology(&self, degree: i64, positive: bool) -> usize {
        let above = self.slice(degree + 1, positive);
        let here = self.slice(degree, positive);
        let below = self.slice(degree - 1, positive);
        here.len() - self.d_matrix(&here, &below).rank() - self.d_matrix(&above, &here).rank()
    }

    fn dims_over(&self, lo: i64, hi: i64, positive: bool) -> Result<BTreeMap<i64, usize>, PearlError> {
        if lo > hi {
            return Err(PearlError::EmptyWindow { lo, hi });
        }
        Ok((lo..=hi).map(|i| (i, self.degree_homology(i, positive))).collect())
    }

    pub fn default_plus_window(&self) -> (i64, i64) {
        match (self.min_degree(), self.max_degree()) {
            (Some(lo), Some(hi)) => (lo - 2 * self.maslov(), hi),
            _ => (0, 0),
        }
    }

    /// Betti numbers of the homology over the positive ring.
    ///
    /// `periodic_tail` is set when the window reaches two full periods below
    /// the lowest generator; below that point the slices agree with the
    /// Laurent ones, so the two lowest periods are compared as a guard.
    pub fn homology_plus(&self, window: Option<(i64, i64)>) -> Result<GradedDims, PearlError> {
        self.ensure_valid()?;
        let (lo, hi) = window.unwrap_or_else(|| self.default_plus_window());
        let dims = self.dims_over(lo, hi, true)?;
        let n = self.maslov();
        let min = self.min_degree().unwrap_or(0);
        let periodic_tail = lo <= min - 2 * n && hi >= lo + 2 * n - 1;
        if periodic_tail && (lo..lo + n).any(|i| dims[&i] != dims[&(i + n)]) {
            return Err(PearlError::Internal("homology below the lowest generator is not periodic"));
        }
        Ok(GradedDims { window: (lo, hi), dims, periodic_tail })
    }

    /// Betti numbers over the Laurent ring for one full period starting at
    /// the lowest generator degree.
    pub fn homology_full(&self) -> Result<GradedDims, PearlError> {
        let lo = self.min_degree().unwrap_or(0);
        self.homology_full_window(lo, lo + self.maslov() - 1)
    }

    pub fn homology_full_window(&self, lo: i64, hi: i64) -> Result<GradedDims, PearlError> {
        self.ensure_valid()?;
        let dims = self.dims_over(lo, hi, false)?;
        Ok(GradedDims { window: (lo, hi), dims, periodic_tail: true })
    }

    /// Homology of the `t^0` block alone, by degree.
    pub fn morse_homology(&self) -> BTreeMap<i64, usize> {
        let d0 = self.block(0);
        let mut out = BTreeMap::new();
        let (Some(lo), Some(hi)) = (self.min_degree(), self.max_degree()) else {
            return out;
        };
        for k in lo..=hi {
            let here: Vec<usize> = (0..self.len()).filter(|&g| self.degree(g) == k).collect();
            let below: Vec<usize> = (0..self.len()).filter(|&g| self.degree(g) == k - 1).collect();
            let above: Vec<usize> = (0..self.len()).filter(|&g| self.degree(g) == k + 1).collect();
            let out_rank = restrict(&d0, &here, &below).rank();
            let in_rank = restrict(&d0, &above, &here).rank();
            out.insert(k, here.len() - out_rank - in_rank);
        }
        out
    }

    /// The `n`-fold suspension of the adjoint complex: `x*` has degree
    /// `n - |x|` and each block is transposed.
    pub fn dual_complex(&self) -> Result<PearlComplex, PearlError> {
        self.ensure_valid()?;
        let n = self.top.ok_or(PearlError::MissingTop)?;
        let mut b = PearlComplex::builder(&dual_name(&self.name), self.ctx.maslov())?.top(n);
        for g in &self.generators {
            b.generator(&dual_name(&g.name), n - g.degree)?;
        }
        for (s, terms) in self.diff.iter().enumerate() {
            for &(t, j) in terms {
                b.term(&dual_name(&self.generators[t].name), &dual_name(&self.generators[s].name), j)?;
            }
        }
        Ok(b.build())
    }

    /// Compares positive-ring Betti numbers of this complex and its dual.
    pub fn check_duality(&self) -> Result<bool, PearlError> {
        let dual = self.dual_complex()?;
        self.check_duality_against(&dual)
    }

    /// Same comparison against an arbitrary candidate for the dual.
    pub fn check_duality_against(&self, dual: &PearlComplex) -> Result<bool, PearlError> {
        if !dual.validate().is_valid() {
            return Ok(false);
        }
        let (a_lo, a_hi) = self.default_plus_window();
        let (b_lo, b_hi) = dual.default_plus_window();
        let window = Some((a_lo.min(b_lo), a_hi.max(b_hi)));
        Ok(self.homology_plus(window)?.dims == dual.homology_plus(window)?.dims)
    }

    /// `eps o d = 0`, where `eps` sends degree-0 generators to 1.
    pub fn augmentation_check(&self) -> bool {
        self.diff.iter().all(|terms| {
            let mut parity: BTreeMap<u32, bool> = BTreeMap::new();
            for &(t, j) in terms {
                if self.degree(t) == 0 {
                    *parity.entry(j).or_default() ^= true;
                }
            }
            parity.values().all(|odd| !odd)
        })
    }

    /// Same generators and differential, ignoring the name.
    pub fn same_shape(&self, other: &PearlComplex) -> bool {
        self.ctx == other.ctx && self.generators == other.generators && self.diff == other.diff
    }

    /// Copy with the generators listed in `order` (a permutation of indices).
    pub fn permuted(&self, order: &[usize]) -> Result<PearlComplex, PearlError> {
        let mut seen = BTreeSet::new();
        if order.len() != self.len() || !order.iter().all(|&k| k < self.len() && seen.insert(k)) {
            return Err(PearlError::ShapeMismatch("not a permutation of the generators"));
        }
        let mut b = PearlComplex::builder(&self.name, self.ctx.maslov())?;
        b.inner.top = self.top;
        for &k in order {
            b.generator(&self.generators[k].name, self.generators[k].degree)?;
        }
        for &k in order {
            for &(t, j) in &self.diff[k] {
                b.term(&self.generators[k].name, &self.generators[t].name, j)?;
            }
        }
        Ok(b.build())
    }
}

fn dual_name(name: &str) -> String {
    match name.strip_suffix('*') {
        Some(base) => base.to_string(),
        None => alloc::format!("{name}*"),
    }
}

/// Submatrix of `m` with the given source columns and target rows.
pub(crate) fn restrict(m: &BitMatrix, sources: &[usize], targets: &[usize]) -> BitMatrix {
    BitMatrix::from_columns(targets.len(), sources.iter().map(|&s| m.column(s).restrict(targets)).collect())
}

/// A degree-preserving module map `f = sum_j F_j t^j` between pearl complexes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainMap {
    source: PearlComplex,
    target: PearlComplex,
    images: Vec<BTreeSet<(usize, u32)>>,
}

impl ChainMap {
    pub fn new(source: PearlComplex, target: PearlComplex) -> Result<Self, PearlError> {
        if source.ctx != target.ctx {
            return Err(PearlError::ShapeMismatch("source and target have different Maslov numbers"));
        }
        let images = alloc::vec![BTreeSet::new(); source.len()];
        Ok(ChainMap { source, target, images })
    }

    pub fn identity(c: &PearlComplex) -> Self {
        let mut f = ChainMap::new(c.clone(), c.clone()).expect("same context");
        for g in 0..c.len() {
            f.images[g].insert((g, 0));
        }
        f
    }

    pub fn zero(source: &PearlComplex, target: &PearlComplex) -> Result<Self, PearlError> {
        ChainMap::new(source.clone(), target.clone())
    }

    /// Sends each generator to the generator of the same name in `target`.
    pub fn renaming(source: &PearlComplex, target: &PearlComplex) -> Result<Self, PearlError> {
        let mut f = ChainMap::new(source.clone(), target.clone())?;
        for (g, gen) in source.generators.iter().enumerate() {
            let t = target.lookup(&gen.name)?;
            f.images[g].insert((t, 0));
        }
        Ok(f)
    }

    pub fn source(&self) -> &PearlComplex {
        &self.source
    }

    pub fn target(&self) -> &PearlComplex {
        &self.target
    }

    /// Toggles the entry `source -> target t^j`.
    pub fn toggle(&mut self, source: usize, target: usize, j: u32) {
        assert!(source < self.source.len() && target < self.target.len(), "index out of range");
        if !self.images[source].remove(&(target, j)) {
            self.images[source].insert((target, j));
        }
    }

    pub fn set_image(&mut self, source: usize, image: &Chain) -> Result<(), PearlError> {
        let mut set = BTreeSet::new();
        for (t, e) in image.iter() {
            let j = u32::try_from(e).map_err(|_| PearlError::ShapeMismatch("negative exponent in a chain map"))?;
            set.insert((t, j));
        }
        self.images[source] = set;
        Ok(())
    }

    pub fn image_terms(&self, g: usize) -> &BTreeSet<(usize, u32)> {
        &self.images[g]
    }

    pub fn apply(&self, chain: &Chain) -> Chain {
        let mut out = Chain::new();
        for (g, e) in chain.iter() {
            for &(t, j) in &self.images[g] {
                out.toggle(t, e + i64::from(j));
            }
        }
        out
    }

    /// The `t^j` block as a matrix (target generators by source generators).
    pub fn block(&self, j: u32) -> BitMatrix {
        let mut m = BitMatrix::zeros(self.target.len(), self.source.len());
        for (s, terms) in self.images.iter().enumerate() {
            for &(t, e) in terms {
                if e == j {
                    m.set(t, s, true);
                }
            }
        }
        m
    }

    pub fn is_homogeneous(&self) -> bool {
        let n = self.source.maslov();
        self.images.iter().enumerate().all(|(s, terms)| {
            terms.iter().all(|&(t, j)| self.target.degree(t) - i64::from(j) * n == self.source.degree(s))
        })
    }

    /// Homogeneous of degree 0 and `d f = f d`.
    pub fn chain_check(&self) -> bool {
        self.is_homogeneous()
            && (0..self.source.len()).all(|g| {
                let x = Chain::monomial(g, 0);
                self.target.apply_d(&self.apply(&x)) == self.apply(&self.source.apply_d(&x))
            })
    }

    /// `after o self`.
    pub fn then(&self, after: &ChainMap) -> Result<ChainMap, PearlError> {
        if !self.target.same_shape(&after.source) {
            return Err(PearlError::ShapeMismatch("composition of maps with mismatched complexes"));
        }
        let mut out = ChainMap::new(self.source.clone(), after.target.clone())?;
        for g in 0..self.source.len() {
            out.set_image(g, &after.apply(&self.apply(&Chain::monomial(g, 0))))?;
        }
        Ok(out)
    }

    /// Whether the map is an isomorphism on Laurent-ring homology (checked on
    /// one full period of degrees) and its `t^0` block is an isomorphism on
    /// homology of the `t^0` differentials.
    pub fn is_quasi_iso(&self) -> Result<bool, PearlError> {
        self.source.ensure_valid()?;
        self.target.ensure_valid()?;
        if !self.chain_check() {
            return Ok(false);
        }
        let n = self.source.maslov();
        let lo = match (self.source.min_degree(), self.target.min_degree()) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => 0,
        };
        for i in lo..lo + n {
            let (s_here, t_here) = (self.source.slice(i, false), self.target.slice(i, false));
            let (s_below, t_above) = (self.source.slice(i - 1, false), self.target.slice(i + 1, false));
            let cycles = self.source.d_matrix(&s_here, &s_below).kernel();
            let cols = cycles.iter().map(|z| self.map_vec(&s_here, &t_here, z)).collect();
            if !induced_is_iso(
                &BitMatrix::from_columns(t_here.len(), cols),
                &self.target.d_matrix(&t_above, &t_here),
                self.source.degree_homology(i, false),
                self.target.degree_homology(i, false),
            ) {
                return Ok(false);
            }
        }
        let f0 = self.block(0);
        let (d_s, d_t) = (self.source.block(0), self.target.block(0));
        let degrees: BTreeSet<i64> =
            self.source.generators.iter().chain(&self.target.generators).map(|g| g.degree).collect();
        let (hs, ht) = (self.source.morse_homology(), self.target.morse_homology());
        for k in degrees {
            let s_here: Vec<usize> = (0..self.source.len()).filter(|&g| self.source.degree(g) == k).collect();
            let s_below: Vec<usize> = (0..self.source.len()).filter(|&g| self.source.degree(g) == k - 1).collect();
            let t_here: Vec<usize> = (0..self.target.len()).filter(|&g| self.target.degree(g) == k).collect();
            let t_above: Vec<usize> = (0..self.target.len()).filter(|&g| self.target.degree(g) == k + 1).collect();
            let cycles = restrict(&d_s, &s_here, &s_below).kernel();
            let f_here = restrict(&f0, &s_here, &t_here);
            let cols = cycles.iter().map(|z| f_here.apply(z)).collect();
            if !induced_is_iso(
                &BitMatrix::from_columns(t_here.len(), cols),
                &restrict(&d_t, &t_above, &t_here),
                hs.get(&k).copied().unwrap_or(0),
                ht.get(&k).copied().unwrap_or(0),
            ) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn map_vec(&self, from: &Slice, to: &Slice, v: &BitVec) -> BitVec {
        to.coords(&self.apply(&from.chain(v))).expect("homogeneous map stays in the slice")
    }
}

/// Rank of the induced map on homology is `rank[f(Z) | B] - rank B`.
fn induced_is_iso(images_of_cycles: &BitMatrix, boundaries: &BitMatrix, dim_source: usize, dim_target: usize) -> bool {
    let mut ech = Echelon::new(boundaries.nrows(), boundaries.ncols() + images_of_cycles.ncols());
    for c in boundaries.columns() {
        ech.insert(c);
    }
    let b_rank = ech.rank();
    for c in images_of_cycles.columns() {
        ech.insert(c);
    }
    let induced = ech.rank() - b_rank;
    dim_source == dim_target && induced == dim_target
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    pub(crate) fn circle() -> PearlComplex {
        PearlComplex::builder("circle", 2)
            .unwrap()
            .top(1)
            .with_generator("P", 0)
            .unwrap()
            .with_generator("Q", 1)
            .unwrap()
            .with_term("P", "Q", 1)
            .unwrap()
            .build()
    }

    fn clifford() -> PearlComplex {
        let mut b = PearlComplex::builder("clifford", 2).unwrap().top(2);
        for (n, d) in [("m", 0), ("a", 1), ("b", 1), ("w", 2)] {
            b.generator(n, d).unwrap();
        }
        b.build()
    }

    #[test]
    fn circle_is_valid() {
        assert!(circle().validate().is_valid());
        assert!(circle().is_minimal());
    }

    #[test]
    fn circle_with_extra_t0_term_fails_d_squared() {
        let mut b = PearlComplex::builder("c", 2).unwrap();
        b.generator("P", 0).unwrap();
        b.generator("Q", 1).unwrap();
        b.term("P", "Q", 1).unwrap();
        b.term("Q", "P", 0).unwrap();
        let r = b.build().validate();
        assert!(r.homogeneity.is_empty());
        assert_eq!(r.square_nonzero, vec![1]);
    }

    #[test]
    fn circle_with_inhomogeneous_term() {
        let mut b = PearlComplex::builder("c", 2).unwrap();
        b.generator("P", 0).unwrap();
        b.generator("Q", 1).unwrap();
        b.term("P", "Q", 1).unwrap();
        b.term("Q", "P", 1).unwrap();
        let r = b.build().validate();
        assert_eq!(r.homogeneity.len(), 1);
        assert_eq!(r.homogeneity[0].source, "Q");
    }

    #[test]
    fn t0_square_flagged() {
        let mut b = PearlComplex::builder("c", 2).unwrap();
        b.generator("x", 1).unwrap();
        b.generator("y", 0).unwrap();
        b.term("x", "y", 0).unwrap();
        b.term("y", "x", 0).unwrap();
        let r = b.build().validate();
        assert!(r.square_nonzero.contains(&0));
        assert!(!r.is_valid());
    }

    #[test]
    fn builder_errors() {
        let mut b = PearlComplex::builder("c", 2).unwrap();
        b.generator("x", 1).unwrap();
        assert_eq!(b.generator("x", 0), Err(PearlError::DuplicateGenerator("x".into())));
        b.generator("y", 0).unwrap();
        b.term("x", "y", 0).unwrap();
        assert!(matches!(b.term("x", "y", 0), Err(PearlError::DuplicateTerm { .. })));
        assert!(matches!(b.term("x", "z", 0), Err(PearlError::UnknownGenerator(_))));
        assert!(PearlComplex::builder("c", 1).is_err());
    }

    #[test]
    fn circle_homology() {
        let c = circle();
        let h = c.homology_plus(None).unwrap();
        assert_eq!(h.window, (-4, 1));
        assert!(h.periodic_tail);
        for (i, d) in &h.dims {
            assert_eq!(*d, usize::from(*i == 1), "degree {i}");
        }
        assert_eq!(c.homology_full().unwrap().total(), 0);
    }

    #[test]
    fn clifford_homology() {
        let c = clifford();
        let h = c.homology_plus(None).unwrap();
        assert_eq!(h.get(0), Some(2));
        assert_eq!(h.get(1), Some(2));
        assert_eq!(h.get(-1), Some(2));
        assert_eq!(h.get(2), Some(1));
        let f = c.homology_full().unwrap();
        assert_eq!(f.dims.values().copied().collect::<Vec<_>>(), vec![2, 2]);
    }

    #[test]
    fn dual_of_circle() {
        let d = circle().dual_complex().unwrap();
        assert_eq!(d.name(), "circle*");
        let p = d.lookup("P*").unwrap();
        let q = d.lookup("Q*").unwrap();
        assert_eq!(d.degree(p), 1);
        assert_eq!(d.degree(q), 0);
        assert!(d.terms(q).contains(&(p, 1)));
        assert!(d.validate().is_valid());
        assert!(d.dual_complex().unwrap().same_shape(&circle()));
        assert!(circle().check_duality().unwrap());
    }

    #[test]
    fn dual_needs_top() {
        let c = PearlComplex::builder("c", 2).unwrap().with_generator("x", 0).unwrap().build();
        assert_eq!(c.dual_complex(), Err(PearlError::MissingTop));
    }

    #[test]
    fn augmentation() {
        assert!(circle().augmentation_check());
        let mut b = PearlComplex::builder("c", 2).unwrap();
        b.generator("y", 1).unwrap();
        b.generator("x", 0).unwrap();
        b.term("y", "x", 0).unwrap();
        assert!(!b.build().augmentation_check());
    }

    #[test]
    fn chain_maps() {
        let c = circle();
        let id = ChainMap::identity(&c);
        assert!(id.chain_check());
        assert!(id.is_quasi_iso().unwrap());
        let cl = clifford();
        let z = ChainMap::zero(&cl, &cl).unwrap();
        assert!(z.chain_check());
        assert!(!z.is_quasi_iso().unwrap());
        let comp = id.then(&id).unwrap();
        assert_eq!(comp, id);
        assert!(ChainMap::identity(&cl).then(&id).is_err());
    }

    #[test]
    fn morse_homology_of_acyclic_pair() {
        let c = PearlComplex::builder("c", 2)
            .unwrap()
            .with_generator("y1", 1)
            .unwrap()
            .with_generator("y", 0)
            .unwrap()
            .with_term("y1", "y", 0)
            .unwrap()
            .build();
        assert_eq!(c.morse_homology().values().sum::<usize>(), 0);
        assert_eq!(c.homology_full().unwrap().total(), 0);
    }

    #[test]
    fn permuted_keeps_shape_up_to_order() {
        let c = circle();
        let p = c.permuted(&[1, 0]).unwrap();
        assert_eq!(p.generators()[0].name, "Q");
        assert_eq!(p.homology_plus(None).unwrap(), c.homology_plus(None).unwrap());
        assert!(c.permuted(&[0, 0]).is_err());
    }
}
