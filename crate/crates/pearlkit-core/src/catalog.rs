//! Built-in worked examples: complexes, rings, module actions and disk-count
//! functions, each with a list of identities that `selftest` re-verifies.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use crate::coeff::{Field, Gf2, LaurentPoly, Rational, ScalarField};
use crate::minimal_model::{dichotomy, reduce, Dichotomy};
use crate::pearl_complex::{PearlComplex, PearlError};
use crate::quantum_algebra::{leibniz_check, AlgebraError, Element, InvertibleSearch, ModuleAction, QuantumAlgebra};
use crate::spectral_sequence::SpectralSequence;
use crate::torus::{coefficients, d1_class, synthesize, NuFunction, Synthesis};

/// Largest dimension parameter accepted by the constructors.
pub const MAX_N: i64 = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("inconsistent parameters: {0}")]
    Inconsistent(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Pearl(#[from] PearlError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    Complex(PearlComplex),
    Algebra(QuantumAlgebra<Gf2>),
    RationalAlgebra(QuantumAlgebra<Rational>),
    Module(ModuleAction<Gf2>),
    Nu(NuFunction),
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::Complex(_) => "pearl-complex",
            Payload::Algebra(_) | Payload::RationalAlgebra(_) => "algebra",
            Payload::Module(_) => "module-action",
            Payload::Nu(_) => "nu",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub payload: Payload,
}

fn ck(name: impl Into<String>, passed: bool) -> CheckResult {
    CheckResult { name: name.into(), passed }
}

fn in_range(what: &str, n: i64, lo: i64, hi: i64) -> Result<(), CatalogError> {
    if n < lo || n > hi {
        return Err(CatalogError::OutOfRange(format!("{what} = {n}, expected {lo}..={hi}")));
    }
    Ok(())
}

fn one<F: Field>() -> F {
    F::one()
}

// ---------------------------------------------------------------------------
// complexes

pub fn circle() -> PearlComplex {
    let mut b = PearlComplex::builder("circle", 2).expect("N = 2");
    b.generator("Q", 1).expect("fresh");
    b.generator("P", 0).expect("fresh");
    b.term("P", "Q", 1).expect("fresh");
    b.top(1).build()
}

/// Morse-type complex of a 2-torus with one extra cancelling pair.
pub fn torus_complex(name: &str) -> PearlComplex {
    let mut b = PearlComplex::builder(name, 2).expect("N = 2");
    for (g, d) in [("w", 2), ("a", 1), ("b", 1), ("c", 1), ("m", 0), ("e", 0)] {
        b.generator(g, d).expect("fresh");
    }
    b.term("c", "e", 0).expect("fresh");
    b.term("c", "m", 0).expect("fresh");
    b.top(2).build()
}

/// `alpha_0 .. alpha_n` with zero differential plus one cancelling pair.
pub fn rpn_complex(n: i64) -> Result<PearlComplex, CatalogError> {
    in_range("n", n, 2, MAX_N)?;
    let mut b = PearlComplex::builder(&format!("rpn-{n}-complex"), (n + 1) as u32).map_err(CatalogError::Pearl)?;
    for i in (0..=n).rev() {
        b.generator(&alpha(i), i)?;
    }
    b.generator("c1", 1)?;
    b.generator("c0", 0)?;
    b.term("c1", "c0", 0)?;
    b.term("c1", &alpha(0), 0)?;
    Ok(b.top(n).build())
}

pub fn quadric_sphere_complex(n: i64) -> Result<PearlComplex, CatalogError> {
    in_range("n", n, 2, MAX_N)?;
    let mut b = PearlComplex::builder(&format!("quadric-sphere-{n}-complex"), (2 * n) as u32)?;
    b.generator(&alpha(n), n)?;
    b.generator(&alpha(0), 0)?;
    Ok(b.top(n).build())
}

fn alpha(i: i64) -> String {
    format!("alpha{i}")
}

// ---------------------------------------------------------------------------
// tori

/// The Clifford torus ring, transcribed entry by entry.
pub fn clifford_ring() -> QuantumAlgebra<Gf2> {
    let o = Gf2::ONE;
    let mut b = QuantumAlgebra::<Gf2>::builder("clifford-T2", 2, 2).expect("N = 2");
    for (n, d) in [("w", 2), ("a", 1), ("b", 1), ("m", 0)] {
        b.basis(n, d).expect("fresh");
    }
    b.unit("w").expect("known");
    let table: [(&str, &str, &[(Gf2, &str, i64)]); 16] = [
        ("w", "w", &[(o, "w", 0)]),
        ("w", "a", &[(o, "a", 0)]),
        ("w", "b", &[(o, "b", 0)]),
        ("w", "m", &[(o, "m", 0)]),
        ("a", "w", &[(o, "a", 0)]),
        ("b", "w", &[(o, "b", 0)]),
        ("m", "w", &[(o, "m", 0)]),
        ("a", "b", &[(o, "m", 0), (o, "w", 1)]),
        ("b", "a", &[(o, "m", 0)]),
        ("a", "a", &[(o, "w", 1)]),
        ("b", "b", &[(o, "w", 1)]),
        ("m", "m", &[(o, "m", 1), (o, "w", 2)]),
        // forced by associativity: m a = (b a) a = b (a a)
        ("m", "a", &[(o, "b", 1)]),
        ("a", "m", &[(o, "a", 1), (o, "b", 1)]),
        ("m", "b", &[(o, "a", 1), (o, "b", 1)]),
        ("b", "m", &[(o, "a", 1)]),
    ];
    for (x, y, t) in table {
        b.product_terms(x, y, t).expect("fresh product");
    }
    b.aug("m", o).expect("fresh");
    b.build().expect("valid table")
}

pub fn split_torus_ring() -> QuantumAlgebra<Gf2> {
    let o = Gf2::ONE;
    let mut b = QuantumAlgebra::<Gf2>::builder("split-torus", 2, 2).expect("N = 2");
    for (n, d) in [("w", 2), ("a", 1), ("b", 1), ("m", 0)] {
        b.basis(n, d).expect("fresh");
    }
    b.unit("w").expect("known");
    let table: [(&str, &str, &[(Gf2, &str, i64)]); 13] = [
        ("w", "w", &[(o, "w", 0)]),
        ("w", "a", &[(o, "a", 0)]),
        ("w", "b", &[(o, "b", 0)]),
        ("w", "m", &[(o, "m", 0)]),
        ("a", "w", &[(o, "a", 0)]),
        ("b", "w", &[(o, "b", 0)]),
        ("m", "w", &[(o, "m", 0)]),
        ("a", "a", &[(o, "w", 1)]),
        ("b", "b", &[(o, "w", 1)]),
        ("a", "b", &[(o, "m", 0)]),
        ("b", "a", &[(o, "m", 0)]),
        ("m", "m", &[(o, "w", 2)]),
        ("a", "m", &[(o, "b", 1)]),
    ];
    for (x, y, t) in table {
        b.product_terms(x, y, t).expect("fresh product");
    }
    for (x, y, t) in [("m", "a", "b"), ("b", "m", "a"), ("m", "b", "a")] {
        b.product_terms(x, y, &[(o, t, 1)]).expect("fresh product");
    }
    b.aug("m", o).expect("fresh");
    b.build().expect("valid table")
}

pub fn clifford_nu() -> NuFunction {
    let mut nu = NuFunction::clifford();
    nu.name = "clifford-T2".to_string();
    nu
}

pub fn split_nu() -> NuFunction {
    let mut nu = NuFunction::split();
    nu.name = "split-torus".to_string();
    nu
}

// ---------------------------------------------------------------------------
// complex projective space

fn codim_name(j: i64, n: i64) -> String {
    match j {
        0 => "u".to_string(),
        _ if j == n => "p".to_string(),
        1 => "h".to_string(),
        _ => format!("h{j}"),
    }
}

/// Quantum homology of `CP^n` with `deg t = -maslov`; basis `u, h, h2, .., p`
/// by codimension, augmentation on the point class.
pub fn cpn<F: ScalarField>(n: i64, maslov: i64) -> Result<QuantumAlgebra<F>, CatalogError> {
    in_range("n", n, 1, MAX_N)?;
    if maslov < 2 || (2 * (n + 1)) % maslov != 0 {
        return Err(CatalogError::Inconsistent(format!("N_L = {maslov} must divide 2(n+1) = {}", 2 * (n + 1))));
    }
    let shift = 2 * (n + 1) / maslov;
    let mut b = QuantumAlgebra::<F>::builder(&format!("cpn-{n}"), maslov as u32, 2 * n)?;
    for j in 0..=n {
        b.basis(&codim_name(j, n), 2 * n - 2 * j)?;
    }
    b.unit("u")?;
    for i in 0..=n {
        for j in 0..=n {
            let (k, e) = if i + j <= n { (i + j, 0) } else { (i + j - n - 1, shift) };
            b.product_terms(&codim_name(i, n), &codim_name(j, n), &[(one(), &codim_name(k, n), e)])?;
        }
    }
    b.aug("p", one())?;
    b.build().map_err(Into::into)
}

/// Classical intersection numbers on `CP^n`: codimensions adding up to `n`.
pub fn cpn_pairing<F: Field>(n: i64) -> Vec<Vec<F>> {
    let size = (n + 1) as usize;
    (0..size).map(|i| (0..size).map(|j| if (i + j) as i64 == n { F::one() } else { F::zero() }).collect()).collect()
}

fn set_pairing<F: ScalarField>(m: &mut ModuleAction<F>, table: &[Vec<F>]) -> Result<(), AlgebraError> {
    let names: Vec<String> = m.ambient.basis().iter().map(|g| g.name.clone()).collect();
    for (i, row) in table.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if !v.is_zero() {
                m.set_pair(&names[i], &names[j], v.clone())?;
            }
        }
    }
    Ok(())
}

pub fn clifford_module() -> ModuleAction<Gf2> {
    let ambient = cpn::<Gf2>(2, 2).expect("valid");
    let lagr = clifford_ring();
    let mut m = ModuleAction::new("clifford-T2-module", ambient, lagr).expect("same N");
    for x in ["w", "a", "b", "m"] {
        for (j, a) in ["u", "h", "p"].iter().enumerate() {
            m.act_terms(a, x, &[(Gf2::ONE, x, j as i64)]).expect("fresh");
        }
    }
    m.incl_terms("m", &[(Gf2::ONE, "p", 0), (Gf2::ONE, "h", 1), (Gf2::ONE, "u", 2)]).expect("fresh");
    m.declare_incl();
    set_pairing(&mut m, &cpn_pairing(2)).expect("names");
    m
}

// ---------------------------------------------------------------------------
// real projective space

/// `alpha_i` for any integer `i`, using `alpha_{i+(n+1)} = alpha_i t^{-1}`.
fn rpn_index(i: i64, n: i64) -> (i64, i64) {
    let m = n + 1;
    (i.rem_euclid(m), -(i.div_euclid(m)))
}

/// Ring with `alpha_k alpha_j = alpha_{j+k-n}` for every `k, j`.
pub fn rpn_ring(n: i64) -> Result<QuantumAlgebra<Gf2>, CatalogError> {
    in_range("n", n, 2, MAX_N)?;
    let mut b = QuantumAlgebra::<Gf2>::builder(&format!("rpn-{n}"), (n + 1) as u32, n)?;
    for i in (0..=n).rev() {
        b.basis(&alpha(i), i)?;
    }
    b.unit(&alpha(n))?;
    for k in 0..=n {
        for j in 0..=n {
            let (i, e) = rpn_index(j + k - n, n);
            b.product_terms(&alpha(k), &alpha(j), &[(Gf2::ONE, &alpha(i), e)])?;
        }
    }
    b.aug(&alpha(0), Gf2::ONE)?;
    b.build().map_err(Into::into)
}

/// `CP^n` acting on `RP^n` with the inclusion split by the parity of `n`.
pub fn rpn_module(n: i64) -> Result<ModuleAction<Gf2>, CatalogError> {
    let ambient = cpn::<Gf2>(n, n + 1)?;
    let lagr = rpn_ring(n)?;
    let mut m = ModuleAction::new(&format!("rpn-{n}-module"), ambient, lagr)?;
    for j in 0..=n {
        for i in 0..=n {
            let (target, e) = rpn_index(i - 2 * j, n);
            m.act_terms(&codim_name(j, n), &alpha(i), &[(Gf2::ONE, &alpha(target), e)])?;
        }
    }
    // a_{2c} is the class of real dimension 2c, codimension n - c
    let a = |deg: i64| codim_name(n - deg / 2, n);
    m.declare_incl();
    for i in 0..=n {
        let image: Vec<(Gf2, String, i64)> = if n % 2 == 0 {
            if i % 2 == 0 {
                vec![(Gf2::ONE, a(i), 0)]
            } else {
                vec![(Gf2::ONE, a(i + n + 1), 1)]
            }
        } else if i % 2 == 0 {
            vec![(Gf2::ONE, a(i), 0), (Gf2::ONE, a(i + n + 1), 1)]
        } else {
            vec![]
        };
        if !image.is_empty() {
            let terms: Vec<(Gf2, &str, i64)> = image.iter().map(|(c, s, e)| (*c, s.as_str(), *e)).collect();
            m.incl_terms(&alpha(i), &terms)?;
        }
    }
    set_pairing(&mut m, &cpn_pairing(n))?;
    Ok(m)
}

// ---------------------------------------------------------------------------
// quadric

/// Elements of `Q[T][h, delta] / (h^{n+1} - 4hT, h delta, delta^2 - (-1)^k (h^n - 4T))`
/// in the basis `h^0 .. h^n` (and `delta` when `n = 2k`), coefficients
/// polynomials in `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct QuadricModel {
    n: i64,
}

type ModelVec = Vec<LaurentPoly<Rational>>;

impl QuadricModel {
    fn even(&self) -> bool {
        self.n % 2 == 0
    }

    fn len(&self) -> usize {
        (self.n + 1) as usize + usize::from(self.even())
    }

    fn delta(&self) -> usize {
        (self.n + 1) as usize
    }

    fn zero(&self) -> ModelVec {
        vec![LaurentPoly::zero(); self.len()]
    }

    fn rat(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    fn c(v: i64) -> LaurentPoly<Rational> {
        LaurentPoly::constant(Rational::from_i64(v))
    }

    fn big_t() -> LaurentPoly<Rational> {
        LaurentPoly::t_power(1)
    }

    fn mul(&self, x: &ModelVec, y: &ModelVec) -> ModelVec {
        let n = self.n;
        let mut out = self.zero();
        for i in 0..=n as usize {
            for j in 0..=n as usize {
                let mut c = x[i].times(&y[j]);
                if c.is_zero() {
                    continue;
                }
                let mut m = (i + j) as i64;
                while m > n {
                    m -= n;
                    c = c.times(&Self::c(4)).times(&Self::big_t());
                }
                out[m as usize] = out[m as usize].plus(&c);
            }
        }
        if self.even() {
            let d = self.delta();
            out[d] = out[d].plus(&x[0].times(&y[d])).plus(&x[d].times(&y[0]));
            let dd = x[d].times(&y[d]);
            if !dd.is_zero() {
                let sign = if (n / 2) % 2 == 0 { 1 } else { -1 };
                let nn = n as usize;
                out[nn] = out[nn].plus(&dd.times(&Self::c(sign)));
                out[0] = out[0].plus(&dd.times(&Self::c(-4 * sign)).times(&Self::big_t()));
            }
        }
        out
    }
}

/// Basis of the quadric: `u`, `h^j` below the middle, `a, b` in the middle
/// (even `n`), `l{j}` above the middle, `p`; all indexed by codimension.
fn quadric_basis(n: i64) -> Vec<(String, i64)> {
    let mut out = Vec::new();
    for j in 0..=n {
        let deg = 2 * n - 2 * j;
        if 2 * j == n {
            out.push(("a".to_string(), deg));
            out.push(("b".to_string(), deg));
        } else if j == 0 || j == n || 2 * j < n {
            out.push((codim_name(j, n), deg));
        } else {
            out.push((format!("l{j}"), deg));
        }
    }
    out
}

fn quadric_to_model(model: &QuadricModel, name: &str) -> ModelVec {
    let n = model.n;
    let mut v = model.zero();
    let half = LaurentPoly::constant(QuadricModel::rat(1, 2));
    match name {
        "u" => v[0] = QuadricModel::c(1),
        "p" => {
            v[n as usize] = half;
            v[0] = QuadricModel::c(-1).times(&QuadricModel::big_t());
        }
        "a" | "b" => {
            let k = (n / 2) as usize;
            v[k] = half.clone();
            v[model.delta()] = if name == "a" { half } else { half.negated() };
        }
        _ => {
            let (j, halved) = match name.strip_prefix('l') {
                Some(rest) => (rest.parse::<usize>().expect("basis name"), true),
                None if name == "h" => (1, false),
                None => (name[1..].parse::<usize>().expect("basis name"), false),
            };
            v[j] = if halved { half } else { QuadricModel::c(1) };
        }
    }
    v
}

/// Converts a model vector back to `(basis name, T-polynomial)` coefficients.
fn quadric_from_model(model: &QuadricModel, v: &ModelVec) -> Vec<(String, LaurentPoly<Rational>)> {
    let n = model.n;
    let mut out: Vec<(String, LaurentPoly<Rational>)> =
        quadric_basis(n).into_iter().map(|(name, _)| (name, LaurentPoly::zero())).collect();
    let mut add = |name: &str, c: LaurentPoly<Rational>| {
        let slot = out.iter_mut().find(|(s, _)| s == name).expect("basis name");
        slot.1 = slot.1.plus(&c);
    };
    for j in 0..=n {
        let c = v[j as usize].clone();
        if c.is_zero() {
            continue;
        }
        if j == n {
            add("p", c.times(&QuadricModel::c(2)));
            add("u", c.times(&QuadricModel::c(2)).times(&QuadricModel::big_t()));
        } else if 2 * j == n {
            add("a", c.clone());
            add("b", c);
        } else if 2 * j < n {
            add(&codim_name(j, n), c);
        } else {
            add(&format!("l{j}"), c.times(&QuadricModel::c(2)));
        }
    }
    if model.even() {
        let d = v[model.delta()].clone();
        if !d.is_zero() {
            add("a", d.clone());
            add("b", d.negated());
        }
    }
    out
}

/// Quantum homology of the `n`-dimensional quadric with integer structure
/// constants, as a rational algebra; `deg t = -maslov`, `maslov | 2n`.
pub fn quadric(n: i64, maslov: i64) -> Result<QuantumAlgebra<Rational>, CatalogError> {
    in_range("n", n, 2, MAX_N)?;
    if maslov < 2 || (2 * n) % maslov != 0 {
        return Err(CatalogError::Inconsistent(format!("N_L = {maslov} must divide 2n = {}", 2 * n)));
    }
    let shift = 2 * n / maslov;
    let model = QuadricModel { n };
    let basis = quadric_basis(n);
    let mut b = QuantumAlgebra::<Rational>::builder(&format!("quadric-{n}"), maslov as u32, 2 * n)?;
    for (name, deg) in &basis {
        b.basis(name, *deg)?;
    }
    b.unit("u")?;
    for (x, _) in &basis {
        for (y, _) in &basis {
            let prod = model.mul(&quadric_to_model(&model, x), &quadric_to_model(&model, y));
            let mut terms: Vec<(Rational, String, i64)> = Vec::new();
            for (name, poly) in quadric_from_model(&model, &prod) {
                for (e, c) in poly.terms() {
                    terms.push((c.clone(), name.clone(), e * shift));
                }
            }
            if !terms.is_empty() {
                let refs: Vec<(Rational, &str, i64)> =
                    terms.iter().map(|(c, s, e)| (c.clone(), s.as_str(), *e)).collect();
                b.product_terms(x, y, &refs)?;
            }
        }
    }
    b.aug("p", <Rational as One>::one())?;
    b.build().map_err(Into::into)
}

/// Classical intersection numbers on the quadric.
pub fn quadric_pairing<F: Field>(n: i64) -> Vec<Vec<F>> {
    let basis = quadric_basis(n);
    let codim = |name: &str, deg: i64| -> i64 {
        let _ = name;
        n - deg / 2
    };
    let k_odd = (n / 2) % 2 == 1;
    basis
        .iter()
        .map(|(x, dx)| {
            basis
                .iter()
                .map(|(y, dy)| {
                    let middle = n % 2 == 0 && 2 * codim(x, *dx) == n && 2 * codim(y, *dy) == n;
                    let v = if middle { (x != y) == k_odd } else { codim(x, *dx) + codim(y, *dy) == n };
                    if v {
                        F::one()
                    } else {
                        F::zero()
                    }
                })
                .collect()
        })
        .collect()
}

pub fn quadric_mod2(n: i64, maslov: i64) -> Result<QuantumAlgebra<Gf2>, CatalogError> {
    Ok(quadric(n, maslov)?.reduce_mod2()?.with_name(&format!("quadric-mod2-{n}")))
}

/// Lagrangian sphere in the quadric of even dimension `n`, `N_L = 2n`.
pub fn quadric_sphere_module(n: i64) -> Result<ModuleAction<Gf2>, CatalogError> {
    in_range("n", n, 2, MAX_N)?;
    if n % 2 != 0 {
        return Err(CatalogError::OutOfRange(format!("n = {n} must be even")));
    }
    let ambient = quadric_mod2(n, 2 * n)?;
    let o = Gf2::ONE;
    let (top, pt) = (alpha(n), alpha(0));
    let mut lb = QuantumAlgebra::<Gf2>::builder(&format!("quadric-sphere-{n}"), (2 * n) as u32, n)?;
    lb.basis(&top, n)?;
    lb.basis(&pt, 0)?;
    lb.unit(&top)?;
    lb.product_terms(&top, &top, &[(o, &top, 0)])?;
    lb.product_terms(&top, &pt, &[(o, &pt, 0)])?;
    lb.product_terms(&pt, &top, &[(o, &pt, 0)])?;
    lb.product_terms(&pt, &pt, &[(o, &top, 1)])?;
    let lagr = lb.build()?;
    let mut m = ModuleAction::new(&format!("quadric-sphere-{n}-module"), ambient, lagr)?;
    for x in [&top, &pt] {
        m.act_terms("u", x, &[(o, x, 0)])?;
        m.act_terms("p", x, &[(o, x, 1)])?;
    }
    for mid in ["a", "b"] {
        m.act_terms(mid, &top, &[(o, &pt, 0)])?;
        m.act_terms(mid, &pt, &[(o, &top, 1)])?;
    }
    m.incl_terms(&pt, &[(o, "p", 0), (o, "u", 1)])?;
    m.incl_terms(&top, &[(o, "a", 0), (o, "b", 0)])?;
    set_pairing(&mut m, &quadric_pairing(n))?;
    Ok(m)
}

/// Which alternative of the point-class action holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointAction {
    /// `p alpha_0 = alpha_n t^3`, `p alpha_n = alpha_0 t`.
    Swap,
    /// `p alpha_0 = alpha_0 t^2 + s alpha_n t^3`, `p alpha_n = r alpha_0 t + alpha_n t^2`.
    Diagonal { s: bool, r: bool },
}

/// Lagrangians with `2 H_1 = 0` in the quadric, restricted to the span of
/// the point and fundamental classes on both sides; `N_L = n`.
pub fn quadric_2h1_module(n: i64, case: PointAction) -> Result<ModuleAction<Gf2>, CatalogError> {
    in_range("n", n, 4, MAX_N)?;
    let o = Gf2::ONE;
    let mut ab = QuantumAlgebra::<Gf2>::builder(&format!("quadric-up-{n}"), n as u32, 2 * n)?;
    ab.basis("u", 2 * n)?;
    ab.basis("p", 0)?;
    ab.unit("u")?;
    ab.product_terms("u", "u", &[(o, "u", 0)])?;
    ab.product_terms("u", "p", &[(o, "p", 0)])?;
    ab.product_terms("p", "u", &[(o, "p", 0)])?;
    ab.product_terms("p", "p", &[(o, "u", 4)])?;
    ab.aug("p", o)?;
    let ambient = ab.build()?;

    let (top, pt) = (alpha(n), alpha(0));
    // alpha_0 alpha_0 = x alpha_0 t + y alpha_n t^2 must commute with the action
    let (square, tag): (Vec<(Gf2, &str, i64)>, String) = match case {
        PointAction::Swap => (vec![(o, top.as_str(), 2)], "1".to_string()),
        PointAction::Diagonal { s, r } => {
            if s && r {
                return Err(CatalogError::Inconsistent("s r must vanish".into()));
            }
            if s && !r {
                return Err(CatalogError::Inconsistent("s = 1, r = 0 admits no two-sided product on alpha_0".into()));
            }
            let sq = if r { vec![] } else { vec![(o, top.as_str(), 2)] };
            (sq, format!("2-{}{}", u8::from(s), u8::from(r)))
        }
    };
    let mut lb = QuantumAlgebra::<Gf2>::builder(&format!("quadric-2h1-{n}-{tag}"), n as u32, n)?;
    lb.basis(&top, n)?;
    lb.basis(&pt, 0)?;
    lb.unit(&top)?;
    lb.product_terms(&top, &top, &[(o, &top, 0)])?;
    lb.product_terms(&top, &pt, &[(o, &pt, 0)])?;
    lb.product_terms(&pt, &top, &[(o, &pt, 0)])?;
    if !square.is_empty() {
        lb.product_terms(&pt, &pt, &square)?;
    }
    let lagr = lb.build()?;
    let mut m = ModuleAction::new(&format!("quadric-2h1-{n}-{tag}-module"), ambient, lagr)?;
    for x in [&top, &pt] {
        m.act_terms("u", x, &[(o, x, 0)])?;
    }
    match case {
        PointAction::Swap => {
            m.act_terms("p", &pt, &[(o, &top, 3)])?;
            m.act_terms("p", &top, &[(o, &pt, 1)])?;
        }
        PointAction::Diagonal { s, r } => {
            let mut p0 = vec![(o, pt.as_str(), 2)];
            if s {
                p0.push((o, top.as_str(), 3));
            }
            let mut pn = vec![(o, top.as_str(), 2)];
            if r {
                pn.push((o, pt.as_str(), 1));
            }
            m.act_terms("p", &pt, &p0)?;
            m.act_terms("p", &top, &pn)?;
        }
    }
    if n % 2 == 1 {
        m.declare_incl();
        match case {
            PointAction::Swap => {
                m.incl_terms(&pt, &[(o, "p", 0)])?;
                m.incl_terms(&top, &[(o, "u", 1)])?;
            }
            PointAction::Diagonal { r, .. } => {
                m.incl_terms(&pt, &[(o, "p", 0), (o, "u", 2)])?;
                if r {
                    m.incl_terms(&top, &[(o, "u", 1)])?;
                }
            }
        }
    }
    m.set_pair("u", "p", o)?;
    m.set_pair("p", "u", o)?;
    Ok(m)
}

// ---------------------------------------------------------------------------
// complete intersections

/// `i_L(alpha_0) = p - c h^{n-N} t` for a Lagrangian sphere in a complete
/// intersection, with `c` the product of `(d_i - 1)!`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CiInclusion {
    pub n: i64,
    pub degrees: Vec<i64>,
    /// Minimal Chern number `n + r + 1 - sum d_i`.
    pub chern: i64,
    pub coefficient: BigInt,
    pub h_power: i64,
}

impl CiInclusion {
    /// `(coefficient, class, t-exponent)` terms over the integers.
    pub fn terms(&self) -> Vec<(BigInt, String, i64)> {
        vec![(BigInt::one(), "p".to_string(), 0), (-self.coefficient.clone(), codim_name(self.h_power, self.n), 1)]
    }

    pub fn terms_mod2(&self) -> Vec<(String, i64)> {
        self.terms().into_iter().filter(|(c, _, _)| c.is_odd_value()).map(|(_, s, e)| (s, e)).collect()
    }
}

trait OddValue {
    fn is_odd_value(&self) -> bool;
}

impl OddValue for BigInt {
    fn is_odd_value(&self) -> bool {
        (self % BigInt::from(2)).abs().is_one()
    }
}

impl core::fmt::Display for CiInclusion {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let cls = codim_name(self.h_power, self.n);
        if self.coefficient.is_one() {
            write!(f, "p - {cls} t")
        } else {
            write!(f, "p - {} {cls} t", self.coefficient)
        }
    }
}

pub fn ci_inclusion(n: i64, degrees: &[i64]) -> Result<CiInclusion, CatalogError> {
    if degrees.is_empty() || degrees.iter().any(|&d| d < 1) {
        return Err(CatalogError::Hypothesis("degrees must be positive and nonempty".into()));
    }
    if degrees.iter().all(|&d| d == 1) {
        return Err(CatalogError::Hypothesis("at least one degree must exceed 1".into()));
    }
    let r = degrees.len() as i64;
    let sum: i64 = degrees.iter().sum();
    if n < 3 {
        return Err(CatalogError::Hypothesis(format!("n = {n} < 3")));
    }
    if n < 2 * sum - 2 * r + 1 {
        return Err(CatalogError::Hypothesis(format!("n = {n} < 2 sum d_i - 2r + 1 = {}", 2 * sum - 2 * r + 1)));
    }
    let chern = n + r + 1 - sum;
    if chern <= 0 {
        return Err(CatalogError::Hypothesis(format!("N = {chern} is not positive")));
    }
    let mut coefficient = BigInt::one();
    for &d in degrees {
        for k in 2..d {
            coefficient *= BigInt::from(k);
        }
    }
    Ok(CiInclusion { n, degrees: degrees.to_vec(), chern, coefficient, h_power: n - chern })
}

// ---------------------------------------------------------------------------
// listing and checks

pub fn catalog() -> Vec<CatalogEntry> {
    let mut names: Vec<String> = vec![
        "circle".into(),
        "clifford-T2".into(),
        "clifford-T2-module".into(),
        "clifford-T2-complex".into(),
        "clifford-T2-nu".into(),
        "split-torus".into(),
        "split-torus-complex".into(),
        "split-torus-nu".into(),
    ];
    for n in 1..=MAX_N {
        names.push(format!("cpn-{n}"));
    }
    for n in 2..=MAX_N {
        names.push(format!("rpn-{n}"));
        names.push(format!("rpn-{n}-module"));
        names.push(format!("rpn-{n}-complex"));
    }
    for n in 2..=MAX_N {
        names.push(format!("quadric-{n}"));
        names.push(format!("quadric-mod2-{n}"));
    }
    for n in (2..=MAX_N).step_by(2) {
        names.push(format!("quadric-sphere-{n}-module"));
        names.push(format!("quadric-sphere-{n}-complex"));
    }
    for n in 4..=MAX_N {
        for tag in ["1", "2-00", "2-01"] {
            names.push(format!("quadric-2h1-{n}-{tag}-module"));
        }
    }
    names.into_iter().map(|n| entry(&n).expect("listed entries exist")).collect()
}

pub fn names() -> Vec<String> {
    catalog().into_iter().map(|e| e.name).collect()
}

fn param(name: &str, prefix: &str, suffix: &str) -> Option<i64> {
    name.strip_prefix(prefix)?.strip_suffix(suffix)?.parse().ok()
}

pub fn entry(name: &str) -> Result<CatalogEntry, CatalogError> {
    let payload = match name {
        "circle" => Payload::Complex(circle()),
        "clifford-T2" => Payload::Algebra(clifford_ring()),
        "clifford-T2-module" => Payload::Module(clifford_module()),
        "clifford-T2-complex" => Payload::Complex(torus_complex(name)),
        "clifford-T2-nu" => Payload::Nu(clifford_nu()),
        "split-torus" => Payload::Algebra(split_torus_ring()),
        "split-torus-complex" => Payload::Complex(torus_complex(name)),
        "split-torus-nu" => Payload::Nu(split_nu()),
        _ => parametric(name)?,
    };
    Ok(CatalogEntry { name: name.to_string(), payload })
}

fn parametric(name: &str) -> Result<Payload, CatalogError> {
    let unknown = || CatalogError::UnknownEntry(name.to_string());
    if let Some(n) = param(name, "rpn-", "-module") {
        return Ok(Payload::Module(rpn_module(n)?));
    }
    if let Some(n) = param(name, "rpn-", "-complex") {
        return Ok(Payload::Complex(rpn_complex(n)?));
    }
    if let Some(n) = param(name, "rpn-", "") {
        return Ok(Payload::Algebra(rpn_ring(n)?));
    }
    if let Some(n) = param(name, "cpn-", "") {
        return Ok(Payload::RationalAlgebra(cpn::<Rational>(n, 2)?));
    }
    if let Some(n) = param(name, "quadric-mod2-", "") {
        return Ok(Payload::Algebra(quadric_mod2(n, 2 * n)?));
    }
    if let Some(n) = param(name, "quadric-sphere-", "-module") {
        return Ok(Payload::Module(quadric_sphere_module(n)?));
    }
    if let Some(n) = param(name, "quadric-sphere-", "-complex") {
        return Ok(Payload::Complex(quadric_sphere_complex(n)?));
    }
    if let Some(rest) = name.strip_prefix("quadric-2h1-").and_then(|r| r.strip_suffix("-module")) {
        let (n, tag) = rest.split_once('-').ok_or_else(unknown)?;
        let n: i64 = n.parse().map_err(|_| unknown())?;
        let case = match tag {
            "1" => PointAction::Swap,
            "2-00" => PointAction::Diagonal { s: false, r: false },
            "2-01" => PointAction::Diagonal { s: false, r: true },
            "2-10" => PointAction::Diagonal { s: true, r: false },
            "2-11" => PointAction::Diagonal { s: true, r: true },
            _ => return Err(unknown()),
        };
        return Ok(Payload::Module(quadric_2h1_module(n, case)?));
    }
    if let Some(n) = param(name, "quadric-", "") {
        return Ok(Payload::RationalAlgebra(quadric(n, 2 * n)?));
    }
    Err(unknown())
}

impl CatalogEntry {
    /// Runs every identity attached to this entry.
    pub fn checks(&self) -> Vec<CheckResult> {
        match run_checks(self) {
            Ok(v) => v,
            Err(e) => vec![ck(format!("construction: {e}"), false)],
        }
    }
}

pub fn selftest() -> Vec<(String, Vec<CheckResult>)> {
    catalog().into_iter().map(|e| (e.name.clone(), e.checks())).collect()
}

fn elem<F: ScalarField>(a: &QuantumAlgebra<F>, terms: &[(i64, &str, i64)]) -> Element<F> {
    let t: Vec<(F, &str, i64)> = terms.iter().map(|&(c, n, e)| (F::from_i64(c), n, e)).collect();
    a.element(&t).expect("catalog basis names")
}

fn basis<F: ScalarField>(a: &QuantumAlgebra<F>, name: &str) -> Element<F> {
    a.basis_element(name).expect("catalog basis names")
}

fn lag<F: ScalarField>(m: &ModuleAction<F>, terms: &[(i64, &str, i64)]) -> Element<F> {
    elem(&m.lagr, terms)
}

fn run_checks(e: &CatalogEntry) -> Result<Vec<CheckResult>, CatalogError> {
    let name = e.name.as_str();
    let mut out = Vec::new();
    match &e.payload {
        Payload::Complex(c) => complex_checks(name, c, &mut out)?,
        Payload::Algebra(a) => {
            let r = a.verify_algebra();
            out.push(ck("homogeneity", r.homogeneity.is_empty()));
            out.push(ck("unit", r.unit.is_empty()));
            out.push(ck("associativity", r.associativity.is_empty()));
            if a.explicit_aug().is_some() {
                out.push(ck("frobenius pairing nondegenerate", a.frobenius_check()?));
            }
            if name == "clifford-T2" {
                clifford_checks(a, &mut out)?;
            } else if name == "split-torus" {
                split_checks(a, &mut out)?;
            } else if let Some(n) = param(name, "rpn-", "") {
                rpn_ring_checks(a, n, &mut out);
            } else if let Some(n) = param(name, "quadric-mod2-", "") {
                quadric_mod2_checks(a, n, &mut out);
            }
        }
        Payload::RationalAlgebra(a) => {
            let r = a.verify_algebra();
            out.push(ck("homogeneity", r.homogeneity.is_empty()));
            out.push(ck("unit", r.unit.is_empty()));
            out.push(ck("associativity", r.associativity.is_empty()));
            if a.explicit_aug().is_some() {
                out.push(ck("frobenius pairing nondegenerate", a.frobenius_check()?));
            }
            if let Some(n) = param(name, "cpn-", "") {
                cpn_checks(a, n, &mut out)?;
            } else if let Some(n) = param(name, "quadric-", "") {
                quadric_checks(a, n, &mut out)?;
            }
        }
        Payload::Module(m) => {
            let r = m.verify_module();
            out.push(ck("module homogeneity", r.homogeneity.is_empty()));
            out.push(ck("module associativity", r.associativity.is_empty()));
            out.push(ck("module unit", r.unit.is_empty()));
            out.push(ck("two-sided action", r.two_sided.is_empty()));
            out.push(ck("inclusion is a module map", r.inclusion.is_empty()));
            out.push(ck("inclusion pairing identity", r.pairing.is_empty()));
            let la = m.lagr.verify_algebra();
            out.push(ck("Lagrangian ring axioms", la.passes()));
            if m.ambient.name().starts_with("cpn-") {
                let h = basis(&m.ambient, "h");
                out.push(ck("h acts invertibly (2-periodicity)", m.acts_invertibly(&h)));
            }
            if name == "clifford-T2-module" {
                clifford_module_checks(m, &mut out);
            } else if let Some(n) = param(name, "rpn-", "-module") {
                rpn_module_checks(m, n, &mut out);
            } else if let Some(n) = param(name, "quadric-sphere-", "-module") {
                sphere_checks(m, n, &mut out);
            } else if name.starts_with("quadric-2h1-") {
                let p = basis(&m.ambient, "p");
                let pp = m.ambient.multiply(&p, &p);
                let n = m.lagr.top();
                for x in 0..m.lagr.dim() {
                    let ex = Element::basis(x);
                    out.push(ck(
                        format!("p (p {}) = (p p) {}", m.lagr.basis()[x].name, m.lagr.basis()[x].name),
                        m.act(&p, &m.act(&p, &ex)) == m.act(&pp, &ex),
                    ));
                }
                out.push(ck("p p = u t^4", pp == elem(&m.ambient, &[(1, "u", 4)])));
                out.push(ck("inclusion present iff n odd", m.incl().is_some() == (n % 2 == 1)));
            }
        }
        Payload::Nu(nu) => {
            out.push(ck("first disk class vanishes", d1_class(nu) == (false, false)));
            let expected = if name == "clifford-T2-nu" { (true, true, true) } else { (true, true, false) };
            out.push(ck("alpha, beta, gamma sum", coefficients(nu) == expected));
            if let Synthesis::Ring(r) = synthesize(nu)? {
                let catalog_ring = if name == "clifford-T2-nu" { clifford_ring() } else { split_torus_ring() };
                out.push(ck("synthesized ring equals catalog ring", r.ring == catalog_ring));
                out.push(ck("synthesized ring axioms", r.ring.verify_algebra().passes()));
            } else {
                out.push(ck("synthesized ring", false));
            }
        }
    }
    Ok(out)
}

fn complex_checks(name: &str, c: &PearlComplex, out: &mut Vec<CheckResult>) -> Result<(), CatalogError> {
    out.push(ck("valid", c.validate().is_valid()));
    out.push(ck("augmentation", c.augmentation_check()));
    out.push(ck("duality", c.check_duality()?));
    let model = reduce(c)?;
    out.push(ck("minimal model", model.verify()?.all_ok()));
    let mut ss = SpectralSequence::new(c)?;
    out.push(ck("spectral sequence abuts", ss.abutment_check()?));
    let top = c.top().expect("catalog complexes declare top");
    let top_name = c.generators().iter().find(|g| g.degree == top).map(|g| g.name.clone()).unwrap_or_default();
    let top_in_model = model.model.generators().iter().any(|g| g.name == top_name);
    if name == "circle" {
        let plus = c.homology_plus(Some((-3, 2)))?;
        let expected = (-3..=2).all(|i| plus.get(i) == Some(usize::from(i == 1)));
        out.push(ck("positive homology is Z2 in degree 1", expected));
        out.push(ck("Laurent homology vanishes", c.homology_full()?.total() == 0));
        let m = &model.model;
        let p = m.lookup("P")?;
        let q = m.lookup("Q")?;
        out.push(ck("reduced differential dP = Q t", m.terms(p).iter().copied().eq([(q, 1)])));
        out.push(ck("quantum homology vanishes", model.qh_vanishes("Q")?));
        out.push(ck("collapse page", ss.collapse_page() == 2));
    } else {
        out.push(ck("reduced differential vanishes", model.qh_is_full()));
        out.push(ck("top class survives", top_in_model && !model.qh_vanishes(&top_name)?));
        let k = c.min_degree().unwrap_or(0).max(1);
        let verdict = dichotomy(&model.model, top, k);
        out.push(ck("dichotomy verdict Full", matches!(verdict, Ok(Dichotomy::Full))));
    }
    Ok(())
}

fn clifford_checks(a: &QuantumAlgebra<Gf2>, out: &mut Vec<CheckResult>) -> Result<(), CatalogError> {
    let b = |n: &str| basis(a, n);
    let mul = |x: &str, y: &str| a.multiply(&b(x), &b(y));
    out.push(ck("a b = m + w t", mul("a", "b") == elem(a, &[(1, "m", 0), (1, "w", 1)])));
    out.push(ck("b a = m", mul("b", "a") == b("m")));
    out.push(ck("a a = w t", mul("a", "a") == elem(a, &[(1, "w", 1)])));
    out.push(ck("b b = w t", mul("b", "b") == elem(a, &[(1, "w", 1)])));
    out.push(ck("m m = m t + w t^2", mul("m", "m") == elem(a, &[(1, "m", 1), (1, "w", 2)])));
    out.push(ck("noncommutative", !a.verify_algebra().commutative));
    Ok(())
}

fn split_checks(a: &QuantumAlgebra<Gf2>, out: &mut Vec<CheckResult>) -> Result<(), CatalogError> {
    let b = |n: &str| basis(a, n);
    let mul = |x: &str, y: &str| a.multiply(&b(x), &b(y));
    out.push(ck("a b = b a = m", mul("a", "b") == b("m") && mul("b", "a") == b("m")));
    out.push(ck("m m = w t^2", mul("m", "m") == elem(a, &[(1, "w", 2)])));
    out.push(ck("commutative", a.verify_algebra().commutative));
    let minimal = reduce(&torus_complex("split-torus-complex"))?.model;
    let leibniz = leibniz_check(&minimal, a);
    out.push(ck("Leibniz rule for the first differential", leibniz.unwrap_or(false)));
    Ok(())
}

fn clifford_module_checks(m: &ModuleAction<Gf2>, out: &mut Vec<CheckResult>) {
    let h = basis(&m.ambient, "h");
    for x in ["a", "b", "w", "m"] {
        let ex = basis(&m.lagr, x);
        out.push(ck(format!("h {x} = {x} t"), m.act(&h, &ex) == ex.shifted(1)));
    }
    let im = m.include(&basis(&m.lagr, "m"));
    out.push(ck("i(m) = p + h t + u t^2", im == Some(elem(&m.ambient, &[(1, "p", 0), (1, "h", 1), (1, "u", 2)]))));
    for x in ["a", "b", "w"] {
        out.push(ck(format!("i({x}) = 0"), m.include(&basis(&m.lagr, x)).is_some_and(|v| v.is_zero())));
    }
}

fn rpn_ring_checks(a: &QuantumAlgebra<Gf2>, n: i64, out: &mut Vec<CheckResult>) {
    let al = |i: i64| basis(a, &alpha(i));
    let mut law = true;
    let mut odd_law = true;
    for k in 0..=n {
        for j in 0..=n {
            let (i, e) = rpn_index(j + k - n, n);
            let ok = a.multiply(&al(k), &al(j)) == al(i).shifted(e);
            law &= ok;
            if k % 2 == 1 || j % 2 == 1 {
                odd_law &= ok;
            }
        }
    }
    out.push(ck("alpha_k alpha_j = alpha_{j+k-n} when k or j is odd", odd_law));
    out.push(ck("alpha_k alpha_j = alpha_{j+k-n} for all k, j", law));
    if n % 2 == 1 {
        let nm1 = al(n - 1);
        out.push(ck("alpha_{n-1} alpha_{n-1} = alpha_{n-2}", a.multiply(&nm1, &nm1) == al(n - 2)));
    }
}

fn rpn_module_checks(m: &ModuleAction<Gf2>, n: i64, out: &mut Vec<CheckResult>) {
    let a = &m.lagr;
    let al = |i: i64| {
        let (idx, e) = rpn_index(i, n);
        basis(a, &alpha(idx)).shifted(e)
    };
    let h = basis(&m.ambient, "h");
    let hp = |k: i64, x: &Element<Gf2>| (0..k).fold(x.clone(), |acc, _| m.act(&h, &acc));
    out.push(ck("h alpha_i = alpha_{i-2}", (0..=n).all(|i| m.act(&h, &al(i)) == al(i - 2))));
    // odd k: h^{(k+1)/2} alpha_k = alpha_{-1} = alpha_n t, so h^{(k+1)/2}(alpha_k alpha_j) = alpha_j t
    let mut derived = true;
    for k in (1..=n).step_by(2) {
        for j in 0..=n {
            derived &= hp((k + 1) / 2, &a.multiply(&al(k), &al(j))) == al(j).shifted(1);
        }
    }
    if n % 2 == 0 {
        // even k: alpha_k = h^{(n-k)/2} alpha_n
        for k in (0..=n).step_by(2) {
            for j in 0..=n {
                derived &= a.multiply(&al(k), &al(j)) == hp((n - k) / 2, &al(j));
            }
        }
    }
    out.push(ck("products agree with the action of h", derived));
    let cls = |deg: i64| basis(&m.ambient, &codim_name(n - deg / 2, n));
    let mut parity = true;
    for i in 0..=n {
        let want = if n % 2 == 0 {
            if i % 2 == 0 {
                cls(i)
            } else {
                cls(i + n + 1).shifted(1)
            }
        } else if i % 2 == 0 {
            cls(i).plus(&cls(i + n + 1).shifted(1))
        } else {
            Element::zero()
        };
        parity &= m.include(&al(i)) == Some(want);
    }
    out.push(ck("inclusion parity table", parity));
}

fn sphere_checks(m: &ModuleAction<Gf2>, n: i64, out: &mut Vec<CheckResult>) {
    let pt = basis(&m.lagr, &alpha(0));
    let top = basis(&m.lagr, &alpha(n));
    let p = basis(&m.ambient, "p");
    out.push(ck("p alpha_0 = alpha_0 t", m.act(&p, &pt) == pt.shifted(1)));
    out.push(ck("p alpha_n = alpha_n t", m.act(&p, &top) == top.shifted(1)));
    out.push(ck("i(alpha_0) = p + u t", m.include(&pt) == Some(elem(&m.ambient, &[(1, "p", 0), (1, "u", 1)]))));
    out.push(ck("alpha_0 alpha_0 = alpha_n t", m.lagr.multiply(&pt, &pt) == lag(m, &[(1, &alpha(n), 1)])));
    out.push(ck("a acts invertibly", m.acts_invertibly(&basis(&m.ambient, "a"))));
    let h = m.ambient.lookup("h").map(Element::basis);
    if let Ok(h) = h {
        out.push(ck("h alpha_0 = 0", m.act(&h, &pt).is_zero()));
    }
}

fn cpn_checks(a: &QuantumAlgebra<Rational>, n: i64, out: &mut Vec<CheckResult>) -> Result<(), CatalogError> {
    let h = basis(a, &codim_name(1, n));
    let mut powers = true;
    for j in 0..=n {
        powers &= a.power(&h, j as u32) == basis(a, &codim_name(j, n));
    }
    out.push(ck("h^j = h^{cap j} for j <= n", powers));
    let shift = 2 * (n + 1) / i64::from(a.ctx().maslov());
    out.push(ck("h^{n+1} = u t^{2(n+1)/N}", a.power(&h, (n + 1) as u32) == elem(a, &[(1, "u", shift)])));
    let inv = a.invert_laurent(&h);
    out.push(ck("h inverse = h^n t^{-2(n+1)/N}", inv == Some(a.power(&h, n as u32).shifted(-shift))));
    let unit = a.unit_element();
    out.push(ck("h is invertible", a.invert(&h).is_some()));
    if let Some(inv) = &inv {
        out.push(ck("h h^-1 = h^-1 h = u", a.multiply(&h, inv) == unit && a.multiply(inv, &h) == unit));
    }
    let pairing = cpn_pairing::<Rational>(n);
    let euler = a.quantum_euler(Some(&pairing))?;
    out.push(ck("euler class has degree 0", euler.degree_zero));
    out.push(ck("euler class is basis independent", euler.basis_independent));
    out.push(ck("semisimple", a.is_invertible(&euler.element)));
    Ok(())
}

fn quadric_checks(a: &QuantumAlgebra<Rational>, n: i64, out: &mut Vec<CheckResult>) -> Result<(), CatalogError> {
    let integral = a
        .basis()
        .iter()
        .enumerate()
        .all(|(i, _)| (0..a.dim()).all(|j| a.structure_constant(i, j).terms().all(|(_, _, c)| c.is_integer())));
    out.push(ck("integral structure constants", integral));
    let big_t = 2 * n / i64::from(a.ctx().maslov());
    let classical_power = |j: i64| -> Element<Rational> {
        if j == 0 {
            basis(a, "u")
        } else if 2 * j < n {
            basis(a, &codim_name(j, n))
        } else if 2 * j == n {
            elem(a, &[(1, "a", 0), (1, "b", 0)])
        } else if j < n {
            elem(a, &[(2, &format!("l{j}"), 0)])
        } else {
            elem(a, &[(2, "p", 0)])
        }
    };
    let h = if n == 2 { elem(a, &[(1, "a", 0), (1, "b", 0)]) } else { basis(a, "h") };
    let mut powers = true;
    for j in 0..n {
        powers &= a.power(&h, j as u32) == classical_power(j);
    }
    out.push(ck("h^j = h^{cap j} for j <= n-1", powers));
    out.push(ck("h^n = 2p + 2u T", a.power(&h, n as u32) == elem(a, &[(2, "p", 0), (2, "u", big_t)])));
    out.push(ck("h^{n+1} = 4h T", a.power(&h, (n + 1) as u32) == h.scaled(&Rational::from_i64(4)).shifted(big_t)));
    let p = basis(a, "p");
    out.push(ck("p p = u T^2", a.multiply(&p, &p) == elem(a, &[(1, "u", 2 * big_t)])));
    out.push(ck("h p = h T", a.multiply(&h, &p) == h.shifted(big_t)));
    if n % 2 == 0 {
        let (ea, eb) = (basis(a, "a"), basis(a, "b"));
        out.push(ck("h a = h b", a.multiply(&h, &ea) == a.multiply(&h, &eb)));
        let k_odd = (n / 2) % 2 == 1;
        let (ab, aa) =
            if k_odd { (p.clone(), elem(a, &[(1, "u", big_t)])) } else { (elem(a, &[(1, "u", big_t)]), p.clone()) };
        out.push(ck("a b by parity of n/2", a.multiply(&ea, &eb) == ab));
        out.push(ck("a a = b b by parity of n/2", a.multiply(&ea, &ea) == aa && a.multiply(&eb, &eb) == aa));
        let d = ea.minus(&eb);
        let sign = if k_odd { -2 } else { 2 };
        out.push(ck(
            "(a-b)(a-b) = (-1)^k 2 (p - u T)",
            a.multiply(&d, &d) == elem(a, &[(sign, "p", 0), (-sign, "u", big_t)]),
        ));
    }
    let table = quadric_pairing::<Rational>(n);
    let derived: Vec<Vec<Rational>> = (0..a.dim())
        .map(|i| (0..a.dim()).map(|j| a.structure_constant(i, j).coeff(a.lookup("p").expect("p"), 0)).collect())
        .collect();
    out.push(ck("point coefficient of products is the intersection pairing", derived == table));
    let euler = a.quantum_euler(Some(&table))?;
    out.push(ck("euler class has degree 0", euler.degree_zero));
    out.push(ck("euler class is basis independent", euler.basis_independent));
    out.push(ck("semisimple", a.is_invertible(&euler.element)));
    Ok(())
}

fn quadric_mod2_checks(a: &QuantumAlgebra<Gf2>, n: i64, out: &mut Vec<CheckResult>) {
    let p = basis(a, "p");
    let big_t = 2 * n / i64::from(a.ctx().maslov());
    out.push(ck("p p = u T^2", a.multiply(&p, &p) == elem(a, &[(1, "u", 2 * big_t)])));
    out.push(ck("p invertible", a.is_invertible(&p)));
    let h = if n == 2 { elem(a, &[(1, "a", 0), (1, "b", 0)]) } else { basis(a, "h") };
    out.push(ck("h not invertible", !a.is_invertible(&h)));
    if n % 2 == 0 {
        out.push(ck("a invertible", a.is_invertible(&basis(a, "a"))));
        out.push(ck(
            "invertible element in degree n",
            matches!(a.has_invertible_of_degree(n, 32), InvertibleSearch::Yes(_)),
        ));
    }
}

/// Integer part of a rational that is known to be integral.
pub fn rational_to_i64(r: &Rational) -> Option<i64> {
    r.is_integer().then(|| r.to_integer().to_i64()).flatten()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_passes_its_checks() {
        let failed: Vec<String> = selftest()
            .into_iter()
            .flat_map(|(name, checks)| {
                checks.into_iter().filter(|c| !c.passed).map(move |c| format!("{name}: {}", c.name))
            })
            .collect();
        assert!(failed.is_empty(), "{failed:#?}");
    }

    #[test]
    fn rpn5_example() {
        let a = rpn_ring(5).unwrap();
        assert_eq!(a.multiply(&basis(&a, "alpha2"), &basis(&a, "alpha3")), basis(&a, "alpha0"));
    }

    #[test]
    fn quadric_mod2_point_square() {
        let a = quadric_mod2(4, 8).unwrap();
        let p = basis(&a, "p");
        assert_eq!(a.multiply(&p, &p), elem(&a, &[(1, "u", 2)]));
    }

    #[test]
    fn ci_examples() {
        let q = ci_inclusion(5, &[2]).unwrap();
        assert_eq!(q.terms(), vec![(BigInt::one(), "p".into(), 0), (-BigInt::one(), "u".into(), 1)]);
        let c = ci_inclusion(5, &[3]).unwrap();
        assert_eq!(c.coefficient, BigInt::from(2));
        assert_eq!(c.h_power, 1);
        assert_eq!(c.terms_mod2(), vec![("p".to_string(), 0)]);
        assert_eq!(ci_inclusion(5, &[2, 2]).unwrap().coefficient, BigInt::one());
        assert!(matches!(ci_inclusion(4, &[3]), Err(CatalogError::Hypothesis(_))));
        assert!(matches!(ci_inclusion(2, &[2]), Err(CatalogError::Hypothesis(_))));
    }

    #[test]
    fn inconsistent_point_action_is_rejected() {
        assert!(matches!(
            quadric_2h1_module(5, PointAction::Diagonal { s: true, r: false }),
            Err(CatalogError::Inconsistent(_))
        ));
        assert!(quadric_2h1_module(3, PointAction::Swap).is_err());
    }

    #[test]
    fn unknown_and_out_of_range() {
        assert!(matches!(entry("nope"), Err(CatalogError::UnknownEntry(_))));
        assert!(matches!(entry("rpn-9"), Err(CatalogError::OutOfRange(_))));
        assert!(matches!(cpn::<Gf2>(3, 3), Err(CatalogError::Inconsistent(_))));
    }
}
