//! One function per subcommand. Each takes already parsed objects and
//! returns a [`Report`]; reading files and exit codes live in `cli`.

use pearlkit_core::bounds::{evaluate, BoundError, BoundKind, BoundQuery, Relation, Verdict};
use pearlkit_core::catalog::{self, CatalogError};
use pearlkit_core::minimal_model::{qh_vanishes, reduce};
use pearlkit_core::quantum_algebra::{AlgebraError, InvertibleSearch, ModuleAction, QuantumAlgebra};
use pearlkit_core::spectral_sequence::SpectralSequence;
use pearlkit_core::torus::{synthesize, triangle_terms, NuFunction, Point, Synthesis, TorusError, TorusScene};
use pearlkit_core::{PearlComplex, PearlError, Rational, ScalarField};

use crate::formats::{self, AnyAlgebra, AnyModule, Document};
use crate::report::{flag, Report, Table};
use crate::selftest;

#[derive(Debug, thiserror::Error)]
pub enum CommandError {
    #[error(transparent)]
    Pearl(#[from] PearlError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Torus(#[from] TorusError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Format(#[from] formats::FormatError),
    #[error("{0}")]
    Usage(String),
}

impl CommandError {
    /// An invalid complex is a verification failure; everything else is a
    /// problem with the input or the invocation.
    pub fn exit_code(&self) -> u8 {
        match self {
            CommandError::Pearl(PearlError::Invalid(_)) => 1,
            _ => 2,
        }
    }
}

type Result<T> = std::result::Result<T, CommandError>;

fn usage(msg: impl Into<String>) -> CommandError {
    CommandError::Usage(msg.into())
}

fn ok_list<T: std::fmt::Debug>(items: &[T]) -> String {
    if items.is_empty() {
        "ok".into()
    } else {
        format!("{} failure(s): {items:?}", items.len())
    }
}

// ---------------------------------------------------------------------------
// check

pub fn check(doc: &Document) -> Result<Report> {
    let mut r = Report::new();
    r.fact("kind", doc.kind());
    r.fact("name", doc.name());
    match doc {
        Document::Complex(c) => {
            let v = c.validate();
            r.fact("generators", c.len());
            r.fact("homogeneous", flag(v.homogeneity.is_empty()));
            r.fact("d_squared_zero", flag(v.square_nonzero.is_empty()));
            r.require(v.is_valid());
            if v.is_valid() {
                r.fact("augmentation", flag(c.augmentation_check()));
                r.fact("minimal", flag(c.is_minimal()));
                if c.top().is_some() {
                    r.fact("duality", flag(c.check_duality()?));
                }
            } else {
                for h in &v.homogeneity {
                    r.fact("inhomogeneous_term", format!("d {} -> {} t^{}", h.source, h.target, h.exp));
                }
                for j in &v.square_nonzero {
                    r.fact("d_squared_nonzero_at", format!("t^{j}"));
                }
            }
        }
        Document::Algebra(_) | Document::Module(_) => return algebra_verify(doc),
        Document::Nu(nu) => return torus_synth(nu),
    }
    Ok(r)
}

// ---------------------------------------------------------------------------
// homology, minimal models, spectral sequences

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Coeff {
    #[default]
    Plus,
    Full,
}

pub fn homology(c: &PearlComplex, coeff: Coeff, window: Option<(i64, i64)>) -> Result<Report> {
    let dims = match (coeff, window) {
        (Coeff::Plus, w) => c.homology_plus(w)?,
        (Coeff::Full, None) => c.homology_full()?,
        (Coeff::Full, Some((lo, hi))) => c.homology_full_window(lo, hi)?,
    };
    let label = match coeff {
        Coeff::Plus => "plus",
        Coeff::Full => "full",
    };
    let mut r = Report::new();
    r.fact("complex", c.name());
    r.fact("coeff", label);
    r.fact("window", format!("{}..{}", dims.window.0, dims.window.1));
    r.fact("total", dims.total());
    if coeff == Coeff::Plus {
        r.fact("periodic_tail", flag(dims.periodic_tail));
    }
    let mut t = Table::new("homology", &["degree", "dim"]);
    for (d, n) in &dims.dims {
        t.row([d.to_string(), n.to_string()]);
    }
    r.table(t);
    Ok(r)
}

/// Generator of the model playing the role of the fundamental class: the
/// unique one in the top degree.
fn top_generator(model: &PearlComplex, top: Option<i64>) -> Option<String> {
    let n = top.or_else(|| model.max_degree())?;
    let mut tops = model.generators().iter().filter(|g| g.degree == n);
    match (tops.next(), tops.next()) {
        (Some(g), None) => Some(g.name.clone()),
        _ => None,
    }
}

pub fn minimal(c: &PearlComplex) -> Result<Report> {
    let m = reduce(c)?;
    let verified = m.verify()?.all_ok();
    let vanishes = if m.model.is_empty() {
        Some(true)
    } else {
        top_generator(&m.model, c.top()).map(|g| qh_vanishes(&m.model, &g)).transpose()?
    };
    let facts = [
        ("source", c.name().to_string()),
        ("source_generators", c.len().to_string()),
        ("model_generators", m.model.len().to_string()),
        ("verified", flag(verified).to_string()),
        ("qh_vanishes", vanishes.map_or("n/a", flag).to_string()),
        ("qh_full", flag(m.qh_is_full()).to_string()),
    ];
    let mut r = Report::new();
    r.require(verified);
    let mut text = String::new();
    for (k, v) in &facts {
        text.push_str(&format!("# {k} {v}\n"));
    }
    text.push_str(&formats::emit_complex(&m.model));
    r.document(text);

    let mut rec = Report::new();
    for (k, v) in facts {
        rec.fact(k, v);
    }
    let mut gens = Table::new("generators", &["generator", "degree"]);
    let mut terms = Table::new("differential", &["source", "target", "exponent"]);
    for g in m.model.generators() {
        gens.row([g.name.clone(), g.degree.to_string()]);
    }
    for (s, g) in m.model.generators().iter().enumerate() {
        for &(t, j) in m.model.terms(s) {
            terms.row([g.name.clone(), m.model.generators()[t].name.clone(), j.to_string()]);
        }
    }
    rec.table(gens);
    rec.table(terms);
    r.records_only(rec);
    Ok(r)
}

pub fn spectral(c: &PearlComplex, max_page: Option<u32>, window: Option<(i64, i64)>) -> Result<Report> {
    c.ensure_valid()?;
    let mut ss = SpectralSequence::new(c)?;
    let window = window.unwrap_or_else(|| ss.default_window());
    let bound = ss.differential_bound();
    let max_page = max_page.unwrap_or(bound + 1);
    let collapse = ss.collapse_page();
    let abutment = ss.abutment_check()?;
    let mut r = Report::new();
    r.fact("complex", c.name());
    r.fact("window", format!("{}..{}", window.0, window.1));
    r.fact("differential_bound", bound);
    r.fact("collapse_page", collapse);
    r.fact("abutment", flag(abutment));
    r.require(abutment);
    let mut pages_ok = true;
    let mut t = Table::new("pages", &["page", "p", "q", "dim", "rank_d"]);
    for page in ss.pages(max_page, Some(window)) {
        pages_ok &= ss.check_page(page.r, window);
        for (&(p, q), &dim) in &page.entries {
            let rank = page.dr_rank.get(&(p, q)).copied().unwrap_or(0);
            t.row([page.r.to_string(), p.to_string(), q.to_string(), dim.to_string(), rank.to_string()]);
        }
    }
    r.fact("pages_consistent", flag(pages_ok));
    r.require(pages_ok);
    r.table(t);
    Ok(r)
}

// ---------------------------------------------------------------------------
// algebras

fn verify_one<F: ScalarField>(r: &mut Report, prefix: &str, a: &QuantumAlgebra<F>) -> Result<()> {
    let rep = a.verify_algebra();
    let name = |i: usize| a.basis()[i].name.clone();
    let hom: Vec<String> = rep.homogeneity.iter().map(|&(i, j)| format!("{} * {}", name(i), name(j))).collect();
    let unit: Vec<String> = rep.unit.iter().map(|&i| name(i)).collect();
    let assoc: Vec<String> =
        rep.associativity.iter().map(|&(i, j, k)| format!("({} {} {})", name(i), name(j), name(k))).collect();
    r.fact(&format!("{prefix}name"), a.name());
    r.fact(&format!("{prefix}field"), F::TAG);
    r.fact(&format!("{prefix}dim"), a.dim());
    r.fact(&format!("{prefix}homogeneity"), ok_list(&hom));
    r.fact(&format!("{prefix}unit"), ok_list(&unit));
    r.fact(&format!("{prefix}associativity"), ok_list(&assoc));
    r.fact(&format!("{prefix}triples_checked"), a.dim().pow(3));
    r.fact(&format!("{prefix}commutative"), flag(rep.commutative));
    r.require(rep.passes());
    if a.explicit_aug().is_some() {
        let frob = a.frobenius_check()?;
        r.fact(&format!("{prefix}frobenius"), flag(frob));
        r.require(frob);
    }
    Ok(())
}

fn verify_module<F: ScalarField>(r: &mut Report, m: &ModuleAction<F>) -> Result<()> {
    verify_one(r, "ambient.", &m.ambient)?;
    verify_one(r, "lagrangian.", &m.lagr)?;
    let rep = m.verify_module();
    r.fact("module.homogeneity", ok_list(&rep.homogeneity));
    r.fact("module.associativity", ok_list(&rep.associativity));
    r.fact("module.unit", ok_list(&rep.unit));
    r.fact("module.two_sided", ok_list(&rep.two_sided));
    r.fact("module.inclusion", if m.incl().is_some() { ok_list(&rep.inclusion) } else { "absent".into() });
    r.fact("module.pairing", if m.pair().is_some() { ok_list(&rep.pairing) } else { "absent".into() });
    r.require(rep.passes());
    Ok(())
}

pub fn algebra_verify(doc: &Document) -> Result<Report> {
    let mut r = Report::new();
    r.fact("kind", doc.kind());
    match doc {
        Document::Algebra(AnyAlgebra::Gf2(a)) => verify_one(&mut r, "", a)?,
        Document::Algebra(AnyAlgebra::Rational(a)) => verify_one(&mut r, "", a)?,
        Document::Module(AnyModule::Gf2(m)) => verify_module(&mut r, m)?,
        Document::Module(AnyModule::Rational(m)) => verify_module(&mut r, m)?,
        _ => return Err(usage(format!("expected an algebra or module-action file, found {}", doc.kind()))),
    }
    Ok(r)
}

fn euler_of<F: ScalarField>(a: &QuantumAlgebra<F>, pairing: Option<&[Vec<F>]>) -> Result<Report> {
    let e = a.quantum_euler(pairing)?;
    let invertible = a.is_invertible(&e.element);
    let mut r = Report::new();
    r.fact("algebra", a.name());
    r.fact("pairing", if pairing.is_some() { "supplied" } else { "augmentation" });
    r.fact("euler", a.format_element(&e.element));
    r.fact("degree_zero", flag(e.degree_zero));
    r.fact("basis_independent", flag(e.basis_independent));
    r.fact("invertible", flag(invertible));
    r.fact("semisimple", flag(invertible));
    r.require(e.degree_zero && e.basis_independent);
    Ok(r)
}

/// Quantum Euler class; a module file supplies the pairing of its ambient
/// algebra.
pub fn algebra_euler(doc: &Document) -> Result<Report> {
    match doc {
        Document::Algebra(AnyAlgebra::Gf2(a)) => euler_of(a, None),
        Document::Algebra(AnyAlgebra::Rational(a)) => euler_of(a, None),
        Document::Module(AnyModule::Gf2(m)) => euler_of(&m.ambient, m.pair()),
        Document::Module(AnyModule::Rational(m)) => euler_of(&m.ambient, m.pair()),
        _ => Err(usage(format!("expected an algebra or module-action file, found {}", doc.kind()))),
    }
}

fn invertible_of<F: ScalarField>(a: &QuantumAlgebra<F>, degree: i64, samples: usize) -> Report {
    let mut r = Report::new();
    r.fact("algebra", a.name());
    r.fact("degree", degree);
    r.fact("monomials", a.degree_slice(degree).len());
    match a.has_invertible_of_degree(degree, samples) {
        InvertibleSearch::Yes(x) => {
            r.fact("found", 1);
            r.fact("element", a.format_element(&x));
        }
        InvertibleSearch::ProbablyNo { exhaustive, tried } => {
            r.fact("found", 0);
            r.fact("exhaustive", flag(exhaustive && F::TAG == pearlkit_core::BaseField::Gf2));
            r.fact("tried", tried);
        }
    }
    r
}

pub fn algebra_invertible(doc: &Document, degree: i64, samples: usize) -> Result<Report> {
    Ok(match doc {
        Document::Algebra(AnyAlgebra::Gf2(a)) => invertible_of(a, degree, samples),
        Document::Algebra(AnyAlgebra::Rational(a)) => invertible_of(a, degree, samples),
        Document::Module(AnyModule::Gf2(m)) => invertible_of(&m.ambient, degree, samples),
        Document::Module(AnyModule::Rational(m)) => invertible_of(&m.ambient, degree, samples),
        _ => return Err(usage(format!("expected an algebra or module-action file, found {}", doc.kind()))),
    })
}

// ---------------------------------------------------------------------------
// tori

fn bits((x, y): (bool, bool)) -> String {
    format!("{},{}", flag(x), flag(y))
}

pub fn torus_synth(nu: &NuFunction) -> Result<Report> {
    let mut r = Report::new();
    r.fact("nu", &nu.name);
    r.fact("support", nu.support().count());
    match synthesize(nu)? {
        Synthesis::Vanishing { d1 } => {
            r.fact("d1", bits(d1));
            r.fact("qh_vanishes", 1);
        }
        Synthesis::Ring(t) => {
            r.fact("d1", "0,0");
            r.fact("qh_vanishes", 0);
            r.fact("alpha", flag(t.alpha));
            r.fact("beta", flag(t.beta));
            r.fact("gamma_sum", flag(t.gamma_sum));
            r.fact("gamma_prime", flag(t.gamma_prime));
            r.fact("gamma_second", flag(t.gamma_second()));
            r.fact("s2", flag(t.s2()));
            let m = t.ring.basis_element("m")?;
            r.fact("m_times_m", t.ring.format_element(&t.ring.multiply(&m, &m)));
            r.document(format!("\n{}", formats::emit_algebra(&t.ring)));
        }
    }
    Ok(r)
}

/// The ring synthesized from `nu` in canonical text form.
pub fn torus_ring_text(nu: &NuFunction) -> Result<String> {
    match synthesize(nu)? {
        Synthesis::Ring(t) => Ok(formats::emit_algebra(&t.ring)),
        Synthesis::Vanishing { .. } => Err(TorusError::Vanishing.into()),
    }
}

fn scene(nu: &NuFunction, points: &[Point]) -> Result<(TorusScene, Vec<Point>)> {
    let mut s = TorusScene::new(nu.clone());
    let mut out = Vec::new();
    for (k, p) in points.iter().enumerate() {
        let name = format!("p{}", k + 1);
        s.add_point(&name, p.clone())?;
        out.push(s.point(&name)?.clone());
    }
    Ok((s, out))
}

fn point_facts(r: &mut Report, points: &[Point]) {
    for (k, p) in points.iter().enumerate() {
        r.fact(&format!("p{}", k + 1), formats::emit_point(p));
    }
}

pub fn torus_s1(nu: &NuFunction, p: [&Point; 3]) -> Result<Report> {
    let (s, pts) = scene(nu, &[p[0].clone(), p[1].clone(), p[2].clone()])?;
    let terms = triangle_terms(nu, &pts[0], &pts[1], &pts[2])?;
    let s1 = s.s1(&pts[0], &pts[1], &pts[2])?;
    let mut r = Report::new();
    r.fact("nu", &nu.name);
    point_facts(&mut r, &pts);
    r.fact("delta_p1", flag(terms[0]));
    r.fact("delta_p2", flag(terms[1]));
    r.fact("delta_p3", flag(terms[2]));
    r.fact("s1", flag(s1));
    if let Synthesis::Ring(t) = synthesize(nu)? {
        r.fact("gamma_sum", flag(t.gamma_sum));
        r.fact("agrees", flag(t.gamma_sum == s1));
        r.require(t.gamma_sum == s1);
    }
    Ok(r)
}

pub fn torus_n4(nu: &NuFunction, p: [&Point; 3]) -> Result<Report> {
    let (s, pts) = scene(nu, &[p[0].clone(), p[1].clone(), p[2].clone()])?;
    let n4 = s.n4(&pts[0], &pts[1], &pts[2])?;
    let swapped = s.n4(&pts[0], &pts[2], &pts[1])?;
    let mut r = Report::new();
    r.fact("nu", &nu.name);
    point_facts(&mut r, &pts);
    r.fact("n4", flag(n4));
    r.fact("n4_swapped", flag(swapped));
    r.require(n4 == swapped);
    Ok(r)
}

pub fn torus_epsilon(nu: &NuFunction, p: [&Point; 4]) -> Result<Report> {
    let (s, pts) = scene(nu, &[p[0].clone(), p[1].clone(), p[2].clone(), p[3].clone()])?;
    let e = s.epsilon(&pts[0], &pts[1], &pts[2], &pts[3])?;
    let mut r = Report::new();
    r.fact("nu", &nu.name);
    point_facts(&mut r, &pts);
    r.fact("epsilon", flag(e));
    Ok(r)
}

// ---------------------------------------------------------------------------
// bounds

/// `args` are `key=value` pairs and at most one bare case name. `r` and
/// `rho` take comma-separated radii (balls on the Lagrangian and in its
/// complement); other keys are numeric parameters.
pub fn bounds(kind: BoundKind, args: &[String]) -> Result<Report> {
    let mut q = BoundQuery::new(kind);
    for a in args {
        let Some((k, v)) = a.split_once('=') else {
            if q.case.is_some() {
                return Err(usage(format!("more than one case given (`{a}`)")));
            }
            q = q.case(a);
            continue;
        };
        let parse =
            |s: &str| s.trim().parse::<Rational>().map_err(|_| usage(format!("`{k}`: `{s}` is not a rational number")));
        match k {
            "r" => {
                for s in v.split(',') {
                    q = q.rel_radius(parse(s)?);
                }
            }
            "rho" => {
                for s in v.split(',') {
                    q = q.compl_radius(parse(s)?);
                }
            }
            _ => {
                if q.params.contains_key(k) {
                    return Err(usage(format!("parameter `{k}` given twice")));
                }
                q = q.param(k, parse(v)?);
            }
        }
    }
    let out = evaluate(&q)?;
    let mut r = Report::new();
    r.fact("kind", format!("{kind:?}").to_lowercase());
    r.fact("case", q.case.as_deref().unwrap_or("-"));
    let mut t = Table::new("inequalities", &["quantity", "relation", "bound", "value", "verdict"]);
    for i in &out {
        let rel = match i.relation {
            Relation::AtMost => "at_most",
            Relation::Equals => "equals",
        };
        let verdict = match i.verdict {
            None => "-",
            Some(Verdict::Pass) => "pass",
            Some(Verdict::Boundary) => "boundary",
            Some(Verdict::Fail) => "fail",
        };
        let value = i.value.as_ref().map_or("-".to_string(), |v| v.to_string());
        t.row([i.name.clone(), rel.to_string(), i.bound.to_string(), value, verdict.to_string()]);
        r.require(i.passes());
    }
    r.table(t);
    Ok(r)
}

// ---------------------------------------------------------------------------
// catalog

pub fn catalog_list() -> Report {
    let mut t = Table::new("catalog", &["name", "kind"]);
    for e in catalog::catalog() {
        t.row([e.name.clone(), e.payload.kind().to_string()]);
    }
    let mut r = Report::new();
    r.table(t);
    r
}

pub fn catalog_emit(name: &str) -> Result<Report> {
    let e = catalog::entry(name)?;
    let mut r = Report::new();
    r.raw(selftest::emit_payload(&e.payload));
    Ok(r)
}

pub fn catalog_selftest() -> Report {
    let results = selftest::run();
    let mut t = Table::new("selftest", &["entry", "check", "passed"]);
    let (mut passed, mut failed) = (0usize, 0usize);
    for e in &results {
        for c in &e.checks {
            if c.passed {
                passed += 1;
            } else {
                failed += 1;
            }
            t.row([e.name.clone(), c.name.clone(), flag(c.passed).to_string()]);
        }
    }
    let mut r = Report::new();
    r.fact("entries", results.len());
    r.fact("checks_passed", passed);
    r.fact("checks_failed", failed);
    r.require(failed == 0);
    r.table(t);
    r
}
