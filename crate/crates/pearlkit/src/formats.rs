//! Line-oriented text formats for complexes, algebras, module actions, disk
//! count functions and torus points.
//!
//! Every parser reports errors with the 1-based line number. Emitters write
//! the canonical form: generators sorted by descending degree then name,
//! terms sorted by target (in canonical order) then exponent.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use pearlkit_core::pearl_complex::Generator;
use pearlkit_core::quantum_algebra::{AlgebraBuilder, AlgebraError, Element, ModuleAction, QuantumAlgebra};
use pearlkit_core::torus::{NuFunction, Point};
use pearlkit_core::{BaseField, Gf2, PearlComplex, PearlError, Rational, ScalarField};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Complex { line: usize, source: PearlError },
    #[error("line {line}: {source}")]
    Algebra { line: usize, source: AlgebraError },
    #[error("line {line}: product `{left} * {right}` has term `{term}` of degree {found}, expected degree {expected}")]
    Inhomogeneous { line: usize, left: String, right: String, term: String, found: i64, expected: i64 },
    #[error("unexpected end of input (missing `end`)")]
    UnexpectedEof,
    #[error("invalid point `{0}`: expected `x,y` with rational coordinates")]
    Point(String),
}

type Result<T> = std::result::Result<T, FormatError>;

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, msg: msg.into() }
}

struct Line<'a> {
    no: usize,
    tokens: Vec<&'a str>,
}

/// Cursor over the non-blank, comment-stripped lines of an input.
struct Lines<'a> {
    lines: Vec<Line<'a>>,
    pos: usize,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .filter_map(|(i, raw)| {
                let body = raw.split('#').next().unwrap_or("");
                let tokens: Vec<&str> = body.split_whitespace().collect();
                (!tokens.is_empty()).then_some(Line { no: i + 1, tokens })
            })
            .collect();
        let last = text.lines().count().max(1);
        Lines { lines, pos: 0, last }
    }

    fn next(&mut self) -> Result<&Line<'a>> {
        let line = self.lines.get(self.pos).ok_or(FormatError::UnexpectedEof)?;
        self.pos += 1;
        Ok(line)
    }

    fn peek(&self) -> Option<&Line<'a>> {
        self.lines.get(self.pos)
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<usize> {
        let line = self.next()?;
        if line.tokens != [kw] {
            return Err(syntax(line.no, format!("expected `{kw}`, found `{}`", line.tokens.join(" "))));
        }
        Ok(line.no)
    }

    fn finish(&self) -> Result<()> {
        match self.peek() {
            Some(l) => Err(syntax(l.no, "trailing content after `end`")),
            None => Ok(()),
        }
    }
}

fn parse_int(line: usize, what: &str, tok: &str) -> Result<i64> {
    tok.parse().map_err(|_| syntax(line, format!("{what} must be an integer, found `{tok}`")))
}

fn parse_maslov(line: usize, tok: &str) -> Result<u32> {
    match tok.parse::<u32>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(syntax(line, format!("maslov must be a positive integer, found `{tok}`"))),
    }
}

fn parse_rational(line: usize, tok: &str) -> Result<Rational> {
    tok.parse().map_err(|_| syntax(line, format!("expected a rational number, found `{tok}`")))
}

fn parse_exponent(line: usize, tok: &str) -> Result<Option<i64>> {
    let Some(k) = tok.strip_prefix("t^") else {
        return Ok(None);
    };
    let k = parse_int(line, "exponent", k)?;
    if k < 1 {
        return Err(syntax(line, format!("exponent must be at least 1, found `{tok}` (write the bare name for t^0)")));
    }
    Ok(Some(k))
}

/// Splits the right-hand side `a [t^k] + b [t^k] ...` into groups. A lone
/// `0` is the empty sum.
fn term_groups<'t>(line: usize, rhs: &[&'t str]) -> Result<Vec<Vec<&'t str>>> {
    if rhs == ["0"] {
        return Ok(Vec::new());
    }
    if rhs.is_empty() {
        return Err(syntax(line, "missing right-hand side (write `0` for zero)"));
    }
    let groups: Vec<Vec<&str>> = rhs.split(|t| *t == "+").map(<[&str]>::to_vec).collect();
    if groups.iter().any(|g| g.is_empty() || g.len() > 2) {
        return Err(syntax(line, format!("malformed sum `{}`", rhs.join(" "))));
    }
    Ok(groups)
}

/// `<lhs...> = <rhs...>`: returns both sides.
fn split_eq<'l, 't>(line: &'l Line<'t>, lhs_len: usize) -> Result<(&'l [&'t str], &'l [&'t str])> {
    let toks = &line.tokens[1..];
    if toks.len() < lhs_len + 1 || toks[lhs_len] != "=" {
        return Err(syntax(line.no, format!("expected `{} <{} name(s)> = ...`", line.tokens[0], lhs_len)));
    }
    Ok((&toks[..lhs_len], &toks[lhs_len + 1..]))
}

fn one_value<'t>(line: &Line<'t>) -> Result<&'t str> {
    match line.tokens[..] {
        [_, v] => Ok(v),
        _ => Err(syntax(line.no, format!("`{}` takes exactly one value", line.tokens[0]))),
    }
}

fn set_once<T>(slot: &mut Option<T>, value: T, line: usize, key: &str) -> Result<()> {
    if slot.is_some() {
        return Err(syntax(line, format!("`{key}` given twice")));
    }
    *slot = Some(value);
    Ok(())
}

fn required<T>(slot: Option<T>, line: usize, key: &str) -> Result<T> {
    slot.ok_or_else(|| syntax(line, format!("missing `{key}` line")))
}

// ---------------------------------------------------------------------------
// pearl complexes

/// Parses a `pearl-complex` document.
pub fn parse_complex(text: &str) -> Result<PearlComplex> {
    let mut lines = Lines::new(text);
    let c = complex_block(&mut lines)?;
    lines.finish()?;
    Ok(c)
}

fn complex_block(lines: &mut Lines<'_>) -> Result<PearlComplex> {
    let start = lines.expect_keyword("pearl-complex")?;
    let mut name = None;
    let mut maslov = None;
    let mut top = None;
    let mut minimal = None;
    let mut gens: Vec<(usize, String, i64)> = Vec::new();
    let mut diffs: Vec<(usize, String, Vec<(String, u32)>)> = Vec::new();
    loop {
        let line = lines.next()?;
        let no = line.no;
        match line.tokens[0] {
            "end" if line.tokens.len() == 1 => break,
            "name" => set_once(&mut name, one_value(line)?.to_string(), no, "name")?,
            "maslov" => set_once(&mut maslov, parse_maslov(no, one_value(line)?)?, no, "maslov")?,
            "top" => set_once(&mut top, parse_int(no, "top", one_value(line)?)?, no, "top")?,
            "minimal" => {
                let flag = match one_value(line)? {
                    "true" => true,
                    "false" => false,
                    other => return Err(syntax(no, format!("`minimal` takes true or false, found `{other}`"))),
                };
                set_once(&mut minimal, (no, flag), no, "minimal")?;
            }
            "gen" => match line.tokens[..] {
                [_, id, deg] => gens.push((no, id.to_string(), parse_int(no, "degree", deg)?)),
                _ => return Err(syntax(no, "expected `gen <id> <degree>`")),
            },
            "d" => {
                let (lhs, rhs) = split_eq(line, 1)?;
                let mut terms = Vec::new();
                for group in term_groups(no, rhs)? {
                    let exp = match group[..] {
                        [_] => 0,
                        [_, t] => parse_exponent(no, t)?
                            .ok_or_else(|| syntax(no, format!("expected `t^<k>`, found `{t}`")))?,
                        _ => unreachable!("groups have one or two tokens"),
                    };
                    let exp = u32::try_from(exp).map_err(|_| syntax(no, "exponent too large"))?;
                    terms.push((group[0].to_string(), exp));
                }
                diffs.push((no, lhs[0].to_string(), terms));
            }
            other => return Err(syntax(no, format!("unknown keyword `{other}` in pearl-complex"))),
        }
    }
    let name = required(name, start, "name")?;
    let maslov = required(maslov, start, "maslov")?;
    let mut b = PearlComplex::builder(&name, maslov).map_err(|source| FormatError::Complex { line: start, source })?;
    if let Some(n) = top {
        b.set_top(n);
    }
    for (no, id, deg) in &gens {
        b.generator(id, *deg).map_err(|source| FormatError::Complex { line: *no, source })?;
    }
    let mut seen_d = BTreeSet::new();
    for (no, src, terms) in &diffs {
        if !seen_d.insert(src.clone()) {
            return Err(syntax(*no, format!("differential of `{src}` given twice")));
        }
        for (tgt, exp) in terms {
            b.term(src, tgt, *exp).map_err(|source| FormatError::Complex { line: *no, source })?;
        }
    }
    let c = b.build();
    for (no, src, _) in &diffs {
        c.lookup(src).map_err(|source| FormatError::Complex { line: *no, source })?;
    }
    if let Some((no, true)) = minimal {
        if !c.is_minimal() {
            return Err(syntax(no, "declared `minimal true` but the differential has t^0 terms"));
        }
    }
    Ok(c)
}

fn canonical_order(gens: &[Generator]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..gens.len()).collect();
    order.sort_by(|&a, &b| gens[b].degree.cmp(&gens[a].degree).then_with(|| gens[a].name.cmp(&gens[b].name)));
    order
}

fn ranks(order: &[usize]) -> Vec<usize> {
    let mut rank = vec![0; order.len()];
    for (r, &g) in order.iter().enumerate() {
        rank[g] = r;
    }
    rank
}

fn exp_suffix(e: i64) -> String {
    if e == 0 {
        String::new()
    } else {
        format!(" t^{e}")
    }
}

/// Canonical text of a complex; minimal complexes carry `minimal true`.
pub fn emit_complex(c: &PearlComplex) -> String {
    let gens = c.generators();
    let order = canonical_order(gens);
    let rank = ranks(&order);
    let mut out = String::new();
    writeln!(out, "pearl-complex").unwrap();
    writeln!(out, "name {}", c.name()).unwrap();
    writeln!(out, "maslov {}", c.maslov()).unwrap();
    if let Some(n) = c.top() {
        writeln!(out, "top {n}").unwrap();
    }
    if c.is_minimal() {
        writeln!(out, "minimal true").unwrap();
    }
    for &g in &order {
        writeln!(out, "gen {} {}", gens[g].name, gens[g].degree).unwrap();
    }
    for &g in &order {
        let mut terms: Vec<(usize, u32)> = c.terms(g).iter().copied().collect();
        if terms.is_empty() {
            continue;
        }
        terms.sort_by_key(|&(t, j)| (rank[t], j));
        let rhs: Vec<String> =
            terms.iter().map(|&(t, j)| format!("{}{}", gens[t].name, exp_suffix(i64::from(j)))).collect();
        writeln!(out, "d {} = {}", gens[g].name, rhs.join(" + ")).unwrap();
    }
    out.push_str("end\n");
    out
}

// ---------------------------------------------------------------------------
// algebras

/// An algebra over either supported field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyAlgebra {
    Gf2(QuantumAlgebra<Gf2>),
    Rational(QuantumAlgebra<Rational>),
}

impl AnyAlgebra {
    pub fn name(&self) -> &str {
        match self {
            AnyAlgebra::Gf2(a) => a.name(),
            AnyAlgebra::Rational(a) => a.name(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyModule {
    Gf2(ModuleAction<Gf2>),
    Rational(ModuleAction<Rational>),
}

impl AnyModule {
    pub fn name(&self) -> &str {
        match self {
            AnyModule::Gf2(m) => &m.name,
            AnyModule::Rational(m) => &m.name,
        }
    }
}

/// `[c*]name [t^k]` terms of one right-hand side; duplicates are rejected.
fn parse_aterms<F: ScalarField>(line: usize, rhs: &[&str]) -> Result<Vec<(F, String, i64)>> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for group in term_groups(line, rhs)? {
        let (coeff, id) = match group[0].split_once('*') {
            Some((c, id)) => (parse_rational(line, c)?, id),
            None => (Rational::from_integer(1.into()), group[0]),
        };
        if id.is_empty() {
            return Err(syntax(line, format!("missing basis name in `{}`", group[0])));
        }
        let exp = match group.get(1) {
            None => 0,
            Some(t) => {
                parse_exponent(line, t)?.ok_or_else(|| syntax(line, format!("expected `t^<k>`, found `{t}`")))?
            }
        };
        if !seen.insert((id.to_string(), exp)) {
            return Err(syntax(line, format!("duplicate term `{id}{}`", exp_suffix(exp))));
        }
        let c = F::from_rational(&coeff).map_err(|e| FormatError::Algebra { line, source: e.into() })?;
        out.push((c, id.to_string(), exp));
    }
    Ok(out)
}

fn as_refs<F: Clone>(terms: &[(F, String, i64)]) -> Vec<(F, &str, i64)> {
    terms.iter().map(|(c, n, e)| (c.clone(), n.as_str(), *e)).collect()
}

struct AlgebraHeader {
    start: usize,
    field: BaseField,
    lines: Vec<(usize, Vec<String>)>,
}

/// Reads an `algebra ... end` block without interpreting it, so the field
/// can be known before any coefficient is parsed.
fn algebra_header(lines: &mut Lines<'_>) -> Result<AlgebraHeader> {
    let start = lines.expect_keyword("algebra")?;
    let mut field = None;
    let mut body = Vec::new();
    loop {
        let line = lines.next()?;
        if line.tokens == ["end"] {
            break;
        }
        if line.tokens[0] == "field" {
            let f = match one_value(line)? {
                "gf2" => BaseField::Gf2,
                "rational" => BaseField::Rational,
                other => return Err(syntax(line.no, format!("unknown field `{other}` (gf2 or rational)"))),
            };
            set_once(&mut field, f, line.no, "field")?;
            continue;
        }
        body.push((line.no, line.tokens.iter().map(|s| s.to_string()).collect()));
    }
    Ok(AlgebraHeader { start, field: required(field, start, "field")?, lines: body })
}

fn build_algebra<F: ScalarField>(h: &AlgebraHeader) -> Result<QuantumAlgebra<F>> {
    let alg = |line: usize| move |source: AlgebraError| FormatError::Algebra { line, source };
    let mut name = None;
    let mut maslov = None;
    let mut top = None;
    let mut unit = None;
    let mut basis: Vec<(usize, String, i64)> = Vec::new();
    let mut muls: Vec<(usize, String, String, Vec<(F, String, i64)>)> = Vec::new();
    let mut augs: Vec<(usize, String, F)> = Vec::new();
    for (no, toks) in &h.lines {
        let no = *no;
        let toks: Vec<&str> = toks.iter().map(String::as_str).collect();
        let line = Line { no, tokens: toks.clone() };
        match toks[0] {
            "name" => set_once(&mut name, one_value(&line)?.to_string(), no, "name")?,
            "maslov" => set_once(&mut maslov, parse_maslov(no, one_value(&line)?)?, no, "maslov")?,
            "top" => set_once(&mut top, parse_int(no, "top", one_value(&line)?)?, no, "top")?,
            "unit" => set_once(&mut unit, (no, one_value(&line)?.to_string()), no, "unit")?,
            "basis" => match toks[..] {
                [_, id, deg] => basis.push((no, id.to_string(), parse_int(no, "degree", deg)?)),
                _ => return Err(syntax(no, "expected `basis <id> <degree>`")),
            },
            "mul" => {
                let (lhs, rhs) = split_eq(&line, 2)?;
                muls.push((no, lhs[0].to_string(), lhs[1].to_string(), parse_aterms(no, rhs)?));
            }
            "aug" => {
                let (lhs, rhs) = split_eq(&line, 1)?;
                let [v] = rhs else {
                    return Err(syntax(no, "expected `aug <id> = <value>`"));
                };
                let c = F::from_rational(&parse_rational(no, v)?).map_err(|e| alg(no)(e.into()))?;
                augs.push((no, lhs[0].to_string(), c));
            }
            other => return Err(syntax(no, format!("unknown keyword `{other}` in algebra"))),
        }
    }
    let start = h.start;
    let name = required(name, start, "name")?;
    let maslov = required(maslov, start, "maslov")?;
    let top = required(top, start, "top")?;
    let mut b: AlgebraBuilder<F> = QuantumAlgebra::builder(&name, maslov, top).map_err(alg(start))?;
    let mut degree = BTreeMap::new();
    for (no, id, deg) in &basis {
        b.basis(id, *deg).map_err(alg(*no))?;
        degree.insert(id.clone(), *deg);
    }
    let (unit_line, unit) = required(unit, start, "unit")?;
    b.unit(&unit).map_err(alg(unit_line))?;
    let n = i64::from(maslov);
    for (no, l, r, terms) in &muls {
        let want = match (degree.get(l), degree.get(r)) {
            (Some(x), Some(y)) => x + y - top,
            _ => {
                return Err(alg(*no)(AlgebraError::UnknownBasis(if degree.contains_key(l) {
                    r.clone()
                } else {
                    l.clone()
                })))
            }
        };
        for (_, id, e) in terms {
            if let Some(d) = degree.get(id) {
                let found = d - e * n;
                if found != want {
                    return Err(FormatError::Inhomogeneous {
                        line: *no,
                        left: l.clone(),
                        right: r.clone(),
                        term: format!("{id}{}", exp_suffix(*e)),
                        found,
                        expected: want,
                    });
                }
            }
        }
        b.product_terms(l, r, &as_refs(terms)).map_err(alg(*no))?;
    }
    for (no, id, c) in augs {
        b.aug(&id, c).map_err(alg(no))?;
    }
    b.build().map_err(alg(start))
}

fn algebra_block(lines: &mut Lines<'_>) -> Result<AnyAlgebra> {
    let h = algebra_header(lines)?;
    Ok(match h.field {
        BaseField::Gf2 => AnyAlgebra::Gf2(build_algebra(&h)?),
        BaseField::Rational => AnyAlgebra::Rational(build_algebra(&h)?),
    })
}

/// Parses an `algebra` document over whichever field it declares.
pub fn parse_algebra(text: &str) -> Result<AnyAlgebra> {
    let mut lines = Lines::new(text);
    let a = algebra_block(&mut lines)?;
    lines.finish()?;
    Ok(a)
}

fn format_terms<F: ScalarField>(basis: &[Generator], rank: &[usize], x: &Element<F>) -> String {
    let mut terms: Vec<(usize, i64, &F)> = x.terms().collect();
    if terms.is_empty() {
        return "0".into();
    }
    terms.sort_by_key(|&(i, e, _)| (rank[i], e));
    let parts: Vec<String> = terms
        .into_iter()
        .map(|(i, e, c)| {
            let coeff = if c.is_one() { String::new() } else { format!("{c}*") };
            format!("{coeff}{}{}", basis[i].name, exp_suffix(e))
        })
        .collect();
    parts.join(" + ")
}

/// Canonical text of an algebra.
pub fn emit_algebra<F: ScalarField>(a: &QuantumAlgebra<F>) -> String {
    let basis = a.basis();
    let order = canonical_order(basis);
    let rank = ranks(&order);
    let mut out = String::new();
    writeln!(out, "algebra").unwrap();
    writeln!(out, "name {}", a.name()).unwrap();
    writeln!(out, "field {}", F::TAG).unwrap();
    writeln!(out, "maslov {}", a.ctx().maslov()).unwrap();
    writeln!(out, "top {}", a.top()).unwrap();
    for &i in &order {
        writeln!(out, "basis {} {}", basis[i].name, basis[i].degree).unwrap();
    }
    writeln!(out, "unit {}", basis[a.unit()].name).unwrap();
    for &i in &order {
        for &j in &order {
            let v = a.structure_constant(i, j);
            if !v.is_zero() {
                writeln!(out, "mul {} {} = {}", basis[i].name, basis[j].name, format_terms(basis, &rank, v)).unwrap();
            }
        }
    }
    if let Some(aug) = a.explicit_aug() {
        let nonzero: Vec<usize> = order.iter().copied().filter(|&i| !aug[i].is_zero()).collect();
        if nonzero.is_empty() {
            // keep an all-zero augmentation explicit
            writeln!(out, "aug {} = 0", basis[order[0]].name).unwrap();
        }
        for i in nonzero {
            writeln!(out, "aug {} = {}", basis[i].name, aug[i]).unwrap();
        }
    }
    out.push_str("end\n");
    out
}

pub fn emit_any_algebra(a: &AnyAlgebra) -> String {
    match a {
        AnyAlgebra::Gf2(a) => emit_algebra(a),
        AnyAlgebra::Rational(a) => emit_algebra(a),
    }
}

// ---------------------------------------------------------------------------
// module actions

fn build_module<F: ScalarField>(
    name: &str,
    ambient: QuantumAlgebra<F>,
    lagr: QuantumAlgebra<F>,
    start: usize,
    rest: &[(usize, Vec<String>)],
) -> Result<ModuleAction<F>> {
    let alg = |line: usize| move |source: AlgebraError| FormatError::Algebra { line, source };
    let mut m = ModuleAction::new(name, ambient, lagr).map_err(alg(start))?;
    let mut seen = BTreeSet::new();
    for (no, toks) in rest {
        let no = *no;
        let toks: Vec<&str> = toks.iter().map(String::as_str).collect();
        let line = Line { no, tokens: toks.clone() };
        let key = toks[0];
        match key {
            "act" => {
                let (lhs, rhs) = split_eq(&line, 2)?;
                if !seen.insert(("act", lhs[0].to_string(), lhs[1].to_string())) {
                    return Err(syntax(no, format!("`act {} {}` given twice", lhs[0], lhs[1])));
                }
                let terms = parse_aterms::<F>(no, rhs)?;
                if terms.is_empty() {
                    m.ambient.lookup(lhs[0]).and_then(|_| m.lagr.lookup(lhs[1])).map_err(alg(no))?;
                } else {
                    m.act_terms(lhs[0], lhs[1], &as_refs(&terms)).map_err(alg(no))?;
                }
            }
            "incl" => {
                let (lhs, rhs) = split_eq(&line, 1)?;
                if !seen.insert(("incl", lhs[0].to_string(), String::new())) {
                    return Err(syntax(no, format!("`incl {}` given twice", lhs[0])));
                }
                m.lagr.lookup(lhs[0]).map_err(alg(no))?;
                m.declare_incl();
                let terms = parse_aterms::<F>(no, rhs)?;
                if !terms.is_empty() {
                    m.incl_terms(lhs[0], &as_refs(&terms)).map_err(alg(no))?;
                }
            }
            "pair" => {
                let (lhs, rhs) = split_eq(&line, 2)?;
                let [v] = rhs else {
                    return Err(syntax(no, "expected `pair <a> <b> = <int>`"));
                };
                if !seen.insert(("pair", lhs[0].to_string(), lhs[1].to_string())) {
                    return Err(syntax(no, format!("`pair {} {}` given twice", lhs[0], lhs[1])));
                }
                let c = F::from_i64(parse_int(no, "pairing value", v)?);
                m.ambient.lookup(lhs[0]).and_then(|_| m.ambient.lookup(lhs[1])).map_err(alg(no))?;
                if !c.is_zero() {
                    m.set_pair(lhs[0], lhs[1], c).map_err(alg(no))?;
                } else if m.pair().is_none() {
                    // an explicit zero still declares the pairing
                    let first = m.ambient.basis()[0].name.clone();
                    m.set_pair(&first, &first, F::zero()).map_err(alg(no))?;
                }
            }
            other => return Err(syntax(no, format!("unknown keyword `{other}` in module-action"))),
        }
    }
    Ok(m)
}

fn module_block(lines: &mut Lines<'_>) -> Result<AnyModule> {
    let start = lines.expect_keyword("module-action")?;
    let name_line = lines.next()?;
    if name_line.tokens[0] != "name" {
        return Err(syntax(name_line.no, "expected `name <id>`"));
    }
    let name = one_value(name_line)?.to_string();
    lines.expect_keyword("ambient")?;
    let ambient = algebra_header(lines)?;
    lines.expect_keyword("lagrangian")?;
    let lagr = algebra_header(lines)?;
    if ambient.field != lagr.field {
        return Err(syntax(lagr.start, "ambient and lagrangian algebras use different fields"));
    }
    let mut rest = Vec::new();
    loop {
        let line = lines.next()?;
        if line.tokens == ["end"] {
            break;
        }
        rest.push((line.no, line.tokens.iter().map(|s| s.to_string()).collect()));
    }
    Ok(match ambient.field {
        BaseField::Gf2 => {
            AnyModule::Gf2(build_module(&name, build_algebra(&ambient)?, build_algebra(&lagr)?, start, &rest)?)
        }
        BaseField::Rational => {
            AnyModule::Rational(build_module(&name, build_algebra(&ambient)?, build_algebra(&lagr)?, start, &rest)?)
        }
    })
}

pub fn parse_module(text: &str) -> Result<AnyModule> {
    let mut lines = Lines::new(text);
    let m = module_block(&mut lines)?;
    lines.finish()?;
    Ok(m)
}

/// Canonical text of a module action.
pub fn emit_module<F: ScalarField>(m: &ModuleAction<F>) -> String {
    let amb = m.ambient.basis();
    let lag = m.lagr.basis();
    let amb_order = canonical_order(amb);
    let lag_order = canonical_order(lag);
    let (amb_rank, lag_rank) = (ranks(&amb_order), ranks(&lag_order));
    let mut out = String::new();
    writeln!(out, "module-action").unwrap();
    writeln!(out, "name {}", m.name).unwrap();
    out.push_str("ambient\n");
    out.push_str(&emit_algebra(&m.ambient));
    out.push_str("lagrangian\n");
    out.push_str(&emit_algebra(&m.lagr));
    for &a in &amb_order {
        for &x in &lag_order {
            let v = m.act_entry(a, x);
            if !v.is_zero() {
                writeln!(out, "act {} {} = {}", amb[a].name, lag[x].name, format_terms(lag, &lag_rank, v)).unwrap();
            }
        }
    }
    if let Some(incl) = m.incl() {
        let nonzero: Vec<usize> = lag_order.iter().copied().filter(|&x| !incl[x].is_zero()).collect();
        if nonzero.is_empty() {
            writeln!(out, "incl {} = 0", lag[lag_order[0]].name).unwrap();
        }
        for x in nonzero {
            writeln!(out, "incl {} = {}", lag[x].name, format_terms(amb, &amb_rank, &incl[x])).unwrap();
        }
    }
    if let Some(pair) = m.pair() {
        let mut any = false;
        for &a in &amb_order {
            for &b in &amb_order {
                if !pair[a][b].is_zero() {
                    any = true;
                    writeln!(out, "pair {} {} = {}", amb[a].name, amb[b].name, pair[a][b]).unwrap();
                }
            }
        }
        if !any {
            let first = &amb[amb_order[0]].name;
            writeln!(out, "pair {first} {first} = 0").unwrap();
        }
    }
    out.push_str("end\n");
    out
}

pub fn emit_any_module(m: &AnyModule) -> String {
    match m {
        AnyModule::Gf2(m) => emit_module(m),
        AnyModule::Rational(m) => emit_module(m),
    }
}

// ---------------------------------------------------------------------------
// disk count functions and points

fn nu_block(lines: &mut Lines<'_>) -> Result<NuFunction> {
    let start = lines.expect_keyword("nu")?;
    let mut name = None;
    let mut support = BTreeSet::new();
    loop {
        let line = lines.next()?;
        let no = line.no;
        match line.tokens[..] {
            ["end"] => break,
            ["name", n] => set_once(&mut name, n.to_string(), no, "name")?,
            ["v", k, l] => {
                let class = (parse_int(no, "class component", k)?, parse_int(no, "class component", l)?);
                if !support.insert(class) {
                    return Err(syntax(no, format!("class ({}, {}) listed twice", class.0, class.1)));
                }
            }
            _ => {
                return Err(syntax(
                    no,
                    format!("expected `name <id>`, `v <k> <l>` or `end`, found `{}`", line.tokens.join(" ")),
                ))
            }
        }
    }
    Ok(NuFunction::from_support(&required(name, start, "name")?, support))
}

pub fn parse_nu(text: &str) -> Result<NuFunction> {
    let mut lines = Lines::new(text);
    let nu = nu_block(&mut lines)?;
    lines.finish()?;
    Ok(nu)
}

pub fn emit_nu(nu: &NuFunction) -> String {
    let mut out = format!("nu\nname {}\n", nu.name);
    for (k, l) in nu.support() {
        writeln!(out, "v {k} {l}").unwrap();
    }
    out.push_str("end\n");
    out
}

/// `x,y` with components like `3/7`, `0` or `-1/2`.
pub fn parse_point(text: &str) -> Result<Point> {
    let bad = || FormatError::Point(text.to_string());
    let (x, y) = text.trim().split_once(',').ok_or_else(bad)?;
    let x: Rational = x.trim().parse().map_err(|_| bad())?;
    let y: Rational = y.trim().parse().map_err(|_| bad())?;
    Ok(Point::new(x, y))
}

pub fn emit_point(p: &Point) -> String {
    format!("{},{}", p.x, p.y)
}

// ---------------------------------------------------------------------------
// documents

/// Any of the four block formats.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    Complex(PearlComplex),
    Algebra(AnyAlgebra),
    Module(AnyModule),
    Nu(NuFunction),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Complex(_) => "pearl-complex",
            Document::Algebra(_) => "algebra",
            Document::Module(_) => "module-action",
            Document::Nu(_) => "nu",
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Document::Complex(c) => c.name(),
            Document::Algebra(a) => a.name(),
            Document::Module(m) => m.name(),
            Document::Nu(nu) => &nu.name,
        }
    }
}

/// Parses a document, dispatching on its first keyword.
pub fn parse_document(text: &str) -> Result<Document> {
    let mut lines = Lines::new(text);
    let first = match lines.peek() {
        Some(l) => (l.no, l.tokens[0]),
        None => return Err(syntax(lines.last, "empty input")),
    };
    let doc = match first.1 {
        "pearl-complex" => Document::Complex(complex_block(&mut lines)?),
        "algebra" => Document::Algebra(algebra_block(&mut lines)?),
        "module-action" => Document::Module(module_block(&mut lines)?),
        "nu" => Document::Nu(nu_block(&mut lines)?),
        other => {
            return Err(syntax(
                first.0,
                format!("unknown document type `{other}` (pearl-complex, algebra, module-action or nu)"),
            ))
        }
    };
    lines.finish()?;
    Ok(doc)
}

pub fn emit_document(doc: &Document) -> String {
    match doc {
        Document::Complex(c) => emit_complex(c),
        Document::Algebra(a) => emit_any_algebra(a),
        Document::Module(m) => emit_any_module(m),
        Document::Nu(nu) => emit_nu(nu),
    }
}
