//! Packing and Gromov-radius inequalities. Areas and energies are measured
//! in units of `pi` (so `tau = 1/6` means `pi/6`), radii are plain numbers
//! and every bound is an exact rational; `pi` never has to be evaluated.
//! `CP^n` carries the form with lines of area `pi`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::coeff::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BoundError {
    #[error("missing parameter `{0}`")]
    Missing(String),
    #[error("invalid parameter: {0}")]
    Invalid(String),
    #[error("unknown case `{0}`")]
    UnknownCase(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum BoundKind {
    Gromov,
    Mixed,
    Cpn,
    Torus,
}

impl core::str::FromStr for BoundKind {
    type Err = BoundError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gromov" => Ok(BoundKind::Gromov),
            "mixed" => Ok(BoundKind::Mixed),
            "cpn" => Ok(BoundKind::Cpn),
            "torus" => Ok(BoundKind::Torus),
            _ => Err(BoundError::UnknownCase(s.to_string())),
        }
    }
}

/// Parameters of one evaluation. `rel` are radii of balls centred on the
/// Lagrangian, `compl` radii of balls in its complement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundQuery {
    pub kind: BoundKind,
    pub case: Option<String>,
    pub params: BTreeMap<String, Rational>,
    pub rel: Vec<Rational>,
    pub compl: Vec<Rational>,
}

impl BoundQuery {
    pub fn new(kind: BoundKind) -> Self {
        BoundQuery { kind, case: None, params: BTreeMap::new(), rel: Vec::new(), compl: Vec::new() }
    }

    pub fn case(mut self, case: &str) -> Self {
        self.case = Some(case.to_string());
        self
    }

    pub fn param(mut self, key: &str, value: Rational) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn rel_radius(mut self, r: Rational) -> Self {
        self.rel.push(r);
        self
    }

    pub fn compl_radius(mut self, r: Rational) -> Self {
        self.compl.push(r);
        self
    }

    fn get(&self, key: &str) -> Result<Rational, BoundError> {
        let v = self.params.get(key).cloned().ok_or_else(|| BoundError::Missing(key.to_string()))?;
        if !v.is_positive() {
            return Err(BoundError::Invalid(format!("{key} = {v} must be positive")));
        }
        Ok(v)
    }

    fn get_int(&self, key: &str) -> Result<i64, BoundError> {
        let v = self.get(key)?;
        if !v.is_integer() {
            return Err(BoundError::Invalid(format!("{key} = {v} must be an integer")));
        }
        i64::try_from(v.to_integer()).map_err(|_| BoundError::Invalid(format!("{key} = {v} is too large")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    AtMost,
    Equals,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    /// Holds with equality.
    Boundary,
    Fail,
}

/// `quantity <= bound` (or `=`), with a verdict when a value was supplied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inequality {
    pub name: String,
    pub relation: Relation,
    pub bound: Rational,
    pub value: Option<Rational>,
    pub verdict: Option<Verdict>,
}

impl Inequality {
    fn new(name: impl Into<String>, relation: Relation, bound: Rational, value: Option<Rational>) -> Self {
        let verdict = value.as_ref().map(|v| match v.cmp(&bound) {
            core::cmp::Ordering::Less if relation == Relation::AtMost => Verdict::Pass,
            core::cmp::Ordering::Equal => Verdict::Boundary,
            _ => Verdict::Fail,
        });
        Inequality { name: name.into(), relation, bound, value, verdict }
    }

    pub fn passes(&self) -> bool {
        self.verdict != Some(Verdict::Fail)
    }
}

fn q(a: i64, b: i64) -> Rational {
    Rational::new(BigInt::from(a), BigInt::from(b))
}

fn int(a: i64) -> Rational {
    Rational::from_integer(BigInt::from(a))
}

fn square(r: &Rational) -> Rational {
    r * r
}

fn first_sq(radii: &[Rational]) -> Result<Option<Rational>, BoundError> {
    check_radii(radii)?;
    Ok(radii.first().map(square))
}

fn check_radii(radii: &[Rational]) -> Result<(), BoundError> {
    match radii.iter().find(|r| !r.is_positive()) {
        Some(r) => Err(BoundError::Invalid(format!("radius {r} must be positive"))),
        None => Ok(()),
    }
}

fn dimension(query: &BoundQuery) -> Result<i64, BoundError> {
    let n = query.get_int("n")?;
    if n < 1 {
        return Err(BoundError::Invalid(format!("n = {n}")));
    }
    Ok(n)
}

pub fn evaluate(query: &BoundQuery) -> Result<Vec<Inequality>, BoundError> {
    match query.kind {
        BoundKind::Gromov => gromov(query),
        BoundKind::Mixed => mixed(query),
        BoundKind::Cpn => cpn(query),
        BoundKind::Torus => torus(query),
    }
}

/// Single-ball bounds from disks of bounded energy through generic points.
pub fn gromov(query: &BoundQuery) -> Result<Vec<Inequality>, BoundError> {
    let rel = first_sq(&query.rel)?;
    let compl = first_sq(&query.compl)?;
    let mut out = Vec::new();
    match query.case.as_deref() {
        None | Some("energy") => {
            let e_compl = query.params.contains_key("e_compl").then(|| query.get("e_compl")).transpose()?;
            let e_rel = query.params.contains_key("e_rel").then(|| query.get("e_rel")).transpose()?;
            if e_compl.is_none() && e_rel.is_none() {
                return Err(BoundError::Missing("e_compl or e_rel".into()));
            }
            if let Some(e) = e_compl {
                out.push(Inequality::new("Gr(M\\L)^2", Relation::AtMost, e, compl));
            }
            if let Some(e) = e_rel {
                out.push(Inequality::new("Gr(L)^2", Relation::AtMost, e * int(2), rel));
            }
        }
        Some("vanishing") => {
            // QH = 0: disks of Maslov index at most n + 1 through every point
            let n = dimension(query)?;
            let tau = query.get("tau")?;
            out.push(Inequality::new("Gr(L)^2", Relation::AtMost, int(2 * (n + 1)) * tau, rel));
        }
        Some("clifford") => {
            let n = dimension(query)?;
            out.push(Inequality::new("Gr(T)^2", Relation::AtMost, q(2, n + 1), rel));
            out.push(Inequality::new("Gr(CP^n\\T)^2", Relation::Equals, q(n, n + 1), compl));
        }
        Some("2h1") => {
            let n = dimension(query)?;
            out.extend(
                cpn_inequalities(n, n + 1, false, rel, compl)?.into_iter().filter(|i| i.name == "Gr(CP^n\\L)^2"),
            );
        }
        Some(other) => return Err(BoundError::UnknownCase(other.to_string())),
    }
    Ok(out)
}

fn cpn_inequalities(
    n: i64,
    maslov: i64,
    full: bool,
    rel: Option<Rational>,
    compl: Option<Rational>,
) -> Result<Vec<Inequality>, BoundError> {
    if maslov < 1 || maslov > n + 1 {
        return Err(BoundError::Invalid(format!("minimal Maslov number {maslov} must lie in 1..={}", n + 1)));
    }
    let periods = (2 * n) / maslov;
    let mut out =
        vec![Inequality::new("Gr(CP^n\\L)^2", Relation::AtMost, q(periods * maslov, 2 * (n + 1)), compl.clone())];
    out.push(Inequality::new("Gr(CP^n\\L)^2 (uniform)", Relation::AtMost, q(n, n + 1), compl.clone()));
    if full {
        let value = match (rel, compl) {
            (Some(r), Some(c)) => Some(r / int(2) + c),
            _ => None,
        };
        out.push(Inequality::new("Gr(L)^2/2 + Gr(CP^n\\L)^2", Relation::AtMost, Rational::one(), value));
    }
    Ok(out)
}

/// Monotone Lagrangians in `CP^n` with nonvanishing quantum homology.
pub fn cpn(query: &BoundQuery) -> Result<Vec<Inequality>, BoundError> {
    let n = dimension(query)?;
    let maslov = query.get_int("nl")?;
    let full = match query.params.get("full") {
        None => false,
        Some(v) if v.is_zero() => false,
        Some(v) if v.is_one() => true,
        Some(v) => return Err(BoundError::Invalid(format!("full = {v} must be 0 or 1"))),
    };
    cpn_inequalities(n, maslov, full, first_sq(&query.rel)?, first_sq(&query.compl)?)
}

/// Monotone tori whose quantum homology is not `H(T) (x) Lambda`.
pub fn torus(query: &BoundQuery) -> Result<Vec<Inequality>, BoundError> {
    let tau = query.get("tau")?;
    let rel = first_sq(&query.rel)?;
    let area = rel.as_ref().map(|r| r / int(2));
    Ok(vec![
        Inequality::new("pi Gr(T)^2/2 (units of pi)", Relation::AtMost, &tau * int(2), area),
        Inequality::new("Gr(T)^2", Relation::AtMost, tau * int(4), rel),
    ])
}

/// Mixed packings: `sum r_i^2/2 + sum rho_j^2 <= E/pi`.
pub fn mixed(query: &BoundQuery) -> Result<Vec<Inequality>, BoundError> {
    check_radii(&query.rel)?;
    check_radii(&query.compl)?;
    let energy = match query.case.as_deref() {
        Some("clifford") => q(2, 3),
        Some("quadric-sphere") => Rational::one(),
        None | Some("raw") => query.get("e")?,
        Some(other) => return Err(BoundError::UnknownCase(other.to_string())),
    };
    let l = query.params.get("l").cloned().unwrap_or_else(|| int(query.rel.len().max(1) as i64));
    let m = query.params.get("m").cloned().unwrap_or_else(|| int(query.compl.len().max(1) as i64));
    let value = (!query.rel.is_empty() || !query.compl.is_empty()).then(|| {
        query.rel.iter().map(|r| square(r) / int(2)).fold(Rational::zero(), |a, b| a + b)
            + query.compl.iter().map(square).fold(Rational::zero(), |a, b| a + b)
    });
    let mut out = vec![Inequality::new("sum r^2/2 + sum rho^2", Relation::AtMost, energy.clone(), value)];
    // all radii equal: (l/2 + m) r^2 <= E
    let weight = l / int(2) + m;
    if !weight.is_positive() {
        return Err(BoundError::Invalid("ball counts must not both be zero".into()));
    }
    let all: Vec<&Rational> = query.rel.iter().chain(query.compl.iter()).collect();
    let equal = all.first().filter(|r0| all.iter().all(|r| r == *r0)).map(|r| square(r));
    out.push(Inequality::new("r^2 (equal radii)", Relation::AtMost, energy / weight, equal));
    Ok(out)
}

/// `floor(2n/N) N / (2(n+1))`, the complement bound for `CP^n`.
pub fn cpn_complement_bound(n: i64, maslov: i64) -> Rational {
    q((2 * n) / maslov * maslov, 2 * (n + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn verdicts(v: &[Inequality]) -> Vec<Option<Verdict>> {
        v.iter().map(|i| i.verdict).collect()
    }

    #[test]
    fn clifford_bounds() {
        let out = evaluate(&BoundQuery::new(BoundKind::Gromov).case("clifford").param("n", int(2))).unwrap();
        assert_eq!(out[0].bound, q(2, 3));
        assert_eq!(out[1].bound, q(2, 3));
        assert_eq!(out[1].relation, Relation::Equals);
    }

    #[test]
    fn two_h1_complement() {
        for n in 1..8 {
            let out = evaluate(&BoundQuery::new(BoundKind::Gromov).case("2h1").param("n", int(n))).unwrap();
            assert_eq!(out[0].bound, q(1, 2));
        }
    }

    #[test]
    fn torus_tau() {
        let out = evaluate(&BoundQuery::new(BoundKind::Torus).param("tau", q(1, 6))).unwrap();
        assert_eq!(out[0].bound, q(1, 3));
        assert_eq!(out[1].bound, q(2, 3));
    }

    #[test]
    fn mixed_cases() {
        let half = q(1, 2);
        let c = evaluate(&BoundQuery::new(BoundKind::Mixed).case("clifford")).unwrap();
        assert_eq!(c[1].bound, q(4, 9));
        let s =
            evaluate(&BoundQuery::new(BoundKind::Mixed).case("quadric-sphere").rel_radius(int(1)).compl_radius(half))
                .unwrap();
        assert_eq!(s[0].value, Some(q(3, 4)));
        assert_eq!(s[0].verdict, Some(Verdict::Pass));
        let raw =
            evaluate(&BoundQuery::new(BoundKind::Mixed).param("e", q(2, 3)).rel_radius(q(2, 3)).compl_radius(q(2, 3)))
                .unwrap();
        assert_eq!(verdicts(&raw), vec![Some(Verdict::Boundary), Some(Verdict::Boundary)]);
    }

    #[test]
    fn cpn_bounds() {
        let out =
            evaluate(&BoundQuery::new(BoundKind::Cpn).param("n", int(2)).param("nl", int(2)).param("full", int(1)))
                .unwrap();
        assert_eq!(out[0].bound, q(2, 3));
        assert_eq!(out.len(), 3);
        assert_eq!(cpn_complement_bound(3, 4), q(1, 2));
        assert!(matches!(
            evaluate(&BoundQuery::new(BoundKind::Cpn).param("n", int(2)).param("nl", int(4))),
            Err(BoundError::Invalid(_))
        ));
    }

    #[test]
    fn missing_and_invalid() {
        assert_eq!(evaluate(&BoundQuery::new(BoundKind::Torus)), Err(BoundError::Missing("tau".into())));
        assert!(matches!(evaluate(&BoundQuery::new(BoundKind::Gromov)), Err(BoundError::Missing(_))));
        assert!(matches!(
            evaluate(&BoundQuery::new(BoundKind::Torus).param("tau", -q(1, 6))),
            Err(BoundError::Invalid(_))
        ));
        let fail =
            evaluate(&BoundQuery::new(BoundKind::Gromov).param("e_compl", q(1, 2)).compl_radius(int(1))).unwrap();
        assert_eq!(fail[0].verdict, Some(Verdict::Fail));
    }
}
