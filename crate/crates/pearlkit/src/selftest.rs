//! Catalog self-test: the identities each entry carries, a text round trip,
//! and every command that applies to the entry's kind.

use std::thread;

use pearlkit_core::bounds::BoundKind;
use pearlkit_core::catalog::{self, CatalogEntry, CheckResult, Payload};
use pearlkit_core::quantum_algebra::QuantumAlgebra;
use pearlkit_core::torus::{generic_triple, NuFunction, Point};
use pearlkit_core::ScalarField;

use crate::commands::{self, Coeff, CommandError};
use crate::formats::{self, AnyAlgebra, AnyModule, Document};
use crate::report::Report;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryResult {
    pub name: String,
    pub kind: &'static str,
    pub checks: Vec<CheckResult>,
}

impl EntryResult {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn payload_document(p: &Payload) -> Document {
    match p {
        Payload::Complex(c) => Document::Complex(c.clone()),
        Payload::Algebra(a) => Document::Algebra(AnyAlgebra::Gf2(a.clone())),
        Payload::RationalAlgebra(a) => Document::Algebra(AnyAlgebra::Rational(a.clone())),
        Payload::Module(m) => Document::Module(AnyModule::Gf2(m.clone())),
        Payload::Nu(nu) => Document::Nu(nu.clone()),
    }
}

pub fn emit_payload(p: &Payload) -> String {
    formats::emit_document(&payload_document(p))
}

fn ck(name: impl Into<String>, passed: bool) -> CheckResult {
    CheckResult { name: name.into(), passed }
}

/// A command run counts as passing when it neither errors nor reports a
/// failed verification; `extra` can inspect the report further.
fn run_cmd(
    out: &mut Vec<CheckResult>,
    name: &str,
    r: Result<Report, CommandError>,
    extra: impl FnOnce(&Report) -> bool,
) {
    let passed = match r {
        Ok(rep) => !rep.failed && extra(&rep),
        Err(_) => false,
    };
    out.push(ck(format!("cli: {name}"), passed));
}

fn even_degrees<F: ScalarField>(a: &QuantumAlgebra<F>) -> bool {
    a.basis().iter().all(|b| b.degree % 2 == 0)
}

fn round_trip(out: &mut Vec<CheckResult>, p: &Payload) {
    let text = emit_payload(p);
    let again = formats::parse_document(&text).map(|d| formats::emit_document(&d));
    out.push(ck("text round trip", again.as_deref() == Ok(text.as_str())));
}

fn reference_triples() -> Vec<[Point; 3]> {
    let pt = |a: (i64, i64), b: (i64, i64)| Point::from_ratios(a, b);
    vec![
        [pt((1, 10), (1, 7)), pt((1, 9), (1, 6)), pt((3, 5), (4, 7))],
        [pt((1, 16), (1, 18)), pt((3, 16), (5, 18)), pt((5, 16), (1, 6))],
        [pt((2, 11), (3, 13)), pt((7, 17), (5, 19)), pt((13, 23), (17, 29))],
    ]
}

fn nu_checks(out: &mut Vec<CheckResult>, nu: &NuFunction) {
    run_cmd(out, "torus synth", commands::torus_synth(nu), |r| r.get("qh_vanishes") == Some("0"));
    let Some(t) = reference_triples().into_iter().find(|t| generic_triple(nu, [&t[0], &t[1], &t[2]])) else {
        out.push(ck("cli: generic reference triple", false));
        return;
    };
    let p = [&t[0], &t[1], &t[2]];
    run_cmd(out, "torus s1", commands::torus_s1(nu, p), |r| r.get("agrees") == Some("1"));
    run_cmd(out, "torus n4", commands::torus_n4(nu, p), |_| true);
    let p4 = Point::from_ratios((5, 13), (7, 11));
    run_cmd(out, "torus epsilon", commands::torus_epsilon(nu, [&t[0], &t[1], &t[2], &p4]), |r| {
        r.get("epsilon").is_some()
    });
}

fn algebra_checks<F: ScalarField>(out: &mut Vec<CheckResult>, doc: &Document, a: &QuantumAlgebra<F>) {
    run_cmd(out, "algebra verify", commands::algebra_verify(doc), |_| true);
    if even_degrees(a) && a.explicit_aug().is_some() {
        run_cmd(out, "algebra euler", commands::algebra_euler(doc), |r| r.get("degree_zero") == Some("1"));
    }
    // the unit is invertible in the top degree
    run_cmd(out, "algebra invertible", commands::algebra_invertible(doc, a.top(), 8), |r| r.get("found") == Some("1"));
}

fn entry_checks(e: &CatalogEntry) -> EntryResult {
    let mut checks = e.checks();
    round_trip(&mut checks, &e.payload);
    let doc = payload_document(&e.payload);
    match &e.payload {
        Payload::Complex(c) => {
            run_cmd(&mut checks, "check", commands::check(&doc), |r| r.get("duality") != Some("0"));
            run_cmd(&mut checks, "homology plus", commands::homology(c, Coeff::Plus, None), |_| true);
            run_cmd(&mut checks, "homology full", commands::homology(c, Coeff::Full, None), |_| true);
            run_cmd(&mut checks, "minimal", commands::minimal(c), |r| r.get("verified") == Some("1"));
            run_cmd(&mut checks, "ss", commands::spectral(c, None, None), |_| true);
        }
        Payload::Algebra(a) => algebra_checks(&mut checks, &doc, a),
        Payload::RationalAlgebra(a) => algebra_checks(&mut checks, &doc, a),
        Payload::Module(m) => {
            run_cmd(&mut checks, "algebra verify", commands::algebra_verify(&doc), |_| true);
            run_cmd(&mut checks, "check", commands::check(&doc), |_| true);
            if m.pair().is_some() && even_degrees(&m.ambient) {
                run_cmd(&mut checks, "algebra euler", commands::algebra_euler(&doc), |r| {
                    r.get("degree_zero") == Some("1")
                });
            }
        }
        Payload::Nu(nu) => nu_checks(&mut checks, nu),
    }
    EntryResult { name: e.name.clone(), kind: e.payload.kind(), checks }
}

/// Bound evaluations with their expected exact values.
fn bound_checks() -> EntryResult {
    let cases: [(BoundKind, &[&str], &[&str]); 7] = [
        (BoundKind::Gromov, &["clifford", "n=2"], &["2/3", "2/3"]),
        (BoundKind::Gromov, &["clifford", "n=3"], &["1/2", "3/4"]),
        (BoundKind::Gromov, &["2h1", "n=3"], &["1/2"]),
        (BoundKind::Mixed, &["clifford", "r=1/2", "rho=1/2"], &["2/3", "4/9"]),
        (BoundKind::Mixed, &["quadric-sphere", "r=1/2", "rho=1/2"], &["1", "2/3"]),
        (BoundKind::Cpn, &["n=2", "nl=3"], &["1/2", "2/3"]),
        (BoundKind::Torus, &["tau=1/6"], &["1/3", "2/3"]),
    ];
    let mut checks = Vec::new();
    for (kind, args, want) in cases {
        let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        let name = format!("bounds {} {}", format!("{kind:?}").to_lowercase(), args.join(" "));
        run_cmd(&mut checks, &name, commands::bounds(kind, &args), |r| {
            let got: Vec<&str> = r.tables().flat_map(|t| t.rows.iter().map(|row| row[2].as_str())).collect();
            got == want
        });
    }
    run_cmd(&mut checks, "catalog list", Ok(commands::catalog_list()), |r| {
        r.tables().next().is_some_and(|t| t.rows.len() == catalog::names().len())
    });
    EntryResult { name: "bounds".into(), kind: "bounds", checks }
}

/// Runs every entry (in parallel) and returns the results sorted by name.
pub fn run() -> Vec<EntryResult> {
    let entries = catalog::catalog();
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(entries.len().max(1));
    let chunk = entries.len().div_ceil(workers).max(1);
    let mut results: Vec<EntryResult> = thread::scope(|s| {
        let handles: Vec<_> =
            entries.chunks(chunk).map(|c| s.spawn(move || c.iter().map(entry_checks).collect::<Vec<_>>())).collect();
        handles.into_iter().flat_map(|h| h.join().expect("selftest worker panicked")).collect()
    });
    results.push(bound_checks());
    results.sort_by(|a, b| a.name.cmp(&b.name));
    results
}
