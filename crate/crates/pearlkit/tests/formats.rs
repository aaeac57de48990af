use std::collections::BTreeSet;

use pearlkit::formats::{
    emit_complex, emit_document, parse_algebra, parse_complex, parse_document, parse_module, parse_nu, AnyAlgebra,
    AnyModule, Document, FormatError,
};
use pearlkit::selftest::{emit_payload, payload_document};
use pearlkit_core::catalog::{self, Payload};
use pearlkit_core::quantum_algebra::QuantumAlgebra;
use pearlkit_core::sample::{permutation, random_complex, SampleParams};
use pearlkit_core::{PearlComplex, ScalarField};
use proptest::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generators and differential terms by name, independent of storage order.
fn complex_by_name(c: &PearlComplex) -> (BTreeSet<(String, i64)>, BTreeSet<(String, String, u32)>) {
    let gens = c.generators();
    let g = gens.iter().map(|g| (g.name.clone(), g.degree)).collect();
    let mut d = BTreeSet::new();
    for (s, gen) in gens.iter().enumerate() {
        for &(t, j) in c.terms(s) {
            d.insert((gen.name.clone(), gens[t].name.clone(), j));
        }
    }
    (g, d)
}

/// Structure constants by name: `(left, right, target, exponent, coefficient)`.
fn algebra_by_name<F: ScalarField>(a: &QuantumAlgebra<F>) -> BTreeSet<(String, String, String, i64, String)> {
    let b = a.basis();
    let mut out = BTreeSet::new();
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            for (k, e, c) in a.structure_constant(i, j).terms() {
                out.insert((b[i].name.clone(), b[j].name.clone(), b[k].name.clone(), e, c.to_string()));
            }
        }
    }
    out
}

fn same_algebra<F: ScalarField>(x: &QuantumAlgebra<F>, y: &QuantumAlgebra<F>) -> bool {
    let aug = |a: &QuantumAlgebra<F>| {
        a.explicit_aug()
            .map(|v| a.basis().iter().zip(v).map(|(g, c)| (g.name.clone(), c.to_string())).collect::<BTreeSet<_>>())
    };
    x.name() == y.name()
        && x.top() == y.top()
        && x.ctx() == y.ctx()
        && x.basis()[x.unit()].name == y.basis()[y.unit()].name
        && algebra_by_name(x) == algebra_by_name(y)
        && aug(x) == aug(y)
}

#[test]
fn every_catalog_entry_round_trips() {
    for e in catalog::catalog() {
        let text = emit_payload(&e.payload);
        let doc = parse_document(&text).unwrap_or_else(|err| panic!("{}: {err}\n{text}", e.name));
        assert_eq!(emit_document(&doc), text, "{}", e.name);
        match (&e.payload, &doc) {
            (Payload::Complex(c), Document::Complex(d)) => {
                assert_eq!(complex_by_name(c), complex_by_name(d));
                assert_eq!(c.top(), d.top());
                assert_eq!(c.maslov(), d.maslov());
            }
            (Payload::Algebra(a), Document::Algebra(AnyAlgebra::Gf2(b))) => assert!(same_algebra(a, b), "{}", e.name),
            (Payload::RationalAlgebra(a), Document::Algebra(AnyAlgebra::Rational(b))) => {
                assert!(same_algebra(a, b), "{}", e.name)
            }
            (Payload::Module(m), Document::Module(AnyModule::Gf2(n))) => {
                assert!(same_algebra(&m.ambient, &n.ambient));
                assert!(same_algebra(&m.lagr, &n.lagr));
                assert_eq!(m.incl().is_some(), n.incl().is_some());
                assert_eq!(m.pair().is_some(), n.pair().is_some());
                assert_eq!(m.verify_module().passes(), n.verify_module().passes());
            }
            (Payload::Nu(a), Document::Nu(b)) => assert_eq!(a, b),
            (p, d) => panic!("{}: {} parsed as {}", e.name, p.kind(), d.kind()),
        }
        assert_eq!(payload_document(&e.payload).kind(), e.payload.kind());
    }
}

#[test]
fn canonical_order_of_generators_and_terms() {
    let text = "pearl-complex\nname x\nmaslov 2\ngen b 0\ngen a 0\ngen z 1\ngen c 1\nd z = b + a\nend\n";
    let c = parse_complex(text).unwrap();
    let out = emit_complex(&c);
    assert_eq!(out, "pearl-complex\nname x\nmaslov 2\ngen c 1\ngen z 1\ngen a 0\ngen b 0\nd z = a + b\nend\n");
    // canonical input is a fixed point
    assert_eq!(emit_complex(&parse_complex(&out).unwrap()), out);
}

#[test]
fn emitting_a_reordered_complex_is_unchanged() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in 0..40 {
        let c = random_complex(&mut rng, &SampleParams::default(), &format!("r{k}"));
        let order = permutation(&mut rng, c.len());
        let p = c.permuted(&order).unwrap();
        assert_eq!(emit_complex(&c), emit_complex(&p));
    }
}

#[test]
fn module_with_all_sections() {
    let text = emit_payload(&catalog::entry("clifford-T2-module").unwrap().payload);
    assert!(text.starts_with("module-action\nname clifford-T2-module\nambient\nalgebra\n"));
    assert!(text.contains("\nlagrangian\nalgebra\n"));
    assert!(text.contains("\nincl m = "));
    let AnyModule::Gf2(m) = parse_module(&text).unwrap() else { panic!("field") };
    assert!(m.verify_module().passes());
}

#[test]
fn zero_right_hand_sides() {
    let text = "nu\nname empty\nend\n";
    assert_eq!(parse_nu(text).unwrap().support().count(), 0);
    let text = "pearl-complex\nname x\nmaslov 3\ngen a 0\nd a = 0\nend\n";
    let c = parse_complex(text).unwrap();
    assert!(c.terms(0).is_empty());
    assert_eq!(emit_complex(&c), "pearl-complex\nname x\nmaslov 3\nminimal true\ngen a 0\nend\n");
}

fn error_line(e: &FormatError) -> Option<usize> {
    match e {
        FormatError::Syntax { line, .. }
        | FormatError::Complex { line, .. }
        | FormatError::Algebra { line, .. }
        | FormatError::Inhomogeneous { line, .. } => Some(*line),
        _ => None,
    }
}

#[test]
fn diagnostics_carry_line_numbers() {
    let cases: [(&str, usize); 10] = [
        ("pearl-complex\nname x\nmaslov 0\nend\n", 3),
        ("pearl-complex\nname x\nname y\nmaslov 2\nend\n", 3),
        ("pearl-complex\nname x\nmaslov 2\ngen a\nend\n", 4),
        ("pearl-complex\nname x\nmaslov 2\ngen a 0\nd a b\nend\n", 5),
        ("pearl-complex\nname x\nmaslov 2\ngen a 1\ngen b 0\nd a = b\nd a = b t^1\nend\n", 7),
        ("pearl-complex\nname x\nmaslov 2\ngen a 1\n\n# gap\n\nd a = b + + b\nend\n", 8),
        ("pearl-complex\nname x\nmaslov 2\ngen a 1\nd a = a t^x\nend\n", 5),
        ("pearl-complex\nmaslov 2\nend\n", 1),
        ("pearl-complex\nname x\nmaslov 2\nfoo\nend\n", 4),
        ("algebra\nname x\nfield gf2\nmaslov 2\ntop 0\nbasis u 0\nunit v\nend\n", 7),
    ];
    for (text, line) in cases {
        let err = parse_document(text).unwrap_err();
        assert_eq!(error_line(&err), Some(line), "{text:?}: {err}");
        assert!(err.to_string().starts_with(&format!("line {line}: ")), "{err}");
    }
}

#[test]
fn algebra_errors() {
    let base = "algebra\nname x\nfield rational\nmaslov 2\ntop 0\nbasis u 0\nbasis v -2\nunit u\n";
    let err = parse_algebra(&format!("{base}mul u u = u\nmul u u = u\nend\n")).unwrap_err();
    assert_eq!(error_line(&err), Some(10));
    let err = parse_algebra(&format!("{base}mul v v = u t^1\nend\n")).unwrap_err();
    match err {
        FormatError::Inhomogeneous { left, right, term, found, expected, .. } => {
            assert_eq!((left.as_str(), right.as_str(), term.as_str()), ("v", "v", "u t^1"));
            assert_eq!((found, expected), (-2, -4));
        }
        other => panic!("{other}"),
    }
    let err = parse_algebra(&format!("{base}mul v v = 2*v t^1 + 3*v t^1\nend\n")).unwrap_err();
    assert_eq!(error_line(&err), Some(9));
    let err = parse_algebra(&format!("{base}aug u = 1\naug u = 2\nend\n")).unwrap_err();
    assert_eq!(error_line(&err), Some(10));
    let err = parse_algebra("algebra\nname x\nmaslov 2\ntop 0\nbasis u 0\nunit u\nend\n").unwrap_err();
    assert_eq!(error_line(&err), Some(1), "{err}");
    let err = parse_algebra("algebra\nname x\nfield real\nend\n").unwrap_err();
    assert_eq!(error_line(&err), Some(3));
    // the unit must live in the top degree
    let err = parse_algebra("algebra\nname x\nfield gf2\nmaslov 2\ntop 2\nbasis u 0\nunit u\nend\n").unwrap_err();
    assert!(matches!(err, FormatError::Algebra { line: 1, .. }), "{err}");
}

#[test]
fn module_errors() {
    let alg = |name: &str| format!("algebra\nname {name}\nfield gf2\nmaslov 2\ntop 0\nbasis u 0\nunit u\nend\n");
    let head = format!("module-action\nname m\nambient\n{}lagrangian\n{}", alg("a"), alg("l"));
    let ok = parse_module(&format!("{head}act u u = u\nincl u = u\npair u u = 1\nend\n")).unwrap();
    assert!(matches!(ok, AnyModule::Gf2(_)));
    let err = parse_module(&format!("{head}act u u = u\nact u u = u\nend\n")).unwrap_err();
    assert_eq!(error_line(&err), Some(22));
    let err = parse_module(&format!("{head}act u w = u\nend\n")).unwrap_err();
    assert_eq!(error_line(&err), Some(21));
    let err = parse_module(&format!("{head}pair u u = 1/2\nend\n")).unwrap_err();
    assert_eq!(error_line(&err), Some(21));
    let mismatched = head.replacen("field gf2", "field rational", 1);
    assert!(parse_module(&format!("{mismatched}end\n")).is_err());
    assert_eq!(parse_module(&head).unwrap_err(), FormatError::UnexpectedEof);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn random_complexes_round_trip(seed in any::<u64>(), maslov in 2u32..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_complex(&mut rng, &SampleParams { maslov, ..SampleParams::default() }, "rand");
        let text = emit_complex(&c);
        let back = parse_complex(&text).unwrap();
        prop_assert_eq!(emit_complex(&back), text);
        prop_assert_eq!(complex_by_name(&back), complex_by_name(&c));
        prop_assert_eq!(back.homology_full().unwrap(), c.homology_full().unwrap());
    }

    #[test]
    fn comments_and_spacing_do_not_matter(seed in any::<u64>(), pad in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_complex(&mut rng, &SampleParams::default(), "spaced");
        let text = emit_complex(&c);
        let noisy: String = text
            .lines()
            .map(|l| format!("{}{}  # note\n\n", " ".repeat(pad), l.split(' ').collect::<Vec<_>>().join(&" ".repeat(pad))))
            .collect();
        prop_assert_eq!(emit_complex(&parse_complex(&noisy).unwrap()), text);
    }
}
