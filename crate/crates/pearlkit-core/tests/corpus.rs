use pearlkit_core::minimal_model::{iso_test, models_agree_under_reordering, qh_is_full, reduce};
use pearlkit_core::pearl_complex::ChainMap;
use pearlkit_core::sample::{permutation, random_complex, SampleParams};
use pearlkit_core::spectral_sequence::SpectralSequence;
use pearlkit_core::PearlComplex;
use proptest::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn corpus(seed: u64, per_maslov: usize) -> Vec<PearlComplex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for maslov in [2, 3, 4] {
        let params = SampleParams { maslov, ..SampleParams::default() };
        for k in 0..per_maslov {
            out.push(random_complex(&mut rng, &params, &format!("c{maslov}-{k}")));
        }
    }
    out
}

fn span(c: &PearlComplex) -> i64 {
    c.max_degree().unwrap() - c.min_degree().unwrap()
}

fn check_minimal_model(c: &PearlComplex, rng: &mut ChaCha8Rng) {
    let m = reduce(c).unwrap();
    let report = m.verify().unwrap();
    assert!(report.all_ok(), "{}: {report:?}", c.name());
    assert!(m.model.is_minimal());
    assert!(m.model.block(0).is_zero());

    // phi psi is the identity of the model, as a chain map
    let round = m.psi.then(&m.phi).unwrap();
    assert_eq!(round, ChainMap::identity(&m.model), "{}", c.name());

    // homology of the model agrees with homology of the complex
    let window = c.default_plus_window();
    assert_eq!(
        m.model.homology_plus(Some(window)).unwrap().dims,
        c.homology_plus(Some(window)).unwrap().dims,
        "{}",
        c.name()
    );
    let (lo, hi) = (c.min_degree().unwrap(), c.max_degree().unwrap());
    assert_eq!(m.model.homology_full_window(lo, hi).unwrap().dims, c.homology_full_window(lo, hi).unwrap().dims);
    // generators of the model are a basis of Morse homology
    let morse: usize = c.morse_homology().values().sum();
    assert_eq!(m.model.len(), morse);

    // idempotent
    let again = reduce(&m.model).unwrap();
    assert!(again.model.same_shape(&m.model));
    assert!(iso_test(&again.phi).unwrap());

    // reordered input gives an isomorphic model
    let order = permutation(rng, c.len());
    assert!(models_agree_under_reordering(c, &order).unwrap(), "{}", c.name());

    // full iff positive homology looks like that of the bare generators
    let mut bare = PearlComplex::builder("bare", c.maslov() as u32).unwrap();
    for g in m.model.generators() {
        bare.generator(&g.name, g.degree).unwrap();
    }
    let bare = bare.build();
    let looks_full = bare.homology_plus(Some(window)).unwrap().dims == c.homology_plus(Some(window)).unwrap().dims;
    assert_eq!(qh_is_full(&m.model), looks_full, "{}", c.name());
}

fn check_spectral_sequence(c: &PearlComplex) {
    let mut ss = SpectralSequence::new(c).unwrap();
    let window = ss.default_window();
    let bound = ss.differential_bound();
    let n = c.maslov();
    for r in 0..=bound {
        assert!(ss.check_page(r, window), "{}: page {r}", c.name());
    }
    // E^1_{p,q} is Morse homology of the generators in degree p + q - pN
    let morse = c.morse_homology();
    let e1 = ss.page(1, window);
    for (&(p, q), &dim) in &e1.entries {
        let g = p + q - p * n;
        assert_eq!(dim, morse.get(&g).copied().unwrap_or(0), "{}: E1 at ({p},{q})", c.name());
    }
    let collapse = ss.collapse_page();
    assert!(i64::from(collapse) <= (span(c) + 1) / n + 1, "{}: collapse {collapse}", c.name());
    assert!(ss.abutment_check().unwrap(), "{}", c.name());
}

#[test]
fn minimal_models_on_random_corpus() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let complexes = corpus(2024, 170);
    assert!(complexes.len() >= 500);
    for c in &complexes {
        assert!(c.len() <= 12);
        check_minimal_model(c, &mut rng);
    }
}

#[test]
fn spectral_sequences_on_random_corpus() {
    for c in corpus(2024, 170) {
        check_spectral_sequence(&c);
    }
}

// Positive-ring duality needs a Poincare-type complex, which random samples
// are not; over the Laurent ring it is plain linear algebra and always holds.
#[test]
fn laurent_duality_on_random_corpus() {
    for c in corpus(7, 60) {
        let dual = c.dual_complex().unwrap();
        assert!(dual.validate().is_valid());
        assert!(dual.dual_complex().unwrap().same_shape(&c));
        let n = c.top().unwrap();
        let (lo, hi) = (c.min_degree().unwrap(), c.max_degree().unwrap());
        let here = c.homology_full_window(lo, hi).unwrap();
        let there = dual.homology_full_window(n - hi, n - lo).unwrap();
        for k in lo..=hi {
            assert_eq!(here.get(k), there.get(n - k), "{} degree {k}", c.name());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduce_verifies(seed in any::<u64>(), maslov in 2u32..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let params = SampleParams { maslov, ..SampleParams::default() };
        let c = random_complex(&mut rng, &params, "p");
        prop_assert!(c.validate().is_valid());
        check_minimal_model(&c, &mut rng);
        check_spectral_sequence(&c);
    }
}
