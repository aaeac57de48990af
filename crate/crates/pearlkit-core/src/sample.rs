//! Random valid pearl complexes for property tests and corpus runs.
//!
//! A complex is assembled from free generators and two-generator pieces
//! `u -> v t^j`, then scrambled by conjugating with elementary changes of
//! basis `v -> v + u t^j` (each its own inverse mod 2). Conjugation keeps
//! `d^2 = 0` and homogeneity, so every output is valid by construction.

use alloc::format;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::pearl_complex::{Chain, PearlComplex};

#[derive(Debug, Clone)]
pub struct SampleParams {
    pub max_generators: usize,
    pub maslov: u32,
    pub min_degree: i64,
    pub max_degree: i64,
    pub max_exponent: u32,
    pub conjugations: usize,
}

impl Default for SampleParams {
    fn default() -> Self {
        SampleParams { max_generators: 12, maslov: 2, min_degree: 0, max_degree: 4, max_exponent: 2, conjugations: 12 }
    }
}

/// Uniform integer in `0..n` (`n > 0`); bias is irrelevant at these sizes.
pub fn below<R: RngCore>(rng: &mut R, n: u64) -> u64 {
    rng.next_u64() % n
}

pub fn range_i64<R: RngCore>(rng: &mut R, lo: i64, hi: i64) -> i64 {
    lo + below(rng, (hi - lo + 1) as u64) as i64
}

pub fn permutation<R: RngCore>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = below(rng, i as u64 + 1) as usize;
        v.swap(i, j);
    }
    v
}

pub fn random_complex<R: RngCore>(rng: &mut R, params: &SampleParams, name: &str) -> PearlComplex {
    let n = i64::from(params.maslov);
    let target = 1 + below(rng, params.max_generators.max(1) as u64) as usize;
    let mut degrees: Vec<i64> = Vec::new();
    let mut diff: Vec<Chain> = Vec::new();
    while degrees.len() < target {
        let room = target - degrees.len();
        if room >= 2 && below(rng, 3) < 2 {
            // piece u -> v t^j
            let j = below(rng, u64::from(params.max_exponent) + 1) as i64;
            let du = range_i64(rng, params.min_degree, params.max_degree);
            let dv = du - 1 + j * n;
            let u = degrees.len();
            degrees.push(du);
            degrees.push(dv);
            diff.push(Chain::monomial(u + 1, j));
            diff.push(Chain::new());
        } else {
            degrees.push(range_i64(rng, params.min_degree, params.max_degree));
            diff.push(Chain::new());
        }
    }

    for _ in 0..params.conjugations {
        let len = degrees.len();
        if len < 2 {
            break;
        }
        let v = below(rng, len as u64) as usize;
        let candidates: Vec<(usize, i64)> = (0..len)
            .filter(|&u| u != v)
            .filter_map(|u| {
                let diff_deg = degrees[u] - degrees[v];
                (diff_deg >= 0 && diff_deg % n == 0 && diff_deg / n <= i64::from(params.max_exponent))
                    .then_some((u, diff_deg / n))
            })
            .collect();
        if candidates.is_empty() {
            continue;
        }
        let (u, j) = candidates[below(rng, candidates.len() as u64) as usize];
        let p = |g: usize| -> Chain {
            let mut c = Chain::monomial(g, 0);
            if g == v {
                c.toggle(u, j);
            }
            c
        };
        let apply = |diff: &[Chain], c: &Chain| -> Chain {
            let mut out = Chain::new();
            for (g, e) in c.iter() {
                out.xor_assign(&diff[g].shifted(e));
            }
            out
        };
        let apply_p = |c: &Chain| -> Chain {
            let mut out = Chain::new();
            for (g, e) in c.iter() {
                out.xor_assign(&p(g).shifted(e));
            }
            out
        };
        diff = (0..len).map(|g| apply_p(&apply(&diff, &p(g)))).collect();
    }

    let order = permutation(rng, degrees.len());
    let mut b = PearlComplex::builder(name, params.maslov).expect("Maslov number is at least 2");
    for &g in &order {
        b.generator(&format!("g{g}"), degrees[g]).expect("fresh names");
    }
    for &g in &order {
        for (t, e) in diff[g].iter() {
            let exp = u32::try_from(e).expect("conjugation keeps exponents nonnegative");
            b.term(&format!("g{g}"), &format!("g{t}"), exp).expect("distinct terms");
        }
    }
    let top = degrees.iter().copied().max().unwrap_or(0);
    b.top(top).build()
}
