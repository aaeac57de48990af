//! Reduction of a pearl complex to a minimal one (no `t^0` block) together
//! with comparison maps `phi: C -> M` and `psi: M -> C` with `phi psi = id`.
//!
//! Degree by degree the generators split as cycles `x` of the `t^0`
//! differential, boundaries `y = D_0 y'`, and lifts `y'`. The span of
//! `{y' t^j, d(y') t^j}` is an acyclic subcomplex `K`; `phi` is the
//! projection along `K` onto the span of the `x t^j`, and `psi(x)` is `x`
//! corrected by an element of `K`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::gf2::{BitVec, Echelon, Insertion};
use crate::pearl_complex::{restrict, Chain, ChainMap, PearlComplex, PearlError, Slice};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalModel {
    pub model: PearlComplex,
    pub phi: ChainMap,
    pub psi: ChainMap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Part {
    Cycle(usize),
    Lift(usize),
    Bound(usize),
}

struct Splitting<'a> {
    complex: &'a PearlComplex,
    cycles: Vec<Chain>,
    cycle_degree: Vec<i64>,
    cycle_name: Vec<usize>,
    lifts: Vec<usize>,
    lift_images: Vec<Chain>,
    cache: BTreeMap<i64, (Slice, Echelon, Vec<(Part, i64)>)>,
}

impl<'a> Splitting<'a> {
    fn new(c: &'a PearlComplex) -> Self {
        let d0 = c.block(0);
        let mut degrees: Vec<i64> = c.generators().iter().map(|g| g.degree).collect();
        degrees.sort_unstable();
        degrees.dedup();
        let of_degree = |k: i64| -> Vec<usize> { (0..c.len()).filter(|&g| c.degree(g) == k).collect() };

        let mut lifts = Vec::new();
        for &k in &degrees {
            let here = of_degree(k);
            let below = of_degree(k - 1);
            let m = restrict(&d0, &here, &below);
            let mut ech = Echelon::new(below.len(), here.len());
            for (idx, &g) in here.iter().enumerate() {
                if ech.insert(m.column(idx)) == Insertion::Independent {
                    lifts.push(g);
                }
            }
        }

        let mut found: Vec<(usize, Chain, i64)> = Vec::new();
        for &k in &degrees {
            let here = of_degree(k);
            let below = of_degree(k - 1);
            let boundaries: Vec<BitVec> =
                lifts.iter().filter(|&&g| c.degree(g) == k + 1).map(|&g| d0.column(g).restrict(&here)).collect();
            let kernel = restrict(&d0, &here, &below).kernel();
            let mut ech = Echelon::new(here.len(), boundaries.len() + kernel.len());
            for b in &boundaries {
                ech.insert(b);
            }
            for kv in kernel {
                if ech.insert(&kv) == Insertion::Independent {
                    let free = kv.ones().last().expect("kernel vectors are nonzero");
                    let chain = kv.ones().map(|i| (here[i], 0)).collect();
                    found.push((here[free], chain, k));
                }
            }
        }
        found.sort_by_key(|(name, _, _)| *name);

        let lift_images = lifts.iter().map(|&g| c.apply_d(&Chain::monomial(g, 0))).collect();
        Splitting {
            complex: c,
            cycle_name: found.iter().map(|f| f.0).collect(),
            cycle_degree: found.iter().map(|f| f.2).collect(),
            cycles: found.into_iter().map(|f| f.1).collect(),
            lifts,
            lift_images,
            cache: BTreeMap::new(),
        }
    }

    fn basis_for(&mut self, degree: i64) -> Result<&(Slice, Echelon, Vec<(Part, i64)>), PearlError> {
        if !self.cache.contains_key(&degree) {
            let c = self.complex;
            let ctx = c.ctx();
            let slice = c.slice(degree, true);
            let mut ech = Echelon::new(slice.len(), slice.len());
            let mut labels = Vec::new();
            let mut push = |ech: &mut Echelon, chain: &Chain, part: Part, j: i64| -> Result<(), PearlError> {
                let v =
                    slice.coords(&chain.shifted(j)).ok_or(PearlError::Internal("basis element outside its slice"))?;
                if ech.inserted() == slice.len() || ech.insert(&v) != Insertion::Independent {
                    return Err(PearlError::Internal("split basis is not independent"));
                }
                labels.push((part, j));
                Ok(())
            };
            for (i, x) in self.cycles.iter().enumerate() {
                if let Some(j) = ctx.exponent_for(self.cycle_degree[i], degree).filter(|j| *j >= 0) {
                    push(&mut ech, x, Part::Cycle(i), j)?;
                }
            }
            for (i, &g) in self.lifts.iter().enumerate() {
                if let Some(j) = ctx.exponent_for(c.degree(g), degree).filter(|j| *j >= 0) {
                    push(&mut ech, &Chain::monomial(g, 0), Part::Lift(i), j)?;
                }
            }
            for (i, &g) in self.lifts.iter().enumerate() {
                if let Some(j) = ctx.exponent_for(c.degree(g) - 1, degree).filter(|j| *j >= 0) {
                    push(&mut ech, &self.lift_images[i], Part::Bound(i), j)?;
                }
            }
            if ech.rank() != slice.len() {
                return Err(PearlError::Internal("split basis does not span the slice"));
            }
            self.cache.insert(degree, (slice, ech, labels));
        }
        Ok(&self.cache[&degree])
    }

    /// Coordinates of a homogeneous chain of the given degree in the split basis.
    fn coordinates(&mut self, chain: &Chain, degree: i64) -> Result<Vec<(Part, i64)>, PearlError> {
        let (slice, ech, labels) = self.basis_for(degree)?;
        let v = slice.coords(chain).ok_or(PearlError::Internal("chain outside its degree slice"))?;
        let combo = ech.coordinates(&v).ok_or(PearlError::Internal("split basis does not span the slice"))?;
        Ok(combo.ones().map(|k| labels[k]).collect())
    }
}

/// Builds the minimal model of a valid complex.
pub fn reduce(c: &PearlComplex) -> Result<MinimalModel, PearlError> {
    c.ensure_valid()?;
    let mut split = Splitting::new(c);

    let mut b = PearlComplex::builder(c.name(), c.ctx().maslov())?;
    if let Some(top) = c.top() {
        b.set_top(top);
    }
    for (i, &g) in split.cycle_name.iter().enumerate() {
        b.generator(&c.generators()[g].name, split.cycle_degree[i])?;
    }
    let names: Vec<String> = split.cycle_name.iter().map(|&g| c.generators()[g].name.clone()).collect();

    // phi on each generator of C, as a chain in the model
    let mut phi_images = Vec::with_capacity(c.len());
    for g in 0..c.len() {
        let coords = split.coordinates(&Chain::monomial(g, 0), c.degree(g))?;
        phi_images.push(cycle_part(&coords));
    }
    let phi_of = |chain: &Chain| -> Chain {
        let mut out = Chain::new();
        for (g, e) in chain.iter() {
            out.xor_assign(&phi_images[g].shifted(e));
        }
        out
    };

    for (i, x) in split.cycles.iter().enumerate() {
        for (t, e) in phi_of(&c.apply_d(x)).iter() {
            let j =
                u32::try_from(e).map_err(|_| PearlError::Internal("negative exponent in the reduced differential"))?;
            b.term(&names[i], &names[t], j)?;
        }
    }
    let model = b.build();
    if !model.is_minimal() {
        return Err(PearlError::Internal("reduced differential has a t^0 block"));
    }

    let mut phi = ChainMap::new(c.clone(), model.clone())?;
    for (g, img) in phi_images.iter().enumerate() {
        phi.set_image(g, img)?;
    }

    // psi, from the top degree down; delta raises degree by at least N - 1 >= 1
    let mut order: Vec<usize> = (0..model.len()).collect();
    order.sort_by_key(|&i| core::cmp::Reverse(model.degree(i)));
    let mut psi_images: Vec<Option<Chain>> = alloc::vec![None; model.len()];
    for &i in &order {
        let x = split.cycles[i].clone();
        let mut w = c.apply_d(&x);
        for &(t, j) in model.terms(i) {
            let img = psi_images[t].as_ref().ok_or(PearlError::Internal("psi requested before it was built"))?;
            w.xor_assign(&img.shifted(i64::from(j)));
        }
        let mut tau = Chain::new();
        if !w.is_zero() {
            for (part, j) in split.coordinates(&w, model.degree(i) - 1)? {
                match part {
                    Part::Bound(k) => tau.toggle(split.lifts[k], j),
                    _ => return Err(PearlError::Internal("correction term left the acyclic part")),
                }
            }
        }
        let mut img = x.clone();
        img.xor_assign(&tau);
        psi_images[i] = Some(img);
    }
    let mut psi = ChainMap::new(model.clone(), c.clone())?;
    for (i, img) in psi_images.into_iter().enumerate() {
        psi.set_image(i, &img.expect("every generator visited"))?;
    }
    Ok(MinimalModel { model, phi, psi })
}

fn cycle_part(coords: &[(Part, i64)]) -> Chain {
    coords
        .iter()
        .filter_map(|&(p, j)| match p {
            Part::Cycle(i) => Some((i, j)),
            _ => None,
        })
        .collect()
}

/// Outcome of checking a model against its defining properties.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelReport {
    pub minimal: bool,
    pub phi_psi_identity: bool,
    pub phi_chain: bool,
    pub psi_chain: bool,
    pub phi_quasi_iso: bool,
    pub psi_quasi_iso: bool,
}

impl ModelReport {
    pub fn all_ok(&self) -> bool {
        self.minimal
            && self.phi_psi_identity
            && self.phi_chain
            && self.psi_chain
            && self.phi_quasi_iso
            && self.psi_quasi_iso
    }
}

impl MinimalModel {
    pub fn verify(&self) -> Result<ModelReport, PearlError> {
        let comp = self.psi.then(&self.phi)?;
        Ok(ModelReport {
            minimal: self.model.is_minimal(),
            phi_psi_identity: comp == ChainMap::identity(&self.model),
            phi_chain: self.phi.chain_check(),
            psi_chain: self.psi.chain_check(),
            phi_quasi_iso: self.phi.is_quasi_iso()?,
            psi_quasi_iso: self.psi.is_quasi_iso()?,
        })
    }

    /// Whether `[L] t^k` is a boundary of the reduced differential for some
    /// `k >= 1`; equivalent to vanishing of the Laurent-ring homology.
    pub fn qh_vanishes(&self, top: &str) -> Result<bool, PearlError> {
        qh_vanishes(&self.model, top)
    }

    pub fn qh_is_full(&self) -> bool {
        qh_is_full(&self.model)
    }
}

/// See [`MinimalModel::qh_vanishes`]; works on any minimal complex.
pub fn qh_vanishes(model: &PearlComplex, top: &str) -> Result<bool, PearlError> {
    if model.is_empty() {
        return Ok(true);
    }
    if !model.is_minimal() {
        return Err(PearlError::NotMinimal);
    }
    let l = model.lookup(top)?;
    let n = model.degree(l);
    let nl = model.maslov();
    let min = model.min_degree().unwrap_or(n);
    // once the source slice sits below every generator it is the full Laurent
    // slice, and multiplying a witness by t gives the next one
    let k_max = ((n + 1 - min) / nl + 1).max(1);
    for k in 1..=k_max {
        let target_deg = n - k * nl;
        let from = model.slice(target_deg + 1, true);
        let to = model.slice(target_deg, true);
        let Some(rhs) = to.coords(&Chain::monomial(l, k)) else {
            continue;
        };
        if model.d_matrix(&from, &to).solve(&rhs).is_some() {
            return Ok(true);
        }
    }
    Ok(false)
}

pub fn qh_is_full(model: &PearlComplex) -> bool {
    (0..model.len()).all(|g| model.terms(g).is_empty())
}

/// A map between minimal complexes is an isomorphism iff its `t^0` block is.
pub fn iso_test(f: &ChainMap) -> Result<bool, PearlError> {
    if !f.source().is_minimal() || !f.target().is_minimal() {
        return Err(PearlError::NotMinimal);
    }
    Ok(f.block(0).is_invertible())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InapplicableReason {
    /// `N > k + 1` yet the reduced differential is nonzero, so the generation
    /// hypothesis cannot hold for this data.
    HypothesisCounterexample,
    /// `N = k + 1` but neither outcome is witnessed.
    HypothesisViolated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dichotomy {
    Vanishes,
    Full,
    Inapplicable(InapplicableReason),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DichotomyError {
    #[error("Maslov number {maslov} must exceed the generation bound {k}")]
    MaslovTooSmall { maslov: i64, k: i64 },
    #[error(transparent)]
    Pearl(#[from] PearlError),
}

/// Decides between vanishing and full homology for a model whose homology is
/// generated as an algebra in degrees `>= n - k`.
pub fn dichotomy(model: &PearlComplex, n: i64, k: i64) -> Result<Dichotomy, DichotomyError> {
    let nl = model.maslov();
    if nl <= k {
        return Err(DichotomyError::MaslovTooSmall { maslov: nl, k });
    }
    if !model.is_minimal() {
        return Err(PearlError::NotMinimal.into());
    }
    let full = qh_is_full(model);
    if nl > k + 1 {
        return Ok(if full {
            Dichotomy::Full
        } else {
            Dichotomy::Inapplicable(InapplicableReason::HypothesisCounterexample)
        });
    }
    let tops: Vec<usize> = (0..model.len()).filter(|&g| model.degree(g) == n).collect();
    if let [l] = tops[..] {
        let hits = (0..model.len())
            .any(|g| model.degree(g) == n - k && model.terms(g).len() == 1 && model.terms(g).contains(&(l, 1)));
        if hits {
            return Ok(Dichotomy::Vanishes);
        }
    }
    Ok(if full { Dichotomy::Full } else { Dichotomy::Inapplicable(InapplicableReason::HypothesisViolated) })
}

/// Reduces `c` and a reordering of it, and tests whether the comparison map
/// `phi' o psi` between the two models is an isomorphism.
pub fn models_agree_under_reordering(c: &PearlComplex, order: &[usize]) -> Result<bool, PearlError> {
    let reordered = c.permuted(order)?;
    let a = reduce(c)?;
    let b = reduce(&reordered)?;
    let f = a.psi.then(&ChainMap::renaming(c, &reordered)?)?.then(&b.phi)?;
    iso_test(&f)
}
