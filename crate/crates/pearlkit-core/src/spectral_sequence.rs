//! Spectral sequence of the increasing degree filtration over the Laurent
//! ring: the monomial `g t^j` sits in filtration `p = -j` and total degree
//! `|g| - jN`, so `q = l - p`.
//!
//! Pages are built from the usual recipe
//! `E^r_p = Z^r_p / (Z^{r-1}_{p-1} + B^{r-1}_p)` with
//! `Z^r_p = F_p ∩ d^{-1}(F_{p-r})` and `B^r_p = F_p ∩ d(F_{p+r})`,
//! and `d_r` is an explicit matrix between chosen quotient representatives.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::gf2::{BitMatrix, BitVec, Echelon, Insertion};
use crate::pearl_complex::{PearlComplex, PearlError, Slice};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SsPage {
    pub r: u32,
    /// `(p, q) -> dim E^r_{p,q}`.
    pub entries: BTreeMap<(i64, i64), usize>,
    /// `(p, q) -> rank of d_r` leaving that slot.
    pub dr_rank: BTreeMap<(i64, i64), usize>,
}

impl SsPage {
    pub fn total(&self) -> usize {
        self.entries.values().sum()
    }

    pub fn dim(&self, p: i64, q: i64) -> usize {
        self.entries.get(&(p, q)).copied().unwrap_or(0)
    }
}

struct DegreeData {
    slice: Slice,
    /// Filtration level of each monomial in the slice.
    level: Vec<i64>,
    /// `d` from this slice into the slice one degree lower.
    d: BitMatrix,
}

struct Quotient {
    ech: Echelon,
    reps: Vec<BitVec>,
    rep_slot: Vec<usize>,
}

impl Quotient {
    fn new(dim: usize, numerator: &[BitVec], denominator: &[BitVec]) -> Self {
        let mut ech = Echelon::new(dim, numerator.len() + denominator.len());
        for v in denominator {
            ech.insert(v);
        }
        let mut reps = Vec::new();
        let mut rep_slot = Vec::new();
        for v in numerator {
            let slot = ech.inserted();
            if ech.insert(v) == Insertion::Independent {
                reps.push(v.clone());
                rep_slot.push(slot);
            }
        }
        Quotient { ech, reps, rep_slot }
    }

    fn dim(&self) -> usize {
        self.reps.len()
    }

    fn coords(&self, v: &BitVec) -> Option<BitVec> {
        let combo = self.ech.coordinates(v)?;
        Some(BitVec::from_indices(self.reps.len(), (0..self.reps.len()).filter(|&k| combo.get(self.rep_slot[k]))))
    }
}

pub struct SpectralSequence<'a> {
    complex: &'a PearlComplex,
    degrees: BTreeMap<i64, DegreeData>,
}

impl<'a> SpectralSequence<'a> {
    pub fn new(complex: &'a PearlComplex) -> Result<Self, PearlError> {
        complex.ensure_valid()?;
        Ok(SpectralSequence { complex, degrees: BTreeMap::new() })
    }

    pub fn complex(&self) -> &PearlComplex {
        self.complex
    }

    /// Default window of total degrees: the generator range, widened to at
    /// least one full period.
    pub fn default_window(&self) -> (i64, i64) {
        let n = self.complex.maslov();
        match (self.complex.min_degree(), self.complex.max_degree()) {
            (Some(lo), Some(hi)) => (lo, hi.max(lo + n - 1)),
            _ => (0, n - 1),
        }
    }

    /// Largest `r` for which `d_r` can be nonzero.
    pub fn differential_bound(&self) -> u32 {
        let span = match (self.complex.min_degree(), self.complex.max_degree()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => 0,
        };
        ((span + 1) / self.complex.maslov() + 1) as u32
    }

    fn data(&mut self, l: i64) -> &DegreeData {
        if !self.degrees.contains_key(&l) {
            let c = self.complex;
            let slice = c.slice(l, false);
            let below = c.slice(l - 1, false);
            let level = slice.monomials.iter().map(|&(_, j)| -j).collect();
            let d = c.d_matrix(&slice, &below);
            self.degrees.insert(l, DegreeData { slice, level, d });
        }
        &self.degrees[&l]
    }

    /// Range of filtration levels present in degree `l`.
    pub fn p_range(&mut self, l: i64) -> Option<(i64, i64)> {
        let data = self.data(l);
        let lo = data.level.iter().copied().min()?;
        let hi = data.level.iter().copied().max()?;
        Some((lo, hi))
    }

    /// Basis of `Z^r_p` in total degree `l`.
    fn z(&mut self, l: i64, p: i64, r: i64) -> Vec<BitVec> {
        let lower_levels: Vec<i64> = self.data(l - 1).level.clone();
        let data = self.data(l);
        let cols: Vec<usize> = (0..data.level.len()).filter(|&k| data.level[k] <= p).collect();
        let rows: Vec<usize> = (0..lower_levels.len()).filter(|&k| lower_levels[k] > p - r).collect();
        let sub = BitMatrix::from_columns(rows.len(), cols.iter().map(|&c| data.d.column(c).restrict(&rows)).collect());
        let n = data.level.len();
        sub.kernel().into_iter().map(|kv| BitVec::from_indices(n, kv.ones().map(|k| cols[k]))).collect()
    }

    /// Basis (possibly redundant) of `B^r_p` in total degree `l`.
    fn b(&mut self, l: i64, p: i64, r: i64) -> Vec<BitVec> {
        let sources = self.z(l + 1, p + r, r);
        let d = &self.data(l + 1).d;
        sources.iter().map(|v| d.apply(v)).collect()
    }

    fn quotient(&mut self, l: i64, p: i64, r: i64) -> Quotient {
        let num = self.z(l, p, r);
        let mut den = self.z(l, p - 1, r - 1);
        den.extend(self.b(l, p, r - 1));
        let dim = self.data(l).slice.len();
        Quotient::new(dim, &num, &den)
    }

    pub fn e_dim(&mut self, l: i64, p: i64, r: u32) -> usize {
        self.quotient(l, p, i64::from(r)).dim()
    }

    /// `d_r: E^r_p (degree l) -> E^r_{p-r} (degree l-1)` as a matrix.
    pub fn d_r(&mut self, l: i64, p: i64, r: u32) -> BitMatrix {
        let r = i64::from(r);
        let src = self.quotient(l, p, r);
        let dst = self.quotient(l - 1, p - r, r);
        let d = &self.data(l).d;
        let cols = src.reps.iter().map(|v| dst.coords(&d.apply(v)).expect("d maps Z^r_p into Z^r_{p-r}")).collect();
        BitMatrix::from_columns(dst.dim(), cols)
    }

    pub fn page(&mut self, r: u32, window: (i64, i64)) -> SsPage {
        let mut entries = BTreeMap::new();
        let mut dr_rank = BTreeMap::new();
        for l in window.0..=window.1 {
            let Some((plo, phi)) = self.p_range(l) else { continue };
            for p in plo..=phi {
                let dim = self.e_dim(l, p, r);
                let rank = if dim == 0 { 0 } else { self.d_r(l, p, r).rank() };
                entries.insert((p, l - p), dim);
                dr_rank.insert((p, l - p), rank);
            }
        }
        SsPage { r, entries, dr_rank }
    }

    pub fn pages(&mut self, max_r: u32, window: Option<(i64, i64)>) -> Vec<SsPage> {
        let window = window.unwrap_or_else(|| self.default_window());
        (0..=max_r).map(|r| self.page(r, window)).collect()
    }

    /// Checks `d_r d_r = 0` and `dim E^{r+1} = dim E^r - rank out - rank in`
    /// at every slot of the window.
    pub fn check_page(&mut self, r: u32, window: (i64, i64)) -> bool {
        let ri = i64::from(r);
        for l in window.0..=window.1 {
            let Some((plo, phi)) = self.p_range(l) else { continue };
            for p in plo..=phi {
                let out = self.d_r(l, p, r);
                let next = self.d_r(l - 1, p - ri, r);
                if !next.compose(&out).is_zero() {
                    return false;
                }
                let incoming = self.d_r(l + 1, p + ri, r);
                let expected = self.e_dim(l, p, r) as i64 - out.rank() as i64 - incoming.rank() as i64;
                if expected != self.e_dim(l, p, r + 1) as i64 {
                    return false;
                }
            }
        }
        true
    }

    fn all_zero(&mut self, r: u32, window: (i64, i64)) -> bool {
        for l in window.0..=window.1 {
            let Some((plo, phi)) = self.p_range(l) else { continue };
            for p in plo..=phi {
                if !self.d_r(l, p, r).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Least `r >= 1` after which every differential vanishes.
    pub fn collapse_page(&mut self) -> u32 {
        let window = self.default_window();
        let bound = self.differential_bound();
        let mut r = bound + 1;
        while r > 1 && self.all_zero(r - 1, window) {
            r -= 1;
        }
        r
    }

    /// Limit page, one past the last possibly nonzero differential.
    pub fn infinity_page(&mut self, window: (i64, i64)) -> SsPage {
        let r = self.differential_bound() + 1;
        self.page(r, window)
    }

    /// Compares the limit page with the Laurent-ring homology degree by degree.
    pub fn abutment_check(&mut self) -> Result<bool, PearlError> {
        let window = self.default_window();
        let inf = self.infinity_page(window);
        let qh = self.complex.homology_full_window(window.0, window.1)?;
        for l in window.0..=window.1 {
            let sum: usize = inf.entries.iter().filter(|((p, q), _)| p + q == l).map(|(_, d)| *d).sum();
            if Some(sum) != qh.get(l) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
