//! Dense bit vectors and column-major matrices over GF(2).
//!
//! Everything here is sized for the small per-degree slices that show up in
//! pearl complexes: a few dozen coordinates at most, packed into `u64` words.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; len.div_ceil(WORD)] }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, ones: I) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.flip(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words.iter().enumerate().find(|(_, w)| **w != 0).map(|(k, w)| k * WORD + w.trailing_zeros() as usize)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum::<u32>() % 2 == 1
    }

    /// Keeps only the coordinates listed in `keep`, in that order.
    pub fn restrict(&self, keep: &[usize]) -> BitVec {
        BitVec::from_indices(keep.len(), keep.iter().enumerate().filter(|(_, &i)| self.get(i)).map(|(k, _)| k))
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Outcome of inserting a vector into an [`Echelon`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Insertion {
    Independent,
    /// The vector was already in the span; the payload says which earlier
    /// inserted vectors (plus this one) sum to zero.
    Dependent(BitVec),
}

/// Incremental row echelon form that remembers how each stored row was
/// combined from the inserted vectors.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    capacity: usize,
    rows: Vec<BitVec>,
    pivots: Vec<usize>,
    combos: Vec<BitVec>,
    inserted: usize,
}

impl Echelon {
    /// `capacity` bounds the number of vectors that will ever be inserted.
    pub fn new(dim: usize, capacity: usize) -> Self {
        Echelon { dim, capacity, rows: Vec::new(), pivots: Vec::new(), combos: Vec::new(), inserted: 0 }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    fn reduce_with_combo(&self, v: &BitVec) -> (BitVec, BitVec) {
        assert_eq!(v.len(), self.dim, "vector length does not match echelon dimension");
        let mut rem = v.clone();
        let mut combo = BitVec::zeros(self.capacity);
        for (k, &p) in self.pivots.iter().enumerate() {
            if rem.get(p) {
                rem.xor_assign(&self.rows[k]);
                combo.xor_assign(&self.combos[k]);
            }
        }
        (rem, combo)
    }

    pub fn reduce(&self, v: &BitVec) -> BitVec {
        self.reduce_with_combo(v).0
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Coefficients over the inserted vectors that reproduce `v`, if `v` lies
    /// in their span.
    pub fn coordinates(&self, v: &BitVec) -> Option<BitVec> {
        let (rem, combo) = self.reduce_with_combo(v);
        rem.is_zero().then_some(combo)
    }

    pub fn insert(&mut self, v: &BitVec) -> Insertion {
        assert!(self.inserted < self.capacity, "echelon capacity {} exceeded", self.capacity);
        let idx = self.inserted;
        self.inserted += 1;
        let (rem, mut combo) = self.reduce_with_combo(v);
        combo.flip(idx);
        match rem.first_one() {
            None => Insertion::Dependent(combo),
            Some(p) => {
                let at = self.pivots.partition_point(|&q| q < p);
                self.pivots.insert(at, p);
                self.rows.insert(at, rem);
                self.combos.insert(at, combo);
                Insertion::Independent
            }
        }
    }

    /// Current basis rows (reduced, not necessarily equal to inserted vectors).
    pub fn basis(&self) -> &[BitVec] {
        &self.rows
    }
}

/// Column-major GF(2) matrix; column `j` is the image of the `j`-th basis
/// vector of the source.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: Vec<BitVec>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix { rows, cols: vec![BitVec::zeros(rows); cols] }
    }

    pub fn identity(n: usize) -> Self {
        BitMatrix { rows: n, cols: (0..n).map(|i| BitVec::unit(n, i)).collect() }
    }

    pub fn from_columns(rows: usize, cols: Vec<BitVec>) -> Self {
        assert!(cols.iter().all(|c| c.len() == rows), "column length mismatch");
        BitMatrix { rows, cols }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.cols[c].get(r)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.cols[c].set(r, value);
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        self.cols[c].flip(r);
    }

    pub fn column(&self, c: usize) -> &BitVec {
        &self.cols[c]
    }

    pub fn columns(&self) -> &[BitVec] {
        &self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(BitVec::is_zero)
    }

    pub fn apply(&self, x: &BitVec) -> BitVec {
        assert_eq!(x.len(), self.ncols(), "vector length does not match column count");
        let mut out = BitVec::zeros(self.rows);
        for j in x.ones() {
            out.xor_assign(&self.cols[j]);
        }
        out
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &BitMatrix) -> BitMatrix {
        assert_eq!(self.ncols(), rhs.nrows(), "shape mismatch in composition");
        BitMatrix { rows: self.rows, cols: rhs.cols.iter().map(|c| self.apply(c)).collect() }
    }

    pub fn add(&self, rhs: &BitMatrix) -> BitMatrix {
        assert!(self.rows == rhs.rows && self.ncols() == rhs.ncols(), "shape mismatch in sum");
        BitMatrix { rows: self.rows, cols: self.cols.iter().zip(&rhs.cols).map(|(a, b)| a.xor(b)).collect() }
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.ncols(), self.rows);
        for (j, col) in self.cols.iter().enumerate() {
            for i in col.ones() {
                t.set(j, i, true);
            }
        }
        t
    }

    fn echelon(&self) -> (Echelon, Vec<BitVec>) {
        let mut ech = Echelon::new(self.rows, self.ncols());
        let mut kernel = Vec::new();
        for c in &self.cols {
            if let Insertion::Dependent(k) = ech.insert(c) {
                kernel.push(k);
            }
        }
        (ech, kernel)
    }

    pub fn rank(&self) -> usize {
        self.echelon().0.rank()
    }

    /// A basis of `{x : Mx = 0}`.
    pub fn kernel(&self) -> Vec<BitVec> {
        self.echelon().1
    }

    /// One solution of `Mx = b` (free variables set to zero), if any.
    pub fn solve(&self, b: &BitVec) -> Option<BitVec> {
        self.echelon().0.coordinates(b)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.ncols() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<BitMatrix> {
        if !self.is_invertible() {
            return None;
        }
        let ech = self.echelon().0;
        let cols = (0..self.rows).map(|i| ech.coordinates(&BitVec::unit(self.rows, i))).collect::<Option<Vec<_>>>()?;
        Some(BitMatrix { rows: self.rows, cols })
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.ncols())?;
        for r in 0..self.rows {
            for c in 0..self.ncols() {
                f.write_str(if self.get(r, c) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bitvec_basics() {
        let mut v = BitVec::zeros(130);
        v.set(0, true);
        v.set(129, true);
        assert_eq!(v.count_ones(), 2);
        assert_eq!(v.first_one(), Some(0));
        v.flip(0);
        assert_eq!(v.first_one(), Some(129));
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![129]);
    }

    #[test]
    fn rank_kernel_solve() {
        // columns: e0, e1, e0+e1
        let m =
            BitMatrix::from_columns(2, vec![BitVec::unit(2, 0), BitVec::unit(2, 1), BitVec::from_indices(2, [0, 1])]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.apply(&k[0]).is_zero());
        let b = BitVec::from_indices(2, [0, 1]);
        let x = m.solve(&b).unwrap();
        assert_eq!(m.apply(&x), b);
    }

    #[test]
    fn inverse_roundtrip() {
        let m = BitMatrix::from_columns(
            3,
            vec![BitVec::from_indices(3, [0, 1]), BitVec::from_indices(3, [1]), BitVec::from_indices(3, [0, 1, 2])],
        );
        let inv = m.inverse().unwrap();
        assert_eq!(m.compose(&inv), BitMatrix::identity(3));
        assert_eq!(inv.compose(&m), BitMatrix::identity(3));
    }

    #[test]
    fn singular_has_no_inverse() {
        let m = BitMatrix::zeros(2, 2);
        assert!(m.inverse().is_none());
        assert!(m.solve(&BitVec::unit(2, 0)).is_none());
    }

    #[test]
    fn echelon_coordinates_track_inserted_vectors() {
        let mut e = Echelon::new(4, 3);
        let a = BitVec::from_indices(4, [1, 2]);
        let b = BitVec::from_indices(4, [0, 1]);
        let c = BitVec::from_indices(4, [3]);
        for v in [&a, &b, &c] {
            assert_eq!(e.insert(v), Insertion::Independent);
        }
        let target = a.xor(&c);
        let coords = e.coordinates(&target).unwrap();
        assert_eq!(coords.ones().collect::<Vec<_>>(), vec![0, 2]);
    }

    #[test]
    fn transpose_involution() {
        let m = BitMatrix::from_columns(2, vec![BitVec::unit(2, 1), BitVec::zeros(2), BitVec::unit(2, 0)]);
        assert_eq!(m.transpose().transpose(), m);
        assert_eq!(m.transpose().nrows(), 3);
    }
}
