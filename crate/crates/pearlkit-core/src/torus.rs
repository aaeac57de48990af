//! Monotone 2-tori with minimal Maslov number 2: the quantum product
//! recovered from the mod-2 count of Maslov-2 disks per boundary class, and
//! enumerative parities in a flat model where the boundary of every such
//! disk through `p` is the straight closed geodesic through `p` in its class.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::coeff::{Gf2, Rational};
use crate::quantum_algebra::{AlgebraError, QuantumAlgebra};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TorusError {
    #[error("class ({0}, {1}) is not primitive")]
    NonPrimitive(i64, i64),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("the first disk class is nonzero, so the quantum homology vanishes")]
    Vanishing,
    #[error("point coordinate {0} is outside [0, 1)")]
    OutOfRange(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Finitely supported function `Z^2 -> Z/2`; the support is stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NuFunction {
    pub name: String,
    support: BTreeSet<(i64, i64)>,
}

impl NuFunction {
    pub fn new(name: &str) -> Self {
        NuFunction { name: name.to_string(), support: BTreeSet::new() }
    }

    pub fn from_support<I: IntoIterator<Item = (i64, i64)>>(name: &str, support: I) -> Self {
        let mut nu = Self::new(name);
        for c in support {
            nu.toggle(c);
        }
        nu
    }

    /// Adds one to `nu(k, l)` mod 2.
    pub fn toggle(&mut self, class: (i64, i64)) {
        if !self.support.remove(&class) {
            self.support.insert(class);
        }
    }

    pub fn support(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.support.iter().copied()
    }

    pub fn value(&self, class: (i64, i64)) -> bool {
        self.support.contains(&class)
    }

    pub fn swapped(&self) -> Self {
        Self::from_support(&self.name, self.support.iter().map(|&(k, l)| (l, k)))
    }

    pub fn clifford() -> Self {
        Self::from_support("clifford", [(1, 0), (0, 1), (-1, -1)])
    }

    pub fn split() -> Self {
        Self::from_support("split", [(1, 0), (-1, 0), (0, 1), (0, -1)])
    }
}

fn parity(x: i64) -> bool {
    x.rem_euclid(2) == 1
}

/// `(sum nu(k,l) k, sum nu(k,l) l)` mod 2.
pub fn d1_class(nu: &NuFunction) -> (bool, bool) {
    nu.support().fold((false, false), |(x, y), (k, l)| (x ^ parity(k), y ^ parity(l)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusRing {
    pub alpha: bool,
    pub beta: bool,
    pub gamma_sum: bool,
    /// Chosen split of `gamma_sum`: `gamma' = gamma_sum`, `gamma'' = 0`.
    pub gamma_prime: bool,
    pub ring: QuantumAlgebra<Gf2>,
}

impl TorusRing {
    pub fn gamma_second(&self) -> bool {
        self.gamma_sum ^ self.gamma_prime
    }

    /// Coefficient of `w t^2` in `m * m`.
    pub fn s2(&self) -> bool {
        (self.alpha && self.beta) ^ (self.gamma_prime && self.gamma_second())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Synthesis {
    Ring(TorusRing),
    Vanishing { d1: (bool, bool) },
}

/// Coefficients from the disk counts.
pub fn coefficients(nu: &NuFunction) -> (bool, bool, bool) {
    nu.support().fold((false, false, false), |(a, b, g), (k, l)| {
        let tri = |x: i64| parity(x * (x + 1) / 2);
        (a ^ tri(l), b ^ tri(k), g ^ parity(k * l))
    })
}

/// Full product table on `{w, a, b, m}` (`w` the unit in degree 2, `a, b`
/// in degree 1, `m` in degree 0) from the four coefficients.
pub fn torus_ring(
    name: &str,
    alpha: bool,
    beta: bool,
    gamma1: bool,
    gamma2: bool,
) -> Result<QuantumAlgebra<Gf2>, AlgebraError> {
    let mut b = QuantumAlgebra::<Gf2>::builder(name, 2, 2)?;
    for (n, d) in [("w", 2), ("a", 1), ("b", 1), ("m", 0)] {
        b.basis(n, d)?;
    }
    b.unit("w")?;
    let ab = (alpha && beta) ^ (gamma1 && gamma2);
    let table: [(&str, &str, &[(bool, &str, i64)]); 16] = [
        ("w", "w", &[(true, "w", 0)]),
        ("w", "a", &[(true, "a", 0)]),
        ("w", "b", &[(true, "b", 0)]),
        ("w", "m", &[(true, "m", 0)]),
        ("a", "w", &[(true, "a", 0)]),
        ("b", "w", &[(true, "b", 0)]),
        ("m", "w", &[(true, "m", 0)]),
        ("a", "a", &[(alpha, "w", 1)]),
        ("b", "b", &[(beta, "w", 1)]),
        ("a", "b", &[(true, "m", 0), (gamma1, "w", 1)]),
        ("b", "a", &[(true, "m", 0), (gamma2, "w", 1)]),
        ("m", "a", &[(alpha, "b", 1), (gamma2, "a", 1)]),
        ("a", "m", &[(alpha, "b", 1), (gamma1, "a", 1)]),
        ("m", "b", &[(beta, "a", 1), (gamma1, "b", 1)]),
        ("b", "m", &[(beta, "a", 1), (gamma2, "b", 1)]),
        ("m", "m", &[(gamma1 ^ gamma2, "m", 1), (ab, "w", 2)]),
    ];
    for (x, y, terms) in table {
        let terms: Vec<(Gf2, &str, i64)> = terms.iter().filter(|t| t.0).map(|&(_, n, e)| (Gf2::ONE, n, e)).collect();
        if !terms.is_empty() {
            b.product_terms(x, y, &terms)?;
        }
    }
    b.aug("m", Gf2::ONE)?;
    b.build()
}

pub fn synthesize(nu: &NuFunction) -> Result<Synthesis, AlgebraError> {
    let d1 = d1_class(nu);
    if d1 != (false, false) {
        return Ok(Synthesis::Vanishing { d1 });
    }
    let (alpha, beta, gamma_sum) = coefficients(nu);
    let ring = torus_ring(&nu.name, alpha, beta, gamma_sum, false)?;
    Ok(Synthesis::Ring(TorusRing { alpha, beta, gamma_sum, gamma_prime: gamma_sum, ring }))
}

/// A point of the plane with exact coordinates; scene points are reduced to
/// `[0, 1)^2`, segment endpoints may be any lift.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn from_ratios(x: (i64, i64), y: (i64, i64)) -> Self {
        Point {
            x: Rational::new(BigInt::from(x.0), BigInt::from(x.1)),
            y: Rational::new(BigInt::from(y.0), BigInt::from(y.1)),
        }
    }

    /// Checks that both coordinates lie in `[0, 1)`.
    pub fn on_torus(self) -> Result<Self, TorusError> {
        for c in [&self.x, &self.y] {
            if c.is_negative() || *c >= Rational::one() {
                return Err(TorusError::OutOfRange(c.to_string()));
            }
        }
        Ok(self)
    }

    pub fn translated(&self, dx: i64, dy: i64) -> Self {
        Point { x: &self.x + Rational::from_integer(dx.into()), y: &self.y + Rational::from_integer(dy.into()) }
    }
}

impl core::fmt::Display for Point {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{},{}", self.x, self.y)
    }
}

/// `l x_1 - k x_2`, constant along geodesics of class `(k, l)`.
fn level(class: (i64, i64), p: &Point) -> Rational {
    Rational::from_integer(class.1.into()) * &p.x - Rational::from_integer(class.0.into()) * &p.y
}

fn floor_int(r: &Rational) -> BigInt {
    r.floor().to_integer()
}

/// Parity of crossings of the closed geodesic of class `class` through
/// `through` with the straight segment `from -> to`.
pub fn crossings(class: (i64, i64), through: &Point, from: &Point, to: &Point) -> Result<bool, TorusError> {
    let (k, l) = class;
    if k.gcd(&l) != 1 {
        return Err(TorusError::NonPrimitive(k, l));
    }
    if from == to {
        return Ok(false);
    }
    let c = level(class, through);
    let a = level(class, from) - &c;
    let b = level(class, to) - &c;
    for (end, v) in [(from, &a), (to, &b)] {
        if v.is_integer() {
            return Err(TorusError::Degenerate(format!("{end} lies on the ({k},{l}) geodesic through {through}")));
        }
    }
    // integers strictly between a and b
    let count = (floor_int(&a) - floor_int(&b)).abs();
    Ok(count.is_odd())
}

/// Parity of `delta_p` meeting the segment: one geodesic per class of the
/// support.
pub fn delta_crossings(nu: &NuFunction, p: &Point, from: &Point, to: &Point) -> Result<bool, TorusError> {
    let mut acc = false;
    for class in nu.support() {
        acc ^= crossings(class, p, from, to)?;
    }
    Ok(acc)
}

/// The three crossing parities `delta_{p1} . l(p2,p3)`, `delta_{p2} . l(p3,p1)`,
/// `delta_{p3} . l(p1,p2)`.
pub fn triangle_terms(nu: &NuFunction, p1: &Point, p2: &Point, p3: &Point) -> Result<[bool; 3], TorusError> {
    Ok([delta_crossings(nu, p1, p2, p3)?, delta_crossings(nu, p2, p3, p1)?, delta_crossings(nu, p3, p1, p2)?])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusScene {
    pub nu: NuFunction,
    points: BTreeMap<String, Point>,
}

impl TorusScene {
    pub fn new(nu: NuFunction) -> Self {
        TorusScene { nu, points: BTreeMap::new() }
    }

    pub fn add_point(&mut self, name: &str, p: Point) -> Result<(), TorusError> {
        self.points.insert(name.to_string(), p.on_torus()?);
        Ok(())
    }

    pub fn point(&self, name: &str) -> Result<&Point, TorusError> {
        self.points.get(name).ok_or_else(|| TorusError::UnknownPoint(name.to_string()))
    }

    pub fn points(&self) -> impl Iterator<Item = (&str, &Point)> {
        self.points.iter().map(|(n, p)| (n.as_str(), p))
    }

    pub fn crossings(&self, class: (i64, i64), through: &Point, from: &Point, to: &Point) -> Result<bool, TorusError> {
        crossings(class, through, from, to)
    }

    pub fn s1(&self, p1: &Point, p2: &Point, p3: &Point) -> Result<bool, TorusError> {
        Ok(triangle_terms(&self.nu, p1, p2, p3)?.iter().fold(false, |a, b| a ^ b))
    }

    /// `s2 + delta_{p3}.l(p1,p2) * delta_{p1}.l(p2,p3)`, with `s2` taken from
    /// the synthesized ring.
    pub fn n4(&self, p1: &Point, p2: &Point, p3: &Point) -> Result<bool, TorusError> {
        let ring = match synthesize(&self.nu)? {
            Synthesis::Ring(r) => r,
            Synthesis::Vanishing { .. } => return Err(TorusError::Vanishing),
        };
        let [x1, _, x3] = triangle_terms(&self.nu, p1, p2, p3)?;
        Ok(ring.s2() ^ (x3 && x1))
    }

    /// Comparison coefficient `delta_{y0}.l(y2,x2) + delta_{x2}.l(y0,x0)`.
    pub fn epsilon(&self, y0: &Point, x0: &Point, y2: &Point, x2: &Point) -> Result<bool, TorusError> {
        Ok(delta_crossings(&self.nu, y0, y2, x2)? ^ delta_crossings(&self.nu, x2, y0, x0)?)
    }
}

/// `s2` after changing the pair of points, given the comparison bit `eta`.
pub fn s2_transport(s2: bool, s1: bool, eta: bool) -> bool {
    s2 ^ (eta && !s1)
}

/// Random point of `[0,1)^2` with denominator `den`.
pub fn random_point<R: rand_core::RngCore>(rng: &mut R, den: i64) -> Point {
    let x = crate::sample::range_i64(rng, 0, den - 1);
    let y = crate::sample::range_i64(rng, 0, den - 1);
    Point::from_ratios((x, den), (y, den))
}

/// Whether `q` avoids every support geodesic through `p` (and vice versa).
pub fn generic_pair(nu: &NuFunction, p: &Point, q: &Point) -> bool {
    nu.support().all(|c| !(level(c, q) - level(c, p)).is_integer())
}

pub fn generic_triple(nu: &NuFunction, ps: [&Point; 3]) -> bool {
    generic_pair(nu, ps[0], ps[1]) && generic_pair(nu, ps[1], ps[2]) && generic_pair(nu, ps[0], ps[2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pt(x: (i64, i64), y: (i64, i64)) -> Point {
        Point::from_ratios(x, y)
    }

    /// Walks the segment, solving for each integer translate of the line.
    fn oracle_crossings(class: (i64, i64), through: &Point, a: &Point, b: &Point) -> bool {
        let c = level(class, through);
        let fa = level(class, a) - &c;
        let fb = level(class, b) - &c;
        if fa == fb {
            return false;
        }
        let mut hits = 0;
        for n in -20i64..=20 {
            let s = (Rational::from_integer(n.into()) - &fa) / (&fb - &fa);
            if s > Rational::zero() && s < Rational::one() {
                hits += 1;
            }
        }
        hits % 2 == 1
    }

    #[test]
    fn d1_examples() {
        assert_eq!(d1_class(&NuFunction::clifford()), (false, false));
        assert_eq!(d1_class(&NuFunction::split()), (false, false));
        let single = NuFunction::from_support("one", [(1, 0)]);
        assert_eq!(d1_class(&single), (true, false));
        assert_eq!(synthesize(&single).unwrap(), Synthesis::Vanishing { d1: (true, false) });
    }

    #[test]
    fn clifford_and_split_coefficients() {
        assert_eq!(coefficients(&NuFunction::clifford()), (true, true, true));
        assert_eq!(coefficients(&NuFunction::split()), (true, true, false));
        let Synthesis::Ring(r) = synthesize(&NuFunction::split()).unwrap() else { panic!() };
        let a = &r.ring;
        let m = a.basis_element("m").unwrap();
        assert_eq!(a.multiply(&m, &m), a.element(&[(Gf2::ONE, "w", 2)]).unwrap());
        assert!(a.verify_algebra().passes());
    }

    #[test]
    fn six_class_example() {
        let nu = NuFunction::from_support("six", [(1, 0), (0, 1), (-1, -1), (1, 1), (-1, 0), (0, -1)]);
        assert_eq!(d1_class(&nu), (false, false));
        // alpha: l(l+1)/2 over l = 0,1,-1,1,0,-1 -> 0+1+0+1+0+0
        // beta: same over k; gamma: kl -> 0+0+1+1+0+0
        assert_eq!(coefficients(&nu), (false, false, false));
        let Synthesis::Ring(r) = synthesize(&nu).unwrap() else { panic!() };
        assert!(r.ring.verify_algebra().passes());
    }

    #[test]
    fn crossing_examples() {
        let origin = pt((0, 1), (0, 1));
        let a = pt((1, 4), (1, 2));
        let b = pt((3, 4), (1, 2));
        assert!(!crossings((0, 1), &origin, &a, &b).unwrap());
        assert!(!crossings((1, 0), &origin, &a, &b).unwrap());
        let c = pt((0, 1), (1, 2));
        let d = pt((1, 2), (1, 2));
        // f = x1 - x2 runs over (-1/2, 0]: the endpoint d sits on the line
        assert!(matches!(crossings((1, 1), &origin, &c, &d), Err(TorusError::Degenerate(_))));
        let e = pt((3, 4), (1, 2));
        assert_eq!(crossings((1, 1), &origin, &c, &e).unwrap(), oracle_crossings((1, 1), &origin, &c, &e));
        assert_eq!(crossings((2, 0), &origin, &a, &b), Err(TorusError::NonPrimitive(2, 0)));
        assert_eq!(crossings((0, 0), &origin, &a, &b), Err(TorusError::NonPrimitive(0, 0)));
    }

    #[test]
    fn crossings_match_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let classes = [(1, 0), (0, 1), (1, 1), (-1, -1), (2, 1), (1, -3), (3, 2)];
        let mut checked = 0;
        while checked < 400 {
            let p = random_point(&mut rng, 17);
            let a = random_point(&mut rng, 17).translated(crate::sample::range_i64(&mut rng, -1, 1), 0);
            let b = random_point(&mut rng, 17);
            let class = classes[crate::sample::below(&mut rng, classes.len() as u64) as usize];
            if let Ok(v) = crossings(class, &p, &a, &b) {
                assert_eq!(v, oracle_crossings(class, &p, &a, &b));
                checked += 1;
            }
        }
    }

    #[test]
    fn s2_transport_cases() {
        for eta in [false, true] {
            assert!(s2_transport(true, true, eta));
            assert!(!s2_transport(false, true, eta));
        }
        assert!(!s2_transport(true, false, true));
        assert!(s2_transport(true, false, false));
    }

    #[test]
    fn points_out_of_range() {
        assert!(pt((1, 1), (0, 1)).on_torus().is_err());
        assert!(pt((-1, 3), (0, 1)).on_torus().is_err());
        assert!(pt((2, 3), (0, 1)).on_torus().is_ok());
    }

    #[test]
    fn epsilon_identity_is_zero() {
        let scene = TorusScene::new(NuFunction::clifford());
        let y0 = pt((1, 5), (2, 7));
        let y2 = pt((3, 5), (5, 7));
        assert!(!scene.epsilon(&y0, &y0, &y2, &y2).unwrap());
    }
}
