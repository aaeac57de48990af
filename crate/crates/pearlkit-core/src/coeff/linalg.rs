//! Gaussian elimination over an arbitrary [`Field`]. Pivots are always the
//! first nonzero entry in the current column, so results are deterministic.

use alloc::vec::Vec;

use super::field::Field;
use super::CoeffError;

fn check_rect<F>(m: &[Vec<F>]) -> Result<usize, CoeffError> {
    let cols = m.first().map_or(0, Vec::len);
    if m.iter().any(|r| r.len() != cols) {
        return Err(CoeffError::DimensionMismatch("matrix rows have different lengths"));
    }
    Ok(cols)
}

/// Reduces `[m | b]` in place; returns pivot columns in row order.
fn eliminate<F: Field>(a: &mut [Vec<F>], b: &mut [F], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == a.len() {
            break;
        }
        let Some(p) = (row..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        b.swap(row, p);
        let inv = a[row][col].inverse().expect("pivot is nonzero");
        for c in col..cols {
            a[row][c] = a[row][c].times(&inv);
        }
        b[row] = b[row].times(&inv);
        for r in 0..a.len() {
            if r == row || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for c in col..cols {
                let delta = factor.times(&a[row][c]);
                a[r][c] = a[r][c].minus(&delta);
            }
            let delta = factor.times(&b[row]);
            b[r] = b[r].minus(&delta);
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// One solution of `m x = b` with free variables set to zero, or `None` when
/// the system is inconsistent.
pub fn rat_solve<F: Field>(m: &[Vec<F>], b: &[F]) -> Result<Option<Vec<F>>, CoeffError> {
    let cols = check_rect(m)?;
    if b.len() != m.len() {
        return Err(CoeffError::DimensionMismatch("right-hand side length differs from row count"));
    }
    let mut a = m.to_vec();
    let mut rhs = b.to_vec();
    let pivots = eliminate(&mut a, &mut rhs, cols);
    if rhs[pivots.len()..].iter().any(|v| !v.is_zero()) {
        return Ok(None);
    }
    let mut x = alloc::vec![F::zero(); cols];
    for (row, &col) in pivots.iter().enumerate() {
        x[col] = rhs[row].clone();
    }
    Ok(Some(x))
}

pub fn rank<F: Field>(m: &[Vec<F>]) -> Result<usize, CoeffError> {
    let cols = check_rect(m)?;
    let mut a = m.to_vec();
    let mut rhs = alloc::vec![F::zero(); m.len()];
    Ok(eliminate(&mut a, &mut rhs, cols).len())
}

pub fn mat_vec<F: Field>(m: &[Vec<F>], x: &[F]) -> Result<Vec<F>, CoeffError> {
    let cols = check_rect(m)?;
    if x.len() != cols {
        return Err(CoeffError::DimensionMismatch("vector length differs from column count"));
    }
    Ok(m.iter().map(|row| row.iter().zip(x).fold(F::zero(), |acc, (a, b)| acc.plus(&a.times(b)))).collect())
}

/// Inverse of a square matrix, `None` when singular.
pub fn invert_matrix<F: Field>(m: &[Vec<F>]) -> Result<Option<Vec<Vec<F>>>, CoeffError> {
    let n = check_rect(m)?;
    if n != m.len() {
        return Err(CoeffError::DimensionMismatch("matrix is not square"));
    }
    let mut cols = Vec::with_capacity(n);
    for i in 0..n {
        let e: Vec<F> = (0..n).map(|k| if k == i { F::one() } else { F::zero() }).collect();
        match rat_solve(m, &e)? {
            Some(x) => cols.push(x),
            None => return Ok(None),
        }
    }
    Ok(Some((0..n).map(|r| (0..n).map(|c| cols[c][r].clone()).collect()).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{Gf2, LaurentPoly, Rational, RationalFunction};
    use alloc::vec;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    type R2 = RationalFunction<Gf2>;

    fn t(k: i64) -> R2 {
        R2::t_power(k)
    }

    #[test]
    fn identity_system_returns_rhs() {
        let id = vec![vec![R2::one(), R2::zero()], vec![R2::zero(), R2::one()]];
        let b = vec![t(3), R2::one().plus(&t(1))];
        assert_eq!(rat_solve(&id, &b).unwrap(), Some(b));
    }

    #[test]
    fn diagonal_solve_gives_inverse_t() {
        let m = vec![vec![t(1), R2::zero()], vec![R2::zero(), R2::one()]];
        let x = rat_solve(&m, &[R2::one(), R2::one()]).unwrap().unwrap();
        assert_eq!(x, vec![t(-1), R2::one()]);
        assert_eq!(x[0].as_laurent().unwrap(), &LaurentPoly::t_power(-1));
    }

    #[test]
    fn inconsistent_system_has_no_solution() {
        assert_eq!(rat_solve(&[vec![R2::zero()]], &[R2::one()]).unwrap(), None);
    }

    #[test]
    fn dimension_errors() {
        let ragged = vec![vec![R2::one()], vec![R2::one(), R2::zero()]];
        assert!(rat_solve(&ragged, &[R2::one(), R2::one()]).is_err());
        assert!(rat_solve(&[vec![R2::one()]], &[]).is_err());
        assert!(invert_matrix(&[vec![R2::one(), R2::one()]]).is_err());
    }

    #[test]
    fn rational_inverse() {
        let q = |n: i64| Rational::from_integer(BigInt::from(n));
        let m = vec![vec![q(2), q(1)], vec![q(1), q(1)]];
        let inv = invert_matrix(&m).unwrap().unwrap();
        assert_eq!(inv, vec![vec![q(1), q(-1)], vec![q(-1), q(2)]]);
        assert_eq!(rank(&[vec![q(1), q(2)], vec![q(2), q(4)]]).unwrap(), 1);
    }

    fn arb_rf() -> impl Strategy<Value = R2> {
        proptest::collection::vec(-2i64..3, 0..3)
            .prop_map(|v| R2::from_laurent(LaurentPoly::from_terms(v.into_iter().map(|e| (e, Gf2::ONE)))))
    }

    proptest! {
        #[test]
        fn solution_substitutes_back(m in proptest::collection::vec(proptest::collection::vec(arb_rf(), 3), 3), x in proptest::collection::vec(arb_rf(), 3), noise in arb_rf()) {
            // consistent by construction
            let b = mat_vec(&m, &x).unwrap();
            let sol = rat_solve(&m, &b).unwrap().expect("consistent system");
            prop_assert_eq!(mat_vec(&m, &sol).unwrap(), b.clone());
            // perturbed right-hand side: any returned solution must still substitute back
            let mut b2 = b;
            b2[0] = b2[0].plus(&noise);
            if let Some(s) = rat_solve(&m, &b2).unwrap() {
                prop_assert_eq!(mat_vec(&m, &s).unwrap(), b2);
            }
        }
    }
}
