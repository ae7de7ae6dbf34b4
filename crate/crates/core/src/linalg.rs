//! Fraction-free (Bareiss) elimination for small dense systems.
//!
//! Works over any [`Field`]; the zero test is supplied by the caller so that
//! symbolic entries can be decided exactly or by sampling.

use thiserror::Error;

use crate::scalar::Scalar;
use crate::symexpr::Expr;

/// Field operations needed by the solver.
pub trait Field: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// `None` when the divisor is zero.
    fn div(&self, other: &Self) -> Option<Self>;
    /// Preference among nonzero pivot candidates; larger wins.
    fn pivot_weight(&self) -> f64;
}

impl<T: Scalar> Field for T {
    fn zero() -> Self {
        T::zero()
    }

    fn one() -> Self {
        T::one()
    }

    fn add(&self, other: &Self) -> Self {
        self.clone() + other.clone()
    }

    fn sub(&self, other: &Self) -> Self {
        self.clone() - other.clone()
    }

    fn mul(&self, other: &Self) -> Self {
        self.clone() * other.clone()
    }

    fn div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            None
        } else {
            Some(self.clone() / other.clone())
        }
    }

    fn pivot_weight(&self) -> f64 {
        self.magnitude()
    }
}

impl Field for Expr {
    fn zero() -> Self {
        Expr::zero()
    }

    fn one() -> Self {
        Expr::one()
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn div(&self, other: &Self) -> Option<Self> {
        self.checked_div(other).ok()
    }

    /// Constants first, then polynomials, then everything else, so that the
    /// elimination divides by the simplest available entries.
    fn pivot_weight(&self) -> f64 {
        match self.as_ratfunc() {
            Some(r) if r.as_constant().is_some() => 3.0,
            Some(r) if r.is_polynomial() => 2.0 - 1e-3 * r.numer().terms().len() as f64,
            Some(_) => 1.0,
            None => 0.5,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("no nonzero pivot in column {column}")]
    NoPivot { column: usize },
    #[error("system is inconsistent in row {row}")]
    Inconsistent { row: usize },
    #[error("matrix shape mismatch")]
    Shape,
}

/// Solves `a x = b_k` for every right-hand side `b_k` (given as columns of
/// `rhs`, one `Vec` per right-hand side).
///
/// `a` is `m x n` with `m >= n`; the system must have full column rank and
/// the surplus equations must be consistent.
pub fn solve<T: Field>(
    a: &[Vec<T>],
    rhs: &[Vec<T>],
    is_zero: impl Fn(&T) -> bool,
) -> Result<Vec<Vec<T>>, SolveError> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    if m < n || a.iter().any(|r| r.len() != n) || rhs.iter().any(|b| b.len() != m) {
        return Err(SolveError::Shape);
    }
    let r = rhs.len();
    let mut mat: Vec<Vec<T>> = (0..m)
        .map(|i| {
            let mut row = a[i].clone();
            row.extend(rhs.iter().map(|b| b[i].clone()));
            row
        })
        .collect();
    eliminate(&mut mat, n, &is_zero)?;
    for (row, entries) in mat.iter().enumerate().skip(n) {
        if entries[n..].iter().any(|e| !is_zero(e)) {
            return Err(SolveError::Inconsistent { row });
        }
    }
    let mut out = Vec::with_capacity(r);
    for k in 0..r {
        let mut x: Vec<T> = vec![T::zero(); n];
        for i in (0..n).rev() {
            let mut acc = mat[i][n + k].clone();
            for (j, xj) in x.iter().enumerate().skip(i + 1) {
                acc = acc.sub(&mat[i][j].mul(xj));
            }
            x[i] = acc
                .div(&mat[i][i])
                .ok_or(SolveError::NoPivot { column: i })?;
        }
        out.push(x);
    }
    Ok(out)
}

/// Rank of `a` under the given zero test.
pub fn rank<T: Field>(a: &[Vec<T>], is_zero: impl Fn(&T) -> bool) -> usize {
    let n = a.first().map_or(0, Vec::len);
    let mut mat = a.to_vec();
    let mut rank = 0;
    let mut prev: Option<T> = None;
    for col in 0..n {
        if rank == mat.len() {
            break;
        }
        let Some(p) = best_pivot(&mat, rank, col, &is_zero) else {
            continue;
        };
        mat.swap(rank, p);
        bareiss_step(&mut mat, rank, col, prev.as_ref());
        prev = Some(mat[rank][col].clone());
        rank += 1;
    }
    rank
}

/// Basis of the right kernel of `a` (`n` columns), by Gauss–Jordan reduction.
/// Each basis vector has a unit entry at its free column.
pub fn nullspace<T: Field>(a: &[Vec<T>], n: usize, is_zero: impl Fn(&T) -> bool) -> Vec<Vec<T>> {
    let mut mat = a.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..n {
        if row == mat.len() {
            break;
        }
        let Some(p) = best_pivot(&mat, row, col, &is_zero) else {
            continue;
        };
        mat.swap(row, p);
        let inv = T::one().div(&mat[row][col]).expect("nonzero pivot");
        for v in mat[row].iter_mut() {
            *v = v.mul(&inv);
        }
        let pivot_row = mat[row].clone();
        for (i, r) in mat.iter_mut().enumerate() {
            if i == row || is_zero(&r[col]) {
                continue;
            }
            let factor = r[col].clone();
            for (v, pv) in r.iter_mut().zip(&pivot_row) {
                *v = v.sub(&factor.mul(pv));
            }
        }
        pivots.push(col);
        row += 1;
    }
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![T::zero(); n];
            v[free] = T::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = T::zero().sub(&mat[r][free]);
            }
            v
        })
        .collect()
}

/// Upper-triangularizes the first `n` columns in place.
fn eliminate<T: Field>(
    mat: &mut [Vec<T>],
    n: usize,
    is_zero: &impl Fn(&T) -> bool,
) -> Result<(), SolveError> {
    let mut prev: Option<T> = None;
    for k in 0..n {
        let p = best_pivot(mat, k, k, is_zero).ok_or(SolveError::NoPivot { column: k })?;
        mat.swap(k, p);
        bareiss_step(mat, k, k, prev.as_ref());
        prev = Some(mat[k][k].clone());
    }
    Ok(())
}

fn best_pivot<T: Field>(
    mat: &[Vec<T>],
    from_row: usize,
    col: usize,
    is_zero: &impl Fn(&T) -> bool,
) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, row) in mat.iter().enumerate().skip(from_row) {
        if is_zero(&row[col]) {
            continue;
        }
        let w = row[col].pivot_weight();
        if best.map_or(true, |(_, bw)| w > bw) {
            best = Some((i, w));
        }
    }
    best.map(|(i, _)| i)
}

/// One Bareiss update: rows below `k` become
/// `(a_kk a_ij - a_ik a_kj) / prev`, an exact division.
fn bareiss_step<T: Field>(mat: &mut [Vec<T>], k: usize, col: usize, prev: Option<&T>) {
    let width = mat[k].len();
    let (top, rest) = mat.split_at_mut(k + 1);
    let pivot_row = &top[k];
    let pivot = &pivot_row[col];
    for row in rest.iter_mut() {
        let factor = row[col].clone();
        for j in 0..width {
            if j == col {
                continue;
            }
            let v = pivot.mul(&row[j]).sub(&factor.mul(&pivot_row[j]));
            row[j] = match prev {
                Some(d) => v.div(d).expect("previous pivot is nonzero"),
                None => v,
            };
        }
        row[col] = T::zero();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use num_rational::BigRational;
    use num_traits::Zero;

    fn q(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| int(v)).collect())
            .collect()
    }

    #[test]
    fn square_rational_system() {
        let a = q(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let b = vec![vec![int(3), int(5), int(5)]];
        let x = solve(&a, &b, |v: &BigRational| v.is_zero()).unwrap();
        assert_eq!(x[0], vec![int(1), int(1), int(1)]);
    }

    #[test]
    fn overdetermined_consistent_and_inconsistent() {
        let a = q(&[&[0, 1], &[1, 0], &[1, 1]]);
        let ok = vec![vec![int(2), int(3), int(5)]];
        let x = solve(&a, &ok, |v: &BigRational| v.is_zero()).unwrap();
        assert_eq!(x[0], vec![int(3), int(2)]);
        let bad = vec![vec![int(2), int(3), int(6)]];
        assert_eq!(
            solve(&a, &bad, |v: &BigRational| v.is_zero()),
            Err(SolveError::Inconsistent { row: 2 })
        );
    }

    #[test]
    fn singular_column_reports_no_pivot() {
        let a = q(&[&[1, 2], &[2, 4], &[0, 0]]);
        let b = vec![vec![int(0), int(0), int(0)]];
        assert_eq!(
            solve(&a, &b, |v: &BigRational| v.is_zero()),
            Err(SolveError::NoPivot { column: 1 })
        );
        assert_eq!(rank(&a, |v: &BigRational| v.is_zero()), 1);
    }

    #[test]
    fn nullspace_of_rank_deficient_matrix() {
        let a = q(&[&[1, 2, 3], &[2, 4, 6]]);
        let ker = nullspace(&a, 3, |v: &BigRational| v.is_zero());
        assert_eq!(ker.len(), 2);
        for v in &ker {
            for row in &a {
                let dot = row.iter().zip(v).fold(int(0), |acc, (x, y)| acc + x * y);
                assert!(dot.is_zero());
            }
        }
        assert!(nullspace(&q(&[&[1, 0], &[0, 1]]), 2, |v: &BigRational| v.is_zero()).is_empty());
    }

    #[test]
    fn float_and_symbolic_entries() {
        let a = vec![vec![1e-3, 1.0], vec![1.0, 1.0]];
        let x = solve(&a, &[vec![1.0, 2.0]], |v: &f64| *v == 0.0).unwrap();
        assert!((x[0][0] - 1.001_001_001).abs() < 1e-9);

        let p = Expr::coord(1);
        let one = Expr::one();
        // [[1, p], [1, 1]] x = [1, 0]  ->  x = (1/(1-p), -1/(1-p))
        let a = vec![vec![one.clone(), p.clone()], vec![one.clone(), one.clone()]];
        let b = vec![vec![one.clone(), Expr::zero()]];
        let x = solve(&a, &b, Expr::is_exactly_zero).unwrap();
        let inv = one.checked_div(&(&one - &p)).unwrap();
        assert_eq!(x[0][0], inv);
        assert_eq!(x[0][1], -&inv);
        let half = rat(1, 2);
        assert_eq!(x[0][0].eval(&[int(0), half]).unwrap(), int(2));
    }
}
