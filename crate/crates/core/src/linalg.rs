//! Exact Gaussian elimination over a field.

use alloc::vec::Vec;

use crate::qfield::{AlgebraicQuad, Rational};
use crate::{Error, Result};
use num_traits::Zero;

pub(crate) trait Scalar: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn inv(&self) -> Result<Self>;
}

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn inv(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
}

impl Scalar for AlgebraicQuad {
    fn zero() -> Self {
        AlgebraicQuad::zero()
    }
    fn one() -> Self {
        AlgebraicQuad::one()
    }
    fn is_zero(&self) -> bool {
        AlgebraicQuad::is_zero(self)
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn inv(&self) -> Result<Self> {
        AlgebraicQuad::inv(self)
    }
}

/// Solves `matrix · x = rhs` for a possibly overdetermined system.
///
/// Returns the unique solution when the columns are independent and every
/// row is consistent; `SingularSystem` when the columns are dependent and
/// `Ok(None)` when the system is inconsistent.
pub(crate) fn solve<T: Scalar>(matrix: &[Vec<T>], rhs: &[T]) -> Result<Option<Vec<T>>> {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<T>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..cols {
        let Some(p) = (pivot_row..rows).find(|&r| !aug[r][col].is_zero()) else {
            return Err(Error::SingularSystem);
        };
        aug.swap(pivot_row, p);
        let inv = aug[pivot_row][col].inv()?;
        for v in aug[pivot_row].iter_mut() {
            *v = v.mul(&inv);
        }
        let pivot = aug[pivot_row].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r == pivot_row || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&pivot).skip(col) {
                *v = v.sub(&f.mul(pv));
            }
        }
        pivot_row += 1;
    }
    if aug[cols..].iter().any(|row| !row[cols].is_zero()) {
        return Ok(None);
    }
    Ok(Some(
        aug[..cols].iter().map(|row| row[cols].clone()).collect(),
    ))
}

/// Inverse of a square matrix.
pub(crate) fn invert<T: Scalar>(matrix: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
    let n = matrix.len();
    let mut columns = Vec::with_capacity(n);
    for k in 0..n {
        let e: Vec<T> = (0..n)
            .map(|i| if i == k { T::one() } else { T::zero() })
            .collect();
        columns.push(solve(matrix, &e)?.ok_or(Error::SingularSystem)?);
    }
    Ok((0..n)
        .map(|i| (0..n).map(|k| columns[k][i].clone()).collect())
        .collect())
}
