//! Dense exact matrices.
//!
//! [`Matrix`] is generic over a commutative [`Ring`] so the same product and
//! transpose code serves rational, integer and polynomial entries.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Commutative ring operations needed by matrix code.
///
/// `zero_like`/`one_like` take a witness so that polynomial entries can
/// carry their variable context into freshly created zeros.
pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
}

impl Ring for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

impl Ring for BigInt {
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn is_zero_elem(&self) -> bool {
        Zero::is_zero(self)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

pub type RatMatrix = Matrix<Rational>;
pub type IntMatrix = Matrix<BigInt>;

impl<T> Matrix<T> {
    pub fn new(rows: usize, cols: usize, entries: Vec<T>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                op: "construct",
                left: (rows, cols),
                right: (entries.len(), 1),
            });
        }
        Ok(Matrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch {
                op: "from_rows",
                left: (r, c),
                right: (1, bad.len()),
            });
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<T> {
        self.entries
    }

    /// 0-based access.
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<T>>
    where
        T: Clone,
    {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn try_map<U, E>(&self, f: impl FnMut(&T) -> std::result::Result<U, E>) -> std::result::Result<Matrix<U>, E> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect::<std::result::Result<_, _>>()?,
        })
    }

    pub fn transpose(&self) -> Self
    where
        T: Clone,
    {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn ensure_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }
}

impl<T: Ring> Matrix<T> {
    /// Exact product `self * rhs`.
    pub fn mat_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                op: "mat_mul",
                left: (self.rows, self.cols),
                right: (rhs.rows, rhs.cols),
            });
        }
        if self.cols == 0 {
            return Err(Error::DimensionMismatch {
                op: "mat_mul",
                left: (self.rows, 0),
                right: (0, rhs.cols),
            });
        }
        let n = self.cols;
        Ok(Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = self.get(i, 0).clone() * rhs.get(0, j).clone();
            for k in 1..n {
                acc = acc + self.get(i, k).clone() * rhs.get(k, j).clone();
            }
            acc
        }))
    }

    /// `M * M^t`.
    pub fn gram(&self) -> Self {
        self.mat_mul(&self.transpose())
            .expect("M and M^t are always compatible")
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, "add", |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, "sub", |a, b| a.clone() - b.clone())
    }

    fn zip_with(&self, rhs: &Self, op: &'static str, f: impl Fn(&T, &T) -> T) -> Result<Self> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::DimensionMismatch {
                op,
                left: (self.rows, self.cols),
                right: (rhs.rows, rhs.cols),
            });
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x.clone())
    }

    /// `true` if this square matrix equals `c * I`.
    pub fn is_scalar_matrix(&self, c: &T) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e == c
                    } else {
                        e.is_zero_elem()
                    }
                })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Ring::is_zero_elem)
    }
}

impl RatMatrix {
    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| {
            if i == j {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| Rational::zero())
    }

    pub fn diagonal(values: &[Rational]) -> Self {
        let n = values.len();
        Matrix::from_fn(n, n, |i, j| {
            if i == j {
                values[i].clone()
            } else {
                Rational::zero()
            }
        })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::from(v)).collect())
                .collect(),
        )
    }

    /// Rows scaled to integers: returns the integer rows and the positive
    /// per-row multipliers used.
    fn integer_rows(&self) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
        let mut rows = Vec::with_capacity(self.rows);
        let mut mults = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let l = Rational::lcm_denominators(self.row(i));
            rows.push(
                self.row(i)
                    .iter()
                    .map(|x| x.numer() * (&l / x.denom()))
                    .collect(),
            );
            mults.push(l);
        }
        (rows, mults)
    }

    /// Determinant via Bareiss fraction-free elimination.
    pub fn determinant(&self) -> Result<Rational> {
        let n = self.ensure_square()?;
        if n == 0 {
            return Ok(Rational::one());
        }
        let (mut a, mults) = self.integer_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        let denom: BigInt = mults.iter().product();
        Ok(Rational::new(sign * &a[n - 1][n - 1], denom))
    }

    /// Exact inverse by fraction-free elimination on `[A' | diag(d)]`, where
    /// `A' = diag(d) A` has integer entries, followed by rational
    /// back-substitution.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.ensure_square()?;
        if n == 0 {
            return Ok(self.clone());
        }
        let (rows, mults) = self.integer_rows();
        let width = 2 * n;
        let mut a: Vec<Vec<BigInt>> = rows
            .into_iter()
            .enumerate()
            .map(|(i, mut r)| {
                r.extend((0..n).map(|j| {
                    if i == j {
                        mults[i].clone()
                    } else {
                        BigInt::zero()
                    }
                }));
                r
            })
            .collect();
        let mut prev = BigInt::one();
        for k in 0..n {
            let p = (k..n).find(|&r| !a[r][k].is_zero()).ok_or(Error::Singular)?;
            a.swap(p, k);
            for i in k + 1..n {
                for j in k + 1..width {
                    let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        // a is now upper triangular on the left block
        let mut x: Vec<Vec<Rational>> = vec![Vec::new(); n];
        for i in (0..n).rev() {
            let pivot = Rational::from(&a[i][i]);
            let row: Vec<Rational> = (0..n)
                .map(|c| {
                    let mut acc = Rational::from(&a[i][n + c]);
                    for (j, xj) in x.iter().enumerate().skip(i + 1) {
                        if !a[i][j].is_zero() {
                            acc -= Rational::from(&a[i][j]) * &xj[c];
                        }
                    }
                    acc / &pivot
                })
                .collect();
            x[i] = row;
        }
        Matrix::from_rows(x)
    }

    /// Clears denominators and divides out the content: returns `lambda * M`
    /// with `lambda > 0` chosen so the entries are coprime integers.
    pub fn rescale_primitive(&self) -> Result<IntMatrix> {
        if self.is_zero() {
            return Err(Error::ZeroMatrix);
        }
        let l = Rational::lcm_denominators(&self.entries);
        let ints: Vec<BigInt> = self
            .entries
            .iter()
            .map(|x| x.numer() * (&l / x.denom()))
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
        Matrix::new(self.rows, self.cols, ints.into_iter().map(|v| v / &g).collect())
    }
}

impl IntMatrix {
    pub fn to_rational(&self) -> RatMatrix {
        self.map(|x| Rational::from(x))
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
    }

    pub fn content(&self) -> BigInt {
        self.entries.iter().fold(BigInt::zero(), |g, v| g.gcd(v))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// The lexicographically smaller (row-major) of `M` and `-M`, i.e. the
    /// one whose first nonzero entry is negative.
    pub fn sign_canonical(&self) -> Self {
        let first = self.entries.iter().find(|v| !Zero::is_zero(*v));
        match first {
            Some(v) if v.is_positive() => self.neg(),
            _ => self.clone(),
        }
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.rows).map(|i| &self.entries[i * self.cols..(i + 1) * self.cols]))
            .finish()
    }
}
