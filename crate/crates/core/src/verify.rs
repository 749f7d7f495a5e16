//! Euler-magic and properness checks.
//!
//! A square matrix `M` is Euler magic when `M M^t = gamma I` with
//! `gamma != 0` and both the diagonal and the anti-diagonal have squared
//! entries summing to `gamma`. It is proper when its `n^2` entry squares
//! are pairwise distinct.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, RatMatrix};
use crate::rational::Rational;

/// A 1-based `(row, column)` position.
pub type Position = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub n: usize,
    /// The `(1, 1)` entry of `M M^t`.
    pub gamma: Rational,
    pub cond_orthogonal: bool,
    pub cond_diagonal: bool,
    pub cond_antidiagonal: bool,
    pub is_euler_magic: bool,
    pub is_proper: bool,
    pub distinct_square_count: usize,
    /// Every unordered pair of positions with equal squares, in row-major
    /// order of the first position, then of the second.
    pub duplicate_pairs: Vec<(Position, Position)>,
    pub squares_matrix: RatMatrix,
}

/// Serialized form of [`VerifyReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyJson {
    pub n: usize,
    pub gamma: String,
    pub orthogonal: bool,
    pub diagonal: bool,
    pub antidiagonal: bool,
    pub euler_magic: bool,
    pub proper: bool,
    pub distinct_squares: usize,
    pub duplicates: Vec<[[usize; 2]; 2]>,
}

impl VerifyReport {
    pub fn to_json(&self) -> VerifyJson {
        VerifyJson {
            n: self.n,
            gamma: self.gamma.to_string(),
            orthogonal: self.cond_orthogonal,
            diagonal: self.cond_diagonal,
            antidiagonal: self.cond_antidiagonal,
            euler_magic: self.is_euler_magic,
            proper: self.is_proper,
            distinct_squares: self.distinct_square_count,
            duplicates: self
                .duplicate_pairs
                .iter()
                .map(|&((i, j), (k, l))| [[i, j], [k, l]])
                .collect(),
        }
    }

    /// All condition flags, for comparing reports up to scaling.
    pub fn flags(&self) -> [bool; 5] {
        [
            self.cond_orthogonal,
            self.cond_diagonal,
            self.cond_antidiagonal,
            self.is_euler_magic,
            self.is_proper,
        ]
    }
}

pub fn verify(m: &RatMatrix) -> Result<VerifyReport> {
    let n = m.ensure_square()?;
    if n == 0 {
        return Err(Error::NotSquare { rows: 0, cols: 0 });
    }
    let gram = m.gram();
    let gamma = gram.get(0, 0).clone();
    let cond_orthogonal = gram.is_scalar_matrix(&gamma);
    let diag: Rational = (0..n).map(|i| m.get(i, i) * m.get(i, i)).sum();
    let anti: Rational = (0..n)
        .map(|i| m.get(i, n - 1 - i) * m.get(i, n - 1 - i))
        .sum();
    let cond_diagonal = diag == gamma;
    let cond_antidiagonal = anti == gamma;
    let is_euler_magic = cond_orthogonal && cond_diagonal && cond_antidiagonal && !gamma.is_zero();

    let squares_matrix = m.map(|x| x * x);
    let (distinct_square_count, duplicate_pairs) = square_census(&squares_matrix);

    Ok(VerifyReport {
        n,
        gamma,
        cond_orthogonal,
        cond_diagonal,
        cond_antidiagonal,
        is_euler_magic,
        is_proper: distinct_square_count == n * n,
        distinct_square_count,
        duplicate_pairs,
        squares_matrix,
    })
}

fn square_census(sq: &RatMatrix) -> (usize, Vec<(Position, Position)>) {
    let n = sq.cols();
    let mut groups: HashMap<&Rational, Vec<usize>> = HashMap::new();
    for (idx, v) in sq.entries().iter().enumerate() {
        groups.entry(v).or_default().push(idx);
    }
    let pos = |idx: usize| (idx / n + 1, idx % n + 1);
    let mut pairs = Vec::new();
    for members in groups.values() {
        for (a, &x) in members.iter().enumerate() {
            for &y in &members[a + 1..] {
                pairs.push((x, y));
            }
        }
    }
    pairs.sort_unstable();
    (
        groups.len(),
        pairs.into_iter().map(|(x, y)| (pos(x), pos(y))).collect(),
    )
}

/// The squares of an Euler magic matrix together with every line sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquaresReport {
    pub squares: IntMatrix,
    pub gamma: BigInt,
    pub row_sums: Vec<BigInt>,
    pub col_sums: Vec<BigInt>,
    pub diagonal_sum: BigInt,
    pub antidiagonal_sum: BigInt,
}

impl SquaresReport {
    /// `2n + 2` sums: rows, columns, diagonal, anti-diagonal.
    pub fn all_sums(&self) -> Vec<BigInt> {
        let mut out = self.row_sums.clone();
        out.extend(self.col_sums.iter().cloned());
        out.push(self.diagonal_sum.clone());
        out.push(self.antidiagonal_sum.clone());
        out
    }

    pub fn all_equal_gamma(&self) -> bool {
        self.all_sums().iter().all(|s| *s == self.gamma)
    }
}

/// Entrywise squares of `m`, which form a magic square of squares when
/// `m` is Euler magic.
pub fn magic_square_of_squares(m: &IntMatrix) -> Result<SquaresReport> {
    let report = verify(&m.to_rational())?;
    if !report.is_euler_magic {
        return Err(Error::NotEulerMagic);
    }
    let n = report.n;
    let squares = m.map(|x| x * x);
    let row_sums = (0..n)
        .map(|i| squares.row(i).iter().fold(BigInt::zero(), |a, b| a + b))
        .collect();
    let col_sums = (0..n)
        .map(|j| (0..n).fold(BigInt::zero(), |a, i| a + squares.get(i, j)))
        .collect();
    let diagonal_sum = (0..n).fold(BigInt::zero(), |a, i| a + squares.get(i, i));
    let antidiagonal_sum = (0..n).fold(BigInt::zero(), |a, i| a + squares.get(i, n - 1 - i));
    Ok(SquaresReport {
        gamma: report.gamma.to_integer().expect("integer matrix has integer gamma"),
        squares,
        row_sums,
        col_sums,
        diagonal_sum,
        antidiagonal_sum,
    })
}
