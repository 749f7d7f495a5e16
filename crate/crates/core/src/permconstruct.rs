//! Improper Euler magic matrices from permutations, and the 2x2 family.
//!
//! A permutation matrix is orthogonal; it is Euler magic when exactly one
//! of its ones lies on the diagonal and exactly one on the anti-diagonal.
//! For even `n` the cycle `(1 2 ... n-1)(n)` does this, for odd
//! `n = 2k - 1` the product `(1 2 ... k-1)(k)(k+1 ... n)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, Matrix, RatMatrix};
use crate::rational::Rational;

/// `images[i - 1] = sigma(i)`, 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v == 0 || v > n || seen[v - 1] {
                return Err(Error::InvalidPermutation(format!("{images:?}")));
            }
            seen[v - 1] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    /// Product of disjoint cycles on `1..=n`; points not listed are fixed.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (1..=n).collect();
        let mut used = vec![false; n];
        for cycle in cycles {
            for (idx, &x) in cycle.iter().enumerate() {
                if x == 0 || x > n || used[x - 1] {
                    return Err(Error::InvalidPermutation(format!("{cycles:?}")));
                }
                used[x - 1] = true;
                images[x - 1] = cycle[(idx + 1) % cycle.len()];
            }
        }
        Permutation::new(images)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }
}

/// `m_ij = 1` if `j = sigma(i)`, else `0`.
pub fn perm_matrix(sigma: &Permutation) -> IntMatrix {
    let n = sigma.len();
    Matrix::from_fn(n, n, |i, j| {
        if sigma.apply(i + 1) == j + 1 {
            BigInt::one()
        } else {
            BigInt::zero()
        }
    })
}

/// The cycle structure used for size `n >= 4`.
pub fn construction_permutation(n: usize) -> Result<Permutation> {
    if n < 4 {
        return Err(Error::OutOfDomain(format!(
            "permutation construction needs n >= 4, got {n}"
        )));
    }
    let cycles = if n.is_multiple_of(2) {
        vec![(1..n).collect::<Vec<_>>()]
    } else {
        let k = n.div_ceil(2);
        vec![(1..k).collect::<Vec<_>>(), (k + 1..=n).collect()]
    };
    Permutation::from_cycles(n, &cycles)
}

pub fn improper_construction(n: usize) -> Result<IntMatrix> {
    Ok(perm_matrix(&construction_permutation(n)?))
}

/// The four 2x2 Euler magic matrices with entry magnitude `a`:
/// `((a,a),(a,-a))`, `((a,a),(-a,a))`, `((a,-a),(a,a))`, `((-a,a),(a,a))`.
pub fn two_by_two_family(a: &Rational, variant: u8) -> Result<RatMatrix> {
    if a.is_zero() {
        return Err(Error::OutOfDomain("a must be nonzero".into()));
    }
    let signs: [i64; 4] = match variant {
        1 => [1, 1, 1, -1],
        2 => [1, 1, -1, 1],
        3 => [1, -1, 1, 1],
        4 => [-1, 1, 1, 1],
        _ => return Err(Error::OutOfDomain(format!("variant must be 1..=4, got {variant}"))),
    };
    RatMatrix::new(2, 2, signs.iter().map(|&s| a * &Rational::from(s)).collect())
}
