//! Left and right octonion multiplication matrices.
//!
//! With respect to the basis used here, `L(a, ..., h)` is the matrix of
//! `z -> x z` and `R(p, ..., w)` the matrix of `z -> z x`. Both satisfy
//! `X X^t = (sum of squares) I_8`, so `M = L R` always has `M M^t = gamma I_8`.
//!
//! The sign patterns are stored as tables of `(parameter index, sign)`
//! rather than derived from structure constants.

use crate::matrix::{Matrix, Ring};
use crate::poly::{Context, MultiPoly};
use crate::rational::Rational;

/// `(index into the 8 parameters, sign)` for every entry, row-major.
pub type SignPattern = [[(u8, i8); 8]; 8];

const P: i8 = 1;
const N: i8 = -1;

pub const LEFT_PATTERN: SignPattern = [
    [(0, P), (1, N), (2, N), (3, N), (4, N), (5, N), (6, N), (7, N)],
    [(1, P), (0, P), (3, N), (2, P), (5, N), (4, P), (7, P), (6, N)],
    [(2, P), (3, P), (0, P), (1, N), (6, N), (7, N), (4, P), (5, P)],
    [(3, P), (2, N), (1, P), (0, P), (7, N), (6, P), (5, N), (4, P)],
    [(4, P), (5, P), (6, P), (7, P), (0, P), (1, N), (2, N), (3, N)],
    [(5, P), (4, N), (7, P), (6, N), (1, P), (0, P), (3, P), (2, N)],
    [(6, P), (7, N), (4, N), (5, P), (2, P), (3, N), (0, P), (1, P)],
    [(7, P), (6, P), (5, N), (4, N), (3, P), (2, P), (1, N), (0, P)],
];

pub const RIGHT_PATTERN: SignPattern = [
    [(0, P), (1, N), (2, N), (3, N), (4, N), (5, N), (6, N), (7, N)],
    [(1, P), (0, P), (3, P), (2, N), (5, P), (4, N), (7, N), (6, P)],
    [(2, P), (3, N), (0, P), (1, P), (6, P), (7, P), (4, N), (5, N)],
    [(3, P), (2, P), (1, N), (0, P), (7, P), (6, N), (5, P), (4, N)],
    [(4, P), (5, N), (6, N), (7, N), (0, P), (1, P), (2, P), (3, P)],
    [(5, P), (4, P), (7, N), (6, P), (1, N), (0, P), (3, N), (2, P)],
    [(6, P), (7, P), (4, P), (5, N), (2, N), (3, P), (0, P), (1, N)],
    [(7, P), (6, N), (5, P), (4, P), (3, N), (2, N), (1, P), (0, P)],
];

pub const LEFT_NAMES: [&str; 8] = ["a", "b", "c", "d", "e", "f", "g", "h"];
pub const RIGHT_NAMES: [&str; 8] = ["p", "q", "r", "s", "t", "u", "v", "w"];

/// Eight octonion coefficients, in the order `(a, ..., h)` or `(p, ..., w)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OctParams<T>(pub [T; 8]);

impl<T> OctParams<T> {
    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> OctParams<U> {
        OctParams(self.0.each_ref().map(f))
    }
}

impl OctParams<Rational> {
    pub fn from_i64(v: [i64; 8]) -> Self {
        OctParams(v.map(Rational::from))
    }

    pub fn unit() -> Self {
        Self::from_i64([1, 0, 0, 0, 0, 0, 0, 0])
    }

    /// Constants of `ctx`.
    pub fn to_poly(&self, ctx: &Context) -> OctParams<MultiPoly> {
        self.map(|c| MultiPoly::constant(ctx, c.clone()))
    }
}

impl OctParams<MultiPoly> {
    /// The named variables of `ctx` as parameters.
    pub fn symbolic(ctx: &Context, names: [&str; 8]) -> crate::Result<Self> {
        let v = names.map(|n| MultiPoly::var(ctx, n));
        let mut out = Vec::with_capacity(8);
        for p in v {
            out.push(p?);
        }
        Ok(OctParams(out.try_into().expect("eight entries")))
    }
}

fn from_pattern<T: Ring>(pattern: &SignPattern, x: &OctParams<T>) -> Matrix<T> {
    Matrix::from_fn(8, 8, |i, j| {
        let (idx, sign) = pattern[i][j];
        let v = x.0[idx as usize].clone();
        if sign < 0 {
            -v
        } else {
            v
        }
    })
}

/// `L(a, ..., h)`.
pub fn left_matrix<T: Ring>(x: &OctParams<T>) -> Matrix<T> {
    from_pattern(&LEFT_PATTERN, x)
}

/// `R(p, ..., w)`.
pub fn right_matrix<T: Ring>(x: &OctParams<T>) -> Matrix<T> {
    from_pattern(&RIGHT_PATTERN, x)
}

pub fn sum_of_squares<T: Ring>(x: &OctParams<T>) -> T {
    let mut acc = x.0[0].clone() * x.0[0].clone();
    for v in &x.0[1..] {
        acc = acc + v.clone() * v.clone();
    }
    acc
}

/// `(a^2 + ... + h^2)(p^2 + ... + w^2)`.
pub fn gamma<T: Ring>(left: &OctParams<T>, right: &OctParams<T>) -> T {
    sum_of_squares(left) * sum_of_squares(right)
}

/// `L(left) * R(right)`.
pub fn product<T: Ring>(left: &OctParams<T>, right: &OctParams<T>) -> Matrix<T> {
    left_matrix(left)
        .mat_mul(&right_matrix(right))
        .expect("8x8 times 8x8")
}

/// Context `a, ..., h, p, ..., w` for fully symbolic products.
pub fn full_context() -> Context {
    Context::letters("abcdefghpqrstuvw")
}

/// Context `p, ..., w` for products with a fixed numeric left factor.
pub fn right_context() -> Context {
    Context::letters("pqrstuvw")
}
