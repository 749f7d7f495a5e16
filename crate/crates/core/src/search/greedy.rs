//! Greedy backtracking over small integer tuples `(a, ..., h, p, q, r, s, t)`
//! that keep `L R` proper as a polynomial matrix in the unassigned
//! variables.
//!
//! Positions are assigned in the order `a, ..., h, p, ..., t`, each trying
//! its allowed values by increasing absolute value; the seed decides
//! whether `x` or `-x` comes first. A branch is cut as soon as two entries
//! agree up to sign identically. Complete tuples must also pass the
//! factor-cover test of [`polynomial_properness`] in `u, v, w`.

use serde::Serialize;

use super::octo8::specialized_product;
use crate::family8::{identical_pairs, polynomial_properness};
use crate::matrix::Matrix;
use crate::octonion::{self, OctParams};
use crate::poly::{Context, MultiPoly};
use crate::rational::Rational;
use crate::rng::XorShift64Star;

pub const GREEDY_POSITIONS: [&str; 13] = ["a", "b", "c", "d", "e", "f", "g", "h", "p", "q", "r", "s", "t"];

/// Allowed values per position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyBounds {
    pub values: [Vec<i64>; 13],
}

impl GreedyBounds {
    /// Every position ranges over `lo..=hi`.
    pub fn uniform(lo: i64, hi: i64) -> Self {
        GreedyBounds {
            values: std::array::from_fn(|_| (lo..=hi).collect()),
        }
    }

    /// Values sorted by absolute value; for each absolute value `rng`
    /// decides whether the negative one comes first.
    fn ordered(&self, rng: &mut XorShift64Star) -> [Vec<i64>; 13] {
        std::array::from_fn(|pos| {
            let mut v = self.values[pos].clone();
            v.sort_unstable();
            v.dedup();
            let max_abs = v.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0) as usize;
            let negative_first: Vec<bool> = (0..=max_abs).map(|_| rng.next_u64() & 1 == 1).collect();
            v.sort_by_key(|&x| {
                let a = x.unsigned_abs();
                (a, (x < 0) != negative_first[a as usize])
            });
            v
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct GreedyTuple {
    pub left: [i64; 8],
    pub partial: [i64; 5],
}

fn node_matrix(ctx: &Context, assigned: &[i64]) -> Matrix<MultiPoly> {
    let param = |pos: usize, name: &str| {
        if pos < assigned.len() {
            MultiPoly::constant(ctx, Rational::from(assigned[pos]))
        } else {
            MultiPoly::var(ctx, name).expect("name in context")
        }
    };
    let l = OctParams(std::array::from_fn(|i| param(i, GREEDY_POSITIONS[i])));
    let r = OctParams(std::array::from_fn(|i| match i {
        0..=4 => param(8 + i, GREEDY_POSITIONS[8 + i]),
        _ => MultiPoly::var(ctx, ["u", "v", "w"][i - 5]).expect("name in context"),
    }));
    octonion::product(&l, &r)
}

fn leaf_ok(assigned: &[i64]) -> bool {
    let left: [i64; 8] = assigned[..8].try_into().expect("13 values");
    let partial: [Rational; 5] = std::array::from_fn(|i| Rational::from(assigned[8 + i]));
    let (m, a, b) = specialized_product(&left, &partial);
    !polynomial_properness(&m, &a, &b).is_forced_improper()
}

struct Walker<'a> {
    ctx: Context,
    order: &'a [Vec<i64>; 13],
    max_results: usize,
    out: Vec<GreedyTuple>,
}

impl Walker<'_> {
    fn descend(&mut self, assigned: &mut Vec<i64>) {
        if self.out.len() >= self.max_results {
            return;
        }
        let pos = assigned.len();
        if pos == 13 {
            if leaf_ok(assigned) {
                self.out.push(GreedyTuple {
                    left: assigned[..8].try_into().expect("8 values"),
                    partial: assigned[8..].try_into().expect("5 values"),
                });
            }
            return;
        }
        for &x in &self.order[pos] {
            assigned.push(x);
            if identical_pairs(&node_matrix(&self.ctx, assigned)).is_empty() {
                self.descend(assigned);
            }
            assigned.pop();
            if self.out.len() >= self.max_results {
                return;
            }
        }
    }
}

/// Tuples in depth-first greedy order, at most `max_results` of them.
pub fn greedy_backtrack_left(bounds: &GreedyBounds, seed: u64, max_results: usize) -> Vec<GreedyTuple> {
    let mut rng = XorShift64Star::new(seed);
    let order = bounds.ordered(&mut rng);
    let mut walker = Walker {
        ctx: octonion::full_context(),
        order: &order,
        max_results,
        out: Vec::new(),
    };
    walker.descend(&mut Vec::with_capacity(13));
    walker.out
}
