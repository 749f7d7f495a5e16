//! Random Cayley search for 5x5 Euler magic matrices.
//!
//! Each sample draws the ten upper entries of a skew `S` (numerator uniform
//! in `[-N, N]`, denominator uniform in `[1, D]`), forms the orthogonal
//! `M = (I - S)(I + S)^-1` and checks the diagonal and anti-diagonal
//! conditions directly. Samples meeting exactly one of the two are
//! reported as near misses.

use rayon::prelude::*;
use serde::Serialize;

use super::{json_line, rank, run_pool, Candidate, SearchConfig, Summary};
use crate::cayley3::{cayley, SkewMatrix};
use crate::error::Result;
use crate::rational::Rational;
use crate::rng::XorShift64Star;

pub const SKEW5_PARAMS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NearMiss {
    pub sample: u64,
    pub diagonal: bool,
    pub antidiagonal: bool,
    pub params: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Search5Result {
    pub candidates: Vec<Candidate>,
    pub near_misses: Vec<NearMiss>,
    pub summary: Summary,
}

impl Search5Result {
    /// One JSON object per candidate, then per near miss, then the summary.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for c in &self.candidates {
            out.push_str(&json_line(&c.to_json()));
            out.push('\n');
        }
        for n in &self.near_misses {
            out.push_str(&json_line(&serde_json::json!({ "near_miss": n })));
            out.push('\n');
        }
        out.push_str(&json_line(&serde_json::json!({ "summary": self.summary })));
        out.push('\n');
        out
    }
}

/// The skew parameters of sample `index`.
pub fn skew_sample(config: &SearchConfig, index: u64) -> Vec<Rational> {
    let mut rng = XorShift64Star::stream(config.seed, index);
    (0..SKEW5_PARAMS)
        .map(|_| rng.rational(config.numerator_bound, config.denominator_bound))
        .collect()
}

enum Outcome {
    Hit(Candidate),
    Near(NearMiss),
}

fn run_sample(config: &SearchConfig, index: u64) -> Result<Option<Outcome>> {
    let params = skew_sample(config, index);
    let s = SkewMatrix::from_upper(5, &params)?;
    let m = cayley(&s);
    let one = Rational::one();
    let diag: Rational = (0..5).map(|i| m.get(i, i) * m.get(i, i)).sum();
    let anti: Rational = (0..5).map(|i| m.get(i, 4 - i) * m.get(i, 4 - i)).sum();
    let (d, a) = (diag == one, anti == one);
    if d && a {
        Ok(Candidate::from_matrix(index, params, &m)?
            .filter(|c| c.score >= config.score_threshold)
            .map(Outcome::Hit))
    } else if d || a {
        Ok(Some(Outcome::Near(NearMiss {
            sample: index,
            diagonal: d,
            antidiagonal: a,
            params: params.iter().map(ToString::to_string).collect(),
        })))
    } else {
        Ok(None)
    }
}

pub fn search5_cayley(config: &SearchConfig) -> Result<Search5Result> {
    config.validate()?;
    let outcomes: Vec<Outcome> = run_pool(config.workers, || {
        (0..config.max_iterations)
            .into_par_iter()
            .map(|i| run_sample(config, i))
            .collect::<Result<Vec<_>>>()
    })??
    .into_iter()
    .flatten()
    .collect();
    let mut candidates = Vec::new();
    let mut near_misses = Vec::new();
    for o in outcomes {
        match o {
            Outcome::Hit(c) => candidates.push(c),
            Outcome::Near(n) => near_misses.push(n),
        }
    }
    rank(&mut candidates);
    let summary = Summary {
        iterations: config.max_iterations,
        hits: candidates.len(),
        near_misses: near_misses.len(),
        best_score: candidates.first().map(|c| c.score),
    };
    Ok(Search5Result {
        candidates,
        near_misses,
        summary,
    })
}
