//! Seeded search harnesses.
//!
//! Every sample `i` of a run draws from its own stream
//! [`XorShift64Star::stream`]`(seed, i)`, and results are merged by
//! `(score desc, sample asc)`, so output does not depend on the worker count.
//!
//! [`XorShift64Star::stream`]: crate::rng::XorShift64Star::stream

mod cayley5;
mod greedy;
mod octo8;

pub use cayley5::{search5_cayley, skew_sample, NearMiss, Search5Result};
pub use greedy::{greedy_backtrack_left, GreedyBounds, GreedyTuple, GREEDY_POSITIONS};
pub use octo8::{
    candidate_product, rationals_of_height, search8_seeded, specialized_product, Enumeration, Search8Config, Search8Result,
    SuppliedOutcome,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::format::entries_json;
use crate::matrix::{IntMatrix, RatMatrix};
use crate::rational::Rational;
use crate::verify::{verify, Position};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub seed: u64,
    pub numerator_bound: i64,
    pub denominator_bound: i64,
    pub max_iterations: u64,
    /// Candidates scoring below this are dropped.
    pub score_threshold: usize,
    pub workers: usize,
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.numerator_bound < 1 || self.denominator_bound < 1 {
            return Err(Error::InvalidConfig("bounds must be >= 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::InvalidConfig("workers must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub sample: u64,
    pub source_params: Vec<Rational>,
    /// Primitive and sign-canonical.
    pub matrix: IntMatrix,
    pub score: usize,
    pub duplicates: Vec<(Position, Position)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CandidateJson {
    pub sample: u64,
    pub params: Vec<String>,
    pub score: usize,
    pub duplicates: Vec<[[usize; 2]; 2]>,
    pub matrix: Vec<Vec<String>>,
}

impl Candidate {
    /// Rescales to a primitive integer matrix, fixes the sign and scores it.
    /// `None` unless the result is Euler magic.
    pub fn from_matrix(sample: u64, source_params: Vec<Rational>, m: &RatMatrix) -> Result<Option<Self>> {
        let matrix = m.rescale_primitive()?.sign_canonical();
        let report = verify(&matrix.to_rational())?;
        if !report.is_euler_magic {
            return Ok(None);
        }
        Ok(Some(Candidate {
            sample,
            source_params,
            matrix,
            score: report.distinct_square_count,
            duplicates: report.duplicate_pairs,
        }))
    }

    pub fn to_json(&self) -> CandidateJson {
        CandidateJson {
            sample: self.sample,
            params: self.source_params.iter().map(ToString::to_string).collect(),
            score: self.score,
            duplicates: self
                .duplicates
                .iter()
                .map(|&((i, j), (k, l))| [[i, j], [k, l]])
                .collect(),
            matrix: entries_json(&self.matrix),
        }
    }
}

/// Sorts by score descending, then sample index ascending.
pub fn rank(candidates: &mut [Candidate]) {
    candidates.sort_by(|x, y| y.score.cmp(&x.score).then(x.sample.cmp(&y.sample)));
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub iterations: u64,
    pub hits: usize,
    pub near_misses: usize,
    pub best_score: Option<usize>,
}

pub(crate) fn run_pool<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    Ok(pool.install(job))
}

pub(crate) fn json_line<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("search records serialize")
}
