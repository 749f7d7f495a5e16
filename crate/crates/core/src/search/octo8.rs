//! The 8x8 pipeline: fix `(a, ..., h)` and `(p, q, r, s, t)`, leaving
//! `M = L R` a polynomial matrix in `u, v, w`, then look for rational
//! zeros of `A(u, v, w) = B(u, v, w) = 0`.
//!
//! Points `(u, v)` come from a bounded-height grid (optionally shifted by a
//! center) and from seeded random draws. At each point `A` and `B` are
//! polynomials in `w` of degree at most 2; their common rational roots are
//! hits.

use rayon::prelude::*;
use serde::Serialize;

use super::{json_line, rank, run_pool, Candidate, Summary};
use crate::error::{Error, Result};
use crate::family8::{polynomial_properness, primitive_right, PolyProperness};
use crate::matrix::{Matrix, RatMatrix};
use crate::octonion::{self, OctParams};
use crate::poly::{Context, MultiPoly};
use crate::rational::Rational;
use crate::rng::XorShift64Star;

/// Grid `u = cu + x`, `v = cv + y` with `x`, `y` of height at most
/// `height` and denominator at most `max_den`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub center: [Rational; 2],
    pub height: i64,
    pub max_den: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Search8Config {
    pub left: [i64; 8],
    /// `p, q, r, s, t`.
    pub partial: [Rational; 5],
    /// Points `(u, v, w)` checked exactly before any enumeration.
    pub supplied: Vec<[Rational; 3]>,
    pub enumeration: Option<Enumeration>,
    pub seed: u64,
    /// Random `(u, v)` draws, numerator in `[-N, N]`, denominator in `[1, D]`.
    pub random_samples: u64,
    pub numerator_bound: i64,
    pub denominator_bound: i64,
    pub workers: usize,
}

impl Search8Config {
    pub fn new(left: [i64; 8], partial: [Rational; 5]) -> Self {
        Search8Config {
            left,
            partial,
            supplied: Vec::new(),
            enumeration: None,
            seed: 0,
            random_samples: 0,
            numerator_bound: 1,
            denominator_bound: 1,
            workers: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuppliedOutcome {
    pub point: Vec<String>,
    pub a_zero: bool,
    pub b_zero: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Search8Result {
    pub supplied: Vec<SuppliedOutcome>,
    pub candidates: Vec<Candidate>,
    pub summary: Summary,
}

impl Search8Result {
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for s in &self.supplied {
            out.push_str(&json_line(&serde_json::json!({ "supplied": s })));
            out.push('\n');
        }
        for c in &self.candidates {
            out.push_str(&json_line(&c.to_json()));
            out.push('\n');
        }
        out.push_str(&json_line(&serde_json::json!({ "summary": self.summary })));
        out.push('\n');
        out
    }
}

/// `M`, `A`, `B` over the context `u, v, w`.
pub fn specialized_product(left: &[i64; 8], partial: &[Rational; 5]) -> (Matrix<MultiPoly>, MultiPoly, MultiPoly) {
    let ctx = Context::letters("uvw");
    let l = OctParams(left.map(Rational::from)).to_poly(&ctx);
    let vars = ctx.vars();
    let r = OctParams(std::array::from_fn(|i| {
        if i < 5 {
            MultiPoly::constant(&ctx, partial[i].clone())
        } else {
            vars[i - 5].clone()
        }
    }));
    let m = octonion::product(&l, &r);
    let gamma = octonion::gamma(&l, &r);
    let n = 8;
    let mut diag = MultiPoly::zero(&ctx);
    let mut anti = MultiPoly::zero(&ctx);
    for i in 0..n {
        diag = diag + m.get(i, i).pow(2);
        anti = anti + m.get(i, n - 1 - i).pow(2);
    }
    let a = &diag - &anti;
    let b = &(&diag + &anti) - &gamma.scale(&Rational::from(2));
    (m, a, b)
}

/// Distinct rationals `x / d` with `|x| <= height`, `1 <= d <= max_den`, ascending.
pub fn rationals_of_height(height: i64, max_den: i64) -> Vec<Rational> {
    let mut v: Vec<Rational> = (1..=max_den)
        .flat_map(|d| (-height..=height).map(move |x| Rational::new(x, d)))
        .collect();
    v.sort();
    v.dedup();
    v
}

/// Rational roots of a univariate polynomial of degree at most 2 in `w`.
fn rational_roots(p: &MultiPoly) -> Option<Vec<Rational>> {
    let c = |k| {
        p.coefficient_of("w", k)
            .expect("w in context")
            .as_constant()
            .unwrap_or_default()
    };
    let (c2, c1, c0) = (c(2), c(1), c(0));
    if !c2.is_zero() {
        let disc = &c1 * &c1 - Rational::from(4) * &c2 * &c0;
        let root = disc.sqrt_exact()?;
        let two_a = Rational::from(2) * &c2;
        let mut r = vec![(-&c1 + &root) / &two_a, (-&c1 - &root) / &two_a];
        r.dedup();
        Some(r)
    } else if !c1.is_zero() {
        Some(vec![-c0 / c1])
    } else {
        None
    }
}

struct Prepared {
    left: OctParams<Rational>,
    partial: [Rational; 5],
    a: MultiPoly,
    b: MultiPoly,
}

impl Prepared {
    fn right(&self, u: &Rational, v: &Rational, w: &Rational) -> OctParams<Rational> {
        OctParams(std::array::from_fn(|i| match i {
            0..=4 => self.partial[i].clone(),
            5 => u.clone(),
            6 => v.clone(),
            _ => w.clone(),
        }))
    }

    fn candidate(&self, sample: u64, u: &Rational, v: &Rational, w: &Rational) -> Result<Option<Candidate>> {
        let right = self.right(u, v, w);
        let prim = primitive_right(&right)?;
        let params: Vec<Rational> = prim.0.iter().map(Rational::from).collect();
        let m = octonion::product(&self.left, &OctParams(std::array::from_fn(|i| params[i].clone())));
        Candidate::from_matrix(sample, params, &m)
    }

    fn hits_at(&self, sample: u64, u: &Rational, v: &Rational) -> Result<Vec<Candidate>> {
        let at = [("u", u.clone()), ("v", v.clone())];
        let a = self.a.specialize(&at)?;
        let b = self.b.specialize(&at)?;
        let roots = match rational_roots(&a).or_else(|| if a.is_zero() { rational_roots(&b) } else { None }) {
            Some(r) => r,
            None => return Ok(Vec::new()),
        };
        let mut out = Vec::new();
        for w in roots {
            let pt = [("w", w.clone())];
            if a.specialize(&pt)?.is_zero() && b.specialize(&pt)?.is_zero() {
                if let Some(c) = self.candidate(sample, u, v, &w)? {
                    out.push(c);
                }
            }
        }
        Ok(out)
    }
}

fn improper_reason(p: &PolyProperness) -> String {
    if let Some(w) = p.identical.first() {
        format!(
            "entries {:?} and {:?} agree up to sign",
            w.first, w.second
        )
    } else if let Some((x, y)) = &p.cover {
        format!("A or B is proportional to ({}) * ({})", x.form, y.form)
    } else {
        "unknown".into()
    }
}

pub fn search8_seeded(config: &Search8Config) -> Result<Search8Result> {
    if config.workers == 0 {
        return Err(Error::InvalidConfig("workers must be >= 1".into()));
    }
    let (m, a, b) = specialized_product(&config.left, &config.partial);
    let properness = polynomial_properness(&m, &a, &b);
    if properness.is_forced_improper() {
        return Err(Error::ImproperPolynomialMatrix(improper_reason(&properness)));
    }
    let prep = Prepared {
        left: OctParams(config.left.map(Rational::from)),
        partial: config.partial.clone(),
        a,
        b,
    };

    let mut supplied = Vec::new();
    let mut candidates = Vec::new();
    let mut sample = 0u64;
    for pt in &config.supplied {
        let vals: Vec<(&str, Rational)> = ["u", "v", "w"].into_iter().zip(pt.iter().cloned()).collect();
        let a_zero = prep.a.specialize(&vals)?.is_zero();
        let b_zero = prep.b.specialize(&vals)?.is_zero();
        if a_zero && b_zero {
            if let Some(c) = prep.candidate(sample, &pt[0], &pt[1], &pt[2])? {
                candidates.push(c);
            }
        }
        supplied.push(SuppliedOutcome {
            point: pt.iter().map(ToString::to_string).collect(),
            a_zero,
            b_zero,
        });
        sample += 1;
    }

    let mut points: Vec<(Rational, Rational)> = Vec::new();
    if let Some(e) = &config.enumeration {
        let offsets = rationals_of_height(e.height, e.max_den);
        for x in &offsets {
            for y in &offsets {
                points.push((&e.center[0] + x, &e.center[1] + y));
            }
        }
    }
    for i in 0..config.random_samples {
        let mut rng = XorShift64Star::stream(config.seed, i);
        let u = rng.rational(config.numerator_bound, config.denominator_bound);
        let v = rng.rational(config.numerator_bound, config.denominator_bound);
        points.push((u, v));
    }
    let base = sample;
    let found: Vec<Vec<Candidate>> = run_pool(config.workers, || {
        points
            .par_iter()
            .enumerate()
            .map(|(i, (u, v))| prep.hits_at(base + i as u64, u, v))
            .collect::<Result<Vec<_>>>()
    })??;
    candidates.extend(found.into_iter().flatten());
    rank(&mut candidates);
    let iterations = base + points.len() as u64;
    Ok(Search8Result {
        supplied,
        summary: Summary {
            iterations,
            hits: candidates.len(),
            near_misses: 0,
            best_score: candidates.first().map(|c| c.score),
        },
        candidates,
    })
}

/// `L(left) R(right)` for a candidate's integer parameters.
pub fn candidate_product(left: &[i64; 8], params: &[Rational]) -> RatMatrix {
    octonion::product(
        &OctParams(left.map(Rational::from)),
        &OctParams(std::array::from_fn(|i| params[i].clone())),
    )
}
