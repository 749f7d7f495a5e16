//! Sparse multivariate polynomials over the rationals.
//!
//! A polynomial lives in a fixed [`Context`] of at most [`MAX_VARS`] named
//! variables. Terms are kept sorted in descending graded-lexicographic order
//! with no zero coefficients, so two polynomials are equal exactly when their
//! term lists are.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::matrix::Ring;
use crate::rational::Rational;
use crate::rng::XorShift64Star;

pub const MAX_VARS: usize = 16;

/// Exponent vector. Field order makes the derived `Ord` graded lex.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Monomial {
    degree: u16,
    exps: [u8; MAX_VARS],
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        degree: 0,
        exps: [0; MAX_VARS],
    };

    pub fn from_exponents(exps: &[u32]) -> Self {
        assert!(exps.len() <= MAX_VARS);
        let mut m = Monomial::ONE;
        for (i, &e) in exps.iter().enumerate() {
            m.exps[i] = u8::try_from(e).expect("exponent exceeds 255");
            m.degree += e as u16;
        }
        m
    }

    pub fn var(index: usize) -> Self {
        let mut m = Monomial::ONE;
        m.exps[index] = 1;
        m.degree = 1;
        m
    }

    pub fn exponent(&self, index: usize) -> u32 {
        self.exps[index] as u32
    }

    pub fn degree(&self) -> u32 {
        self.degree as u32
    }

    fn times(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for i in 0..MAX_VARS {
            out.exps[i] = self.exps[i]
                .checked_add(other.exps[i])
                .expect("exponent overflow");
        }
        out.degree += other.degree;
        out
    }

    fn without(&self, index: usize) -> Monomial {
        let mut out = *self;
        out.degree -= out.exps[index] as u16;
        out.exps[index] = 0;
        out
    }
}

/// Ordered list of variable names shared by polynomials.
#[derive(Clone)]
pub struct Context(Arc<[String]>);

impl Context {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        if names.len() > MAX_VARS {
            return Err(Error::BadContext(format!(
                "{} variables, at most {MAX_VARS} supported",
                names.len()
            )));
        }
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, n) in names.iter().enumerate() {
            let ok = n.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(Error::BadContext(format!("invalid variable name `{n}`")));
            }
            if names[..i].contains(n) {
                return Err(Error::BadContext(format!("duplicate variable `{n}`")));
            }
        }
        Ok(Context(names.into()))
    }

    /// Context from single-letter names, e.g. `"pqrstuvw"`.
    pub fn letters(s: &str) -> Self {
        let names: Vec<String> = s.chars().map(String::from).collect();
        Context::new(&names).expect("valid letter context")
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.0
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn var(&self, name: &str) -> Result<MultiPoly> {
        MultiPoly::var(self, name)
    }

    /// All variables of the context as polynomials, in order.
    pub fn vars(&self) -> Vec<MultiPoly> {
        (0..self.len())
            .map(|i| MultiPoly {
                ctx: self.clone(),
                terms: vec![(Monomial::var(i), Rational::one())],
            })
            .collect()
    }
}

impl PartialEq for Context {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Context {}

impl std::hash::Hash for Context {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl fmt::Debug for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    ctx: Context,
    // descending graded lex, nonzero coefficients
    terms: Vec<(Monomial, Rational)>,
}

fn normalize(mut terms: Vec<(Monomial, Rational)>) -> Vec<(Monomial, Rational)> {
    #[allow(clippy::unnecessary_sort_by)] // keys are not cloned
    terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
    let mut out: Vec<(Monomial, Rational)> = Vec::with_capacity(terms.len());
    for (m, c) in terms {
        if let Some((lm, lc)) = out.last_mut() {
            if *lm == m {
                *lc += c;
                continue;
            }
        }
        if out.last().is_some_and(|(_, c)| c.is_zero()) {
            out.pop();
        }
        out.push((m, c));
    }
    if out.last().is_some_and(|(_, c)| c.is_zero()) {
        out.pop();
    }
    out
}

impl MultiPoly {
    pub fn zero(ctx: &Context) -> Self {
        MultiPoly {
            ctx: ctx.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ctx: &Context, c: Rational) -> Self {
        let terms = if c.is_zero() {
            Vec::new()
        } else {
            vec![(Monomial::ONE, c)]
        };
        MultiPoly {
            ctx: ctx.clone(),
            terms,
        }
    }

    pub fn one(ctx: &Context) -> Self {
        Self::constant(ctx, Rational::one())
    }

    pub fn var(ctx: &Context, name: &str) -> Result<Self> {
        let i = ctx.index_of(name)?;
        Ok(MultiPoly {
            ctx: ctx.clone(),
            terms: vec![(Monomial::var(i), Rational::one())],
        })
    }

    pub fn from_terms(ctx: &Context, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let terms: Vec<_> = terms.into_iter().collect();
        for (m, _) in &terms {
            assert!(
                m.exps[ctx.len()..].iter().all(|e| *e == 0),
                "monomial uses variables outside the context"
            );
        }
        MultiPoly {
            ctx: ctx.clone(),
            terms: normalize(terms),
        }
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.degree == 0)
    }

    /// The value of a constant polynomial.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if m.degree == 0 => Some(c.clone()),
            _ => None,
        }
    }

    /// Coefficient of the given monomial (zero if absent).
    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms
            .binary_search_by(|(tm, _)| m.cmp(tm))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_default()
    }

    /// Leading term under graded lex.
    pub fn leading(&self) -> Option<&(Monomial, Rational)> {
        self.terms.first()
    }

    /// Total degree; `-1` for the zero polynomial.
    pub fn total_degree(&self) -> i64 {
        self.terms.first().map_or(-1, |(m, _)| m.degree as i64)
    }

    pub fn is_homogeneous(&self, degree: u32) -> bool {
        self.terms.iter().all(|(m, _)| m.degree() == degree)
    }

    fn check_ctx(&self, other: &Self) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch {
                left: self.ctx.names().to_vec(),
                right: other.ctx.names().to_vec(),
            })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        Ok(self.merge(other, true))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let take_b = |c: &Rational| if negate { -c } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push((b[j].0, take_b(&b[j].1)));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (*m, take_b(c))));
        MultiPoly {
            ctx: self.ctx.clone(),
            terms: out,
        }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return MultiPoly::zero(&self.ctx);
        }
        let mut prods = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                prods.push((ma.times(mb), ca * cb));
            }
        }
        MultiPoly {
            ctx: self.ctx.clone(),
            terms: normalize(prods),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return MultiPoly::zero(&self.ctx);
        }
        MultiPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = MultiPoly::one(&self.ctx);
        for _ in 0..exp {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    /// Maximum exponent of `v`; `-1` for the zero polynomial.
    pub fn degree_in(&self, v: &str) -> Result<i64> {
        let i = self.ctx.index_of(v)?;
        Ok(self
            .terms
            .iter()
            .map(|(m, _)| m.exps[i] as i64)
            .max()
            .unwrap_or(-1))
    }

    /// The polynomial (in the same context, free of `v`) multiplying `v^k`.
    pub fn coefficient_of(&self, v: &str, k: u32) -> Result<Self> {
        let i = self.ctx.index_of(v)?;
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exps[i] as u32 == k)
            .map(|(m, c)| (m.without(i), c.clone()))
            .collect();
        Ok(MultiPoly {
            ctx: self.ctx.clone(),
            terms: normalize(terms),
        })
    }

    /// Replace `v` by `value` (a polynomial in the same context).
    pub fn substitute(&self, v: &str, value: &MultiPoly) -> Result<Self> {
        self.check_ctx(value)?;
        let i = self.ctx.index_of(v)?;
        let mut powers: Vec<MultiPoly> = vec![MultiPoly::one(&self.ctx)];
        let mut pieces = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exps[i] as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap().mul_unchecked(value);
                powers.push(next);
            }
            let rest = m.without(i);
            for (pm, pc) in &powers[e].terms {
                pieces.push((rest.times(pm), c * pc));
            }
        }
        Ok(MultiPoly {
            ctx: self.ctx.clone(),
            terms: normalize(pieces),
        })
    }

    pub fn substitute_value(&self, v: &str, value: &Rational) -> Result<Self> {
        self.substitute(v, &MultiPoly::constant(&self.ctx, value.clone()))
    }

    /// Substitute several variables by rational values at once.
    pub fn specialize(&self, values: &[(&str, Rational)]) -> Result<Self> {
        let mut point: Vec<Option<&Rational>> = vec![None; self.ctx.len()];
        for (name, val) in values {
            point[self.ctx.index_of(name)?] = Some(val);
        }
        let mut pieces = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut coef = c.clone();
            let mut rest = *m;
            for (i, val) in point.iter().enumerate() {
                if let Some(val) = val {
                    let e = m.exps[i] as u32;
                    if e > 0 {
                        coef *= val.pow(e);
                        rest = rest.without(i);
                    }
                }
            }
            pieces.push((rest, coef));
        }
        Ok(MultiPoly {
            ctx: self.ctx.clone(),
            terms: normalize(pieces),
        })
    }

    /// `den^d * p(v = num/den)` where `d = degree_in(v)`; clears the
    /// denominator of a rational-function substitution.
    pub fn substitute_fraction(&self, v: &str, num: &MultiPoly, den: &MultiPoly) -> Result<Self> {
        self.check_ctx(num)?;
        self.check_ctx(den)?;
        let d = self.degree_in(v)?.max(0) as u32;
        let mut acc = MultiPoly::zero(&self.ctx);
        for k in 0..=d {
            let ck = self.coefficient_of(v, k)?;
            if ck.is_zero() {
                continue;
            }
            acc = acc.merge(&ck.mul_unchecked(&num.pow(k)).mul_unchecked(&den.pow(d - k)), false);
        }
        Ok(acc)
    }

    /// Replace every variable `x_i` by `images[i]` (all in `target`).
    pub fn compose(&self, target: &Context, images: &[MultiPoly]) -> Result<Self> {
        if images.len() != self.ctx.len() {
            return Err(Error::BadContext(format!(
                "compose needs {} images, got {}",
                self.ctx.len(),
                images.len()
            )));
        }
        if let Some(bad) = images.iter().find(|p| p.ctx != *target) {
            return Err(Error::ContextMismatch {
                left: target.names().to_vec(),
                right: bad.ctx.names().to_vec(),
            });
        }
        let mut caches: Vec<Vec<MultiPoly>> = vec![vec![MultiPoly::one(target)]; images.len()];
        let mut pieces = Vec::new();
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(target, c.clone());
            for (i, img) in images.iter().enumerate() {
                let e = m.exps[i] as usize;
                if e == 0 {
                    continue;
                }
                while caches[i].len() <= e {
                    let next = caches[i].last().unwrap().mul_unchecked(img);
                    caches[i].push(next);
                }
                t = t.mul_unchecked(&caches[i][e]);
            }
            pieces.extend(t.terms);
        }
        Ok(MultiPoly {
            ctx: target.clone(),
            terms: normalize(pieces),
        })
    }

    /// Re-express in a context that contains all variables of this one.
    pub fn embed(&self, target: &Context) -> Result<Self> {
        let images = self
            .ctx
            .names()
            .iter()
            .map(|n| MultiPoly::var(target, n))
            .collect::<Result<Vec<_>>>()?;
        self.compose(target, &images)
    }

    /// Exact value with every variable assigned by name.
    pub fn eval(&self, point: &HashMap<String, Rational>) -> Result<Rational> {
        let values = self
            .ctx
            .names()
            .iter()
            .enumerate()
            .map(|(i, n)| {
                let used = self.terms.iter().any(|(m, _)| m.exps[i] > 0);
                match point.get(n) {
                    Some(v) => Ok(v.clone()),
                    None if !used => Ok(Rational::zero()),
                    None => Err(Error::MissingAssignment(n.clone())),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        self.eval_at(&values)
    }

    /// Exact value at a point given positionally in context order.
    pub fn eval_at(&self, values: &[Rational]) -> Result<Rational> {
        if values.len() != self.ctx.len() {
            return Err(Error::BadContext(format!(
                "point has {} coordinates, context has {}",
                values.len(),
                self.ctx.len()
            )));
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, v) in values.iter().enumerate() {
                let e = m.exps[i] as u32;
                if e > 0 {
                    t *= v.pow(e);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Symmetric coefficient table of a homogeneous quadratic form:
    /// `t[i][i]` is the coefficient of `x_i^2`, `t[i][j] = t[j][i]` the
    /// coefficient of `x_i x_j`.
    pub fn quadratic_table(&self) -> Result<QuadTable> {
        if !self.is_homogeneous(2) {
            return Err(Error::NotHomogeneousQuadratic);
        }
        let n = self.ctx.len();
        let mut t = vec![vec![Rational::zero(); n]; n];
        for (m, c) in &self.terms {
            let idx: Vec<usize> = (0..n).filter(|&i| m.exps[i] > 0).collect();
            match idx.as_slice() {
                [i] => t[*i][*i] = c.clone(),
                [i, j] => {
                    t[*i][*j] = c.clone();
                    t[*j][*i] = c.clone();
                }
                _ => unreachable!("degree-2 monomial"),
            }
        }
        Ok(QuadTable(t))
    }

    /// Make the leading coefficient positive; pairs `(p, -p)` collapse.
    pub fn sign_normalized(&self) -> Self {
        match self.terms.first() {
            Some((_, c)) if c.is_negative() => -self.clone(),
            _ => self.clone(),
        }
    }

    /// Parse a polynomial written with `+ - * ^ ( )`, integer or `p/q`
    /// literals, and variable names from `ctx`.
    pub fn parse(ctx: &Context, src: &str) -> Result<Self> {
        parse::Parser::new(ctx, src)?.parse_all()
    }
}

/// Symmetric coefficient table of a quadratic form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadTable(pub Vec<Vec<Rational>>);

impl QuadTable {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.0[i][j]
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        let n = self.dim();
        let mut acc = Rational::zero();
        for i in 0..n {
            acc += &self.0[i][i] * &x[i] * &x[i];
            for j in i + 1..n {
                acc += &self.0[i][j] * &x[i] * &x[j];
            }
        }
        acc
    }
}

/// Recover a quadratic form from black-box evaluations:
/// `c_ii = f(e_i)` and `c_ij = f(e_i + e_j) - f(e_i) - f(e_j)`.
///
/// `f` is checked at a few pseudo-random integer points for `f(2x) = 4 f(x)`
/// and for agreement with the recovered table.
pub fn quadratic_form_coeffs(f: impl Fn(&[Rational]) -> Rational, n: usize) -> Result<QuadTable> {
    let unit = |idx: &[usize]| -> Vec<Rational> {
        (0..n)
            .map(|k| {
                if idx.contains(&k) {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect()
    };
    let diag: Vec<Rational> = (0..n).map(|i| f(&unit(&[i]))).collect();
    let mut t = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        t[i][i] = diag[i].clone();
        for j in i + 1..n {
            let c = f(&unit(&[i, j])) - &diag[i] - &diag[j];
            t[i][j] = c.clone();
            t[j][i] = c;
        }
    }
    let table = QuadTable(t);
    let mut rng = XorShift64Star::new(0x5155_4144 ^ n as u64);
    for _ in 0..3 {
        let x: Vec<Rational> = (0..n).map(|_| Rational::from(rng.range_i64(-9, 9))).collect();
        let x2: Vec<Rational> = x.iter().map(|v| v * &Rational::from(2)).collect();
        let fx = f(&x);
        if f(&x2) != &fx * &Rational::from(4) || table.eval(&x) != fx {
            return Err(Error::NotHomogeneousQuadratic);
        }
    }
    Ok(table)
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let vars: Vec<String> = (0..self.ctx.len())
                .filter(|&i| m.exps[i] > 0)
                .map(|i| match m.exps[i] {
                    1 => self.ctx.names()[i].clone(),
                    e => format!("{}^{}", self.ctx.names()[i], e),
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{abs}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        self.checked_add(&rhs).expect("polynomial context mismatch")
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        self.checked_sub(&rhs).expect("polynomial context mismatch")
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        self.checked_mul(&rhs).expect("polynomial context mismatch")
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.checked_add(rhs).expect("polynomial context mismatch")
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.checked_sub(rhs).expect("polynomial context mismatch")
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.checked_mul(rhs).expect("polynomial context mismatch")
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(mut self) -> MultiPoly {
        for (_, c) in &mut self.terms {
            *c = -&*c;
        }
        self
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -self.clone()
    }
}

impl Ring for MultiPoly {
    fn zero_like(&self) -> Self {
        MultiPoly::zero(&self.ctx)
    }
    fn one_like(&self) -> Self {
        MultiPoly::one(&self.ctx)
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

mod parse {
    use super::*;
    use num_bigint::BigInt;

    #[derive(Debug, Clone, PartialEq)]
    enum Tok {
        Num(BigInt),
        Ident(String),
        Op(char),
    }

    pub(super) struct Parser<'c> {
        ctx: &'c Context,
        toks: Vec<Tok>,
        pos: usize,
    }

    fn err(msg: impl Into<String>) -> Error {
        Error::Parse {
            line: 1,
            msg: msg.into(),
        }
    }

    impl<'c> Parser<'c> {
        pub(super) fn new(ctx: &'c Context, src: &str) -> Result<Self> {
            let chars: Vec<char> = src.chars().collect();
            let mut toks = Vec::new();
            let mut i = 0;
            while i < chars.len() {
                let c = chars[i];
                if c.is_whitespace() {
                    i += 1;
                } else if c.is_ascii_digit() {
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let s: String = chars[start..i].iter().collect();
                    toks.push(Tok::Num(s.parse().map_err(|_| err("bad number"))?));
                } else if c.is_ascii_alphabetic() || c == '_' {
                    let start = i;
                    while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                        i += 1;
                    }
                    toks.push(Tok::Ident(chars[start..i].iter().collect()));
                } else if "+-*^/()".contains(c) {
                    toks.push(Tok::Op(c));
                    i += 1;
                } else if c == '\u{2212}' {
                    toks.push(Tok::Op('-'));
                    i += 1;
                } else {
                    return Err(err(format!("unexpected character `{c}`")));
                }
            }
            Ok(Parser { ctx, toks, pos: 0 })
        }

        fn peek(&self) -> Option<&Tok> {
            self.toks.get(self.pos)
        }

        fn eat(&mut self, op: char) -> bool {
            if self.peek() == Some(&Tok::Op(op)) {
                self.pos += 1;
                true
            } else {
                false
            }
        }

        pub(super) fn parse_all(mut self) -> Result<MultiPoly> {
            let p = self.expr()?;
            if self.pos != self.toks.len() {
                return Err(err(format!("trailing input at token {}", self.pos)));
            }
            Ok(p)
        }

        fn expr(&mut self) -> Result<MultiPoly> {
            let mut acc = if self.eat('-') {
                -self.term()?
            } else {
                self.eat('+');
                self.term()?
            };
            loop {
                if self.eat('+') {
                    acc = &acc + &self.term()?;
                } else if self.eat('-') {
                    acc = &acc - &self.term()?;
                } else {
                    return Ok(acc);
                }
            }
        }

        fn term(&mut self) -> Result<MultiPoly> {
            let mut acc = self.factor()?;
            while self.eat('*') {
                acc = &acc * &self.factor()?;
            }
            Ok(acc)
        }

        fn factor(&mut self) -> Result<MultiPoly> {
            let base = self.atom()?;
            if self.eat('^') {
                match self.toks.get(self.pos) {
                    Some(Tok::Num(n)) => {
                        let e: u32 = n.try_into().map_err(|_| err("exponent too large"))?;
                        self.pos += 1;
                        Ok(base.pow(e))
                    }
                    _ => Err(err("expected exponent")),
                }
            } else {
                Ok(base)
            }
        }

        fn atom(&mut self) -> Result<MultiPoly> {
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    if self.eat('/') {
                        match self.toks.get(self.pos).cloned() {
                            Some(Tok::Num(d)) if d != BigInt::from(0) => {
                                self.pos += 1;
                                Ok(MultiPoly::constant(self.ctx, Rational::new(n, d)))
                            }
                            _ => Err(err("expected nonzero denominator")),
                        }
                    } else {
                        Ok(MultiPoly::constant(self.ctx, Rational::from_integer(n)))
                    }
                }
                Some(Tok::Ident(name)) => {
                    self.pos += 1;
                    MultiPoly::var(self.ctx, &name)
                }
                Some(Tok::Op('(')) => {
                    self.pos += 1;
                    let inner = self.expr()?;
                    if !self.eat(')') {
                        return Err(err("expected `)`"));
                    }
                    Ok(inner)
                }
                Some(Tok::Op('-')) => {
                    self.pos += 1;
                    Ok(-self.factor()?)
                }
                other => Err(err(format!("unexpected token {other:?}"))),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use proptest::prelude::*;

    fn xy() -> Context {
        Context::letters("xy")
    }

    fn p(ctx: &Context, s: &str) -> MultiPoly {
        MultiPoly::parse(ctx, s).unwrap()
    }

    #[test]
    fn ring_basics() {
        let c = xy();
        let (x, y) = (c.var("x").unwrap(), c.var("y").unwrap());
        assert_eq!(&(&x + &y) * &(&x - &y), p(&c, "x^2 - y^2"));
        assert!((&x - &x).is_zero());
        let big = Context::letters("pqrstuvw");
        let lhs = p(&big, "p + q + t + u");
        let rhs = p(&big, "r + s + v + w");
        assert_eq!((&lhs * &rhs).term_count(), 16);
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let a = MultiPoly::var(&xy(), "x").unwrap();
        let b = MultiPoly::var(&Context::letters("xz"), "x").unwrap();
        assert!(matches!(a.checked_add(&b), Err(Error::ContextMismatch { .. })));
        assert!(Context::new(&["x", "x"]).is_err());
    }

    #[test]
    fn too_many_variables() {
        let names: Vec<String> = (0..17).map(|i| format!("x{i}")).collect();
        assert!(matches!(Context::new(&names), Err(Error::BadContext(_))));
    }

    #[test]
    fn degrees_and_coefficients() {
        let c = Context::letters("xw");
        assert_eq!(p(&c, "w^2 + w").degree_in("w").unwrap(), 2);
        assert_eq!(p(&c, "7").degree_in("w").unwrap(), 0);
        assert_eq!(MultiPoly::zero(&c).degree_in("w").unwrap(), -1);
        assert!(matches!(p(&c, "x").degree_in("z"), Err(Error::UnknownVariable(_))));
        assert!(p(&c, "x^2 + 1").coefficient_of("x", 1).unwrap().is_zero());
        assert_eq!(
            p(&c, "3*x^2*w + x^2 - w").coefficient_of("x", 2).unwrap(),
            p(&c, "3*w + 1")
        );
    }

    #[test]
    fn substitution() {
        let c = xy();
        let f = p(&c, "x^2 + y");
        assert_eq!(f.substitute_value("x", &rat(2, 1)).unwrap(), p(&c, "4 + y"));
        assert_eq!(f.substitute("y", &p(&c, "y")).unwrap(), f);
        assert_eq!(f.substitute("x", &p(&c, "x + y")).unwrap(), p(&c, "x^2 + 2*x*y + y^2 + y"));
        assert_eq!(
            f.specialize(&[("x", rat(1, 2)), ("y", rat(3, 1))]).unwrap(),
            MultiPoly::constant(&c, rat(13, 4))
        );
    }

    #[test]
    fn substitute_fraction_clears_denominator() {
        let c = xy();
        // x^2 + 1 at x = y/2, times 2^2
        let r = p(&c, "x^2 + 1")
            .substitute_fraction("x", &p(&c, "y"), &p(&c, "2"))
            .unwrap();
        assert_eq!(r, p(&c, "y^2 + 4"));
    }

    #[test]
    fn eval_by_name() {
        let c = xy();
        let f = p(&c, "x^2 + y");
        let pt: HashMap<String, Rational> =
            [("x".to_string(), rat(3, 1)), ("y".to_string(), rat(1, 1))].into();
        assert_eq!(f.eval(&pt).unwrap(), rat(10, 1));
        assert_eq!(MultiPoly::zero(&c).eval(&HashMap::new()).unwrap(), Rational::zero());
        let missing: HashMap<String, Rational> = [("x".to_string(), rat(1, 1))].into();
        assert!(matches!(f.eval(&missing), Err(Error::MissingAssignment(v)) if v == "y"));
    }

    #[test]
    fn compose_and_embed() {
        let src = Context::letters("ab");
        let dst = Context::letters("xyz");
        let f = p(&src, "a*b - b^2");
        let images = vec![p(&dst, "x + z"), p(&dst, "y")];
        assert_eq!(f.compose(&dst, &images).unwrap(), p(&dst, "x*y + y*z - y^2"));
        let e = p(&src, "a - 2*b").embed(&Context::letters("bca")).unwrap();
        assert_eq!(e, p(&Context::letters("bca"), "a - 2*b"));
        assert!(p(&src, "a").embed(&dst).is_err());
    }

    #[test]
    fn quadratic_form_recovery() {
        let t = quadratic_form_coeffs(|x| &x[0] * &x[0] + &Rational::from(3) * &x[0] * &x[1], 2).unwrap();
        assert_eq!(t.get(0, 0), &rat(1, 1));
        assert_eq!(t.get(0, 1), &rat(3, 1));
        assert_eq!(t.get(1, 1), &Rational::zero());
        let z = quadratic_form_coeffs(|_| Rational::zero(), 3).unwrap();
        assert!(z.0.iter().flatten().all(Rational::is_zero));
        assert!(matches!(
            quadratic_form_coeffs(|x| x[0].clone(), 2),
            Err(Error::NotHomogeneousQuadratic)
        ));
        assert!(quadratic_form_coeffs(|x| x[0].pow(4), 1).is_err());
    }

    #[test]
    fn rendering() {
        let c = Context::letters("qtu");
        let f = p(&c, "3*q^2*t - 7/2*u");
        assert_eq!(f.to_string(), "3*q^2*t - 7/2*u");
        assert_eq!(p(&c, "-u + 1 - q").to_string(), "-q - u + 1");
        assert_eq!(MultiPoly::zero(&c).to_string(), "0");
        assert!(MultiPoly::parse(&c, "q +").is_err());
        assert!(MultiPoly::parse(&c, "z").is_err());
        assert!(MultiPoly::parse(&c, "1/0").is_err());
    }

    fn arb_poly() -> impl Strategy<Value = MultiPoly> {
        let ctx = Context::letters("xyz");
        prop::collection::vec(((0u32..3, 0u32..3, 0u32..3), -20i64..20, 1i64..4), 0..6).prop_map(
            move |ts| {
                MultiPoly::from_terms(
                    &ctx,
                    ts.into_iter()
                        .map(|((a, b, c), n, d)| (Monomial::from_exponents(&[a, b, c]), rat(n, d))),
                )
            },
        )
    }

    fn arb_point() -> impl Strategy<Value = Vec<Rational>> {
        prop::collection::vec((-5i64..5, 1i64..4), 3).prop_map(|v| v.into_iter().map(|(a, b)| rat(a, b)).collect())
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn eval_is_a_homomorphism(a in arb_poly(), b in arb_poly(), x in arb_point()) {
            let ab = (&a * &b).eval_at(&x).unwrap();
            prop_assert_eq!(ab, a.eval_at(&x).unwrap() * b.eval_at(&x).unwrap());
            let s = (&a + &b).eval_at(&x).unwrap();
            prop_assert_eq!(s, a.eval_at(&x).unwrap() + b.eval_at(&x).unwrap());
        }

        #[test]
        fn render_parse_round_trip(a in arb_poly()) {
            let back = MultiPoly::parse(a.context(), &a.to_string()).unwrap();
            prop_assert_eq!(back, a);
        }

        #[test]
        fn blackbox_recovers_symbolic_table(coeffs in prop::collection::vec(-9i64..9, 6)) {
            let ctx = Context::letters("xyz");
            let vars = ctx.vars();
            let mut q = MultiPoly::zero(&ctx);
            let mut k = 0;
            for i in 0..3 {
                for j in i..3 {
                    q = &q + &(&vars[i] * &vars[j]).scale(&Rational::from(coeffs[k]));
                    k += 1;
                }
            }
            let recovered = quadratic_form_coeffs(|x| q.eval_at(x).unwrap(), 3).unwrap();
            prop_assert_eq!(recovered, q.quadratic_table().unwrap());
        }
    }
}
