//! The 8x8 construction `M = L(a, ..., h) R(p, ..., w)`.
//!
//! For a fixed integer left tuple, `M M^t = gamma I` holds identically, so
//! `M` is Euler magic exactly when the quadratic forms
//!
//! ```text
//! A = sum m_ii^2 - sum m_i,9-i^2
//! B = sum m_ii^2 + sum m_i,9-i^2 - 2 gamma
//! ```
//!
//! vanish. Under `h = +-a != 0` and `b^2 + ... + g^2 = 6 a^2` both are linear
//! in `w`, so `F = yA - xB` (with `x`, `y` the `w`-coefficients) is free of
//! `w`, has no `p^3` term, and its `p^2` coefficient is a linear form in
//! `q, ..., v`. Solving that form, then `F` for `p`, then `A` for `w` gives
//! rational points.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::format::entries_json;
use crate::matrix::{IntMatrix, Matrix, RatMatrix};
use crate::octonion::{self, OctParams, LEFT_NAMES, RIGHT_NAMES};
use crate::poly::{quadratic_form_coeffs, Context, MultiPoly, QuadTable};
use crate::rational::Rational;
use crate::verify::{verify, Position, VerifyJson, VerifyReport};

pub type IntParams = OctParams<i64>;

pub fn rational_params(x: &IntParams) -> OctParams<Rational> {
    x.map(|&v| Rational::from(v))
}

/// `L(left) R(p, ..., w)` over [`octonion::right_context`].
pub fn symbolic_product(left: &IntParams) -> Matrix<MultiPoly> {
    let ctx = octonion::right_context();
    let l = rational_params(left).to_poly(&ctx);
    let r = OctParams::symbolic(&ctx, RIGHT_NAMES).expect("right names are in context");
    octonion::product(&l, &r)
}

fn diag_sums<T: crate::matrix::Ring>(m: &Matrix<T>) -> (T, T) {
    let n = m.rows();
    let sq = |x: &T| x.clone() * x.clone();
    let mut diag = sq(m.get(0, 0));
    let mut anti = sq(m.get(0, n - 1));
    for i in 1..n {
        diag = diag + sq(m.get(i, i));
        anti = anti + sq(m.get(i, n - 1 - i));
    }
    (diag, anti)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagForms {
    pub a: MultiPoly,
    pub b: MultiPoly,
    pub left: IntParams,
}

impl DiagForms {
    /// Builds `A` and `B` symbolically without the oracle comparison.
    pub fn build(left: &IntParams) -> Self {
        let m = symbolic_product(left);
        let ctx = m.get(0, 0).context().clone();
        let r = OctParams::symbolic(&ctx, RIGHT_NAMES).expect("right names are in context");
        let left_sq: i64 = left.0.iter().map(|v| v * v).sum();
        let gamma = octonion::sum_of_squares(&r).scale(&Rational::from(left_sq));
        let (diag, anti) = diag_sums(&m);
        let a = &diag - &anti;
        let b = &(&diag + &anti) - &gamma.scale(&Rational::from(2));
        DiagForms {
            a,
            b,
            left: left.clone(),
        }
    }

    pub fn context(&self) -> &Context {
        self.a.context()
    }
}

/// `A` and `B` for `left`, checked to be homogeneous quadratics equal to
/// the forms recovered from numeric evaluations of `L R`.
pub fn diag_forms(left: &IntParams) -> Result<DiagForms> {
    let forms = DiagForms::build(left);
    if !forms.a.is_homogeneous(2) || !forms.b.is_homogeneous(2) {
        return Err(Error::Postcondition("A or B is not a quadratic form".into()));
    }
    let (ta, tb) = oracle_tables(left)?;
    if forms.a.quadratic_table()? != ta || forms.b.quadratic_table()? != tb {
        return Err(Error::Postcondition(
            "symbolic forms disagree with numeric recovery".into(),
        ));
    }
    Ok(forms)
}

/// Coefficient tables of `A` and `B` recovered from numeric products only.
pub fn oracle_tables(left: &IntParams) -> Result<(QuadTable, QuadTable)> {
    let l = rational_params(left);
    let numeric = |x: &[Rational]| {
        let r = OctParams(std::array::from_fn(|i| x[i].clone()));
        let m = octonion::product(&l, &r);
        let (diag, anti) = diag_sums(&m);
        (diag, anti, octonion::gamma(&l, &r))
    };
    let ta = quadratic_form_coeffs(
        |x| {
            let (d, a, _) = numeric(x);
            d - a
        },
        8,
    )?;
    let tb = quadratic_form_coeffs(
        |x| {
            let (d, a, g) = numeric(x);
            d + a - g * Rational::from(2)
        },
        8,
    )?;
    Ok((ta, tb))
}

/// `h = +-a != 0` and `b^2 + c^2 + d^2 + e^2 + f^2 + g^2 = 6 a^2`.
pub fn w1_check(left: &IntParams) -> bool {
    let [a, b, c, d, e, f, g, h] = left.0;
    let six: i64 = [b, c, d, e, f, g].iter().map(|v| v * v).sum();
    a != 0 && (h == a || h == -a) && six == 6 * a * a
}

/// A left tuple satisfying [`w1_check`] with coprime entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct W1Tuple([i64; 8]);

impl W1Tuple {
    pub fn new(values: [i64; 8]) -> Result<Self> {
        let params = OctParams(values);
        if !w1_check(&params) || values.iter().fold(0i64, |g, v| g.gcd(v)) != 1 {
            return Err(Error::NotW1);
        }
        Ok(W1Tuple(values))
    }

    pub fn values(&self) -> [i64; 8] {
        self.0
    }

    pub fn params(&self) -> IntParams {
        OctParams(self.0)
    }
}

/// All primitive W1 tuples with `1 <= a <= a_max`, ordered by `a`, then
/// `h = a` before `h = -a`, then `(b, ..., g)` lexicographically.
pub fn enumerate_w1(a_max: i64) -> Vec<W1Tuple> {
    let mut out = Vec::new();
    for a in 1..=a_max {
        let target = 6 * a * a;
        let bound = (target as f64).sqrt().floor() as i64;
        let mut sixes = Vec::new();
        let mut cur = [0i64; 6];
        six_squares(0, target, bound, &mut cur, &mut sixes);
        for h in [a, -a] {
            for s in &sixes {
                let v = [a, s[0], s[1], s[2], s[3], s[4], s[5], h];
                if v.iter().fold(0i64, |g, x| g.gcd(x)) == 1 {
                    out.push(W1Tuple(v));
                }
            }
        }
    }
    out
}

fn six_squares(pos: usize, remaining: i64, bound: i64, cur: &mut [i64; 6], out: &mut Vec<[i64; 6]>) {
    if pos == 6 {
        if remaining == 0 {
            out.push(*cur);
        }
        return;
    }
    // Remaining positions can absorb at most (6 - pos) * bound^2.
    if remaining > (6 - pos) as i64 * bound * bound {
        return;
    }
    for v in -bound..=bound {
        let sq = v * v;
        if sq > remaining {
            continue;
        }
        cur[pos] = v;
        six_squares(pos + 1, remaining - sq, bound, cur, out);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Elimination {
    /// `yA - xB`, free of `w`.
    pub f: MultiPoly,
    /// `w`-coefficient of `A`.
    pub x: MultiPoly,
    /// `w`-coefficient of `B`.
    pub y: MultiPoly,
}

pub fn eliminate_w(forms: &DiagForms) -> Result<Elimination> {
    for (name, form) in [("A", &forms.a), ("B", &forms.b)] {
        let degree = form.degree_in("w")?;
        if degree > 1 {
            return Err(Error::WDegreeTooHigh { form: name, degree });
        }
    }
    let x = forms.a.coefficient_of("w", 1)?;
    let y = forms.b.coefficient_of("w", 1)?;
    let f = &(&y * &forms.a) - &(&x * &forms.b);
    if f.degree_in("w")? > 0 {
        return Err(Error::Postcondition("F still depends on w".into()));
    }
    if w1_check(&forms.left) && f.degree_in("p")? > 2 {
        return Err(Error::Postcondition("F has a p^3 term".into()));
    }
    Ok(Elimination { f, x, y })
}

/// `(ag+bh) q + (-af+ch) r + (-ae+dh) s + (ad+eh) t + (ac+fh) u + (-ab+gh) v`;
/// for W1 tuples the `p^2` coefficient of `F` is `-128 h^2` times this.
pub fn p2_linear_form(left: &IntParams) -> MultiPoly {
    let [a, b, c, d, e, f, g, h] = left.0;
    let coeffs = [
        ("q", a * g + b * h),
        ("r", -a * f + c * h),
        ("s", -a * e + d * h),
        ("t", a * d + e * h),
        ("u", a * c + f * h),
        ("v", -a * b + g * h),
    ];
    let ctx = octonion::right_context();
    coeffs.iter().fold(MultiPoly::zero(&ctx), |acc, (name, k)| {
        acc + MultiPoly::var(&ctx, name)
            .expect("right variable")
            .scale(&Rational::from(*k))
    })
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    /// Variable eliminated in the first step, `'q'` or `'v'`.
    pub pivot: char,
    pub right: OctParams<Rational>,
    pub matrix: RatMatrix,
    pub primitive: IntMatrix,
    pub report: VerifyReport,
}

/// Variables the caller supplies to [`solve_chain`] for a given pivot.
/// `s` may be omitted and then defaults to `1`.
pub fn free_variables(pivot: char) -> [char; 5] {
    if pivot == 'q' {
        ['r', 's', 't', 'u', 'v']
    } else {
        ['q', 'r', 's', 't', 'u']
    }
}

/// `'q'` when `ag + bh != 0`, else `'v'`.
pub fn chain_pivot(left: &W1Tuple) -> char {
    let [a, b, .., g, h] = left.0;
    if a * g + b * h != 0 {
        'q'
    } else {
        'v'
    }
}

fn as_pairs(vals: &[(String, Rational)]) -> Vec<(&str, Rational)> {
    vals.iter().map(|(n, v)| (n.as_str(), v.clone())).collect()
}

/// Runs the four-step procedure: pivot from the `p^2` form, `p` from `F`,
/// `w` from `A`, then an exact back-check and [`verify`].
pub fn solve_chain(left: &W1Tuple, free: &BTreeMap<char, Rational>) -> Result<SolveOutcome> {
    let params = left.params();
    let forms = DiagForms::build(&params);
    let elim = eliminate_w(&forms)?;
    let pivot = chain_pivot(left);
    let needed = free_variables(pivot);
    for k in free.keys() {
        if !needed.contains(k) {
            return Err(Error::InvalidConfig(format!("`{k}` is not a free variable here")));
        }
    }
    let mut values: Vec<(String, Rational)> = Vec::new();
    for v in needed {
        let val = match free.get(&v) {
            Some(x) => x.clone(),
            None if v == 's' => Rational::one(),
            None => return Err(Error::InvalidConfig(format!("missing value for `{v}`"))),
        };
        values.push((v.to_string(), val));
    }

    // Step 1: the p^2 coefficient of F is linear in q..v.
    let lin = elim.f.coefficient_of("p", 2)?.specialize(&as_pairs(&values))?;
    let pivot_name = pivot.to_string();
    let k = lin.coefficient_of(&pivot_name, 1)?.as_constant().unwrap_or_default();
    if k.is_zero() {
        return Err(Error::Degenerate {
            step: "pivot",
            reason: "pivot coefficient zero",
        });
    }
    let rest = lin.coefficient_of(&pivot_name, 0)?.as_constant().ok_or(Error::Postcondition(
        "p^2 form is not linear in the pivot".into(),
    ))?;
    values.push((pivot_name, -rest / k));

    // Step 2: F is now linear in p.
    let fp = elim.f.specialize(&as_pairs(&values))?;
    if fp.degree_in("p")? > 1 {
        return Err(Error::Postcondition("F kept a p^2 term after step 1".into()));
    }
    let f1 = fp.coefficient_of("p", 1)?.as_constant().unwrap_or_default();
    let f0 = fp.coefficient_of("p", 0)?.as_constant().unwrap_or_default();
    if f1.is_zero() {
        return Err(Error::Degenerate {
            step: "solve-p",
            reason: "p-coefficient zero",
        });
    }
    values.push(("p".into(), -f0 / f1));

    // Step 3: A is linear in w.
    let aw = forms.a.specialize(&as_pairs(&values))?;
    let x1 = aw.coefficient_of("w", 1)?.as_constant().unwrap_or_default();
    let x0 = aw.coefficient_of("w", 0)?.as_constant().unwrap_or_default();
    if x1.is_zero() {
        return Err(Error::Degenerate {
            step: "solve-w",
            reason: "w-coefficient zero",
        });
    }
    values.push(("w".into(), -x0 / x1));

    // Step 4: exact back-check.
    let lookup: HashMap<String, Rational> = values.into_iter().collect();
    let right = OctParams(RIGHT_NAMES.map(|n| lookup[n].clone()));
    if !forms.a.eval(&lookup)?.is_zero() || !forms.b.eval(&lookup)?.is_zero() {
        return Err(Error::Postcondition("A = B = 0 fails at the solved point".into()));
    }
    let matrix = octonion::product(&rational_params(&params), &right);
    let primitive = matrix.rescale_primitive()?;
    let report = verify(&primitive.to_rational())?;
    if !report.is_euler_magic {
        return Err(Error::Postcondition("solved matrix is not Euler magic".into()));
    }
    Ok(SolveOutcome {
        pivot,
        right,
        matrix,
        primitive,
        report,
    })
}

pub const FAMILY_LEFT: [i64; 8] = [2, 1, 1, 4, 2, 1, 1, -2];

/// `7q^2 + 7r^2 + 21qt - 7rt + 34t^2 - 7qu - 21tu + 4u^2 + 7q + 21r - 7u + 34`.
pub fn family_x(q: &Rational, r: &Rational, t: &Rational, u: &Rational) -> Rational {
    let c = |k: i64| Rational::from(k);
    c(7) * q * q + c(7) * r * r + c(21) * q * t - c(7) * r * t + c(34) * t * t
        - c(7) * q * u
        - c(21) * t * u
        + c(4) * u * u
        + c(7) * q
        + c(21) * r
        - c(7) * u
        + c(34)
}

#[derive(Debug, Clone)]
pub struct FamilyResult {
    pub params: [Rational; 4],
    pub x: Rational,
    pub right: OctParams<Rational>,
    pub matrix: RatMatrix,
    pub primitive: IntMatrix,
    pub report: VerifyReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyJson {
    pub params: BTreeMap<String, String>,
    #[serde(rename = "X")]
    pub x: String,
    pub right: Vec<String>,
    pub matrix: Vec<Vec<String>>,
    pub report: VerifyJson,
}

impl FamilyResult {
    pub fn to_json(&self) -> FamilyJson {
        FamilyJson {
            params: ["q", "r", "t", "u"]
                .iter()
                .zip(&self.params)
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
            x: self.x.to_string(),
            right: self.right.0.iter().map(ToString::to_string).collect(),
            matrix: entries_json(&self.primitive),
            report: self.report.to_json(),
        }
    }
}

/// Right tuple of the four-parameter family:
/// `(3(t^2-1)u/(2X), q, r, 1, t, u-q-3t-1, t-r-3, (u^2-X)/(2u))`.
pub fn family_right(q: &Rational, r: &Rational, t: &Rational, u: &Rational) -> Result<(Rational, OctParams<Rational>)> {
    let x = family_x(q, r, t, u);
    if x.is_zero() {
        return Err(Error::DegenerateParameter("X = 0".into()));
    }
    if u.is_zero() {
        return Err(Error::DegenerateParameter("u = 0".into()));
    }
    let one = Rational::one();
    let two = Rational::from(2);
    let three = Rational::from(3);
    let right = OctParams([
        &three * &(t * t - &one) * u / (&two * &x),
        q.clone(),
        r.clone(),
        one.clone(),
        t.clone(),
        u - q - &three * t - &one,
        t - r - three,
        (u * u - &x) / (two * u),
    ]);
    Ok((x, right))
}

pub fn theorem_family(q: &Rational, r: &Rational, t: &Rational, u: &Rational) -> Result<FamilyResult> {
    let (x, right) = family_right(q, r, t, u)?;
    let matrix = octonion::product(&rational_params(&OctParams(FAMILY_LEFT)), &right);
    let primitive = matrix.rescale_primitive()?;
    let report = verify(&matrix)?;
    Ok(FamilyResult {
        params: [q.clone(), r.clone(), t.clone(), u.clone()],
        x,
        right,
        matrix,
        primitive,
        report,
    })
}

/// Symbolic check of the family over `Q(q, r, t, u)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySymbolicCheck {
    pub a_vanishes: bool,
    pub b_vanishes: bool,
    /// No two entries of the cleared matrix agree up to sign.
    pub proper: bool,
}

/// Scales the right tuple by `4Xu` to clear denominators, substitutes it
/// into `A` and `B` (homogeneous, so only a square factor appears), and
/// compares the entries of the resulting polynomial matrix.
pub fn theorem_family_symbolic() -> Result<FamilySymbolicCheck> {
    let ctx = Context::letters("qrtu");
    let p = |s: &str| MultiPoly::parse(&ctx, s).expect("fixed text parses");
    let x = p("7*q^2 + 7*r^2 + 21*q*t - 7*r*t + 34*t^2 - 7*q*u - 21*t*u + 4*u^2 + 7*q + 21*r - 7*u + 34");
    let k = &x * &p("4*u");
    let images = [
        p("6*(t^2 - 1)*u^2"),
        &k * &p("q"),
        &k * &p("r"),
        k.clone(),
        &k * &p("t"),
        &k * &p("u - q - 3*t - 1"),
        &k * &p("t - r - 3"),
        &(&x * &p("2")) * &(&p("u^2") - &x),
    ];
    let forms = DiagForms::build(&OctParams(FAMILY_LEFT));
    let a = forms.a.compose(&ctx, &images)?;
    let b = forms.b.compose(&ctx, &images)?;
    let l = rational_params(&OctParams(FAMILY_LEFT)).to_poly(&ctx);
    let m = octonion::product(&l, &OctParams(images));
    Ok(FamilySymbolicCheck {
        a_vanishes: a.is_zero(),
        b_vanishes: b.is_zero(),
        proper: identical_pairs(&m).is_empty(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum WitnessKind {
    /// `m_ij - m_kl`
    Difference,
    /// `m_ij + m_kl`
    Sum,
}

/// A linear form in the entries whose vanishing makes two squares equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub first: Position,
    pub second: Position,
    pub kind: WitnessKind,
    pub form: MultiPoly,
}

/// `m_first -+ m_second` for 1-based positions.
pub fn witness_form(m: &Matrix<MultiPoly>, first: Position, second: Position, kind: WitnessKind) -> MultiPoly {
    let x = m.get(first.0 - 1, first.1 - 1);
    let y = m.get(second.0 - 1, second.1 - 1);
    match kind {
        WitnessKind::Difference => x - y,
        WitnessKind::Sum => x + y,
    }
}

/// The same form in the fully symbolic product over `a, ..., h, p, ..., w`.
pub fn symbolic_witness(first: Position, second: Position, kind: WitnessKind) -> MultiPoly {
    let ctx = octonion::full_context();
    let l = OctParams::symbolic(&ctx, LEFT_NAMES).expect("left names");
    let r = OctParams::symbolic(&ctx, RIGHT_NAMES).expect("right names");
    witness_form(&octonion::product(&l, &r), first, second, kind)
}

fn positions(n: usize) -> impl Iterator<Item = (Position, Position)> {
    let all: Vec<Position> = (1..=n).flat_map(|i| (1..=n).map(move |j| (i, j))).collect();
    (0..all.len()).flat_map(move |x| {
        let all = all.clone();
        (x + 1..all.len()).map(move |y| (all[x], all[y]))
    })
}

/// Entry pairs equal up to sign as polynomials, in row-major order.
pub fn identical_pairs(m: &Matrix<MultiPoly>) -> Vec<Witness> {
    let n = m.rows();
    let mut groups: HashMap<MultiPoly, Vec<(Position, bool)>> = HashMap::new();
    for i in 0..n {
        for j in 0..m.cols() {
            let e = m.get(i, j);
            let norm = e.sign_normalized();
            let flipped = norm != *e;
            groups.entry(norm).or_default().push(((i + 1, j + 1), flipped));
        }
    }
    let mut out = Vec::new();
    for members in groups.values() {
        for (x, (p1, f1)) in members.iter().enumerate() {
            for (p2, f2) in &members[x + 1..] {
                let kind = if f1 == f2 {
                    WitnessKind::Difference
                } else {
                    WitnessKind::Sum
                };
                out.push(Witness {
                    first: *p1,
                    second: *p2,
                    kind,
                    form: witness_form(m, *p1, *p2, kind),
                });
            }
        }
    }
    out.sort_by_key(|w| (w.first, w.second));
    out
}

/// Whether the (at most quadratic) `q` vanishes on the zero set of the
/// nonconstant linear form `l`. Two numeric points on `l = 0` filter most
/// forms before the exact substitution.
fn vanishes_on(q: &MultiPoly, l: &MultiPoly) -> bool {
    let ctx = l.context();
    for (idx, name) in ctx.names().iter().enumerate() {
        let c = l.coefficient_of(name, 1).expect("name in context");
        let Some(c) = c.as_constant().filter(|c| !c.is_zero()) else {
            continue;
        };
        for k in 1..=2i64 {
            let mut pt: Vec<Rational> = (0..ctx.len())
                .map(|j| Rational::from(k * (j as i64 + 2) - 3))
                .collect();
            pt[idx] = Rational::zero();
            let rest = l.eval_at(&pt).expect("full point");
            pt[idx] = -rest / &c;
            if !q.eval_at(&pt).expect("full point").is_zero() {
                return false;
            }
        }
        let var = MultiPoly::var(ctx, name).expect("name in context");
        let image = &var - &l.scale(&c.recip().expect("nonzero"));
        return q.substitute(name, &image).expect("same context").is_zero();
    }
    false
}

fn monic(l: &MultiPoly) -> MultiPoly {
    match l.leading() {
        Some((_, c)) => l.scale(&c.recip().expect("leading coefficient is nonzero")),
        None => l.clone(),
    }
}

/// Outcome of the properness analysis of a polynomial matrix `M` with
/// forms `A`, `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyProperness {
    /// Entry pairs equal up to sign identically.
    pub identical: Vec<Witness>,
    /// Witness forms dividing `A` or `B`.
    pub dividing: Vec<Witness>,
    /// Two dividing witnesses whose product is proportional to `A` or `B`:
    /// every zero of that form then makes a witness vanish.
    pub cover: Option<(Witness, Witness)>,
}

impl PolyProperness {
    pub fn is_forced_improper(&self) -> bool {
        !self.identical.is_empty() || self.cover.is_some()
    }
}

/// Properness analysis: identical entry pairs, and linear entry witnesses
/// whose product accounts for all of `A` or `B`.
pub fn polynomial_properness(m: &Matrix<MultiPoly>, a: &MultiPoly, b: &MultiPoly) -> PolyProperness {
    let identical = identical_pairs(m);
    let mut dividing = Vec::new();
    let mut seen: HashMap<MultiPoly, usize> = HashMap::new();
    for (first, second) in positions(m.rows()) {
        for kind in [WitnessKind::Difference, WitnessKind::Sum] {
            let form = witness_form(m, first, second, kind);
            if form.total_degree() != 1 || form.is_constant() {
                continue;
            }
            if [a, b].iter().any(|q| !q.is_zero() && vanishes_on(q, &form)) {
                seen.entry(monic(&form)).or_insert(dividing.len());
                dividing.push(Witness {
                    first,
                    second,
                    kind,
                    form,
                });
            }
        }
    }
    let reps: Vec<&Witness> = {
        let mut idx: Vec<usize> = seen.values().copied().collect();
        idx.sort_unstable();
        idx.into_iter().map(|i| &dividing[i]).collect()
    };
    let mut cover = None;
    'outer: for (x, w1) in reps.iter().enumerate() {
        for w2 in &reps[x..] {
            let prod = monic(&(&w1.form * &w2.form));
            if [a, b].iter().any(|q| !q.is_zero() && monic(q) == prod) {
                cover = Some(((*w1).clone(), (*w2).clone()));
                break 'outer;
            }
        }
    }
    PolyProperness {
        identical,
        dividing,
        cover,
    }
}

/// Witnesses for `L(left) R(p, ..., w)`: entry pairs that agree up to sign
/// identically, followed by linear entry forms dividing `A` or `B`.
pub fn improper_witnesses(left: &IntParams) -> Vec<Witness> {
    let analysis = left_properness(left);
    let mut out = analysis.identical;
    out.extend(analysis.dividing);
    out
}

pub fn left_properness(left: &IntParams) -> PolyProperness {
    let m = symbolic_product(left);
    let forms = DiagForms::build(left);
    polynomial_properness(&m, &forms.a, &forms.b)
}

/// Primitive integer right tuple proportional to `right`, with positive scale.
pub fn primitive_right(right: &OctParams<Rational>) -> Result<OctParams<BigInt>> {
    let m = RatMatrix::new(1, 8, right.0.to_vec())?;
    let p = m.rescale_primitive()?;
    Ok(OctParams(std::array::from_fn(|i| p.get(0, i).clone())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_matrix;
    use crate::rational::rat;
    use crate::rng::XorShift64Star;

    fn thm12() -> RatMatrix {
        parse_matrix(include_str!("../fixtures/thm12_8x8.txt")).unwrap()
    }

    #[test]
    fn all_ones_forms() {
        let forms = diag_forms(&OctParams([1; 8])).unwrap();
        let ctx = forms.context().clone();
        let prod = MultiPoly::parse(&ctx, "16*(p + q + t + u)*(r + s + v + w)").unwrap();
        assert_eq!(forms.a, prod);
        let e = eliminate_w(&forms).unwrap();
        assert!(e.f.degree_in("w").unwrap() <= 0);
    }

    #[test]
    fn theorem_left_forms() {
        let left = OctParams(FAMILY_LEFT);
        let forms = diag_forms(&left).unwrap();
        assert_eq!(forms.a.degree_in("w").unwrap(), 1);
        assert_eq!(forms.b.degree_in("w").unwrap(), 1);
        let at: Vec<Rational> = [-7, -55, -11, 1, -27, -13, -19, 4].map(Rational::from).to_vec();
        assert!(forms.a.eval_at(&at).unwrap().is_zero());
        assert!(forms.b.eval_at(&at).unwrap().is_zero());
        let e = eliminate_w(&forms).unwrap();
        assert_eq!(e.f.degree_in("p").unwrap(), 2);
        assert_eq!(
            e.f.coefficient_of("p", 2).unwrap(),
            p2_linear_form(&left).scale(&Rational::from(-128 * 4))
        );
    }

    #[test]
    fn w_coefficients_random_left() {
        let mut rng = XorShift64Star::new(21);
        for _ in 0..10 {
            let left = OctParams(std::array::from_fn(|_| rng.range_i64(-4, 4)));
            let forms = diag_forms(&left).unwrap();
            let [a, .., h] = left.0;
            let ctx = forms.context().clone();
            assert_eq!(
                forms.a.coefficient_of("w", 2).unwrap(),
                MultiPoly::constant(&ctx, Rational::from(8 * (h - a) * (h + a)))
            );
            let wp = forms.a.coefficient_of("w", 1).unwrap().coefficient_of("p", 1).unwrap();
            assert_eq!(wp, MultiPoly::constant(&ctx, Rational::from(16 * a * h)));
        }
    }

    #[test]
    fn w_degree_error() {
        let forms = DiagForms::build(&OctParams([1, 0, 0, 0, 0, 0, 0, 0]));
        assert!(matches!(eliminate_w(&forms), Err(Error::WDegreeTooHigh { form: "A", degree: 2 })));
    }

    #[test]
    fn w1_examples() {
        assert!(w1_check(&OctParams(FAMILY_LEFT)));
        assert!(w1_check(&OctParams([1; 8])));
        assert!(!w1_check(&OctParams([0, 1, 1, 1, 1, 1, -1, 5])));
        assert!(W1Tuple::new([2, 2, 2, 2, 2, 2, 2, 2]).is_err());
    }

    #[test]
    fn enumeration_small() {
        let one = enumerate_w1(1);
        assert_eq!(one.len(), 1088);
        assert_eq!(one[0].values(), [1, -2, -1, -1, 0, 0, 0, 1]);
        assert!(one.contains(&W1Tuple([1; 8])));
        let two = enumerate_w1(2);
        assert!(two.contains(&W1Tuple(FAMILY_LEFT)));
        assert!(two.iter().all(|t| w1_check(&t.params())));
        let mut sorted = two.clone();
        sorted.sort_by_key(|t| (t.0[0], t.0[7] < 0, t.0[1..7].to_vec()));
        assert_eq!(sorted, two);
    }

    #[test]
    fn family_anchor_point() {
        let f = theorem_family(&rat(-55, 1), &rat(-11, 1), &rat(-27, 1), &rat(-148, 1)).unwrap();
        assert_eq!(f.x, rat(23088, 1));
        assert_eq!(f.right, OctParams::from_i64([-7, -55, -11, 1, -27, -13, -19, 4]));
        assert_eq!(f.matrix, thm12());
        assert_eq!(f.primitive.to_rational(), thm12());
        assert!(f.report.is_euler_magic && f.report.is_proper);
        let j = serde_json::to_value(f.to_json()).unwrap();
        assert_eq!(j["X"], "23088");
        assert_eq!(j["params"]["u"], "-148");
        assert_eq!(j["right"][0], "-7");
    }

    #[test]
    fn family_small_point_and_errors() {
        let f = theorem_family(&rat(0, 1), &rat(0, 1), &rat(0, 1), &rat(1, 1)).unwrap();
        assert_eq!(f.x, rat(31, 1));
        assert!(f.report.is_euler_magic);
        assert!(matches!(
            theorem_family(&rat(0, 1), &rat(0, 1), &rat(0, 1), &rat(0, 1)),
            Err(Error::DegenerateParameter(_))
        ));
    }

    #[test]
    fn family_symbolic() {
        let c = theorem_family_symbolic().unwrap();
        assert!(c.a_vanishes && c.b_vanishes && c.proper);
    }

    #[test]
    fn chain_reproduces_family() {
        let left = W1Tuple::new(FAMILY_LEFT).unwrap();
        assert_eq!(chain_pivot(&left), 'v');
        let free: BTreeMap<char, Rational> =
            [('q', rat(-55, 1)), ('r', rat(-11, 1)), ('t', rat(-27, 1)), ('u', rat(-13, 1))].into();
        let out = solve_chain(&left, &free).unwrap();
        assert_eq!(out.right, OctParams::from_i64([-7, -55, -11, 1, -27, -13, -19, 4]));
        assert_eq!(out.primitive.to_rational(), thm12());
        assert!(out.report.is_proper);
    }

    #[test]
    fn chain_random_points() {
        let left = W1Tuple::new(FAMILY_LEFT).unwrap();
        let mut rng = XorShift64Star::new(4);
        let mut solved = 0;
        for _ in 0..30 {
            let free: BTreeMap<char, Rational> =
                ['q', 'r', 't', 'u'].iter().map(|&c| (c, rng.rational(20, 5))).collect();
            match solve_chain(&left, &free) {
                Ok(out) => {
                    solved += 1;
                    assert!(out.report.is_euler_magic);
                }
                Err(Error::Degenerate { .. }) => {}
                Err(e) => panic!("{e}"),
            }
        }
        assert!(solved > 20);
    }

    #[test]
    fn chain_free_value_validation() {
        let left = W1Tuple::new(FAMILY_LEFT).unwrap();
        let missing: BTreeMap<char, Rational> = [('q', rat(1, 1))].into();
        assert!(matches!(solve_chain(&left, &missing), Err(Error::InvalidConfig(_))));
        let pivot_given: BTreeMap<char, Rational> =
            [('q', rat(1, 1)), ('r', rat(1, 1)), ('t', rat(1, 1)), ('u', rat(1, 1)), ('v', rat(1, 1))].into();
        assert!(matches!(solve_chain(&left, &pivot_given), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn symbolic_witnesses() {
        let ctx = octonion::full_context();
        let diff = symbolic_witness((1, 8), (8, 1), WitnessKind::Difference);
        assert_eq!(diff, MultiPoly::parse(&ctx, "-2*(a*w + h*p)").unwrap());
        let sum = symbolic_witness((1, 8), (8, 1), WitnessKind::Sum);
        assert_eq!(
            sum,
            MultiPoly::parse(&ctx, "-2*b*v + 2*c*u + 2*d*t - 2*e*s - 2*f*r + 2*g*q").unwrap()
        );
    }

    #[test]
    fn all_ones_is_forced_improper() {
        let left = OctParams([1; 8]);
        let m = symbolic_product(&left);
        let ctx = m.get(0, 0).context().clone();
        assert_eq!(
            witness_form(&m, (3, 3), (3, 6), WitnessKind::Difference),
            MultiPoly::parse(&ctx, "2*(p + q + t + u)").unwrap()
        );
        assert_eq!(
            witness_form(&m, (2, 2), (2, 7), WitnessKind::Difference),
            MultiPoly::parse(&ctx, "2*(r + s + v + w)").unwrap()
        );
        let analysis = left_properness(&left);
        assert!(analysis.identical.is_empty());
        assert!(analysis.cover.is_some());
        assert!(analysis.is_forced_improper());
        assert!(improper_witnesses(&left)
            .iter()
            .any(|w| w.first == (3, 3) && w.second == (3, 6)));
    }

    #[test]
    fn two_zeros_force_collisions() {
        for i in 0..8 {
            for j in i + 1..8 {
                let mut v = [1, 2, 3, 4, 5, 6, 7, 8];
                v[i] = 0;
                v[j] = 0;
                assert_eq!(identical_pairs(&symbolic_product(&OctParams(v))).len(), 8, "zeros at {i}, {j}");
            }
        }
        let mut v = [1, 2, 3, 4, 5, 6, 7, 8];
        v[0] = 0;
        v[3] = 0;
        assert!(left_properness(&OctParams(v)).is_forced_improper());
        let analysis = left_properness(&OctParams(FAMILY_LEFT));
        assert!(!analysis.is_forced_improper());
    }

    #[test]
    fn primitive_right_scales() {
        let r = OctParams([rat(3, 1), rat(-2, 1), rat(-4, 1), rat(5, 1), rat(6, 1), rat(13, 15), rat(-14, 15), rat(-23, 5)]);
        let p = primitive_right(&r).unwrap();
        assert_eq!(p.0.map(|v| i64::try_from(v).unwrap()), [45, -30, -60, 75, 90, 13, -14, -69]);
    }
}
