//! Cayley transform over the rationals and the polynomial certificate that
//! no rational 3x3 Euler magic matrix exists.
//!
//! For skew-symmetric `S`, `I + S` is invertible over the reals, so
//! `(I - S)(I + S)^-1` is always defined. Every rational orthogonal `M`
//! becomes a Cayley image after multiplying by a suitable sign diagonal `D`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{Matrix, RatMatrix};
use crate::poly::{Context, MultiPoly};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewMatrix {
    entries: RatMatrix,
}

impl SkewMatrix {
    pub fn new(entries: RatMatrix) -> Result<Self> {
        let n = entries.ensure_square()?;
        for i in 0..n {
            for j in i..n {
                if *entries.get(i, j) != -entries.get(j, i) {
                    return Err(Error::NotSkewSymmetric);
                }
            }
        }
        Ok(SkewMatrix { entries })
    }

    pub fn zero(n: usize) -> Self {
        SkewMatrix {
            entries: RatMatrix::zeros(n, n),
        }
    }

    /// Skew matrix whose strict upper triangle, read row by row, is `upper`.
    pub fn from_upper(n: usize, upper: &[Rational]) -> Result<Self> {
        if upper.len() != n * (n.saturating_sub(1)) / 2 {
            return Err(Error::DimensionMismatch {
                op: "from_upper",
                left: (n, n),
                right: (upper.len(), 1),
            });
        }
        let mut m = RatMatrix::zeros(n, n);
        let mut it = upper.iter();
        for i in 0..n {
            for j in i + 1..n {
                let v = it.next().expect("length checked");
                m.set(i, j, v.clone());
                m.set(j, i, -v);
            }
        }
        Ok(SkewMatrix { entries: m })
    }

    pub fn n(&self) -> usize {
        self.entries.rows()
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.entries
    }
}

/// `S = ((0, a, b), (-a, 0, c), (-b, -c, 0))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewParams3 {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl SkewParams3 {
    pub fn to_skew(&self) -> SkewMatrix {
        SkewMatrix::from_upper(3, &[self.a.clone(), self.b.clone(), self.c.clone()])
            .expect("three upper entries")
    }

    /// `det(I + S) = a^2 + b^2 + c^2 + 1`.
    pub fn delta(&self) -> Rational {
        &self.a * &self.a + &self.b * &self.b + &self.c * &self.c + Rational::one()
    }
}

/// `(I - S)(I + S)^-1`.
pub fn cayley(s: &SkewMatrix) -> RatMatrix {
    let id = RatMatrix::identity(s.n());
    let minus = id.sub(s.matrix()).expect("same size");
    let plus = id.add(s.matrix()).expect("same size");
    let inv = plus.inverse().expect("I + S is invertible for skew S");
    minus.mat_mul(&inv).expect("same size")
}

/// `S = (I - M)(I + M)^-1`, the inverse of [`cayley`].
pub fn inverse_cayley(m: &RatMatrix) -> Result<SkewMatrix> {
    let n = m.ensure_square()?;
    let id = RatMatrix::identity(n);
    let inv = id
        .add(m)?
        .inverse()
        .map_err(|_| Error::MinusOneEigenvalue)?;
    SkewMatrix::new(id.sub(m)?.mat_mul(&inv)?)
}

/// Sign vectors of length `n` in scan order: by number of `-1` entries,
/// then lexicographically by the positions of the `-1` entries.
pub fn sign_candidates(n: usize) -> impl Iterator<Item = Vec<i8>> {
    (0..=n).flat_map(move |k| {
        combinations(n, k).map(move |neg| {
            let mut v = vec![1i8; n];
            for i in neg {
                v[i] = -1;
            }
            v
        })
    })
}

fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut cur: Option<Vec<usize>> = if k <= n { Some((0..k).collect()) } else { None };
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                cur = None;
                break;
            }
            i -= 1;
            if next[i] < n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                cur = Some(next);
                break;
            }
        }
        Some(out)
    })
}

pub const MAX_SIGN_SCAN: usize = 16;

/// First sign diagonal `D` in [`sign_candidates`] order with `M + D`
/// invertible.
pub fn sign_diagonal(m: &RatMatrix) -> Result<RatMatrix> {
    let n = m.ensure_square()?;
    if n > MAX_SIGN_SCAN {
        return Err(Error::OutOfDomain(format!(
            "sign scan supports n <= {MAX_SIGN_SCAN}, got {n}"
        )));
    }
    for signs in sign_candidates(n) {
        let d = RatMatrix::diagonal(&signs.iter().map(|&s| Rational::from(s as i64)).collect::<Vec<_>>());
        if !m.add(&d)?.determinant()?.is_zero() {
            return Ok(d);
        }
    }
    Err(Error::NoSignDiagonal)
}

/// For odd `n` and `M M^t = gamma I`, returns `lambda = det(M) / gamma^((n-1)/2)`
/// with `lambda^2 = gamma`, and the orthogonal matrix `M / lambda`.
pub fn ortho_reduce(m: &RatMatrix) -> Result<(Rational, RatMatrix)> {
    let n = m.ensure_square()?;
    if n % 2 == 0 {
        return Err(Error::EvenSize(n));
    }
    let gram = m.gram();
    let gamma = gram.get(0, 0).clone();
    if !gram.is_scalar_matrix(&gamma) {
        return Err(Error::NotScalarGram);
    }
    if gamma.is_zero() {
        return Err(Error::ZeroGamma);
    }
    let lambda = m.determinant()? / gamma.pow(((n - 1) / 2) as u32);
    let q = m.scale(&lambda.recip().expect("det nonzero when gamma nonzero"));
    debug_assert!(q.gram().is_scalar_matrix(&Rational::one()));
    Ok((lambda, q))
}

/// Context `a, b, c` of the 3x3 skew parameters.
pub fn abc_context() -> Context {
    Context::letters("abc")
}

fn adjugate3(m: &Matrix<MultiPoly>) -> Matrix<MultiPoly> {
    let minor = |r0: usize, r1: usize, c0: usize, c1: usize| {
        m.get(r0, c0) * m.get(r1, c1) - m.get(r0, c1) * m.get(r1, c0)
    };
    let others = |i: usize| match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    Matrix::from_fn(3, 3, |i, j| {
        // adj[i][j] = (-1)^(i+j) * minor(j, i)
        let (r0, r1) = others(j);
        let (c0, c1) = others(i);
        let v = minor(r0, r1, c0, c1);
        if (i + j) % 2 == 1 {
            -v
        } else {
            v
        }
    })
}

/// `Delta * (I - S)(I + S)^-1` as polynomials in `a, b, c`.
pub fn scaled_cayley3() -> Matrix<MultiPoly> {
    let ctx = abc_context();
    let v = ctx.vars();
    let (a, b, c) = (&v[0], &v[1], &v[2]);
    let zero = MultiPoly::zero(&ctx);
    let s = Matrix::from_rows(vec![
        vec![zero.clone(), a.clone(), b.clone()],
        vec![-a, zero.clone(), c.clone()],
        vec![-b, -c, zero],
    ])
    .expect("3x3");
    let id = Matrix::from_fn(3, 3, |i, j| {
        if i == j {
            MultiPoly::one(&ctx)
        } else {
            MultiPoly::zero(&ctx)
        }
    });
    let plus = id.add(&s).expect("3x3");
    let minus = id.sub(&s).expect("3x3");
    minus.mat_mul(&adjugate3(&plus)).expect("3x3")
}

/// `Delta = a^2 + b^2 + c^2 + 1`.
pub fn delta3() -> MultiPoly {
    MultiPoly::parse(&abc_context(), "a^2 + b^2 + c^2 + 1").expect("valid")
}

/// `(D, E)`: the squared diagonal and anti-diagonal sums of `Delta * M`
/// minus `Delta^2`. The 3x3 conditions are `D = E = 0`.
pub fn cayley3_forms() -> (MultiPoly, MultiPoly) {
    let m = scaled_cayley3();
    let d2 = delta3().pow(2);
    let diag = (0..3).fold(MultiPoly::zero(&abc_context()), |acc, i| {
        acc + m.get(i, i).pow(2)
    });
    let anti = (0..3).fold(MultiPoly::zero(&abc_context()), |acc, i| {
        acc + m.get(i, 2 - i).pow(2)
    });
    (&diag - &d2, &anti - &d2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Axiom,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateLine {
    pub name: String,
    pub status: Status,
    /// Terms in the normalized `lhs - rhs`; zero exactly when the identity holds.
    pub lhs_minus_rhs_term_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Certificate {
    pub lines: Vec<CertificateLine>,
}

impl Certificate {
    pub fn all_pass(&self) -> bool {
        self.lines.iter().all(|l| l.status != Status::Fail)
    }
}

impl std::fmt::Display for Certificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for l in &self.lines {
            let s = match l.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Axiom => "AXIOM",
            };
            writeln!(f, "{}: {}", l.name, s)?;
        }
        Ok(())
    }
}

fn identity_line(name: &str, lhs: &MultiPoly, rhs: &MultiPoly) -> CertificateLine {
    let diff = lhs - rhs;
    CertificateLine {
        name: name.to_string(),
        status: if diff.is_zero() { Status::Pass } else { Status::Fail },
        lhs_minus_rhs_term_count: diff.term_count(),
    }
}

/// Two identities that hold jointly, reported as one line.
fn pair_line(name: &str, sides: [(&MultiPoly, &MultiPoly); 2]) -> CertificateLine {
    let count: usize = sides.iter().map(|(l, r)| (*l - *r).term_count()).sum();
    CertificateLine {
        name: name.to_string(),
        status: if count == 0 { Status::Pass } else { Status::Fail },
        lhs_minus_rhs_term_count: count,
    }
}

fn parse(ctx: &Context, s: &str) -> MultiPoly {
    MultiPoly::parse(ctx, s).expect("fixed identity text parses")
}

pub const AXIOM_LINE: &str = "sqrt3-not-rational";

/// Checks the four identities behind the 3x3 nonexistence argument,
/// using the forms from [`cayley3_forms`].
pub fn nonexistence_certificate() -> Certificate {
    let (d, e) = cayley3_forms();
    certificate_for_forms(&d, &e)
}

/// Same checks against caller-supplied `D` and `E`.
pub fn certificate_for_forms(d: &MultiPoly, e: &MultiPoly) -> Certificate {
    let abc = abc_context();
    let half = Rational::new(1, 2);
    let quarter = Rational::new(1, 4);

    let main_rhs = parse(&abc, "(a^2 - 2*b^2 + c^2 - 2)^2 - 3*(b^2 + 1)^2");
    let main = identity_line("main-identity", &(d + e).scale(&half), &main_rhs);

    // beta = b^2, s = a^2 + c^2, p = a^2 c^2
    let bsp = Context::new(&["beta", "s", "p"]).expect("valid names");
    let images = [
        parse(&abc, "b^2"),
        parse(&abc, "a^2 + c^2"),
        parse(&abc, "a^2*c^2"),
    ];
    let d_red = parse(&bsp, "beta^2 - 2*(1 + s)*beta + (1 - s)^2 - 4*p");
    let e_red = parse(&bsp, "(2 - s)*beta - s + 2*p");
    let to_abc = |q: &MultiPoly| q.compose(&abc, &images).expect("contexts match");
    let reduction = pair_line(
        "reduction",
        [(&d.scale(&half), &to_abc(&d_red)), (&e.scale(&quarter), &to_abc(&e_red))],
    );

    let sp = Context::new(&["s", "p"]).expect("valid names");
    let elim_lhs = parse(&sp, "4*p^2 + (-8*s^2 + 16*s - 8)*p + s^4 - 4*s^3 + 12*s^2 - 16*s + 4");
    let elim_rhs = parse(&sp, "4*(p - (s - 1)^2)^2 - 3*(s - 2)^2*s^2");
    let elim = identity_line("quartic-factorization", &elim_lhs, &elim_rhs);

    // E = 0 gives beta = (s - 2p)/(2 - s); clear (2 - s)^2 in D/2.
    let cleared = d_red
        .substitute_fraction(
            "beta",
            &parse(&bsp, "s - 2*p"),
            &parse(&bsp, "2 - s"),
        )
        .expect("beta in context");
    let elim_lhs_bsp = elim_lhs.embed(&bsp).expect("s, p are in the target");
    let beta_elim = identity_line("beta-elimination", &cleared, &elim_lhs_bsp);

    Certificate {
        lines: vec![
            main,
            reduction,
            beta_elim,
            elim,
            CertificateLine {
                name: AXIOM_LINE.into(),
                status: Status::Axiom,
                lhs_minus_rhs_term_count: 0,
            },
        ],
    }
}
