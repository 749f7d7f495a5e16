use std::collections::{BTreeMap, HashSet};

use proptest::prelude::*;

use eulermagic::cayley3::{cayley, inverse_cayley, sign_diagonal, SkewMatrix};
use eulermagic::family8::{chain_pivot, enumerate_w1, free_variables, solve_chain, symbolic_product};
use eulermagic::octonion::{self, OctParams};
use eulermagic::permconstruct::{perm_matrix, Permutation};
use eulermagic::rng::XorShift64Star;
use eulermagic::verify::verify;
use eulermagic::{Error, RatMatrix, Rational};

fn int_tuple() -> impl Strategy<Value = [i64; 8]> {
    prop::array::uniform8(-20i64..=20)
}

fn rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| Rational::new(n, d))
}

fn skew(n: usize) -> impl Strategy<Value = SkewMatrix> {
    prop::collection::vec(rational(), n * (n - 1) / 2)
        .prop_map(move |upper| SkewMatrix::from_upper(n, &upper).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn octonion_product_is_scalar_orthogonal(l in int_tuple(), r in int_tuple()) {
        let (l, r) = (OctParams(l.map(Rational::from)), OctParams(r.map(Rational::from)));
        let m = octonion::product(&l, &r);
        prop_assert!(m.gram().is_scalar_matrix(&octonion::gamma(&l, &r)));
    }

    #[test]
    fn cayley_is_orthogonal_and_invertible(s in prop_oneof![skew(3), skew(5), skew(7)]) {
        let m = cayley(&s);
        prop_assert!(m.gram().is_scalar_matrix(&Rational::one()));
        prop_assert_eq!(inverse_cayley(&m).unwrap(), s);
    }

    #[test]
    fn sign_diagonal_removes_minus_one(s in prop_oneof![skew(3), skew(5)], flips in prop::collection::vec(any::<bool>(), 5)) {
        let n = s.n();
        let signs: Vec<Rational> = (0..n).map(|i| if flips[i] { -Rational::one() } else { Rational::one() }).collect();
        let m = RatMatrix::diagonal(&signs).mat_mul(&cayley(&s)).unwrap();
        let d = sign_diagonal(&m).unwrap();
        let dm_plus_i = d.mat_mul(&m).unwrap().add(&RatMatrix::identity(n)).unwrap();
        prop_assert!(!dm_plus_i.determinant().unwrap().is_zero());
    }

    #[test]
    fn permutation_matrices_are_orthogonal(n in 1usize..=12, seed in any::<u64>()) {
        let mut images: Vec<usize> = (1..=n).collect();
        XorShift64Star::new(seed).shuffle(&mut images);
        let p = perm_matrix(&Permutation::new(images).unwrap());
        let m = p.to_rational();
        prop_assert_eq!(m.mat_mul(&m.transpose()).unwrap(), RatMatrix::identity(n));
    }

    /// Specializing a polynomial matrix cannot create new distinct squares.
    #[test]
    fn specialization_never_adds_distinct_squares(l in prop::array::uniform8(-1i64..=1), r in int_tuple()) {
        let sym = symbolic_product(&OctParams(l));
        let classes: HashSet<_> = sym.entries().iter().map(|p| p.sign_normalized()).collect();
        let m = octonion::product(&OctParams(l.map(Rational::from)), &OctParams(r.map(Rational::from)));
        let squares: HashSet<Rational> = m.entries().iter().map(|x| x * x).collect();
        prop_assert!(squares.len() <= classes.len());
    }
}

#[test]
fn solve_chain_successes_are_euler_magic() {
    let tuples = enumerate_w1(1);
    let mut rng = XorShift64Star::new(31);
    let (mut solved, mut degenerate) = (0, 0);
    for k in 0..100 {
        let left = &tuples[(k * 37) % tuples.len()];
        let free: BTreeMap<char, Rational> = free_variables(chain_pivot(left))
            .into_iter()
            .map(|v| (v, rng.rational(9, 4)))
            .collect();
        match solve_chain(left, &free) {
            Ok(out) => {
                assert!(out.report.is_euler_magic, "{:?}", left.values());
                assert!(verify(&out.primitive.to_rational()).unwrap().is_euler_magic);
                solved += 1;
            }
            Err(Error::Degenerate { .. }) => degenerate += 1,
            Err(e) => panic!("{e}"),
        }
    }
    assert!(solved > degenerate, "{solved} solved, {degenerate} degenerate");
}
