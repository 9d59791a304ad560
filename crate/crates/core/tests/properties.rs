mod common;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use stabtopo::codelib::{builtin, builtin_with, BuiltinParams, BUILTIN_NAMES};
use stabtopo::matrixlab::{snf, Matrix};
use stabtopo::symplectic::{excitation_map, symplectic_dot};
use stabtopo::{LaurentPoly, PauliVector};

const D: u32 = 6;

fn poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec(((-3i32..=3, -3i32..=3), 0i64..D as i64), 0..6)
        .prop_map(|terms| LaurentPoly::from_terms(terms, D))
}

fn pauli(w: usize) -> impl Strategy<Value = PauliVector> {
    prop::collection::vec(poly(), 2 * w).prop_map(move |e| PauliVector::from_entries(w, e).unwrap())
}

proptest! {
    #[test]
    fn ring_laws(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &LaurentPoly::one(D), a.clone());
        prop_assert!((&a - &a).is_zero());
        prop_assert!((&a + &(-&a)).is_zero());
    }

    #[test]
    fn antipode_is_involutive_ring_map(a in poly(), b in poly()) {
        prop_assert_eq!(a.antipode().antipode(), a.clone());
        prop_assert_eq!((&a * &b).antipode(), &a.antipode() * &b.antipode());
        prop_assert_eq!((&a + &b).antipode(), &a.antipode() + &b.antipode());
        prop_assert_eq!(a.antipode().constant_term(), a.constant_term());
    }

    #[test]
    fn parse_display_round_trip(a in poly()) {
        prop_assert_eq!(LaurentPoly::parse(&a.to_string(), D).unwrap(), a);
    }

    #[test]
    fn dot_is_sesquilinear_and_skew(u in pauli(2), v in pauli(2), w in pauli(2), f in poly()) {
        let uv = symplectic_dot(&u, &v).unwrap();
        prop_assert_eq!(symplectic_dot(&v, &u).unwrap(), -uv.antipode());
        prop_assert_eq!(symplectic_dot(&(&u + &w), &v).unwrap(), &uv + &symplectic_dot(&w, &v).unwrap());
        prop_assert_eq!(symplectic_dot(&u, &v.mul_poly(&f)).unwrap(), &f * &uv);
        prop_assert_eq!(symplectic_dot(&u.mul_poly(&f), &v).unwrap(), &f.antipode() * &uv);
        prop_assert_eq!(symplectic_dot(&u.shift(2, -1), &v.shift(2, -1)).unwrap(), uv);
    }

    #[test]
    fn excitation_map_is_linear(u in pauli(2), v in pauli(2), f in poly()) {
        let code = builtin_with("toric", BuiltinParams { d: Some(D), l: None }).unwrap();
        let eu = excitation_map(&code, &u).unwrap();
        let ev = excitation_map(&code, &v).unwrap();
        prop_assert_eq!(excitation_map(&code, &(&u + &v)).unwrap(), &eu + &ev);
        prop_assert_eq!(excitation_map(&code, &u.mul_poly(&f)).unwrap(), eu.mul_poly(&f));
    }

    #[test]
    fn snf_factorization(rows in prop::collection::vec(prop::collection::vec(-20i64..=20, 4), 1..=5)) {
        let m = Matrix::from_rows(rows).map(|&e| BigInt::from(e));
        let s = snf(&m);
        let one = BigInt::from(1);
        prop_assert_eq!(s.l.mul(&s.a).mul(&s.r), m.clone());
        prop_assert_eq!(s.l.det().abs(), one.clone());
        prop_assert_eq!(s.r.det().abs(), one);
        let diag = s.diagonal();
        for w in diag.windows(2) {
            prop_assert!(w[0].is_positive() && (&w[1] % &w[0]).is_zero() || w[0].is_zero() && w[1].is_zero() || w[1].is_zero());
        }
        for i in 0..s.a.rows() {
            for j in 0..s.a.cols() {
                if i != j {
                    prop_assert!(s.a.get(i, j).is_zero());
                }
            }
        }
    }

    /// The number of `x in Z_d^r` with `x M = 0` is read off the elementary
    /// divisors; count it directly.
    #[test]
    fn snf_left_kernel_count(
        rows in prop::collection::vec(prop::collection::vec(-6i64..=6, 3), 1..=3),
        d in 2i64..=4,
    ) {
        let r = rows.len();
        let m = Matrix::from_rows(rows.clone());
        let diag = snf(&m).diagonal();
        let mut predicted = 1i64;
        for s in &diag {
            predicted *= num_integer::gcd(*s, d);
        }
        predicted *= d.pow((r - diag.len()) as u32);
        let mut brute = 0;
        for idx in 0..d.pow(r as u32) {
            let x: Vec<i64> = (0..r).map(|i| idx / d.pow(i as u32) % d).collect();
            let zero = (0..3).all(|j| (0..r).map(|i| x[i] * rows[i][j]).sum::<i64>().rem_euclid(d) == 0);
            brute += i64::from(zero);
        }
        prop_assert_eq!(brute, predicted);
    }

    #[test]
    fn mge_agrees_with_field_elimination(seed in any::<u64>()) {
        prop_assert_eq!(common::suite_mge_ge_field(5, seed), 0);
    }

    #[test]
    fn mge_agrees_with_integer_elimination(seed in any::<u64>()) {
        prop_assert_eq!(common::suite_integer_hnf(1, seed), 0);
    }

    #[test]
    fn span_check_is_sound(seed in any::<u64>()) {
        prop_assert_eq!(common::suite_span(10, seed), 0);
    }
}

#[test]
fn builtin_generators_have_no_syndrome() {
    for name in BUILTIN_NAMES {
        let code = builtin(name).unwrap();
        for g in code.generators() {
            assert!(excitation_map(&code, g).unwrap().is_zero(), "{name}");
        }
    }
}

#[test]
fn seeded_matrix_suites() {
    assert_eq!(common::suite_mge_ge_field(200, 1), 0);
    assert_eq!(common::suite_integer_hnf(100, 2), 0);
    assert_eq!(common::suite_span(500, 3), 0);
}
