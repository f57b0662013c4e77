use std::collections::BTreeSet;

use magic4::correspond::{apply_f, f_inverse};
use magic4::enumerate::{brute_semimagic_order3, count_semimagic_order3};
use magic4::forms::{compose, decompose, enumerate_forms, Form};
use magic4::groups::{apply_bitperm, canonical_d8, BitPermutation, D8Element};
use magic4::square::{line_sums, Square};
use magic4::{AdditiveSquare, PrimeBasis};
use num_bigint::BigInt;
use proptest::prelude::*;

fn nibble_square() -> impl Strategy<Value = AdditiveSquare> {
    prop::array::uniform4(prop::array::uniform4(0u32..16)).prop_map(Square::new)
}

fn any_square() -> impl Strategy<Value = Square<u32>> {
    prop::array::uniform4(prop::array::uniform4(0u32..1000)).prop_map(Square::new)
}

fn form() -> impl Strategy<Value = Form> {
    let forms = enumerate_forms();
    (0..forms.len()).prop_map(move |i| forms[i])
}

proptest! {
    #[test]
    fn f_inverse_then_f_is_identity(a in nibble_square()) {
        let basis = PrimeBasis::new([2, 3, 5, 7]).unwrap();
        prop_assert_eq!(apply_f(&f_inverse(&a, &basis).unwrap()), a);
    }

    #[test]
    fn canonical_form_is_idempotent_and_orbit_constant(x in any_square()) {
        let c = canonical_d8(&x);
        prop_assert_eq!(canonical_d8(&c), c);
        for g in D8Element::ALL {
            prop_assert_eq!(canonical_d8(&g.apply(&x)), c);
        }
    }

    #[test]
    fn d8_action_is_a_group_action(x in any_square(), i in 0usize..8, j in 0usize..8) {
        let (g, h) = (D8Element::ALL[i], D8Element::ALL[j]);
        prop_assert_eq!(g.compose(h).apply(&x), g.apply(&h.apply(&x)));
    }

    #[test]
    fn composed_forms_are_magic(a in form(), b in form(), c in form(), d in form()) {
        let sq = compose(&[a, b, c, d]);
        prop_assert_eq!(line_sums(&sq), [30; 10]);
        if let Ok(dec) = decompose(&sq) {
            prop_assert_eq!(dec.planes, [a, b, c, d]);
        }
    }

    #[test]
    fn bit_permutations_compose(a in nibble_square(), i in 0usize..24, j in 0usize..24) {
        let all = BitPermutation::all();
        let (p, q) = (all[i], all[j]);
        let twice = apply_bitperm(q, &apply_bitperm(p, &a).unwrap()).unwrap();
        let composed = BitPermutation::new(p.targets().map(|t| q.targets()[t as usize - 1])).unwrap();
        prop_assert_eq!(twice, apply_bitperm(composed, &a).unwrap());
    }
}

/// Counts 3x3 non-negative matrices with all row and column sums `r` by
/// trying every entry in `0..=r`.
fn full_semimagic_count(r: u64) -> u64 {
    let n = r + 1;
    let mut count = 0;
    for code in 0..n.pow(9) {
        let mut m = [0u64; 9];
        let mut c = code;
        for cell in &mut m {
            *cell = c % n;
            c /= n;
        }
        let rows = (0..3).all(|i| m[3 * i] + m[3 * i + 1] + m[3 * i + 2] == r);
        let cols = (0..3).all(|j| m[j] + m[3 + j] + m[6 + j] == r);
        if rows && cols {
            count += 1;
        }
    }
    count
}

#[test]
fn semimagic_formula_against_full_enumeration() {
    for r in 0..=4u64 {
        let full = full_semimagic_count(r);
        assert_eq!(count_semimagic_order3(r).unwrap(), full, "r = {r}");
        assert_eq!(brute_semimagic_order3(r as u32).unwrap(), full, "r = {r}");
    }
    // the 2x2-block oracle at r = 5
    assert_eq!(brute_semimagic_order3(5).unwrap(), 231);
}

#[test]
fn semimagic_formula_is_generic() {
    assert_eq!(count_semimagic_order3(8i64).unwrap(), 1035);
    assert_eq!(count_semimagic_order3(8u128).unwrap(), 1035);
    assert_eq!(
        count_semimagic_order3(BigInt::from(8)).unwrap(),
        BigInt::from(1035)
    );
    let big = count_semimagic_order3(BigInt::from(10u64.pow(12))).unwrap();
    assert!(big > BigInt::from(u64::MAX));
    assert!(count_semimagic_order3(BigInt::from(-3)).is_err());
}

#[test]
fn distinct_quadruples_give_distinct_squares() {
    let forms = enumerate_forms();
    let mut seen = BTreeSet::new();
    for &a in &forms {
        for &b in &forms {
            for &c in &forms {
                for &d in &forms {
                    assert!(seen.insert(compose(&[a, b, c, d])));
                }
            }
        }
    }
    assert_eq!(seen.len(), 65536);
}
