mod common;

use common::{smallest_primitive, PolyField};
use proptest::prelude::*;
use rayon::prelude::*;
use twozero_core::gf::{primitive_polynomials, FieldTower, DEFAULT_FIELD_CAP};
use twozero_core::{Elem, TraceLevel};

fn tower(p: u32, t: u32, k: u32) -> FieldTower {
    FieldTower::build(p, t, k, DEFAULT_FIELD_CAP).unwrap()
}

fn oracle_for(tw: &FieldTower) -> PolyField {
    PolyField::new(tw.p() as u64, tw.modulus().iter().map(|&c| c as u64).collect())
}

#[test]
fn canonical_modulus_matches_exhaustive_search() {
    for (p, max_deg) in [(2u32, 10u32), (3, 6), (5, 4), (7, 3), (11, 2), (13, 2)] {
        for deg in 1..=max_deg {
            let tw = tower(p, 1, deg);
            let want: Vec<u32> = smallest_primitive(p as u64, deg as usize).iter().map(|&c| c as u32).collect();
            assert_eq!(tw.modulus(), &want[..], "p={p} deg={deg}");
            assert_eq!(primitive_polynomials(p, deg).next().unwrap(), want);
        }
    }
}

#[test]
fn gamma_is_the_class_of_x() {
    for (p, t, k) in [(2, 1, 4), (3, 1, 2), (2, 2, 3), (5, 1, 3), (3, 2, 2)] {
        let tw = tower(p, t, k);
        let f = oracle_for(&tw);
        assert_eq!(tw.to_poly_code(tw.gamma_pow(1)) as u64, f.x());
        assert_eq!(f.order(f.x()), tw.big_order() as u64);
        assert_eq!(tw.mult_order(tw.gamma_pow(1)).unwrap(), tw.big_order() as u64);
    }
}

/// add and mul against the polynomial basis on every pair.
fn full_field_agreement(tw: &FieldTower) {
    let f = oracle_for(tw);
    let size = tw.size();
    (0..size).into_par_iter().for_each(|a| {
        let x = tw.from_poly_code(a as u32);
        for b in 0..size {
            let y = tw.from_poly_code(b as u32);
            assert_eq!(tw.to_poly_code(tw.add(x, y)) as u64, f.add(a, b));
            assert_eq!(tw.to_poly_code(tw.mul(x, y)) as u64, f.mul(a, b));
        }
    });
}

#[test]
fn arithmetic_matches_oracle_on_small_fields() {
    for (p, t, k) in [(2, 1, 1), (2, 2, 1), (3, 1, 2), (2, 3, 2), (5, 1, 2), (7, 1, 2), (3, 2, 2), (2, 2, 4), (13, 1, 2)] {
        full_field_agreement(&tower(p, t, k));
    }
}

#[test]
fn arithmetic_matches_oracle_up_to_4096() {
    for (p, t, k) in [(2, 3, 4), (3, 1, 7), (5, 1, 5), (7, 1, 4)] {
        full_field_agreement(&tower(p, t, k));
    }
}

#[test]
fn arithmetic_matches_oracle_on_random_pairs() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for (p, t, k) in [(2, 2, 8), (3, 2, 5), (5, 2, 4)] {
        let tw = tower(p, t, k);
        let f = oracle_for(&tw);
        for _ in 0..10_000 {
            let (a, b) = (rng.gen_range(0..tw.size()), rng.gen_range(0..tw.size()));
            let (x, y) = (tw.from_poly_code(a as u32), tw.from_poly_code(b as u32));
            assert_eq!(tw.to_poly_code(tw.add(x, y)) as u64, f.add(a, b));
            assert_eq!(tw.to_poly_code(tw.mul(x, y)) as u64, f.mul(a, b));
        }
    }
}

#[test]
fn traces_match_naive_sums() {
    for (p, t, k) in [(3, 1, 2), (2, 2, 3), (5, 1, 2), (3, 2, 2), (2, 3, 2)] {
        let tw = tower(p, t, k);
        let f = oracle_for(&tw);
        let q = tw.q() as u64;
        for a in 0..tw.size() {
            let x = tw.from_poly_code(a as u32);
            assert_eq!(tw.to_poly_code(tw.trace_to_q(x)) as u64, f.trace(a, q, k));
            assert_eq!(tw.to_poly_code(tw.trace_to_p(x)) as u64, f.trace(a, p as u64, t * k));
        }
    }
}

fn towers() -> impl Strategy<Value = (u32, u32, u32)> {
    prop::sample::select(vec![(2, 1, 5), (2, 2, 3), (2, 3, 2), (3, 1, 4), (3, 2, 2), (5, 1, 3), (7, 1, 2), (2, 4, 2)])
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn trace_lands_in_subfield_and_is_additive((p, t, k) in towers(), a in any::<u32>(), b in any::<u32>()) {
        let tw = tower(p, t, k);
        let x = tw.from_poly_code(a % tw.size() as u32);
        let y = tw.from_poly_code(b % tw.size() as u32);
        let tx = tw.trace_to_q(x);
        prop_assert_eq!(tw.pow(tx, tw.q() as u64), tx);
        prop_assert!(tw.in_subfield_q(tx));
        prop_assert_eq!(tw.trace_to_q(tw.add(x, y)), tw.add(tx, tw.trace_to_q(y)));
        prop_assert_eq!(tw.trace_to_q(tw.pow(x, tw.q() as u64)), tx);
    }

    #[test]
    fn trace_is_transitive((p, t, k) in towers(), a in any::<u32>()) {
        let tw = tower(p, t, k);
        let x = tw.from_poly_code(a % tw.size() as u32);
        // Tr_{F_q/F_p} as a sum of p-power conjugates of Tr_{F_{q^k}/F_q}(x)
        let inner = tw.trace_to_q(x);
        let mut outer = Elem::ZERO;
        let mut y = inner;
        for _ in 0..t {
            outer = tw.add(outer, y);
            y = tw.pow(y, p as u64);
        }
        prop_assert_eq!(tw.trace_to_p(x), outer);
        prop_assert_eq!(tw.trace(x, TraceLevel::P), outer);
    }

    #[test]
    fn field_axioms((p, t, k) in towers(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let tw = tower(p, t, k);
        let s = tw.size() as u32;
        let (x, y, z) = (tw.from_poly_code(a % s), tw.from_poly_code(b % s), tw.from_poly_code(c % s));
        prop_assert_eq!(tw.mul(x, tw.add(y, z)), tw.add(tw.mul(x, y), tw.mul(x, z)));
        prop_assert_eq!(tw.add(tw.add(x, y), z), tw.add(x, tw.add(y, z)));
        prop_assert_eq!(tw.sub(tw.add(x, y), y), x);
        if !y.is_zero() {
            prop_assert_eq!(tw.mul(tw.div(x, y).unwrap(), y), x);
        }
    }

    #[test]
    fn subfield_encoding_round_trips((p, t, k) in towers(), i in any::<u32>()) {
        let tw = tower(p, t, k);
        for level in [TraceLevel::Q, TraceLevel::P] {
            let idx = i % tw.level_size(level);
            let x = tw.from_level_index(idx, level);
            prop_assert_eq!(tw.level_index(x, level), Some(idx));
        }
    }
}
