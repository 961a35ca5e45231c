//! Property tests over randomized inputs: brute-force oracles for the
//! nested sums and algebraic identities that must hold for arbitrary
//! rational weights.

use eulersum::{
    bbar_recurrence, complete_sum, elementary_sum, harmonic, mhn, mhsn, partial_fractions,
    split_np, u_partial, v_partial, CompositionIndex, Integer, Rational, WeightSequence,
};
use proptest::prelude::*;
use rug::ops::Pow;

fn composition(max_depth: usize, max_part: u32) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(1..=max_part, 0..=max_depth)
}

fn weights(max_len: usize) -> impl Strategy<Value = Vec<(i64, u64)>> {
    prop::collection::vec((-9i64..=9, 1u64..=9), 0..=max_len)
}

fn to_weight_sequence(raw: &[(i64, u64)]) -> WeightSequence {
    raw.iter().map(|&(n, d)| Rational::from((n, d))).collect()
}

/// Brute-force strict/weak nested sums by explicit tuple enumeration.
fn brute_force_nested(n: u32, parts: &[u32], weak: bool) -> Rational {
    fn recurse(
        level: usize,
        parts: &[u32],
        hi: u32,
        weak: bool,
        partial: Rational,
        total: &mut Rational,
    ) {
        if level == parts.len() {
            *total += partial;
            return;
        }
        for v in 1..=hi {
            let factor = Rational::from((Integer::from(1), Integer::from(v).pow(parts[level])));
            let next_hi = if weak { v } else { v - 1 };
            recurse(level + 1, parts, next_hi, weak, partial.clone() * factor, total);
        }
    }
    let mut total = Rational::new();
    recurse(0, parts, n, weak, Rational::from(1), &mut total);
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn nested_sums_match_enumeration(n in 0u32..=7, parts in composition(3, 3)) {
        let s = CompositionIndex::new(parts.clone());
        prop_assert_eq!(mhn(n, &s).unwrap(), brute_force_nested(n, &parts, false));
        prop_assert_eq!(mhsn(n, &s).unwrap(), brute_force_nested(n, &parts, true));
    }

    #[test]
    fn harmonic_increments(n in 1u32..=40, p in 1u32..=4) {
        let step = harmonic(n, p).unwrap() - harmonic(n - 1, p).unwrap();
        prop_assert_eq!(step, Rational::from((Integer::from(1), Integer::from(n).pow(p))));
    }

    #[test]
    fn newton_convolution_vanishes(raw in weights(7), m in 1usize..=5) {
        let w = to_weight_sequence(&raw);
        let mut acc = Rational::new();
        for i in 0..=m {
            let term = elementary_sum(i, &w) * complete_sum(m - i, &w);
            if i % 2 == 0 { acc += term; } else { acc -= term; }
        }
        prop_assert_eq!(acc, Rational::new());
    }

    #[test]
    fn power_sum_recurrence_matches_elementary(raw in weights(7), m in 0usize..=5) {
        let w = to_weight_sequence(&raw);
        prop_assert_eq!(bbar_recurrence(m, &w), elementary_sum(m, &w));
    }

    #[test]
    fn residues_recombine(shifts in prop::collection::hash_set(0u64..=12, 1..=4)) {
        let shifts: Vec<u64> = shifts.into_iter().collect();
        let pf = partial_fractions(&shifts).unwrap();
        for n in 1..=(2 * shifts.len() as u64 + 2) {
            prop_assert_eq!(pf.recombine_at(n), pf.product_inverse_at(n));
        }
    }

    #[test]
    fn power_pole_split_recombines(p in 2u32..=6, r in 1u64..=9, n in 1u64..=12) {
        let split = split_np(p, r).unwrap();
        prop_assert_eq!(split.recombine_at(n), split.target_at(n));
    }

    #[test]
    fn star_partial_dominates_strict(m in 1u32..=3, r in 0u32..=3, p in 2u32..=4, n in 1u64..=80) {
        prop_assert!(v_partial(m, r, p, n) >= u_partial(m, r, p, n));
    }
}
