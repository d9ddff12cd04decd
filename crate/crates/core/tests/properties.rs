use std::sync::Arc;

use proptest::collection::vec;
use proptest::prelude::*;

use mlab_core::complexity::{decode, encode_program, enumerate_low, parse_program, Program};
use mlab_core::diagonalize::{
    builtin_roster, replay_certificate, run_construction, Certificate, ConstructionBudgets, EntryRecord, Outcome,
    ReplayBudgets, Schedule, Variant,
};
use mlab_core::martingale::{check_fairness, saving_transform, weighted_sum, MartingaleRef, RandomFairMartingale};
use mlab_core::suites::bound_failures;
use mlab_core::{Budget, Capital, Word};

fn word(max: usize) -> impl Strategy<Value = Word> {
    vec(any::<bool>(), 0..=max).prop_map(Word::from_bits)
}

fn schedule() -> impl Strategy<Value = Schedule> {
    (0usize..4, vec(1usize..12, 0..5), proptest::option::of(1usize..5)).prop_map(|(first, gaps, landing)| {
        let mut values = vec![first];
        for g in gaps {
            values.push(values.last().unwrap() + g);
        }
        Schedule::new(values, landing).unwrap()
    })
}

fn outcome() -> impl Strategy<Value = Outcome> {
    prop_oneof![
        Just(Outcome::Active),
        Just(Outcome::Excluded),
        (0usize..600).prop_map(|at| Outcome::Diverged { at }),
        word(12).prop_map(|extension| Outcome::Adopted { extension }),
    ]
}

fn certificate() -> impl Strategy<Value = Certificate> {
    let entry = (0u32..32, outcome(), proptest::option::of((0usize..600, 0usize..600)));
    (0usize..4, schedule(), any::<bool>(), vec(entry, 0..6), 0usize..600).prop_map(
        |(v, schedule, custom, entries, target)| {
            let variant = Variant::ALL[v];
            let entries = entries
                .into_iter()
                .map(|(id, outcome, pair)| {
                    let mut e = EntryRecord { id, outcome, pair: None };
                    // pairs only survive where the format stores them
                    let hintless = mlab_core::diagonalize::builtin_entry(id).unwrap().is_hintless_injection();
                    if variant == Variant::Tir
                        && hintless
                        && matches!(e.outcome, Outcome::Active | Outcome::Diverged { .. })
                    {
                        e.pair = pair;
                    }
                    e
                })
                .collect();
            let budgets = if custom { ReplayBudgets { eval: 777, race: 33 } } else { ReplayBudgets::default() };
            Certificate { variant, schedule, budgets, entries, target }
        },
    )
}

proptest! {
    #[test]
    fn certificate_bits_round_trip(c in certificate()) {
        let bits = c.to_bits().unwrap();
        prop_assert_eq!(Certificate::from_bits(&bits, c.target).unwrap(), c.clone());
        let bytes = c.to_bytes().unwrap();
        prop_assert_eq!(Certificate::from_bytes(&bytes).unwrap(), c);
    }

    #[test]
    fn certificate_rejects_trailing_bits(c in certificate(), extra in word(3)) {
        prop_assume!(!extra.is_empty());
        let bits = c.to_bits().unwrap().concat(&extra);
        prop_assert!(Certificate::from_bits(&bits, c.target).is_err());
    }

    #[test]
    fn programs_round_trip(w in word(24), period in 1usize..6, cond in 0usize..40) {
        let lit = Program::Literal(w.clone());
        prop_assert_eq!(parse_program(&encode_program(&lit)).unwrap(), lit.clone());
        prop_assert_eq!(decode(&encode_program(&lit), cond, &mut Budget::unlimited()).unwrap(), w.clone());
        let pattern = w.prefix(period.min(w.len()));
        prop_assume!(!pattern.is_empty());
        let rep = Program::Repeat(pattern.clone());
        let out = decode(&encode_program(&rep), cond, &mut Budget::unlimited()).unwrap();
        prop_assert_eq!(out.len(), cond);
        for i in 0..cond {
            prop_assert_eq!(out.bit(i), pattern.bit(i % pattern.len()));
        }
    }

    #[test]
    fn low_words_are_counted(t in 0usize..8, len in 0usize..20) {
        let found: Vec<Word> = enumerate_low(len, len, t, Budget::unlimited()).collect();
        prop_assert!(found.len() < 1 << (t + 1));
        let mut distinct = found.clone();
        distinct.sort();
        distinct.dedup();
        prop_assert_eq!(distinct.len(), found.len());
        prop_assert!(found.iter().all(|w| w.len() == len));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn weighted_sums_and_savings_are_fair(seeds in vec(any::<u64>(), 1..4), weights in vec(1u64..9, 3)) {
        let total: u64 = weights.iter().take(seeds.len()).sum();
        let terms: Vec<(Capital, MartingaleRef)> = seeds
            .iter()
            .zip(&weights)
            .map(|(&s, &w)| (Capital::ratio(w, total), Arc::new(RandomFairMartingale::new(s)) as MartingaleRef))
            .collect();
        let sum: MartingaleRef = Arc::new(weighted_sum(terms));
        prop_assert!(check_fairness(sum.as_ref(), 7, 1_000_000).is_fair());
        let saved = saving_transform(sum).unwrap();
        prop_assert!(check_fairness(&saved, 7, 1_000_000).is_fair());
    }

    #[test]
    fn constructions_stay_below_two_and_replay(
        pick in vec(0usize..5, 1..4),
        sched in schedule(),
        target in 1usize..40,
    ) {
        let ids: Vec<u32> = pick.iter().map(|&i| [1, 2, 5, 4, 7][i]).collect();
        let roster = builtin_roster(&ids).unwrap();
        let c = run_construction(&roster, &sched, Variant::Tmr, ConstructionBudgets::default(), target).unwrap();
        prop_assert_eq!(c.prefix.len(), target);
        prop_assert_eq!(bound_failures(&c), Vec::<String>::new());
        for n in 0..=target {
            prop_assert_eq!(replay_certificate(&c.certificate, n).unwrap(), c.prefix.prefix(n));
        }
    }
}
