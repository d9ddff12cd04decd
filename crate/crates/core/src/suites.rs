//! Property suites over the whole library. Each check reports pass/fail
//! and, on failure, the first counterexample found.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::budget::Budget;
use crate::capital::Capital;
use crate::catalog;
use crate::checkpoints::validate_checkpoints;
use crate::complexity::{enumerate_low, prefix_violations};
use crate::diagonalize::{
    builtin_roster, replay_certificate, run_construction, Construction, ConstructionBudgets, Schedule, Variant,
};
use crate::martingale::{
    check_fairness, saving_transform, weighted_sum, EvalError, Martingale, MartingaleRef, PartialMartingale,
    PatternBettor, RandomFairMartingale,
};
use crate::source::SequenceSource;
use crate::splitting::{build_plan, build_splitting_strategy, interval_gains};
use crate::strategy::{
    check_injectivity, run_on_sequence, BlockShuffle, Listed, ScanMapRef, ScanRule, Strategy, SwapPairs,
};
use crate::transforms::{
    average_martingale, averaging_horizon, monotonize, totalize_martingale, totalize_strategy, StagedClass,
};
use crate::word::Word;

pub const SUITE_NAMES: &[&str] =
    &["fairness", "averaging", "saving", "totalize", "diagonal", "splitting", "counting", "all"];

pub const FAIRNESS_DEPTH: usize = 10;
pub const DIAGONAL_TARGET: usize = 512;
pub const DIAGONAL_SCHEDULE: &[usize] = &[0, 8, 32, 128, 512];
pub const SPLITTING_CHECKPOINTS: &[usize] = &[0, 256, 512, 1024, 2048];

/// Builtin roster ids used for each construction variant.
pub const VARIANT_ROSTERS: &[(Variant, &[u32])] = &[
    (Variant::Tmr, &[1, 2, 5, 4, 7]),
    (Variant::Tir, &[8, 13, 9, 11, 14]),
    (Variant::Pmr, &[16, 19, 0, 22, 23]),
    (Variant::Ppr, &[24, 25, 27, 28, 31]),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub counterexample: Option<String>,
}

impl Check {
    fn new(name: &str, failures: Vec<String>, detail: String) -> Check {
        Check { name: name.into(), passed: failures.is_empty(), detail, counterexample: failures.into_iter().next() }
    }
}

/// `None` for an unknown suite name.
pub fn run_suite(name: &str) -> Option<Vec<Check>> {
    Some(match name {
        "fairness" => vec![fairness()],
        "averaging" => vec![averaging_independence()],
        "saving" => vec![saving_transfer()],
        "totalize" => vec![totalization()],
        "diagonal" => vec![diagonal_bound(), certificate_replay(), greedy_defeat()],
        "splitting" => vec![splitting_success()],
        "counting" => vec![counting_bound(12, 32, 16)],
        "all" => SUITE_NAMES[..SUITE_NAMES.len() - 1].iter().flat_map(|s| run_suite(s).unwrap()).collect(),
        _ => return None,
    })
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_word(r: &mut ChaCha8Rng, len: usize) -> Word {
    (0..len).map(|_| r.gen::<bool>()).collect()
}

fn random_permutation(r: &mut ChaCha8Rng) -> ScanMapRef {
    match r.gen_range(0..3) {
        0 => Arc::new(SwapPairs),
        1 => Arc::new(BlockShuffle::new(r.gen_range(2..=5), r.gen())),
        _ => {
            let n = r.gen_range(2..=8);
            let mut v: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                v.swap(i, r.gen_range(0..=i));
            }
            Arc::new(Listed::new(v))
        }
    }
}

/// `d` partial strictly below `[1]`, with `[1]` enumerated at stage 0.
fn covered_partial() -> (MartingaleRef, Arc<StagedClass>) {
    let d: MartingaleRef =
        Arc::new(PartialMartingale::beyond(Arc::new(RandomFairMartingale::new(4)), vec![Word::from_bits(vec![true])]));
    let cls = Arc::new(StagedClass::new(vec![vec![Word::from_bits(vec![true])]]));
    (d, cls)
}

/// Every catalog martingale and every transform output satisfies
/// `2d(w) = d(w0) + d(w1)` exactly below the fairness depth.
pub fn fairness() -> Check {
    let mut subjects: Vec<(String, MartingaleRef)> = Vec::new();
    for id in catalog::TOTAL_MARTINGALES {
        subjects.push((id.to_string(), catalog::martingale(id).unwrap()));
    }
    let m = |id: &str| catalog::martingale(id).unwrap();
    subjects.push((
        "weighted_sum".into(),
        Arc::new(weighted_sum(vec![(Capital::ratio(1, 3), m("double_on:0")), (Capital::ratio(2, 3), m("random:1"))])),
    ));
    subjects.push(("saving(double_on:0)".into(), Arc::new(saving_transform(m("double_on:0")).unwrap())));
    subjects.push(("saving(random:2)".into(), Arc::new(saving_transform(m("random:2")).unwrap())));
    let swap = ScanRule::Permutation(Arc::new(SwapPairs));
    let shuffle = catalog::scan_rule("block_shuffle:4:7").unwrap();
    subjects.push((
        "average(random:3, swap_pairs)".into(),
        Arc::new(average_martingale(Strategy::new(m("random:3"), swap.clone()))),
    ));
    subjects.push((
        "average(pattern:01, block_shuffle)".into(),
        Arc::new(average_martingale(Strategy::new(m("pattern:01"), shuffle.clone()))),
    ));
    let (d, cls) = covered_partial();
    match totalize_martingale(d.clone(), cls.clone(), FAIRNESS_DEPTH, 4096) {
        Ok((t, _)) => subjects.push(("totalize(partial)".into(), t)),
        Err(e) => {
            return Check::new("fairness", vec![format!("totalize_martingale failed: {e}")], String::new());
        }
    }
    subjects.push((
        "monotonize(double_on:1, swap_pairs)".into(),
        Arc::new(monotonize(&Strategy::new(m("double_on:1"), swap.clone())).unwrap()),
    ));
    subjects.push((
        "monotonize(random:5, affine:2:0)".into(),
        Arc::new(monotonize(&Strategy::new(m("random:5"), catalog::scan_rule("affine:2:0").unwrap())).unwrap()),
    ));
    // under swap_pairs the first history bit is X(1)
    let image_cover =
        Arc::new(StagedClass::new(vec![vec![Word::from_bits(vec![false, true]), Word::from_bits(vec![true, true])]]));
    match totalize_strategy(&Strategy::new(d, swap), image_cover, FAIRNESS_DEPTH + 2, 4096) {
        Ok((b, _)) => {
            subjects.push(("monotonize(totalize(partial, swap_pairs))".into(), Arc::new(monotonize(&b).unwrap())))
        }
        Err(e) => {
            return Check::new("fairness", vec![format!("totalize_strategy failed: {e}")], String::new());
        }
    }
    let mut failures = Vec::new();
    for (name, d) in &subjects {
        let report = check_fairness(d.as_ref(), FAIRNESS_DEPTH, 10_000_000);
        if let Some(v) = report.violations.first() {
            failures.push(format!("{name}: {v:?}"));
        } else if let Some(w) = report.exhausted.first() {
            failures.push(format!("{name}: evaluation ran out of budget at {w}"));
        }
    }
    let detail = format!("{} martingales checked to depth {FAIRNESS_DEPTH}", subjects.len());
    Check::new("fairness", failures, detail)
}

/// `Av b` computed at horizons `M` and `M + 3` agree exactly.
pub fn averaging_independence() -> Check {
    let mut r = rng(2);
    let mut failures = Vec::new();
    for case in 0..50 {
        let pi = random_permutation(&mut r);
        let d: MartingaleRef = Arc::new(RandomFairMartingale::new(r.gen()));
        let av = average_martingale(Strategy::new(d, ScanRule::Permutation(pi.clone())));
        let len = r.gen_range(0..=12);
        let w = random_word(&mut r, len);
        let outcome = averaging_horizon(&av.strategy().rule, w.len()).and_then(|m| {
            let a = av.eval_at_horizon(&w, m, &mut Budget::unlimited())?;
            let b = av.eval_at_horizon(&w, m + 3, &mut Budget::unlimited())?;
            Ok((m, a, b))
        });
        match outcome {
            Ok((_, a, b)) if a == b => {}
            Ok((m, a, b)) => {
                failures.push(format!("case {case}: {} on {w}: M={m} gives {a}, M+3 gives {b}", pi.describe()))
            }
            Err(e) => failures.push(format!("case {case}: {} on {w}: {e}", pi.describe())),
        }
    }
    Check::new("averaging", failures, "50 cases".into())
}

/// Once the saving version of `b` has banked `B` by move `n`, the
/// monotonized martingale is at least `B` on every prefix long enough to
/// contain the positions of those `n` moves.
pub fn saving_transfer() -> Check {
    const LEN: usize = 64;
    let mut r = rng(3);
    let mut failures = Vec::new();
    let mut banked_cases = 0;
    for case in 0..20 {
        let pi = random_permutation(&mut r);
        let rule = ScanRule::Permutation(pi.clone());
        let bit = r.gen::<bool>();
        let d: MartingaleRef = match r.gen_range(0..3) {
            0 => Arc::new(PatternBettor::doubler(bit)),
            1 => catalog::martingale(if bit { "fraction:1:1/2" } else { "fraction:0:1/2" }).unwrap(),
            _ => Arc::new(RandomFairMartingale::new(r.gen())),
        };
        let source = match r.gen_range(0..3) {
            0 => SequenceSource::periodic(Word::from_bits(vec![bit])),
            1 => SequenceSource::pseudo_random(r.gen()),
            _ => SequenceSource::from_prefix(random_word(&mut r, LEN).concat(&Word::repeat(bit, 0))),
        };
        let x = source.prefix(LEN);
        let saved = saving_transform(d.clone()).unwrap();
        // b̂ on x: moves up to the first position outside x
        let mut positions = Vec::new();
        while let Some(p) = rule.position(positions.len()).filter(|&p| p < LEN) {
            positions.push(p);
        }
        let history: Word = positions.iter().map(|&p| x.bit(p).unwrap()).collect();
        let states = saved.state_chain(&history, &mut Budget::unlimited()).unwrap();
        let mono = monotonize(&Strategy::new(d, rule)).unwrap();
        // least bank guaranteed at each prefix length
        let mut owed = vec![Capital::zero(); LEN + 1];
        let mut reach = 0;
        for (n, st) in states.iter().enumerate() {
            if n > 0 {
                reach = reach.max(positions[n - 1] + 1);
            }
            let from = reach.max(n);
            if from <= LEN && st.bank > owed[from] {
                owed[from] = st.bank.clone();
            }
        }
        for m in 1..=LEN {
            if owed[m - 1] > owed[m] {
                owed[m] = owed[m - 1].clone();
            }
        }
        if !owed[LEN].is_zero() {
            banked_cases += 1;
        }
        for (m, floor) in owed.iter().enumerate() {
            match mono.eval(&x.prefix(m), &mut Budget::unlimited()) {
                Ok(v) if &v >= floor => {}
                Ok(v) => {
                    failures.push(format!("case {case} ({}): Av at length {m} is {v}, bank {floor}", pi.describe()));
                    break;
                }
                Err(e) => {
                    failures.push(format!("case {case}: {e}"));
                    break;
                }
            }
        }
    }
    Check::new("saving", failures, format!("20 cases, {banked_cases} with a positive bank"))
}

fn random_antichain(r: &mut ChaCha8Rng, count: usize, avoid: &[Word]) -> Vec<Word> {
    let mut out: Vec<Word> = Vec::new();
    while out.len() < count {
        let len = r.gen_range(1..=4);
        let w = random_word(r, len);
        let clash = |u: &Word| u.is_prefix_of(&w) || w.is_prefix_of(u);
        if !out.iter().any(clash) && !avoid.iter().any(clash) {
            out.push(w);
        }
    }
    out
}

/// Totalization on random instances: where every divergence
/// is covered, `d'` is total, agrees with `d` on active words and is
/// constant below covered parents; dropping one cover yields a timeout.
pub fn totalization() -> Check {
    const DEPTH: usize = 10;
    let mut r = rng(6);
    let mut failures = Vec::new();
    for case in 0..20 {
        let k = r.gen_range(1..=3);
        let cutoffs = random_antichain(&mut r, k, &[]);
        let k = r.gen_range(0..=2);
        let extra = random_antichain(&mut r, k, &cutoffs);
        let d: MartingaleRef =
            Arc::new(PartialMartingale::beyond(Arc::new(RandomFairMartingale::new(r.gen())), cutoffs.clone()));
        let build = |covers: &[Word], r: &mut ChaCha8Rng| {
            let mut stages = vec![Vec::new(); 4];
            for w in covers {
                stages[r.gen_range(0..4)].push(w.clone());
            }
            Arc::new(StagedClass::new(stages))
        };
        let all: Vec<Word> = cutoffs.iter().chain(&extra).cloned().collect();
        let cls = build(&all, &mut r);
        match totalize_martingale(d.clone(), cls, DEPTH, 4096) {
            Err(e) => failures.push(format!("case {case}: resolving instance failed: {e}")),
            Ok((t, marking)) => {
                'words: for n in 0..=DEPTH {
                    for w in Word::all_of_length(n) {
                        let Ok(v) = t.eval(&w, &mut Budget::unlimited()) else {
                            failures.push(format!("case {case}: d' undefined at {w}"));
                            break 'words;
                        };
                        let expected = if marking.is_inactive(&w) {
                            t.eval(&w.prefix(n - 1), &mut Budget::unlimited()).ok()
                        } else {
                            d.eval(&w, &mut Budget::new(4096)).ok()
                        };
                        if expected.as_ref() != Some(&v) {
                            failures.push(format!("case {case}: d'({w}) = {v}, expected {expected:?}"));
                            break 'words;
                        }
                    }
                }
            }
        }
        // drop the cover of one divergence
        let dropped = r.gen_range(0..cutoffs.len());
        let kept: Vec<Word> = all.iter().enumerate().filter(|&(i, _)| i != dropped).map(|(_, w)| w.clone()).collect();
        match totalize_martingale(d, build(&kept, &mut r), DEPTH, 4096) {
            Err(EvalError::RaceTimeout(_)) => {}
            Err(e) => failures.push(format!("case {case}: violating instance gave {e}")),
            Ok(_) => failures.push(format!("case {case}: violating instance produced a value")),
        }
    }
    Check::new("totalize", failures, "20 resolving and 20 violating instances".into())
}

pub fn canonical_construction(variant: Variant, roster_len: usize) -> Construction {
    let ids = VARIANT_ROSTERS.iter().find(|(v, _)| *v == variant).unwrap().1;
    let roster = builtin_roster(&ids[..roster_len]).unwrap();
    let schedule = Schedule::new(DIAGONAL_SCHEDULE.to_vec(), None).unwrap();
    run_construction(&roster, &schedule, variant, ConstructionBudgets::default(), DIAGONAL_TARGET)
        .expect("construction completes")
}

/// Recompute `D` from scratch on every prefix and check `D(u) < 2` and
/// `dᵢ(u) ≤ 2/αᵢ` for every term still counting at `|u|`.
pub fn bound_failures(c: &Construction) -> Vec<String> {
    let two = Capital::from_integer(2);
    let mut out = Vec::new();
    for n in 0..=c.prefix.len() {
        let u = c.prefix.prefix(n);
        let mut total = Capital::zero();
        for t in c.state.terms().iter().filter(|t| t.counts_at(n)) {
            match t.effective.eval(&u, &mut Budget::new(ConstructionBudgets::default().eval)) {
                Ok(v) => {
                    if v > two.div(&t.alpha) {
                        out.push(format!("entry {} has capital {v} > 2/alpha at length {n}", t.id));
                    }
                    total += &(&t.alpha * &v);
                }
                Err(e) => out.push(format!("entry {} fails at length {n}: {e}", t.id)),
            }
        }
        if total >= two {
            out.push(format!("D = {total} at length {n}"));
        }
    }
    out
}

pub fn diagonal_bound() -> Check {
    let mut failures = Vec::new();
    let mut runs = 0;
    for variant in Variant::ALL {
        for size in 1..=5 {
            let c = canonical_construction(variant, size);
            runs += 1;
            failures.extend(bound_failures(&c).into_iter().map(|f| format!("{variant} size {size}: {f}")));
        }
    }
    Check::new("diagonal bound", failures, format!("{runs} constructions of length {DIAGONAL_TARGET}"))
}

/// The full-roster construction of every variant.
pub fn canonical_constructions() -> Vec<(Variant, Construction)> {
    VARIANT_ROSTERS.iter().map(|&(v, ids)| (v, canonical_construction(v, ids.len()))).collect()
}

pub fn certificate_replay() -> Check {
    certificate_replay_on(&canonical_constructions())
}

pub fn certificate_replay_on(constructions: &[(Variant, Construction)]) -> Check {
    let mut failures = Vec::new();
    let mut sizes = Vec::new();
    for (variant, c) in constructions {
        let cert = &c.certificate;
        for n in [0, 1, 100, DIAGONAL_TARGET - 1, DIAGONAL_TARGET] {
            match replay_certificate(cert, n) {
                Ok(w) if w == c.prefix.prefix(n) => {}
                Ok(_) => failures.push(format!("{variant}: replay to {n} differs")),
                Err(e) => failures.push(format!("{variant}: replay to {n} failed: {e}")),
            }
        }
        let bits = cert.bit_len().unwrap();
        if bits > cert.size_bound() {
            failures.push(format!("{variant}: {bits} bits exceed the bound {}", cert.size_bound()));
        }
        sizes.push(format!("{variant} {bits}/{}", cert.size_bound()));
    }
    Check::new("certificate replay", failures, format!("bits/bound: {}", sizes.join(", ")))
}

pub fn greedy_defeat() -> Check {
    const N: usize = 256;
    let roster = builtin_roster(&[1]).unwrap();
    let c = run_construction(
        &roster,
        &Schedule::new(vec![0], None).unwrap(),
        Variant::Tmr,
        ConstructionBudgets::default(),
        N,
    )
    .expect("construction completes");
    let mut failures = Vec::new();
    if c.prefix != Word::repeat(true, N) {
        failures.push(format!("prefix is {}", c.prefix));
    }
    let d = &c.state.terms()[0].effective;
    for n in 1..=N {
        let v = d.eval(&c.prefix.prefix(n), &mut Budget::unlimited()).unwrap();
        if !v.is_zero() {
            failures.push(format!("doubler capital {v} after move {n}"));
            break;
        }
    }
    Check::new("greedy defeat", failures, format!("1^{N} against the doubler on 0"))
}

/// Low-complexity word counts stay below `2^{t+1}`, and no valid program
/// up to `prefix_bits` has a valid proper prefix.
pub fn counting_bound(max_threshold: usize, max_length: usize, prefix_bits: usize) -> Check {
    let mut failures = Vec::new();
    let mut largest = (0, 0, 0);
    for t in 0..=max_threshold {
        for len in 0..=max_length {
            let mut stream = enumerate_low(len, len, t, Budget::unlimited());
            let count = stream.by_ref().count();
            if stream.truncated() {
                failures.push(format!("enumeration truncated at threshold {t}, length {len}"));
            }
            if count >= 1 << (t + 1) {
                failures.push(format!("{count} words of length {len} below threshold {t}"));
            }
            largest = largest.max((count, t, len));
        }
    }
    if let Some((q, p)) = prefix_violations(prefix_bits).into_iter().next() {
        failures.push(format!("valid program {q} is a prefix of valid program {p}"));
    }
    let detail = format!(
        "largest count {} (threshold {}, length {}); prefix-free to {prefix_bits} bits",
        largest.0, largest.1, largest.2
    );
    Check::new("counting", failures, detail)
}

pub fn splitting_success() -> Check {
    let cp = validate_checkpoints(SPLITTING_CHECKPOINTS).unwrap();
    let plan = build_plan(&cp).unwrap();
    let s = build_splitting_strategy(&plan, 10_000_000);
    let mut failures = Vec::new();
    let moves = s.horizon_moves();
    if let Err(e) = check_injectivity(&s.strategy.rule, moves, None, &mut Budget::unlimited()) {
        failures.push(format!("not injective: {e}"));
    }
    if s.at_risk() >= Capital::from_integer(2) {
        failures.push(format!("capital at risk {} ≥ 2", s.at_risk()));
    }
    let trace = run_on_sequence(&s.strategy, &SequenceSource::all_zeros(), moves, &mut Budget::unlimited());
    if trace.capitals.iter().any(|c| c.is_zero()) {
        failures.push("capital reached zero".into());
    }
    let gains = interval_gains(&plan, &trace);
    let won = gains.iter().filter(|g| **g >= num_rational::BigRational::from_integer(1.into())).count();
    if won < 3 {
        failures.push(format!("capital grew by at least 1 at only {won} checkpoints"));
    }
    Check::new(
        "splitting",
        failures,
        format!("{} sub-games over {moves} moves, gains ≥ 1 at {won} of {} checkpoints", s.games.len(), gains.len()),
    )
}
