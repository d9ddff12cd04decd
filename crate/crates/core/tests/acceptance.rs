//! Acceptance gate (no test harness). Prints one PASS/FAIL line per
//! criterion and exits nonzero if any criterion failed. Set `MLAB_BLESS=1`
//! to rewrite the certificate golden file from the current constructions.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use mlab_core::suites::{self, Check};

const GOLDEN: &str = "tests/data/certificate_golden.txt";

struct Outcome {
    number: usize,
    check: Check,
    elapsed: Duration,
}

fn timed(number: usize, limit: Option<Duration>, f: impl FnOnce() -> Check) -> Outcome {
    let start = Instant::now();
    let mut check = f();
    let elapsed = start.elapsed();
    if let Some(limit) = limit {
        if elapsed >= limit {
            check.passed = false;
            check.counterexample.get_or_insert(format!("took {elapsed:.1?}, limit {limit:?}"));
        }
    }
    Outcome { number, check, elapsed }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn golden_lines(constructions: &[(mlab_core::diagonalize::Variant, mlab_core::diagonalize::Construction)]) -> String {
    let mut out = String::from("# variant bit_length file_hex\n");
    for (v, c) in constructions {
        let bits = c.certificate.bit_len().unwrap();
        out.push_str(&format!("{v} {bits} {}\n", hex(&c.certificate.to_bytes().unwrap())));
    }
    out
}

fn certificate_criterion() -> Check {
    let constructions = suites::canonical_constructions();
    let mut check = suites::certificate_replay_on(&constructions);
    let actual = golden_lines(&constructions);
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(GOLDEN);
    if std::env::var_os("MLAB_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_default();
    if expected != actual {
        check.passed = false;
        let diff = expected
            .lines()
            .zip(actual.lines())
            .find(|(a, b)| a != b)
            .map(|(a, b)| format!("golden {a:?}, got {b:?}"))
            .unwrap_or_else(|| "golden file missing or has a different number of lines".into());
        check.counterexample.get_or_insert(diff);
    }
    check
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let outcomes = vec![
        timed(1, Some(secs(30)), suites::fairness),
        timed(2, None, suites::averaging_independence),
        timed(3, None, suites::saving_transfer),
        timed(4, Some(secs(60)), suites::diagonal_bound),
        timed(5, None, certificate_criterion),
        timed(6, None, suites::totalization),
        timed(7, None, || suites::counting_bound(12, 32, 16)),
        timed(8, Some(secs(60)), suites::splitting_success),
        timed(9, None, suites::greedy_defeat),
    ];
    for o in &outcomes {
        let verdict = if o.check.passed { "PASS" } else { "FAIL" };
        println!("criterion {} {verdict} {} ({:.2?}): {}", o.number, o.check.name, o.elapsed, o.check.detail);
        if let Some(c) = &o.check.counterexample {
            println!("    counterexample: {c}");
        }
    }
    let failed: Vec<usize> = outcomes.iter().filter(|o| !o.check.passed).map(|o| o.number).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", outcomes.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
