//! `mlab`: batch front end for mlab-core.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or config
//! error, 3 runtime error.

mod config;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};

use mlab_core::catalog;
use mlab_core::checkpoints::validate_checkpoints;
use mlab_core::complexity::{complexity_upper, enumerate_low};
use mlab_core::diagonalize::{
    builtin_roster, replay_certificate, run_construction, Certificate, ConstructionBudgets, Schedule, Variant,
};
use mlab_core::splitting::{build_plan, build_splitting_strategy, expected_gain, interval_gains};
use mlab_core::strategy::{run_on_sequence, RunTrace};
use mlab_core::suites::{run_suite, SUITE_NAMES};
use mlab_core::{Budget, Word};

const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Parser)]
#[command(name = "mlab", version, about = "Betting strategies, diagonalization and splitting experiments")]
struct Cli {
    /// Default step budget for runs, searches and enumerations.
    #[arg(long, global = true, env = "MLAB_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every configured strategy against every configured source.
    Run { config: PathBuf },
    /// Build a diagonal prefix against a roster and write its certificate.
    Diagonalize {
        /// Roster ids, one per line or comma separated; '#' starts a comment.
        #[arg(long)]
        roster: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = [0usize, 8, 32, 128, 512])]
        schedule: Vec<usize>,
        /// Only insert entries at prefix lengths divisible by this.
        #[arg(long)]
        landing: Option<usize>,
        #[arg(long)]
        variant: Variant,
        /// Prefix length to construct; defaults to the last schedule value.
        #[arg(long)]
        length: Option<usize>,
        #[arg(long)]
        out: PathBuf,
        /// Steps per adversary evaluation (recorded in the certificate).
        #[arg(long, default_value_t = mlab_core::diagonalize::DEFAULT_EVAL_BUDGET)]
        eval_budget: u64,
        /// Ticks per totalization race (recorded in the certificate).
        #[arg(long, default_value_t = mlab_core::diagonalize::DEFAULT_RACE_BUDGET)]
        race_budget: u64,
    },
    /// Rebuild a prefix from a certificate file.
    Replay {
        certificate: PathBuf,
        #[arg(long)]
        length: usize,
    },
    /// Run the interval-splitting strategy on a source.
    Splitting {
        #[arg(long, value_delimiter = ',', required = true)]
        checkpoints: Vec<usize>,
        #[arg(long, default_value = "all-zeros")]
        source: String,
        /// Defaults to the moves needed to play every sub-game.
        #[arg(long)]
        max_moves: Option<usize>,
        /// Trajectory CSV path; without it the CSV goes to stdout and the
        /// gain table to stderr.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Upper bound on the conditional description length of a word.
    Complexity {
        word: String,
        #[arg(long)]
        condition: usize,
    },
    /// List the words of a length whose bound is at most the threshold.
    EnumerateLow {
        #[arg(long)]
        length: usize,
        #[arg(long)]
        threshold: usize,
        /// Defaults to the length.
        #[arg(long)]
        condition: Option<usize>,
    },
    /// Run a named property suite.
    Verify { suite: String },
}

enum Failure {
    Verify,
    Config(anyhow::Error),
    Runtime(anyhow::Error),
}

type Outcome = Result<(), Failure>;

trait Classify<T> {
    fn config(self) -> Result<T, Failure>;
    fn runtime(self) -> Result<T, Failure>;
}

impl<T, E: Into<anyhow::Error>> Classify<T> for Result<T, E> {
    fn config(self) -> Result<T, Failure> {
        self.map_err(|e| Failure::Config(e.into()))
    }
    fn runtime(self) -> Result<T, Failure> {
        self.map_err(|e| Failure::Runtime(e.into()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config } => cmd_run(&config, cli.budget),
        Command::Diagonalize { roster, schedule, landing, variant, length, out, eval_budget, race_budget } => {
            cmd_diagonalize(&roster, schedule, landing, variant, length, &out, eval_budget, race_budget)
        }
        Command::Replay { certificate, length } => cmd_replay(&certificate, length),
        Command::Splitting { checkpoints, source, max_moves, out } => {
            cmd_splitting(&checkpoints, &source, max_moves, out.as_deref(), cli.budget)
        }
        Command::Complexity { word, condition } => cmd_complexity(&word, condition, cli.budget),
        Command::EnumerateLow { length, threshold, condition } => {
            cmd_enumerate_low(length, threshold, condition, cli.budget)
        }
        Command::Verify { suite } => cmd_verify(&suite),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(1),
        Err(Failure::Config(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}

/// Write through a temporary file in the same directory, then rename.
fn write_atomic(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("cannot write in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.persist(path).map_err(|e| anyhow!("cannot write {}: {}", path.display(), e.error))?;
    Ok(())
}

fn trace_csv(trace: &RunTrace) -> anyhow::Result<Vec<u8>> {
    let mut wr = csv::Writer::from_writer(Vec::new());
    wr.write_record(["move", "position", "bit", "capital_num", "capital_den", "halt"])?;
    let rows = trace.capitals.len();
    for (m, c) in trace.capitals.iter().enumerate() {
        let (pos, bit) = if m == 0 {
            (String::new(), String::new())
        } else {
            (trace.positions[m - 1].to_string(), u8::from(trace.history.bit(m - 1).unwrap()).to_string())
        };
        let halt = if m + 1 == rows { trace.halt.label() } else { "" };
        wr.write_record([m.to_string(), pos, bit, c.numer().to_string(), c.denom().to_string(), halt.to_string()])?;
    }
    Ok(wr.into_inner()?)
}

fn cmd_run(path: &Path, default_budget: u64) -> Outcome {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display())).config()?;
    let cfg = config::parse(&text).config()?;
    let budget = cfg.budget.unwrap_or(default_budget);
    fs::create_dir_all(&cfg.output_dir)
        .with_context(|| format!("cannot create {}", cfg.output_dir.display()))
        .runtime()?;
    for (sname, strategy) in &cfg.strategies {
        for (xname, source) in &cfg.sources {
            let trace = run_on_sequence(strategy, source, cfg.max_moves, &mut Budget::new(budget));
            let file = cfg.output_dir.join(format!("{sname}__{xname}.csv"));
            write_atomic(&file, &trace_csv(&trace).runtime()?).runtime()?;
            let last = trace.final_capital().map(|c| c.to_string()).unwrap_or_default();
            println!("{sname} {xname} moves={} capital={last} halt={}", trace.moves(), trace.halt.label());
        }
    }
    Ok(())
}

fn parse_roster(text: &str) -> anyhow::Result<Vec<u32>> {
    let mut ids = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap();
        for tok in line.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            ids.push(tok.parse().with_context(|| format!("bad roster id {tok:?}"))?);
        }
    }
    Ok(ids)
}

fn hex(w: &Word) -> String {
    w.bits()
        .chunks(8)
        .map(|c| {
            let byte = c.iter().enumerate().fold(0u8, |acc, (j, &b)| acc | (u8::from(b) << (7 - j)));
            format!("{byte:02x}")
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_diagonalize(
    roster: &Path,
    schedule: Vec<usize>,
    landing: Option<usize>,
    variant: Variant,
    length: Option<usize>,
    out: &Path,
    eval: u64,
    race: u64,
) -> Outcome {
    let text = fs::read_to_string(roster).with_context(|| format!("cannot read {}", roster.display())).config()?;
    let ids = parse_roster(&text).config()?;
    let entries = builtin_roster(&ids).config()?;
    let schedule = Schedule::new(schedule, landing).config()?.canonical();
    if schedule.values.len() < entries.len() {
        return Err(Failure::Config(anyhow!(
            "schedule has {} stages for {} roster entries",
            schedule.values.len(),
            entries.len()
        )));
    }
    let target = length.unwrap_or(schedule.last());
    let budgets = ConstructionBudgets { eval, race, ..ConstructionBudgets::default() };
    let c = run_construction(&entries, &schedule, variant, budgets, target).runtime()?;
    let bytes = c.certificate.to_bytes().runtime()?;
    write_atomic(out, &bytes).runtime()?;
    println!("length {target}");
    println!("certificate_bits {}", c.certificate.bit_len().runtime()?);
    println!("size_bound {}", c.certificate.size_bound());
    for e in &c.certificate.entries {
        println!("entry {} {:?}", e.id, e.outcome);
    }
    println!("prefix {}", hex(&c.prefix));
    Ok(())
}

fn cmd_replay(path: &Path, length: usize) -> Outcome {
    let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display())).config()?;
    let cert = Certificate::from_bytes(&bytes).config()?;
    if length > cert.target {
        return Err(Failure::Config(anyhow!("length {length} exceeds the certificate target {}", cert.target)));
    }
    let w = replay_certificate(&cert, length).runtime()?;
    println!("{w}");
    Ok(())
}

fn cmd_splitting(
    checkpoints: &[usize],
    source: &str,
    max_moves: Option<usize>,
    out: Option<&Path>,
    budget: u64,
) -> Outcome {
    let cp = validate_checkpoints(checkpoints).config()?;
    let plan = build_plan(&cp).config()?;
    let src = catalog::source(source).config()?;
    let s = build_splitting_strategy(&plan, budget);
    if let Some(&k) = s.exhausted.first() {
        return Err(Failure::Runtime(anyhow!("enumeration for interval {k} ran out of budget")));
    }
    let moves = max_moves.unwrap_or_else(|| s.horizon_moves());
    let trace = run_on_sequence(&s.strategy, &src, moves, &mut Budget::new(budget.max(moves as u64 * 4 + 16)));
    let csv = trace_csv(&trace).runtime()?;
    let gains = interval_gains(&plan, &trace);
    let mut table = String::from("checkpoint interval games stake threshold payoff gain\n");
    for (k, ip) in plan.intervals.iter().enumerate() {
        let games = s.games.iter().filter(|g| g.k == k).count();
        table.push_str(&format!(
            "{} {}..{} {games} {} {} {} {}\n",
            k + 1,
            ip.interval.start,
            ip.interval.end,
            ip.stake,
            ip.threshold,
            expected_gain(&plan, k),
            gains[k]
        ));
    }
    match out {
        Some(path) => {
            write_atomic(path, &csv).runtime()?;
            print!("{table}");
        }
        None => {
            io::stdout().write_all(&csv).runtime()?;
            eprint!("{table}");
        }
    }
    Ok(())
}

fn cmd_complexity(word: &str, condition: usize, budget: u64) -> Outcome {
    let w: Word = word.parse().map_err(|e| anyhow!("bad word {word:?}: {e}")).config()?;
    let b = complexity_upper(&w, condition, &mut Budget::new(budget))
        .ok_or_else(|| anyhow!("no description found within budget"))
        .runtime()?;
    println!("bound {}", b.bound);
    println!("witness {} ({} bits)", hex(&b.witness), b.witness.len());
    Ok(())
}

fn cmd_enumerate_low(length: usize, threshold: usize, condition: Option<usize>, budget: u64) -> Outcome {
    let mut stream = enumerate_low(length, condition.unwrap_or(length), threshold, Budget::new(budget));
    let mut stdout = io::stdout().lock();
    for w in stream.by_ref() {
        writeln!(stdout, "{w}").runtime()?;
    }
    if stream.truncated() {
        return Err(Failure::Runtime(anyhow!("enumeration ran out of budget; the list is incomplete")));
    }
    Ok(())
}

fn cmd_verify(suite: &str) -> Outcome {
    let checks = run_suite(suite)
        .ok_or_else(|| anyhow!("unknown suite {suite:?}; expected one of {}", SUITE_NAMES.join(", ")))
        .config()?;
    let mut ok = true;
    for c in &checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        if let Some(x) = &c.counterexample {
            println!("    counterexample: {x}");
        }
        ok &= c.passed;
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}
