//! `run` configuration files (TOML).
//!
//! ```toml
//! max_moves = 64
//! output_dir = "traces"
//! budget = 1000000          # optional; steps per run
//!
//! [[strategy]]
//! name = "doubler"
//! martingale = "double_on:0"
//! rule = "monotonic"        # or { permutation = "swap_pairs" }, { injection = "..." }, { adaptive = "..." }
//!
//! [[source]]
//! name = "zeros"
//! id = "all-zeros"
//! ```

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use mlab_core::catalog;
use mlab_core::source::SequenceSource;
use mlab_core::strategy::{ScanRule, Strategy};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub max_moves: usize,
    pub output_dir: PathBuf,
    pub budget: Option<u64>,
    #[serde(default)]
    pub strategy: Vec<StrategySpec>,
    #[serde(default)]
    pub source: Vec<SourceSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategySpec {
    pub name: String,
    pub martingale: String,
    #[serde(default = "monotonic")]
    pub rule: RuleSpec,
}

fn monotonic() -> RuleSpec {
    RuleSpec::Named("monotonic".into())
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum RuleSpec {
    Named(String),
    Tagged(TaggedRule),
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum TaggedRule {
    Permutation(String),
    Injection(String),
    Adaptive(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceSpec {
    pub name: String,
    pub id: String,
}

/// A parsed and resolved configuration. Every error here is a config error.
pub struct Resolved {
    pub max_moves: usize,
    pub output_dir: PathBuf,
    pub budget: Option<u64>,
    pub strategies: Vec<(String, Strategy)>,
    pub sources: Vec<(String, SequenceSource)>,
}

fn check_name(kind: &str, name: &str) -> Result<()> {
    let ok = !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_');
    if !ok {
        bail!("{kind} name {name:?} must be nonempty ASCII letters, digits, '-' or '_'");
    }
    Ok(())
}

fn rule(spec: &RuleSpec) -> Result<ScanRule> {
    Ok(match spec {
        RuleSpec::Named(id) if id == "monotonic" => ScanRule::Monotonic,
        RuleSpec::Named(id) => bail!("rule {id:?}: use \"monotonic\" or a table such as {{ permutation = {id:?} }}"),
        RuleSpec::Tagged(TaggedRule::Permutation(id)) => {
            let (m, perm) = catalog::scan_map(id)?;
            if !perm {
                bail!("scan map {id:?} is not a permutation");
            }
            ScanRule::Permutation(m)
        }
        RuleSpec::Tagged(TaggedRule::Injection(id)) => ScanRule::Injection(catalog::scan_map(id)?.0),
        RuleSpec::Tagged(TaggedRule::Adaptive(id)) => catalog::adaptive_rule(id)?,
    })
}

pub fn parse(text: &str) -> Result<Resolved> {
    let cfg: RunConfig = toml::from_str(text)?;
    if cfg.strategy.is_empty() {
        bail!("no strategies configured");
    }
    if cfg.source.is_empty() {
        bail!("no sources configured");
    }
    let mut strategies = Vec::new();
    for s in &cfg.strategy {
        check_name("strategy", &s.name)?;
        if strategies.iter().any(|(n, _)| n == &s.name) {
            bail!("duplicate strategy name {:?}", s.name);
        }
        let d = catalog::martingale(&s.martingale).with_context(|| format!("strategy {:?}", s.name))?;
        let r = rule(&s.rule).with_context(|| format!("strategy {:?}", s.name))?;
        strategies.push((s.name.clone(), Strategy::new(d, r)));
    }
    let mut sources = Vec::new();
    for s in &cfg.source {
        check_name("source", &s.name)?;
        if sources.iter().any(|(n, _)| n == &s.name) {
            bail!("duplicate source name {:?}", s.name);
        }
        sources.push((s.name.clone(), catalog::source(&s.id).with_context(|| format!("source {:?}", s.name))?));
    }
    Ok(Resolved { max_moves: cfg.max_moves, output_dir: cfg.output_dir, budget: cfg.budget, strategies, sources })
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = "max_moves = 5\noutput_dir = \"out\"\n[[source]]\nname = \"z\"\nid = \"all-zeros\"\n";

    #[test]
    fn rules_parse() {
        let text = format!(
            "{BASE}[[strategy]]\nname = \"a\"\nmartingale = \"double_on:0\"\n\
             [[strategy]]\nname = \"b\"\nmartingale = \"random:1\"\nrule = {{ permutation = \"swap_pairs\" }}\n\
             [[strategy]]\nname = \"c\"\nmartingale = \"random:1\"\nrule = {{ adaptive = \"jump_on_one\" }}\n"
        );
        let r = parse(&text).unwrap();
        assert_eq!(r.strategies.len(), 3);
        assert!(matches!(r.strategies[1].1.rule, ScanRule::Permutation(_)));
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(parse(BASE).is_err());
        let not_perm = format!(
            "{BASE}[[strategy]]\nname = \"a\"\nmartingale = \"const:1\"\nrule = {{ permutation = \"affine:2:0\" }}\n"
        );
        assert!(parse(&not_perm).is_err());
        let bad_name = format!("{BASE}[[strategy]]\nname = \"a/b\"\nmartingale = \"const:1\"\n");
        assert!(parse(&bad_name).is_err());
        let unknown_key = format!("{BASE}colour = 1\n[[strategy]]\nname = \"a\"\nmartingale = \"const:1\"\n");
        assert!(parse(&unknown_key).is_err());
    }
}
