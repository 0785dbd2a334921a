//! Batch runs: every selected check on every selected catalog group.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{Catalog, Filter};
use crate::checks::{evaluate, find_check, registry, reverify, CheckSpec, CheckVerdict, Instance, Kind, Status};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    /// Check ids; empty selects the whole registry.
    pub checks: Vec<String>,
    pub filter: Filter,
    pub seed: u64,
    /// Per-instance wall-clock budget.
    pub budget: Option<Duration>,
    /// Free-module ranks for module and extension checks.
    pub ns: Vec<usize>,
    /// Kernel ranks for extension checks that take one from the instance.
    pub ts: Vec<usize>,
    /// Recompute every counterexample from its replay seed.
    pub reverify: bool,
}

impl SuiteConfig {
    pub fn new(filter: Filter, seed: u64) -> Self {
        SuiteConfig { checks: Vec::new(), filter, seed, budget: None, ns: vec![1, 2], ts: vec![1, 2], reverify: true }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportEntry {
    #[serde(flatten)]
    pub verdict: CheckVerdict,
    /// Set for counterexamples when re-verification ran.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reverified: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub seed: u64,
    pub filter: String,
    pub checks: Vec<String>,
    pub groups: Vec<String>,
    /// Verdict counts per check, keyed by status name.
    pub counts: BTreeMap<String, BTreeMap<String, usize>>,
    pub totals: BTreeMap<String, usize>,
    pub entries: Vec<ReportEntry>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn count(&self, status: Status) -> usize {
        self.totals.get(status.as_str()).copied().unwrap_or(0)
    }

    /// Counterexamples whose recomputation disagreed.
    pub fn unreproduced(&self) -> Vec<&ReportEntry> {
        self.entries.iter().filter(|e| e.reverified == Some(false)).collect()
    }
}

/// Rank axes a check actually reads: `(ns, ts)`.
fn axes(spec: &CheckSpec, cfg: &SuiteConfig) -> (Vec<usize>, Vec<usize>) {
    let one = vec![1];
    match spec.kind {
        Kind::Group => (one.clone(), one),
        Kind::Module => (cfg.ns.clone(), one),
        Kind::Extension => match spec.id {
            "extension_h1_growth" | "stable_h1_is_maximal" | "annihilator_generators_lower" => (cfg.ns.clone(), one),
            "filtration_layers_rank2" | "extension_h1_growth_rank2" | "exact_module_growth" => (cfg.ns.clone(), vec![2]),
            "minimal_normal_free" => (cfg.ns.clone(), one),
            "stable_h2_cyclic"
            | "fixed_dimension_lower"
            | "fixed_dimension_equal"
            | "extension_rank_unique_elementary"
            | "extension_rank_abelian"
            | "two_minimal_normal_iff"
            | "radical_extension_growth" => (one.clone(), one),
            _ => (cfg.ns.clone(), cfg.ts.clone()),
        },
    }
}

fn selected_checks(cfg: &SuiteConfig) -> Result<Vec<&'static CheckSpec>> {
    if cfg.checks.is_empty() || cfg.checks.iter().any(|c| c == "all") {
        return Ok(registry().iter().collect());
    }
    cfg.checks.iter().map(|id| find_check(id).ok_or_else(|| Error::UnknownCheck(id.clone()))).collect()
}

/// Runs the Cartesian product of selected groups and checks. Tasks run in
/// parallel and the report keeps catalog order, then registry order.
pub fn run_suite(catalog: &Catalog, cfg: &SuiteConfig) -> Result<Report> {
    let specs = selected_checks(cfg)?;
    let entries = catalog.select(&cfg.filter);
    let mut tasks = Vec::new();
    for entry in &entries {
        for &spec in &specs {
            let (ns, ts) = axes(spec, cfg);
            for &n in &ns {
                for &t in &ts {
                    let instance = Instance { group: entry.name.clone(), seed: cfg.seed, n, t, subgroup: None };
                    tasks.push((*entry, spec, instance));
                }
            }
        }
    }
    let verdicts: Vec<ReportEntry> = tasks
        .par_iter()
        .map(|(entry, spec, instance)| -> Result<ReportEntry> {
            let deadline = cfg.budget.map(|b| Instant::now() + b);
            let verdict = evaluate(spec, entry, instance, None, deadline);
            let reverified = if cfg.reverify && verdict.status == Status::Counterexample {
                Some(reverify(&verdict, catalog)?)
            } else {
                None
            };
            Ok(ReportEntry { verdict, reverified })
        })
        .collect::<Result<_>>()?;

    let mut counts: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
    let mut totals: BTreeMap<String, usize> = BTreeMap::new();
    for e in &verdicts {
        let s = e.verdict.status.as_str().to_string();
        *counts.entry(e.verdict.check_id.clone()).or_default().entry(s.clone()).or_default() += 1;
        *totals.entry(s).or_default() += 1;
    }
    Ok(Report {
        seed: cfg.seed,
        filter: cfg.filter.text().to_string(),
        checks: specs.iter().map(|s| s.id.to_string()).collect(),
        groups: entries.iter().map(|e| e.name.clone()).collect(),
        counts,
        totals,
        entries: verdicts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_filter_gives_empty_report() {
        let cat = Catalog::from_text("", 64).unwrap();
        let cfg = SuiteConfig::new(Filter::parse("all").unwrap(), 0);
        let r = run_suite(&cat, &cfg).unwrap();
        assert!(r.entries.is_empty());
        assert!(r.totals.is_empty());
    }

    #[test]
    fn unknown_check_is_an_error() {
        let mut cfg = SuiteConfig::new(Filter::parse("all").unwrap(), 0);
        cfg.checks = vec!["no_such_check".into()];
        assert!(matches!(run_suite(Catalog::builtin(), &cfg), Err(Error::UnknownCheck(_))));
    }

    #[test]
    fn same_seed_same_report() {
        let mut cfg = SuiteConfig::new(Filter::parse("order<=8").unwrap(), 3);
        cfg.checks = vec!["annihilator_duality".into(), "extension_h1_upper".into()];
        let a = run_suite(Catalog::builtin(), &cfg).unwrap().to_json();
        let b = run_suite(Catalog::builtin(), &cfg).unwrap().to_json();
        assert_eq!(a, b);
    }
}
