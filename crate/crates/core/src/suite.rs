//! The acceptance corpus runner.
//!
//! Every criterion is recomputed from scratch on the configured corpus.
//! Instances fan out over rayon; results are collected in enumeration
//! order, so the JSON report depends only on the configuration.

use crate::corpus::{self, CorpusGroup};
use crate::cover::{cover_placement, greedy_translate_cover, weak_meyniel_report, Branch};
use crate::game::{run, AdversarialRobber, AdversaryAnalysis, GameRules, UniformRandom};
use crate::graph::{AlgebraicGraph, Family, Graph};
use crate::group::{Automorphism, Elem, GenSet};
use crate::instance::{InstanceSpec, RuleOverrides, SToken};
use crate::oracle::{self, CopNumber, OracleConfig};
use crate::strategy::{
    capture_bound, check_hypotheses, verify_lemma_transitions, LabelledCops, LemmaReport, Mutation,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::sync::Arc;
use std::time::{Duration, Instant};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Failure records kept per criterion before the rest is only counted.
const MAX_RECORDS: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Group specs; `None` means the built-in corpus.
    pub groups: Option<Vec<String>>,
    pub max_s: usize,
    /// Order limit for the Cayley sum sweep and the plain Cayley Meyniel
    /// instances.
    pub sum_max_order: usize,
    pub twisted_max_order: usize,
    pub undirected_max_order: usize,
    /// Symmetric sets per group in the undirectedness sweep.
    pub undirected_s_cap: usize,
    /// Automorphisms per group in the undirectedness sweep.
    pub undirected_sigma_cap: usize,
    /// Random, mostly non-symmetric sets per group in the same sweep.
    pub undirected_random_sets: usize,
    pub lemma_min_rounds: usize,
    /// Uniform-random robber games per strategy instance.
    pub random_games: usize,
    pub oracle_state_cap: u64,
    pub adversary_state_cap: usize,
    pub oracle_time_limit_secs: f64,
    /// Order limit for the classical-vs-standard rules comparison.
    pub rule_sensitivity_max_order: usize,
    /// Order limit for the may-pass robber experiment.
    pub may_pass_max_order: usize,
    pub mutation: Mutation,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            groups: None,
            max_s: 6,
            sum_max_order: 16,
            twisted_max_order: 12,
            undirected_max_order: 24,
            undirected_s_cap: 1000,
            undirected_sigma_cap: 16,
            undirected_random_sets: 64,
            lemma_min_rounds: 10_000,
            random_games: 2,
            oracle_state_cap: oracle::DEFAULT_STATE_CAP,
            adversary_state_cap: crate::game::DEFAULT_STATE_CAP,
            oracle_time_limit_secs: 10.0,
            rule_sensitivity_max_order: 10,
            may_pass_max_order: 8,
            mutation: Mutation::None,
        }
    }
}

impl SuiteConfig {
    pub fn from_toml(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }

    fn group_specs(&self) -> Vec<String> {
        self.groups
            .clone()
            .unwrap_or_else(corpus::default_group_specs)
    }

    fn oracle(&self) -> OracleConfig {
        OracleConfig {
            state_cap: self.oracle_state_cap,
            ..OracleConfig::default()
        }
    }
}

/// One failing (or noteworthy) instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceRecord {
    pub id: String,
    pub family: Family,
    pub group: String,
    pub s: Vec<Elem>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<Elem>>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub summary: String,
    pub details: serde_json::Value,
    pub failures: Vec<InstanceRecord>,
    pub failures_omitted: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Findings {
    /// Symmetric generating sets checked for `max word length ≤ |G|/2`.
    pub word_length_checked: usize,
    pub word_length_counterexamples: Vec<InstanceRecord>,
    /// Strategy against an adversarial robber that may stay put.
    pub may_pass_instances: usize,
    pub may_pass_captured: usize,
    pub may_pass_evaded: usize,
    pub may_pass_errors: usize,
    /// Cop number under cops-first rules against robber-first rules.
    pub rules_compared: usize,
    pub rules_equal: usize,
    pub rules_classical_lower: usize,
    pub rules_classical_higher: usize,
    pub rules_unresolved: usize,
    /// Undirected, connected, symmetric twisted instances the strategy
    /// refuses for lack of conjugation closure or `σ(S) = S`.
    pub twisted_excluded_by_strategy: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub seed: u64,
    pub config_hash: String,
    pub config: SuiteConfig,
    /// SHA-256 over the ids of every instance visited.
    pub corpus_hash: String,
    pub instance_count: usize,
    pub warnings: Vec<String>,
    pub criteria: Vec<CriterionResult>,
    pub findings: Findings,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn failed_ids(&self) -> Vec<u32> {
        self.criteria
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.id)
            .collect()
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "suite v{} seed={} config={}",
            self.tool_version,
            self.seed,
            &self.config_hash[..12]
        )
        .unwrap();
        writeln!(
            out,
            "instances: {}  corpus={}",
            self.instance_count,
            &self.corpus_hash[..12]
        )
        .unwrap();
        for w in &self.warnings {
            writeln!(out, "warning: {w}").unwrap();
        }
        for c in &self.criteria {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            writeln!(out, "[{mark}] {}. {}: {}", c.id, c.name, c.summary).unwrap();
        }
        let f = &self.findings;
        writeln!(
            out,
            "finding: word length ≤ |G|/2 on {} sets, {} counterexamples",
            f.word_length_checked,
            f.word_length_counterexamples.len()
        )
        .unwrap();
        writeln!(
            out,
            "finding: may-pass robber vs strategy on {} instances: {} captured, {} evaded, {} errors",
            f.may_pass_instances, f.may_pass_captured, f.may_pass_evaded, f.may_pass_errors
        )
        .unwrap();
        writeln!(
            out,
            "finding: cops-first vs robber-first cop number on {} graphs: {} equal, {} lower, {} higher, {} unresolved",
            f.rules_compared, f.rules_equal, f.rules_classical_lower, f.rules_classical_higher, f.rules_unresolved
        )
        .unwrap();
        writeln!(
            out,
            "finding: {} undirected twisted instances outside the strategy's extra hypotheses",
            f.twisted_excluded_by_strategy
        )
        .unwrap();
        let verdict = if self.passed() {
            "all criteria pass".to_string()
        } else {
            format!("failed: {:?}", self.failed_ids())
        };
        writeln!(out, "{verdict}").unwrap();
        out
    }
}

/// A graph in the corpus together with its provenance.
#[derive(Debug, Clone)]
struct Case {
    id: String,
    group: String,
    graph: Arc<AlgebraicGraph>,
}

impl Case {
    fn new(
        group: &CorpusGroup,
        family: Family,
        s: &[Elem],
        sigma: Option<&Automorphism>,
    ) -> Option<Case> {
        let genset = GenSet::new(group.group.clone(), s.iter().copied()).ok()?;
        let graph = AlgebraicGraph::build(family, genset, sigma.cloned()).ok()?;
        let spec = InstanceSpec {
            family,
            group: group.spec.clone(),
            s: s.iter().map(|&x| SToken::Element(x)).collect(),
            sigma: sigma.map(Automorphism::to_images_text),
            rules: RuleOverrides::default(),
        };
        Some(Case {
            id: spec.hash()[..16].to_string(),
            group: group.spec.to_string(),
            graph: Arc::new(graph),
        })
    }

    fn record(&self, detail: impl Into<String>) -> InstanceRecord {
        InstanceRecord {
            id: self.id.clone(),
            family: self.graph.family(),
            group: self.group.clone(),
            s: self.graph.genset().members().to_vec(),
            sigma: self.graph.sigma_opt().map(|a| a.images().to_vec()),
            detail: detail.into(),
        }
    }
}

/// Per-instance results of the strategy protocol.
#[derive(Debug, Clone)]
struct StrategyOutcome {
    oracle: Result<CopNumber, String>,
    /// Bound or evasion failures of the adversarial search.
    adversary_failures: Vec<String>,
    evasions: usize,
    bound_violations: usize,
    adversary_starts: usize,
    worst_slack: Option<i64>,
    lemma: LemmaReport,
    random_failures: Vec<String>,
    may_pass: Option<Result<bool, String>>,
}

fn instance_seed(seed: u64, index: usize, salt: u64) -> u64 {
    seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ salt.wrapping_mul(0xD1B5_4A32_D192_ED03)
}

fn run_strategy(
    case: &Case,
    index: usize,
    cfg: &SuiteConfig,
    run_oracle: bool,
    may_pass: bool,
) -> StrategyOutcome {
    let graph = &case.graph;
    let k = graph.genset().len();
    let oracle = if run_oracle {
        oracle::cop_number(graph.graph(), GameRules::standard(), &cfg.oracle(), Some(k))
            .map(|r| r.value)
            .map_err(|e| e.to_string())
    } else {
        Err("not run".into())
    };
    let mut out = StrategyOutcome {
        oracle,
        adversary_failures: Vec::new(),
        evasions: 0,
        bound_violations: 0,
        adversary_starts: 0,
        worst_slack: None,
        lemma: LemmaReport::default(),
        random_failures: Vec::new(),
        may_pass: None,
    };
    let strategy = match LabelledCops::with_mutation(graph.clone(), cfg.mutation) {
        Ok(s) => s,
        Err(e) => {
            out.adversary_failures
                .push(format!("strategy refused: {e}"));
            return out;
        }
    };
    let bounds: Vec<usize> = match graph
        .group()
        .elements()
        .map(|x| capture_bound(graph, x))
        .collect()
    {
        Ok(b) => b,
        Err(e) => {
            out.adversary_failures.push(format!("word lengths: {e}"));
            return out;
        }
    };
    let rules =
        GameRules::forced_move().with_max_rounds(bounds.iter().copied().max().unwrap_or(1) + 1);
    match AdversaryAnalysis::solve(
        graph.as_ref(),
        strategy.clone(),
        k,
        rules,
        cfg.adversary_state_cap,
    ) {
        Ok(analysis) => {
            let analysis = Arc::new(analysis);
            for (start, value) in analysis.values().iter().enumerate() {
                out.adversary_starts += 1;
                match value {
                    None => {
                        out.evasions += 1;
                        out.adversary_failures
                            .push(format!("robber evades from {start}"));
                    }
                    Some(v) => {
                        let slack = bounds[start] as i64 - *v as i64;
                        out.worst_slack = Some(out.worst_slack.map_or(slack, |w| w.min(slack)));
                        if slack < 0 {
                            out.bound_violations += 1;
                            out.adversary_failures.push(format!(
                                "capture from {start} takes {v} rounds, bound {}",
                                bounds[start]
                            ));
                        }
                    }
                }
            }
            let start = analysis.best_start();
            if !analysis.initial_cops().contains(&start) {
                let mut robber = AdversarialRobber::starting_at(analysis.clone(), start);
                match run(graph.as_ref(), k, rules, &mut robber, &mut strategy.clone()) {
                    Ok(trace) => out.lemma.merge(verify_lemma_transitions(graph, &trace)),
                    Err(e) => out
                        .adversary_failures
                        .push(format!("replay from {start}: {e}")),
                }
            }
        }
        Err(e) => out.adversary_failures.push(format!("adversary: {e}")),
    }
    for game in 0..cfg.random_games {
        let mut robber = UniformRandom::new(instance_seed(cfg.seed, index, game as u64 + 1));
        match run(graph.as_ref(), k, rules, &mut robber, &mut strategy.clone()) {
            Ok(trace) => {
                let captured = trace
                    .capture_round()
                    .filter(|&r| r <= bounds[trace.initial_robber])
                    .is_some();
                if !captured {
                    out.random_failures
                        .push(format!("random game {game} not captured within bound"));
                }
                out.lemma.merge(verify_lemma_transitions(graph, &trace));
            }
            Err(e) => out.random_failures.push(format!("random game {game}: {e}")),
        }
    }
    if may_pass {
        let rules = GameRules::standard().with_max_rounds(rules.max_rounds);
        out.may_pass = Some(
            AdversaryAnalysis::solve(graph.as_ref(), strategy, k, rules, cfg.adversary_state_cap)
                .map(|a| a.values().iter().all(Option::is_some))
                .map_err(|e| e.to_string()),
        );
    }
    out
}

/// Collects failure records, keeping the first `MAX_RECORDS`.
#[derive(Default)]
struct Failures {
    kept: Vec<InstanceRecord>,
    omitted: usize,
}

impl Failures {
    fn push(&mut self, record: InstanceRecord) {
        if self.kept.len() < MAX_RECORDS {
            self.kept.push(record);
        } else {
            self.omitted += 1;
        }
    }

    fn count(&self) -> usize {
        self.kept.len() + self.omitted
    }
}

fn criterion(
    id: u32,
    name: &str,
    passed: bool,
    summary: String,
    details: serde_json::Value,
    f: Failures,
) -> CriterionResult {
    CriterionResult {
        id,
        name: name.to_string(),
        passed,
        summary,
        details,
        failures: f.kept,
        failures_omitted: f.omitted,
    }
}

fn sum_cases(groups: &[CorpusGroup], cfg: &SuiteConfig) -> Vec<Case> {
    let mut cases = Vec::new();
    for g in groups
        .iter()
        .filter(|g| g.group.order() <= cfg.sum_max_order)
    {
        for s in corpus::normal_symmetric_subsets(&g.group, cfg.max_s) {
            let Some(case) = Case::new(g, Family::CayleySum, &s, None) else {
                continue;
            };
            if case.graph.genset().generates()
                && case.graph.is_undirected()
                && case.graph.is_connected().unwrap_or(false)
            {
                cases.push(case);
            }
        }
    }
    cases
}

fn plain_cayley_cases(groups: &[CorpusGroup], cfg: &SuiteConfig) -> Vec<Case> {
    let mut cases = Vec::new();
    for g in groups
        .iter()
        .filter(|g| g.group.order() <= cfg.sum_max_order)
    {
        for s in corpus::normal_symmetric_subsets(&g.group, cfg.max_s) {
            let Some(case) = Case::new(g, Family::Cayley, &s, None) else {
                continue;
            };
            if case.graph.genset().generates() {
                cases.push(case);
            }
        }
    }
    cases
}

/// Twisted instances whose graph is undirected and connected with
/// symmetric `S`, flagged by whether the strategy's hypotheses hold.
fn twisted_cases(groups: &[CorpusGroup], cfg: &SuiteConfig) -> Vec<(Case, bool)> {
    let mut cases = Vec::new();
    for g in groups
        .iter()
        .filter(|g| g.group.order() <= cfg.twisted_max_order)
    {
        let sigmas = Automorphism::enumerate(&g.group, Some(2));
        let sets = corpus::symmetric_subsets(&g.group, cfg.max_s);
        for family in [Family::TwistedCayley, Family::TwistedCayleySum] {
            for sigma in &sigmas {
                for s in &sets {
                    let Some(case) = Case::new(g, family, s, Some(sigma)) else {
                        continue;
                    };
                    if !(case.graph.is_undirected() && case.graph.is_connected().unwrap_or(false)) {
                        continue;
                    }
                    let holds = check_hypotheses(&case.graph).holds();
                    cases.push((case, holds));
                }
            }
        }
    }
    cases
}

struct StrategyCriterion {
    result: CriterionResult,
    lemma: LemmaReport,
    random_failures: Failures,
    may_pass: [usize; 4],
}

fn strategy_criterion(
    id: u32,
    name: &str,
    cases: &[Case],
    outcomes: &[StrategyOutcome],
    unchecked_oracle: &[Case],
    unchecked_outcomes: &[Result<CopNumber, String>],
) -> StrategyCriterion {
    let mut failures = Failures::default();
    let mut random_failures = Failures::default();
    let mut lemma = LemmaReport::default();
    let mut oracle_exact = 0;
    let mut oracle_violations = 0;
    let [mut evasions, mut bound_violations, mut strategy_errors] = [0usize; 3];
    let mut worst_slack: Option<i64> = None;
    let mut starts = 0;
    let mut may_pass = [0usize; 4];
    let mut check_oracle =
        |case: &Case, value: &Result<CopNumber, String>, failures: &mut Failures| {
            let k = case.graph.genset().len();
            match value {
                Ok(CopNumber::Exact(c)) if *c <= k => oracle_exact += 1,
                Ok(v) => {
                    oracle_violations += 1;
                    failures.push(case.record(format!("oracle cop number {v} exceeds |S| = {k}")))
                }
                Err(e) => {
                    oracle_violations += 1;
                    failures.push(case.record(format!("oracle: {e}")))
                }
            }
        };
    for (case, out) in cases.iter().zip(outcomes) {
        check_oracle(case, &out.oracle, &mut failures);
        for f in &out.adversary_failures {
            failures.push(case.record(f.clone()));
        }
        for f in &out.random_failures {
            random_failures.push(case.record(f.clone()));
        }
        starts += out.adversary_starts;
        evasions += out.evasions;
        bound_violations += out.bound_violations;
        strategy_errors += out.adversary_failures.len() - out.evasions - out.bound_violations;
        if let Some(s) = out.worst_slack {
            worst_slack = Some(worst_slack.map_or(s, |w| w.min(s)));
        }
        lemma.merge(out.lemma.clone());
        if let Some(m) = &out.may_pass {
            may_pass[0] += 1;
            match m {
                Ok(true) => may_pass[1] += 1,
                Ok(false) => may_pass[2] += 1,
                Err(_) => may_pass[3] += 1,
            }
        }
    }
    for (case, value) in unchecked_oracle.iter().zip(unchecked_outcomes) {
        check_oracle(case, value, &mut failures);
    }
    let instances = cases.len() + unchecked_oracle.len();
    let passed = failures.count() == 0;
    let summary = format!(
        "{} instances ({} with strategy), {} oracle values ≤ |S|, {} adversarial starts, {} violations \
         ({} oracle, {} evasions, {} over bound, {} errors)",
        instances,
        cases.len(),
        oracle_exact,
        starts,
        failures.count(),
        oracle_violations,
        evasions,
        bound_violations,
        strategy_errors
    );
    let details = serde_json::json!({
        "instances": instances,
        "strategy_instances": cases.len(),
        "oracle_within_s": oracle_exact,
        "adversarial_starts": starts,
        "min_bound_slack": worst_slack,
        "violations": failures.count(),
        "oracle_violations": oracle_violations,
        "strategy_evasions": evasions,
        "bound_violations": bound_violations,
        "strategy_errors": strategy_errors,
    });
    StrategyCriterion {
        result: criterion(id, name, passed, summary, details, failures),
        lemma,
        random_failures,
        may_pass,
    }
}

fn undirected_criterion(groups: &[CorpusGroup], cfg: &SuiteConfig) -> CriterionResult {
    let per_group: Vec<(usize, [usize; 4], Vec<InstanceRecord>, bool)> = groups
        .par_iter()
        .enumerate()
        .filter(|(_, g)| g.group.order() <= cfg.undirected_max_order)
        .map(|(gi, g)| {
            let (sym, sampled_s) = corpus::sample(
                corpus::symmetric_subsets(&g.group, cfg.max_s),
                cfg.undirected_s_cap,
                instance_seed(cfg.seed, gi, 101),
            );
            let mut sets = sym;
            sets.extend(corpus::random_subsets(
                &g.group,
                cfg.max_s,
                cfg.undirected_random_sets,
                instance_seed(cfg.seed, gi, 102),
            ));
            sets.sort();
            sets.dedup();
            let (sigmas, sampled_sigma) = corpus::sample(
                Automorphism::enumerate(&g.group, Some(2)),
                cfg.undirected_sigma_cap,
                instance_seed(cfg.seed, gi, 103),
            );
            let mut count = 0;
            let mut per_family = [0usize; 4];
            let mut bad = Vec::new();
            for s in &sets {
                let Ok(genset) = GenSet::new(g.group.clone(), s.iter().copied()) else {
                    continue;
                };
                for (fi, family) in Family::ALL.into_iter().enumerate() {
                    let options: Vec<Option<&Automorphism>> = if family.is_twisted() {
                        sigmas.iter().map(Some).collect()
                    } else {
                        vec![None]
                    };
                    for sigma in options {
                        let Ok(graph) =
                            AlgebraicGraph::build(family, genset.clone(), sigma.cloned())
                        else {
                            continue;
                        };
                        count += 1;
                        per_family[fi] += 1;
                        let check = graph.check_undirected_criterion();
                        if !check.agree {
                            let case = Case::new(g, family, s, sigma).expect("built above");
                            bad.push(case.record(format!(
                                "predicted undirected = {}, observed = {}",
                                check.predicted, check.observed
                            )));
                        }
                    }
                }
            }
            (count, per_family, bad, sampled_s || sampled_sigma)
        })
        .collect();
    let mut failures = Failures::default();
    let mut total = 0;
    let mut per_family = [0usize; 4];
    let mut sampled_groups = 0;
    for (count, fam, bad, sampled) in per_group {
        total += count;
        for i in 0..4 {
            per_family[i] += fam[i];
        }
        sampled_groups += sampled as usize;
        for b in bad {
            failures.push(b);
        }
    }
    let disagreements = failures.count();
    let summary = format!(
        "{total} instances, {disagreements} disagreements between prediction and adjacency"
    );
    let details = serde_json::json!({
        "instances": total,
        "per_family": Family::ALL.iter().zip(per_family).map(|(f, c)| (f.as_str(), c)).collect::<std::collections::BTreeMap<_, _>>(),
        "groups_sampled": sampled_groups,
        "disagreements": disagreements,
    });
    criterion(
        4,
        "undirectedness criteria",
        disagreements == 0,
        summary,
        details,
        failures,
    )
}

fn oracle_criterion(cfg: &SuiteConfig) -> CriterionResult {
    let limit = Duration::from_secs_f64(cfg.oracle_time_limit_secs);
    let mut graphs: Vec<(String, Graph, usize)> = Vec::new();
    for n in 1..=12 {
        graphs.push((format!("P{n}"), Graph::path(n), 1));
    }
    for n in 4..=12 {
        graphs.push((format!("C{n}"), Graph::cycle(n), 2));
    }
    graphs.push(("Petersen".into(), Graph::petersen(), 3));
    let mut failures = Vec::new();
    let mut values = serde_json::Map::new();
    let mut slow = 0;
    for (name, graph, want) in &graphs {
        let start = Instant::now();
        let got = oracle::cop_number(graph, GameRules::standard(), &cfg.oracle(), None);
        let elapsed = start.elapsed();
        let value = got
            .as_ref()
            .map(|r| r.value.to_string())
            .unwrap_or_else(|e| e.to_string());
        values.insert(name.clone(), serde_json::Value::String(value.clone()));
        if elapsed > limit {
            slow += 1;
            failures.push(format!("{name} exceeded the time limit"));
        }
        if got.map(|r| r.value) != Ok(CopNumber::Exact(*want)) {
            failures.push(format!("{name}: expected {want}, got {value}"));
        }
    }
    let passed = failures.is_empty();
    let summary = format!(
        "{} graphs, {} wrong values, {} over {}s",
        graphs.len(),
        failures.len() - slow,
        slow,
        cfg.oracle_time_limit_secs
    );
    let details = serde_json::json!({ "values": values, "failures": failures });
    criterion(
        5,
        "oracle self-checks",
        passed,
        summary,
        details,
        Failures::default(),
    )
}

fn meyniel_criterion(cases: &[(&Case, Option<CopNumber>)]) -> CriterionResult {
    let reports: Vec<_> = cases
        .par_iter()
        .map(|(case, oracle)| {
            let report = weak_meyniel_report(&case.graph, *oracle);
            let cover = greedy_translate_cover(case.graph.genset());
            let placement = cover_placement(&case.graph, &cover.translates);
            (report, cover, placement)
        })
        .collect();
    let mut failures = Failures::default();
    let mut branches = std::collections::BTreeMap::new();
    let mut covers_met_bound = 0;
    let mut branch_disagree = 0;
    let mut with_oracle = 0;
    for ((case, _), (report, cover, placement)) in cases.iter().zip(&reports) {
        *branches
            .entry(
                serde_json::to_value(report.branch)
                    .unwrap()
                    .as_str()
                    .unwrap()
                    .to_string(),
            )
            .or_insert(0usize) += 1;
        covers_met_bound += cover.met_bound as usize;
        branch_disagree += (report.branch != report.branch_log2) as usize;
        with_oracle += report.oracle.and_then(CopNumber::exact).is_some() as usize;
        let mut problems = Vec::new();
        if !cover.covers {
            problems.push("greedy cover misses part of G".to_string());
        }
        if !placement.dominates {
            problems.push("cover placement does not dominate".to_string());
        }
        match report.certified {
            None => problems.push(format!("no certified count on branch {:?}", report.branch)),
            Some(c) => {
                if report.oracle_consistent == Some(false) {
                    problems.push(format!("certified {c} below oracle {:?}", report.oracle));
                }
                if report.within_bound_ln == Some(false) {
                    problems.push(format!(
                        "certified {c} above 2√n·ln n = {:.3}",
                        report.bound_ln
                    ));
                }
            }
        }
        if report.branch != Branch::ShortCircuit
            && report.oracle.and_then(CopNumber::exact).is_none()
        {
            problems.push("no oracle value".to_string());
        }
        if !problems.is_empty() {
            failures.push(case.record(problems.join("; ")));
        }
    }
    let n = cases.len();
    let summary = format!(
        "{n} instances, {} checked against the oracle, {} violations",
        with_oracle,
        failures.count()
    );
    let details = serde_json::json!({
        "instances": n,
        "branches": branches,
        "branch_differs_under_log2": branch_disagree,
        "greedy_covers_within_2_sqrt_n": covers_met_bound,
        "violations": failures.count(),
    });
    criterion(
        6,
        "weak Meyniel bound",
        failures.count() == 0,
        summary,
        details,
        failures,
    )
}

fn lemma_criterion(lemma: &LemmaReport, random: Failures, cfg: &SuiteConfig) -> CriterionResult {
    let enough = lemma.rounds >= cfg.lemma_min_rounds;
    let passed =
        enough && lemma.transitions_clean() && lemma.capture_clause_clean() && random.count() == 0;
    let summary = format!(
        "{} rounds (min {}), tail {}/{} clean, power {}/{} clean ({} via α−2), capture clause held {}/{}, {} random-game failures",
        lemma.rounds,
        cfg.lemma_min_rounds,
        lemma.tail_checked - lemma.tail_violations,
        lemma.tail_checked,
        lemma.power_checked - lemma.power_violations,
        lemma.power_checked,
        lemma.power_minus_two,
        lemma.capture_held,
        lemma.capture_fired,
        random.count()
    );
    let details = serde_json::json!({
        "rounds": lemma.rounds,
        "enough_rounds": enough,
        "tail_checked": lemma.tail_checked,
        "tail_violations": lemma.tail_violations,
        "power_checked": lemma.power_checked,
        "power_violations": lemma.power_violations,
        "power_minus_two": lemma.power_minus_two,
        "annotation_mismatches": lemma.annotation_mismatches,
        "capture_fired": lemma.capture_fired,
        "capture_held": lemma.capture_held,
        "transitions_clean": lemma.transitions_clean(),
        "capture_clause_clean": lemma.capture_clause_clean(),
        "first_violations": lemma.violations.iter().take(MAX_RECORDS).collect::<Vec<_>>(),
        "violations_total": lemma.violations.len(),
        "random_game_failures": random.count(),
    });
    criterion(3, "reduction lemma", passed, summary, details, random)
}

fn word_length_finding(groups: &[CorpusGroup], cfg: &SuiteConfig) -> (usize, Vec<InstanceRecord>) {
    let per_group: Vec<(usize, Vec<InstanceRecord>)> = groups
        .par_iter()
        .enumerate()
        .filter(|(_, g)| g.group.order() <= cfg.undirected_max_order)
        .map(|(gi, g)| {
            let (sets, _) = corpus::sample(
                corpus::symmetric_subsets(&g.group, cfg.max_s),
                cfg.undirected_s_cap,
                instance_seed(cfg.seed, gi, 101),
            );
            let mut checked = 0;
            let mut bad = Vec::new();
            for s in sets {
                let genset =
                    GenSet::new(g.group.clone(), s.iter().copied()).expect("valid elements");
                let Ok(lengths) = genset.word_lengths() else {
                    continue;
                };
                checked += 1;
                let m = lengths.into_iter().max().unwrap_or(0);
                if 2 * m > g.group.order() {
                    let case = Case::new(g, Family::Cayley, &s, None).expect("valid set");
                    bad.push(case.record(format!(
                        "max word length {m} > |G|/2 = {}",
                        g.group.order() as f64 / 2.0
                    )));
                }
            }
            (checked, bad)
        })
        .collect();
    let checked = per_group.iter().map(|(c, _)| c).sum();
    let mut bad: Vec<InstanceRecord> = per_group.into_iter().flat_map(|(_, b)| b).collect();
    bad.truncate(MAX_RECORDS);
    (checked, bad)
}

fn rule_sensitivity(cases: &[&Case], cfg: &SuiteConfig) -> [usize; 5] {
    let results: Vec<Option<std::cmp::Ordering>> = cases
        .par_iter()
        .filter(|c| c.graph.group().order() <= cfg.rule_sensitivity_max_order)
        .map(|c| {
            let value = |rules| {
                oracle::cop_number(c.graph.graph(), rules, &cfg.oracle(), None)
                    .ok()
                    .and_then(|r| r.value.exact())
            };
            Some(value(GameRules::classical())?.cmp(&value(GameRules::standard())?))
        })
        .collect();
    let mut out = [0usize; 5];
    out[0] = results.len();
    for r in results {
        match r {
            Some(std::cmp::Ordering::Equal) => out[1] += 1,
            Some(std::cmp::Ordering::Less) => out[2] += 1,
            Some(std::cmp::Ordering::Greater) => out[3] += 1,
            None => out[4] += 1,
        }
    }
    out
}

/// Runs every criterion except determinism, which needs a second run.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport, String> {
    let groups = corpus::build_groups(&cfg.group_specs()).map_err(|e| e.to_string())?;
    let mut warnings = Vec::new();
    if groups.is_empty() {
        warnings.push("empty corpus: every criterion holds vacuously".to_string());
    }

    let sum = sum_cases(&groups, cfg);
    let sum_out: Vec<StrategyOutcome> = sum
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            run_strategy(
                c,
                i,
                cfg,
                true,
                c.graph.group().order() <= cfg.may_pass_max_order,
            )
        })
        .collect();

    let twisted = twisted_cases(&groups, cfg);
    let (tw_strategy, tw_oracle_only): (Vec<_>, Vec<_>) =
        twisted.into_iter().partition(|(_, holds)| *holds);
    let tw_strategy: Vec<Case> = tw_strategy.into_iter().map(|(c, _)| c).collect();
    let tw_oracle_only: Vec<Case> = tw_oracle_only.into_iter().map(|(c, _)| c).collect();
    let offset = sum.len();
    let tw_out: Vec<StrategyOutcome> = tw_strategy
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            run_strategy(
                c,
                offset + i,
                cfg,
                true,
                c.graph.group().order() <= cfg.may_pass_max_order,
            )
        })
        .collect();
    let tw_only_out: Vec<Result<CopNumber, String>> = tw_oracle_only
        .par_iter()
        .map(|c| {
            oracle::cop_number(
                c.graph.graph(),
                GameRules::standard(),
                &cfg.oracle(),
                Some(c.graph.genset().len()),
            )
            .map(|r| r.value)
            .map_err(|e| e.to_string())
        })
        .collect();

    let plain = plain_cayley_cases(&groups, cfg);
    let plain_oracle: Vec<Option<CopNumber>> = plain
        .par_iter()
        .map(|c| {
            oracle::cop_number(c.graph.graph(), GameRules::standard(), &cfg.oracle(), None)
                .ok()
                .map(|r| r.value)
        })
        .collect();

    let c1 = strategy_criterion(
        1,
        "cop number of Cayley sum graphs",
        &sum,
        &sum_out,
        &[],
        &[],
    );
    let c2 = strategy_criterion(
        2,
        "cop number of twisted graphs",
        &tw_strategy,
        &tw_out,
        &tw_oracle_only,
        &tw_only_out,
    );

    let mut lemma = c1.lemma.clone();
    lemma.merge(c2.lemma.clone());
    let mut random = c1.random_failures;
    for r in c2.random_failures.kept {
        random.push(r);
    }
    random.omitted += c2.random_failures.omitted;
    let c3 = lemma_criterion(&lemma, random, cfg);

    let c4 = undirected_criterion(&groups, cfg);
    let c5 = oracle_criterion(cfg);

    let mut meyniel: Vec<(&Case, Option<CopNumber>)> = Vec::new();
    meyniel.extend(
        sum.iter()
            .zip(&sum_out)
            .map(|(c, o)| (c, o.oracle.clone().ok())),
    );
    meyniel.extend(
        tw_strategy
            .iter()
            .zip(&tw_out)
            .map(|(c, o)| (c, o.oracle.clone().ok())),
    );
    meyniel.extend(plain.iter().zip(plain_oracle.iter().copied()));
    let c6 = meyniel_criterion(&meyniel);

    let (word_checked, word_bad) = word_length_finding(&groups, cfg);
    let mut compared: Vec<&Case> = sum.iter().collect();
    compared.extend(tw_strategy.iter());
    let rules = rule_sensitivity(&compared, cfg);
    let may_pass: Vec<usize> = (0..4).map(|i| c1.may_pass[i] + c2.may_pass[i]).collect();

    let mut hasher = Sha256::new();
    let mut instance_count = 0;
    for c in sum
        .iter()
        .chain(&tw_strategy)
        .chain(&tw_oracle_only)
        .chain(&plain)
    {
        hasher.update(c.id.as_bytes());
        instance_count += 1;
    }

    Ok(SuiteReport {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION.to_string(),
        seed: cfg.seed,
        config_hash: cfg.hash(),
        config: cfg.clone(),
        corpus_hash: hex::encode(hasher.finalize()),
        instance_count,
        warnings,
        criteria: vec![c1.result, c2.result, c3, c4, c5, c6],
        findings: Findings {
            word_length_checked: word_checked,
            word_length_counterexamples: word_bad,
            may_pass_instances: may_pass[0],
            may_pass_captured: may_pass[1],
            may_pass_evaded: may_pass[2],
            may_pass_errors: may_pass[3],
            rules_compared: rules[0],
            rules_equal: rules[1],
            rules_classical_lower: rules[2],
            rules_classical_higher: rules[3],
            rules_unresolved: rules[4],
            twisted_excluded_by_strategy: tw_oracle_only.len(),
        },
    })
}

/// Criterion 7: a second run must serialize to the same bytes.
pub fn determinism_criterion(
    first: &SuiteReport,
    cfg: &SuiteConfig,
) -> Result<CriterionResult, String> {
    let second = run_suite(cfg)?;
    let (a, b) = (first.to_json(), second.to_json());
    let same = a == b;
    let digest = |s: &str| hex::encode(Sha256::digest(s.as_bytes()));
    let summary = if same {
        format!("two runs gave identical reports ({} bytes)", a.len())
    } else {
        "two runs with the same seed gave different reports".to_string()
    };
    let details = serde_json::json!({ "bytes": a.len(), "identical": same, "sha256": digest(&a), "second_sha256": digest(&b) });
    Ok(criterion(
        7,
        "determinism",
        same,
        summary,
        details,
        Failures::default(),
    ))
}

/// Full suite: the six computed criteria plus the determinism rerun.
pub fn run_full(cfg: &SuiteConfig) -> Result<SuiteReport, String> {
    let mut report = run_suite(cfg)?;
    let c7 = determinism_criterion(&report, cfg)?;
    report.criteria.push(c7);
    Ok(report)
}
