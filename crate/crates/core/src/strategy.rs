//! The labelled-cop strategy for Cayley sum, twisted Cayley and twisted
//! Cayley sum graphs.
//!
//! `|S|` cops start at the identity, one per label `s ∈ S`. Each step the
//! robber's move `y → y'` exposes a *connection* `c ∈ S`; every cop with
//! label `s` measures its displacement `d` to the robber, decomposes it as
//! `d = w·s^i` with `|w|` minimal, and then steps by one of
//!
//! 1. `c` when `c ∉ ⟨s⟩`,
//! 2. `s` when `c ∈ {s, s⁻¹}` and the tail is zero,
//! 3. `c` when `c ∈ ⟨s⟩ \ {s, s⁻¹}` and the tail is zero,
//! 4. the first letter of `w` when `c ∈ ⟨s⟩` and the tail is positive,
//!
//! after which every label is conjugated to `c⁻¹sc`. The parity of the step
//! decides how displacement, connection and move are read off the group.

use crate::game::{
    Arena, CopAnnotation, CopPolicy, CopResponse, CopView, GameError, GameTrace, RoundRecord,
};
use crate::graph::{AlgebraicGraph, Family};
use crate::group::{Elem, GroupError, TailTable};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Which premise of the matching theorem holds on an instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub family: Family,
    pub symmetric: bool,
    pub conjugation_closed: bool,
    pub undirected: bool,
    pub connected: bool,
    pub generates: bool,
    pub sigma_order: Option<usize>,
    /// `σ(S) = S`; `None` for untwisted families.
    pub sigma_preserves_s: Option<bool>,
    pub failures: Vec<String>,
}

impl HypothesisReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for HypothesisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "family: {}", self.family)?;
        writeln!(f, "S symmetric: {}", self.symmetric)?;
        writeln!(f, "S closed under conjugation: {}", self.conjugation_closed)?;
        writeln!(f, "S generates G: {}", self.generates)?;
        writeln!(f, "undirected: {}", self.undirected)?;
        writeln!(f, "connected: {}", self.connected)?;
        if let Some(o) = self.sigma_order {
            writeln!(f, "sigma order: {o}")?;
        }
        if let Some(p) = self.sigma_preserves_s {
            writeln!(f, "sigma(S) = S: {p}")?;
        }
        if self.failures.is_empty() {
            write!(f, "hypotheses: hold")
        } else {
            write!(f, "hypotheses: fail ({})", self.failures.join("; "))
        }
    }
}

/// Checks the premises the strategy relies on. Plain Cayley graphs are
/// reported but never accepted: the labelled strategy does not cover them.
pub fn check_hypotheses(graph: &AlgebraicGraph) -> HypothesisReport {
    let s = graph.genset();
    let group = graph.group();
    let symmetric = s.is_symmetric();
    let conjugation_closed = s.is_conjugation_closed();
    let undirected = graph.is_undirected();
    let connected = if undirected {
        graph.is_connected().unwrap_or(false)
    } else {
        graph.graph().is_strongly_connected()
    };
    let generates = s.generates();
    let sigma_order = graph.sigma_opt().map(|a| a.order());
    let sigma_preserves_s = graph
        .sigma_opt()
        .map(|a| s.members().iter().all(|&x| s.contains(a.apply(x))));
    let mut failures = Vec::new();
    if graph.family() == Family::Cayley {
        failures.push("the labelled strategy does not apply to plain Cayley graphs".to_string());
    }
    if !symmetric {
        let bad = s
            .members()
            .iter()
            .find(|&&x| !s.contains(group.inv(x)))
            .unwrap();
        failures.push(format!(
            "S is not symmetric: inverse of {} missing",
            group.name(*bad)
        ));
    }
    if !conjugation_closed && graph.family() != Family::Cayley {
        failures.push("S is not closed under conjugation".to_string());
    }
    if !undirected {
        failures.push("graph is directed".to_string());
    }
    if !connected {
        failures.push("graph is disconnected".to_string());
    }
    if let Some(o) = sigma_order {
        if o > 2 {
            failures.push(format!("sigma has order {o}"));
        }
    }
    if sigma_preserves_s == Some(false) {
        failures.push("sigma(S) != S".to_string());
    }
    HypothesisReport {
        family: graph.family(),
        symmetric,
        conjugation_closed,
        undirected,
        connected,
        generates,
        sigma_order,
        sigma_preserves_s,
        failures,
    }
}

#[derive(Debug, Error)]
pub enum StrategyError {
    #[error("strategy hypotheses fail:\n{0}")]
    Hypotheses(Box<HypothesisReport>),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Deliberate defects used as negative controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    #[default]
    None,
    /// Case 2 steps by `s⁻¹` instead of `s`.
    FlipCase2,
}

/// Parity-dependent algebra of one family.
#[derive(Clone, Copy)]
struct Rules<'a> {
    graph: &'a AlgebraicGraph,
}

impl Rules<'_> {
    fn sigma(&self, x: Elem) -> Elem {
        self.graph.sigma().apply(x)
    }

    /// Cop-to-robber displacement at the start of step `n`.
    fn displacement(&self, odd: bool, z: Elem, y: Elem) -> Elem {
        let g = self.graph.group();
        if odd {
            return g.mul(g.inv(z), y);
        }
        match self.graph.family() {
            Family::CayleySum => g.mul(z, g.inv(y)),
            Family::TwistedCayley => self.sigma(g.mul(g.inv(z), y)),
            Family::TwistedCayleySum => self.sigma(g.mul(z, g.inv(y))),
            Family::Cayley => unreachable!(),
        }
    }

    /// Connection exposed by the robber leaving `y` along generator `t`.
    fn connection(&self, odd: bool, y: Elem, t: Elem) -> Elem {
        let g = self.graph.group();
        match (self.graph.family(), odd) {
            (Family::CayleySum | Family::TwistedCayleySum, true) => {
                g.product([g.inv(y), g.inv(t), y])
            }
            (Family::CayleySum, false) => t,
            (Family::TwistedCayley, true) => t,
            (Family::TwistedCayley | Family::TwistedCayleySum, false) => self.sigma(t),
            (Family::Cayley, _) => unreachable!(),
        }
    }

    /// Where a cop at `z` goes when stepping by `e`.
    fn advance(&self, odd: bool, z: Elem, e: Elem) -> Elem {
        let g = self.graph.group();
        match (self.graph.family(), odd) {
            (Family::CayleySum, true) => g.mul(g.inv(e), g.inv(z)),
            (Family::CayleySum, false) => g.mul(g.inv(z), e),
            (Family::TwistedCayley, true) => self.sigma(g.mul(z, e)),
            (Family::TwistedCayley, false) => g.mul(self.sigma(z), e),
            (Family::TwistedCayleySum, true) => self.sigma(g.mul(g.inv(e), g.inv(z))),
            (Family::TwistedCayleySum, false) => g.mul(self.sigma(g.inv(z)), e),
            (Family::Cayley, _) => unreachable!(),
        }
    }
}

fn is_power(graph: &AlgebraicGraph, x: Elem, s: Elem) -> bool {
    let g = graph.group();
    let mut p = g.identity();
    loop {
        if p == x {
            return true;
        }
        p = g.mul(p, s);
        if p == g.identity() {
            return false;
        }
    }
}

/// The power after a tail-zero step predicted by the reduction lemma, or
/// `None` when the lemma says nothing (connection outside `⟨s⟩`).
fn predicted_power(
    graph: &AlgebraicGraph,
    label: Elem,
    connection: Elem,
    alpha: usize,
) -> Option<usize> {
    let g = graph.group();
    if !is_power(graph, connection, label) {
        return None;
    }
    let ord = g.element_order(label);
    if connection == label {
        Some(alpha)
    } else if connection == g.inv(label) {
        Some((alpha + 2 * ord - 2) % ord)
    } else {
        Some(alpha)
    }
}

struct Shared {
    graph: Arc<AlgebraicGraph>,
    table: TailTable,
    orders: Vec<usize>,
    mutation: Mutation,
}

/// The strategy as a deterministic cop policy. Cloning is cheap; clones
/// share the precomputed tail table.
#[derive(Clone)]
pub struct LabelledCops {
    shared: Arc<Shared>,
    labels: Vec<Elem>,
    step: usize,
}

impl fmt::Debug for LabelledCops {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LabelledCops")
            .field("family", &self.shared.graph.family())
            .field("labels", &self.labels)
            .field("step", &self.step)
            .finish()
    }
}

impl LabelledCops {
    pub fn new(graph: Arc<AlgebraicGraph>) -> Result<Self, StrategyError> {
        LabelledCops::with_mutation(graph, Mutation::None)
    }

    pub fn with_mutation(
        graph: Arc<AlgebraicGraph>,
        mutation: Mutation,
    ) -> Result<Self, StrategyError> {
        let report = check_hypotheses(&graph);
        if !report.holds() {
            return Err(StrategyError::Hypotheses(Box::new(report)));
        }
        let table = TailTable::new(graph.genset())?;
        let labels = graph.genset().members().to_vec();
        Ok(LabelledCops {
            shared: Arc::new(Shared {
                orders: graph
                    .group()
                    .elements()
                    .map(|x| graph.group().element_order(x))
                    .collect(),
                graph,
                table,
                mutation,
            }),
            labels,
            step: 1,
        })
    }

    pub fn graph(&self) -> &Arc<AlgebraicGraph> {
        &self.shared.graph
    }

    pub fn cop_count(&self) -> usize {
        self.labels.len()
    }

    /// Current label of each cop.
    pub fn labels(&self) -> &[Elem] {
        &self.labels
    }

    /// The strategy step the next robber move belongs to (starts at 1;
    /// does not advance while the robber passes without a loop).
    pub fn step(&self) -> usize {
        self.step
    }

    /// `(step parity, labels)`: everything besides positions that the next
    /// response depends on.
    pub fn state_key(&self) -> (bool, Vec<Elem>) {
        (self.step % 2 == 1, self.labels.clone())
    }

    fn rules(&self) -> Rules<'_> {
        Rules {
            graph: &self.shared.graph,
        }
    }

    /// Resolves the generator behind a robber move, or `None` for a pause.
    fn generator_of(
        &self,
        from: Elem,
        to: Elem,
        given: Option<Elem>,
        pass: bool,
    ) -> Result<Option<Elem>, GameError> {
        let graph = &self.shared.graph;
        if let Some(t) = given {
            return Ok(Some(t));
        }
        let found = graph
            .genset()
            .members()
            .iter()
            .copied()
            .find(|&t| graph.step(from, t) == to);
        match found {
            None if pass => Ok(None),
            None => Err(GameError::Unsupported(format!(
                "robber move {from} -> {to} is not realized by any generator"
            ))),
            t => Ok(t),
        }
    }

    fn soundness(&self, round: usize, detail: String) -> GameError {
        let g = &self.shared.graph;
        GameError::Soundness {
            round,
            detail: format!(
                "{detail} [family {}, group {}, S {:?}, sigma {:?}, step {}]",
                g.family(),
                g.group().description(),
                g.genset().members(),
                g.sigma_opt().map(|a| a.to_images_text()),
                self.step
            ),
        }
    }

    fn respond_to(
        &mut self,
        round: usize,
        cops: &[usize],
        y: Elem,
        t: Elem,
        y_next: Elem,
    ) -> Result<CopResponse, GameError> {
        let graph = self.shared.graph.clone();
        let group = graph.group();
        let table = &self.shared.table;
        let rules = self.rules();
        let odd = self.step % 2 == 1;
        let c = rules.connection(odd, y, t);
        if !graph.genset().contains(c) {
            return Err(self.soundness(round, format!("connection {c} not in S")));
        }
        let mut positions = Vec::with_capacity(cops.len());
        let mut next_labels = Vec::with_capacity(cops.len());
        let mut annotations = Vec::with_capacity(cops.len());
        for (cop, (&z, &s)) in cops.iter().zip(&self.labels).enumerate() {
            let d = rules.displacement(odd, z, y);
            let tp = table.get(s, d);
            let (case, e) = if !table.is_power_of(c, s) {
                (1, c)
            } else if tp.tail == 0 {
                if c == s || c == group.inv(s) {
                    let e = match self.shared.mutation {
                        Mutation::FlipCase2 => group.inv(s),
                        Mutation::None => s,
                    };
                    (2, e)
                } else {
                    (3, c)
                }
            } else {
                (4, tp.witness[0])
            };
            let z_next = rules.advance(odd, z, e);
            if !graph.graph().has_edge(z, z_next) {
                return Err(self.soundness(
                    round,
                    format!("cop {cop} case {case}: move {z} -> {z_next} is not an edge"),
                ));
            }
            let s_next = group.product([group.inv(c), s, c]);
            if !graph.genset().contains(s_next) {
                return Err(self.soundness(round, format!("cop {cop}: relabel {s_next} not in S")));
            }
            positions.push(z_next);
            next_labels.push(s_next);
            annotations.push(CopAnnotation {
                cop,
                step: self.step,
                label: s,
                connection: c,
                case,
                tail: tp.tail,
                power: tp.power,
                next_label: s_next,
                next_tail: 0,
                next_power: None,
            });
        }
        let mut sorted = next_labels.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != next_labels.len() {
            return Err(self.soundness(
                round,
                format!("relabelling is not a bijection: {next_labels:?}"),
            ));
        }
        // Recompute from the new positions and compare with the lemma.
        for a in &mut annotations {
            let d = rules.displacement(!odd, positions[a.cop], y_next);
            let tp = table.get(a.next_label, d);
            a.next_tail = tp.tail;
            a.next_power = tp.power;
            if a.next_tail > a.tail {
                return Err(self.soundness(
                    round,
                    format!("cop {}: tail grew {} -> {}", a.cop, a.tail, a.next_tail),
                ));
            }
            if a.tail == 0 {
                let alpha = a.power.expect("tail zero carries a power");
                let want = table.is_power_of(a.connection, a.label).then(|| {
                    let ord = self.shared.orders[a.label];
                    if a.connection == group.inv(a.label) && a.connection != a.label {
                        (alpha + 2 * ord - 2) % ord
                    } else {
                        alpha
                    }
                });
                if let Some(want) = want {
                    if a.next_power != Some(want) {
                        return Err(self.soundness(
                            round,
                            format!(
                                "cop {}: power {alpha} -> {:?}, lemma predicts {want}",
                                a.cop, a.next_power
                            ),
                        ));
                    }
                }
            }
        }
        self.labels = next_labels;
        self.step += 1;
        Ok(CopResponse {
            positions,
            annotations,
        })
    }
}

impl CopPolicy for LabelledCops {
    fn name(&self) -> String {
        match self.shared.mutation {
            Mutation::None => "labelled-cops".into(),
            Mutation::FlipCase2 => "labelled-cops-mutant".into(),
        }
    }

    fn place(&mut self, arena: &dyn Arena, k: usize) -> Result<Vec<usize>, GameError> {
        if k != self.labels.len() {
            return Err(GameError::CopCount {
                expected: self.labels.len(),
                found: k,
            });
        }
        if arena.graph().len() != self.shared.graph.group().order() {
            return Err(GameError::Unsupported(
                "board does not match the strategy's graph".into(),
            ));
        }
        self.labels = self.shared.graph.genset().members().to_vec();
        self.step = 1;
        Ok(vec![self.shared.graph.group().identity(); k])
    }

    fn respond(
        &mut self,
        _arena: &dyn Arena,
        view: &CopView<'_>,
    ) -> Result<CopResponse, GameError> {
        let Some(mv) = view.robber_move else {
            return Err(GameError::Unsupported(
                "the strategy answers robber moves; use robber-first rules".into(),
            ));
        };
        match self.generator_of(mv.from, mv.to, mv.generator, mv.pass)? {
            Some(t) => self.respond_to(view.round, view.cops, mv.from, t, mv.to),
            // A pause with no loop to reinterpret: everyone waits.
            None => Ok(CopResponse {
                positions: view.cops.to_vec(),
                annotations: Vec::new(),
            }),
        }
    }
}

/// `(m + |G|)·|S|` with `m` the word length of the robber's start.
pub fn capture_bound(graph: &AlgebraicGraph, robber_start: Elem) -> Result<usize, GroupError> {
    let m = graph.genset().word_lengths()?[robber_start];
    Ok((m + graph.group().order()) * graph.genset().len())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaViolation {
    pub round: usize,
    pub cop: usize,
    pub kind: String,
    pub detail: String,
}

/// Tallies of every transition checked in one or more traces.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub rounds: usize,
    pub tail_checked: usize,
    pub tail_violations: usize,
    pub power_checked: usize,
    pub power_violations: usize,
    /// Power transitions where the connection was the label's inverse.
    pub power_minus_two: usize,
    pub capture_fired: usize,
    pub capture_held: usize,
    pub annotation_mismatches: usize,
    pub violations: Vec<LemmaViolation>,
}

impl LemmaReport {
    pub fn merge(&mut self, other: LemmaReport) {
        self.rounds += other.rounds;
        self.tail_checked += other.tail_checked;
        self.tail_violations += other.tail_violations;
        self.power_checked += other.power_checked;
        self.power_violations += other.power_violations;
        self.power_minus_two += other.power_minus_two;
        self.capture_fired += other.capture_fired;
        self.capture_held += other.capture_held;
        self.annotation_mismatches += other.annotation_mismatches;
        self.violations.extend(other.violations);
    }

    pub fn transitions_clean(&self) -> bool {
        self.tail_violations == 0 && self.power_violations == 0 && self.annotation_mismatches == 0
    }

    pub fn capture_clause_clean(&self) -> bool {
        self.capture_fired == self.capture_held
    }
}

/// Re-derives every annotation of a strategy trace from the recorded moves
/// and checks the reduction lemma on it.
///
/// Checked per cop and annotated round: the recorded label, connection,
/// tail and power agree with a recomputation from positions; the tail does
/// not grow; tail-zero power transitions follow the lemma's three cases;
/// and an odd step with tail 0, power 1 and connection equal to the label
/// ends in capture.
pub fn verify_lemma_transitions(graph: &AlgebraicGraph, trace: &GameTrace) -> LemmaReport {
    let mut report = LemmaReport::default();
    let rules = Rules { graph };
    let group = graph.group();
    let s = graph.genset();
    let mut push =
        |report: &mut LemmaReport, round: usize, cop: usize, kind: &str, detail: String| {
            report.violations.push(LemmaViolation {
                round,
                cop,
                kind: kind.to_string(),
                detail,
            });
        };
    let mut cops = trace.initial_cops.clone();
    for rec in &trace.rounds {
        report.rounds += 1;
        check_round(graph, rules, rec, &cops, &mut report, &mut push, group, s);
        if let Some(moves) = &rec.cops {
            cops = moves.iter().map(|&(_, to)| to).collect();
        }
    }
    report
}

#[allow(clippy::too_many_arguments)]
fn check_round(
    graph: &AlgebraicGraph,
    rules: Rules<'_>,
    rec: &RoundRecord,
    cops: &[usize],
    report: &mut LemmaReport,
    push: &mut impl FnMut(&mut LemmaReport, usize, usize, &str, String),
    group: &crate::group::Group,
    s: &crate::group::GenSet,
) {
    let (Some(mv), Some(moves)) = (rec.robber, rec.cops.as_ref()) else {
        return;
    };
    for a in &rec.annotations {
        let odd = a.step % 2 == 1;
        let Some(&(z, z_next)) = moves.get(a.cop) else {
            report.annotation_mismatches += 1;
            push(
                report,
                rec.round,
                a.cop,
                "annotation",
                "cop index out of range".into(),
            );
            continue;
        };
        if z != cops.get(a.cop).copied().unwrap_or(usize::MAX) {
            report.annotation_mismatches += 1;
            push(
                report,
                rec.round,
                a.cop,
                "annotation",
                format!("cop recorded at {z}, expected {}", cops[a.cop]),
            );
        }
        let t = mv.generator.or_else(|| {
            s.members()
                .iter()
                .copied()
                .find(|&t| graph.step(mv.from, t) == mv.to)
        });
        let recomputed = t.map(|t| rules.connection(odd, mv.from, t));
        let tp_now = s
            .tail_and_power(rules.displacement(odd, z, mv.from), a.label)
            .ok();
        let tp_next = s
            .tail_and_power(rules.displacement(!odd, z_next, mv.to), a.next_label)
            .ok();
        let consistent = recomputed == Some(a.connection)
            && tp_now
                .as_ref()
                .is_some_and(|tp| tp.tail == a.tail && tp.power == a.power)
            && tp_next
                .as_ref()
                .is_some_and(|tp| tp.tail == a.next_tail && tp.power == a.next_power)
            && a.next_label == group.product([group.inv(a.connection), a.label, a.connection]);
        if !consistent {
            report.annotation_mismatches += 1;
            push(
                report,
                rec.round,
                a.cop,
                "annotation",
                format!(
                    "recorded (c={}, k={}, i={:?} -> k={}, i={:?}) disagrees with the moves (c={recomputed:?}, now={:?}, next={:?})",
                    a.connection,
                    a.tail,
                    a.power,
                    a.next_tail,
                    a.next_power,
                    tp_now.map(|tp| (tp.tail, tp.power)),
                    tp_next.map(|tp| (tp.tail, tp.power)),
                ),
            );
        }
        report.tail_checked += 1;
        if a.next_tail > a.tail {
            report.tail_violations += 1;
            push(
                report,
                rec.round,
                a.cop,
                "tail",
                format!("{} -> {}", a.tail, a.next_tail),
            );
        }
        if a.tail == 0 {
            if let Some(alpha) = a.power {
                if let Some(want) = predicted_power(graph, a.label, a.connection, alpha) {
                    report.power_checked += 1;
                    if a.connection == group.inv(a.label) && a.connection != a.label {
                        report.power_minus_two += 1;
                    }
                    if a.next_tail != 0 || a.next_power != Some(want) {
                        report.power_violations += 1;
                        push(
                            report,
                            rec.round,
                            a.cop,
                            "power",
                            format!(
                                "{alpha} -> {:?} (k={}), expected {want}",
                                a.next_power, a.next_tail
                            ),
                        );
                    }
                }
                if odd && alpha == 1 && a.connection == a.label {
                    report.capture_fired += 1;
                    if rec.captured {
                        report.capture_held += 1;
                    } else {
                        push(
                            report,
                            rec.round,
                            a.cop,
                            "capture",
                            "odd step, tail 0, power 1, connection = label, no capture".into(),
                        );
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{run, GameRules, GreedyMaxDistance, Outcome, ScriptedRobber, UniformRandom};
    use crate::group::families::cyclic;
    use crate::group::{Automorphism, GenSet, GroupSpec};

    fn z5_sum() -> Arc<AlgebraicGraph> {
        let g = Arc::new(cyclic(5).unwrap());
        let s = GenSet::new(g, [1, 4]).unwrap();
        Arc::new(AlgebraicGraph::build(Family::CayleySum, s, None).unwrap())
    }

    #[test]
    fn setup_on_path_with_loops() {
        let graph = z5_sum();
        let mut strat = LabelledCops::new(graph.clone()).unwrap();
        assert_eq!(strat.place(graph.as_ref(), 2).unwrap(), vec![0, 0]);
        assert_eq!(strat.labels(), &[1, 4]);
        assert!(strat.place(graph.as_ref(), 3).is_err());
    }

    #[test]
    fn hand_executed_first_round() {
        // Robber 2 -> 4 by t = 1 (4 = -2 + 1). Odd step, y = 2:
        // c = -y - t + y = -1 = 4. Cop with label 1: d = 2 = 1+1, k = 0, i = 2,
        // c = s^-1 so case 2: move to -s - z = 4, label stays 1, new even
        // displacement z - y = 4 - 4 = 0: captured.
        // Cop with label 4: d = 2 = 4·3, k = 0, i = 3, c = s so case 2:
        // move to -4 - 0 = 1, next displacement 1 - 4 = 2 = 4·3, power 3.
        let graph = z5_sum();
        let mut robber = ScriptedRobber::new(
            2,
            vec![crate::game::RobberMove::Step(crate::game::Step {
                to: 4,
                generator: Some(1),
            })],
        );
        let mut cops = LabelledCops::new(graph.clone()).unwrap();
        let trace = run(
            graph.as_ref(),
            2,
            GameRules::forced_move(),
            &mut robber,
            &mut cops,
        )
        .unwrap();
        assert_eq!(trace.outcome, Outcome::Captured { round: 1 });
        let r = &trace.rounds[0];
        assert_eq!(r.cops.as_ref().unwrap(), &vec![(0, 4), (0, 1)]);
        let a = &r.annotations;
        assert_eq!(
            (a[0].connection, a[0].case, a[0].tail, a[0].power),
            (4, 2, 0, Some(2))
        );
        assert_eq!((a[0].next_label, a[0].next_power), (1, Some(0)));
        assert_eq!(
            (a[1].case, a[1].power, a[1].next_power),
            (2, Some(3), Some(3))
        );
    }

    #[test]
    fn refuses_bad_instances() {
        let s3 = Arc::new(GroupSpec::Symmetric(3).build().unwrap());
        let t = s3.elements().find(|&g| s3.element_order(g) == 2).unwrap();
        let s = GenSet::new(s3, [t]).unwrap();
        let graph = Arc::new(AlgebraicGraph::build(Family::CayleySum, s, None).unwrap());
        match LabelledCops::new(graph) {
            Err(StrategyError::Hypotheses(r)) => {
                assert!(!r.conjugation_closed);
                assert!(!r.undirected);
            }
            other => panic!("{other:?}"),
        }
        let z6 = Arc::new(cyclic(6).unwrap());
        let s = GenSet::new(z6, [2, 4]).unwrap();
        let graph = Arc::new(AlgebraicGraph::build(Family::CayleySum, s, None).unwrap());
        let err = LabelledCops::new(graph).unwrap_err().to_string();
        assert!(err.contains("disconnected"), "{err}");
    }

    #[test]
    fn capture_bound_values() {
        let graph = z5_sum();
        assert_eq!(capture_bound(&graph, 0).unwrap(), 10);
        assert_eq!(capture_bound(&graph, 2).unwrap(), 14);
        let z2 = Arc::new(cyclic(2).unwrap());
        let g2 =
            AlgebraicGraph::build(Family::CayleySum, GenSet::new(z2, [1]).unwrap(), None).unwrap();
        assert_eq!(capture_bound(&g2, 1).unwrap(), 3);
    }

    #[test]
    fn random_games_keep_lemma() {
        let g = Arc::new(cyclic(7).unwrap());
        let neg = Automorphism::inversion(g.clone()).unwrap();
        for (family, sigma) in [
            (Family::CayleySum, None),
            (Family::TwistedCayley, Some(neg.clone())),
            (Family::TwistedCayleySum, Some(neg.clone())),
        ] {
            let s = GenSet::new(g.clone(), [1, 6]).unwrap();
            let graph = Arc::new(AlgebraicGraph::build(family, s, sigma).unwrap());
            for seed in 0..20 {
                let mut cops = LabelledCops::new(graph.clone()).unwrap();
                let rules = GameRules::forced_move().with_max_rounds(200);
                let trace = run(
                    graph.as_ref(),
                    2,
                    rules,
                    &mut UniformRandom::new(seed),
                    &mut cops,
                )
                .unwrap();
                let report = verify_lemma_transitions(&graph, &trace);
                assert!(
                    report.transitions_clean(),
                    "{family}: {:?}",
                    report.violations
                );
            }
            let mut cops = LabelledCops::new(graph.clone()).unwrap();
            let trace = run(
                graph.as_ref(),
                2,
                GameRules::forced_move(),
                &mut GreedyMaxDistance,
                &mut cops,
            )
            .unwrap();
            assert!(trace.capture_round().is_some(), "{family}");
        }
    }

    #[test]
    fn corrupted_move_is_flagged() {
        let graph = z5_sum();
        let mut cops = LabelledCops::new(graph.clone()).unwrap();
        let mut trace = run(
            graph.as_ref(),
            2,
            GameRules::forced_move(),
            &mut UniformRandom::new(1),
            &mut cops,
        )
        .unwrap();
        assert!(verify_lemma_transitions(&graph, &trace).transitions_clean());
        let moves = trace.rounds[0].cops.as_mut().unwrap();
        moves[1].1 = (moves[1].1 + 1) % 5;
        assert!(!verify_lemma_transitions(&graph, &trace).transitions_clean());
    }

    #[test]
    fn mutant_breaks_soundness() {
        let graph = z5_sum();
        let mut caught = false;
        for seed in 0..20 {
            let mut cops = LabelledCops::with_mutation(graph.clone(), Mutation::FlipCase2).unwrap();
            if let Err(GameError::Soundness { .. }) = run(
                graph.as_ref(),
                2,
                GameRules::forced_move(),
                &mut UniformRandom::new(seed),
                &mut cops,
            ) {
                caught = true;
            }
        }
        assert!(caught);
    }
}
