//! Translate covers `TS = G`, the cop placements built from them, and the
//! weak Meyniel report.

use crate::graph::{AlgebraicGraph, Family};
use crate::group::{Elem, GenSet};
use crate::oracle::CopNumber;
use crate::strategy::check_hypotheses;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverResult {
    pub translates: Vec<Elem>,
    pub size: usize,
    /// `2√n`.
    pub target: f64,
    pub met_bound: bool,
    /// `⋃ tS = G`, rechecked exhaustively.
    pub covers: bool,
}

/// Greedy left-translate cover: repeatedly adds the `t` whose translate
/// `tS` covers the most uncovered elements, ties to the lowest index.
pub fn greedy_translate_cover(genset: &GenSet) -> CoverResult {
    let g = genset.group();
    let n = g.order();
    let mut covered = vec![false; n];
    let mut left = n;
    let mut translates = Vec::new();
    while left > 0 {
        let (t, gain) = g
            .elements()
            .map(|t| {
                let gain = genset
                    .members()
                    .iter()
                    .filter(|&&s| !covered[g.mul(t, s)])
                    .count();
                (t, gain)
            })
            .max_by_key(|&(t, gain)| (gain, std::cmp::Reverse(t)))
            .unwrap();
        debug_assert!(gain > 0);
        for &s in genset.members() {
            let x = g.mul(t, s);
            if !covered[x] {
                covered[x] = true;
                left -= 1;
            }
        }
        translates.push(t);
    }
    let target = 2.0 * (n as f64).sqrt();
    CoverResult {
        size: translates.len(),
        met_bound: translates.len() as f64 <= target,
        covers: covers_group(genset, &translates),
        translates,
        target,
    }
}

/// Whether `TS = G`.
pub fn covers_group(genset: &GenSet, translates: &[Elem]) -> bool {
    let g = genset.group();
    let mut hit = vec![false; g.order()];
    for &t in translates {
        for &s in genset.members() {
            hit[g.mul(t, s)] = true;
        }
    }
    hit.into_iter().all(|b| b)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Placement {
    pub vertices: Vec<usize>,
    pub dominates: bool,
}

/// Cop vertices for a cover: `T`, `T⁻¹`, `σ(T)` or `σ(T⁻¹)` by family,
/// with the domination check.
pub fn cover_placement(graph: &AlgebraicGraph, translates: &[Elem]) -> Placement {
    let g = graph.group();
    let vertices: Vec<usize> = translates
        .iter()
        .map(|&t| match graph.family() {
            Family::Cayley => t,
            Family::CayleySum => g.inv(t),
            Family::TwistedCayley => graph.sigma().apply(t),
            Family::TwistedCayleySum => graph.sigma().apply(g.inv(t)),
        })
        .collect();
    Placement {
        dominates: graph.graph().is_dominating(&vertices),
        vertices,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// `n ≤ 2`: one cop suffices and `log n` is degenerate.
    ShortCircuit,
    /// `|S| ≥ √n·ln n`: cops on a translate cover.
    Cover,
    /// `|S| < √n·ln n`: the labelled strategy with `|S|` cops.
    Strategy,
    /// `|S| < √n·ln n` on a plain Cayley graph: the exact oracle value.
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeynielReport {
    pub family: Family,
    pub n: usize,
    pub s_size: usize,
    pub hypotheses_hold: bool,
    /// `√n·ln n` and `√n·log₂ n`.
    pub threshold_ln: f64,
    pub threshold_log2: f64,
    /// `2√n·ln n` and `2√n·log₂ n`.
    pub bound_ln: f64,
    pub bound_log2: f64,
    pub branch: Branch,
    /// Branch the base-2 threshold would have picked.
    pub branch_log2: Branch,
    pub cover: Option<CoverResult>,
    pub placement: Option<Placement>,
    pub certified: Option<usize>,
    pub within_bound_ln: Option<bool>,
    pub within_bound_log2: Option<bool>,
    pub oracle: Option<CopNumber>,
    /// `certified ≥ oracle` when both are known.
    pub oracle_consistent: Option<bool>,
}

/// Premises of the weak Meyniel theorem's case for this family.
pub fn meyniel_hypotheses(graph: &AlgebraicGraph) -> bool {
    match graph.family() {
        Family::Cayley => {
            graph.is_undirected()
                && graph.is_connected().unwrap_or(false)
                && graph.genset().is_conjugation_closed()
        }
        _ => check_hypotheses(graph).holds(),
    }
}

/// Follows the theorem's case split and certifies a cop count. `oracle`
/// is the exact cop number when one is available; plain Cayley graphs
/// below the threshold rely on it.
pub fn weak_meyniel_report(graph: &AlgebraicGraph, oracle: Option<CopNumber>) -> MeynielReport {
    let n = graph.group().order();
    let s_size = graph.genset().len();
    let root = (n as f64).sqrt();
    let threshold_ln = root * (n as f64).ln();
    let threshold_log2 = root * (n as f64).log2();
    let pick = |threshold: f64| {
        if n <= 2 {
            Branch::ShortCircuit
        } else if s_size as f64 >= threshold {
            Branch::Cover
        } else if graph.family() == Family::Cayley {
            Branch::Oracle
        } else {
            Branch::Strategy
        }
    };
    let branch = pick(threshold_ln);
    let (cover, placement, certified) = match branch {
        Branch::ShortCircuit => (None, None, Some(1)),
        Branch::Cover => {
            let cover = greedy_translate_cover(graph.genset());
            let placement = cover_placement(graph, &cover.translates);
            let certified = (cover.covers && placement.dominates).then_some(cover.size);
            (Some(cover), Some(placement), certified)
        }
        Branch::Strategy => (None, None, Some(s_size)),
        Branch::Oracle => (None, None, oracle.and_then(CopNumber::exact)),
    };
    let bound_ln = 2.0 * threshold_ln;
    let bound_log2 = 2.0 * threshold_log2;
    let exact = oracle.and_then(CopNumber::exact);
    MeynielReport {
        family: graph.family(),
        n,
        s_size,
        hypotheses_hold: meyniel_hypotheses(graph),
        threshold_ln,
        threshold_log2,
        bound_ln,
        bound_log2,
        branch,
        branch_log2: pick(threshold_log2),
        cover,
        placement,
        within_bound_ln: certified.filter(|_| n > 1).map(|c| c as f64 <= bound_ln),
        within_bound_log2: certified.filter(|_| n > 1).map(|c| c as f64 <= bound_log2),
        certified,
        oracle,
        oracle_consistent: certified.zip(exact).map(|(c, o)| c >= o),
    }
}
