//! Exact cop numbers by retrograde analysis.
//!
//! A position is (cop multiset, robber vertex, side to move). Cop multisets
//! are stored as sorted tuples and ranked with the combinatorial number
//! system, so `k` interchangeable cops on `n` vertices need
//! `C(n+k-1, k) · n · 2` positions. Captures seed a FIFO work queue; a
//! cop-to-move predecessor of a won position is won, a robber-to-move one is
//! won once all of its moves are. Processing in queue order makes the
//! recorded ply count the minimax distance to capture.

use crate::game::{GameRules, TurnOrder};
use crate::graph::Graph;
use serde::Serialize;
use std::collections::VecDeque;
use thiserror::Error;

pub const DEFAULT_STATE_CAP: u64 = 50_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("at least one cop is required")]
    NoCops,
    #[error("graph is directed (enable directed analysis explicitly)")]
    Directed,
    #[error("{states} positions exceed the cap of {cap}")]
    TooLarge { states: u64, cap: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub state_cap: u64,
    pub allow_directed: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            state_cap: DEFAULT_STATE_CAP,
            allow_directed: false,
        }
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n.saturating_sub(k));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Positions needed for `k` cops on `n` vertices.
pub fn state_count(n: usize, k: usize) -> u64 {
    binomial((n + k - 1) as u64, k as u64)
        .saturating_mul(n as u64)
        .saturating_mul(2)
}

/// Ranks sorted `k`-multisets of `0..n` onto `0..C(n+k-1, k)`.
#[derive(Debug)]
struct MultisetIndex {
    k: usize,
    /// `choose[d][j] = C(d, j)` for `d < n + k`, `j ≤ k`.
    choose: Vec<Vec<usize>>,
    tuples: Vec<u32>,
}

impl MultisetIndex {
    fn new(n: usize, k: usize) -> Self {
        let mut choose = vec![vec![0usize; k + 1]; n + k];
        for d in 0..n + k {
            choose[d][0] = 1;
            for j in 1..=k.min(d) {
                choose[d][j] = choose[d - 1][j - 1] + choose[d - 1][j];
            }
        }
        let count = binomial((n + k - 1) as u64, k as u64) as usize;
        let mut tuples = vec![0u32; count * k];
        let mut cur = vec![0usize; k];
        let mut this = MultisetIndex {
            k,
            choose,
            tuples: Vec::new(),
        };
        loop {
            let r = this.rank(&cur);
            for (j, &c) in cur.iter().enumerate() {
                tuples[r * k + j] = c as u32;
            }
            // Next non-decreasing tuple.
            let Some(pos) = (0..k).rev().find(|&j| cur[j] + 1 < n) else {
                break;
            };
            let v = cur[pos] + 1;
            for c in &mut cur[pos..] {
                *c = v;
            }
        }
        this.tuples = tuples;
        this
    }

    fn len(&self) -> usize {
        self.tuples.len() / self.k
    }

    /// `sorted` must be non-decreasing.
    fn rank(&self, sorted: &[usize]) -> usize {
        sorted
            .iter()
            .enumerate()
            .map(|(j, &c)| self.choose[c + j][j + 1])
            .sum()
    }

    fn tuple(&self, r: usize) -> impl Iterator<Item = usize> + '_ {
        self.tuples[r * self.k..(r + 1) * self.k]
            .iter()
            .map(|&c| c as usize)
    }
}

/// The solved game for a fixed number of cops.
#[derive(Debug)]
pub struct Solution {
    n: usize,
    k: usize,
    rules: GameRules,
    index: MultisetIndex,
    /// Plies to capture, `u32::MAX` where the robber escapes.
    depth: Vec<u32>,
}

const ROBBER: usize = 0;
const COPS: usize = 1;

impl Solution {
    fn id(&self, cops: usize, robber: usize, side: usize) -> usize {
        (cops * self.n + robber) * 2 + side
    }

    fn first_side(&self) -> usize {
        match self.rules.turn_order {
            TurnOrder::RobberFirst => ROBBER,
            TurnOrder::CopsFirst => COPS,
        }
    }

    /// Rounds to capture from the opening position, `None` if the robber
    /// escapes.
    pub fn rounds_from(&self, cops: &[usize], robber: usize) -> Option<usize> {
        let mut sorted = cops.to_vec();
        sorted.sort_unstable();
        let d = self.depth[self.id(self.index.rank(&sorted), robber, self.first_side())];
        (d != u32::MAX).then(|| (d as usize).div_ceil(2))
    }

    /// Cops' best placement against the robber's best reply:
    /// `(placement, rounds)`, with the fewest rounds and ties to the lowest
    /// rank. `None` when no placement wins.
    pub fn best_placement(&self) -> Option<(Vec<usize>, usize)> {
        let side = self.first_side();
        let mut best: Option<(usize, usize)> = None;
        for c in 0..self.index.len() {
            let mut worst = 0u32;
            for r in 0..self.n {
                worst = worst.max(self.depth[self.id(c, r, side)]);
                if worst == u32::MAX {
                    break;
                }
            }
            if worst != u32::MAX && best.is_none_or(|(_, w)| (worst as usize) < w) {
                best = Some((c, worst as usize));
            }
        }
        best.map(|(c, w)| (self.index.tuple(c).collect(), w.div_ceil(2)))
    }

    pub fn cops_win(&self) -> bool {
        self.best_placement().is_some()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn positions(&self) -> usize {
        self.depth.len()
    }
}

/// Runs the retrograde fixpoint for `k` cops.
pub fn solve(
    graph: &Graph,
    k: usize,
    rules: GameRules,
    config: &OracleConfig,
) -> Result<Solution, OracleError> {
    let n = graph.len();
    if n == 0 {
        return Err(OracleError::EmptyGraph);
    }
    if k == 0 {
        return Err(OracleError::NoCops);
    }
    if !config.allow_directed && !graph.is_undirected() {
        return Err(OracleError::Directed);
    }
    let states = state_count(n, k);
    if states > config.state_cap {
        return Err(OracleError::TooLarge {
            states,
            cap: config.state_cap,
        });
    }
    let moves = |may_pass: bool| -> Vec<Vec<usize>> {
        (0..n)
            .map(|v| {
                let mut m = graph.neighbors(v).to_vec();
                if may_pass || m.is_empty() {
                    m.push(v);
                }
                m.sort_unstable();
                m.dedup();
                m
            })
            .collect()
    };
    let reverse = |fwd: &[Vec<usize>]| -> Vec<Vec<usize>> {
        let mut rev = vec![Vec::new(); n];
        for (v, outs) in fwd.iter().enumerate() {
            for &w in outs {
                rev[w].push(v);
            }
        }
        rev
    };
    let robber_moves = moves(rules.robber_may_pass);
    let robber_back = reverse(&robber_moves);
    let cop_back = reverse(&moves(rules.cops_may_pass));

    let index = MultisetIndex::new(n, k);
    let mut sol = Solution {
        n,
        k,
        rules,
        index,
        depth: vec![u32::MAX; states as usize],
    };
    let mut remaining: Vec<u16> = vec![0; states as usize];
    let mut queue = VecDeque::new();
    for c in 0..sol.index.len() {
        let tuple: Vec<usize> = sol.index.tuple(c).collect();
        for r in 0..n {
            if tuple.contains(&r) {
                for side in [ROBBER, COPS] {
                    let id = sol.id(c, r, side);
                    sol.depth[id] = 0;
                    queue.push_back(id);
                }
            } else {
                remaining[sol.id(c, r, ROBBER)] = robber_moves[r].len() as u16;
            }
        }
    }
    let mut tuple = vec![0usize; k];
    let mut pred = vec![0usize; k];
    let mut choice = vec![0usize; k];
    while let Some(id) = queue.pop_front() {
        let d = sol.depth[id] + 1;
        let side = id % 2;
        let r = (id / 2) % n;
        let c = id / 2 / n;
        if side == COPS {
            // Robber just moved into (c, r): predecessors differ in r.
            for &p in &robber_back[r] {
                let pid = sol.id(c, p, ROBBER);
                if sol.depth[pid] == u32::MAX {
                    remaining[pid] -= 1;
                    if remaining[pid] == 0 {
                        sol.depth[pid] = d;
                        queue.push_back(pid);
                    }
                }
            }
        } else {
            // Cops just moved into c: every cop steps back independently.
            for (slot, v) in tuple.iter_mut().zip(sol.index.tuple(c)) {
                *slot = v;
            }
            choice.fill(0);
            'odometer: loop {
                for j in 0..k {
                    pred[j] = cop_back[tuple[j]][choice[j]];
                }
                pred.sort_unstable();
                let pid = sol.id(sol.index.rank(&pred), r, COPS);
                if sol.depth[pid] == u32::MAX {
                    sol.depth[pid] = d;
                    queue.push_back(pid);
                }
                for j in 0..k {
                    choice[j] += 1;
                    if choice[j] < cop_back[tuple[j]].len() {
                        continue 'odometer;
                    }
                    choice[j] = 0;
                }
                break;
            }
        }
    }
    Ok(sol)
}

pub fn k_cops_win(
    graph: &Graph,
    k: usize,
    rules: GameRules,
    config: &OracleConfig,
) -> Result<bool, OracleError> {
    Ok(solve(graph, k, rules, config)?.cops_win())
}

/// Minimax rounds to capture with optimal placement, `None` if `k` cops
/// cannot win.
pub fn optimal_capture_time(
    graph: &Graph,
    k: usize,
    rules: GameRules,
    config: &OracleConfig,
) -> Result<Option<usize>, OracleError> {
    Ok(solve(graph, k, rules, config)?
        .best_placement()
        .map(|(_, t)| t))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum CopNumber {
    Exact(usize),
    /// The cap was hit before a winning `k` was found.
    AtLeast(usize),
}

impl CopNumber {
    pub fn exact(self) -> Option<usize> {
        match self {
            CopNumber::Exact(k) => Some(k),
            CopNumber::AtLeast(_) => None,
        }
    }
}

impl std::fmt::Display for CopNumber {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CopNumber::Exact(k) => write!(f, "{k}"),
            CopNumber::AtLeast(k) => write!(f, ">= {k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CopNumberResult {
    pub value: CopNumber,
    /// Rounds to capture for the winning `k`, under optimal play.
    pub capture_time: Option<usize>,
    pub positions: usize,
}

/// Probes `k = 1, 2, …` (never more than `max_k`, default `n`).
pub fn cop_number(
    graph: &Graph,
    rules: GameRules,
    config: &OracleConfig,
    max_k: Option<usize>,
) -> Result<CopNumberResult, OracleError> {
    let n = graph.len();
    if n == 0 {
        return Err(OracleError::EmptyGraph);
    }
    let limit = max_k.unwrap_or(n).clamp(1, n);
    for k in 1..=limit {
        let sol = match solve(graph, k, rules, config) {
            Ok(s) => s,
            Err(OracleError::TooLarge { .. }) => {
                return Ok(CopNumberResult {
                    value: CopNumber::AtLeast(k),
                    capture_time: None,
                    positions: 0,
                })
            }
            Err(e) => return Err(e),
        };
        if let Some((_, t)) = sol.best_placement() {
            return Ok(CopNumberResult {
                value: CopNumber::Exact(k),
                capture_time: Some(t),
                positions: sol.positions(),
            });
        }
    }
    Ok(CopNumberResult {
        value: CopNumber::AtLeast(limit + 1),
        capture_time: None,
        positions: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> OracleConfig {
        OracleConfig::default()
    }

    #[test]
    fn ranking_is_a_bijection() {
        let idx = MultisetIndex::new(5, 3);
        assert_eq!(idx.len(), 35);
        for r in 0..35 {
            let t: Vec<usize> = idx.tuple(r).collect();
            assert!(t.windows(2).all(|w| w[0] <= w[1]));
            assert_eq!(idx.rank(&t), r);
        }
    }

    #[test]
    fn small_cop_numbers() {
        let rules = GameRules::standard();
        assert!(k_cops_win(&Graph::path(6), 1, rules, &cfg()).unwrap());
        assert!(!k_cops_win(&Graph::cycle(4), 1, rules, &cfg()).unwrap());
        assert!(k_cops_win(&Graph::cycle(4), 2, rules, &cfg()).unwrap());
        let p = Graph::petersen();
        assert!(!k_cops_win(&p, 2, rules, &cfg()).unwrap());
        assert!(k_cops_win(&p, 3, rules, &cfg()).unwrap());
    }

    #[test]
    fn forced_robber_on_four_cycle() {
        // Without passing, the robber on C4 must step next to the cop.
        assert!(k_cops_win(&Graph::cycle(4), 1, GameRules::forced_move(), &cfg()).unwrap());
    }

    #[test]
    fn capture_times() {
        let rules = GameRules::standard();
        assert_eq!(
            optimal_capture_time(&Graph::complete(2), 1, rules, &cfg()).unwrap(),
            Some(1)
        );
        // P5 from the centre: the robber runs to an end, caught in 2 rounds.
        assert_eq!(
            optimal_capture_time(&Graph::path(5), 1, rules, &cfg()).unwrap(),
            Some(2)
        );
        assert_eq!(
            optimal_capture_time(&Graph::cycle(4), 1, rules, &cfg()).unwrap(),
            None
        );
        let c = cop_number(&Graph::complete(1), rules, &cfg(), None).unwrap();
        assert_eq!(c.value, CopNumber::Exact(1));
        assert_eq!(c.capture_time, Some(0));
    }

    #[test]
    fn cap_gives_lower_bound() {
        let tight = OracleConfig {
            state_cap: 200,
            ..cfg()
        };
        let r = cop_number(&Graph::cycle(8), GameRules::standard(), &tight, None).unwrap();
        assert_eq!(r.value, CopNumber::AtLeast(2));
        assert!(matches!(
            solve(&Graph::cycle(8), 2, GameRules::standard(), &tight),
            Err(OracleError::TooLarge {
                states: 576,
                cap: 200
            })
        ));
    }

    #[test]
    fn directed_needs_flag() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)], false);
        assert_eq!(
            solve(&g, 1, GameRules::standard(), &cfg()).unwrap_err(),
            OracleError::Directed
        );
        let allow = OracleConfig {
            allow_directed: true,
            ..cfg()
        };
        assert!(solve(&g, 1, GameRules::standard(), &allow).is_ok());
    }
}
