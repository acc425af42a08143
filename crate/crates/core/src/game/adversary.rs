//! Worst-case robber against a deterministic cop policy.
//!
//! Because the cops' replies are a function of (policy state, positions,
//! robber move), the game against them is a one-player graph search: the
//! robber maximizes the number of rounds until capture, and any reachable
//! cycle lets it evade forever.

use super::{
    Arena, CopPolicy, CopView, GameError, GameRules, RobberMove, RobberPolicy, RobberRecord,
    RobberView, Step,
};
use crate::strategy::LabelledCops;
use rustc_hash::FxHashMap as HashMap;
use std::hash::Hash;
use std::sync::Arc;

/// A cop policy whose replies depend only on its key and the positions.
pub trait DeterministicCops: CopPolicy + Clone {
    type Key: Hash + Eq + Clone;
    fn key(&self) -> Self::Key;
}

impl DeterministicCops for LabelledCops {
    type Key = (bool, Vec<usize>);

    fn key(&self) -> Self::Key {
        self.state_key()
    }
}

pub const DEFAULT_STATE_CAP: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Child {
    Capture,
    Node(usize),
}

struct Node<P> {
    policy: P,
    cops: Vec<usize>,
    robber: usize,
    moves: Vec<RobberMove>,
    children: Vec<Child>,
    /// Rounds to capture under best robber play; `None` means evasion.
    value: Option<usize>,
    best: usize,
    done: bool,
}

/// Solved game tree of a robber against one deterministic cop policy.
pub struct AdversaryAnalysis<P: DeterministicCops> {
    initial_cops: Vec<usize>,
    nodes: Vec<Node<P>>,
    roots: Vec<Option<usize>>,
    values: Vec<Option<usize>>,
}

impl<P: DeterministicCops> std::fmt::Debug for AdversaryAnalysis<P> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AdversaryAnalysis")
            .field("states", &self.nodes.len())
            .field("values", &self.values)
            .finish()
    }
}

impl<P: DeterministicCops> AdversaryAnalysis<P> {
    /// Explores every robber start and every robber reply. Only
    /// robber-first rules are supported. `round` in the views handed to the
    /// policy is 0, since memoized states have no fixed round.
    pub fn solve(
        arena: &dyn Arena,
        mut policy: P,
        k: usize,
        rules: GameRules,
        state_cap: usize,
    ) -> Result<Self, GameError> {
        if rules.turn_order != super::TurnOrder::RobberFirst {
            return Err(GameError::Unsupported(
                "adversary search needs robber-first rules".into(),
            ));
        }
        let n = arena.graph().len();
        if n == 0 {
            return Err(GameError::EmptyGraph);
        }
        let initial_cops = policy.place(arena, k)?;
        let mut solver = Solver {
            arena,
            may_pass: rules.robber_may_pass,
            index: HashMap::default(),
            nodes: Vec::new(),
            state_cap,
        };
        let mut roots = Vec::with_capacity(n);
        let mut values = Vec::with_capacity(n);
        for r in 0..n {
            if initial_cops.contains(&r) {
                roots.push(None);
                values.push(Some(0));
                continue;
            }
            let id = solver.intern(policy.clone(), initial_cops.clone(), r)?;
            solver.evaluate(id)?;
            roots.push(Some(id));
            values.push(solver.nodes[id].value);
        }
        Ok(AdversaryAnalysis {
            initial_cops,
            nodes: solver.nodes,
            roots,
            values,
        })
    }

    /// Rounds to capture from each robber start (`Some(0)` on a cop,
    /// `None` if the robber can evade forever).
    pub fn values(&self) -> &[Option<usize>] {
        &self.values
    }

    pub fn states(&self) -> usize {
        self.nodes.len()
    }

    /// The start the robber prefers: evasion first, then the longest
    /// capture time, ties to the lowest vertex.
    pub fn best_start(&self) -> usize {
        let rank = |v: Option<usize>| v.map_or(usize::MAX, |x| x);
        (0..self.values.len())
            .max_by_key(|&r| (rank(self.values[r]), std::cmp::Reverse(r)))
            .unwrap()
    }

    pub fn initial_cops(&self) -> &[usize] {
        &self.initial_cops
    }
}

struct Solver<'a, P: DeterministicCops> {
    arena: &'a dyn Arena,
    may_pass: bool,
    index: HashMap<(P::Key, Vec<usize>, usize), usize>,
    nodes: Vec<Node<P>>,
    state_cap: usize,
}

impl<P: DeterministicCops> Solver<'_, P> {
    fn intern(&mut self, policy: P, cops: Vec<usize>, robber: usize) -> Result<usize, GameError> {
        let key = (policy.key(), cops.clone(), robber);
        if let Some(&id) = self.index.get(&key) {
            return Ok(id);
        }
        if self.nodes.len() >= self.state_cap {
            return Err(GameError::Unsupported(format!(
                "adversary search exceeded {} states",
                self.state_cap
            )));
        }
        let id = self.nodes.len();
        self.index.insert(key, id);
        self.nodes.push(Node {
            policy,
            cops,
            robber,
            moves: Vec::new(),
            children: Vec::new(),
            value: None,
            best: 0,
            done: false,
        });
        Ok(id)
    }

    fn expand(&mut self, id: usize) -> Result<(), GameError> {
        let (robber, cops) = (self.nodes[id].robber, self.nodes[id].cops.clone());
        let mut moves: Vec<RobberMove> = self
            .arena
            .steps_from(robber)
            .into_iter()
            .map(RobberMove::Step)
            .collect();
        if self.may_pass || moves.is_empty() {
            moves.push(RobberMove::Pass);
        }
        let mut children = Vec::with_capacity(moves.len());
        for &m in &moves {
            let (to, record) = match m {
                RobberMove::Pass => (
                    robber,
                    RobberRecord {
                        from: robber,
                        to: robber,
                        generator: None,
                        pass: true,
                    },
                ),
                RobberMove::Step(Step { to, generator }) => (
                    to,
                    RobberRecord {
                        from: robber,
                        to,
                        generator,
                        pass: false,
                    },
                ),
            };
            if cops.contains(&to) {
                children.push(Child::Capture);
                continue;
            }
            let mut next = self.nodes[id].policy.clone();
            let view = CopView {
                round: 0,
                cops: &cops,
                robber: to,
                robber_move: Some(record),
            };
            let response = next.respond(self.arena, &view)?;
            if response.positions.contains(&to) {
                children.push(Child::Capture);
            } else {
                children.push(Child::Node(self.intern(next, response.positions, to)?));
            }
        }
        self.nodes[id].moves = moves;
        self.nodes[id].children = children;
        Ok(())
    }

    /// Iterative DFS computing longest paths; a back edge to a node on the
    /// stack marks evasion.
    fn evaluate(&mut self, root: usize) -> Result<(), GameError> {
        if self.nodes[root].done {
            return Ok(());
        }
        let mut on_stack: HashMap<usize, (Option<usize>, usize)> = HashMap::default();
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        self.expand(root)?;
        on_stack.insert(root, (Some(0), usize::MAX));
        while let Some(&mut (id, ref mut next)) = stack.last_mut() {
            if *next < self.nodes[id].children.len() {
                let i = *next;
                *next += 1;
                let candidate = match self.nodes[id].children[i] {
                    Child::Capture => Some(Some(1)),
                    Child::Node(c) if self.nodes[c].done => {
                        Some(self.nodes[c].value.map(|v| v + 1))
                    }
                    Child::Node(c) if on_stack.contains_key(&c) => Some(None),
                    Child::Node(c) => {
                        self.expand(c)?;
                        on_stack.insert(c, (Some(0), usize::MAX));
                        stack.push((c, 0));
                        None
                    }
                };
                if let Some(v) = candidate {
                    update(on_stack.get_mut(&id).unwrap(), v, i);
                }
                continue;
            }
            stack.pop();
            let (value, idx) = on_stack.remove(&id).unwrap();
            let node = &mut self.nodes[id];
            node.value = value;
            node.best = idx;
            node.done = true;
            if let Some(&(parent, next)) = stack.last() {
                update(
                    on_stack.get_mut(&parent).unwrap(),
                    value.map(|v| v + 1),
                    next - 1,
                );
            }
        }
        Ok(())
    }
}

fn update(slot: &mut (Option<usize>, usize), v: Option<usize>, i: usize) {
    let better = match (slot.0, v) {
        (_, _) if slot.1 == usize::MAX => true,
        (None, _) => false,
        (Some(_), None) => true,
        (Some(a), Some(b)) => b > a,
    };
    if better {
        *slot = (v, i);
    }
}

/// Plays the optimal moves of a solved [`AdversaryAnalysis`].
pub struct AdversarialRobber<P: DeterministicCops> {
    analysis: Arc<AdversaryAnalysis<P>>,
    start: Option<usize>,
    current: Option<usize>,
}

impl<P: DeterministicCops> AdversarialRobber<P> {
    pub fn new(analysis: Arc<AdversaryAnalysis<P>>) -> Self {
        AdversarialRobber {
            analysis,
            start: None,
            current: None,
        }
    }

    /// Forces the starting vertex instead of the worst-case one.
    pub fn starting_at(analysis: Arc<AdversaryAnalysis<P>>, start: usize) -> Self {
        AdversarialRobber {
            analysis,
            start: Some(start),
            current: None,
        }
    }
}

impl<P: DeterministicCops> RobberPolicy for AdversarialRobber<P> {
    fn name(&self) -> String {
        "exhaustive-adversarial".into()
    }

    fn place(&mut self, _arena: &dyn Arena, cops: &[usize]) -> usize {
        debug_assert_eq!(cops, self.analysis.initial_cops.as_slice());
        let r = self.start.unwrap_or_else(|| self.analysis.best_start());
        self.current = self.analysis.roots.get(r).copied().flatten();
        r
    }

    fn choose(&mut self, arena: &dyn Arena, view: &RobberView<'_>) -> RobberMove {
        match self.current {
            Some(id) => {
                let node = &self.analysis.nodes[id];
                debug_assert_eq!(node.robber, view.robber);
                let i = node.best.min(node.moves.len() - 1);
                self.current = match node.children[i] {
                    Child::Node(c) => Some(c),
                    Child::Capture => None,
                };
                node.moves[i]
            }
            None => arena
                .steps_from(view.robber)
                .first()
                .map_or(RobberMove::Pass, |&s| RobberMove::Step(s)),
        }
    }

    fn observe(&mut self, cops: &[usize]) {
        if let Some(id) = self.current {
            debug_assert_eq!(self.analysis.nodes[id].cops, cops);
        }
    }
}
