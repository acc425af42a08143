//! Turn-based cops and robbers: rules, state machine, policies and traces.

mod adversary;
mod policies;
mod trace;

pub use adversary::{AdversarialRobber, AdversaryAnalysis, DeterministicCops, DEFAULT_STATE_CAP};
pub use policies::{GreedyCops, GreedyMaxDistance, ScriptedCops, ScriptedRobber, UniformRandom};
pub use trace::{GameTrace, Outcome, TraceHeader};

use crate::graph::{AlgebraicGraph, Graph};
use crate::group::Elem;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("at least one cop is required")]
    NoCops,
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("vertex {0} does not exist")]
    NoSuchVertex(usize),
    #[error("expected {expected} cop positions, got {found}")]
    CopCount { expected: usize, found: usize },
    #[error("pieces have not been placed")]
    NotPlaced,
    #[error("game is over")]
    Finished,
    #[error("round {round}: illegal {mover} move {from} -> {to}")]
    IllegalMove {
        round: usize,
        mover: Mover,
        from: usize,
        to: usize,
    },
    #[error("round {round}: generator {generator} does not send {from} to {to}")]
    WrongGenerator {
        round: usize,
        from: usize,
        to: usize,
        generator: Elem,
    },
    #[error("round {round}: soundness violation: {detail}")]
    Soundness { round: usize, detail: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("trace parse error at line {line}: {msg}")]
    TraceParse { line: usize, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mover {
    Robber,
    Cop(usize),
}

impl std::fmt::Display for Mover {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mover::Robber => write!(f, "robber"),
            Mover::Cop(i) => write!(f, "cop {i}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TurnOrder {
    /// Each round the robber moves, then the cops.
    RobberFirst,
    /// Each round the cops move, then the robber.
    CopsFirst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GameRules {
    pub turn_order: TurnOrder,
    pub robber_may_pass: bool,
    pub cops_may_pass: bool,
    pub max_rounds: usize,
}

impl Default for GameRules {
    fn default() -> Self {
        GameRules::forced_move()
    }
}

impl GameRules {
    /// Robber moves first each round and must traverse an edge.
    pub fn forced_move() -> Self {
        GameRules {
            turn_order: TurnOrder::RobberFirst,
            robber_may_pass: false,
            cops_may_pass: true,
            max_rounds: 10_000,
        }
    }

    /// The usual game: robber moves first and may stay put.
    pub fn standard() -> Self {
        GameRules {
            robber_may_pass: true,
            ..GameRules::forced_move()
        }
    }

    /// Cops move first each round; robber may stay put.
    pub fn classical() -> Self {
        GameRules {
            turn_order: TurnOrder::CopsFirst,
            ..GameRules::standard()
        }
    }

    pub fn with_max_rounds(self, max_rounds: usize) -> Self {
        GameRules {
            max_rounds: max_rounds.max(1),
            ..self
        }
    }
}

/// A robber edge move, optionally tagged with the generator realizing it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Step {
    pub to: usize,
    pub generator: Option<Elem>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RobberMove {
    Pass,
    Step(Step),
}

/// The board a game is played on.
pub trait Arena {
    fn graph(&self) -> &Graph;

    /// Robber edge moves from `v`. Algebraic boards list one move per
    /// generator, so the same target may appear with different generators.
    fn steps_from(&self, v: usize) -> Vec<Step> {
        self.graph()
            .neighbors(v)
            .iter()
            .map(|&to| Step {
                to,
                generator: None,
            })
            .collect()
    }

    /// Target of generator `t` from `v`, when the board is algebraic.
    fn generator_target(&self, _v: usize, _t: Elem) -> Option<usize> {
        None
    }

    fn algebraic(&self) -> Option<&AlgebraicGraph> {
        None
    }
}

impl Arena for Graph {
    fn graph(&self) -> &Graph {
        self
    }
}

impl Arena for AlgebraicGraph {
    fn graph(&self) -> &Graph {
        AlgebraicGraph::graph(self)
    }

    fn steps_from(&self, v: usize) -> Vec<Step> {
        self.genset()
            .members()
            .iter()
            .map(|&t| Step {
                to: self.step(v, t),
                generator: Some(t),
            })
            .collect()
    }

    fn generator_target(&self, v: usize, t: Elem) -> Option<usize> {
        self.genset().contains(t).then(|| self.step(v, t))
    }

    fn algebraic(&self) -> Option<&AlgebraicGraph> {
        Some(self)
    }
}

/// Per-cop strategy bookkeeping attached to a round.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CopAnnotation {
    pub cop: usize,
    /// Strategy step `n`; its parity selects the move table.
    pub step: usize,
    pub label: Elem,
    pub connection: Elem,
    pub case: u8,
    pub tail: usize,
    pub power: Option<usize>,
    pub next_label: Elem,
    pub next_tail: usize,
    pub next_power: Option<usize>,
}

/// Cop moves as `(from, to)` plus the strategy's annotations.
type CopTurn = (Vec<(usize, usize)>, Vec<CopAnnotation>);

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CopResponse {
    pub positions: Vec<usize>,
    pub annotations: Vec<CopAnnotation>,
}

/// What the cops see when it is their turn.
#[derive(Debug, Clone, Copy)]
pub struct CopView<'a> {
    pub round: usize,
    pub cops: &'a [usize],
    pub robber: usize,
    /// The robber's move earlier in this round (robber-first rules only).
    pub robber_move: Option<RobberRecord>,
}

#[derive(Debug, Clone, Copy)]
pub struct RobberView<'a> {
    pub round: usize,
    pub cops: &'a [usize],
    pub robber: usize,
    pub may_pass: bool,
}

pub trait CopPolicy {
    fn name(&self) -> String;
    fn place(&mut self, arena: &dyn Arena, k: usize) -> Result<Vec<usize>, GameError>;
    fn respond(&mut self, arena: &dyn Arena, view: &CopView<'_>) -> Result<CopResponse, GameError>;
}

pub trait RobberPolicy {
    fn name(&self) -> String;
    fn seed(&self) -> Option<u64> {
        None
    }
    fn place(&mut self, arena: &dyn Arena, cops: &[usize]) -> usize;
    fn choose(&mut self, arena: &dyn Arena, view: &RobberView<'_>) -> RobberMove;
    /// Called with the cops' positions after each cop turn.
    fn observe(&mut self, _cops: &[usize]) {}
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RobberRecord {
    pub from: usize,
    pub to: usize,
    pub generator: Option<Elem>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: usize,
    pub robber: Option<RobberRecord>,
    /// `(from, to)` per cop; absent when the round ended before the cops moved.
    pub cops: Option<Vec<(usize, usize)>>,
    pub annotations: Vec<CopAnnotation>,
    pub captured: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameState {
    pub cop_positions: Vec<usize>,
    pub robber_position: Option<usize>,
    pub round: usize,
    pub captured: bool,
}

impl GameState {
    fn check_capture(&mut self) -> bool {
        if let Some(r) = self.robber_position {
            self.captured = self.cop_positions.contains(&r);
        }
        self.captured
    }
}

/// A game in progress on a borrowed board.
pub struct Game<'a> {
    arena: &'a dyn Arena,
    rules: GameRules,
    k: usize,
    state: GameState,
    initial: Option<(Vec<usize>, usize)>,
    rounds: Vec<RoundRecord>,
}

impl<'a> Game<'a> {
    pub fn new(arena: &'a dyn Arena, k: usize, rules: GameRules) -> Result<Self, GameError> {
        if k == 0 {
            return Err(GameError::NoCops);
        }
        if arena.graph().is_empty() {
            return Err(GameError::EmptyGraph);
        }
        Ok(Game {
            arena,
            rules,
            k,
            state: GameState {
                cop_positions: Vec::new(),
                robber_position: None,
                round: 0,
                captured: false,
            },
            initial: None,
            rounds: Vec::new(),
        })
    }

    pub fn state(&self) -> &GameState {
        &self.state
    }

    pub fn rules(&self) -> &GameRules {
        &self.rules
    }

    pub fn rounds(&self) -> &[RoundRecord] {
        &self.rounds
    }

    pub fn is_over(&self) -> bool {
        self.state.captured || self.state.round >= self.rules.max_rounds
    }

    fn check_vertex(&self, v: usize) -> Result<usize, GameError> {
        if v < self.arena.graph().len() {
            Ok(v)
        } else {
            Err(GameError::NoSuchVertex(v))
        }
    }

    /// Round 0: cops choose vertices, then the robber. Landing on a cop is
    /// an immediate capture.
    pub fn place(&mut self, cops: Vec<usize>, robber: usize) -> Result<(), GameError> {
        if cops.len() != self.k {
            return Err(GameError::CopCount {
                expected: self.k,
                found: cops.len(),
            });
        }
        for &c in &cops {
            self.check_vertex(c)?;
        }
        self.check_vertex(robber)?;
        self.initial = Some((cops.clone(), robber));
        self.state.cop_positions = cops;
        self.state.robber_position = Some(robber);
        self.state.check_capture();
        Ok(())
    }

    pub fn place_with(
        &mut self,
        robber: &mut dyn RobberPolicy,
        cops: &mut dyn CopPolicy,
    ) -> Result<(), GameError> {
        let positions = cops.place(self.arena, self.k)?;
        let r = robber.place(self.arena, &positions);
        self.place(positions, r)
    }

    fn robber_turn(&mut self, robber: &mut dyn RobberPolicy) -> Result<RobberRecord, GameError> {
        let from = self.state.robber_position.ok_or(GameError::NotPlaced)?;
        let view = RobberView {
            round: self.state.round + 1,
            cops: &self.state.cop_positions,
            robber: from,
            may_pass: self.rules.robber_may_pass,
        };
        let record = match robber.choose(self.arena, &view) {
            RobberMove::Pass => {
                if !self.rules.robber_may_pass && !self.arena.graph().neighbors(from).is_empty() {
                    return Err(GameError::IllegalMove {
                        round: view.round,
                        mover: Mover::Robber,
                        from,
                        to: from,
                    });
                }
                RobberRecord {
                    from,
                    to: from,
                    generator: None,
                    pass: true,
                }
            }
            RobberMove::Step(step) => {
                if step.to >= self.arena.graph().len()
                    || !self.arena.graph().has_edge(from, step.to)
                {
                    return Err(GameError::IllegalMove {
                        round: view.round,
                        mover: Mover::Robber,
                        from,
                        to: step.to,
                    });
                }
                if let Some(t) = step.generator {
                    if self.arena.generator_target(from, t) != Some(step.to) {
                        return Err(GameError::WrongGenerator {
                            round: view.round,
                            from,
                            to: step.to,
                            generator: t,
                        });
                    }
                }
                RobberRecord {
                    from,
                    to: step.to,
                    generator: step.generator,
                    pass: false,
                }
            }
        };
        self.state.robber_position = Some(record.to);
        Ok(record)
    }

    fn cop_turn(
        &mut self,
        cops: &mut dyn CopPolicy,
        robber_move: Option<RobberRecord>,
    ) -> Result<CopTurn, GameError> {
        let round = self.state.round + 1;
        let view = CopView {
            round,
            cops: &self.state.cop_positions,
            robber: self.state.robber_position.ok_or(GameError::NotPlaced)?,
            robber_move,
        };
        let response = cops.respond(self.arena, &view)?;
        if response.positions.len() != self.k {
            return Err(GameError::CopCount {
                expected: self.k,
                found: response.positions.len(),
            });
        }
        let graph = self.arena.graph();
        let mut moves = Vec::with_capacity(self.k);
        for (i, (&from, &to)) in self
            .state
            .cop_positions
            .iter()
            .zip(&response.positions)
            .enumerate()
        {
            let legal = if from == to {
                self.rules.cops_may_pass || graph.has_edge(from, to)
            } else {
                to < graph.len() && graph.has_edge(from, to)
            };
            if !legal {
                return Err(GameError::IllegalMove {
                    round,
                    mover: Mover::Cop(i),
                    from,
                    to,
                });
            }
            moves.push((from, to));
        }
        self.state.cop_positions = response.positions;
        Ok((moves, response.annotations))
    }

    /// Plays one round in the configured order, checking capture after each
    /// sub-turn.
    pub fn step_round(
        &mut self,
        robber: &mut dyn RobberPolicy,
        cops: &mut dyn CopPolicy,
    ) -> Result<&RoundRecord, GameError> {
        if self.initial.is_none() {
            return Err(GameError::NotPlaced);
        }
        if self.is_over() {
            return Err(GameError::Finished);
        }
        let mut record = RoundRecord {
            round: self.state.round + 1,
            robber: None,
            cops: None,
            annotations: Vec::new(),
            captured: false,
        };
        match self.rules.turn_order {
            TurnOrder::RobberFirst => {
                let r = self.robber_turn(robber)?;
                record.robber = Some(r);
                if !self.state.check_capture() {
                    let (moves, ann) = self.cop_turn(cops, Some(r))?;
                    robber.observe(&self.state.cop_positions);
                    record.cops = Some(moves);
                    record.annotations = ann;
                    self.state.check_capture();
                }
            }
            TurnOrder::CopsFirst => {
                let (moves, ann) = self.cop_turn(cops, None)?;
                robber.observe(&self.state.cop_positions);
                record.cops = Some(moves);
                record.annotations = ann;
                if !self.state.check_capture() {
                    record.robber = Some(self.robber_turn(robber)?);
                    self.state.check_capture();
                }
            }
        }
        record.captured = self.state.captured;
        self.state.round += 1;
        self.rounds.push(record);
        Ok(self.rounds.last().unwrap())
    }

    pub fn into_trace(self, header: TraceHeader) -> Result<GameTrace, GameError> {
        let (cops, robber) = self.initial.ok_or(GameError::NotPlaced)?;
        let outcome = if self.state.captured {
            Outcome::Captured {
                round: self.state.round,
            }
        } else {
            Outcome::Survived {
                rounds: self.state.round,
            }
        };
        Ok(GameTrace {
            header,
            initial_cops: cops,
            initial_robber: robber,
            rounds: self.rounds,
            outcome,
        })
    }
}

/// Places the pieces and plays until capture or `rules.max_rounds`.
pub fn run(
    arena: &dyn Arena,
    k: usize,
    rules: GameRules,
    robber: &mut dyn RobberPolicy,
    cops: &mut dyn CopPolicy,
) -> Result<GameTrace, GameError> {
    let mut game = Game::new(arena, k, rules)?;
    game.place_with(robber, cops)?;
    while !game.is_over() {
        game.step_round(robber, cops)?;
    }
    let header = TraceHeader {
        rules,
        cops: k,
        robber_policy: robber.name(),
        cop_policy: cops.name(),
        seed: robber.seed(),
    };
    game.into_trace(header)
}

/// Re-executes a trace with scripted policies and returns the final state.
pub fn replay(arena: &dyn Arena, trace: &GameTrace) -> Result<GameState, GameError> {
    let mut robber = ScriptedRobber::from_trace(trace);
    let mut cops = ScriptedCops::from_trace(trace);
    let mut game = Game::new(arena, trace.header.cops, trace.header.rules)?;
    game.place_with(&mut robber, &mut cops)?;
    for _ in 0..trace.rounds.len() {
        game.step_round(&mut robber, &mut cops)?;
    }
    Ok(game.state.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Family;
    use crate::group::families::cyclic;
    use crate::group::GenSet;
    use std::sync::Arc;

    #[test]
    fn new_game_checks() {
        let k2 = Graph::complete(2);
        let game = Game::new(&k2, 1, GameRules::forced_move()).unwrap();
        assert_eq!(game.state().robber_position, None);
        assert!(game.state().cop_positions.is_empty());
        assert!(Game::new(&Graph::cycle(5), 2, GameRules::forced_move()).is_ok());
        assert_eq!(
            Game::new(&Graph::from_adjacency(vec![]), 1, GameRules::forced_move()).err(),
            Some(GameError::EmptyGraph)
        );
        assert_eq!(
            Game::new(&k2, 0, GameRules::forced_move()).err(),
            Some(GameError::NoCops)
        );
    }

    #[test]
    fn adjacent_robber_is_caught_by_greedy_cop() {
        let p = Graph::path(4);
        let mut game = Game::new(&p, 1, GameRules::forced_move()).unwrap();
        game.place(vec![1], 3).unwrap();
        let mut robber = ScriptedRobber::new(
            3,
            vec![RobberMove::Step(Step {
                to: 2,
                generator: None,
            })],
        );
        let mut cops = GreedyCops;
        let rec = game.step_round(&mut robber, &mut cops).unwrap();
        assert!(rec.captured);
    }

    #[test]
    fn both_pass_changes_only_round() {
        let c = Graph::cycle(6);
        let mut game = Game::new(&c, 1, GameRules::standard()).unwrap();
        game.place(vec![0], 3).unwrap();
        let before = game.state().clone();
        let mut robber = ScriptedRobber::new(3, vec![RobberMove::Pass]);
        let mut cops = ScriptedCops::new(vec![0], vec![vec![0]]);
        game.step_round(&mut robber, &mut cops).unwrap();
        let after = game.state();
        assert_eq!(after.cop_positions, before.cop_positions);
        assert_eq!(after.robber_position, before.robber_position);
        assert_eq!(after.round, 1);
    }

    #[test]
    fn forced_move_rejects_pass_and_non_edges() {
        let c = Graph::cycle(6);
        let mut game = Game::new(&c, 1, GameRules::forced_move()).unwrap();
        game.place(vec![0], 3).unwrap();
        let mut robber = ScriptedRobber::new(3, vec![RobberMove::Pass]);
        let mut cops = GreedyCops;
        assert!(matches!(
            game.step_round(&mut robber, &mut cops),
            Err(GameError::IllegalMove {
                mover: Mover::Robber,
                ..
            })
        ));
        let mut game = Game::new(&c, 1, GameRules::forced_move()).unwrap();
        game.place(vec![0], 3).unwrap();
        let mut robber = ScriptedRobber::new(
            3,
            vec![RobberMove::Step(Step {
                to: 0,
                generator: None,
            })],
        );
        assert!(game.step_round(&mut robber, &mut cops).is_err());
    }

    #[test]
    fn illegal_cop_move_names_offender() {
        let c = Graph::cycle(6);
        let mut game = Game::new(&c, 2, GameRules::forced_move()).unwrap();
        game.place(vec![0, 0], 3).unwrap();
        let mut robber = ScriptedRobber::new(
            3,
            vec![RobberMove::Step(Step {
                to: 4,
                generator: None,
            })],
        );
        let mut cops = ScriptedCops::new(vec![0, 0], vec![vec![1, 3]]);
        assert_eq!(
            game.step_round(&mut robber, &mut cops).err(),
            Some(GameError::IllegalMove {
                round: 1,
                mover: Mover::Cop(1),
                from: 0,
                to: 3
            })
        );
    }

    #[test]
    fn robber_walking_into_cop_is_captured() {
        let c = Graph::cycle(4);
        let mut game = Game::new(&c, 1, GameRules::forced_move()).unwrap();
        game.place(vec![0], 1).unwrap();
        let mut robber = ScriptedRobber::new(
            1,
            vec![RobberMove::Step(Step {
                to: 0,
                generator: None,
            })],
        );
        let mut cops = GreedyCops;
        let rec = game.step_round(&mut robber, &mut cops).unwrap().clone();
        assert!(rec.captured);
        assert!(rec.cops.is_none());
        assert!(game.step_round(&mut robber, &mut cops).is_err());
    }

    #[test]
    fn placement_on_cop_is_round_zero_capture() {
        let c = Graph::cycle(4);
        let mut robber = ScriptedRobber::new(0, vec![]);
        let trace = run(
            &c,
            1,
            GameRules::forced_move(),
            &mut robber,
            &mut GreedyCops,
        )
        .unwrap();
        assert_eq!(trace.outcome, Outcome::Captured { round: 0 });
        assert!(trace.rounds.is_empty());
    }

    #[test]
    fn generator_tags_are_checked() {
        let g = Arc::new(cyclic(5).unwrap());
        let graph = AlgebraicGraph::build(Family::CayleySum, GenSet::new(g, [1, 4]).unwrap(), None)
            .unwrap();
        let mut game = Game::new(&graph, 1, GameRules::forced_move()).unwrap();
        game.place(vec![0], 2).unwrap();
        // from 2, t = 1 reaches 4 and t = 4 reaches the loop at 2
        let bad = RobberMove::Step(Step {
            to: 4,
            generator: Some(4),
        });
        let mut robber = ScriptedRobber::new(2, vec![bad]);
        assert!(matches!(
            game.step_round(&mut robber, &mut GreedyCops),
            Err(GameError::WrongGenerator { .. })
        ));
    }

    #[test]
    fn cops_first_order() {
        let p = Graph::path(3);
        let mut robber = GreedyMaxDistance;
        let trace = run(
            &p,
            1,
            GameRules::classical().with_max_rounds(10),
            &mut robber,
            &mut GreedyCops,
        )
        .unwrap();
        assert!(matches!(trace.outcome, Outcome::Captured { .. }));
        assert!(replay(&p, &trace).unwrap().captured);
    }
}
