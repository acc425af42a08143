use super::{
    Arena, CopPolicy, CopResponse, CopView, GameError, GameTrace, RobberMove, RobberPolicy,
    RobberView, Step,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::VecDeque;

/// Replays a fixed placement and move list; passes once the list runs out.
#[derive(Debug, Clone)]
pub struct ScriptedRobber {
    start: usize,
    moves: VecDeque<RobberMove>,
}

impl ScriptedRobber {
    pub fn new(start: usize, moves: Vec<RobberMove>) -> Self {
        ScriptedRobber {
            start,
            moves: moves.into(),
        }
    }

    pub fn from_trace(trace: &GameTrace) -> Self {
        let moves = trace
            .rounds
            .iter()
            .filter_map(|r| r.robber)
            .map(|r| {
                if r.pass {
                    RobberMove::Pass
                } else {
                    RobberMove::Step(Step {
                        to: r.to,
                        generator: r.generator,
                    })
                }
            })
            .collect();
        ScriptedRobber::new(trace.initial_robber, moves)
    }
}

impl RobberPolicy for ScriptedRobber {
    fn name(&self) -> String {
        "scripted".into()
    }

    fn place(&mut self, _arena: &dyn Arena, _cops: &[usize]) -> usize {
        self.start
    }

    fn choose(&mut self, _arena: &dyn Arena, _view: &RobberView<'_>) -> RobberMove {
        self.moves.pop_front().unwrap_or(RobberMove::Pass)
    }
}

/// Replays fixed cop positions, one entry per cop turn.
#[derive(Debug, Clone)]
pub struct ScriptedCops {
    start: Vec<usize>,
    turns: VecDeque<Vec<usize>>,
}

impl ScriptedCops {
    pub fn new(start: Vec<usize>, turns: Vec<Vec<usize>>) -> Self {
        ScriptedCops {
            start,
            turns: turns.into(),
        }
    }

    pub fn from_trace(trace: &GameTrace) -> Self {
        let turns = trace
            .rounds
            .iter()
            .filter_map(|r| r.cops.as_ref())
            .map(|moves| moves.iter().map(|&(_, to)| to).collect())
            .collect();
        ScriptedCops::new(trace.initial_cops.clone(), turns)
    }
}

impl CopPolicy for ScriptedCops {
    fn name(&self) -> String {
        "scripted".into()
    }

    fn place(&mut self, _arena: &dyn Arena, _k: usize) -> Result<Vec<usize>, GameError> {
        Ok(self.start.clone())
    }

    fn respond(
        &mut self,
        _arena: &dyn Arena,
        view: &CopView<'_>,
    ) -> Result<CopResponse, GameError> {
        let positions = self.turns.pop_front().unwrap_or_else(|| view.cops.to_vec());
        Ok(CopResponse {
            positions,
            annotations: Vec::new(),
        })
    }
}

/// Every cop starts at vertex 0 and steps along a shortest path to the robber.
#[derive(Debug, Clone, Copy, Default)]
pub struct GreedyCops;

impl CopPolicy for GreedyCops {
    fn name(&self) -> String {
        "greedy".into()
    }

    fn place(&mut self, _arena: &dyn Arena, k: usize) -> Result<Vec<usize>, GameError> {
        Ok(vec![0; k])
    }

    fn respond(&mut self, arena: &dyn Arena, view: &CopView<'_>) -> Result<CopResponse, GameError> {
        let graph = arena.graph();
        // Distances measured from the robber; exact on undirected boards.
        let dist = graph.distances_from(view.robber);
        let positions = view
            .cops
            .iter()
            .map(|&c| {
                graph
                    .neighbors(c)
                    .iter()
                    .copied()
                    .filter(|&v| dist[v] < dist[c])
                    .min_by_key(|&v| (dist[v], v))
                    .unwrap_or(c)
            })
            .collect();
        Ok(CopResponse {
            positions,
            annotations: Vec::new(),
        })
    }
}

fn min_cop_distance(dists: &[Vec<usize>], v: usize) -> usize {
    dists.iter().map(|d| d[v]).min().unwrap_or(usize::MAX)
}

/// Moves to maximize the minimum BFS distance from any cop; ties go to the
/// lowest vertex, then the lowest generator.
#[derive(Debug, Clone, Copy, Default)]
pub struct GreedyMaxDistance;

impl RobberPolicy for GreedyMaxDistance {
    fn name(&self) -> String {
        "greedy-max-distance".into()
    }

    fn place(&mut self, arena: &dyn Arena, cops: &[usize]) -> usize {
        let graph = arena.graph();
        let dists: Vec<Vec<usize>> = cops.iter().map(|&c| graph.distances_from(c)).collect();
        (0..graph.len())
            .max_by_key(|&v| (min_cop_distance(&dists, v), std::cmp::Reverse(v)))
            .unwrap_or(0)
    }

    fn choose(&mut self, arena: &dyn Arena, view: &RobberView<'_>) -> RobberMove {
        let graph = arena.graph();
        let dists: Vec<Vec<usize>> = view.cops.iter().map(|&c| graph.distances_from(c)).collect();
        let mut options: Vec<RobberMove> = arena
            .steps_from(view.robber)
            .into_iter()
            .map(RobberMove::Step)
            .collect();
        if view.may_pass || options.is_empty() {
            options.push(RobberMove::Pass);
        }
        let target = |m: &RobberMove| match m {
            RobberMove::Pass => view.robber,
            RobberMove::Step(s) => s.to,
        };
        let generator = |m: &RobberMove| match m {
            RobberMove::Pass => None,
            RobberMove::Step(s) => s.generator,
        };
        options
            .into_iter()
            .max_by_key(|m| {
                (
                    min_cop_distance(&dists, target(m)),
                    std::cmp::Reverse(target(m)),
                    std::cmp::Reverse(generator(m)),
                )
            })
            .unwrap()
    }
}

/// Uniformly random legal moves from a seeded ChaCha stream.
#[derive(Debug, Clone)]
pub struct UniformRandom {
    seed: u64,
    rng: ChaCha8Rng,
}

impl UniformRandom {
    pub fn new(seed: u64) -> Self {
        UniformRandom {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl RobberPolicy for UniformRandom {
    fn name(&self) -> String {
        "uniform-random".into()
    }

    fn seed(&self) -> Option<u64> {
        Some(self.seed)
    }

    fn place(&mut self, arena: &dyn Arena, cops: &[usize]) -> usize {
        let free: Vec<usize> = (0..arena.graph().len())
            .filter(|v| !cops.contains(v))
            .collect();
        let pool = if free.is_empty() {
            (0..arena.graph().len()).collect()
        } else {
            free
        };
        *pool.choose(&mut self.rng).unwrap()
    }

    fn choose(&mut self, arena: &dyn Arena, view: &RobberView<'_>) -> RobberMove {
        let mut options: Vec<RobberMove> = arena
            .steps_from(view.robber)
            .into_iter()
            .map(RobberMove::Step)
            .collect();
        if view.may_pass || options.is_empty() {
            options.push(RobberMove::Pass);
        }
        *options.choose(&mut self.rng).unwrap()
    }
}
