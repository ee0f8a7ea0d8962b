//! Reference adversaries: random, greedy, move-everything and solver-backed.

use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Digest, PusherStrategy, RemoverStrategy, StrategyError};
use crate::game::{
    advance, enumerate_moves, path_options, valid_removals, BoardState, GameConfig, MoveSet, PathId,
    RemovalAction, RemovalRule,
};
use crate::solver::{Solver, SolverOptions};

/// Budget used by solver-backed players unless configured otherwise.
pub const SOLVER_PLAYER_BUDGET: usize = 5_000_000;

fn rng_digest(seed: u64, rng: &ChaCha8Rng) -> Vec<u8> {
    Digest::default().u64(seed).u64(rng.get_word_pos() as u64).u64((rng.get_word_pos() >> 64) as u64).finish()
}

/// Moves every chip it may: all chips in the general game, otherwise up to
/// the cap per path taking the lowest chips first.
#[derive(Clone, Debug)]
pub struct MoveAllPusher {
    config: GameConfig,
}

impl MoveAllPusher {
    pub fn new(config: &GameConfig) -> Self {
        MoveAllPusher { config: *config }
    }
}

impl PusherStrategy for MoveAllPusher {
    fn name(&self) -> String {
        "all".into()
    }

    fn next_move(&mut self, state: &BoardState) -> Result<MoveSet, StrategyError> {
        let k = self.config.k;
        let mut mv = MoveSet::empty(k);
        for p in PathId::BOTH {
            let mut left = self.config.variant.move_cap().unwrap_or(u32::MAX);
            for i in 1..=k {
                let m = state.count(p, i).min(left);
                mv.add(p, i, m);
                left -= m;
            }
        }
        Ok(mv)
    }

    fn observe(&mut self, _removal: &RemovalAction) -> Result<(), StrategyError> {
        Ok(())
    }

    fn state_digest(&self) -> Vec<u8> {
        Vec::new()
    }

    fn box_clone(&self) -> Box<dyn PusherStrategy> {
        Box::new(self.clone())
    }
}

/// Uniform over all legal moves.
#[derive(Clone, Debug)]
pub struct RandomPusher {
    config: GameConfig,
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomPusher {
    pub fn new(config: &GameConfig, seed: u64) -> Self {
        RandomPusher { config: *config, seed, rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl PusherStrategy for RandomPusher {
    fn name(&self) -> String {
        format!("random:seed={}", self.seed)
    }

    fn next_move(&mut self, state: &BoardState) -> Result<MoveSet, StrategyError> {
        let cap = self.config.variant.move_cap();
        let first = path_options(state.path(PathId::First), cap);
        let second = path_options(state.path(PathId::Second), cap);
        let total = first.len() * second.len();
        if total <= 1 {
            return Err(StrategyError::Incompatible("no legal move on this board".into()));
        }
        // index 0 is the empty move
        let idx = self.rng.gen_range(1..total);
        let (a, b) = (&first[idx / second.len()], &second[idx % second.len()]);
        Ok(MoveSet::from_advance(a.clone(), b.clone())?)
    }

    fn observe(&mut self, _removal: &RemovalAction) -> Result<(), StrategyError> {
        Ok(())
    }

    fn state_digest(&self) -> Vec<u8> {
        rng_digest(self.seed, &self.rng)
    }

    fn box_clone(&self) -> Box<dyn PusherStrategy> {
        Box::new(self.clone())
    }
}

/// Uniform over all legal removals.
#[derive(Clone, Debug)]
pub struct RandomRemover {
    config: GameConfig,
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomRemover {
    pub fn new(config: &GameConfig, seed: u64) -> Self {
        RandomRemover { config: *config, seed, rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl RemoverStrategy for RandomRemover {
    fn name(&self) -> String {
        format!("random:seed={}", self.seed)
    }

    fn choose(&mut self, state: &BoardState, mv: &MoveSet) -> Result<RemovalAction, StrategyError> {
        let options = valid_removals(state, mv, &self.config, RemovalRule::NonDominated);
        if options.is_empty() {
            return Err(StrategyError::Incompatible("no legal removal".into()));
        }
        Ok(options[self.rng.gen_range(0..options.len())])
    }

    fn state_digest(&self) -> Vec<u8> {
        rng_digest(self.seed, &self.rng)
    }

    fn box_clone(&self) -> Box<dyn RemoverStrategy> {
        Box::new(self.clone())
    }
}

/// Clears the path whose moved chips weigh more after the move (ties: first
/// path). In the Maker-Breaker game it deletes a chip on the lowest vertex.
#[derive(Clone, Debug)]
pub struct GreedyWeightRemover {
    config: GameConfig,
}

impl GreedyWeightRemover {
    pub fn new(config: &GameConfig) -> Self {
        GreedyWeightRemover { config: *config }
    }

    /// Scaled post-move weight of the chips moved on `path`.
    pub fn moved_weight(mv: &MoveSet, path: PathId) -> u128 {
        let k = mv.k();
        (1..=k).map(|i| mv.count(path, i) as u128 * (1u128 << (k - i + 1))).sum()
    }
}

impl RemoverStrategy for GreedyWeightRemover {
    fn name(&self) -> String {
        "greedy".into()
    }

    fn choose(&mut self, state: &BoardState, mv: &MoveSet) -> Result<RemovalAction, StrategyError> {
        if self.config.variant.removes_single_chip() {
            let after = advance(state, mv);
            let lowest = PathId::BOTH
                .iter()
                .filter_map(|&p| after.lowest(p).map(|i| (i, p)))
                .min()
                .ok_or_else(|| StrategyError::Incompatible("empty board".into()))?;
            return Ok(RemovalAction::ChipChoice { path: lowest.1, position: lowest.0 });
        }
        let w1 = Self::moved_weight(mv, PathId::First);
        let w2 = Self::moved_weight(mv, PathId::Second);
        Ok(RemovalAction::PathChoice(if w2 > w1 { PathId::Second } else { PathId::First }))
    }

    fn state_digest(&self) -> Vec<u8> {
        Vec::new()
    }

    fn box_clone(&self) -> Box<dyn RemoverStrategy> {
        Box::new(self.clone())
    }
}

/// Plays winning moves found by the exact solver (any move once lost).
#[derive(Clone)]
pub struct SolverPusher {
    config: GameConfig,
    solver: Arc<Mutex<Solver>>,
}

/// Plays saving removals found by the exact solver (any removal once lost).
#[derive(Clone)]
pub struct SolverRemover {
    config: GameConfig,
    solver: Arc<Mutex<Solver>>,
}

pub fn solver_backed_pusher(config: &GameConfig) -> Result<SolverPusher, StrategyError> {
    let solver = Solver::for_config(config, SolverOptions::with_budget(SOLVER_PLAYER_BUDGET))?;
    Ok(SolverPusher { config: *config, solver: Arc::new(Mutex::new(solver)) })
}

pub fn solver_backed_remover(config: &GameConfig) -> Result<SolverRemover, StrategyError> {
    let solver = Solver::for_config(config, SolverOptions::with_budget(SOLVER_PLAYER_BUDGET))?;
    Ok(SolverRemover { config: *config, solver: Arc::new(Mutex::new(solver)) })
}

impl SolverPusher {
    pub fn with_solver(config: &GameConfig, solver: Solver) -> Self {
        SolverPusher { config: *config, solver: Arc::new(Mutex::new(solver)) }
    }
}

impl SolverRemover {
    pub fn with_solver(config: &GameConfig, solver: Solver) -> Self {
        SolverRemover { config: *config, solver: Arc::new(Mutex::new(solver)) }
    }
}

impl PusherStrategy for SolverPusher {
    fn name(&self) -> String {
        "solver".into()
    }

    fn next_move(&mut self, state: &BoardState) -> Result<MoveSet, StrategyError> {
        let solver = self.solver.lock().expect("solver lock");
        if let Some(mv) = solver.best_move(state)? {
            return Ok(mv);
        }
        enumerate_moves(state, &self.config)
            .into_iter()
            .next()
            .ok_or_else(|| StrategyError::Incompatible("no legal move on this board".into()))
    }

    fn observe(&mut self, _removal: &RemovalAction) -> Result<(), StrategyError> {
        Ok(())
    }

    fn state_digest(&self) -> Vec<u8> {
        Vec::new()
    }

    fn box_clone(&self) -> Box<dyn PusherStrategy> {
        Box::new(self.clone())
    }
}

impl RemoverStrategy for SolverRemover {
    fn name(&self) -> String {
        "solver".into()
    }

    fn choose(&mut self, state: &BoardState, mv: &MoveSet) -> Result<RemovalAction, StrategyError> {
        let solver = self.solver.lock().expect("solver lock");
        if let Some(r) = solver.best_removal(state, mv)? {
            return Ok(r);
        }
        valid_removals(state, mv, &self.config, RemovalRule::NonDominated)
            .into_iter()
            .next()
            .ok_or_else(|| StrategyError::Incompatible("no legal removal".into()))
    }

    fn state_digest(&self) -> Vec<u8> {
        Vec::new()
    }

    fn box_clone(&self) -> Box<dyn RemoverStrategy> {
        Box::new(self.clone())
    }
}
