//! Pusher and Remover strategies.
//!
//! Strategies are stateful: Pusher is asked for a move, then told the
//! removal. `state_digest` serializes everything that influences future
//! decisions so that exhaustive verification can memoize on it.

use std::fmt;

use thiserror::Error;

use crate::game::{BoardState, GameConfig, GameError, MoveSet, RemovalAction};
use crate::solver::SolveError;

mod baseline;
mod brick;
mod doubling;
mod fibonacci;
mod tower;

pub use baseline::{
    solver_backed_pusher, solver_backed_remover, GreedyWeightRemover, MoveAllPusher, RandomPusher,
    RandomRemover, SolverPusher, SolverRemover,
};
pub use brick::{BrickPusher, BrickState};
pub use doubling::{
    doubling_phase_audit, AuditBranch, DoublingPhaseState, DoublingPusher, PhaseAudit, PhaseCase,
    PhaseRecord, RunningChips,
};
pub use fibonacci::FibonacciRemover;
pub use tower::{Tower, TowerPusher, TowerState, TowerStats};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum StrategyError {
    /// A proven invariant of the strategy was observed to fail.
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    /// The strategy ran out of resources it was designed to have.
    #[error("strategy failure: {0}")]
    Failure(String),
    /// Strategy used outside the setting it was built for.
    #[error("incompatible use: {0}")]
    Incompatible(String),
    #[error("solver: {0}")]
    Solver(#[from] SolveError),
    #[error("rules: {0}")]
    Rules(#[from] GameError),
}

pub trait PusherStrategy: Send {
    fn name(&self) -> String;

    fn next_move(&mut self, state: &BoardState) -> Result<MoveSet, StrategyError>;

    /// Remover's answer to the move last returned by `next_move`.
    fn observe(&mut self, removal: &RemovalAction) -> Result<(), StrategyError>;

    fn state_digest(&self) -> Vec<u8>;

    fn box_clone(&self) -> Box<dyn PusherStrategy>;
}

pub trait RemoverStrategy: Send {
    fn name(&self) -> String;

    /// Answer `mv`, played on the board `state` (before the move).
    fn choose(&mut self, state: &BoardState, mv: &MoveSet) -> Result<RemovalAction, StrategyError>;

    fn state_digest(&self) -> Vec<u8>;

    fn box_clone(&self) -> Box<dyn RemoverStrategy>;
}

impl Clone for Box<dyn PusherStrategy> {
    fn clone(&self) -> Self {
        self.box_clone()
    }
}

impl Clone for Box<dyn RemoverStrategy> {
    fn clone(&self) -> Self {
        self.box_clone()
    }
}

/// Parsed strategy identifier such as `tower` or `random:seed=7`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StrategyId {
    Brick,
    Doubling,
    Tower,
    MoveAll,
    FibRemover,
    Greedy,
    Random { seed: u64 },
    Solver,
}

pub const PUSHER_IDS: &[&str] = &["brick", "doubling", "tower", "all", "random[:seed=N]", "solver"];
pub const REMOVER_IDS: &[&str] = &["fib-remover", "greedy", "random[:seed=N]", "solver"];

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("unknown {side} strategy `{id}`; known: {known}")]
pub struct UnknownStrategy {
    pub side: &'static str,
    pub id: String,
    pub known: String,
}

impl StrategyId {
    pub fn parse(text: &str) -> Option<StrategyId> {
        let (head, params) = match text.split_once(':') {
            Some((h, p)) => (h, Some(p)),
            None => (text, None),
        };
        let id = match head {
            "brick" => StrategyId::Brick,
            "doubling" => StrategyId::Doubling,
            "tower" => StrategyId::Tower,
            "all" => StrategyId::MoveAll,
            "fib-remover" | "fib" => StrategyId::FibRemover,
            "greedy" => StrategyId::Greedy,
            "solver" => StrategyId::Solver,
            "random" => {
                let seed = match params {
                    None => 0,
                    Some(p) => p.strip_prefix("seed=")?.parse().ok()?,
                };
                return Some(StrategyId::Random { seed });
            }
            _ => return None,
        };
        if params.is_some() {
            return None;
        }
        Some(id)
    }
}

impl fmt::Display for StrategyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategyId::Brick => f.write_str("brick"),
            StrategyId::Doubling => f.write_str("doubling"),
            StrategyId::Tower => f.write_str("tower"),
            StrategyId::MoveAll => f.write_str("all"),
            StrategyId::FibRemover => f.write_str("fib-remover"),
            StrategyId::Greedy => f.write_str("greedy"),
            StrategyId::Random { seed } => write!(f, "random:seed={seed}"),
            StrategyId::Solver => f.write_str("solver"),
        }
    }
}

/// Builds a Pusher from its identifier.
pub fn make_pusher(id: &str, config: &GameConfig) -> Result<Box<dyn PusherStrategy>, StrategyError> {
    let unknown = || {
        StrategyError::Incompatible(
            UnknownStrategy { side: "pusher", id: id.to_string(), known: PUSHER_IDS.join(", ") }.to_string(),
        )
    };
    Ok(match StrategyId::parse(id).ok_or_else(unknown)? {
        StrategyId::Brick => Box::new(BrickPusher::new(config)?),
        StrategyId::Doubling => Box::new(DoublingPusher::new(config)?),
        StrategyId::Tower => Box::new(TowerPusher::new(config)?),
        StrategyId::MoveAll => Box::new(MoveAllPusher::new(config)),
        StrategyId::Random { seed } => Box::new(RandomPusher::new(config, seed)),
        StrategyId::Solver => Box::new(solver_backed_pusher(config)?),
        _ => return Err(unknown()),
    })
}

/// Builds a Remover from its identifier.
pub fn make_remover(id: &str, config: &GameConfig) -> Result<Box<dyn RemoverStrategy>, StrategyError> {
    let unknown = || {
        StrategyError::Incompatible(
            UnknownStrategy { side: "remover", id: id.to_string(), known: REMOVER_IDS.join(", ") }.to_string(),
        )
    };
    Ok(match StrategyId::parse(id).ok_or_else(unknown)? {
        StrategyId::FibRemover => Box::new(FibonacciRemover::new(config)?),
        StrategyId::Greedy => Box::new(GreedyWeightRemover::new(config)),
        StrategyId::Random { seed } => Box::new(RandomRemover::new(config, seed)),
        StrategyId::Solver => Box::new(solver_backed_remover(config)?),
        _ => return Err(unknown()),
    })
}

/// Fixed-width little-endian digest writer.
#[derive(Default)]
pub(crate) struct Digest(Vec<u8>);

impl Digest {
    pub fn u8(mut self, x: u8) -> Self {
        self.0.push(x);
        self
    }
    pub fn u32(mut self, x: u32) -> Self {
        self.0.extend_from_slice(&x.to_le_bytes());
        self
    }
    pub fn u64(mut self, x: u64) -> Self {
        self.0.extend_from_slice(&x.to_le_bytes());
        self
    }
    pub fn finish(self) -> Vec<u8> {
        self.0
    }
}
