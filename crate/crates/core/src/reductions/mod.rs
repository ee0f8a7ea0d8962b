//! The chip game seen as on-line list coloring of `K_{N,N}` and as on-line
//! 2-coloring of `k`-uniform hypergraphs.
//!
//! Chip positions are recomputed from the coloring side after every round
//! and compared with the chip board; any difference is a [`ReductionError::Desync`].

use serde::Serialize;
use thiserror::Error;

use crate::game::{GameError, GameVariant};
use crate::solver::{threshold, SolveError, SolverOptions, Threshold};
use crate::strategies::StrategyError;

mod hypergraph;
mod list_coloring;
mod online;

pub use hypergraph::{verify_two_coloring, EdgeId, EdgeStatus, Hypergraph, PresentationStep, VertexId};
pub use list_coloring::{
    simulate_list_coloring, ListColoringRound, ListColoringState, ListColoringTranscript, ListVertex,
    ListWinner,
};
pub use online::{
    colorer_from_remover, play_online, presenter_from_pusher, Colorer, OnlineGame, OnlineWinner,
    PresentedVertex, Presenter, PusherPresenter, RandomColorer, RandomPresenter, RemoverColorer,
};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ReductionError {
    /// The coloring side and the chip board disagree.
    #[error("reduction out of sync: {0}")]
    Desync(String),
    #[error("edge {edge} already has {k} vertices")]
    FullEdge { edge: EdgeId, k: usize },
    #[error("edge id {edge} exceeds the {limit} edges this colorer supports")]
    TooManyEdges { edge: EdgeId, limit: usize },
    #[error("vertex needs {needed} chip moves on one path, cap is {cap}")]
    DegreeCap { needed: u32, cap: u32 },
    #[error("malformed hypergraph: {0}")]
    Malformed(String),
    #[error("unsupported variant: {0}")]
    Variant(String),
    #[error("strategy: {0}")]
    Strategy(#[from] StrategyError),
    #[error("rules: {0}")]
    Rules(#[from] GameError),
    #[error("no result after {0} steps")]
    StepLimit(u64),
}

/// Bounds on the smallest edge count for which Presenter wins.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OlBracket {
    pub k: usize,
    pub lo: u32,
    /// `None` when the general threshold has no known upper bound.
    pub hi: Option<u32>,
}

/// `[t, 2t]` for the general-game threshold `t`, widened when `t` is only bracketed.
pub fn m_ol_bracket(k: usize, options: SolverOptions) -> Result<OlBracket, SolveError> {
    let report = threshold(k, GameVariant::General, options, None)?;
    Ok(bracket_from(k, report.threshold))
}

pub(crate) fn bracket_from(k: usize, t: Threshold) -> OlBracket {
    OlBracket { k, lo: t.lower(), hi: t.upper().map(|u| 2 * u) }
}
