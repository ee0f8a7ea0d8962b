//! Two-path chip games between Pusher and Remover.
//!
//! The crate holds the rules ([`game`]), weight functions ([`weights`]),
//! match play and transcripts ([`play`]), strategies ([`strategies`]), an
//! exact solver ([`solver`]), strategy verification ([`verify`]) and the
//! translations between chip games and on-line list coloring of
//! hypergraphs ([`reductions`]).

pub mod game;
pub mod play;
pub mod reductions;
pub mod solver;
pub mod strategies;
pub mod verify;
pub mod weights;

pub use game::{
    BoardState, GameConfig, GameError, GameVariant, MoveSet, Outcome, PathId, RemovalAction, RemovalRule,
};
