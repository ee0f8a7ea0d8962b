//! Remover for the 1-restricted game built on the Fibonacci potential.
//!
//! Of the two moved chips it removes the one that landed lower (the first
//! path's on a tie). A chip on vertex `i` weighs `F(2(k-i)+2)` on the first
//! path and `F(2(k-i)+1)` on the second; with this rule the total weight
//! never grows, and while it stays below `F(2k+1)` no chip can sit on
//! vertex 0.

use super::{RemoverStrategy, StrategyError};
use crate::game::{advance, BoardState, GameConfig, MoveSet, PathId, RemovalAction};
use crate::weights::fibonacci_potential;

#[derive(Clone, Debug)]
pub struct FibonacciRemover {
    config: GameConfig,
    /// Potential after each answered round; kept for audits.
    trace: Vec<u128>,
}

impl FibonacciRemover {
    pub fn new(config: &GameConfig) -> Result<Self, StrategyError> {
        if config.variant.move_cap() != Some(1) {
            return Err(StrategyError::Incompatible(format!(
                "fibonacci remover needs 1-restricted moves, got {}",
                config.variant
            )));
        }
        Ok(FibonacciRemover { config: *config, trace: Vec::new() })
    }

    pub fn potential_trace(&self) -> &[u128] {
        &self.trace
    }

    /// The chip to delete: (path, post-move vertex).
    fn target(&self, mv: &MoveSet) -> Result<(PathId, usize), StrategyError> {
        let landed = |p: PathId| -> Result<Option<usize>, StrategyError> {
            match mv.path_total(p) {
                0 => Ok(None),
                1 => Ok(Some((1..=mv.k()).find(|&i| mv.count(p, i) == 1).unwrap() - 1)),
                n => Err(StrategyError::Incompatible(format!("{n} chips moved on the {p} path"))),
            }
        };
        match (landed(PathId::First)?, landed(PathId::Second)?) {
            (Some(a), Some(b)) => Ok(if b < a { (PathId::Second, b) } else { (PathId::First, a) }),
            (Some(a), None) => Ok((PathId::First, a)),
            (None, Some(b)) => Ok((PathId::Second, b)),
            (None, None) => Err(StrategyError::Incompatible("empty move".into())),
        }
    }
}

impl RemoverStrategy for FibonacciRemover {
    fn name(&self) -> String {
        "fib-remover".into()
    }

    fn choose(&mut self, state: &BoardState, mv: &MoveSet) -> Result<RemovalAction, StrategyError> {
        let (path, position) = self.target(mv)?;
        let before = fibonacci_potential(state);
        let mut after = advance(state, mv);
        after.set(path, position, after.count(path, position) - 1);
        let now = fibonacci_potential(&after);
        if now > before {
            return Err(StrategyError::InvariantViolation(format!(
                "fibonacci potential rose from {before} to {now}"
            )));
        }
        self.trace.push(now);
        Ok(if self.config.variant.removes_single_chip() {
            RemovalAction::ChipChoice { path, position }
        } else {
            RemovalAction::PathChoice(path)
        })
    }

    fn state_digest(&self) -> Vec<u8> {
        Vec::new()
    }

    fn box_clone(&self) -> Box<dyn RemoverStrategy> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::initial_state;

    fn board(a: &[u32], b: &[u32]) -> BoardState {
        BoardState::from_counts(a.to_vec(), b.to_vec()).unwrap()
    }

    #[test]
    fn removes_the_lower_chip() {
        let cfg = GameConfig::restricted(3, 6, 1);
        let mut r = FibonacciRemover::new(&cfg).unwrap();
        let s = board(&[0, 0, 1, 5], &[0, 0, 0, 6]);
        // first path chip lands on 1, second on 2
        let mv = MoveSet::empty(3).with(PathId::First, 2, 1).with(PathId::Second, 3, 1);
        assert_eq!(r.choose(&s, &mv).unwrap(), RemovalAction::PathChoice(PathId::First));
        // both land on 2: first path
        let s = initial_state(&cfg);
        let mv = MoveSet::empty(3).with(PathId::First, 3, 1).with(PathId::Second, 3, 1);
        assert_eq!(r.choose(&s, &mv).unwrap(), RemovalAction::PathChoice(PathId::First));
        // only the second path moved
        let mv = MoveSet::empty(3).with(PathId::Second, 3, 1);
        assert_eq!(r.choose(&s, &mv).unwrap(), RemovalAction::PathChoice(PathId::Second));
        // second path chip lands lower
        let s = board(&[0, 0, 0, 6], &[0, 0, 1, 5]);
        let mv = MoveSet::empty(3).with(PathId::First, 3, 1).with(PathId::Second, 2, 1);
        assert_eq!(r.choose(&s, &mv).unwrap(), RemovalAction::PathChoice(PathId::Second));
    }

    #[test]
    fn rejects_unrestricted_use() {
        assert!(FibonacciRemover::new(&GameConfig::general(3, 6)).is_err());
        let cfg = GameConfig::restricted(3, 6, 1);
        let mut r = FibonacciRemover::new(&cfg).unwrap();
        let mv = MoveSet::empty(3).with(PathId::First, 3, 2);
        assert!(r.choose(&initial_state(&cfg), &mv).is_err());
    }

    #[test]
    fn maker_breaker_answers_with_a_chip() {
        let cfg = GameConfig::maker_breaker(2, 2);
        let mut r = FibonacciRemover::new(&cfg).unwrap();
        let mv = MoveSet::empty(2).with(PathId::First, 2, 1).with(PathId::Second, 2, 1);
        assert_eq!(
            r.choose(&initial_state(&cfg), &mv).unwrap(),
            RemovalAction::ChipChoice { path: PathId::First, position: 1 }
        );
    }
}
