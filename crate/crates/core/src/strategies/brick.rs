//! Brick strategy for the general game with `k * 2^(k-1)` chips per path.
//!
//! A brick on vertex `p` is a group of exactly `2^(p-1)` chips, so every
//! brick has scaled weight `2^(k-1)`. Each round Pusher advances the lowest
//! brick of each path; the surviving brick lands on `p-1` where it is split
//! into two bricks. The number of bricks stays `2k` until Pusher wins.

use super::{Digest, PusherStrategy, StrategyError};
use crate::game::{BoardState, GameConfig, GameVariant, MoveSet, PathId, RemovalAction};

/// Brick counts per path, indexed by vertex `1..=k` (index 0 unused).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BrickState {
    pub bricks: [Vec<u32>; 2],
}

impl BrickState {
    fn initial(k: usize) -> Self {
        let mut per = vec![0; k + 1];
        per[k] = k as u32;
        BrickState { bricks: [per.clone(), per] }
    }

    pub fn k(&self) -> usize {
        self.bricks[0].len() - 1
    }

    pub fn total(&self) -> u32 {
        self.bricks.iter().flatten().sum()
    }

    fn lowest(&self, path: PathId) -> Option<usize> {
        let b = &self.bricks[path.index()];
        (1..b.len()).find(|&i| b[i] > 0)
    }

    /// Chips the bricks account for, per path and vertex.
    pub fn chips(&self, path: PathId, position: usize) -> u64 {
        if position == 0 {
            return 0;
        }
        self.bricks[path.index()][position] as u64 * (1u64 << (position - 1))
    }

    /// At most two bricks on the lowest occupied vertex `i < k` and at most
    /// one on each of `i+1..k-1`.
    pub fn check_distribution(&self) -> Result<(), String> {
        let k = self.k();
        for p in PathId::BOTH {
            let b = &self.bricks[p.index()];
            if let Some(i) = self.lowest(p) {
                if i < k {
                    if b[i] > 2 {
                        return Err(format!("{} bricks on lowest vertex {i} of the {p} path", b[i]));
                    }
                    for (j, &count) in b.iter().enumerate().take(k).skip(i + 1) {
                        if count > 1 {
                            return Err(format!("{count} bricks on vertex {j} of the {p} path"));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct BrickPusher {
    config: GameConfig,
    bricks: BrickState,
    /// Chips at `k` beyond the design value; never moved.
    surplus: u32,
    pending: Option<(usize, usize)>,
}

impl BrickPusher {
    /// Chips per path the strategy is designed for.
    pub fn design_chips(k: usize) -> u64 {
        k as u64 * (1u64 << (k - 1))
    }

    pub fn new(config: &GameConfig) -> Result<Self, StrategyError> {
        if config.variant != GameVariant::General {
            return Err(StrategyError::Incompatible(format!("brick strategy needs the general game, got {}", config.variant)));
        }
        let need = Self::design_chips(config.k);
        if (config.n as u64) < need {
            return Err(StrategyError::Incompatible(format!(
                "brick strategy needs N >= {need}, got {}",
                config.n
            )));
        }
        Ok(BrickPusher {
            config: *config,
            bricks: BrickState::initial(config.k),
            surplus: config.n - need as u32,
            pending: None,
        })
    }

    pub fn bricks(&self) -> &BrickState {
        &self.bricks
    }

    fn check_board(&self, state: &BoardState) -> Result<(), StrategyError> {
        let k = self.config.k;
        for p in PathId::BOTH {
            for i in 1..=k {
                let mut expect = self.bricks.chips(p, i);
                if i == k {
                    expect += self.surplus as u64;
                }
                if state.count(p, i) as u64 != expect {
                    return Err(StrategyError::InvariantViolation(format!(
                        "board holds {} chips on vertex {i} of the {p} path, bricks account for {expect}",
                        state.count(p, i)
                    )));
                }
            }
        }
        Ok(())
    }
}

impl PusherStrategy for BrickPusher {
    fn name(&self) -> String {
        "brick".into()
    }

    fn next_move(&mut self, state: &BoardState) -> Result<MoveSet, StrategyError> {
        self.check_board(state)?;
        let lo = |p| {
            self.bricks.lowest(p).ok_or_else(|| {
                StrategyError::InvariantViolation(format!("no brick left on the {p} path"))
            })
        };
        let (a, b) = (lo(PathId::First)?, lo(PathId::Second)?);
        self.pending = Some((a, b));
        Ok(MoveSet::empty(self.config.k)
            .with(PathId::First, a, 1 << (a - 1))
            .with(PathId::Second, b, 1 << (b - 1)))
    }

    fn observe(&mut self, removal: &RemovalAction) -> Result<(), StrategyError> {
        let (a, b) = self
            .pending
            .take()
            .ok_or_else(|| StrategyError::InvariantViolation("removal observed without a move".into()))?;
        let from = [a, b];
        let removed: Vec<PathId> = match *removal {
            RemovalAction::PathChoice(p) => vec![p],
            RemovalAction::ChipChoice { .. } => {
                return Err(StrategyError::Incompatible("brick strategy is for path removals".into()))
            }
        };
        for p in PathId::BOTH {
            let pos = from[p.index()];
            self.bricks.bricks[p.index()][pos] -= 1;
            if !removed.contains(&p) && pos > 1 {
                // the surviving brick splits in two on the next vertex
                self.bricks.bricks[p.index()][pos - 1] += 2;
            }
        }
        let before = 2 * self.config.k as u32;
        let pusher_won = from.iter().zip(PathId::BOTH).any(|(&pos, p)| pos == 1 && !removed.contains(&p));
        if !pusher_won {
            if self.bricks.total() != before {
                return Err(StrategyError::InvariantViolation(format!(
                    "{} bricks on the board, expected {before}",
                    self.bricks.total()
                )));
            }
            self.bricks.check_distribution().map_err(StrategyError::InvariantViolation)?;
        }
        Ok(())
    }

    fn state_digest(&self) -> Vec<u8> {
        let mut d = Digest::default().u8(self.pending.is_some() as u8);
        for b in self.bricks.bricks.iter().flatten() {
            d = d.u32(*b);
        }
        d.finish()
    }

    fn box_clone(&self) -> Box<dyn PusherStrategy> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{apply_round, initial_state, Outcome};
    use crate::play::play_match;
    use crate::strategies::GreedyWeightRemover;

    #[test]
    fn first_round_moves_one_brick_per_path() {
        let cfg = GameConfig::general(2, 4);
        let mut p = BrickPusher::new(&cfg).unwrap();
        let s = initial_state(&cfg);
        let mv = p.next_move(&s).unwrap();
        assert_eq!(mv, MoveSet::empty(2).with(PathId::First, 2, 2).with(PathId::Second, 2, 2));
        let removal = RemovalAction::PathChoice(PathId::First);
        let next = apply_round(&s, &mv, &removal, &cfg).unwrap();
        p.observe(&removal).unwrap();
        assert_eq!(next.path(PathId::Second), &[0, 2, 2]);
        assert_eq!(p.bricks().bricks[1], vec![0, 2, 1]);
        assert_eq!(p.bricks().bricks[0], vec![0, 0, 1]);
    }

    #[test]
    fn one_one_wins_at_once() {
        let cfg = GameConfig::general(1, 1);
        let mut p = BrickPusher::new(&cfg).unwrap();
        let mut r = GreedyWeightRemover::new(&cfg);
        let t = play_match(&mut p, &mut r, &cfg, 10).unwrap();
        assert_eq!(t.outcome, Outcome::PusherWin);
        assert_eq!(t.round_count(), 1);
    }

    #[test]
    fn surplus_chips_stay_put() {
        let cfg = GameConfig::general(3, 15);
        let mut p = BrickPusher::new(&cfg).unwrap();
        let mut r = GreedyWeightRemover::new(&cfg);
        let t = play_match(&mut p, &mut r, &cfg, 1000).unwrap();
        assert_eq!(t.outcome, Outcome::PusherWin);
        for round in &t.rounds {
            assert!(round.mv.count(PathId::First, 3) <= 4);
        }
    }

    #[test]
    fn rejects_too_few_chips() {
        assert!(BrickPusher::new(&GameConfig::general(3, 11)).is_err());
        assert!(BrickPusher::new(&GameConfig::restricted(3, 12, 2)).is_err());
    }
}
