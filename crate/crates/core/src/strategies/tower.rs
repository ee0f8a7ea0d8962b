//! Tower strategy for the 1-restricted game.
//!
//! An `(a,b)`-tower owns one chip on each of the vertices `k..=k-a+1` of
//! the first path and `k..=k-b+1` of the second. Remaining chips sit in one
//! bucket per path on vertex `k`. Between board moves Pusher rebuilds towers
//! that lost a side and exchanges equal-size towers of different shape;
//! the board move advances the two top chips of one of two identical towers
//! and hands the surviving chip to the other.
//!
//! Towers are weighted by `F(size)`; their total weight `W` never decreases.
//!
//! When every tower has a different size no action exists. Pusher then
//! recruits one more (1,1)-tower from the buckets; with `2k-1` towers and
//! `2k-2` sizes below the winning `(k,k)` shape this happens at most once.
//!
//! Before each board move Pusher also looks for a forcing line: a chip on
//! vertex 1 is a threat, and pushing it to 0 forces Remover to clear that
//! path, so the chip moved on the other path survives. Once a sequence of
//! such rounds ends with a chip on vertex 1 of both paths the game is won
//! and the towers are abandoned.

use rustc_hash::FxHashSet;
use serde::Serialize;

use super::{Digest, PusherStrategy, StrategyError};
use crate::game::{BoardState, GameConfig, MoveSet, PathId, RemovalAction};
use crate::weights::{fib, tower_rebuild_limit};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Tower {
    pub a: u32,
    pub b: u32,
}

impl Tower {
    pub fn size(&self) -> u32 {
        self.a + self.b
    }

    pub fn side(&self, path: PathId) -> u32 {
        match path {
            PathId::First => self.a,
            PathId::Second => self.b,
        }
    }

    fn side_mut(&mut self, path: PathId) -> &mut u32 {
        match path {
            PathId::First => &mut self.a,
            PathId::Second => &mut self.b,
        }
    }

    pub fn weight(&self) -> u128 {
        fib(self.size())
    }
}

/// Towers in creation order plus the two buckets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TowerState {
    pub k: usize,
    pub towers: Vec<Tower>,
    pub buckets: [u32; 2],
}

impl TowerState {
    pub fn total_weight(&self) -> u128 {
        self.towers.iter().map(Tower::weight).sum()
    }

    /// Board implied by the towers and buckets.
    pub fn board(&self) -> BoardState {
        let k = self.k;
        let mut board = BoardState::empty(k);
        for p in PathId::BOTH {
            for t in &self.towers {
                let h = t.side(p) as usize;
                for depth in 0..h.min(k + 1) {
                    let v = k - depth;
                    board.set(p, v, board.count(p, v) + 1);
                }
            }
            board.set(p, k, board.count(p, k) + self.buckets[p.index()]);
        }
        board
    }

    pub fn max_size(&self) -> u32 {
        self.towers.iter().map(Tower::size).max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TowerStats {
    /// Chips taken from each bucket.
    pub withdrawals: [u32; 2],
    pub rebuilds: u32,
    /// Rebuilds that left `W` unchanged (a `(1,0)` or `(0,1)` completed).
    pub flat_rebuilds: u32,
    /// Rebuilds performed while `W` exceeded the limit `K`.
    pub rebuilds_above_limit: u32,
    pub exchanges: u32,
    /// Exchanges that left `W` unchanged (`(1,2)` and `(2,1)`).
    pub flat_exchanges: u32,
    pub advances: u32,
    pub recruits: u32,
    pub max_weight: u128,
    /// Length of the forcing line that ended the game, before the final round.
    pub forcing_rounds: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Pending {
    Advance { first: usize, second: usize },
    Forced,
    Finish,
}

/// One forced round: the threat on `threat` goes to 0 and the other path
/// moves its chip from vertex `push`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct ForcedStep {
    threat: PathId,
    push: usize,
}

/// Node limit for one forcing search.
const FORCING_BUDGET: usize = 200_000;

/// Forced rounds leading to a double threat, if any.
fn forcing_line(board: &BoardState) -> Option<Vec<ForcedStep>> {
    let k = board.k();
    if k == 0 || (board.count(PathId::First, 1) == 0 && board.count(PathId::Second, 1) == 0) {
        return None;
    }
    let counts = [board.path(PathId::First).to_vec(), board.path(PathId::Second).to_vec()];
    let mut failed = FxHashSet::default();
    let mut line = Vec::new();
    let mut nodes = 0;
    search(&counts, &mut failed, &mut line, &mut nodes).then_some(line)
}

fn search(
    counts: &[Vec<u32>; 2],
    failed: &mut FxHashSet<[Vec<u32>; 2]>,
    line: &mut Vec<ForcedStep>,
    nodes: &mut usize,
) -> bool {
    if counts[0][1] > 0 && counts[1][1] > 0 {
        return true;
    }
    *nodes += 1;
    if *nodes > FORCING_BUDGET || failed.contains(counts) {
        return false;
    }
    for threat in PathId::BOTH {
        let (p, q) = (threat.index(), threat.other().index());
        if counts[p][1] == 0 {
            continue;
        }
        for push in 2..counts[q].len() {
            if counts[q][push] == 0 {
                continue;
            }
            let mut next = counts.clone();
            next[p][1] -= 1;
            next[q][push] -= 1;
            next[q][push - 1] += 1;
            line.push(ForcedStep { threat, push });
            if search(&next, failed, line, nodes) {
                return true;
            }
            line.pop();
        }
    }
    failed.insert(counts.clone());
    false
}

#[derive(Clone, Debug)]
pub struct TowerPusher {
    config: GameConfig,
    state: TowerState,
    stats: TowerStats,
    limit: u128,
    withdrawal_cap: u64,
    strict_withdrawals: bool,
    pending: Option<Pending>,
    /// Remaining rounds of a committed forcing line, next one last.
    forcing: Option<Vec<ForcedStep>>,
    won: bool,
}

impl TowerPusher {
    pub fn design_chips(k: usize) -> u128 {
        fib(2 * k as u32) + 2 * k as u128 * fib(k as u32 + 1)
    }

    pub fn new(config: &GameConfig) -> Result<Self, StrategyError> {
        if config.variant.move_cap() != Some(1) {
            return Err(StrategyError::Incompatible(format!(
                "tower strategy needs 1-restricted moves, got {}",
                config.variant
            )));
        }
        let k = config.k;
        let towers = 2 * k as u32 - 2;
        if config.n < towers {
            return Err(StrategyError::Incompatible(format!(
                "tower strategy needs N >= {towers}, got {}",
                config.n
            )));
        }
        let limit = tower_rebuild_limit(k);
        let state = TowerState {
            k,
            towers: vec![Tower { a: 1, b: 1 }; towers as usize],
            buckets: [config.n - towers; 2],
        };
        let stats = TowerStats { max_weight: state.total_weight(), ..TowerStats::default() };
        Ok(TowerPusher {
            config: *config,
            state,
            stats,
            limit,
            withdrawal_cap: (limit + 1).saturating_sub(towers as u128).min(u64::MAX as u128) as u64,
            strict_withdrawals: false,
            pending: None,
            forcing: None,
            won: false,
        })
    }

    pub fn tower_state(&self) -> &TowerState {
        &self.state
    }

    pub fn stats(&self) -> &TowerStats {
        &self.stats
    }

    /// Withdrawal limit `K + 1 - (2k - 2)` per bucket.
    pub fn withdrawal_cap(&self) -> u64 {
        self.withdrawal_cap
    }

    /// Report exceeding the withdrawal limit as an invariant violation.
    pub fn with_strict_withdrawals(mut self, strict: bool) -> Self {
        self.strict_withdrawals = strict;
        self
    }

    fn audit(&self) -> bool {
        self.config.variant.move_cap() == Some(1) && !self.config.variant.removes_single_chip()
    }

    fn withdraw(&mut self, path: PathId) -> Result<(), StrategyError> {
        let i = path.index();
        if self.state.buckets[i] == 0 {
            return Err(StrategyError::Failure(format!("the {path} bucket is empty")));
        }
        self.state.buckets[i] -= 1;
        self.stats.withdrawals[i] += 1;
        if self.strict_withdrawals && self.stats.withdrawals[i] as u64 > self.withdrawal_cap {
            return Err(StrategyError::InvariantViolation(format!(
                "{} chips taken from the {path} bucket, bound is {}",
                self.stats.withdrawals[i], self.withdrawal_cap
            )));
        }
        Ok(())
    }

    fn rebuild(&mut self) -> Result<bool, StrategyError> {
        let Some(idx) = self.state.towers.iter().position(|t| t.a == 0 || t.b == 0) else {
            return Ok(false);
        };
        let before = self.state.total_weight();
        let t = self.state.towers[idx];
        let path = if t.b == 0 { PathId::Second } else { PathId::First };
        self.withdraw(path)?;
        *self.state.towers[idx].side_mut(path) += 1;
        let after = self.state.total_weight();
        self.stats.rebuilds += 1;
        if after == before {
            self.stats.flat_rebuilds += 1;
        }
        if before > self.limit {
            self.stats.rebuilds_above_limit += 1;
        }
        Ok(true)
    }

    fn exchange(&mut self) -> Result<bool, StrategyError> {
        let towers = &self.state.towers;
        for i in 0..towers.len() {
            for j in i + 1..towers.len() {
                let (x, y) = (towers[i], towers[j]);
                if x.size() == y.size() && x.a != y.a {
                    let before = self.state.total_weight();
                    self.state.towers[i] = Tower { a: x.a, b: y.b };
                    self.state.towers[j] = Tower { a: y.a, b: x.b };
                    let after = self.state.total_weight();
                    if self.audit() && after < before {
                        return Err(StrategyError::InvariantViolation(format!(
                            "exchange of {x:?} and {y:?} lowered the tower weight"
                        )));
                    }
                    self.stats.exchanges += 1;
                    if after == before {
                        self.stats.flat_exchanges += 1;
                    }
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// Two earliest identical towers of maximum size with both sides occupied.
    fn advance_pair(&self) -> Option<(usize, usize)> {
        let towers = &self.state.towers;
        let mut best: Option<(u32, usize, usize)> = None;
        for i in 0..towers.len() {
            if towers[i].a == 0 || towers[i].b == 0 {
                continue;
            }
            if let Some(j) = (i + 1..towers.len()).find(|&j| towers[j] == towers[i]) {
                let s = towers[i].size();
                if best.is_none_or(|(bs, _, _)| s > bs) {
                    best = Some((s, i, j));
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    fn settle(&mut self) -> Result<(), StrategyError> {
        loop {
            if self.rebuild()? || self.exchange()? {
                continue;
            }
            return Ok(());
        }
    }

    fn record_weight(&mut self) -> Result<(), StrategyError> {
        let w = self.state.total_weight();
        if self.audit() && w < self.stats.max_weight {
            return Err(StrategyError::InvariantViolation(format!(
                "tower weight fell from {} to {w}",
                self.stats.max_weight
            )));
        }
        self.stats.max_weight = self.stats.max_weight.max(w);
        Ok(())
    }
}

impl PusherStrategy for TowerPusher {
    fn name(&self) -> String {
        "tower".into()
    }

    fn next_move(&mut self, state: &BoardState) -> Result<MoveSet, StrategyError> {
        let k = self.config.k;
        if let Some(line) = &mut self.forcing {
            let (mv, pending) = match line.pop() {
                Some(step) => (
                    MoveSet::empty(k).with(step.threat, 1, 1).with(step.threat.other(), step.push, 1),
                    Pending::Forced,
                ),
                None => (MoveSet::empty(k).with(PathId::First, 1, 1).with(PathId::Second, 1, 1), Pending::Finish),
            };
            if PathId::BOTH.iter().any(|&p| (1..=k).any(|i| mv.count(p, i) > state.count(p, i))) {
                return Err(StrategyError::InvariantViolation(format!("forcing move {mv:?} does not fit board {state}")));
            }
            self.pending = Some(pending);
            return Ok(mv);
        }
        let expected = self.state.board();
        if &expected != state {
            return Err(StrategyError::InvariantViolation(format!(
                "towers account for {expected}, board is {state}"
            )));
        }
        let mut recruited = false;
        let pair = loop {
            self.settle()?;
            self.record_weight()?;
            if let Some(mut line) = forcing_line(&self.state.board()) {
                self.stats.forcing_rounds = line.len() as u32;
                line.reverse();
                self.forcing = Some(line);
                return self.next_move(state);
            }
            if let Some(pair) = self.advance_pair() {
                break pair;
            }
            if recruited {
                return Err(StrategyError::InvariantViolation(format!(
                    "no action available with towers {:?}",
                    self.state.towers
                )));
            }
            self.withdraw(PathId::First)?;
            self.withdraw(PathId::Second)?;
            self.state.towers.push(Tower { a: 1, b: 1 });
            self.stats.recruits += 1;
            recruited = true;
        };
        let t = self.state.towers[pair.0];
        self.pending = Some(Pending::Advance { first: pair.0, second: pair.1 });
        Ok(MoveSet::empty(k)
            .with(PathId::First, k + 1 - t.a as usize, 1)
            .with(PathId::Second, k + 1 - t.b as usize, 1))
    }

    fn observe(&mut self, removal: &RemovalAction) -> Result<(), StrategyError> {
        let k = self.config.k;
        let pending = self
            .pending
            .take()
            .ok_or_else(|| StrategyError::InvariantViolation("removal observed without a move".into()))?;
        let (first, second) = match pending {
            Pending::Finish => {
                self.won = true;
                return Ok(());
            }
            Pending::Forced => return Ok(()),
            Pending::Advance { first, second } => (first, second),
        };
        let before = self.state.total_weight();
        let t = self.state.towers[first];
        let landing = |p: PathId| k - t.side(p) as usize;
        let (survivors, extra): (Vec<PathId>, Option<(PathId, usize)>) = match *removal {
            RemovalAction::PathChoice(p) => (vec![p.other()], None),
            RemovalAction::ChipChoice { path, position } if position == landing(path) => {
                (vec![path.other()], None)
            }
            RemovalAction::ChipChoice { path, position } => (PathId::BOTH.to_vec(), Some((path, position))),
        };
        self.state.towers[first] = Tower { a: t.a - 1, b: t.b - 1 };
        for p in &survivors {
            *self.state.towers[second].side_mut(*p) += 1;
        }
        self.stats.advances += 1;
        if self.state.towers.iter().any(|t| t.a as usize > k || t.b as usize > k) {
            self.won = true;
            return Ok(());
        }
        if self.audit() && self.state.total_weight() != before {
            return Err(StrategyError::InvariantViolation(format!(
                "advance changed the tower weight from {before} to {}",
                self.state.total_weight()
            )));
        }
        if let Some((path, position)) = extra {
            if position == k && self.state.buckets[path.index()] > 0 {
                self.state.buckets[path.index()] -= 1;
            } else if let Some(t) = self
                .state
                .towers
                .iter_mut()
                .rev()
                .find(|t| t.side(path) > 0 && k + 1 - t.side(path) as usize == position)
            {
                *t.side_mut(path) -= 1;
            } else {
                return Err(StrategyError::Failure(format!(
                    "removal of a chip inside a tower on vertex {position} of the {path} path"
                )));
            }
        }
        Ok(())
    }

    fn state_digest(&self) -> Vec<u8> {
        let mut d = Digest::default()
            .u8(self.won as u8)
            .u8(self.strict_withdrawals as u8)
            .u32(self.state.buckets[0])
            .u32(self.state.buckets[1])
            .u32(self.stats.withdrawals[0])
            .u32(self.stats.withdrawals[1]);
        d = match self.pending {
            None => d.u8(0),
            Some(Pending::Finish) => d.u8(1),
            Some(Pending::Forced) => d.u8(3),
            Some(Pending::Advance { first, second }) => d.u8(2).u32(first as u32).u32(second as u32),
        };
        for t in &self.state.towers {
            d = d.u32(t.a).u32(t.b);
        }
        if let Some(line) = &self.forcing {
            d = d.u8(4);
            for step in line {
                d = d.u8(step.threat.index() as u8).u32(step.push as u32);
            }
        }
        d.finish()
    }

    fn box_clone(&self) -> Box<dyn PusherStrategy> {
        Box::new(self.clone())
    }
}
