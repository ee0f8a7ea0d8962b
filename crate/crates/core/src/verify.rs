//! Strategy verification: exhaustive search over every opponent and
//! seeded random trials.
//!
//! Exhaustive search memoizes on the raw board together with the strategy's
//! `state_digest`. Strategies are not symmetric in the two paths, so the
//! solver's path-swapped canonical key cannot be used here.

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::Serialize;
use thiserror::Error;

use crate::game::{
    apply_round_with, check_move, check_removal, enumerate_moves, terminal, valid_removals, BoardState,
    GameConfig, GameError, MoveSet, Outcome, RemovalAction, RemovalRule,
};
use crate::play::{play_match, MatchError, Round, Side};
use crate::strategies::{PusherStrategy, RemoverStrategy};

pub const DEFAULT_VERIFY_BUDGET: usize = 20_000_000;

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Maximum number of distinct (board, strategy state) nodes.
    pub budget: usize,
    pub removal_rule: RemovalRule,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { budget: DEFAULT_VERIFY_BUDGET, removal_rule: RemovalRule::NonDominated }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("search budget of {budget} nodes exhausted")]
    BudgetExceeded { budget: usize },
    #[error("rules: {0}")]
    Rules(#[from] GameError),
}

/// How a line of play refutes the strategy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Refutation {
    /// The opponent won.
    Lost,
    /// The strategy reported an error.
    StrategyError { message: String },
    /// The strategy proposed an illegal action.
    Illegal { message: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    /// Rounds played before the refutation; the last one may be partial
    /// and is then omitted.
    pub rounds: Vec<Round>,
    pub final_state: BoardState,
    pub refutation: Refutation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub side: Side,
    pub strategy: String,
    pub config: GameConfig,
    pub nodes: usize,
    /// Shortest refutation, if any.
    pub counterexample: Option<Counterexample>,
}

impl VerifyReport {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Rounds until the strategy is refuted under best opponent play; `None`
/// when it wins against everything.
type Memo = FxHashMap<(BoardState, Vec<u8>), Option<u32>>;

struct Search<'a> {
    config: &'a GameConfig,
    options: VerifyOptions,
    memo: Memo,
}

enum Step {
    Fail(Refutation),
    Next(BoardState),
    Win,
}

impl Search<'_> {
    fn remember(&mut self, key: (BoardState, Vec<u8>), value: Option<u32>) -> Result<Option<u32>, VerifyError> {
        if self.memo.len() >= self.options.budget {
            return Err(VerifyError::BudgetExceeded { budget: self.options.budget });
        }
        self.memo.insert(key, value);
        Ok(value)
    }

    fn pusher_round(
        &self,
        state: &BoardState,
        pusher: &mut dyn PusherStrategy,
        removal: &RemovalAction,
        mv: &MoveSet,
    ) -> Step {
        let next = match apply_round_with(state, mv, removal, self.config, self.options.removal_rule) {
            Ok(next) => next,
            Err(e) => return Step::Fail(Refutation::Illegal { message: e.to_string() }),
        };
        if let Err(e) = pusher.observe(removal) {
            return Step::Fail(Refutation::StrategyError { message: e.to_string() });
        }
        match terminal(&next) {
            Some(Outcome::PusherWin) => Step::Win,
            Some(Outcome::RemoverWin) => Step::Fail(Refutation::Lost),
            None => Step::Next(next),
        }
    }

    fn pusher_move(&self, state: &BoardState, pusher: &mut dyn PusherStrategy) -> Result<MoveSet, Refutation> {
        let mv = pusher
            .next_move(state)
            .map_err(|e| Refutation::StrategyError { message: e.to_string() })?;
        check_move(state, &mv, self.config).map_err(|e| Refutation::Illegal { message: e.to_string() })?;
        Ok(mv)
    }

    fn pusher(&mut self, state: &BoardState, pusher: &dyn PusherStrategy) -> Result<Option<u32>, VerifyError> {
        let key = (state.clone(), pusher.state_digest());
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        let mut base = pusher.box_clone();
        let mv = match self.pusher_move(state, base.as_mut()) {
            Ok(mv) => mv,
            Err(_) => return self.remember(key, Some(0)),
        };
        let mut shortest: Option<u32> = None;
        for removal in valid_removals(state, &mv, self.config, self.options.removal_rule) {
            let mut p = base.box_clone();
            let depth = match self.pusher_round(state, p.as_mut(), &removal, &mv) {
                Step::Win => None,
                Step::Fail(_) => Some(1),
                Step::Next(next) => self.pusher(&next, p.as_ref())?.map(|d| d + 1),
            };
            if let Some(d) = depth {
                shortest = Some(shortest.map_or(d, |w| w.min(d)));
            }
        }
        self.remember(key, shortest)
    }

    fn remover_round(
        &self,
        state: &BoardState,
        remover: &mut dyn RemoverStrategy,
        mv: &MoveSet,
    ) -> (Option<RemovalAction>, Step) {
        let removal = match remover.choose(state, mv) {
            Ok(r) => r,
            Err(e) => return (None, Step::Fail(Refutation::StrategyError { message: e.to_string() })),
        };
        if let Err(e) = check_removal(state, mv, &removal, self.config, self.options.removal_rule) {
            return (Some(removal), Step::Fail(Refutation::Illegal { message: e.to_string() }));
        }
        let next = match apply_round_with(state, mv, &removal, self.config, self.options.removal_rule) {
            Ok(next) => next,
            Err(e) => return (Some(removal), Step::Fail(Refutation::Illegal { message: e.to_string() })),
        };
        let step = match terminal(&next) {
            Some(Outcome::RemoverWin) => Step::Win,
            Some(Outcome::PusherWin) => Step::Fail(Refutation::Lost),
            None => Step::Next(next),
        };
        (Some(removal), step)
    }

    fn remover(&mut self, state: &BoardState, remover: &dyn RemoverStrategy) -> Result<Option<u32>, VerifyError> {
        let key = (state.clone(), remover.state_digest());
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        let mut shortest: Option<u32> = None;
        for mv in enumerate_moves(state, self.config) {
            let mut r = remover.box_clone();
            let depth = match self.remover_round(state, r.as_mut(), &mv).1 {
                Step::Win => None,
                Step::Fail(_) => Some(1),
                Step::Next(next) => self.remover(&next, r.as_ref())?.map(|d| d + 1),
            };
            if let Some(d) = depth {
                shortest = Some(shortest.map_or(d, |w| w.min(d)));
            }
        }
        self.remember(key, shortest)
    }

    /// Follows memoized values down a shortest refutation.
    fn pusher_line(&self, start: &BoardState, pusher: &dyn PusherStrategy) -> Counterexample {
        let mut state = start.clone();
        let mut p = pusher.box_clone();
        let mut rounds = Vec::new();
        loop {
            let mv = match self.pusher_move(&state, p.as_mut()) {
                Ok(mv) => mv,
                Err(refutation) => return Counterexample { rounds, final_state: state, refutation },
            };
            let mut chosen: Option<(u32, RemovalAction, BoardState, Box<dyn PusherStrategy>)> = None;
            for removal in valid_removals(&state, &mv, self.config, self.options.removal_rule) {
                let mut q = p.box_clone();
                match self.pusher_round(&state, q.as_mut(), &removal, &mv) {
                    Step::Win => {}
                    Step::Fail(refutation) => {
                        rounds.push(Round { mv: mv.clone(), removal });
                        let final_state = apply_round_with(&state, &mv, &removal, self.config, self.options.removal_rule)
                            .unwrap_or_else(|_| state.clone());
                        return Counterexample { rounds, final_state, refutation };
                    }
                    Step::Next(next) => {
                        let d = self.memo.get(&(next.clone(), q.state_digest())).copied().flatten();
                        if let Some(d) = d {
                            if chosen.as_ref().is_none_or(|(best, ..)| d < *best) {
                                chosen = Some((d, removal, next, q));
                            }
                        }
                    }
                }
            }
            let (_, removal, next, q) = chosen.expect("refuted node has a refuting child");
            rounds.push(Round { mv, removal });
            state = next;
            p = q;
        }
    }

    fn remover_line(&self, start: &BoardState, remover: &dyn RemoverStrategy) -> Counterexample {
        let mut state = start.clone();
        let mut r = remover.box_clone();
        let mut rounds = Vec::new();
        loop {
            let mut chosen: Option<(u32, Round, BoardState, Box<dyn RemoverStrategy>)> = None;
            for mv in enumerate_moves(&state, self.config) {
                let mut q = r.box_clone();
                match self.remover_round(&state, q.as_mut(), &mv) {
                    (_, Step::Win) => {}
                    (removal, Step::Fail(refutation)) => {
                        let final_state = match removal {
                            Some(removal) => {
                                let after = apply_round_with(&state, &mv, &removal, self.config, self.options.removal_rule)
                                    .unwrap_or_else(|_| state.clone());
                                rounds.push(Round { mv, removal });
                                after
                            }
                            None => state.clone(),
                        };
                        return Counterexample { rounds, final_state, refutation };
                    }
                    (Some(removal), Step::Next(next)) => {
                        let d = self.memo.get(&(next.clone(), q.state_digest())).copied().flatten();
                        if let Some(d) = d {
                            if chosen.as_ref().is_none_or(|(best, ..)| d < *best) {
                                chosen = Some((d, Round { mv, removal }, next, q));
                            }
                        }
                    }
                    (None, Step::Next(_)) => unreachable!("a round needs a removal"),
                }
            }
            let (_, round, next, q) = chosen.expect("refuted node has a refuting child");
            rounds.push(round);
            state = next;
            r = q;
        }
    }
}

/// Plays `pusher` against every Remover from the initial board.
pub fn verify_pusher_exhaustive(
    pusher: &dyn PusherStrategy,
    config: &GameConfig,
    options: VerifyOptions,
) -> Result<VerifyReport, VerifyError> {
    verify_pusher_from(pusher, &crate::game::initial_state(config), config, options)
}

/// Plays `pusher` against every Remover from `start`.
pub fn verify_pusher_from(
    pusher: &dyn PusherStrategy,
    start: &BoardState,
    config: &GameConfig,
    options: VerifyOptions,
) -> Result<VerifyReport, VerifyError> {
    let mut search = Search { config, options, memo: Memo::default() };
    let result = if terminal(start).is_some() { None } else { search.pusher(start, pusher)? };
    let counterexample = result.map(|_| search.pusher_line(start, pusher));
    Ok(VerifyReport {
        side: Side::Pusher,
        strategy: pusher.name(),
        config: *config,
        nodes: search.memo.len(),
        counterexample,
    })
}

/// Plays `remover` against every Pusher from the initial board.
pub fn verify_remover_exhaustive(
    remover: &dyn RemoverStrategy,
    config: &GameConfig,
    options: VerifyOptions,
) -> Result<VerifyReport, VerifyError> {
    let start = crate::game::initial_state(config);
    let mut search = Search { config, options, memo: Memo::default() };
    let result = search.remover(&start, remover)?;
    let counterexample = result.map(|_| search.remover_line(&start, remover));
    Ok(VerifyReport {
        side: Side::Remover,
        strategy: remover.name(),
        config: *config,
        nodes: search.memo.len(),
        counterexample,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TrialSummary {
    pub games: u64,
    pub pusher_wins: u64,
    pub remover_wins: u64,
    pub max_rounds: usize,
    /// Seeds whose game ended in an error, with the message.
    pub errors: Vec<(u64, String)>,
}

impl TrialSummary {
    /// Whether every game went to `side` without errors.
    pub fn all_won_by(&self, side: Side) -> bool {
        self.errors.is_empty()
            && match side {
                Side::Pusher => self.pusher_wins == self.games,
                Side::Remover => self.remover_wins == self.games,
            }
    }
}

/// Plays `games` seeded matches in parallel; seeds are `first_seed..`.
pub fn run_trials<P, R>(
    config: &GameConfig,
    games: u64,
    first_seed: u64,
    make_pusher: P,
    make_remover: R,
) -> TrialSummary
where
    P: Fn(u64) -> Box<dyn PusherStrategy> + Sync,
    R: Fn(u64) -> Box<dyn RemoverStrategy> + Sync,
{
    let limit = config.round_bound() + 1;
    type GameResult = (u64, Result<(Outcome, usize), MatchError>);
    let results: Vec<GameResult> = (first_seed..first_seed + games)
        .into_par_iter()
        .map(|seed| {
            let mut p = make_pusher(seed);
            let mut r = make_remover(seed);
            let res = play_match(p.as_mut(), r.as_mut(), config, limit).map(|t| (t.outcome, t.round_count()));
            (seed, res)
        })
        .collect();
    let mut summary = TrialSummary { games, ..TrialSummary::default() };
    for (seed, res) in results {
        match res {
            Ok((outcome, rounds)) => {
                match outcome {
                    Outcome::PusherWin => summary.pusher_wins += 1,
                    Outcome::RemoverWin => summary.remover_wins += 1,
                }
                summary.max_rounds = summary.max_rounds.max(rounds);
            }
            Err(e) => summary.errors.push((seed, e.to_string())),
        }
    }
    summary
}
