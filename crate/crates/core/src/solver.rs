//! Exact solving of small chip games.
//!
//! Pusher positions are OR nodes over all legal moves, Remover positions are
//! AND nodes over legal removals. Positions are memoized under a key that is
//! invariant under swapping the two paths, which is sound because the rules
//! treat both paths alike and a position's value does not depend on `N` or
//! on how it was reached. The same table therefore serves every `N` during a
//! threshold scan.

use std::cell::RefCell;
use std::cmp::Ordering;

use dashmap::DashMap;
use rayon::prelude::*;
use rustc_hash::{FxBuildHasher, FxHashMap};
use serde::Serialize;
use thiserror::Error;

use crate::game::{
    initial_state, BoardState, GameConfig, GameVariant, MoveSet, Outcome, PathId, RemovalAction,
    RemovalRule,
};
use crate::weights::{fib, MAX_FIB_INDEX};

/// Longest path the packed representation supports.
pub const MAX_K: usize = 16;

/// Default cap on memo entries (about 1.5 GB worst case).
pub const DEFAULT_BUDGET: usize = 60_000_000;

type Path = [u16; MAX_K + 1];

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("state budget of {budget} positions exceeded after exploring {explored}")]
    BudgetExceeded { budget: usize, explored: usize },
    #[error("instance too large: {0}")]
    TooLarge(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverOptions {
    /// Maximum number of memoized positions.
    pub budget: usize,
    /// Whether Remover may clear a path without moved chips.
    pub removal_rule: RemovalRule,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { budget: DEFAULT_BUDGET, removal_rule: RemovalRule::NonDominated }
    }
}

impl SolverOptions {
    pub fn with_budget(budget: usize) -> Self {
        SolverOptions { budget, ..Default::default() }
    }
}

/// Board normalized so that the lexicographically smaller path comes first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey {
    pub lower: Vec<u32>,
    pub upper: Vec<u32>,
}

pub fn canonicalize(state: &BoardState) -> CanonicalKey {
    let a = state.path(PathId::First).to_vec();
    let b = state.path(PathId::Second).to_vec();
    if a <= b {
        CanonicalKey { lower: a, upper: b }
    } else {
        CanonicalKey { lower: b, upper: a }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SolveResult {
    pub outcome: Outcome,
    pub states_explored: usize,
}

/// Write-once position table.
trait Memo {
    fn get(&self, key: u64) -> Option<bool>;
    fn put(&self, key: u64, value: bool);
    fn len(&self) -> usize;
}

impl Memo for RefCell<FxHashMap<u64, bool>> {
    fn get(&self, key: u64) -> Option<bool> {
        self.borrow().get(&key).copied()
    }
    fn put(&self, key: u64, value: bool) {
        self.borrow_mut().entry(key).or_insert(value);
    }
    fn len(&self) -> usize {
        self.borrow().len()
    }
}

impl Memo for DashMap<u64, bool, FxBuildHasher> {
    fn get(&self, key: u64) -> Option<bool> {
        DashMap::get(self, &key).map(|v| *v)
    }
    fn put(&self, key: u64, value: bool) {
        // first writer wins; every writer computes the same value
        self.entry(key).or_insert(value);
    }
    fn len(&self) -> usize {
        DashMap::len(self)
    }
}

/// Rules and packing shared by the sequential and parallel searches.
#[derive(Clone, Copy, Debug)]
struct Rules {
    k: usize,
    variant: GameVariant,
    rule: RemovalRule,
    bits: u32,
    budget: usize,
}

impl Rules {
    fn new(k: usize, variant: GameVariant, options: SolverOptions) -> Result<Self, SolveError> {
        if k == 0 || k > MAX_K {
            return Err(SolveError::TooLarge(format!("k = {k} outside 1..={MAX_K}")));
        }
        let bits = (64 / (2 * k as u32)).min(16);
        Ok(Rules { k, variant, rule: options.removal_rule, bits, budget: options.budget })
    }

    fn max_count(&self) -> u32 {
        (1u32 << self.bits) - 1
    }

    fn check_fits(&self, n: u32) -> Result<(), SolveError> {
        if n > self.max_count() {
            return Err(SolveError::TooLarge(format!(
                "N = {n} exceeds {} chips per vertex supported for k = {}",
                self.max_count(),
                self.k
            )));
        }
        Ok(())
    }

    fn key(&self, a: &Path, b: &Path) -> u64 {
        let k = self.k;
        let (lo, hi) = match a[..=k].cmp(&b[..=k]) {
            Ordering::Greater => (b, a),
            _ => (a, b),
        };
        let mut key = 0u64;
        for p in [lo, hi] {
            for &c in &p[1..=k] {
                key = (key << self.bits) | c as u64;
            }
        }
        key
    }

    /// Every advance vector for one path, including the empty one.
    fn options(&self, counts: &Path) -> Vec<Path> {
        let mut out = Vec::new();
        let mut cur = [0u16; MAX_K + 1];
        let cap = self.variant.move_cap().map(|c| c.min(u16::MAX as u32) as u16);
        self.options_rec(counts, 1, cap, &mut cur, &mut out);
        out
    }

    fn options_rec(&self, counts: &Path, i: usize, left: Option<u16>, cur: &mut Path, out: &mut Vec<Path>) {
        if i > self.k {
            out.push(*cur);
            return;
        }
        let hi = match left {
            Some(l) => counts[i].min(l),
            None => counts[i],
        };
        for m in 0..=hi {
            cur[i] = m;
            self.options_rec(counts, i + 1, left.map(|l| l - m), cur, out);
        }
        cur[i] = 0;
    }

    fn advanced(&self, counts: &Path, mv: &Path) -> Path {
        let mut out = *counts;
        for i in 1..=self.k {
            out[i] -= mv[i];
            out[i - 1] += mv[i];
        }
        out
    }

    fn removed(&self, counts: &Path, mv: &Path) -> Path {
        let mut out = *counts;
        for i in 1..=self.k {
            out[i] -= mv[i];
        }
        out
    }

    /// Positions Remover can reach answering the move `(ma, mb)`.
    fn children(&self, a: &Path, b: &Path, ma: &Path, mb: &Path, out: &mut Vec<(Path, Path)>) {
        out.clear();
        let moved_a = ma[1..=self.k].iter().any(|&x| x > 0);
        let moved_b = mb[1..=self.k].iter().any(|&x| x > 0);
        if self.variant.removes_single_chip() {
            let aa = self.advanced(a, ma);
            let bb = self.advanced(b, mb);
            for i in 0..=self.k {
                if aa[i] > 0 {
                    let mut x = aa;
                    x[i] -= 1;
                    out.push((x, bb));
                }
                if bb[i] > 0 {
                    let mut y = bb;
                    y[i] -= 1;
                    out.push((aa, y));
                }
            }
            return;
        }
        let dominated = self.rule == RemovalRule::AllowDominated;
        if moved_a || dominated {
            out.push((self.removed(a, ma), self.advanced(b, mb)));
        }
        if moved_b || dominated {
            out.push((self.advanced(a, ma), self.removed(b, mb)));
        }
    }

    fn terminal(&self, a: &Path, b: &Path) -> Option<bool> {
        if a[0] > 0 || b[0] > 0 {
            Some(true)
        } else if a[1..=self.k].iter().chain(b[1..=self.k].iter()).all(|&x| x == 0) {
            Some(false)
        } else {
            None
        }
    }

    /// True when Pusher wins from `(a, b)` with Pusher to move.
    fn pusher_wins<M: Memo>(&self, a: &Path, b: &Path, memo: &M) -> Result<bool, SolveError> {
        if let Some(t) = self.terminal(a, b) {
            return Ok(t);
        }
        let key = self.key(a, b);
        if let Some(v) = memo.get(key) {
            return Ok(v);
        }
        let value = self.evaluate(a, b, memo)?;
        if memo.len() >= self.budget {
            return Err(SolveError::BudgetExceeded { budget: self.budget, explored: memo.len() });
        }
        memo.put(key, value);
        Ok(value)
    }

    fn evaluate<M: Memo>(&self, a: &Path, b: &Path, memo: &M) -> Result<bool, SolveError> {
        let oa = self.options(a);
        let ob = self.options(b);
        let mut kids = Vec::new();
        for ma in &oa {
            for mb in &ob {
                if ma == &[0; MAX_K + 1] && mb == &[0; MAX_K + 1] {
                    continue;
                }
                self.children(a, b, ma, mb, &mut kids);
                if self.move_wins(&kids, memo)? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    fn move_wins<M: Memo>(&self, kids: &[(Path, Path)], memo: &M) -> Result<bool, SolveError> {
        // settle terminal answers before descending
        for (x, y) in kids {
            if self.terminal(x, y) == Some(false) {
                return Ok(false);
            }
        }
        for (x, y) in kids {
            if !self.pusher_wins(x, y, memo)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn to_path(counts: &[u32], k: usize) -> Result<Path, SolveError> {
    let mut out = [0u16; MAX_K + 1];
    for i in 0..=k {
        out[i] = u16::try_from(counts[i])
            .map_err(|_| SolveError::TooLarge(format!("{} chips on one vertex", counts[i])))?;
    }
    Ok(out)
}

fn to_move(ma: &Path, mb: &Path, k: usize) -> MoveSet {
    let conv = |p: &Path| p[..=k].iter().map(|&x| x as u32).collect::<Vec<_>>();
    MoveSet::from_advance(conv(ma), conv(mb)).expect("vertex 0 never moves")
}

/// Memoized solver for one variant; positions persist across calls.
pub struct Solver {
    rules: Rules,
    memo: RefCell<FxHashMap<u64, bool>>,
}

impl Solver {
    pub fn new(k: usize, variant: GameVariant, options: SolverOptions) -> Result<Self, SolveError> {
        Ok(Solver { rules: Rules::new(k, variant, options)?, memo: RefCell::new(FxHashMap::default()) })
    }

    pub fn for_config(config: &GameConfig, options: SolverOptions) -> Result<Self, SolveError> {
        Self::new(config.k, config.variant, options)
    }

    pub fn k(&self) -> usize {
        self.rules.k
    }

    pub fn variant(&self) -> GameVariant {
        self.rules.variant
    }

    pub fn states_explored(&self) -> usize {
        self.memo.borrow().len()
    }

    fn check_board(&self, state: &BoardState) -> Result<(Path, Path), SolveError> {
        if state.k() != self.rules.k {
            return Err(SolveError::TooLarge(format!("board has k = {}, solver k = {}", state.k(), self.rules.k)));
        }
        for p in PathId::BOTH {
            for &c in state.path(p) {
                self.rules.check_fits(c)?;
            }
        }
        Ok((to_path(state.path(PathId::First), self.rules.k)?, to_path(state.path(PathId::Second), self.rules.k)?))
    }

    pub fn solve(&self, config: &GameConfig) -> Result<SolveResult, SolveError> {
        if config.k != self.rules.k || config.variant != self.rules.variant {
            return Err(SolveError::TooLarge("config does not match solver".into()));
        }
        let outcome = self.outcome_of(&initial_state(config))?;
        Ok(SolveResult { outcome, states_explored: self.states_explored() })
    }

    /// Value of a position with Pusher to move.
    pub fn outcome_of(&self, state: &BoardState) -> Result<Outcome, SolveError> {
        let (a, b) = self.check_board(state)?;
        let win = self.rules.pusher_wins(&a, &b, &self.memo)?;
        Ok(if win { Outcome::PusherWin } else { Outcome::RemoverWin })
    }

    /// A winning move for Pusher, or `None` if the position is lost.
    pub fn best_move(&self, state: &BoardState) -> Result<Option<MoveSet>, SolveError> {
        let (a, b) = self.check_board(state)?;
        if self.rules.terminal(&a, &b).is_some() {
            return Ok(None);
        }
        let mut kids = Vec::new();
        for ma in self.rules.options(&a) {
            for mb in self.rules.options(&b) {
                if ma == [0; MAX_K + 1] && mb == [0; MAX_K + 1] {
                    continue;
                }
                self.rules.children(&a, &b, &ma, &mb, &mut kids);
                if self.rules.move_wins(&kids, &self.memo)? {
                    return Ok(Some(to_move(&ma, &mb, self.rules.k)));
                }
            }
        }
        Ok(None)
    }

    /// A removal after which Remover wins, or `None` if every answer loses.
    pub fn best_removal(&self, state: &BoardState, mv: &MoveSet) -> Result<Option<RemovalAction>, SolveError> {
        let config = GameConfig::new(self.rules.k, state.total().max(1), self.rules.variant)
            .map_err(|e| SolveError::TooLarge(e.to_string()))?;
        for removal in crate::game::valid_removals(state, mv, &config, self.rules.removal_rule()) {
            let next = crate::game::apply_round_with(state, mv, &removal, &config, self.rules.removal_rule())
                .map_err(|e| SolveError::TooLarge(e.to_string()))?;
            if self.outcome_of(&next)? == Outcome::RemoverWin {
                return Ok(Some(removal));
            }
        }
        Ok(None)
    }

    /// Parallel solve over Pusher's first moves sharing one table.
    ///
    /// Uses its own table; values agree with [`Solver::solve`].
    pub fn solve_parallel(&self, config: &GameConfig, jobs: usize) -> Result<SolveResult, SolveError> {
        let rules = self.rules;
        let state = initial_state(config);
        let (a, b) = self.check_board(&state)?;
        if let Some(t) = rules.terminal(&a, &b) {
            let outcome = if t { Outcome::PusherWin } else { Outcome::RemoverWin };
            return Ok(SolveResult { outcome, states_explored: 0 });
        }
        let shared: DashMap<u64, bool, FxBuildHasher> = DashMap::with_hasher(FxBuildHasher);
        let mut pairs = Vec::new();
        for ma in rules.options(&a) {
            for mb in rules.options(&b) {
                if ma != [0; MAX_K + 1] || mb != [0; MAX_K + 1] {
                    pairs.push((ma, mb));
                }
            }
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| SolveError::TooLarge(format!("thread pool: {e}")))?;
        let wins: Result<Vec<bool>, SolveError> = pool.install(|| {
            pairs
                .par_iter()
                .map(|(ma, mb)| {
                    let mut kids = Vec::new();
                    rules.children(&a, &b, ma, mb, &mut kids);
                    rules.move_wins(&kids, &shared)
                })
                .collect()
        });
        let win = wins?.into_iter().any(|w| w);
        let outcome = if win { Outcome::PusherWin } else { Outcome::RemoverWin };
        Ok(SolveResult { outcome, states_explored: shared.len() })
    }
}

impl Rules {
    fn removal_rule(&self) -> RemovalRule {
        self.rule
    }
}

/// Convenience: solve one instance with a fresh table.
pub fn solve(config: &GameConfig, options: SolverOptions) -> Result<SolveResult, SolveError> {
    Solver::for_config(config, options)?.solve(config)
}

/// Result of a threshold scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Threshold {
    Exact(u32),
    /// The threshold lies in `lo..=hi`; `hi` is `None` when no upper bound is known.
    Bracket { lo: u32, hi: Option<u32> },
}

impl Threshold {
    pub fn lower(&self) -> u32 {
        match *self {
            Threshold::Exact(t) => t,
            Threshold::Bracket { lo, .. } => lo,
        }
    }

    pub fn upper(&self) -> Option<u32> {
        match *self {
            Threshold::Exact(t) => Some(t),
            Threshold::Bracket { hi, .. } => hi,
        }
    }

    pub fn exact(&self) -> Option<u32> {
        match *self {
            Threshold::Exact(t) => Some(t),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdReport {
    pub k: usize,
    pub variant: GameVariant,
    pub threshold: Threshold,
    /// Outcome for every `N` solved during the scan.
    pub solved: Vec<(u32, Outcome)>,
    pub states_explored: usize,
    /// Why the scan stopped early, if it did.
    pub stopped: Option<SolveError>,
}

impl ThresholdReport {
    pub fn to_json(&self) -> serde_json::Value {
        let mut obj = serde_json::json!({
            "k": self.k,
            "variant": self.variant.name(),
        });
        if let Some(c) = match self.variant {
            GameVariant::General => None,
            v => v.move_cap(),
        } {
            obj["c"] = c.into();
        }
        match self.threshold {
            Threshold::Exact(t) => obj["threshold"] = t.into(),
            Threshold::Bracket { lo, hi } => obj["bracket"] = serde_json::json!([lo, hi]),
        }
        obj
    }
}

/// Known Pusher-win chip count from the explicit strategies, if any.
pub fn known_upper_bound(k: usize, variant: GameVariant) -> Option<u32> {
    let tower = if 2 * k as u32 <= MAX_FIB_INDEX {
        let k32 = k as u32;
        u32::try_from(fib(2 * k32) + 2 * k as u128 * fib(k32 + 1)).ok()
    } else {
        None
    };
    match variant {
        GameVariant::General => {
            let brick = (k as u64).checked_mul(1u64.checked_shl(k as u32 - 1)?)?;
            let brick = u32::try_from(brick).ok();
            match (brick, tower) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, y) => x.or(y),
            }
        }
        GameVariant::Restricted { .. } => tower,
        GameVariant::MakerBreaker => None,
    }
}

/// Smallest `N` for which Pusher wins, by ascending scan with one shared table.
///
/// Pusher winning at `N` implies winning at `N + 1` (spare chips stay put),
/// so the first win is the threshold. A budget failure turns the answer into
/// a bracket.
pub fn threshold(
    k: usize,
    variant: GameVariant,
    options: SolverOptions,
    max_n: Option<u32>,
) -> Result<ThresholdReport, SolveError> {
    let solver = Solver::new(k, variant, options)?;
    let hi = known_upper_bound(k, variant);
    let limit = max_n.or(hi).unwrap_or(solver.rules.max_count()).min(solver.rules.max_count());
    let mut solved = Vec::new();
    let mut stopped = None;
    let mut result = None;
    for n in 1..=limit {
        let config = GameConfig { k, n, variant };
        match solver.solve(&config) {
            Ok(r) => {
                solved.push((n, r.outcome));
                if r.outcome == Outcome::PusherWin {
                    result = Some(Threshold::Exact(n));
                    break;
                }
            }
            Err(e) => {
                result = Some(Threshold::Bracket { lo: n, hi });
                stopped = Some(e);
                break;
            }
        }
    }
    let threshold = result.unwrap_or(Threshold::Bracket { lo: limit + 1, hi });
    if stopped.is_none() && threshold.exact().is_none() {
        stopped = Some(SolveError::TooLarge(format!("scan stopped at N = {limit}")));
    }
    Ok(ThresholdReport { k, variant, threshold, solved, states_explored: solver.states_explored(), stopped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{apply_round, enumerate_moves, terminal, valid_removals};

    fn outcome(config: GameConfig) -> Outcome {
        solve(&config, SolverOptions::default()).unwrap().outcome
    }

    #[test]
    fn tiny_instances() {
        assert_eq!(outcome(GameConfig::general(1, 1)), Outcome::PusherWin);
        assert_eq!(outcome(GameConfig::general(2, 1)), Outcome::RemoverWin);
        assert_eq!(outcome(GameConfig::general(2, 4)), Outcome::PusherWin);
        assert_eq!(outcome(GameConfig::general(3, 0)), Outcome::RemoverWin);
    }

    #[test]
    fn canonical_keys() {
        let a = BoardState::from_counts(vec![0, 1], vec![1, 0]).unwrap();
        assert_eq!(canonicalize(&a), canonicalize(&a.swapped()));
        let b = BoardState::from_counts(vec![0, 2, 1], vec![0, 0, 3]).unwrap();
        assert_eq!(canonicalize(&b), canonicalize(&b.swapped()));
        assert_eq!(canonicalize(&b).lower, vec![0, 0, 3]);
    }

    #[test]
    fn packed_keys_match_canonical_keys() {
        // every board with at most 4 chips per path, k <= 3
        for k in 1..=3usize {
            let rules = Rules::new(k, GameVariant::General, SolverOptions::default()).unwrap();
            let mut paths: Vec<Vec<u32>> = vec![vec![0; k + 1]];
            for i in 1..=k {
                let mut next = Vec::new();
                for p in &paths {
                    for c in 0..=4u32 {
                        let mut q = p.clone();
                        q[i] = c;
                        if q.iter().sum::<u32>() <= 4 {
                            next.push(q);
                        }
                    }
                }
                paths = next;
            }
            let mut seen: std::collections::HashMap<u64, CanonicalKey> = Default::default();
            for x in &paths {
                for y in &paths {
                    let board = BoardState::from_counts(x.clone(), y.clone()).unwrap();
                    let key = rules.key(&to_path(x, k).unwrap(), &to_path(y, k).unwrap());
                    let canon = canonicalize(&board);
                    if let Some(prev) = seen.insert(key, canon.clone()) {
                        assert_eq!(prev, canon, "packed key collision");
                    }
                }
            }
            let distinct: std::collections::HashSet<_> = seen.values().collect();
            assert_eq!(distinct.len(), seen.len());
        }
    }

    #[test]
    fn extraction_plays_the_solved_outcome() {
        let config = GameConfig::general(2, 4);
        let solver = Solver::for_config(&config, SolverOptions::default()).unwrap();
        assert_eq!(solver.solve(&config).unwrap().outcome, Outcome::PusherWin);
        // Pusher follows best_move, Remover tries everything
        fn walk(solver: &Solver, config: &GameConfig, state: &BoardState) {
            if let Some(o) = terminal(state) {
                assert_eq!(o, Outcome::PusherWin);
                return;
            }
            let mv = solver.best_move(state).unwrap().expect("winning move");
            for r in valid_removals(state, &mv, config, RemovalRule::NonDominated) {
                walk(solver, config, &apply_round(state, &mv, &r, config).unwrap());
            }
        }
        walk(&solver, &config, &initial_state(&config));

        let config = GameConfig::general(2, 2);
        let solver = Solver::for_config(&config, SolverOptions::default()).unwrap();
        assert_eq!(solver.solve(&config).unwrap().outcome, Outcome::RemoverWin);
        fn walk_remover(solver: &Solver, config: &GameConfig, state: &BoardState) {
            if let Some(o) = terminal(state) {
                assert_eq!(o, Outcome::RemoverWin);
                return;
            }
            for mv in enumerate_moves(state, config) {
                let r = solver.best_removal(state, &mv).unwrap().expect("saving removal");
                walk_remover(solver, config, &apply_round(state, &mv, &r, config).unwrap());
            }
        }
        walk_remover(&solver, &config, &initial_state(&config));
    }

    #[test]
    fn budget_is_enforced() {
        let err = solve(&GameConfig::restricted(3, 8, 1), SolverOptions::with_budget(10)).unwrap_err();
        assert!(matches!(err, SolveError::BudgetExceeded { budget: 10, .. }));
    }

    #[test]
    fn dominated_removals_do_not_change_values() {
        for variant in [GameVariant::General, GameVariant::Restricted { c: 1 }] {
            for k in 1..=3 {
                for n in 0..=4 {
                    let config = GameConfig { k, n, variant };
                    let strict = outcome(config);
                    let audit = solve(
                        &config,
                        SolverOptions { removal_rule: RemovalRule::AllowDominated, ..Default::default() },
                    )
                    .unwrap()
                    .outcome;
                    assert_eq!(strict, audit, "{config:?}");
                }
            }
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        for config in [GameConfig::general(2, 3), GameConfig::restricted(3, 7, 1), GameConfig::maker_breaker(2, 3)] {
            let seq = outcome(config);
            let solver = Solver::for_config(&config, SolverOptions::default()).unwrap();
            assert_eq!(solver.solve_parallel(&config, 2).unwrap().outcome, seq);
        }
    }

    #[test]
    fn small_thresholds() {
        let r = threshold(1, GameVariant::Restricted { c: 1 }, SolverOptions::default(), None).unwrap();
        assert_eq!(r.threshold, Threshold::Exact(1));
        let r = threshold(2, GameVariant::Restricted { c: 1 }, SolverOptions::default(), None).unwrap();
        assert_eq!(r.threshold, Threshold::Exact(3));
        let r = threshold(2, GameVariant::General, SolverOptions::default(), None).unwrap();
        let t = r.threshold.exact().unwrap();
        assert!((3..=4).contains(&t));
        assert_eq!(r.to_json()["threshold"], t);
    }

    #[test]
    fn threshold_bracket_on_budget() {
        let r = threshold(3, GameVariant::Restricted { c: 1 }, SolverOptions::with_budget(50), None).unwrap();
        match r.threshold {
            Threshold::Bracket { lo, hi } => {
                assert!(lo >= 1);
                assert_eq!(hi, Some(26));
            }
            other => panic!("expected bracket, got {other:?}"),
        }
        assert!(r.stopped.is_some());
    }
}
