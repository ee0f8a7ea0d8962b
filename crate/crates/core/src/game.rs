//! Rules of the two-path chip game.
//!
//! The board consists of two directed paths whose vertices are indexed
//! `k, k-1, ..., 0`. Every round Pusher advances a nonempty set of chips by
//! one vertex, then Remover deletes chips: in the general and restricted
//! games all chips moved this round on one path, in the Maker-Breaker game a
//! single chip anywhere on the board. Pusher wins when a chip survives on
//! vertex 0, Remover wins when the board is empty.
//!
//! All values here are immutable; [`apply_round`] returns a new board.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Rule variant of a chip game.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GameVariant {
    /// Pusher may move any nonempty set of chips.
    General,
    /// Pusher moves at most `c` chips on each path per round.
    Restricted { c: u32 },
    /// 1-restricted moves; Remover deletes any single chip on the board.
    MakerBreaker,
}

impl GameVariant {
    /// Per-path move cap, if any.
    pub fn move_cap(&self) -> Option<u32> {
        match *self {
            GameVariant::General => None,
            GameVariant::Restricted { c } => Some(c),
            GameVariant::MakerBreaker => Some(1),
        }
    }

    /// Whether Remover answers with a single chip instead of a path.
    pub fn removes_single_chip(&self) -> bool {
        matches!(self, GameVariant::MakerBreaker)
    }

    pub fn name(&self) -> &'static str {
        match self {
            GameVariant::General => "general",
            GameVariant::Restricted { .. } => "restricted",
            GameVariant::MakerBreaker => "mmb",
        }
    }

    /// Builds a variant from its short name and optional cap.
    pub fn from_name(name: &str, c: Option<u32>) -> Result<Self, GameError> {
        match name {
            "general" => Ok(GameVariant::General),
            "restricted" => {
                let c = c.unwrap_or(1);
                if c == 0 {
                    return Err(GameError::InvalidConfig("restricted variant needs c >= 1".into()));
                }
                Ok(GameVariant::Restricted { c })
            }
            "mmb" | "maker-breaker" => match c {
                None | Some(1) => Ok(GameVariant::MakerBreaker),
                Some(c) => Err(GameError::InvalidConfig(format!(
                    "maker-breaker variant is 1-restricted, got c = {c}"
                ))),
            },
            other => Err(GameError::InvalidConfig(format!("unknown variant `{other}`"))),
        }
    }
}

impl fmt::Display for GameVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameVariant::Restricted { c } => write!(f, "restricted(c={c})"),
            other => f.write_str(other.name()),
        }
    }
}

/// Parameters of a `(k, N)` chip game.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GameConfig {
    /// Path length; vertices are `k..=0`.
    pub k: usize,
    /// Chips initially on vertex `k` of each path.
    pub n: u32,
    pub variant: GameVariant,
}

impl GameConfig {
    pub fn new(k: usize, n: u32, variant: GameVariant) -> Result<Self, GameError> {
        if k == 0 {
            return Err(GameError::InvalidConfig("k must be at least 1".into()));
        }
        if let GameVariant::Restricted { c: 0 } = variant {
            return Err(GameError::InvalidConfig("restricted variant needs c >= 1".into()));
        }
        Ok(GameConfig { k, n, variant })
    }

    pub fn general(k: usize, n: u32) -> Self {
        Self::new(k, n, GameVariant::General).expect("valid general config")
    }

    pub fn restricted(k: usize, n: u32, c: u32) -> Self {
        Self::new(k, n, GameVariant::Restricted { c }).expect("valid restricted config")
    }

    pub fn maker_breaker(k: usize, n: u32) -> Self {
        Self::new(k, n, GameVariant::MakerBreaker).expect("valid maker-breaker config")
    }

    /// Upper bound on the length of any legal game.
    pub fn round_bound(&self) -> u64 {
        2 * self.n as u64 * self.k as u64
    }
}

/// One of the two paths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathId {
    First,
    Second,
}

impl PathId {
    pub const BOTH: [PathId; 2] = [PathId::First, PathId::Second];

    pub fn index(self) -> usize {
        match self {
            PathId::First => 0,
            PathId::Second => 1,
        }
    }

    pub fn from_index(i: usize) -> PathId {
        if i == 0 {
            PathId::First
        } else {
            PathId::Second
        }
    }

    pub fn other(self) -> PathId {
        match self {
            PathId::First => PathId::Second,
            PathId::Second => PathId::First,
        }
    }
}

impl fmt::Display for PathId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PathId::First => "first",
            PathId::Second => "second",
        })
    }
}

/// Chip counts on both paths, indexed by vertex `0..=k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoardState {
    counts: [Vec<u32>; 2],
}

impl BoardState {
    pub fn empty(k: usize) -> Self {
        BoardState { counts: [vec![0; k + 1], vec![0; k + 1]] }
    }

    /// Builds a board from explicit per-path counts (index = vertex).
    pub fn from_counts(first: Vec<u32>, second: Vec<u32>) -> Result<Self, GameError> {
        if first.len() != second.len() || first.len() < 2 {
            return Err(GameError::InvalidConfig(format!(
                "path lengths must agree and cover at least vertices 1..0 (got {} and {})",
                first.len(),
                second.len()
            )));
        }
        Ok(BoardState { counts: [first, second] })
    }

    pub fn k(&self) -> usize {
        self.counts[0].len() - 1
    }

    pub fn path(&self, path: PathId) -> &[u32] {
        &self.counts[path.index()]
    }

    pub fn count(&self, path: PathId, position: usize) -> u32 {
        self.counts[path.index()][position]
    }

    pub fn set(&mut self, path: PathId, position: usize, value: u32) {
        self.counts[path.index()][position] = value;
    }

    pub fn path_total(&self, path: PathId) -> u32 {
        self.path(path).iter().sum()
    }

    pub fn total(&self) -> u32 {
        self.path_total(PathId::First) + self.path_total(PathId::Second)
    }

    pub fn is_empty(&self) -> bool {
        self.total() == 0
    }

    /// Sum over all chips of their vertex index.
    pub fn position_sum(&self) -> u64 {
        self.counts
            .iter()
            .flat_map(|p| p.iter().enumerate())
            .map(|(i, &c)| i as u64 * c as u64)
            .sum()
    }

    /// The same board with the roles of the paths exchanged.
    pub fn swapped(&self) -> Self {
        BoardState { counts: [self.counts[1].clone(), self.counts[0].clone()] }
    }

    /// Lowest occupied vertex on a path.
    pub fn lowest(&self, path: PathId) -> Option<usize> {
        self.path(path).iter().position(|&c| c > 0)
    }

    /// Highest occupied vertex on a path.
    pub fn highest(&self, path: PathId) -> Option<usize> {
        self.path(path).iter().rposition(|&c| c > 0)
    }
}

impl fmt::Display for BoardState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "first={:?} second={:?}", self.counts[0], self.counts[1])
    }
}

/// Chips advanced by Pusher in one round, per path and per source vertex.
///
/// Index `i` holds the number of chips moved from vertex `i` to `i - 1`;
/// index 0 is always zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MoveSet {
    advance: [Vec<u32>; 2],
}

impl MoveSet {
    pub fn empty(k: usize) -> Self {
        MoveSet { advance: [vec![0; k + 1], vec![0; k + 1]] }
    }

    pub fn from_advance(first: Vec<u32>, second: Vec<u32>) -> Result<Self, GameError> {
        if first.len() != second.len() || first.is_empty() {
            return Err(GameError::InvalidMove("advance vectors must have equal nonzero length".into()));
        }
        if first[0] != 0 || second[0] != 0 {
            return Err(GameError::InvalidMove("chips on vertex 0 cannot move".into()));
        }
        Ok(MoveSet { advance: [first, second] })
    }

    /// Builder: add `count` chips moved from `position` on `path`.
    pub fn with(mut self, path: PathId, position: usize, count: u32) -> Self {
        self.advance[path.index()][position] += count;
        self
    }

    pub fn k(&self) -> usize {
        self.advance[0].len() - 1
    }

    pub fn path(&self, path: PathId) -> &[u32] {
        &self.advance[path.index()]
    }

    pub fn count(&self, path: PathId, position: usize) -> u32 {
        self.advance[path.index()][position]
    }

    pub fn add(&mut self, path: PathId, position: usize, count: u32) {
        self.advance[path.index()][position] += count;
    }

    pub fn path_total(&self, path: PathId) -> u32 {
        self.path(path).iter().sum()
    }

    pub fn total(&self) -> u32 {
        self.path_total(PathId::First) + self.path_total(PathId::Second)
    }

    pub fn moves_on(&self, path: PathId) -> bool {
        self.path_total(path) > 0
    }

    pub fn swapped(&self) -> Self {
        MoveSet { advance: [self.advance[1].clone(), self.advance[0].clone()] }
    }
}

/// Remover's response to a move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RemovalAction {
    /// Remove every chip moved this round on the path.
    PathChoice(PathId),
    /// Remove one chip at a (post-move) vertex; Maker-Breaker only.
    ChipChoice { path: PathId, position: usize },
}

impl fmt::Display for RemovalAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RemovalAction::PathChoice(p) => write!(f, "clear {p}"),
            RemovalAction::ChipChoice { path, position } => write!(f, "delete {path}@{position}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    PusherWin,
    RemoverWin,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::PusherWin => "PusherWin",
            Outcome::RemoverWin => "RemoverWin",
        })
    }
}

/// Whether Remover may clear a path on which nothing moved.
///
/// Such a choice never helps Remover, so the default excludes it; solvers
/// can re-enable it to audit that exclusion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum RemovalRule {
    #[default]
    NonDominated,
    AllowDominated,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid move: {0}")]
    InvalidMove(String),
    #[error("invalid removal: {0}")]
    InvalidRemoval(String),
    #[error("position {position} out of range 0..={k}")]
    PositionOutOfRange { position: usize, k: usize },
}

/// Starting board: `N` chips on vertex `k` of each path.
pub fn initial_state(config: &GameConfig) -> BoardState {
    let mut board = BoardState::empty(config.k);
    for p in PathId::BOTH {
        board.set(p, config.k, config.n);
    }
    board
}

/// Terminal check; only meaningful after a removal step.
pub fn terminal(state: &BoardState) -> Option<Outcome> {
    if PathId::BOTH.iter().any(|&p| state.count(p, 0) > 0) {
        Some(Outcome::PusherWin)
    } else if state.is_empty() {
        Some(Outcome::RemoverWin)
    } else {
        None
    }
}

/// Checks a move against the board and variant, naming the first violation.
pub fn check_move(state: &BoardState, mv: &MoveSet, config: &GameConfig) -> Result<(), GameError> {
    let k = config.k;
    if state.k() != k || mv.k() != k {
        return Err(GameError::InvalidMove(format!(
            "dimension mismatch: board k={}, move k={}, config k={k}",
            state.k(),
            mv.k()
        )));
    }
    if let Some(outcome) = terminal(state) {
        return Err(GameError::InvalidMove(format!("board is terminal ({outcome})")));
    }
    for p in PathId::BOTH {
        if mv.count(p, 0) != 0 {
            return Err(GameError::InvalidMove(format!("chips on vertex 0 of the {p} path cannot move")));
        }
        for i in 1..=k {
            if mv.count(p, i) > state.count(p, i) {
                return Err(GameError::InvalidMove(format!(
                    "moves {} chips from vertex {i} of the {p} path which holds {}",
                    mv.count(p, i),
                    state.count(p, i)
                )));
            }
        }
        if let Some(cap) = config.variant.move_cap() {
            if mv.path_total(p) > cap {
                return Err(GameError::InvalidMove(format!(
                    "moves {} chips on the {p} path, cap is {cap}",
                    mv.path_total(p)
                )));
            }
        }
    }
    if mv.total() == 0 {
        return Err(GameError::InvalidMove("move set is empty".into()));
    }
    Ok(())
}

pub fn validate_move(state: &BoardState, mv: &MoveSet, config: &GameConfig) -> bool {
    check_move(state, mv, config).is_ok()
}

/// Board after Pusher's move, before Remover responds.
pub fn advance(state: &BoardState, mv: &MoveSet) -> BoardState {
    let mut next = state.clone();
    for p in PathId::BOTH {
        for i in 1..=state.k() {
            let m = mv.count(p, i);
            if m > 0 {
                next.counts[p.index()][i] -= m;
                next.counts[p.index()][i - 1] += m;
            }
        }
    }
    next
}

/// Checks a removal for a validated move.
pub fn check_removal(
    state: &BoardState,
    mv: &MoveSet,
    removal: &RemovalAction,
    config: &GameConfig,
    rule: RemovalRule,
) -> Result<(), GameError> {
    match (*removal, config.variant.removes_single_chip()) {
        (RemovalAction::PathChoice(path), false) => {
            if rule == RemovalRule::NonDominated && !mv.moves_on(path) {
                return Err(GameError::InvalidRemoval(format!(
                    "the {path} path has no moved chips while the {} path does",
                    path.other()
                )));
            }
            Ok(())
        }
        (RemovalAction::ChipChoice { path, position }, true) => {
            if position > config.k {
                return Err(GameError::PositionOutOfRange { position, k: config.k });
            }
            let after = advance(state, mv);
            if after.count(path, position) == 0 {
                return Err(GameError::InvalidRemoval(format!(
                    "no chip on vertex {position} of the {path} path"
                )));
            }
            Ok(())
        }
        (RemovalAction::PathChoice(_), true) => Err(GameError::InvalidRemoval(
            "maker-breaker Remover deletes a single chip, not a path".into(),
        )),
        (RemovalAction::ChipChoice { .. }, false) => Err(GameError::InvalidRemoval(
            "single-chip removal is only legal in the maker-breaker variant".into(),
        )),
    }
}

/// Every legal removal answering `mv`.
pub fn valid_removals(
    state: &BoardState,
    mv: &MoveSet,
    config: &GameConfig,
    rule: RemovalRule,
) -> Vec<RemovalAction> {
    if config.variant.removes_single_chip() {
        let after = advance(state, mv);
        let mut out = Vec::new();
        for p in PathId::BOTH {
            for i in 0..=config.k {
                if after.count(p, i) > 0 {
                    out.push(RemovalAction::ChipChoice { path: p, position: i });
                }
            }
        }
        out
    } else {
        PathId::BOTH
            .into_iter()
            .filter(|&p| rule == RemovalRule::AllowDominated || mv.moves_on(p))
            .map(RemovalAction::PathChoice)
            .collect()
    }
}

/// Plays one round under the default (non-dominated) removal rule.
pub fn apply_round(
    state: &BoardState,
    mv: &MoveSet,
    removal: &RemovalAction,
    config: &GameConfig,
) -> Result<BoardState, GameError> {
    apply_round_with(state, mv, removal, config, RemovalRule::NonDominated)
}

pub fn apply_round_with(
    state: &BoardState,
    mv: &MoveSet,
    removal: &RemovalAction,
    config: &GameConfig,
    rule: RemovalRule,
) -> Result<BoardState, GameError> {
    check_move(state, mv, config)?;
    check_removal(state, mv, removal, config, rule)?;
    let mut next = advance(state, mv);
    match *removal {
        RemovalAction::PathChoice(path) => {
            for i in 1..=config.k {
                next.counts[path.index()][i - 1] -= mv.count(path, i);
            }
        }
        RemovalAction::ChipChoice { path, position } => {
            next.counts[path.index()][position] -= 1;
        }
    }
    Ok(next)
}

/// All legal moves, each exactly once.
///
/// General: every per-vertex choice of `0..=count` chips on both paths,
/// minus the empty move. Restricted: per path, every multiset of at most
/// `c` chips by source vertex.
pub fn enumerate_moves(state: &BoardState, config: &GameConfig) -> Vec<MoveSet> {
    if terminal(state).is_some() {
        return Vec::new();
    }
    let k = config.k;
    let cap = config.variant.move_cap();
    let per_path: Vec<Vec<Vec<u32>>> = PathId::BOTH
        .iter()
        .map(|&p| path_options(state.path(p), cap))
        .collect();
    let mut out = Vec::with_capacity(per_path[0].len() * per_path[1].len());
    for a in &per_path[0] {
        for b in &per_path[1] {
            if a.iter().chain(b.iter()).all(|&x| x == 0) {
                continue;
            }
            let mut first = vec![0; k + 1];
            let mut second = vec![0; k + 1];
            first.copy_from_slice(a);
            second.copy_from_slice(b);
            out.push(MoveSet { advance: [first, second] });
        }
    }
    out
}

/// Every advance vector for one path (including the empty one).
pub(crate) fn path_options(counts: &[u32], cap: Option<u32>) -> Vec<Vec<u32>> {
    fn rec(counts: &[u32], i: usize, left: Option<u32>, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == counts.len() {
            out.push(cur.clone());
            return;
        }
        let mut hi = counts[i];
        if let Some(l) = left {
            hi = hi.min(l);
        }
        for m in 0..=hi {
            cur[i] = m;
            rec(counts, i + 1, left.map(|l| l - m), cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    let mut cur = vec![0; counts.len()];
    // vertex 0 never moves
    rec(counts, 1, cap, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn board(a: &[u32], b: &[u32]) -> BoardState {
        BoardState::from_counts(a.to_vec(), b.to_vec()).unwrap()
    }

    #[test]
    fn initial_board() {
        let s = initial_state(&GameConfig::general(2, 3));
        assert_eq!(s.path(PathId::First), &[0, 0, 3]);
        assert_eq!(s.path(PathId::Second), &[0, 0, 3]);

        let empty = initial_state(&GameConfig::general(1, 0));
        assert!(empty.is_empty());
        assert_eq!(terminal(&empty), Some(Outcome::RemoverWin));

        let one = initial_state(&GameConfig::general(4, 1));
        assert_eq!(one.path(PathId::First), &[0, 0, 0, 0, 1]);
        assert_eq!(one.path(PathId::Second), &[0, 0, 0, 0, 1]);
    }

    #[test]
    fn move_validation() {
        let s = board(&[0, 0, 3], &[0, 0, 3]);
        let mv = MoveSet::empty(2).with(PathId::First, 2, 2);
        assert!(validate_move(&s, &mv, &GameConfig::general(2, 3)));
        assert!(!validate_move(&s, &mv, &GameConfig::restricted(2, 3, 1)));
        assert!(!validate_move(&s, &MoveSet::empty(2), &GameConfig::general(2, 3)));
        let too_many = MoveSet::empty(2).with(PathId::Second, 2, 4);
        assert!(matches!(
            check_move(&s, &too_many, &GameConfig::general(2, 3)),
            Err(GameError::InvalidMove(_))
        ));
    }

    #[test]
    fn move_enumeration() {
        let s = board(&[0, 2], &[0, 0]);
        let moves = enumerate_moves(&s, &GameConfig::general(1, 2));
        assert_eq!(moves.len(), 2);
        assert!(moves.contains(&MoveSet::empty(1).with(PathId::First, 1, 1)));
        assert!(moves.contains(&MoveSet::empty(1).with(PathId::First, 1, 2)));

        let s = board(&[0, 1], &[0, 1]);
        assert_eq!(enumerate_moves(&s, &GameConfig::restricted(1, 1, 1)).len(), 3);

        let done = board(&[1, 0], &[0, 0]);
        assert!(enumerate_moves(&done, &GameConfig::general(1, 1)).is_empty());
    }

    #[test]
    fn rounds() {
        let cfg = GameConfig::general(2, 1);
        let s = board(&[0, 0, 1], &[0, 0, 1]);
        let mv = MoveSet::empty(2).with(PathId::First, 2, 1).with(PathId::Second, 2, 1);
        let next = apply_round(&s, &mv, &RemovalAction::PathChoice(PathId::First), &cfg).unwrap();
        assert_eq!(next.path(PathId::First), &[0, 0, 0]);
        assert_eq!(next.path(PathId::Second), &[0, 1, 0]);

        let cfg = GameConfig::general(1, 1);
        let s = initial_state(&cfg);
        let mv = MoveSet::empty(1).with(PathId::First, 1, 1).with(PathId::Second, 1, 1);
        let next = apply_round(&s, &mv, &RemovalAction::PathChoice(PathId::Second), &cfg).unwrap();
        assert_eq!(terminal(&next), Some(Outcome::PusherWin));

        let cfg = GameConfig::maker_breaker(2, 2);
        let s = initial_state(&cfg);
        let mv = MoveSet::empty(2).with(PathId::First, 2, 1).with(PathId::Second, 2, 1);
        let removal = RemovalAction::ChipChoice { path: PathId::First, position: 2 };
        let next = apply_round(&s, &mv, &removal, &cfg).unwrap();
        assert_eq!(next.path(PathId::First), &[0, 1, 0]);
        assert_eq!(next.path(PathId::Second), &[0, 1, 1]);
    }

    #[test]
    fn removal_diagnostics() {
        let cfg = GameConfig::general(2, 2);
        let s = initial_state(&cfg);
        let mv = MoveSet::empty(2).with(PathId::First, 2, 1);
        let err = apply_round(&s, &mv, &RemovalAction::PathChoice(PathId::Second), &cfg).unwrap_err();
        assert!(matches!(err, GameError::InvalidRemoval(_)));
        // the audit rule allows the dominated choice
        let next = apply_round_with(
            &s,
            &mv,
            &RemovalAction::PathChoice(PathId::Second),
            &cfg,
            RemovalRule::AllowDominated,
        )
        .unwrap();
        assert_eq!(next.path(PathId::First), &[0, 1, 1]);

        let chip = RemovalAction::ChipChoice { path: PathId::First, position: 0 };
        assert!(apply_round(&s, &mv, &chip, &cfg).is_err());
        let mmb = GameConfig::maker_breaker(2, 2);
        assert!(apply_round(&s, &mv, &chip, &mmb).is_err());
        assert!(apply_round(&s, &mv, &RemovalAction::PathChoice(PathId::First), &mmb).is_err());
    }

    #[test]
    fn terminal_checks() {
        assert_eq!(terminal(&board(&[0, 0, 0], &[0, 0, 0])), Some(Outcome::RemoverWin));
        assert_eq!(terminal(&board(&[0, 0, 0], &[1, 0, 0])), Some(Outcome::PusherWin));
        assert_eq!(terminal(&board(&[0, 1, 0], &[0, 0, 0])), None);
    }

    #[test]
    fn config_validation() {
        assert!(GameConfig::new(0, 1, GameVariant::General).is_err());
        assert!(GameConfig::new(2, 1, GameVariant::Restricted { c: 0 }).is_err());
        assert!(GameVariant::from_name("mmb", Some(2)).is_err());
        assert_eq!(GameVariant::from_name("restricted", Some(2)).unwrap(), GameVariant::Restricted { c: 2 });
        assert!(GameVariant::from_name("bogus", None).is_err());
    }
}
