//! Doubling-phase strategy for the general game with `8 * 2^k` chips per path.
//!
//! All weights are scaled by `2^k`: a chip on vertex `i` weighs `2^(k-i)`
//! and every path weighs `8 * 2^k` between phases. The distance of a path
//! is `D = 8 h 2^k + W` with `h` its highest occupied vertex and `W` the
//! weight on `h`.

use serde::Serialize;

use super::{Digest, PusherStrategy, StrategyError};
use crate::game::{
    apply_round, BoardState, GameConfig, GameVariant, MoveSet, PathId, RemovalAction,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum PhaseCase {
    NotStarted,
    /// Remover answered the first round by clearing the first path.
    Case1,
    /// Remover answered the first round by clearing the second path.
    Case2,
}

/// Running chips: `count` chips on `position` of `path`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RunningChips {
    pub path: PathId,
    pub position: usize,
    pub count: u32,
}

/// Snapshot of both paths in the roles of the current phase.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DoublingPhaseState {
    pub k: usize,
    pub h1: usize,
    pub h2: usize,
    pub w1: u64,
    pub w2: u64,
    /// Weight of one chip on `h2`.
    pub omega: u64,
    pub phase_case: PhaseCase,
    pub round_in_phase: u32,
    pub running_chips: Option<RunningChips>,
    /// Physical path playing the first (higher distance) role.
    pub first: PathId,
}

impl DoublingPhaseState {
    pub fn unit(&self) -> u64 {
        1u64 << self.k
    }

    pub fn d1(&self) -> u64 {
        8 * self.h1 as u64 * self.unit() + self.w1
    }

    pub fn d2(&self) -> u64 {
        8 * self.h2 as u64 * self.unit() + self.w2
    }
}

/// Which row of the piecewise decrease table matched.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AuditBranch {
    /// Large top weight: decrease `B` (or `A + 2w`).
    Upper,
    /// Decrease `2B - W1` (or `W1`).
    Middle,
    /// Small top weight: decrease `B + W1` (or `A + 4w - W1`).
    Lower,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhaseAudit {
    pub case: PhaseCase,
    pub rounds: u32,
    pub omega: u64,
    pub drawn: u64,
    pub first_decrease: i64,
    pub second_decrease: i64,
    /// Every row whose range contains `W1` and whose value matched; two
    /// entries at a boundary point.
    pub branches: Vec<AuditBranch>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhaseRecord {
    pub pre: DoublingPhaseState,
    pub post: DoublingPhaseState,
    /// Table check of the phase; an error names the mismatch.
    pub audit: Result<PhaseAudit, String>,
}

/// Checks a finished phase against the decrease tables.
///
/// `pre` is the state at the phase start, `post` the state at its end in
/// the same path roles, carrying the case and the number of rounds `m`.
/// `b_or_a` is `4 * 2^m * w` in the first case and `3 * 2^m * w` in the
/// second.
pub fn doubling_phase_audit(
    pre: &DoublingPhaseState,
    post: &DoublingPhaseState,
    b_or_a: u64,
) -> Result<PhaseAudit, String> {
    let m = post.round_in_phase;
    let w = pre.omega;
    let w1 = pre.w1 as i128;
    let x = b_or_a as i128;
    let om = w as i128;
    let dec1 = pre.d1() as i128 - post.d1() as i128;
    let dec2 = pre.d2() as i128 - post.d2() as i128;
    let unit = pre.unit() as i128;
    let fail = |msg: String| {
        Err(format!("{msg}; pre {pre:?}, post {post:?}, decreases {dec1}/{dec2}"))
    };
    if m < 2 {
        return fail(format!("phase of {m} rounds"));
    }
    let scale = 1i128 << m;
    let rows: Vec<(AuditBranch, bool, i128)> = match post.phase_case {
        PhaseCase::Case1 => {
            if x != 4 * scale * om {
                return fail(format!("B = {x} is not 4 * 2^{m} * {w}"));
            }
            if dec2 != 2 * om {
                return fail(format!("second path decreased by {dec2}, expected {}", 2 * om));
            }
            if dec1 < 4 * om || dec1 > 6 * unit {
                return fail(format!("first path decrease {dec1} outside [{}, {}]", 4 * om, 6 * unit));
            }
            vec![
                (AuditBranch::Upper, x <= w1, x),
                (AuditBranch::Middle, x <= 2 * w1 && w1 <= x, 2 * x - w1),
                (AuditBranch::Lower, 2 * w1 <= x, x + w1),
            ]
        }
        PhaseCase::Case2 => {
            if x != 3 * scale * om {
                return fail(format!("A = {x} is not 3 * 2^{m} * {w}"));
            }
            if dec2 < 0 || 2 * dec2 > x {
                return fail(format!("second path decrease {dec2} outside [0, {}]", x / 2));
            }
            if 2 * dec1 < 4 * om + x || dec1 > 2 * om + x {
                return fail(format!("first path decrease {dec1} outside [{}, {}]", 2 * om + x / 2, 2 * om + x));
            }
            vec![
                (AuditBranch::Upper, x + 2 * om <= w1, x + 2 * om),
                (AuditBranch::Middle, x + 4 * om <= 2 * w1 && w1 <= x + 2 * om, w1),
                (AuditBranch::Lower, 2 * w1 <= x + 4 * om, x + 4 * om - w1),
            ]
        }
        PhaseCase::NotStarted => return fail("phase never left its first round".into()),
    };
    let branches: Vec<AuditBranch> = rows
        .iter()
        .filter(|(_, applies, value)| *applies && *value == dec1)
        .map(|(b, _, _)| *b)
        .collect();
    if branches.is_empty() {
        let expected: Vec<_> = rows.iter().filter(|r| r.1).map(|r| (r.0, r.2)).collect();
        return fail(format!("first path decreased by {dec1}, table gives {expected:?}"));
    }
    Ok(PhaseAudit {
        case: post.phase_case,
        rounds: m,
        omega: w,
        drawn: b_or_a,
        first_decrease: dec1 as i64,
        second_decrease: dec2 as i64,
        branches,
    })
}

#[derive(Clone, Debug)]
struct Phase {
    pre: DoublingPhaseState,
    case: PhaseCase,
    /// Rounds already answered in this phase.
    rounds: u32,
    running: Option<RunningChips>,
}

#[derive(Clone, Debug)]
pub struct DoublingPusher {
    config: GameConfig,
    surplus: u32,
    phase: Option<Phase>,
    pending: Option<(BoardState, MoveSet)>,
    records: Vec<PhaseRecord>,
    strict_audit: bool,
    won: bool,
}

impl DoublingPusher {
    pub fn design_chips(k: usize) -> u64 {
        8u64 << k
    }

    pub fn new(config: &GameConfig) -> Result<Self, StrategyError> {
        if config.variant != GameVariant::General {
            return Err(StrategyError::Incompatible(format!(
                "doubling strategy needs the general game, got {}",
                config.variant
            )));
        }
        if config.k > 24 {
            return Err(StrategyError::Incompatible(format!("k = {} is too large", config.k)));
        }
        let need = Self::design_chips(config.k);
        if (config.n as u64) < need {
            return Err(StrategyError::Incompatible(format!(
                "doubling strategy needs N >= {need}, got {}",
                config.n
            )));
        }
        Ok(DoublingPusher {
            config: *config,
            surplus: config.n - need as u32,
            phase: None,
            pending: None,
            records: Vec::new(),
            strict_audit: false,
            won: false,
        })
    }

    /// Report a failed phase audit as an invariant violation.
    pub fn with_strict_audit(mut self, strict: bool) -> Self {
        self.strict_audit = strict;
        self
    }

    /// Completed phases with their audits.
    pub fn phase_records(&self) -> &[PhaseRecord] {
        &self.records
    }

    /// Current bookkeeping, if a phase is running.
    pub fn phase_state(&self) -> Option<DoublingPhaseState> {
        self.phase.as_ref().map(|ph| DoublingPhaseState {
            phase_case: ph.case,
            round_in_phase: ph.rounds + 1,
            running_chips: ph.running,
            ..ph.pre.clone()
        })
    }

    fn weight(&self, position: usize) -> u64 {
        1u64 << (self.config.k - position)
    }

    fn active(&self, state: &BoardState) -> Result<BoardState, StrategyError> {
        let k = self.config.k;
        let mut a = state.clone();
        for p in PathId::BOTH {
            let c = a.count(p, k);
            if c < self.surplus {
                return Err(StrategyError::InvariantViolation(format!(
                    "surplus chips left vertex {k} of the {p} path"
                )));
            }
            a.set(p, k, c - self.surplus);
        }
        Ok(a)
    }

    fn top(&self, board: &BoardState, path: PathId) -> Result<(usize, u64), StrategyError> {
        match board.highest(path) {
            Some(h) if h >= 1 => Ok((h, board.count(path, h) as u64 * self.weight(h))),
            _ => Err(StrategyError::InvariantViolation(format!("the {path} path is exhausted"))),
        }
    }

    /// Phase invariants on an active board; returns the state in roles.
    fn measure(&self, board: &BoardState, first: Option<PathId>) -> Result<DoublingPhaseState, StrategyError> {
        let k = self.config.k;
        let unit = 1u64 << k;
        let bad = |msg: String| Err(StrategyError::InvariantViolation(format!("{msg} on board {board}")));
        let mut d = [0u64; 2];
        let mut tops = [(0usize, 0u64); 2];
        for p in PathId::BOTH {
            let weight: u64 = (0..=k).map(|i| board.count(p, i) as u64 * self.weight(i)).sum();
            if weight != 8 * unit {
                return bad(format!("the {p} path weighs {weight}, expected {}", 8 * unit));
            }
            let (h, w) = self.top(board, p)?;
            if (0..=k).any(|i| board.count(p, i) > 0 && i + 1 < h) || board.count(p, 0) > 0 {
                return bad(format!("the {p} path spans more than vertices {h} and {}", h - 1));
            }
            tops[p.index()] = (h, w);
            d[p.index()] = 8 * h as u64 * unit + w;
        }
        if d[0].abs_diff(d[1]) > 8 * unit {
            return bad(format!("distances {} and {} differ by more than {}", d[0], d[1], 8 * unit));
        }
        let first = first.unwrap_or(if d[1] > d[0] { PathId::Second } else { PathId::First });
        let (h1, w1) = tops[first.index()];
        let (h2, w2) = tops[first.other().index()];
        Ok(DoublingPhaseState {
            k,
            h1,
            h2,
            w1,
            w2,
            omega: self.weight(h2),
            phase_case: PhaseCase::NotStarted,
            round_in_phase: 1,
            running_chips: None,
            first,
        })
    }

    /// Selects chips of total weight `target` from the highest vertices.
    fn draw(&self, avail: &[u32], target: u64, path: PathId, mv: &mut MoveSet) -> Result<(), StrategyError> {
        let mut left = target;
        for i in (1..avail.len()).rev() {
            if left == 0 {
                break;
            }
            let w = self.weight(i);
            let take = (left / w).min(avail[i] as u64);
            if take < avail[i] as u64 && !left.is_multiple_of(w) {
                break;
            }
            mv.add(path, i, take as u32);
            left -= take * w;
        }
        if left != 0 {
            return Err(StrategyError::InvariantViolation(format!(
                "cannot draw weight {target} from the {path} path ({avail:?}), {left} short"
            )));
        }
        Ok(())
    }

    fn end_phase(&mut self, board: &BoardState) -> Result<(), StrategyError> {
        let ph = self.phase.take().expect("phase in progress");
        let mut post = self.measure(board, Some(ph.pre.first))?;
        post.phase_case = ph.case;
        post.round_in_phase = ph.rounds;
        let scale = 1u64 << ph.rounds;
        let drawn = match ph.case {
            PhaseCase::Case1 => 4 * scale * ph.pre.omega,
            _ => 3 * scale * ph.pre.omega,
        };
        let audit = doubling_phase_audit(&ph.pre, &post, drawn);
        if let (true, Err(e)) = (self.strict_audit, &audit) {
            return Err(StrategyError::InvariantViolation(e.clone()));
        }
        let h = (post.h1, post.h2);
        let (lo, hi) = if post.d1() >= post.d2() { (h.1, h.0) } else { (h.0, h.1) };
        if !(lo <= hi && hi <= lo + 1) {
            return Err(StrategyError::InvariantViolation(format!("top vertices {hi} and {lo} too far apart")));
        }
        self.records.push(PhaseRecord { pre: ph.pre, post, audit });
        Ok(())
    }
}

impl PusherStrategy for DoublingPusher {
    fn name(&self) -> String {
        "doubling".into()
    }

    fn next_move(&mut self, state: &BoardState) -> Result<MoveSet, StrategyError> {
        let board = self.active(state)?;
        let k = self.config.k;
        let mut mv = MoveSet::empty(k);
        match &self.phase {
            None => {
                let pre = self.measure(&board, None)?;
                if pre.h1 > pre.h2 + 1 || pre.h2 > pre.h1 {
                    return Err(StrategyError::InvariantViolation(format!(
                        "top vertices {} and {} out of order",
                        pre.h1, pre.h2
                    )));
                }
                let w = pre.omega;
                self.draw(board.path(pre.first), 8 * w, pre.first, &mut mv)?;
                self.draw(board.path(pre.first.other()), 2 * w, pre.first.other(), &mut mv)?;
                self.phase = Some(Phase { pre, case: PhaseCase::NotStarted, rounds: 0, running: None });
            }
            Some(ph) => {
                let run = ph.running.expect("running chips after the first round");
                let i = ph.rounds + 1;
                let w = ph.pre.omega;
                let first = ph.pre.first;
                if board.count(run.path, run.position) < run.count {
                    return Err(StrategyError::InvariantViolation(format!(
                        "running chips missing from vertex {} of the {} path",
                        run.position, run.path
                    )));
                }
                let mut avail = board.path(first).to_vec();
                if run.path == first {
                    avail[run.position] -= run.count;
                }
                let step = 1u64 << (i - 1);
                match ph.case {
                    PhaseCase::Case1 => self.draw(&avail, 4 * step * w, first, &mut mv)?,
                    _ => {
                        self.draw(&avail, 3 * step * w, first, &mut mv)?;
                        self.draw(board.path(first.other()), step * w, first.other(), &mut mv)?;
                    }
                }
                mv.add(run.path, run.position, run.count);
            }
        }
        self.pending = Some((state.clone(), mv.clone()));
        Ok(mv)
    }

    fn observe(&mut self, removal: &RemovalAction) -> Result<(), StrategyError> {
        let (before, mv) = self
            .pending
            .take()
            .ok_or_else(|| StrategyError::InvariantViolation("removal observed without a move".into()))?;
        let cleared = match *removal {
            RemovalAction::PathChoice(p) => p,
            RemovalAction::ChipChoice { .. } => {
                return Err(StrategyError::Incompatible("doubling strategy is for path removals".into()))
            }
        };
        let after = apply_round(&before, &mv, removal, &self.config)?;
        if PathId::BOTH.iter().any(|&p| after.count(p, 0) > 0) {
            self.won = true;
            return Ok(());
        }
        let board = self.active(&after)?;
        let ph = self.phase.as_mut().expect("phase in progress");
        ph.rounds += 1;
        let first = ph.pre.first;
        let ends = match ph.case {
            PhaseCase::NotStarted => {
                let h2 = ph.pre.h2;
                if cleared == first {
                    ph.case = PhaseCase::Case1;
                    ph.running = Some(RunningChips { path: first.other(), position: h2 - 1, count: 1 });
                } else {
                    ph.case = PhaseCase::Case2;
                    // running chips come from the top vertex: one chip when
                    // h1 = h2, two half-weight chips when h1 = h2 + 1
                    let h1 = ph.pre.h1;
                    ph.running = Some(if h1 == h2 && mv.count(first, h1) >= 1 {
                        RunningChips { path: first, position: h2 - 1, count: 1 }
                    } else if h1 == h2 + 1 && mv.count(first, h1) >= 2 {
                        RunningChips { path: first, position: h2, count: 2 }
                    } else {
                        return Err(StrategyError::InvariantViolation(
                            "no moved chips of weight 2w on the top vertex".into(),
                        ));
                    });
                }
                false
            }
            PhaseCase::Case1 => cleared != first,
            PhaseCase::Case2 => cleared == first,
        };
        if ends {
            self.end_phase(&board)?;
        } else if let Some(run) = ph.running.as_mut() {
            if ph.rounds > 1 {
                run.position -= 1;
            }
        }
        Ok(())
    }

    fn state_digest(&self) -> Vec<u8> {
        let mut d = Digest::default()
            .u8(self.won as u8)
            .u8(self.strict_audit as u8)
            .u8(self.pending.is_some() as u8);
        if let Some(ph) = &self.phase {
            let pre = &ph.pre;
            d = d
                .u8(ph.case as u8 + 1)
                .u32(ph.rounds)
                .u8(pre.first.index() as u8)
                .u64(pre.h1 as u64)
                .u64(pre.h2 as u64)
                .u64(pre.w1)
                .u64(pre.w2);
            if let Some(r) = ph.running {
                d = d.u8(r.path.index() as u8).u64(r.position as u64).u32(r.count);
            }
        }
        d.finish()
    }

    fn box_clone(&self) -> Box<dyn PusherStrategy> {
        Box::new(self.clone())
    }
}
