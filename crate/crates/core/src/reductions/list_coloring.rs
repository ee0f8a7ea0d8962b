//! Chip game as on-line list coloring of `K_{N,N}` with lists of size `k`.
//!
//! Part `p` of the graph holds the chips of path `p`. Round `j` offers color
//! `j` to the vertices of the moved chips; Painter colors all offered
//! vertices of the part whose path Remover clears. An uncolored vertex with
//! `c` offered colors carries a chip on position `k - c`.

use serde::Serialize;

use super::ReductionError;
use crate::game::{apply_round, check_move, initial_state, terminal, BoardState, GameConfig, Outcome, PathId, RemovalAction};
use crate::play::{Round, Transcript};
use crate::strategies::{PusherStrategy, RemoverStrategy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ListVertex {
    pub part: PathId,
    pub index: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ListColoringState {
    pub list_size: usize,
    /// Colors offered so far, per part and vertex.
    pub permissible: [Vec<u32>; 2],
    /// Color each vertex received, per part.
    pub colors: [Vec<Option<u32>>; 2],
}

impl ListColoringState {
    pub fn new(k: usize, n: u32) -> Self {
        ListColoringState {
            list_size: k,
            permissible: [vec![0; n as usize], vec![0; n as usize]],
            colors: [vec![None; n as usize], vec![None; n as usize]],
        }
    }

    /// Chip board implied by the uncolored vertices.
    pub fn board(&self) -> Result<BoardState, ReductionError> {
        let k = self.list_size;
        let mut board = BoardState::empty(k);
        for p in PathId::BOTH {
            for (offered, color) in self.permissible[p.index()].iter().zip(&self.colors[p.index()]) {
                if color.is_some() {
                    continue;
                }
                let offered = *offered as usize;
                if offered > k {
                    return Err(ReductionError::Desync(format!("a {p} part vertex was offered {offered} colors")));
                }
                board.set(p, k - offered, board.count(p, k - offered) + 1);
            }
        }
        Ok(board)
    }

    pub fn all_colored(&self) -> bool {
        self.colors.iter().flatten().all(Option::is_some)
    }

    /// An uncolored vertex whose whole list has been offered.
    pub fn exhausted_vertex(&self) -> Option<ListVertex> {
        PathId::BOTH.into_iter().find_map(|p| {
            let i = p.index();
            (0..self.colors[i].len())
                .find(|&v| self.colors[i][v].is_none() && self.permissible[i][v] as usize >= self.list_size)
                .map(|v| ListVertex { part: p, index: v as u32 })
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ListColoringRound {
    pub color: u32,
    /// Lister's set `V_j`.
    pub offered: Vec<ListVertex>,
    /// Painter's independent set `X_j`.
    pub colored: Vec<ListVertex>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ListWinner {
    Lister,
    Painter,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ListColoringTranscript {
    pub k: usize,
    #[serde(rename = "N")]
    pub n: u32,
    pub rounds: Vec<ListColoringRound>,
    pub winner: ListWinner,
    pub final_state: ListColoringState,
}

/// Plays the chip game and mirrors every round as a list-coloring round.
pub fn simulate_list_coloring(
    pusher: &mut dyn PusherStrategy,
    remover: &mut dyn RemoverStrategy,
    config: &GameConfig,
    round_limit: u64,
) -> Result<(ListColoringTranscript, Transcript), ReductionError> {
    if config.variant.removes_single_chip() {
        return Err(ReductionError::Variant("list coloring needs path removals".into()));
    }
    let k = config.k;
    let mut lc = ListColoringState::new(k, config.n);
    let mut board = initial_state(config);
    let mut rounds = Vec::new();
    let mut chip_rounds = Vec::new();
    let outcome = loop {
        if let Some(outcome) = terminal(&board) {
            break outcome;
        }
        if rounds.len() as u64 >= round_limit {
            return Err(ReductionError::StepLimit(round_limit));
        }
        let mv = pusher.next_move(&board)?;
        check_move(&board, &mv, config)?;
        let removal = remover.choose(&board, &mv)?;
        let next = apply_round(&board, &mv, &removal, config)?;
        pusher.observe(&removal)?;

        let color = rounds.len() as u32;
        let mut offered = Vec::new();
        for p in PathId::BOTH {
            let i = p.index();
            for pos in 1..=k {
                let want = mv.count(p, pos);
                let chosen: Vec<usize> = (0..lc.colors[i].len())
                    .filter(|&v| lc.colors[i][v].is_none() && k - lc.permissible[i][v] as usize == pos)
                    .take(want as usize)
                    .collect();
                if chosen.len() != want as usize {
                    return Err(ReductionError::Desync(format!(
                        "move takes {want} chips from vertex {pos} of the {p} path, {} uncolored vertices match",
                        chosen.len()
                    )));
                }
                offered.extend(chosen.into_iter().map(|v| ListVertex { part: p, index: v as u32 }));
            }
        }
        for v in &offered {
            lc.permissible[v.part.index()][v.index as usize] += 1;
        }
        let cleared = match removal {
            RemovalAction::PathChoice(p) => p,
            RemovalAction::ChipChoice { .. } => unreachable!("rejected above"),
        };
        let colored: Vec<ListVertex> = offered.iter().copied().filter(|v| v.part == cleared).collect();
        for v in &colored {
            lc.colors[v.part.index()][v.index as usize] = Some(color);
        }
        let implied = lc.board()?;
        if implied != next {
            return Err(ReductionError::Desync(format!("coloring implies board {implied}, chip game has {next}")));
        }
        rounds.push(ListColoringRound { color, offered, colored });
        chip_rounds.push(Round { mv, removal });
        board = next;
    };
    let winner = match (outcome, lc.exhausted_vertex(), lc.all_colored()) {
        (Outcome::PusherWin, Some(_), _) => ListWinner::Lister,
        (Outcome::RemoverWin, None, true) => ListWinner::Painter,
        _ => {
            return Err(ReductionError::Desync(format!("chip game ended with {outcome} but the coloring disagrees")));
        }
    };
    let transcript = Transcript { config: *config, rounds: chip_rounds, outcome };
    Ok((ListColoringTranscript { k, n: config.n, rounds, winner, final_state: lc }, transcript))
}
