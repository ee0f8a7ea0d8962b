//! On-line 2-coloring of `k`-uniform hypergraphs driven by chip strategies.
//!
//! A chip on position `k - i` stands for an edge with `i` vertices, all of
//! one color: color 1 for first-path chips, color 0 for second-path chips.
//! Coloring a vertex 0 is Remover clearing the first path, coloring it 1 is
//! Remover clearing the second.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::hypergraph::{verify_two_coloring, EdgeId, Hypergraph, PresentationStep, VertexId};
use super::ReductionError;
use crate::game::{apply_round, apply_round_with, check_move, initial_state, terminal, BoardState, GameConfig, MoveSet, Outcome, PathId, RemovalAction, RemovalRule};
use crate::play::{Round, Transcript};
use crate::strategies::{PusherStrategy, RemoverStrategy};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PresentedVertex {
    pub vertex: VertexId,
    pub edges: Vec<EdgeId>,
}

pub trait Presenter {
    fn name(&self) -> String;

    /// Edges the presenter may use, numbered from 0.
    fn edge_count(&self) -> usize;

    /// Edges of the next vertex, or `None` once Presenter stops.
    fn next_vertex(&mut self, h: &Hypergraph) -> Result<Option<Vec<EdgeId>>, ReductionError>;

    fn observe_color(&mut self, color: u8) -> Result<(), ReductionError>;

    /// Compares internal bookkeeping with the hypergraph after a step.
    fn check_sync(&self, _h: &Hypergraph) -> Result<(), ReductionError> {
        Ok(())
    }
}

pub trait Colorer {
    fn name(&self) -> String;

    fn color(&mut self, vertex: &PresentedVertex) -> Result<u8, ReductionError>;

    fn check_sync(&self, _h: &Hypergraph) -> Result<(), ReductionError> {
        Ok(())
    }
}

fn removal_for(color: u8) -> RemovalAction {
    RemovalAction::PathChoice(if color == 0 { PathId::First } else { PathId::Second })
}

fn path_rules_only(config: &GameConfig) -> Result<(), ReductionError> {
    if config.variant.removes_single_chip() {
        return Err(ReductionError::Variant("single-chip removals have no coloring counterpart".into()));
    }
    Ok(())
}

/// Presenter replaying a Pusher: chip `e` is edge `e`; chips `0..N` sit on
/// the first path and `N..2N` on the second.
///
/// A vertex lying only on edges of one path can still receive the color
/// that clears the other path. The chip game then sees a dominated removal
/// that kills nothing, so the transcript replays under
/// [`RemovalRule::AllowDominated`].
pub struct PusherPresenter {
    pusher: Box<dyn PusherStrategy>,
    config: GameConfig,
    board: BoardState,
    /// Position of every live chip.
    chips: Vec<Option<usize>>,
    pending: Option<(MoveSet, Vec<EdgeId>)>,
    rounds: Vec<Round>,
}

pub fn presenter_from_pusher(pusher: Box<dyn PusherStrategy>, config: &GameConfig) -> Result<PusherPresenter, ReductionError> {
    path_rules_only(config)?;
    Ok(PusherPresenter {
        pusher,
        config: *config,
        board: initial_state(config),
        chips: vec![Some(config.k); 2 * config.n as usize],
        pending: None,
        rounds: Vec::new(),
    })
}

impl PusherPresenter {
    fn path_of(&self, e: EdgeId) -> PathId {
        if e < self.config.n {
            PathId::First
        } else {
            PathId::Second
        }
    }

    pub fn board(&self) -> &BoardState {
        &self.board
    }

    /// The chip game played so far; `None` until it has ended.
    pub fn transcript(&self) -> Option<Transcript> {
        terminal(&self.board).map(|outcome| Transcript { config: self.config, rounds: self.rounds.clone(), outcome })
    }
}

impl Presenter for PusherPresenter {
    fn name(&self) -> String {
        format!("presenter({})", self.pusher.name())
    }

    fn edge_count(&self) -> usize {
        self.chips.len()
    }

    fn next_vertex(&mut self, _h: &Hypergraph) -> Result<Option<Vec<EdgeId>>, ReductionError> {
        if terminal(&self.board).is_some() {
            return Ok(None);
        }
        let mv = self.pusher.next_move(&self.board)?;
        check_move(&self.board, &mv, &self.config)?;
        let mut edges = Vec::new();
        for p in PathId::BOTH {
            for pos in 1..=self.config.k {
                let want = mv.count(p, pos) as usize;
                let picked: Vec<EdgeId> = (0..self.chips.len() as EdgeId)
                    .filter(|&e| self.path_of(e) == p && self.chips[e as usize] == Some(pos))
                    .take(want)
                    .collect();
                if picked.len() != want {
                    return Err(ReductionError::Desync(format!(
                        "move takes {want} chips from vertex {pos} of the {p} path, {} edges match",
                        picked.len()
                    )));
                }
                edges.extend(picked);
            }
        }
        self.pending = Some((mv, edges.clone()));
        Ok(Some(edges))
    }

    fn observe_color(&mut self, color: u8) -> Result<(), ReductionError> {
        let (mv, edges) = self
            .pending
            .take()
            .ok_or_else(|| ReductionError::Desync("color observed without a presented vertex".into()))?;
        let removal = removal_for(color);
        self.board = apply_round_with(&self.board, &mv, &removal, &self.config, RemovalRule::AllowDominated)?;
        self.pusher.observe(&removal)?;
        let RemovalAction::PathChoice(cleared) = removal else { unreachable!() };
        for e in edges {
            let survives = self.path_of(e) != cleared;
            let chip = &mut self.chips[e as usize];
            *chip = match *chip {
                Some(pos) if survives => Some(pos - 1),
                _ => None,
            };
        }
        self.rounds.push(Round { mv, removal });
        Ok(())
    }

    fn check_sync(&self, h: &Hypergraph) -> Result<(), ReductionError> {
        let implied = h.implied_board(self.chips.len(), |e| vec![self.path_of(e)])?;
        if implied != self.board {
            return Err(ReductionError::Desync(format!(
                "hypergraph implies board {implied}, presenter's chip game has {}",
                self.board
            )));
        }
        Ok(())
    }
}

/// Colorer backed by a Remover: edge `e` owns one chip on each path.
pub struct RemoverColorer {
    remover: Box<dyn RemoverStrategy>,
    config: GameConfig,
    board: BoardState,
    /// Positions of each edge's first- and second-path chip.
    chips: Vec<[Option<usize>; 2]>,
    rounds: Vec<Round>,
}

/// Colorer for hypergraphs with at most `config.n` edges.
pub fn colorer_from_remover(remover: Box<dyn RemoverStrategy>, config: &GameConfig) -> Result<RemoverColorer, ReductionError> {
    path_rules_only(config)?;
    Ok(RemoverColorer {
        remover,
        config: *config,
        board: initial_state(config),
        chips: vec![[Some(config.k); 2]; config.n as usize],
        rounds: Vec::new(),
    })
}

impl RemoverColorer {
    pub fn board(&self) -> &BoardState {
        &self.board
    }

    /// The chip game so far and its result if it has ended.
    pub fn rounds(&self) -> &[Round] {
        &self.rounds
    }

    pub fn outcome(&self) -> Option<Outcome> {
        terminal(&self.board)
    }
}

impl Colorer for RemoverColorer {
    fn name(&self) -> String {
        format!("colorer({})", self.remover.name())
    }

    fn color(&mut self, vertex: &PresentedVertex) -> Result<u8, ReductionError> {
        let k = self.config.k;
        let mut mv = MoveSet::empty(k);
        for &e in &vertex.edges {
            let chips = self.chips.get(e as usize).ok_or(ReductionError::TooManyEdges {
                edge: e,
                limit: self.chips.len(),
            })?;
            for p in PathId::BOTH {
                match chips[p.index()] {
                    Some(0) => return Err(ReductionError::FullEdge { edge: e, k }),
                    Some(pos) => mv.add(p, pos, 1),
                    None => {}
                }
            }
        }
        if let Some(cap) = self.config.variant.move_cap() {
            for p in PathId::BOTH {
                if mv.path_total(p) > cap {
                    return Err(ReductionError::DegreeCap { needed: mv.path_total(p), cap });
                }
            }
        }
        if mv.total() == 0 || terminal(&self.board).is_some() {
            return Ok(0);
        }
        let removal = self.remover.choose(&self.board, &mv)?;
        self.board = apply_round(&self.board, &mv, &removal, &self.config)?;
        let RemovalAction::PathChoice(cleared) = removal else {
            return Err(ReductionError::Variant("remover answered with a single chip".into()));
        };
        for &e in &vertex.edges {
            for p in PathId::BOTH {
                let chip = &mut self.chips[e as usize][p.index()];
                *chip = match *chip {
                    Some(pos) if p != cleared => Some(pos - 1),
                    _ => None,
                };
            }
        }
        self.rounds.push(Round { mv, removal });
        Ok(if cleared == PathId::First { 0 } else { 1 })
    }

    fn check_sync(&self, h: &Hypergraph) -> Result<(), ReductionError> {
        let implied = h.implied_board(self.chips.len(), |_| PathId::BOTH.to_vec())?;
        if implied != self.board {
            return Err(ReductionError::Desync(format!(
                "hypergraph implies board {implied}, colorer's chip game has {}",
                self.board
            )));
        }
        Ok(())
    }
}

/// Uniformly random colors.
pub struct RandomColorer {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomColorer {
    pub fn new(seed: u64) -> Self {
        RandomColorer { seed, rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl Colorer for RandomColorer {
    fn name(&self) -> String {
        format!("random:seed={}", self.seed)
    }

    fn color(&mut self, _vertex: &PresentedVertex) -> Result<u8, ReductionError> {
        Ok(self.rng.gen_range(0..=1))
    }
}

/// Presents vertices in random sets of non-full edges.
pub struct RandomPresenter {
    seed: u64,
    rng: ChaCha8Rng,
    edges: usize,
    /// Most edges per vertex.
    degree: usize,
    vertices_left: usize,
}

impl RandomPresenter {
    pub fn new(seed: u64, edges: usize, degree: usize, max_vertices: usize) -> Self {
        RandomPresenter { seed, rng: ChaCha8Rng::seed_from_u64(seed), edges, degree: degree.max(1), vertices_left: max_vertices }
    }
}

impl Presenter for RandomPresenter {
    fn name(&self) -> String {
        format!("random:seed={}", self.seed)
    }

    fn edge_count(&self) -> usize {
        self.edges
    }

    fn next_vertex(&mut self, h: &Hypergraph) -> Result<Option<Vec<EdgeId>>, ReductionError> {
        let mut open: Vec<EdgeId> = (0..self.edges as EdgeId)
            .filter(|&e| h.edges.get(e as usize).map_or(0, Vec::len) < h.k)
            .collect();
        if self.vertices_left == 0 || open.is_empty() {
            return Ok(None);
        }
        self.vertices_left -= 1;
        let take = self.rng.gen_range(0..=self.degree.min(open.len()));
        let mut chosen = Vec::with_capacity(take);
        for _ in 0..take {
            let i = self.rng.gen_range(0..open.len());
            chosen.push(open.swap_remove(i));
        }
        chosen.sort_unstable();
        Ok(Some(chosen))
    }

    fn observe_color(&mut self, _color: u8) -> Result<(), ReductionError> {
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OnlineWinner {
    Presenter,
    Colorer,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OnlineGame {
    pub hypergraph: Hypergraph,
    /// Full monochromatic edges at the end.
    pub monochromatic: Vec<EdgeId>,
    pub winner: OnlineWinner,
}

/// Runs Presenter against Colorer until a full monochromatic edge appears
/// or Presenter stops, checking both sides' bookkeeping after every vertex.
pub fn play_online(
    presenter: &mut dyn Presenter,
    colorer: &mut dyn Colorer,
    k: usize,
    step_limit: u64,
) -> Result<OnlineGame, ReductionError> {
    let mut h = Hypergraph::new(k, presenter.edge_count());
    let mut steps = 0;
    loop {
        let monochromatic = verify_two_coloring(&h)?;
        if !monochromatic.is_empty() {
            return Ok(OnlineGame { hypergraph: h, monochromatic, winner: OnlineWinner::Presenter });
        }
        if steps >= step_limit {
            return Err(ReductionError::StepLimit(step_limit));
        }
        steps += 1;
        let Some(edges) = presenter.next_vertex(&h)? else {
            return Ok(OnlineGame { hypergraph: h, monochromatic, winner: OnlineWinner::Colorer });
        };
        let vertex = h.next_vertex_id();
        let color = colorer.color(&PresentedVertex { vertex, edges: edges.clone() })?;
        h.push_step(PresentationStep { vertex, edges, color })?;
        presenter.observe_color(color)?;
        presenter.check_sync(&h)?;
        colorer.check_sync(&h)?;
    }
}
