//! Presented hypergraphs, their JSON and edge-list forms, and the coloring check.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::ReductionError;
use crate::game::{BoardState, PathId};

pub type VertexId = u32;
pub type EdgeId = u32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationStep {
    pub vertex: VertexId,
    pub edges: Vec<EdgeId>,
    pub color: u8,
}

/// Where an edge stands once the game is over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeStatus {
    /// `k` vertices.
    Full,
    /// Fewer than `k` vertices and both colors present.
    Abandoned,
    /// Fewer than `k` vertices, all of one color; it can no longer grow
    /// monochromatic only because Presenter stopped using it.
    Stalled,
    Empty,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypergraph {
    pub k: usize,
    pub edges: Vec<Vec<VertexId>>,
    pub colors: BTreeMap<VertexId, u8>,
    pub presentation: Vec<PresentationStep>,
}

impl Hypergraph {
    pub fn new(k: usize, edge_count: usize) -> Self {
        Hypergraph { k, edges: vec![Vec::new(); edge_count], colors: BTreeMap::new(), presentation: Vec::new() }
    }

    pub fn next_vertex_id(&self) -> VertexId {
        self.presentation.len() as VertexId
    }

    /// Adds a colored vertex to the listed edges, growing the edge list if needed.
    pub fn push_step(&mut self, step: PresentationStep) -> Result<(), ReductionError> {
        if self.colors.contains_key(&step.vertex) {
            return Err(ReductionError::Malformed(format!("vertex {} presented twice", step.vertex)));
        }
        if step.color > 1 {
            return Err(ReductionError::Malformed(format!("color {} is not 0 or 1", step.color)));
        }
        let distinct: BTreeSet<_> = step.edges.iter().collect();
        if distinct.len() != step.edges.len() {
            return Err(ReductionError::Malformed(format!("vertex {} lists an edge twice", step.vertex)));
        }
        for &e in &step.edges {
            if self.edges.get(e as usize).is_some_and(|edge| edge.len() >= self.k) {
                return Err(ReductionError::FullEdge { edge: e, k: self.k });
            }
        }
        for &e in &step.edges {
            if e as usize >= self.edges.len() {
                self.edges.resize(e as usize + 1, Vec::new());
            }
            self.edges[e as usize].push(step.vertex);
        }
        self.colors.insert(step.vertex, step.color);
        self.presentation.push(step);
        Ok(())
    }

    /// Colors of an edge's vertices; uncolored vertices are an error.
    fn edge_colors(&self, e: usize) -> Result<Vec<u8>, ReductionError> {
        self.edges[e]
            .iter()
            .map(|v| {
                self.colors
                    .get(v)
                    .copied()
                    .ok_or_else(|| ReductionError::Malformed(format!("vertex {v} of edge {e} has no color")))
            })
            .collect()
    }

    pub fn status(&self, e: EdgeId) -> Result<EdgeStatus, ReductionError> {
        let colors = self.edge_colors(e as usize)?;
        Ok(if colors.is_empty() {
            EdgeStatus::Empty
        } else if colors.len() >= self.k {
            EdgeStatus::Full
        } else if colors.iter().all(|&c| c == colors[0]) {
            EdgeStatus::Stalled
        } else {
            EdgeStatus::Abandoned
        })
    }

    /// Structural checks: edge sizes, distinct vertices per edge, and
    /// memberships agreeing with the presentation log.
    pub fn validate(&self) -> Result<(), ReductionError> {
        let mut from_log: Vec<Vec<VertexId>> = vec![Vec::new(); self.edges.len()];
        let mut seen = BTreeSet::new();
        for step in &self.presentation {
            if !seen.insert(step.vertex) {
                return Err(ReductionError::Malformed(format!("vertex {} presented twice", step.vertex)));
            }
            if self.colors.get(&step.vertex) != Some(&step.color) {
                return Err(ReductionError::Malformed(format!("color of vertex {} disagrees with the log", step.vertex)));
            }
            for &e in &step.edges {
                from_log
                    .get_mut(e as usize)
                    .ok_or_else(|| ReductionError::Malformed(format!("edge {e} is not listed")))?
                    .push(step.vertex);
            }
        }
        for (e, edge) in self.edges.iter().enumerate() {
            if edge.len() > self.k {
                return Err(ReductionError::Malformed(format!("edge {e} has {} vertices, k = {}", edge.len(), self.k)));
            }
            let distinct: BTreeSet<_> = edge.iter().collect();
            if distinct.len() != edge.len() {
                return Err(ReductionError::Malformed(format!("edge {e} repeats a vertex")));
            }
            let mut a = edge.clone();
            let mut b = from_log[e].clone();
            a.sort_unstable();
            b.sort_unstable();
            if a != b {
                return Err(ReductionError::Malformed(format!("edge {e} disagrees with the presentation log")));
            }
        }
        Ok(())
    }

    /// Chip board of the game this coloring encodes.
    ///
    /// Edge `e` carries a first-path chip while it has no vertex of color 0
    /// and a second-path chip while it has no vertex of color 1, on position
    /// `k` minus the edge size. `chips_of` selects which of the two chips an
    /// edge owns: both (one chip per path per edge) or one of them.
    /// Edges `0..edge_count` not listed yet count as empty.
    pub fn implied_board(
        &self,
        edge_count: usize,
        chips_of: impl Fn(EdgeId) -> Vec<PathId>,
    ) -> Result<BoardState, ReductionError> {
        let k = self.k;
        if self.edges.len() > edge_count {
            return Err(ReductionError::Malformed(format!("{} edges listed, {edge_count} expected", self.edges.len())));
        }
        let mut board = BoardState::empty(k);
        for e in 0..edge_count {
            let colors = if e < self.edges.len() { self.edge_colors(e)? } else { Vec::new() };
            for path in chips_of(e as EdgeId) {
                let killer = match path {
                    PathId::First => 0,
                    PathId::Second => 1,
                };
                if colors.contains(&killer) {
                    continue;
                }
                let pos = k.checked_sub(colors.len()).ok_or_else(|| {
                    ReductionError::Malformed(format!("edge {e} exceeds {k} vertices"))
                })?;
                board.set(path, pos, board.count(path, pos) + 1);
            }
        }
        Ok(board)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("hypergraph serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, ReductionError> {
        let h: Hypergraph = serde_json::from_str(text).map_err(|e| ReductionError::Malformed(e.to_string()))?;
        h.validate()?;
        Ok(h)
    }

    /// One line per edge, vertex ids separated by spaces.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for edge in &self.edges {
            let line: Vec<String> = edge.iter().map(u32::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Full edges whose vertices all share a color.
pub fn verify_two_coloring(h: &Hypergraph) -> Result<Vec<EdgeId>, ReductionError> {
    let mut bad = Vec::new();
    for (e, edge) in h.edges.iter().enumerate() {
        let distinct: BTreeSet<_> = edge.iter().collect();
        if distinct.len() != edge.len() {
            return Err(ReductionError::Malformed(format!("edge {e} repeats a vertex")));
        }
        if edge.len() < h.k {
            continue;
        }
        let colors = h.edge_colors(e)?;
        if colors.iter().all(|&c| c == colors[0]) {
            bad.push(e as EdgeId);
        }
    }
    Ok(bad)
}
