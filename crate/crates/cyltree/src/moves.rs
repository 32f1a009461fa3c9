//! Elementary deformations: collapsing an edge whose handle equals the
//! stabilizer of one endpoint, and the inverse expansion. Applying a
//! collapse and then the matching expansion (or vice versa) returns an
//! isomorphic window.

use serde::Serialize;

use crate::algebra::StabilizerHandle;
use crate::error::TreeError;
use crate::window::{GTreeWindow, VertexId};

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum MoveSpec {
    /// Remove edge (keep, gone), folding `gone` into `keep`. Legal when
    /// `gone` carries a vertex stabilizer mutually included with the
    /// edge handle.
    Collapse { keep: VertexId, gone: VertexId },
    /// Add vertex `new_vertex` joined to `at` by an edge carrying
    /// `stab`, which also becomes the new vertex's stabilizer. Each
    /// neighbor in `moved` is re-attached from `at` to `new_vertex`;
    /// their edge handles must sit inside `stab`.
    Expand {
        at: VertexId,
        new_vertex: VertexId,
        stab: StabilizerHandle,
        moved: Vec<VertexId>,
    },
}

pub fn elementary_move(w: &GTreeWindow, mv: &MoveSpec) -> Result<GTreeWindow, TreeError> {
    if !w.generators().is_empty() {
        return Err(TreeError::IllegalMove(
            "moves are not supported on windows with declared generator actions".into(),
        ));
    }
    w.ensure_tree()?;
    match mv {
        MoveSpec::Collapse { keep, gone } => collapse(w, *keep, *gone),
        MoveSpec::Expand {
            at,
            new_vertex,
            stab,
            moved,
        } => expand(w, *at, *new_vertex, stab, moved),
    }
}

pub fn apply_moves(w: &GTreeWindow, moves: &[MoveSpec]) -> Result<GTreeWindow, TreeError> {
    let mut cur = w.clone();
    for mv in moves {
        cur = elementary_move(&cur, mv)?;
    }
    Ok(cur)
}

fn collapse(w: &GTreeWindow, keep: VertexId, gone: VertexId) -> Result<GTreeWindow, TreeError> {
    let alg = w.algebra().clone();
    let Some(ei) = w.edge_between(keep, gone) else {
        return Err(TreeError::IllegalMove(format!(
            "no edge between {keep} and {gone}"
        )));
    };
    let edge_stab = w.edges()[ei].stab.clone();
    let Some(vstab) = w.vertex_stab(gone).cloned() else {
        return Err(TreeError::IllegalMove(format!(
            "vertex {gone} carries no stabilizer, so the edge handle cannot equal it"
        )));
    };
    if !(alg.includes(&vstab, &edge_stab)? && alg.includes(&edge_stab, &vstab)?) {
        return Err(TreeError::IllegalMove(format!(
            "edge ({keep}, {gone}) handle differs from the stabilizer of {gone}"
        )));
    }

    let mut b = w.to_builder();
    b.edges_mut().retain(|e| e.key() != (keep.min(gone), keep.max(gone)));
    for e in b.edges_mut() {
        if e.u == gone {
            e.u = keep;
        }
        if e.v == gone {
            e.v = keep;
        }
        if e.u > e.v {
            std::mem::swap(&mut e.u, &mut e.v);
        }
    }
    b.vertices_mut().retain(|&v| v != gone);
    b.vertex_stabs.remove(&gone);
    if b.boundary.remove(&gone) {
        b.boundary.insert(keep);
    }
    for mark in &mut b.relative_marks {
        if mark.remove(&gone) {
            mark.insert(keep);
        }
    }
    b.small_declared.remove(&gone);
    let mut rekeyed = Vec::new();
    for (x, key, h) in std::mem::take(&mut b.dual_edge_stabs) {
        let x = if x == gone { keep } else { x };
        rekeyed.push((x, key, h));
    }
    b.dual_edge_stabs = rekeyed;
    b.build()
}

fn expand(
    w: &GTreeWindow,
    at: VertexId,
    new_vertex: VertexId,
    stab: &StabilizerHandle,
    moved: &[VertexId],
) -> Result<GTreeWindow, TreeError> {
    let alg = w.algebra().clone();
    if w.vertex_index(at).is_none() {
        return Err(TreeError::IllegalMove(format!("no vertex {at}")));
    }
    if w.vertex_index(new_vertex).is_some() {
        return Err(TreeError::IllegalMove(format!(
            "vertex {new_vertex} already exists"
        )));
    }
    if !alg.in_family(stab)? {
        return Err(TreeError::IllegalMove(
            "expansion handle is not in the family".into(),
        ));
    }
    let mut moved_edges = Vec::new();
    for &m in moved {
        let Some(ei) = w.edge_between(at, m) else {
            return Err(TreeError::IllegalMove(format!(
                "{m} is not a neighbor of {at}"
            )));
        };
        if !alg.includes(stab, &w.edges()[ei].stab)? {
            return Err(TreeError::IllegalMove(format!(
                "edge ({at}, {m}) does not sit inside the expansion handle"
            )));
        }
        moved_edges.push(ei);
    }
    if let Some(vstab) = w.vertex_stab(at) {
        if !alg.includes(vstab, stab)? {
            return Err(TreeError::IllegalMove(
                "expansion handle exceeds the stabilizer of the expanded vertex".into(),
            ));
        }
    }

    let mut b = w.to_builder();
    for &ei in &moved_edges {
        let e = &mut b.edges_mut()[ei];
        if e.u == at {
            e.u = new_vertex;
        } else {
            e.v = new_vertex;
        }
        if e.u > e.v {
            std::mem::swap(&mut e.u, &mut e.v);
        }
    }
    b.vertex(new_vertex);
    b.edge(at, new_vertex, stab.clone());
    b.vertex_stabs.insert(new_vertex, stab.clone());
    b.build()
}
