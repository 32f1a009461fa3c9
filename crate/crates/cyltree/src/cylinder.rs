//! Cylinders: the partition of a window's edges by handle equivalence.
//!
//! In an admissible window every class spans a subtree; a class whose
//! edges do not form a connected subgraph is a hard error, because every
//! construction downstream relies on cylinders being subtrees.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::algebra::StabilizerHandle;
use crate::error::TreeError;
use crate::window::{GTreeWindow, VertexId};

#[derive(Debug, Clone, Serialize)]
pub struct Cylinder {
    /// Edge indices into the window's edge list.
    pub edges: Vec<usize>,
    pub vertices: Vec<VertexId>,
    /// Vertices shared with some other cylinder.
    pub boundary: Vec<VertexId>,
    /// Canonical representative of the handle class.
    pub class_rep: StabilizerHandle,
    /// True when the cylinder touches a window-boundary vertex, so its
    /// extent beyond the window is unknown.
    pub truncated: bool,
}

impl Cylinder {
    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// Longest path inside the cylinder, in edges.
    pub fn diameter(&self, w: &GTreeWindow) -> usize {
        let dist = w.distance_matrix();
        let mut best = 0;
        for (i, &a) in self.vertices.iter().enumerate() {
            for &b in &self.vertices[i + 1..] {
                let ia = w.vertex_index(a).unwrap();
                let ib = w.vertex_index(b).unwrap();
                // vertices of a subtree: the connecting path stays inside
                best = best.max(dist[ia][ib]);
            }
        }
        best
    }
}

/// Group edges into cylinders. Fails with `DisconnectedClass` when a
/// class does not span a subtree, and `NotATree` on non-tree windows.
pub fn compute_cylinders(w: &GTreeWindow) -> Result<Vec<Cylinder>, TreeError> {
    w.ensure_tree()?;
    let alg = w.algebra();

    // one representative computation per distinct handle
    let mut reps: BTreeMap<StabilizerHandle, String> = BTreeMap::new();
    for e in w.edges() {
        if !reps.contains_key(&e.stab) {
            if !alg.in_family(&e.stab)? {
                return Err(TreeError::NotATree(format!(
                    "edge ({}, {}) carries an out-of-family handle; validate first",
                    e.u, e.v
                )));
            }
            reps.insert(e.stab.clone(), alg.class_representative(&e.stab)?.text());
        }
    }

    let mut by_class: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (ei, e) in w.edges().iter().enumerate() {
        by_class.entry(reps[&e.stab].clone()).or_default().push(ei);
    }

    let mut cylinders = Vec::new();
    for (_, edge_ids) in by_class {
        let mut vset: BTreeSet<VertexId> = BTreeSet::new();
        for &ei in &edge_ids {
            vset.insert(w.edges()[ei].u);
            vset.insert(w.edges()[ei].v);
        }
        // connectivity of the class subgraph
        let mut seen: BTreeSet<VertexId> = BTreeSet::new();
        let start = w.edges()[edge_ids[0]].u;
        let mut stack = vec![start];
        seen.insert(start);
        while let Some(x) = stack.pop() {
            for &ei in &edge_ids {
                let e = &w.edges()[ei];
                if e.u == x && seen.insert(e.v) {
                    stack.push(e.v);
                }
                if e.v == x && seen.insert(e.u) {
                    stack.push(e.u);
                }
            }
        }
        let class_rep = alg.class_representative(&w.edges()[edge_ids[0]].stab)?;
        if seen.len() != vset.len() {
            return Err(TreeError::DisconnectedClass { class: class_rep.text() });
        }
        let vertices: Vec<VertexId> = vset.into_iter().collect();
        let truncated = vertices.iter().any(|&v| w.is_boundary(v));
        cylinders.push(Cylinder {
            edges: edge_ids,
            vertices,
            boundary: Vec::new(),
            class_rep,
            truncated,
        });
    }

    // boundary = membership in more than one cylinder
    let mut count: BTreeMap<VertexId, usize> = BTreeMap::new();
    for c in &cylinders {
        for &v in &c.vertices {
            *count.entry(v).or_default() += 1;
        }
    }
    for c in &mut cylinders {
        c.boundary = c
            .vertices
            .iter()
            .copied()
            .filter(|v| count[v] > 1)
            .collect();
    }

    // deterministic order: by first edge
    cylinders.sort_by_key(|c| c.edges[0]);
    Ok(cylinders)
}

/// Vertices lying in at least two cylinders, sorted.
pub fn junction_vertices(cylinders: &[Cylinder]) -> Vec<VertexId> {
    let mut count: BTreeMap<VertexId, usize> = BTreeMap::new();
    for c in cylinders {
        for &v in &c.vertices {
            *count.entry(v).or_default() += 1;
        }
    }
    count
        .into_iter()
        .filter_map(|(v, n)| (n > 1).then_some(v))
        .collect()
}
