//! Maps between windows that send vertices to vertices and edges to
//! points or edge paths, respecting handles.
//!
//! Respecting handles means: every edge handle is contained in the
//! handle of each edge its image path crosses, vertex stabilizers land
//! inside the stabilizers of their images, and generator actions with
//! matching names commute with the map.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::TreeError;
use crate::window::{GTreeWindow, VertexId};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquivariantMap {
    pub vertex_map: BTreeMap<VertexId, VertexId>,
}

impl EquivariantMap {
    pub fn identity(w: &GTreeWindow) -> EquivariantMap {
        EquivariantMap {
            vertex_map: w.vertices().iter().map(|&v| (v, v)).collect(),
        }
    }

    pub fn image(&self, v: VertexId) -> Option<VertexId> {
        self.vertex_map.get(&v).copied()
    }

    /// Edge indices of the target path the edge (u, v) crosses; empty
    /// when the edge collapses to a point.
    pub fn edge_image(
        &self,
        e: (VertexId, VertexId),
        target: &GTreeWindow,
    ) -> Result<Vec<usize>, TreeError> {
        let (Some(fu), Some(fv)) = (self.image(e.0), self.image(e.1)) else {
            return Err(TreeError::NotEquivariant(format!(
                "edge ({}, {}) has an unmapped endpoint",
                e.0, e.1
            )));
        };
        Ok(target.path_edges(fu, fv))
    }

    /// g after self.
    pub fn compose(&self, g: &EquivariantMap) -> Result<EquivariantMap, TreeError> {
        let mut vertex_map = BTreeMap::new();
        for (&a, &b) in &self.vertex_map {
            let Some(&c) = g.vertex_map.get(&b) else {
                return Err(TreeError::NotEquivariant(format!(
                    "composition undefined: {b} has no image"
                )));
            };
            vertex_map.insert(a, c);
        }
        Ok(EquivariantMap { vertex_map })
    }

    pub fn validate(&self, w: &GTreeWindow, w2: &GTreeWindow) -> Result<(), TreeError> {
        w2.ensure_tree()?;
        let alg = w.algebra();
        for &v in w.vertices() {
            let Some(fv) = self.image(v) else {
                return Err(TreeError::NotEquivariant(format!("vertex {v} has no image")));
            };
            if w2.vertex_index(fv).is_none() {
                return Err(TreeError::NotEquivariant(format!(
                    "image {fv} of vertex {v} is not a vertex of the target"
                )));
            }
            if let (Some(s), Some(s2)) = (w.vertex_stab(v), w2.vertex_stab(fv)) {
                if !alg.includes(s2, s)? {
                    return Err(TreeError::NotEquivariant(format!(
                        "stabilizer of {v} is not contained in the stabilizer of its image {fv}"
                    )));
                }
            }
        }
        for e in w.edges() {
            for ei in self.edge_image((e.u, e.v), w2)? {
                if !alg.includes(&w2.edges()[ei].stab, &e.stab)? {
                    return Err(TreeError::NotEquivariant(format!(
                        "handle of edge ({}, {}) is not contained in a handle along its image path",
                        e.u, e.v
                    )));
                }
            }
        }
        // generator actions with the same name must commute with the map
        for g in w.generators() {
            let Some(g2) = w2.generators().iter().find(|h| h.name == g.name) else {
                continue;
            };
            for (&a, &ga) in &g.vertex_map {
                let (Some(fa), Some(fga)) = (self.image(a), self.image(ga)) else {
                    continue;
                };
                if let Some(&g2fa) = g2.vertex_map.get(&fa) {
                    if g2fa != fga {
                        return Err(TreeError::NotEquivariant(format!(
                            "action {:?} does not commute with the map at vertex {a}",
                            g.name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Every edge maps to a point or a single edge.
    pub fn is_cellular(&self, w: &GTreeWindow, w2: &GTreeWindow) -> Result<bool, TreeError> {
        for e in w.edges() {
            if self.edge_image((e.u, e.v), w2)?.len() > 1 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Alignment preservation, checked over all vertex triples: x on
    /// the path [a, b] must map into the path [f(a), f(b)].
    pub fn is_collapse_map(&self, w: &GTreeWindow, w2: &GTreeWindow) -> Result<bool, TreeError> {
        self.validate(w, w2)?;
        let n = w.vertices().len();
        let dist = w.distance_matrix();
        let idist = w2.distance_matrix();
        let fidx: Vec<usize> = w
            .vertices()
            .iter()
            .map(|&v| w2.vertex_index(self.image(v).unwrap()).unwrap())
            .collect();
        for a in 0..n {
            for b in a..n {
                for x in 0..n {
                    if dist[a][x].saturating_add(dist[x][b]) != dist[a][b] {
                        continue;
                    }
                    let (fa, fb, fx) = (fidx[a], fidx[b], fidx[x]);
                    if idist[fa][fx].saturating_add(idist[fx][fb]) != idist[fa][fb] {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}
