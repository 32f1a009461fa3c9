//! Common refinements by blowing up dual-tree vertices into image
//! subtrees of a dominated window.
//!
//! Given a map f from w onto w2, every dual-tree vertex p owns a piece
//! of w: a junction vertex, or a cylinder. Its f-image is a subtree of
//! w2. The refinement glues those image subtrees along fresh edges, one
//! per dual-tree edge, so that contracting the pieces gives back the
//! dual tree and contracting the fresh edges gives back w2.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::canonical::canonical_of;
use crate::cylinder::compute_cylinders;
use crate::dual::{reinterpret_as_window, tree_of_cylinders, DualKind};
use crate::equivariant::EquivariantMap;
use crate::error::TreeError;
use crate::window::{GTreeWindow, VertexId, WindowBuilder};

#[derive(Debug, Clone, Serialize)]
pub struct BlownPart {
    /// Dual-tree vertex this part blows up.
    pub part: usize,
    /// Vertices of the image subtree, as ids of the dominated window.
    pub vertices: Vec<VertexId>,
    /// Edge indices of the image subtree in the dominated window.
    pub edges: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct RefinementResult {
    pub refined: GTreeWindow,
    /// The dual tree of the source, reinterpreted as a window; target
    /// of `to_dual`.
    pub dual_window: GTreeWindow,
    /// Contracts each blown part to its dual-tree vertex.
    pub to_dual: EquivariantMap,
    /// Contracts each fresh edge; lands in the dominated window.
    pub to_target: EquivariantMap,
    pub parts: Vec<BlownPart>,
    /// Endpoint pairs of the fresh edges inside `refined`.
    pub added: Vec<(VertexId, VertexId)>,
    /// Contracting the parts reproduced the dual tree exactly.
    pub recovered_dual: bool,
    /// Contracting the fresh edges reproduced the dominated window
    /// exactly.
    pub recovered_target: bool,
}

struct Contraction {
    parent: Vec<usize>,
}

impl Contraction {
    fn new(n: usize) -> Contraction {
        Contraction {
            parent: (0..n).collect(),
        }
    }
    fn find(&mut self, i: usize) -> usize {
        if self.parent[i] != i {
            let r = self.find(self.parent[i]);
            self.parent[i] = r;
        }
        self.parent[i]
    }
    fn unite(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

pub fn blowup_refinement(
    w: &GTreeWindow,
    w2: &GTreeWindow,
    f: &EquivariantMap,
) -> Result<RefinementResult, TreeError> {
    let alg = w.algebra();
    f.validate(w, w2)
        .map_err(|e| TreeError::NotADomination(format!("map is not a domination witness: {e}")))?;

    // every edge keeps its class along the image path, so image
    // subtrees of distinct cylinders stay edge-disjoint
    for e in w.edges() {
        for ei in f.edge_image((e.u, e.v), w2)? {
            let t = &w2.edges()[ei].stab;
            let coherent = alg.in_family(t)? && alg.equivalent(&e.stab, t)?;
            if !coherent {
                return Err(TreeError::NotADomination(format!(
                    "image of edge ({}, {}) leaves its class",
                    e.u, e.v
                )));
            }
        }
    }

    let dual = tree_of_cylinders(w)?;
    let cylinders = compute_cylinders(w)?;

    // Z_p per dual vertex: image vertices and image edge indices in w2
    let mut parts: Vec<BlownPart> = Vec::with_capacity(dual.verts.len());
    let mut owner: BTreeMap<usize, usize> = BTreeMap::new();
    for (p, dv) in dual.verts.iter().enumerate() {
        let mut vset: BTreeSet<VertexId> = BTreeSet::new();
        let mut eset: BTreeSet<usize> = BTreeSet::new();
        match dv.kind {
            DualKind::Point => {
                let x = dv.window_vertices[0];
                vset.insert(f.image(x).unwrap());
            }
            DualKind::Cylinder => {
                let c = &cylinders[dv.cylinders[0]];
                for &x in &c.vertices {
                    vset.insert(f.image(x).unwrap());
                }
                for &ei in &c.edges {
                    let e = &w.edges()[ei];
                    for ti in f.edge_image((e.u, e.v), w2)? {
                        eset.insert(ti);
                        vset.insert(w2.edges()[ti].u);
                        vset.insert(w2.edges()[ti].v);
                        if let Some(other) = owner.insert(ti, p) {
                            if other != p {
                                let t = &w2.edges()[ti];
                                return Err(TreeError::ImageOverlap(format!(
                                    "edge ({}, {}) of the target lies in two image subtrees",
                                    t.u, t.v
                                )));
                            }
                        }
                    }
                }
            }
        }
        parts.push(BlownPart {
            part: p,
            vertices: vset.into_iter().collect(),
            edges: eset.into_iter().collect(),
        });
    }
    for (ti, t) in w2.edges().iter().enumerate() {
        if !owner.contains_key(&ti) {
            return Err(TreeError::NotADomination(format!(
                "edge ({}, {}) of the target is not covered by any image subtree",
                t.u, t.v
            )));
        }
    }

    // fresh ids for the disjoint copies
    let mut ids: BTreeMap<(usize, VertexId), VertexId> = BTreeMap::new();
    for part in &parts {
        for &t in &part.vertices {
            let next = ids.len() as VertexId;
            ids.insert((part.part, t), next);
        }
    }

    let mut b = WindowBuilder::new(w2.algebra().clone());
    for (&(_, t), &id) in &ids {
        b.vertex(id);
        if w2.is_boundary(t) {
            b.boundary.insert(id);
        }
    }
    for part in &parts {
        for &ti in &part.edges {
            let t = &w2.edges()[ti];
            b.edge(
                ids[&(part.part, t.u)],
                ids[&(part.part, t.v)],
                t.stab.clone(),
            );
        }
    }
    let mut added = Vec::new();
    for de in &dual.edges {
        let (x, cyl) = de.origin;
        let pp = dual
            .point_vertex_of(x)
            .expect("incidence endpoints have point cells");
        let pc = dual
            .vertex_of_cylinder(cyl)
            .expect("incidence endpoints have cylinder cells");
        let fx = f.image(x).unwrap();
        let (a, bb) = (ids[&(pp, fx)], ids[&(pc, fx)]);
        b.edge(a, bb, de.resolved().clone());
        added.push(if a <= bb { (a, bb) } else { (bb, a) });
    }
    added.sort_unstable();
    let refined = b.build()?;
    refined.ensure_tree()?;

    let dual_window = reinterpret_as_window(&dual, w)?;
    let rev: BTreeMap<VertexId, (usize, VertexId)> =
        ids.iter().map(|(&k, &v)| (v, k)).collect();
    let to_dual = EquivariantMap {
        vertex_map: rev.iter().map(|(&id, &(p, _))| (id, p as VertexId)).collect(),
    };
    let to_target = EquivariantMap {
        vertex_map: rev.iter().map(|(&id, &(_, t))| (id, t)).collect(),
    };
    if !to_dual.is_collapse_map(&refined, &dual_window)? {
        return Err(TreeError::NotADomination(
            "contraction onto the dual tree does not preserve alignment".into(),
        ));
    }
    if !to_target.is_collapse_map(&refined, w2)? {
        return Err(TreeError::NotADomination(
            "contraction onto the target does not preserve alignment".into(),
        ));
    }

    let recovered_dual = {
        let mut uf = Contraction::new(refined.vertices().len());
        let added_set: BTreeSet<(VertexId, VertexId)> = added.iter().copied().collect();
        for e in refined.edges() {
            if !added_set.contains(&(e.u, e.v)) {
                uf.unite(
                    refined.vertex_index(e.u).unwrap(),
                    refined.vertex_index(e.v).unwrap(),
                );
            }
        }
        quotient_matches_dual(&refined, &mut uf, &added, &rev, &dual)
    };
    let recovered_target = {
        let mut uf = Contraction::new(refined.vertices().len());
        for &(u, v) in &added {
            uf.unite(
                refined.vertex_index(u).unwrap(),
                refined.vertex_index(v).unwrap(),
            );
        }
        quotient_matches_target(&refined, &mut uf, &added, &rev, w2)?
    };

    Ok(RefinementResult {
        refined,
        dual_window,
        to_dual,
        to_target,
        parts,
        added,
        recovered_dual,
        recovered_target,
    })
}

/// Contract everything but the fresh edges; the quotient must be the
/// dual tree, labels included.
fn quotient_matches_dual(
    refined: &GTreeWindow,
    uf: &mut Contraction,
    added: &[(VertexId, VertexId)],
    rev: &BTreeMap<VertexId, (usize, VertexId)>,
    dual: &crate::dual::BipartiteDualTree,
) -> bool {
    let mut comp_part: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, &id) in refined.vertices().iter().enumerate() {
        let root = uf.find(i);
        let part = rev[&id].0;
        match comp_part.insert(root, part) {
            Some(prev) if prev != part => return false,
            _ => {}
        }
    }
    if comp_part.len() != dual.verts.len() {
        return false;
    }
    let vertices: Vec<(usize, String)> = comp_part
        .values()
        .map(|&p| (p, dual.vertex_label(p)))
        .collect();
    let edges: Vec<(usize, usize, String)> = added
        .iter()
        .map(|&(u, v)| {
            let pu = comp_part[&uf.find(refined.vertex_index(u).unwrap())];
            let pv = comp_part[&uf.find(refined.vertex_index(v).unwrap())];
            let ei = refined.edge_between(u, v).unwrap();
            (pu, pv, refined.edges()[ei].stab.text())
        })
        .collect();
    canonical_of(&vertices, &edges) == dual.canonical_form()
}

/// Contract the fresh edges; the quotient must be the dominated window,
/// labels included.
fn quotient_matches_target(
    refined: &GTreeWindow,
    uf: &mut Contraction,
    added: &[(VertexId, VertexId)],
    rev: &BTreeMap<VertexId, (usize, VertexId)>,
    w2: &GTreeWindow,
) -> Result<bool, TreeError> {
    let mut comp_target: BTreeMap<usize, VertexId> = BTreeMap::new();
    for (i, &id) in refined.vertices().iter().enumerate() {
        let root = uf.find(i);
        let t = rev[&id].1;
        match comp_target.insert(root, t) {
            Some(prev) if prev != t => return Ok(false),
            _ => {}
        }
    }
    if comp_target.len() != w2.vertices().len() {
        return Ok(false);
    }
    let added_set: BTreeSet<(VertexId, VertexId)> = added.iter().copied().collect();
    let vertices: Vec<(usize, String)> = comp_target
        .iter()
        .map(|(&root, &t)| {
            let label = match w2.vertex_stab(t) {
                Some(h) => h.text(),
                None => "?".into(),
            };
            (root, label)
        })
        .collect();
    let mut edges = Vec::new();
    for e in refined.edges() {
        if added_set.contains(&(e.u, e.v)) {
            continue;
        }
        let ru = uf.find(refined.vertex_index(e.u).unwrap());
        let rv = uf.find(refined.vertex_index(e.v).unwrap());
        edges.push((ru, rv, e.stab.text()));
    }
    Ok(canonical_of(&vertices, &edges) == w2.canonical_form()?)
}
