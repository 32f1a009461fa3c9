//! The incidence graph of classes against big elliptic stabilizers,
//! and the embedding of the dual tree into it.
//!
//! Vertices on one side are window vertices whose stabilizer is not
//! small (not contained in any family group); on the other side, all
//! equivalence classes with a present in-family representative plus any
//! declared extra classes. Edges join a stabilizer to every class with
//! a representative inside it. The dual tree embeds: junctions go to
//! their stabilizers, cylinders to their classes.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::algebra::StabilizerHandle;
use crate::dual::{tree_of_cylinders, BipartiteDualTree, DualKind};
use crate::error::TreeError;
use crate::window::{GTreeWindow, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ZKind {
    Elliptic,
    Class,
}

#[derive(Debug, Clone, Serialize)]
pub struct ZVertex {
    pub kind: ZKind,
    /// Elliptic: the stabilizer handle. Class: canonical representative.
    pub handle: StabilizerHandle,
    /// Window vertices realizing an elliptic stabilizer.
    pub window_vertices: Vec<VertexId>,
    /// Present in-family members of a class.
    pub members: Vec<StabilizerHandle>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AlgebraicGraph {
    pub verts: Vec<ZVertex>,
    /// (elliptic index, class index), sorted.
    pub edges: Vec<(usize, usize)>,
}

impl AlgebraicGraph {
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.verts.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn label(&self, i: usize) -> String {
        let v = &self.verts[i];
        match v.kind {
            ZKind::Elliptic => format!("H:{}", v.handle.text()),
            ZKind::Class => format!("C:{}", v.handle.text()),
        }
    }
}

pub fn algebraic_graph(w: &GTreeWindow) -> Result<AlgebraicGraph, TreeError> {
    let alg = w.algebra();

    let mut elliptic: Vec<(StabilizerHandle, Vec<VertexId>)> = Vec::new();
    for &v in w.vertices() {
        match w.small_flag(v)? {
            None => return Err(TreeError::SmallFlagUnknown(v)),
            Some(true) => {}
            Some(false) => {
                let Some(stab) = w.vertex_stab(v) else {
                    return Err(TreeError::MissingVertexStabs(format!(
                        "vertex {v} is declared non-small but carries no stabilizer"
                    )));
                };
                match elliptic.iter_mut().find(|(h, _)| h == stab) {
                    Some((_, vs)) => vs.push(v),
                    None => elliptic.push((stab.clone(), vec![v])),
                }
            }
        }
    }
    elliptic.sort_by_key(|(h, _)| h.text());

    // classes of present in-family handles, keyed by representative
    let mut classes: BTreeMap<String, (StabilizerHandle, Vec<StabilizerHandle>)> = BTreeMap::new();
    for h in w.present_handles() {
        if !alg.in_family(&h)? {
            continue;
        }
        let rep = alg.class_representative(&h)?;
        classes
            .entry(rep.text())
            .or_insert_with(|| (rep, Vec::new()))
            .1
            .push(h);
    }
    for h in w.extra_classes() {
        if !alg.in_family(h)? {
            return Err(TreeError::Parse(format!(
                "declared extra class {} is not in the family",
                h.text()
            )));
        }
        let rep = alg.class_representative(h)?;
        classes
            .entry(rep.text())
            .or_insert_with(|| (rep, Vec::new()))
            .1
            .push(h.clone());
    }

    let mut verts: Vec<ZVertex> = Vec::new();
    for (h, vs) in elliptic {
        verts.push(ZVertex {
            kind: ZKind::Elliptic,
            handle: h,
            window_vertices: vs,
            members: Vec::new(),
        });
    }
    let first_class = verts.len();
    for (_, (rep, mut members)) in classes {
        members.sort_by_key(StabilizerHandle::text);
        members.dedup();
        verts.push(ZVertex {
            kind: ZKind::Class,
            handle: rep,
            window_vertices: Vec::new(),
            members,
        });
    }

    let mut edges = Vec::new();
    for i in 0..first_class {
        for j in first_class..verts.len() {
            let mut hit = false;
            for m in &verts[j].members {
                if alg.includes(&verts[i].handle, m)? {
                    hit = true;
                    break;
                }
            }
            if hit {
                edges.push((i, j));
            }
        }
    }

    Ok(AlgebraicGraph { verts, edges })
}

/// The dual tree, the incidence graph, and the vertex/edge maps
/// realizing the embedding, with any verification failures listed.
#[derive(Debug, Clone, Serialize)]
pub struct ZEmbedding {
    #[serde(skip)]
    pub dual: BipartiteDualTree,
    #[serde(skip)]
    pub graph: AlgebraicGraph,
    /// Dual vertex index → graph vertex index.
    pub vertex_map: Vec<Option<usize>>,
    /// Dual edge index → graph edge index.
    pub edge_map: Vec<Option<usize>>,
    pub failures: Vec<String>,
}

impl ZEmbedding {
    pub fn verified(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn image_vertices(&self) -> BTreeSet<usize> {
        self.vertex_map.iter().flatten().copied().collect()
    }

    pub fn image_edges(&self) -> BTreeSet<usize> {
        self.edge_map.iter().flatten().copied().collect()
    }
}

pub fn embedding_j(w: &GTreeWindow) -> Result<ZEmbedding, TreeError> {
    let alg = w.algebra().clone();
    let dual = tree_of_cylinders(w)?;
    let graph = algebraic_graph(w)?;
    let mut failures = Vec::new();

    let mut vertex_map: Vec<Option<usize>> = Vec::with_capacity(dual.verts.len());
    for dv in &dual.verts {
        let target = match dv.kind {
            DualKind::Point => {
                let x = dv.window_vertices[0];
                match w.vertex_stab(x) {
                    None => {
                        failures.push(format!("junction {x} carries no stabilizer"));
                        None
                    }
                    Some(stab) => {
                        let hit = graph
                            .verts
                            .iter()
                            .position(|z| z.kind == ZKind::Elliptic && &z.handle == stab);
                        if hit.is_none() {
                            failures.push(format!(
                                "stabilizer of junction {x} is small, so it has no image"
                            ));
                        }
                        hit
                    }
                }
            }
            DualKind::Cylinder => {
                let rep = dv.class_rep.as_ref().expect("cylinder vertices carry a class");
                let rep_text = alg.class_representative(rep)?.text();
                let hit = graph.verts.iter().position(|z| {
                    z.kind == ZKind::Class && z.handle.text() == rep_text
                });
                if hit.is_none() {
                    failures.push(format!("class {} missing from the graph", rep.text()));
                }
                hit
            }
        };
        vertex_map.push(target);
    }

    let mut seen = BTreeSet::new();
    for t in vertex_map.iter().flatten() {
        if !seen.insert(*t) {
            failures.push(format!(
                "embedding is not injective: graph vertex {} hit twice",
                graph.label(*t)
            ));
        }
    }

    let mut edge_map: Vec<Option<usize>> = Vec::with_capacity(dual.edges.len());
    for e in &dual.edges {
        let (Some(za), Some(zb)) = (vertex_map[e.a], vertex_map[e.b]) else {
            edge_map.push(None);
            continue;
        };
        let key = (za.min(zb), za.max(zb));
        let hit = graph.edges.iter().position(|&(x, y)| (x, y) == key);
        if hit.is_none() {
            failures.push(format!(
                "dual edge ({}, cylinder {}) has no counterpart between {} and {}",
                e.origin.0,
                e.origin.1,
                graph.label(za),
                graph.label(zb)
            ));
        }
        edge_map.push(hit);
    }

    Ok(ZEmbedding {
        dual,
        graph,
        vertex_map,
        edge_map,
        failures,
    })
}

/// Is the edge (u, v) the central edge of some simple 6-vertex path?
fn central(adj: &[Vec<usize>], u: usize, v: usize) -> bool {
    let wings = |c: usize, other: usize| -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for &n1 in &adj[c] {
            if n1 == other {
                continue;
            }
            for &n2 in &adj[n1] {
                if n2 != c {
                    out.push((n1, n2));
                }
            }
        }
        out
    };
    // the graph is bipartite, so only these clashes are possible
    for &(u1, u2) in &wings(u, v) {
        for &(v1, v2) in &wings(v, u) {
            if u2 != v1 && v2 != u1 {
                return true;
            }
        }
    }
    false
}

#[derive(Debug, Clone, Serialize)]
pub struct Segment5Report {
    pub equal: bool,
    /// Labels of cells in the image but not central.
    pub image_only: Vec<String>,
    /// Labels of central cells outside the image.
    pub central_only: Vec<String>,
    pub truncation_caveat: bool,
    pub embedding_failures: Vec<String>,
}

pub fn segment5_check(w: &GTreeWindow) -> Result<Segment5Report, TreeError> {
    if !w.declared().minimal {
        return Err(TreeError::PreconditionNotDeclared(
            "window is not declared minimal".into(),
        ));
    }
    let emb = embedding_j(w)?;
    if emb.dual.is_point() {
        return Err(TreeError::PreconditionNotDeclared(
            "the tree of cylinders is a point".into(),
        ));
    }

    let adj = emb.graph.adjacency();
    let mut central_edges: BTreeSet<usize> = BTreeSet::new();
    let mut central_verts: BTreeSet<usize> = BTreeSet::new();
    for (ei, &(a, b)) in emb.graph.edges.iter().enumerate() {
        if central(&adj, a, b) {
            central_edges.insert(ei);
            central_verts.insert(a);
            central_verts.insert(b);
        }
    }

    let image_verts = emb.image_vertices();
    let image_edges = emb.image_edges();

    let mut image_only = Vec::new();
    let mut central_only = Vec::new();
    for &i in image_verts.difference(&central_verts) {
        image_only.push(emb.graph.label(i));
    }
    for &i in central_verts.difference(&image_verts) {
        central_only.push(emb.graph.label(i));
    }
    for &e in image_edges.difference(&central_edges) {
        let (a, b) = emb.graph.edges[e];
        image_only.push(format!("{} -- {}", emb.graph.label(a), emb.graph.label(b)));
    }
    for &e in central_edges.difference(&image_edges) {
        let (a, b) = emb.graph.edges[e];
        central_only.push(format!("{} -- {}", emb.graph.label(a), emb.graph.label(b)));
    }

    let truncation_caveat =
        !w.boundary().is_empty() || emb.dual.verts.iter().any(|dv| dv.truncated);
    let equal = emb.verified() && image_only.is_empty() && central_only.is_empty();

    Ok(Segment5Report {
        equal,
        image_only,
        central_only,
        truncation_caveat,
        embedding_failures: emb.failures.clone(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ZLemmaReport {
    /// A class vertex is in the image iff its valence is at least 2.
    pub class_valence: bool,
    /// A stabilizer adjacent to an image class contains a vertex of
    /// that cylinder.
    pub adjacency_locates: bool,
    /// A stabilizer vertex is in the image iff it has at least 2
    /// image neighbours.
    pub elliptic_neighbours: bool,
    /// A graph edge is in the image iff both endpoints are.
    pub edge_endpoints: bool,
    /// The window shows a boundary, so valences undercount and a failed
    /// rule proves nothing.
    pub truncation_caveat: bool,
    pub witnesses: Vec<String>,
}

pub fn zgraph_lemma_report(w: &GTreeWindow) -> Result<ZLemmaReport, TreeError> {
    let emb = embedding_j(w)?;
    if emb.dual.is_point() {
        return Err(TreeError::PreconditionNotDeclared(
            "the tree of cylinders is a point".into(),
        ));
    }
    let adj = emb.graph.adjacency();
    let image_verts = emb.image_vertices();
    let image_edges = emb.image_edges();
    let mut witnesses = Vec::new();

    let mut class_valence = true;
    let mut elliptic_neighbours = true;
    for (i, zv) in emb.graph.verts.iter().enumerate() {
        match zv.kind {
            ZKind::Class => {
                let expect = adj[i].len() >= 2;
                if image_verts.contains(&i) != expect {
                    class_valence = false;
                    witnesses.push(format!("valence rule fails at {}", emb.graph.label(i)));
                }
            }
            ZKind::Elliptic => {
                let in_image_neighbours =
                    adj[i].iter().filter(|n| image_verts.contains(n)).count();
                let expect = in_image_neighbours >= 2;
                if image_verts.contains(&i) != expect {
                    elliptic_neighbours = false;
                    witnesses.push(format!("neighbour rule fails at {}", emb.graph.label(i)));
                }
            }
        }
    }

    let mut adjacency_locates = true;
    for &(a, b) in &emb.graph.edges {
        // a is elliptic, b is a class
        if !image_verts.contains(&b) {
            continue;
        }
        let Some(dual_idx) = emb.vertex_map.iter().position(|m| *m == Some(b)) else {
            continue;
        };
        let cyl = emb.dual.verts[dual_idx].cylinders[0];
        let cyl_vertices = &emb.dual.cylinders[cyl].vertices;
        for &x in &emb.graph.verts[a].window_vertices {
            if !cyl_vertices.contains(&x) {
                adjacency_locates = false;
                witnesses.push(format!(
                    "vertex {x} carries {} but lies outside cylinder {cyl}",
                    emb.graph.label(a)
                ));
            }
        }
    }

    let mut edge_endpoints = true;
    for (ei, &(a, b)) in emb.graph.edges.iter().enumerate() {
        let expect = image_verts.contains(&a) && image_verts.contains(&b);
        if image_edges.contains(&ei) != expect {
            edge_endpoints = false;
            witnesses.push(format!(
                "endpoint rule fails at {} -- {}",
                emb.graph.label(a),
                emb.graph.label(b)
            ));
        }
    }

    Ok(ZLemmaReport {
        class_valence,
        adjacency_locates,
        elliptic_neighbours,
        edge_endpoints,
        truncation_caveat: !w.boundary().is_empty()
            || emb.dual.verts.iter().any(|dv| dv.truncated),
        witnesses,
    })
}
