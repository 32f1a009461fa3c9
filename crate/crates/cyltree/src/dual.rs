//! The dual tree of a window: one vertex per cylinder, one per window
//! vertex lying in at least two cylinders, with an incidence edge (x, Y)
//! whenever x is a boundary vertex of Y.
//!
//! Each incidence edge records two handles: a witness (the handle of an
//! edge of Y at x, always a lower bound for the true stabilizer) and,
//! when resolvable, the exact stabilizer G_x ∩ G_Y. The collapsed
//! variant contracts edges whose stabilizer is known to be outside the
//! family; edges of unknown status are kept and listed, never guessed.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{Algebra, BackendId, StabilizerHandle};
use crate::canonical::canonical_of;
use crate::cylinder::{compute_cylinders, Cylinder};
use crate::error::TreeError;
use crate::window::{GTreeWindow, VertexId, WindowBuilder};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DualKind {
    Point,
    Cylinder,
}

#[derive(Debug, Clone, Serialize)]
pub struct DualVertex {
    pub kind: DualKind,
    /// Window vertices this dual vertex stands for. A point vertex
    /// carries one; contraction merges several.
    pub window_vertices: Vec<VertexId>,
    /// Cylinder ids (indices into `cylinders`) meeting this vertex.
    pub cylinders: Vec<usize>,
    pub stab: Option<StabilizerHandle>,
    /// Cylinder vertices only: canonical representative of the class.
    pub class_rep: Option<StabilizerHandle>,
    pub truncated: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DualEdge {
    pub a: usize,
    pub b: usize,
    /// (window vertex x, cylinder id) this edge came from.
    pub origin: (VertexId, usize),
    /// Handle of an edge of the cylinder incident to x; a lower bound
    /// for the true stabilizer.
    pub witness: StabilizerHandle,
    /// G_x ∩ G_Y when computable or declared.
    pub exact: Option<StabilizerHandle>,
    /// Family status of the true stabilizer; None when undecidable
    /// from the window.
    pub in_family: Option<bool>,
}

impl DualEdge {
    /// Best-known handle: the exact stabilizer when resolved, else the
    /// witness bound.
    pub fn resolved(&self) -> &StabilizerHandle {
        self.exact.as_ref().unwrap_or(&self.witness)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BipartiteDualTree {
    pub verts: Vec<DualVertex>,
    pub edges: Vec<DualEdge>,
    pub cylinders: Vec<Cylinder>,
    pub collapsed: bool,
    /// Kept-but-unresolved incidences (window vertex, cylinder id),
    /// filled by the collapse pass.
    pub unresolved: Vec<(VertexId, usize)>,
    /// Edges contracted by the collapse pass, re-anchored at the merged
    /// vertex; their exact stabilizers survive for reinterpretation.
    pub swallowed: Vec<DualEdge>,
    /// For a collapsed tree: vertex index of the input tree → vertex
    /// index here. Empty on freshly built trees.
    pub projection: Vec<usize>,
}

impl BipartiteDualTree {
    pub fn is_point(&self) -> bool {
        self.verts.len() == 1
    }

    /// Point-kind dual vertex standing for window vertex x, if any.
    pub fn point_vertex_of(&self, x: VertexId) -> Option<usize> {
        self.verts
            .iter()
            .position(|dv| dv.kind == DualKind::Point && dv.window_vertices.contains(&x))
    }

    pub fn vertex_of_cylinder(&self, cyl: usize) -> Option<usize> {
        self.verts
            .iter()
            .position(|dv| dv.cylinders.contains(&cyl))
    }

    /// Dual vertex whose footprint contains x; point vertices win over
    /// cylinder vertices so junctions resolve to their own cell.
    pub fn vertex_containing(&self, x: VertexId) -> Option<usize> {
        self.point_vertex_of(x).or_else(|| {
            self.verts
                .iter()
                .position(|dv| dv.window_vertices.contains(&x))
        })
    }

    pub fn vertex_label(&self, i: usize) -> String {
        let dv = &self.verts[i];
        match dv.kind {
            DualKind::Point => match &dv.stab {
                Some(h) => format!("0|{}", h.text()),
                None => "0|?".into(),
            },
            DualKind::Cylinder => match &dv.class_rep {
                Some(h) => format!("1|{}", h.text()),
                None => "1|?".into(),
            },
        }
    }

    /// Canonical string deciding labeled-tree isomorphism. Boundary and
    /// resolution-quality flags stay out of the labels on purpose: two
    /// runs that resolve the same handle differently must still agree.
    pub fn canonical_form(&self) -> String {
        let vertices: Vec<(usize, String)> = (0..self.verts.len())
            .map(|i| (i, self.vertex_label(i)))
            .collect();
        let edges: Vec<(usize, usize, String)> = self
            .edges
            .iter()
            .map(|e| (e.a, e.b, e.resolved().text()))
            .collect();
        canonical_of(&vertices, &edges)
    }

    /// Hop distances between dual vertices.
    pub fn distance_matrix(&self) -> Vec<Vec<usize>> {
        let n = self.verts.len();
        let mut adj = vec![Vec::new(); n];
        for e in &self.edges {
            adj[e.a].push(e.b);
            adj[e.b].push(e.a);
        }
        let mut dist = vec![vec![usize::MAX; n]; n];
        for s in 0..n {
            dist[s][s] = 0;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(i) = queue.pop_front() {
                for &j in &adj[i] {
                    if dist[s][j] == usize::MAX {
                        dist[s][j] = dist[s][i] + 1;
                        queue.push_back(j);
                    }
                }
            }
        }
        dist
    }
}

/// Family status of the true stabilizer of an incidence edge when only
/// bounds are known. With G_e ⊆ G_ε ⊆ G_Y and both ends in the family,
/// the word and lattice backends squeeze G_ε into the family (subgroups
/// of an infinite cyclic group containing a nontrivial one are infinite
/// cyclic; a group between two rank-r lattices has rank r). The table
/// backend promises nothing.
fn in_family_by_squeeze(
    alg: &Algebra,
    gy: Option<&StabilizerHandle>,
) -> Result<Option<bool>, TreeError> {
    let Some(gy) = gy else { return Ok(None) };
    match alg.backend() {
        BackendId::W | BackendId::L => {
            if alg.in_family(gy)? {
                Ok(Some(true))
            } else {
                Ok(None)
            }
        }
        BackendId::P => Ok(None),
    }
}

pub fn tree_of_cylinders(w: &GTreeWindow) -> Result<BipartiteDualTree, TreeError> {
    w.ensure_tree()?;
    let alg = w.algebra().clone();
    let cylinders = compute_cylinders(w)?;

    if cylinders.is_empty() {
        // a one-vertex window dualizes to that point
        let v = w.vertices()[0];
        return Ok(BipartiteDualTree {
            verts: vec![DualVertex {
                kind: DualKind::Point,
                window_vertices: vec![v],
                cylinders: Vec::new(),
                stab: w.vertex_stab(v).cloned(),
                class_rep: None,
                truncated: w.is_boundary(v),
            }],
            edges: Vec::new(),
            cylinders,
            collapsed: false,
            unresolved: Vec::new(),
            swallowed: Vec::new(),
            projection: Vec::new(),
        });
    }

    let mut verts: Vec<DualVertex> = Vec::new();
    for (i, c) in cylinders.iter().enumerate() {
        let member = &w.edges()[c.edges[0]].stab;
        verts.push(DualVertex {
            kind: DualKind::Cylinder,
            window_vertices: c.vertices.clone(),
            cylinders: vec![i],
            stab: w.cylinder_stab_for(member)?,
            class_rep: Some(c.class_rep.clone()),
            truncated: c.truncated,
        });
    }

    let mut point_index: BTreeMap<VertexId, usize> = BTreeMap::new();
    for (i, c) in cylinders.iter().enumerate() {
        for &x in &c.boundary {
            let idx = *point_index.entry(x).or_insert_with(|| {
                verts.push(DualVertex {
                    kind: DualKind::Point,
                    window_vertices: vec![x],
                    cylinders: Vec::new(),
                    stab: w.vertex_stab(x).cloned(),
                    class_rep: None,
                    truncated: w.is_boundary(x),
                });
                verts.len() - 1
            });
            verts[idx].cylinders.push(i);
        }
    }

    let mut edges = Vec::new();
    for (i, c) in cylinders.iter().enumerate() {
        let member = &w.edges()[c.edges[0]].stab;
        let gy = verts[i].stab.clone();
        for &x in &c.boundary {
            let witness = c
                .edges
                .iter()
                .map(|&ei| &w.edges()[ei])
                .find(|e| e.u == x || e.v == x)
                .expect("boundary vertex meets an edge of its cylinder")
                .stab
                .clone();
            let exact = match w.dual_edge_stab_for(x, member)? {
                Some(h) => Some(h),
                None => match (w.vertex_stab(x), &gy) {
                    (Some(gx), Some(gy)) if alg.supports_intersect() => {
                        Some(alg.intersect(gx, gy)?)
                    }
                    _ => None,
                },
            };
            let in_family = match &exact {
                Some(h) => Some(alg.in_family(h)?),
                None => in_family_by_squeeze(&alg, gy.as_ref())?,
            };
            edges.push(DualEdge {
                a: point_index[&x],
                b: i,
                origin: (x, i),
                witness,
                exact,
                in_family,
            });
        }
    }
    edges.sort_by_key(|e| e.origin);

    Ok(BipartiteDualTree {
        verts,
        edges,
        cylinders,
        collapsed: false,
        unresolved: Vec::new(),
        swallowed: Vec::new(),
        projection: Vec::new(),
    })
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, i: usize) -> usize {
        if self.0[i] != i {
            let r = self.find(self.0[i]);
            self.0[i] = r;
        }
        self.0[i]
    }
    fn unite(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Deterministic choice of a stabilizer for a contracted blob: a known
/// handle containing all the others if one exists, else the join when
/// the backend has one, else unknown. Any unknown constituent makes the
/// result unknown.
fn merged_stab(
    alg: &Algebra,
    stabs: &[Option<StabilizerHandle>],
) -> Result<Option<StabilizerHandle>, TreeError> {
    if stabs.iter().any(Option::is_none) {
        return Ok(None);
    }
    let mut known: Vec<StabilizerHandle> = stabs.iter().flatten().cloned().collect();
    known.sort_by_key(StabilizerHandle::text);
    known.dedup();
    if known.len() == 1 {
        return Ok(Some(known.pop().unwrap()));
    }
    'outer: for cand in &known {
        for other in &known {
            if !alg.includes(cand, other)? {
                continue 'outer;
            }
        }
        return Ok(Some(cand.clone()));
    }
    if alg.supports_join() {
        let mut acc = known[0].clone();
        for h in &known[1..] {
            match alg.join(&acc, h)? {
                Some(j) => acc = j,
                None => return Ok(None),
            }
        }
        return Ok(Some(acc));
    }
    Ok(None)
}

/// Contract every edge whose stabilizer is known to lie outside the
/// family. Unresolved edges are kept and listed.
pub fn collapse_dual(
    t: &BipartiteDualTree,
    alg: &Algebra,
) -> Result<BipartiteDualTree, TreeError> {
    let mut uf = UnionFind::new(t.verts.len());
    for e in &t.edges {
        if e.in_family == Some(false) {
            uf.unite(e.a, e.b);
        }
    }

    let roots: Vec<usize> = (0..t.verts.len()).map(|i| uf.find(i)).collect();
    let mut new_index: BTreeMap<usize, usize> = BTreeMap::new();
    for &r in &roots {
        let next = new_index.len();
        new_index.entry(r).or_insert(next);
    }

    let mut components: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &r) in roots.iter().enumerate() {
        components.entry(r).or_default().push(i);
    }

    let mut verts = vec![None; new_index.len()];
    for (r, members) in &components {
        let idx = new_index[r];
        if members.len() == 1 {
            verts[idx] = Some(t.verts[members[0]].clone());
            continue;
        }
        let mut window_vertices = Vec::new();
        let mut cylinders = Vec::new();
        let mut truncated = false;
        let mut stabs = Vec::new();
        for &m in members {
            let dv = &t.verts[m];
            window_vertices.extend_from_slice(&dv.window_vertices);
            cylinders.extend_from_slice(&dv.cylinders);
            truncated |= dv.truncated;
            stabs.push(dv.stab.clone());
        }
        window_vertices.sort_unstable();
        window_vertices.dedup();
        cylinders.sort_unstable();
        cylinders.dedup();
        verts[idx] = Some(DualVertex {
            kind: DualKind::Point,
            window_vertices,
            cylinders,
            stab: merged_stab(alg, &stabs)?,
            class_rep: None,
            truncated,
        });
    }
    let verts: Vec<DualVertex> = verts.into_iter().map(Option::unwrap).collect();

    let mut edges = Vec::new();
    let mut unresolved = t.unresolved.clone();
    let mut swallowed: Vec<DualEdge> = t
        .swallowed
        .iter()
        .map(|e| {
            let mut e = e.clone();
            e.a = new_index[&roots[e.a]];
            e.b = e.a;
            e
        })
        .collect();
    for e in &t.edges {
        let (ra, rb) = (roots[e.a], roots[e.b]);
        if e.in_family == Some(false) {
            let mut s = e.clone();
            s.a = new_index[&ra];
            s.b = s.a;
            swallowed.push(s);
            continue;
        }
        if e.in_family.is_none() {
            unresolved.push(e.origin);
        }
        let mut kept = e.clone();
        kept.a = new_index[&ra];
        kept.b = new_index[&rb];
        edges.push(kept);
    }
    unresolved.sort_unstable();
    unresolved.dedup();
    let projection = roots.iter().map(|r| new_index[r]).collect();

    Ok(BipartiteDualTree {
        verts,
        edges,
        cylinders: t.cylinders.clone(),
        collapsed: true,
        unresolved,
        swallowed,
        projection,
    })
}

pub fn collapsed_tree_of_cylinders(w: &GTreeWindow) -> Result<BipartiteDualTree, TreeError> {
    let t = tree_of_cylinders(w)?;
    collapse_dual(&t, w.algebra())
}

/// Rebuild a window from a dual tree so the construction can be run
/// again on its own output. Dual vertex indices become vertex ids; the
/// best-known handles become edge handles; cylinder and exact-stabilizer
/// tables are carried over so a second pass resolves edges the same way.
pub fn reinterpret_as_window(
    t: &BipartiteDualTree,
    w: &GTreeWindow,
) -> Result<GTreeWindow, TreeError> {
    let mut b = WindowBuilder::new(w.algebra().clone());
    for (i, dv) in t.verts.iter().enumerate() {
        b.vertex(i as VertexId);
        if let Some(s) = &dv.stab {
            b.vertex_stabs.insert(i as VertexId, s.clone());
        }
        if dv.truncated {
            b.boundary.insert(i as VertexId);
        }
    }
    for e in &t.edges {
        b.edge(e.a as VertexId, e.b as VertexId, e.resolved().clone());
    }
    b.cylinder_stabs = w.cylinder_stab_table().to_vec();
    for e in &t.edges {
        if let Some(exact) = &e.exact {
            b.dual_edge_stabs
                .push((e.a as VertexId, e.witness.clone(), exact.clone()));
        }
    }
    for e in &t.swallowed {
        if let Some(exact) = &e.exact {
            b.dual_edge_stabs
                .push((e.a as VertexId, e.witness.clone(), exact.clone()));
        }
    }
    b.declared = w.declared();
    b.build()
}
