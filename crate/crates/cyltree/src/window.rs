//! Finite windows into a labeled tree.
//!
//! A window is a finite tree whose edges carry family handles and whose
//! vertices may carry stabilizer handles, boundary flags and smallness
//! declarations. Boundary-flagged vertices mark where the window was cut
//! out of a larger tree: every diagnostic that depends on seeing "all"
//! of something treats cylinders touching those vertices as possibly
//! truncated.
//!
//! Windows are immutable; every operation that changes one returns a
//! new window.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::algebra::{Algebra, StabilizerHandle};
use crate::error::TreeError;

pub type VertexId = u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeData {
    pub u: VertexId,
    pub v: VertexId,
    pub stab: StabilizerHandle,
}

impl EdgeData {
    pub fn key(&self) -> (VertexId, VertexId) {
        (self.u, self.v)
    }

    pub fn other(&self, x: VertexId) -> VertexId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// A partial automorphism: an injective partial map on vertices that,
/// where defined on both endpoints of an edge, must send it to an edge
/// whose handle is the conjugate under the automorphism's name.
#[derive(Debug, Clone)]
pub struct TreeAutomorphism {
    pub name: String,
    pub vertex_map: BTreeMap<VertexId, VertexId>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DeclaredFlags {
    pub minimal: bool,
    /// Hypothesis for the unique-collapse diagnostic: each cylinder
    /// stabilizer meeting an out-of-family dual edge fixes a vertex.
    pub cylinder_stabs_elliptic: bool,
}

#[derive(Debug, Clone)]
pub struct GTreeWindow {
    algebra: Arc<Algebra>,
    vertices: Vec<VertexId>,
    edges: Vec<EdgeData>,
    vertex_stabs: BTreeMap<VertexId, StabilizerHandle>,
    boundary: BTreeSet<VertexId>,
    generators: Vec<TreeAutomorphism>,
    relative_marks: Vec<BTreeSet<VertexId>>,
    small_declared: BTreeMap<VertexId, bool>,
    /// Fixture data: cylinder stabilizer G_Y keyed by any member handle
    /// of the class.
    cylinder_stabs: Vec<(StabilizerHandle, StabilizerHandle)>,
    /// Fixture data: exact dual edge stabilizers keyed by (vertex,
    /// class member handle).
    dual_edge_stabs: Vec<(VertexId, StabilizerHandle, StabilizerHandle)>,
    /// Declared equivalence classes beyond those with a present member,
    /// given by one representative handle each.
    extra_classes: Vec<StabilizerHandle>,
    declared: DeclaredFlags,
}

pub struct WindowBuilder {
    algebra: Arc<Algebra>,
    vertices: Vec<VertexId>,
    edges: Vec<EdgeData>,
    pub vertex_stabs: BTreeMap<VertexId, StabilizerHandle>,
    pub boundary: BTreeSet<VertexId>,
    pub generators: Vec<TreeAutomorphism>,
    pub relative_marks: Vec<BTreeSet<VertexId>>,
    pub small_declared: BTreeMap<VertexId, bool>,
    pub cylinder_stabs: Vec<(StabilizerHandle, StabilizerHandle)>,
    pub dual_edge_stabs: Vec<(VertexId, StabilizerHandle, StabilizerHandle)>,
    pub extra_classes: Vec<StabilizerHandle>,
    pub declared: DeclaredFlags,
}

impl WindowBuilder {
    pub fn new(algebra: Arc<Algebra>) -> WindowBuilder {
        WindowBuilder {
            algebra,
            vertices: Vec::new(),
            edges: Vec::new(),
            vertex_stabs: BTreeMap::new(),
            boundary: BTreeSet::new(),
            generators: Vec::new(),
            relative_marks: Vec::new(),
            small_declared: BTreeMap::new(),
            cylinder_stabs: Vec::new(),
            dual_edge_stabs: Vec::new(),
            extra_classes: Vec::new(),
            declared: DeclaredFlags::default(),
        }
    }

    pub fn vertex(&mut self, id: VertexId) -> &mut Self {
        self.vertices.push(id);
        self
    }

    pub fn edge(&mut self, u: VertexId, v: VertexId, stab: StabilizerHandle) -> &mut Self {
        let (u, v) = if u <= v { (u, v) } else { (v, u) };
        self.edges.push(EdgeData { u, v, stab });
        self
    }

    /// Structural checks only; tree-ness and handle semantics are the
    /// validators' business.
    pub fn build(self) -> Result<GTreeWindow, TreeError> {
        let mut vertices = self.vertices;
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(TreeError::Parse("duplicate vertex id".into()));
        }
        if vertices.is_empty() {
            return Err(TreeError::Parse("window needs at least one vertex".into()));
        }
        let vset: BTreeSet<VertexId> = vertices.iter().copied().collect();
        let mut edges = self.edges;
        edges.sort_by_key(EdgeData::key);
        for e in &edges {
            if e.u == e.v {
                return Err(TreeError::Parse(format!("self loop at vertex {}", e.u)));
            }
            if !vset.contains(&e.u) || !vset.contains(&e.v) {
                return Err(TreeError::Parse(format!(
                    "edge ({}, {}) references a missing vertex",
                    e.u, e.v
                )));
            }
        }
        if edges.windows(2).any(|w| w[0].key() == w[1].key()) {
            return Err(TreeError::Parse("duplicate edge".into()));
        }
        for (v, _) in self.vertex_stabs.iter() {
            if !vset.contains(v) {
                return Err(TreeError::Parse(format!("vertex_stab for missing vertex {v}")));
            }
        }
        for v in &self.boundary {
            if !vset.contains(v) {
                return Err(TreeError::Parse(format!("boundary flag on missing vertex {v}")));
            }
        }
        for mark in &self.relative_marks {
            for v in mark {
                if !vset.contains(v) {
                    return Err(TreeError::Parse(format!("relative mark on missing vertex {v}")));
                }
            }
        }
        for g in &self.generators {
            let mut seen = BTreeSet::new();
            for (a, b) in &g.vertex_map {
                if !vset.contains(a) || !vset.contains(b) {
                    return Err(TreeError::Parse(format!(
                        "generator {:?} maps a missing vertex",
                        g.name
                    )));
                }
                if !seen.insert(*b) {
                    return Err(TreeError::Parse(format!(
                        "generator {:?} is not injective",
                        g.name
                    )));
                }
            }
        }
        Ok(GTreeWindow {
            algebra: self.algebra,
            vertices,
            edges,
            vertex_stabs: self.vertex_stabs,
            boundary: self.boundary,
            generators: self.generators,
            relative_marks: self.relative_marks,
            small_declared: self.small_declared,
            cylinder_stabs: self.cylinder_stabs,
            dual_edge_stabs: self.dual_edge_stabs,
            extra_classes: self.extra_classes,
            declared: self.declared,
        })
    }
}

impl GTreeWindow {
    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeData] {
        &self.edges
    }

    pub fn vertex_stab(&self, v: VertexId) -> Option<&StabilizerHandle> {
        self.vertex_stabs.get(&v)
    }

    pub fn vertex_stabs(&self) -> &BTreeMap<VertexId, StabilizerHandle> {
        &self.vertex_stabs
    }

    pub fn boundary(&self) -> &BTreeSet<VertexId> {
        &self.boundary
    }

    pub fn is_boundary(&self, v: VertexId) -> bool {
        self.boundary.contains(&v)
    }

    pub fn generators(&self) -> &[TreeAutomorphism] {
        &self.generators
    }

    pub fn relative_marks(&self) -> &[BTreeSet<VertexId>] {
        &self.relative_marks
    }

    pub fn small_declared(&self) -> &BTreeMap<VertexId, bool> {
        &self.small_declared
    }

    pub fn cylinder_stab_table(&self) -> &[(StabilizerHandle, StabilizerHandle)] {
        &self.cylinder_stabs
    }

    pub fn dual_edge_stab_table(&self) -> &[(VertexId, StabilizerHandle, StabilizerHandle)] {
        &self.dual_edge_stabs
    }

    pub fn extra_classes(&self) -> &[StabilizerHandle] {
        &self.extra_classes
    }

    pub fn declared(&self) -> DeclaredFlags {
        self.declared
    }

    pub fn edge_between(&self, a: VertexId, b: VertexId) -> Option<usize> {
        let key = if a <= b { (a, b) } else { (b, a) };
        self.edges.binary_search_by_key(&key, EdgeData::key).ok()
    }

    pub fn vertex_index(&self, v: VertexId) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    /// Adjacency lists as (neighbor, edge index), indexed like
    /// `vertices()`.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for (ei, e) in self.edges.iter().enumerate() {
            let iu = self.vertex_index(e.u).expect("edge endpoints exist");
            let iv = self.vertex_index(e.v).expect("edge endpoints exist");
            adj[iu].push((iv, ei));
            adj[iv].push((iu, ei));
        }
        adj
    }

    /// Connected and |E| = |V| - 1.
    pub fn is_tree(&self) -> bool {
        if self.edges.len() + 1 != self.vertices.len() {
            return false;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(i) = stack.pop() {
            for &(j, _) in &adj[i] {
                if !seen[j] {
                    seen[j] = true;
                    count += 1;
                    stack.push(j);
                }
            }
        }
        count == self.vertices.len()
    }

    pub fn ensure_tree(&self) -> Result<(), TreeError> {
        if self.is_tree() {
            Ok(())
        } else {
            Err(TreeError::NotATree(format!(
                "{} vertices, {} edges",
                self.vertices.len(),
                self.edges.len()
            )))
        }
    }

    /// Edge indices along the unique path from a to b (empty when a = b).
    /// Requires a tree.
    pub fn path_edges(&self, a: VertexId, b: VertexId) -> Vec<usize> {
        let ia = self.vertex_index(a).expect("vertex exists");
        let ib = self.vertex_index(b).expect("vertex exists");
        if ia == ib {
            return Vec::new();
        }
        let adj = self.adjacency();
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.vertices.len()];
        let mut seen = vec![false; self.vertices.len()];
        seen[ia] = true;
        let mut queue = std::collections::VecDeque::from([ia]);
        while let Some(i) = queue.pop_front() {
            if i == ib {
                break;
            }
            for &(j, ei) in &adj[i] {
                if !seen[j] {
                    seen[j] = true;
                    parent[j] = Some((i, ei));
                    queue.push_back(j);
                }
            }
        }
        let mut out = Vec::new();
        let mut cur = ib;
        while let Some((p, ei)) = parent[cur] {
            out.push(ei);
            cur = p;
        }
        out.reverse();
        out
    }

    /// All-pairs hop distances, indexed like `vertices()`. usize::MAX
    /// marks disconnection.
    pub fn distance_matrix(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let adj = self.adjacency();
        let mut dist = vec![vec![usize::MAX; n]; n];
        for s in 0..n {
            dist[s][s] = 0;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(i) = queue.pop_front() {
                for &(j, _) in &adj[i] {
                    if dist[s][j] == usize::MAX {
                        dist[s][j] = dist[s][i] + 1;
                        queue.push_back(j);
                    }
                }
            }
        }
        dist
    }

    /// Every handle stored anywhere in the window, deduplicated.
    /// Canonical string deciding labeled-tree isomorphism of windows.
    /// Vertex labels are the declared stabilizers, edge labels the edge
    /// handles; ids do not enter.
    pub fn canonical_form(&self) -> Result<String, TreeError> {
        self.ensure_tree()?;
        let vertices: Vec<(VertexId, String)> = self
            .vertices
            .iter()
            .map(|&v| {
                let label = match self.vertex_stabs.get(&v) {
                    Some(h) => h.text(),
                    None => "?".into(),
                };
                (v, label)
            })
            .collect();
        let edges: Vec<(VertexId, VertexId, String)> = self
            .edges
            .iter()
            .map(|e| (e.u, e.v, e.stab.text()))
            .collect();
        Ok(crate::canonical::canonical_of(&vertices, &edges))
    }

    pub fn present_handles(&self) -> Vec<StabilizerHandle> {
        let mut set: BTreeSet<StabilizerHandle> = BTreeSet::new();
        for e in &self.edges {
            set.insert(e.stab.clone());
        }
        for h in self.vertex_stabs.values() {
            set.insert(h.clone());
        }
        for (k, gy) in &self.cylinder_stabs {
            set.insert(k.clone());
            set.insert(gy.clone());
        }
        for (_, k, h) in &self.dual_edge_stabs {
            set.insert(k.clone());
            set.insert(h.clone());
        }
        for h in &self.extra_classes {
            set.insert(h.clone());
        }
        set.into_iter().collect()
    }

    /// Smallness of a vertex: is its stabilizer contained in a family
    /// group? Declared values win; otherwise it is computed from the
    /// present handles when the vertex has a stabilizer; otherwise it is
    /// unknown.
    pub fn small_flag(&self, v: VertexId) -> Result<Option<bool>, TreeError> {
        if let Some(&b) = self.small_declared.get(&v) {
            return Ok(Some(b));
        }
        let Some(stab) = self.vertex_stabs.get(&v) else {
            return Ok(None);
        };
        for h in self.present_handles() {
            if self.algebra.in_family(&h)? && self.algebra.includes(&h, stab)? {
                return Ok(Some(true));
            }
        }
        Ok(Some(false))
    }

    /// Declared cylinder stabilizer for the class containing `member`,
    /// if the fixture provides one.
    pub fn cylinder_stab_for(
        &self,
        member: &StabilizerHandle,
    ) -> Result<Option<StabilizerHandle>, TreeError> {
        let rep = self.algebra.class_representative(member)?;
        for (key, gy) in &self.cylinder_stabs {
            if self.algebra.class_representative(key)? == rep {
                return Ok(Some(gy.clone()));
            }
        }
        Ok(None)
    }

    /// Declared exact dual edge stabilizer at (vertex, class of member).
    pub fn dual_edge_stab_for(
        &self,
        v: VertexId,
        member: &StabilizerHandle,
    ) -> Result<Option<StabilizerHandle>, TreeError> {
        let rep = self.algebra.class_representative(member)?;
        for (x, key, h) in &self.dual_edge_stabs {
            if *x == v && self.algebra.class_representative(key)? == rep {
                return Ok(Some(h.clone()));
            }
        }
        Ok(None)
    }

    /// Builder pre-loaded with this window's contents; used by moves.
    pub fn to_builder(&self) -> WindowBuilder {
        let mut b = WindowBuilder::new(self.algebra.clone());
        b.vertices = self.vertices.clone();
        b.edges = self.edges.clone();
        b.vertex_stabs = self.vertex_stabs.clone();
        b.boundary = self.boundary.clone();
        b.generators = self.generators.clone();
        b.relative_marks = self.relative_marks.clone();
        b.small_declared = self.small_declared.clone();
        b.cylinder_stabs = self.cylinder_stabs.clone();
        b.dual_edge_stabs = self.dual_edge_stabs.clone();
        b.extra_classes = self.extra_classes.clone();
        b.declared = self.declared;
        b
    }
}

/// Mutation access for the builder's tree part.
impl WindowBuilder {
    pub fn vertices_mut(&mut self) -> &mut Vec<VertexId> {
        &mut self.vertices
    }

    pub fn edges_mut(&mut self) -> &mut Vec<EdgeData> {
        &mut self.edges
    }
}
