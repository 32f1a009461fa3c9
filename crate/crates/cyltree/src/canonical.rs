//! Canonical forms for labeled trees.
//!
//! Two trees get the same string exactly when some label-preserving
//! isomorphism maps one onto the other. The string is computed by
//! rooting at the centroid (or at the central edge, for even trees)
//! and recursively sorting child encodings. Labels are length-prefixed
//! so no payload can collide with the structural separators.

use std::collections::BTreeMap;

/// A labeled tree given as an adjacency structure over `0..n`.
/// `vertex_labels[i]` labels vertex `i`; `edges` carries its own label.
pub struct LabeledTree {
    pub vertex_labels: Vec<String>,
    pub edges: Vec<(usize, usize, String)>,
}

fn tag(s: &str) -> String {
    format!("{}:{}", s.len(), s)
}

impl LabeledTree {
    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertex_labels.len()];
        for (ei, &(u, v, _)) in self.edges.iter().enumerate() {
            adj[u].push((v, ei));
            adj[v].push((u, ei));
        }
        adj
    }

    /// Centroid vertices: one for odd trees, two adjacent ones for even.
    fn centroids(&self) -> Vec<usize> {
        let n = self.vertex_labels.len();
        if n == 1 {
            return vec![0];
        }
        let adj = self.adjacency();
        let mut degree: Vec<usize> = adj.iter().map(|a| a.len()).collect();
        let mut removed = vec![false; n];
        let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
        let mut remaining = n;
        while remaining > 2 {
            let mut next = Vec::new();
            for &v in &layer {
                removed[v] = true;
                remaining -= 1;
                for &(u, _) in &adj[v] {
                    if !removed[u] {
                        degree[u] -= 1;
                        if degree[u] == 1 {
                            next.push(u);
                        }
                    }
                }
            }
            layer = next;
        }
        (0..n).filter(|&v| !removed[v]).collect()
    }

    fn encode_rooted(&self, root: usize, parent: Option<usize>, adj: &[Vec<(usize, usize)>]) -> String {
        let mut parts: Vec<String> = Vec::new();
        for &(child, ei) in &adj[root] {
            if Some(child) == parent {
                continue;
            }
            let sub = self.encode_rooted(child, Some(root), adj);
            parts.push(format!("{}{}", tag(&self.edges[ei].2), sub));
        }
        parts.sort();
        format!("({}{})", tag(&self.vertex_labels[root]), parts.concat())
    }

    /// Canonical string; equal strings mean label-isomorphic trees.
    pub fn canonical(&self) -> String {
        let adj = self.adjacency();
        let cents = self.centroids();
        match cents.len() {
            1 => self.encode_rooted(cents[0], None, &adj),
            2 => {
                let (a, b) = (cents[0], cents[1]);
                let ei = adj[a]
                    .iter()
                    .find(|&&(u, _)| u == b)
                    .map(|&(_, e)| e)
                    .expect("two centroids are adjacent");
                let ea = self.encode_rooted(a, Some(b), &adj);
                let eb = self.encode_rooted(b, Some(a), &adj);
                let (lo, hi) = if ea <= eb { (ea, eb) } else { (eb, ea) };
                format!("[{}{}{}]", tag(&self.edges[ei].2), lo, hi)
            }
            _ => unreachable!("a tree has one or two centroids"),
        }
    }
}

/// Canonical string for a tree given with arbitrary vertex keys.
pub fn canonical_of<K: Ord + Clone>(
    vertices: &[(K, String)],
    edges: &[(K, K, String)],
) -> String {
    let index: BTreeMap<K, usize> = vertices
        .iter()
        .enumerate()
        .map(|(i, (k, _))| (k.clone(), i))
        .collect();
    let t = LabeledTree {
        vertex_labels: vertices.iter().map(|(_, l)| l.clone()).collect(),
        edges: edges
            .iter()
            .map(|(u, v, l)| (index[u], index[v], l.clone()))
            .collect(),
    };
    t.canonical()
}
