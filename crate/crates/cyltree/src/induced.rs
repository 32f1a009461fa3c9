//! Maps between dual trees induced by maps between windows.
//!
//! A junction goes to the cell holding its image point. A cylinder goes
//! to the unique cylinder its surviving edges land in, or, when every
//! edge collapses, to its image point, which must sit in at least two
//! cylinders of the target. Each dual edge then lands on a dual edge or
//! a single dual vertex.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dual::{tree_of_cylinders, BipartiteDualTree, DualKind};
use crate::equivariant::EquivariantMap;
use crate::error::TreeError;
use crate::window::GTreeWindow;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellularMap {
    /// Source dual vertex index → target dual vertex index.
    pub vertex_map: BTreeMap<usize, usize>,
}

impl CellularMap {
    pub fn image(&self, i: usize) -> Option<usize> {
        self.vertex_map.get(&i).copied()
    }

    /// g after self.
    pub fn compose(&self, g: &CellularMap) -> Result<CellularMap, TreeError> {
        let mut vertex_map = BTreeMap::new();
        for (&a, &b) in &self.vertex_map {
            let Some(&c) = g.vertex_map.get(&b) else {
                return Err(TreeError::NotEquivariant(format!(
                    "composition undefined: dual vertex {b} has no image"
                )));
            };
            vertex_map.insert(a, c);
        }
        Ok(CellularMap { vertex_map })
    }

    /// Alignment preservation on dual trees, over all vertex triples.
    pub fn preserves_alignment(
        &self,
        t: &BipartiteDualTree,
        t2: &BipartiteDualTree,
    ) -> bool {
        let dist = t.distance_matrix();
        let idist = t2.distance_matrix();
        let n = t.verts.len();
        for a in 0..n {
            for b in a..n {
                for x in 0..n {
                    if dist[a][x].saturating_add(dist[x][b]) != dist[a][b] {
                        continue;
                    }
                    let (fa, fb, fx) = (
                        self.vertex_map[&a],
                        self.vertex_map[&b],
                        self.vertex_map[&x],
                    );
                    if idist[fa][fx].saturating_add(idist[fx][fb]) != idist[fa][fb] {
                        return false;
                    }
                }
            }
        }
        true
    }
}

pub struct InducedMap {
    pub source: BipartiteDualTree,
    pub target: BipartiteDualTree,
    pub map: CellularMap,
}

pub fn induced_map(
    f: &EquivariantMap,
    w: &GTreeWindow,
    w2: &GTreeWindow,
) -> Result<InducedMap, TreeError> {
    f.validate(w, w2)?;
    let source = tree_of_cylinders(w)?;
    let target = tree_of_cylinders(w2)?;
    let map = induce_on_duals(f, w, w2, &source, &target)?;
    Ok(InducedMap { source, target, map })
}

fn induce_on_duals(
    f: &EquivariantMap,
    w: &GTreeWindow,
    w2: &GTreeWindow,
    source: &BipartiteDualTree,
    target: &BipartiteDualTree,
) -> Result<CellularMap, TreeError> {
    // cylinder id of every target window edge
    let mut cyl_of_edge: BTreeMap<usize, usize> = BTreeMap::new();
    for (ci, c) in target.cylinders.iter().enumerate() {
        for &ei in &c.edges {
            cyl_of_edge.insert(ei, ci);
        }
    }

    let mut vertex_map = BTreeMap::new();
    for (i, dv) in source.verts.iter().enumerate() {
        let image = match dv.kind {
            DualKind::Point => {
                let x = dv.window_vertices[0];
                let fx = f.image(x).expect("validated map is total");
                target.vertex_containing(fx).ok_or_else(|| {
                    TreeError::NotEquivariant(format!(
                        "image {fx} of junction {x} is in no cell of the target"
                    ))
                })?
            }
            DualKind::Cylinder => {
                let cyl = &source.cylinders[dv.cylinders[0]];
                let mut hit_cylinders: Vec<usize> = Vec::new();
                for &ei in &cyl.edges {
                    let e = &w.edges()[ei];
                    for target_edge in f.edge_image((e.u, e.v), w2)? {
                        hit_cylinders.push(cyl_of_edge[&target_edge]);
                    }
                }
                hit_cylinders.sort_unstable();
                hit_cylinders.dedup();
                match hit_cylinders.len() {
                    0 => {
                        // fully collapsed: lands on one point, which must
                        // be a cell of its own in the target
                        let p = f.image(cyl.vertices[0]).unwrap();
                        for &v in &cyl.vertices {
                            if f.image(v) != Some(p) {
                                return Err(TreeError::ImageNotCylinderOrPoint(format!(
                                    "cylinder {} collapses to more than one point",
                                    dv.cylinders[0]
                                )));
                            }
                        }
                        // junctions keep their own cell; otherwise the
                        // image sits in the one cylinder holding p
                        target.vertex_containing(p).ok_or_else(|| {
                            TreeError::ImageNotCylinderOrPoint(format!(
                                "collapsed image {p} is in no cell of the target"
                            ))
                        })?
                    }
                    1 => target
                        .vertex_of_cylinder(hit_cylinders[0])
                        .expect("every cylinder id has a dual vertex"),
                    _ => {
                        return Err(TreeError::ImageNotCylinderOrPoint(format!(
                            "image of cylinder {} crosses {} distinct classes",
                            dv.cylinders[0],
                            hit_cylinders.len()
                        )))
                    }
                }
            }
        };
        vertex_map.insert(i, image);
    }

    // cellularity: dual edges land on dual edges or collapse
    for e in &source.edges {
        let (fa, fb) = (vertex_map[&e.a], vertex_map[&e.b]);
        if fa == fb {
            continue;
        }
        let adjacent = target
            .edges
            .iter()
            .any(|t| (t.a, t.b) == (fa, fb) || (t.a, t.b) == (fb, fa));
        if !adjacent {
            return Err(TreeError::NotEquivariant(format!(
                "incidence ({}, cylinder {}) maps to non-adjacent cells",
                e.origin.0, e.origin.1
            )));
        }
    }

    Ok(CellularMap { vertex_map })
}

/// Is f constant or injective on every cylinder of the source?
pub fn constant_or_injective_on_cylinders(
    f: &EquivariantMap,
    w: &GTreeWindow,
) -> Result<bool, TreeError> {
    let cylinders = crate::cylinder::compute_cylinders(w)?;
    for c in &cylinders {
        let images: Vec<_> = c.vertices.iter().map(|&v| f.image(v)).collect();
        let constant = images.windows(2).all(|p| p[0] == p[1]);
        let mut sorted = images.clone();
        sorted.sort_unstable();
        sorted.dedup();
        let injective = sorted.len() == images.len();
        if !constant && !injective {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The collapsed-tree version: the composite of the induced map with
/// the target collapse must factor through the source collapse, which
/// sandwich-closedness guarantees. Returns the factored map together
/// with both collapsed trees.
pub fn induced_map_collapsed(
    f: &EquivariantMap,
    w: &GTreeWindow,
    w2: &GTreeWindow,
) -> Result<InducedMap, TreeError> {
    let alg = w.algebra();
    let mut handles = w.present_handles();
    handles.extend(w2.present_handles());
    if !crate::analysis::sandwich_closed(alg, &handles)? {
        return Err(TreeError::SandwichClosureUnverified(
            "present handles violate sandwich-closedness".into(),
        ));
    }

    let plain = induced_map(f, w, w2)?;
    let source_star = crate::dual::collapse_dual(&plain.source, alg)?;
    let target_star = crate::dual::collapse_dual(&plain.target, alg)?;

    let p1 = &source_star.projection;
    let p2 = &target_star.projection;

    let mut vertex_map: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, star_i) in p1.iter().enumerate() {
        let down = p2[plain.map.vertex_map[&i]];
        match vertex_map.get(star_i) {
            None => {
                vertex_map.insert(*star_i, down);
            }
            Some(&prev) if prev == down => {}
            Some(_) => {
                return Err(TreeError::SandwichClosureUnverified(format!(
                    "collapsed source cell {star_i} has two distinct images; \
                     a contracted source edge landed on a kept target edge"
                )));
            }
        }
    }

    Ok(InducedMap {
        source: source_star,
        target: target_star,
        map: CellularMap { vertex_map },
    })
}
