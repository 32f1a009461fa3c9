//! Window-scale diagnostics: segment stabilizers, acylindricity,
//! cylinder diameters, uniqueness of collapsed incidences, domination,
//! and idempotence of the collapsed construction.
//!
//! Everything here is window-relative. A check that would need to see
//! past the window boundary either flags its answer or drops the
//! affected paths, and says so in the report.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, BackendId, StabilizerHandle};
use crate::dual::{
    collapsed_tree_of_cylinders, reinterpret_as_window, tree_of_cylinders, BipartiteDualTree,
    DualKind,
};
use crate::error::TreeError;
use crate::window::{GTreeWindow, VertexId};

/// Does every handle squeezed between two in-family handles land in the
/// family? A backend theorem for words and lattices; checked over the
/// given handles for tables.
pub fn sandwich_closed(alg: &Algebra, handles: &[StabilizerHandle]) -> Result<bool, TreeError> {
    match alg.backend() {
        BackendId::W | BackendId::L => Ok(true),
        BackendId::P => {
            let family: Vec<bool> = handles
                .iter()
                .map(|h| alg.in_family(h))
                .collect::<Result<_, _>>()?;
            for (hi, h) in handles.iter().enumerate() {
                if family[hi] {
                    continue;
                }
                for (ai, a) in handles.iter().enumerate() {
                    if !family[ai] || !alg.includes(h, a)? {
                        continue;
                    }
                    for (bi, b) in handles.iter().enumerate() {
                        if family[bi] && alg.includes(b, h)? {
                            return Ok(false);
                        }
                    }
                }
            }
            Ok(true)
        }
    }
}

/// Pairwise condition on present in-family handles: an infinite
/// intersection forces equivalence.
pub fn infinite_intersection_condition(
    alg: &Algebra,
    handles: &[StabilizerHandle],
) -> Result<bool, TreeError> {
    let family: Vec<&StabilizerHandle> = {
        let mut out = Vec::new();
        for h in handles {
            if alg.in_family(h)? {
                out.push(h);
            }
        }
        out
    };
    for (i, a) in family.iter().enumerate() {
        for b in &family[i + 1..] {
            let meet = alg.intersect(a, b)?;
            if !alg.is_finite(&meet)? && !alg.equivalent(a, b)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Intersection of the handles along a path of edges.
pub fn segment_stabilizer(
    w: &GTreeWindow,
    edge_ids: &[usize],
) -> Result<StabilizerHandle, TreeError> {
    let alg = w.algebra();
    let Some((&first, rest)) = edge_ids.split_first() else {
        return Err(TreeError::Parse("empty segment".into()));
    };
    let mut acc = w.edges()[first].stab.clone();
    for &ei in rest {
        acc = alg.intersect(&acc, &w.edges()[ei].stab)?;
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AcylMode {
    Strict,
    Almost,
}

#[derive(Debug, Clone, Serialize)]
pub struct SegmentViolation {
    pub endpoints: (VertexId, VertexId),
    pub stabilizer: StabilizerHandle,
    pub touches_boundary: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AcylindricityReport {
    pub k: usize,
    pub mode: AcylMode,
    pub passed: bool,
    /// No segment of the examined length fits in the window.
    pub vacuous: bool,
    /// Some window boundary is visible; a pass only covers what the
    /// window shows.
    pub window_limited: bool,
    pub violations: Vec<SegmentViolation>,
}

/// Examine every segment of length k+1; longer segments have smaller
/// stabilizers, so this decides the property for the whole window.
pub fn acylindricity_check(
    w: &GTreeWindow,
    k: usize,
    mode: AcylMode,
) -> Result<AcylindricityReport, TreeError> {
    w.ensure_tree()?;
    let alg = w.algebra();
    let dist = w.distance_matrix();
    let n = w.vertices().len();
    let mut violations = Vec::new();
    let mut examined = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            if dist[i][j] != k + 1 {
                continue;
            }
            examined += 1;
            let a = w.vertices()[i];
            let b = w.vertices()[j];
            let path = w.path_edges(a, b);
            let stab = segment_stabilizer(w, &path)?;
            let bad = match mode {
                AcylMode::Strict => !alg.is_trivial(&stab)?,
                AcylMode::Almost => !alg.is_finite(&stab)?,
            };
            if bad {
                let touches_boundary = {
                    let mut on_path: Vec<VertexId> = vec![a, b];
                    for &ei in &path {
                        on_path.push(w.edges()[ei].u);
                        on_path.push(w.edges()[ei].v);
                    }
                    on_path.iter().any(|&v| w.is_boundary(v))
                };
                violations.push(SegmentViolation {
                    endpoints: (a, b),
                    stabilizer: stab,
                    touches_boundary,
                });
            }
        }
    }
    Ok(AcylindricityReport {
        k,
        mode,
        passed: violations.is_empty(),
        vacuous: examined == 0,
        window_limited: !w.boundary().is_empty(),
        violations,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CylinderDiameterEntry {
    pub class: StabilizerHandle,
    pub diameter: usize,
    pub edge_count: usize,
    pub truncated: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CylinderDiameterReport {
    pub cylinders: Vec<CylinderDiameterEntry>,
    pub max_diameter: usize,
}

pub fn cylinder_diameter_report(w: &GTreeWindow) -> Result<CylinderDiameterReport, TreeError> {
    let cylinders = crate::cylinder::compute_cylinders(w)?;
    let mut entries = Vec::new();
    let mut max_diameter = 0;
    for c in &cylinders {
        let d = c.diameter(w);
        max_diameter = max_diameter.max(d);
        entries.push(CylinderDiameterEntry {
            class: c.class_rep.clone(),
            diameter: d,
            edge_count: c.edges.len(),
            truncated: c.truncated,
        });
    }
    Ok(CylinderDiameterReport {
        cylinders: entries,
        max_diameter,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct StarEntry {
    pub class: StabilizerHandle,
    pub kept_edges: usize,
    pub collapsed_edges: usize,
    pub diameter: usize,
    pub complete: bool,
    pub stab_in_family: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiameterTwoReport {
    pub all_at_most_two: bool,
    /// Exactness (diameter exactly 2, incomplete stars out of family)
    /// was asserted; requires a declared-minimal window and a
    /// sandwich-closed backend.
    pub exactness_checked: bool,
    pub stars: Vec<StarEntry>,
    /// Classes whose every incidence collapsed.
    pub vanished: Vec<StabilizerHandle>,
    pub violations: Vec<String>,
}

/// Diameter report for the cylinders of a collapsed dual tree. Each
/// surviving class forms a star; an incomplete star lost at least one
/// incidence to the collapse and its stabilizer must then lie outside
/// the family.
pub fn diameter_two_check(
    dual: &BipartiteDualTree,
    w: &GTreeWindow,
) -> Result<DiameterTwoReport, TreeError> {
    let alg = w.algebra();
    let mut kept: BTreeMap<usize, usize> = BTreeMap::new();
    let mut collapsed: BTreeMap<usize, usize> = BTreeMap::new();
    for e in &dual.edges {
        *kept.entry(e.origin.1).or_default() += 1;
    }
    for e in &dual.swallowed {
        *collapsed.entry(e.origin.1).or_default() += 1;
    }

    let exactness_checked =
        w.declared().minimal && sandwich_closed(alg, &w.present_handles())?;

    let mut stars = Vec::new();
    let mut vanished = Vec::new();
    let mut violations = Vec::new();
    for (ci, c) in dual.cylinders.iter().enumerate() {
        let k = kept.get(&ci).copied().unwrap_or(0);
        let s = collapsed.get(&ci).copied().unwrap_or(0);
        if k == 0 {
            if s > 0 {
                vanished.push(c.class_rep.clone());
            }
            continue;
        }
        let diameter = if k >= 2 { 2 } else { 1 };
        let complete = s == 0;
        let member = &w.edges()[c.edges[0]].stab;
        let gy = w.cylinder_stab_for(member)?;
        let stab_in_family = match &gy {
            Some(h) => Some(alg.in_family(h)?),
            None => None,
        };
        if exactness_checked {
            if diameter != 2 && !c.truncated {
                violations.push(format!(
                    "star of class {} has diameter {diameter}",
                    c.class_rep.text()
                ));
            }
            if !complete {
                match stab_in_family {
                    Some(true) => violations.push(format!(
                        "incomplete star of class {} has an in-family stabilizer",
                        c.class_rep.text()
                    )),
                    Some(false) => {}
                    None => violations.push(format!(
                        "incomplete star of class {} has an unverifiable stabilizer",
                        c.class_rep.text()
                    )),
                }
            }
        }
        stars.push(StarEntry {
            class: c.class_rep.clone(),
            kept_edges: k,
            collapsed_edges: s,
            diameter,
            complete,
            stab_in_family,
        });
    }

    Ok(DiameterTwoReport {
        all_at_most_two: stars.iter().all(|s| s.diameter <= 2),
        exactness_checked,
        stars,
        vanished,
        violations,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct FixedPointReport {
    /// The comparison drops boundary-flagged vertices the collapsed
    /// tree cannot see; it is window-relative by nature.
    pub window_proxy: bool,
    pub equal: bool,
    pub dropped: Vec<VertexId>,
    pub detail: Vec<String>,
}

/// When every cylinder of the window has diameter exactly 2 and every
/// incomplete one has an out-of-family stabilizer, the collapsed dual
/// tree reproduces the window itself: cylinders map to their centers,
/// junctions to themselves.
pub fn fixed_point_check(w: &GTreeWindow) -> Result<FixedPointReport, TreeError> {
    if !w.declared().minimal {
        return Err(TreeError::PreconditionNotDeclared(
            "window is not declared minimal".into(),
        ));
    }
    let alg = w.algebra();
    if !sandwich_closed(alg, &w.present_handles())? {
        return Err(TreeError::SandwichClosureUnverified(
            "present handles violate sandwich-closedness".into(),
        ));
    }

    let mut detail = Vec::new();
    let cylinders = crate::cylinder::compute_cylinders(w)?;
    let mut centers: BTreeMap<usize, VertexId> = BTreeMap::new();
    for (ci, c) in cylinders.iter().enumerate() {
        if c.diameter(w) != 2 {
            detail.push(format!(
                "cylinder of class {} has diameter {}, not 2",
                c.class_rep.text(),
                c.diameter(w)
            ));
            continue;
        }
        // diameter-2 subtree: the vertex on every edge
        let center = c
            .vertices
            .iter()
            .copied()
            .find(|&v| {
                c.edges
                    .iter()
                    .all(|&ei| w.edges()[ei].u == v || w.edges()[ei].v == v)
            })
            .expect("a diameter-2 subtree has a center");
        centers.insert(ci, center);
        let complete = w
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, e)| e.u == center || e.v == center)
            .all(|(ei, _)| c.edges.contains(&ei));
        if !complete {
            let member = &w.edges()[c.edges[0]].stab;
            match w.cylinder_stab_for(member)? {
                Some(gy) if !alg.in_family(&gy)? => {}
                Some(_) => detail.push(format!(
                    "incomplete cylinder of class {} has an in-family stabilizer",
                    c.class_rep.text()
                )),
                None => detail.push(format!(
                    "incomplete cylinder of class {} has no declared stabilizer",
                    c.class_rep.text()
                )),
            }
        }
    }
    if !detail.is_empty() {
        return Ok(FixedPointReport {
            window_proxy: true,
            equal: false,
            dropped: Vec::new(),
            detail,
        });
    }

    let dual = collapsed_tree_of_cylinders(w)?;
    // g: dual vertex -> window vertex
    let mut g: Vec<Option<VertexId>> = Vec::with_capacity(dual.verts.len());
    for dv in &dual.verts {
        let image = match dv.kind {
            DualKind::Cylinder => centers.get(&dv.cylinders[0]).copied(),
            DualKind::Point => {
                if dv.window_vertices.len() == 1 {
                    Some(dv.window_vertices[0])
                } else {
                    // a merged blob stands for the junction it grew from
                    let junctions: Vec<VertexId> = dv
                        .window_vertices
                        .iter()
                        .copied()
                        .filter(|&x| {
                            cylinders.iter().filter(|c| c.contains_vertex(x)).count() >= 2
                        })
                        .collect();
                    if junctions.len() == 1 {
                        Some(junctions[0])
                    } else {
                        detail.push(format!(
                            "merged cell contains {} junctions",
                            junctions.len()
                        ));
                        None
                    }
                }
            }
        };
        g.push(image);
    }

    let mut hit: BTreeMap<VertexId, usize> = BTreeMap::new();
    for img in g.iter().flatten() {
        *hit.entry(*img).or_default() += 1;
    }
    if hit.values().any(|&n| n > 1) {
        detail.push("two cells map to the same window vertex".into());
    }
    let dropped: Vec<VertexId> = w
        .vertices()
        .iter()
        .copied()
        .filter(|v| !hit.contains_key(v))
        .collect();
    for &v in &dropped {
        if !w.is_boundary(v) {
            detail.push(format!("vertex {v} is not reached and not boundary-flagged"));
        }
    }

    let mut edge_hits = vec![0usize; w.edges().len()];
    for e in &dual.edges {
        let (Some(ga), Some(gb)) = (g[e.a], g[e.b]) else { continue };
        match w.edge_between(ga, gb) {
            None => detail.push(format!(
                "incidence ({}, cylinder {}) maps to the non-edge ({ga}, {gb})",
                e.origin.0, e.origin.1
            )),
            Some(ei) => {
                edge_hits[ei] += 1;
                if w.edges()[ei].stab.text() != e.resolved().text() {
                    detail.push(format!(
                        "handle mismatch on edge ({ga}, {gb}): {} vs {}",
                        w.edges()[ei].stab.text(),
                        e.resolved().text()
                    ));
                }
            }
        }
    }
    for (ei, &n) in edge_hits.iter().enumerate() {
        let e = &w.edges()[ei];
        let droppable = dropped.contains(&e.u) || dropped.contains(&e.v);
        if n == 0 && !droppable {
            detail.push(format!("window edge ({}, {}) is not reached", e.u, e.v));
        }
        if n > 1 {
            detail.push(format!("window edge ({}, {}) is hit {n} times", e.u, e.v));
        }
    }

    Ok(FixedPointReport {
        window_proxy: true,
        equal: detail.is_empty(),
        dropped,
        detail,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct UniqueCollapseReport {
    pub passed: bool,
    pub collapsed_total: usize,
    pub violations: Vec<String>,
}

/// Per cylinder: at most one collapsed incidence, whose stabilizer
/// equals the cylinder stabilizer. Needs the declared hypothesis that
/// cylinder stabilizers meeting an out-of-family incidence fix a
/// vertex, and resolvable handles.
pub fn unique_collapsed_edge_check(w: &GTreeWindow) -> Result<UniqueCollapseReport, TreeError> {
    if !w.declared().cylinder_stabs_elliptic {
        return Err(TreeError::HypothesisNotDeclared(
            "cylinder stabilizers at collapsed incidences are not declared elliptic".into(),
        ));
    }
    let alg = w.algebra();
    let dual = collapsed_tree_of_cylinders(w)?;
    if let Some((x, c)) = dual.unresolved.first() {
        return Err(TreeError::UnresolvedStabilizer(format!(
            "incidence ({x}, cylinder {c}) has unknown family status"
        )));
    }

    let mut per_class: BTreeMap<usize, usize> = BTreeMap::new();
    let mut violations = Vec::new();
    for e in &dual.swallowed {
        *per_class.entry(e.origin.1).or_default() += 1;
        let member = &w.edges()[dual.cylinders[e.origin.1].edges[0]].stab;
        let Some(gy) = w.cylinder_stab_for(member)? else {
            return Err(TreeError::UnresolvedStabilizer(format!(
                "cylinder {} has no declared stabilizer",
                e.origin.1
            )));
        };
        let exact = e.exact.as_ref().expect("collapsed incidences are resolved");
        if !(alg.includes(&gy, exact)? && alg.includes(exact, &gy)?) {
            violations.push(format!(
                "collapsed incidence at cylinder {} has stabilizer {} != {}",
                e.origin.1,
                exact.text(),
                gy.text()
            ));
        }
    }
    for (ci, n) in &per_class {
        if *n > 1 {
            violations.push(format!("cylinder {ci} has {n} collapsed incidences"));
        }
    }

    Ok(UniqueCollapseReport {
        passed: violations.is_empty(),
        collapsed_total: dual.swallowed.len(),
        violations,
    })
}

/// Every vertex-stabilizer handle of `w` sits inside some
/// vertex-stabilizer handle of `w2`.
pub fn dominates(w: &GTreeWindow, w2: &GTreeWindow) -> Result<bool, TreeError> {
    let alg = w.algebra();
    if w.vertex_stabs().is_empty() || w2.vertex_stabs().is_empty() {
        return Err(TreeError::MissingVertexStabs(
            "domination needs vertex stabilizers on both windows".into(),
        ));
    }
    for h in w.vertex_stabs().values() {
        let mut found = false;
        for h2 in w2.vertex_stabs().values() {
            if alg.includes(h2, h)? {
                found = true;
                break;
            }
        }
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn same_deformation_space(w: &GTreeWindow, w2: &GTreeWindow) -> Result<bool, TreeError> {
    Ok(dominates(w, w2)? && dominates(w2, w)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct IdempotenceReport {
    pub equal: bool,
    /// The collapsed tree is a single vertex; rerunning fixes it
    /// trivially.
    pub point: bool,
    pub first: String,
    pub second: String,
}

/// Collapse, reinterpret the result as a window, collapse again, and
/// compare canonical forms.
pub fn idempotence_check(w: &GTreeWindow) -> Result<IdempotenceReport, TreeError> {
    let alg = w.algebra();
    if !sandwich_closed(alg, &w.present_handles())? {
        return Err(TreeError::SandwichClosureUnverified(
            "present handles violate sandwich-closedness".into(),
        ));
    }
    let t1 = collapsed_tree_of_cylinders(w)?;
    if !t1.unresolved.is_empty() {
        return Err(TreeError::UnresolvedEdgeStab(format!(
            "{} incidences have unknown family status",
            t1.unresolved.len()
        )));
    }
    if t1.is_point() {
        let c = t1.canonical_form();
        return Ok(IdempotenceReport {
            equal: true,
            point: true,
            first: c.clone(),
            second: c,
        });
    }
    let w1 = reinterpret_as_window(&t1, w)?;
    let t2 = collapsed_tree_of_cylinders(&w1)?;
    let first = t1.canonical_form();
    let second = t2.canonical_form();
    Ok(IdempotenceReport {
        equal: first == second,
        point: false,
        first,
        second,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RepeatReport {
    pub applicable: bool,
    pub equal: bool,
}

/// When every incidence handle is in the family, rebuilding the dual
/// tree from itself changes nothing.
pub fn repeated_construction_check(w: &GTreeWindow) -> Result<RepeatReport, TreeError> {
    let t = tree_of_cylinders(w)?;
    if t.is_point() {
        return Ok(RepeatReport {
            applicable: true,
            equal: true,
        });
    }
    if !t.edges.iter().all(|e| e.in_family == Some(true)) {
        return Ok(RepeatReport {
            applicable: false,
            equal: false,
        });
    }
    let w1 = reinterpret_as_window(&t, w)?;
    let t2 = tree_of_cylinders(&w1)?;
    Ok(RepeatReport {
        applicable: true,
        equal: t.canonical_form() == t2.canonical_form(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct AxisReport {
    pub witnesses: Vec<String>,
    /// Without a witness nothing is proven; absence is not evidence.
    pub conclusive: bool,
}

/// A generator translating along a path inside a single cylinder
/// witnesses an axis in that cylinder. The test is one-sided.
pub fn axis_witness_report(w: &GTreeWindow) -> Result<AxisReport, TreeError> {
    let cylinders = crate::cylinder::compute_cylinders(w)?;
    let cyl_of_edge: BTreeMap<usize, usize> = cylinders
        .iter()
        .enumerate()
        .flat_map(|(ci, c)| c.edges.iter().map(move |&ei| (ei, ci)))
        .collect();
    let dist = w.distance_matrix();
    let mut witnesses = Vec::new();
    for gener in w.generators() {
        for (&v, &gv) in &gener.vertex_map {
            if v == gv {
                continue;
            }
            let Some(&ggv) = gener.vertex_map.get(&gv) else { continue };
            let (iv, igv, iggv) = (
                w.vertex_index(v).unwrap(),
                w.vertex_index(gv).unwrap(),
                w.vertex_index(ggv).unwrap(),
            );
            if dist[iv][iggv] != 2 * dist[iv][igv] {
                continue;
            }
            let path = w.path_edges(v, ggv);
            let mut ids: Vec<usize> = path.iter().map(|ei| cyl_of_edge[ei]).collect();
            ids.dedup();
            if ids.len() == 1 {
                witnesses.push(format!(
                    "generator {:?} translates {v} by {} inside the cylinder of class {}",
                    gener.name,
                    dist[iv][igv],
                    cylinders[ids[0]].class_rep.text()
                ));
            }
        }
    }
    Ok(AxisReport {
        conclusive: !witnesses.is_empty(),
        witnesses,
    })
}
