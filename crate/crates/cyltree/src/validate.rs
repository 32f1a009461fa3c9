//! Structural and relational validation of windows.
//!
//! `validate_window` checks the shape: tree-ness, family membership of
//! edge handles, vertex stabilizers containing incident edge
//! stabilizers, and declared automorphisms acting correctly on handles.
//!
//! `validate_admissibility` checks the equivalence relation against the
//! window data: conjugation invariance through the declared generators,
//! inclusion forcing equivalence, and the segment condition (every edge
//! on a path between two vertices carrying equivalent family handles is
//! itself in that class).

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::StabilizerHandle;
use crate::error::TreeError;
use crate::window::{GTreeWindow, VertexId};

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind")]
pub enum Violation {
    NotATree { detail: String },
    NotInFamily { edge: (VertexId, VertexId), stab: String },
    StabInclusion { vertex: VertexId, edge: (VertexId, VertexId) },
    AutomorphismViolation { name: String, detail: String },
    Axiom1Violation { generator: String, a: String, b: String },
    Axiom2Violation { a: String, b: String },
    Axiom3Violation { a: VertexId, b: VertexId, edge: (VertexId, VertexId) },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::NotATree { detail } => write!(f, "NotATree: {detail}"),
            Violation::NotInFamily { edge, stab } => {
                write!(f, "NotInFamily: edge ({}, {}) carries {stab}", edge.0, edge.1)
            }
            Violation::StabInclusion { vertex, edge } => write!(
                f,
                "StabInclusion: vertex {vertex} stab misses edge ({}, {})",
                edge.0, edge.1
            ),
            Violation::AutomorphismViolation { name, detail } => {
                write!(f, "AutomorphismViolation[{name}]: {detail}")
            }
            Violation::Axiom1Violation { generator, a, b } => {
                write!(f, "Axiom1Violation[{generator}]: {a} ~ {b} not preserved")
            }
            Violation::Axiom2Violation { a, b } => {
                write!(f, "Axiom2Violation: {a} inside {b} but inequivalent")
            }
            Violation::Axiom3Violation { a, b, edge } => write!(
                f,
                "Axiom3Violation: path {a}..{b} leaves the class at ({}, {})",
                edge.0, edge.1
            ),
        }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_window(w: &GTreeWindow) -> Result<ValidationReport, TreeError> {
    let mut report = ValidationReport::default();
    let alg = w.algebra();

    if !w.is_tree() {
        report.violations.push(Violation::NotATree {
            detail: format!("{} vertices, {} edges", w.vertices().len(), w.edges().len()),
        });
    }

    for e in w.edges() {
        if !alg.in_family(&e.stab)? {
            report.violations.push(Violation::NotInFamily {
                edge: e.key(),
                stab: e.stab.text(),
            });
        }
    }

    for (&v, stab) in w.vertex_stabs() {
        for e in w.edges() {
            if (e.u == v || e.v == v) && !alg.includes(stab, &e.stab)? {
                report
                    .violations
                    .push(Violation::StabInclusion { vertex: v, edge: e.key() });
            }
        }
    }

    for g in w.generators() {
        for e in w.edges() {
            let (Some(&iu), Some(&iv)) = (g.vertex_map.get(&e.u), g.vertex_map.get(&e.v)) else {
                continue;
            };
            let Some(img) = w.edge_between(iu, iv) else {
                report.violations.push(Violation::AutomorphismViolation {
                    name: g.name.clone(),
                    detail: format!("edge ({}, {}) maps to the non-edge ({iu}, {iv})", e.u, e.v),
                });
                continue;
            };
            match alg.conjugate(&g.name, &e.stab) {
                Ok(conj) => {
                    if conj != w.edges()[img].stab {
                        report.violations.push(Violation::AutomorphismViolation {
                            name: g.name.clone(),
                            detail: format!(
                                "stab of image of ({}, {}) is {}, expected {}",
                                e.u,
                                e.v,
                                w.edges()[img].stab.text(),
                                conj.text()
                            ),
                        });
                    }
                }
                Err(err) => {
                    report.violations.push(Violation::AutomorphismViolation {
                        name: g.name.clone(),
                        detail: err.to_string(),
                    });
                }
            }
        }
    }

    Ok(report)
}

/// Class keys for the in-family handles among `handles`, computed once
/// so the axiom checks are lookups.
fn class_keys(
    w: &GTreeWindow,
    handles: &[StabilizerHandle],
) -> Result<BTreeMap<StabilizerHandle, String>, TreeError> {
    let alg = w.algebra();
    let mut map = BTreeMap::new();
    for h in handles {
        if alg.in_family(h)? {
            map.insert(h.clone(), alg.class_representative(h)?.text());
        }
    }
    Ok(map)
}

pub fn validate_admissibility(w: &GTreeWindow) -> Result<ValidationReport, TreeError> {
    let mut report = ValidationReport::default();
    let alg = w.algebra();
    let present = w.present_handles();
    let classes = class_keys(w, &present)?;
    let family: Vec<&StabilizerHandle> = classes.keys().collect();

    // conjugation invariance through every declared generator
    for g in w.generators() {
        for (i, &a) in family.iter().enumerate() {
            for &b in &family[i + 1..] {
                if classes[a] != classes[b] {
                    continue;
                }
                let (ca, cb) = match (alg.conjugate(&g.name, a), alg.conjugate(&g.name, b)) {
                    (Ok(ca), Ok(cb)) => (ca, cb),
                    _ => {
                        report.violations.push(Violation::Axiom1Violation {
                            generator: g.name.clone(),
                            a: a.text(),
                            b: b.text(),
                        });
                        continue;
                    }
                };
                let ok = alg.in_family(&ca)?
                    && alg.in_family(&cb)?
                    && alg.equivalent(&ca, &cb)?;
                if !ok {
                    report.violations.push(Violation::Axiom1Violation {
                        generator: g.name.clone(),
                        a: a.text(),
                        b: b.text(),
                    });
                }
            }
        }
    }

    // inclusion forces equivalence
    for &a in &family {
        for &b in &family {
            if a != b && alg.includes(a, b)? && classes[a] != classes[b] {
                report.violations.push(Violation::Axiom2Violation {
                    a: b.text(),
                    b: a.text(),
                });
            }
        }
    }
    for (sub, sup) in alg.declared_order_conflicts() {
        report.violations.push(Violation::Axiom2Violation { a: sub, b: sup });
    }

    // segment condition, on vertex pairs carrying equivalent handles
    if w.is_tree() {
        let mut anchors: Vec<(VertexId, String)> = Vec::new();
        for &v in w.vertices() {
            let mut keys: Vec<String> = Vec::new();
            if let Some(stab) = w.vertex_stab(v) {
                if let Some(k) = classes.get(stab) {
                    keys.push(k.clone());
                }
            }
            for e in w.edges() {
                if e.u == v || e.v == v {
                    if let Some(k) = classes.get(&e.stab) {
                        keys.push(k.clone());
                    }
                }
            }
            keys.sort();
            keys.dedup();
            for k in keys {
                anchors.push((v, k));
            }
        }
        let edge_class: Vec<Option<&String>> =
            w.edges().iter().map(|e| classes.get(&e.stab)).collect();
        for (i, (va, ka)) in anchors.iter().enumerate() {
            for (vb, kb) in &anchors[i + 1..] {
                if va == vb || ka != kb {
                    continue;
                }
                for ei in w.path_edges(*va, *vb) {
                    if edge_class[ei] != Some(ka) {
                        report.violations.push(Violation::Axiom3Violation {
                            a: *va,
                            b: *vb,
                            edge: w.edges()[ei].key(),
                        });
                    }
                }
            }
        }
    }

    Ok(report)
}
