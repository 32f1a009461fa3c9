//! Graphviz exports. Labels render the first sixteen characters of a
//! handle; the full text goes into the node tooltip so nothing is lost,
//! just folded.

use std::fmt::Write;

use crate::dual::{BipartiteDualTree, DualKind};
use crate::window::GTreeWindow;
use crate::zgraph::{ZEmbedding, ZKind};

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn clip(s: &str) -> String {
    let mut out: String = s.chars().take(16).collect();
    if s.chars().count() > 16 {
        out.push_str("..");
    }
    out
}

fn fnv1a(s: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in s.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

pub fn window_dot(w: &GTreeWindow) -> String {
    let mut out = String::from("graph window {\n  node [shape=circle];\n");
    for &v in w.vertices() {
        let label = match w.vertex_stab(v) {
            Some(s) => format!("{v}\\n{}", escape(&clip(&s.text()))),
            None => format!("{v}"),
        };
        let tip = w.vertex_stab(v).map(|s| s.text()).unwrap_or_default();
        let extra = if w.is_boundary(v) { ", style=dashed" } else { "" };
        let _ = writeln!(
            out,
            "  v{v} [label=\"{label}\", tooltip=\"{}\"{extra}];",
            escape(&tip)
        );
    }
    for e in w.edges() {
        let _ = writeln!(
            out,
            "  v{} -- v{} [label=\"{}\", tooltip=\"{}\"];",
            e.u,
            e.v,
            escape(&clip(&e.stab.text())),
            escape(&e.stab.text())
        );
    }
    out.push_str("}\n");
    out
}

/// One DOT graph for a dual tree, fresh or collapsed. Points are
/// circles named after their window vertices; cylinders are boxes named
/// by a hash of the class representative so names survive relabeling.
pub fn dual_dot(t: &BipartiteDualTree) -> String {
    let name = |i: usize| -> String {
        let dv = &t.verts[i];
        match dv.kind {
            DualKind::Point => {
                let ids: Vec<String> = dv.window_vertices.iter().map(|v| v.to_string()).collect();
                format!("x{}", ids.join("_"))
            }
            DualKind::Cylinder => {
                let key = dv
                    .class_rep
                    .as_ref()
                    .map(|h| h.text())
                    .unwrap_or_else(|| format!("cyl{i}"));
                format!("Y{:016x}", fnv1a(&key))
            }
        }
    };
    let mut out = String::from("graph dual {\n");
    for (i, dv) in t.verts.iter().enumerate() {
        let (shape, text) = match dv.kind {
            DualKind::Point => (
                "circle",
                dv.stab.as_ref().map(|h| h.text()).unwrap_or_else(|| "?".into()),
            ),
            DualKind::Cylinder => (
                "box",
                dv.class_rep.as_ref().map(|h| h.text()).unwrap_or_else(|| "?".into()),
            ),
        };
        let mark = if dv.truncated { ", style=dotted" } else { "" };
        let _ = writeln!(
            out,
            "  {} [shape={shape}, label=\"{}\", tooltip=\"{}\"{mark}];",
            name(i),
            escape(&clip(&text)),
            escape(&text)
        );
    }
    for e in &t.edges {
        let text = e.resolved().text();
        let style = match e.in_family {
            Some(false) => ", style=bold",
            None => ", style=dashed",
            Some(true) => "",
        };
        let _ = writeln!(
            out,
            "  {} -- {} [label=\"{}\", tooltip=\"{}\"{style}];",
            name(e.a),
            name(e.b),
            escape(&clip(&text)),
            escape(&text)
        );
    }
    out.push_str("}\n");
    out
}

/// The algebraic graph with the dual-tree image highlighted.
pub fn zgraph_dot(emb: &ZEmbedding) -> String {
    let g = &emb.graph;
    let in_img_v = emb.image_vertices();
    let in_img_e = emb.image_edges();
    let mut out = String::from("graph zgraph {\n");
    for (i, zv) in g.verts.iter().enumerate() {
        let shape = match zv.kind {
            ZKind::Elliptic => "circle",
            ZKind::Class => "box",
        };
        let hl = if in_img_v.contains(&i) {
            ", penwidth=2, color=blue"
        } else {
            ""
        };
        let text = g.label(i);
        let _ = writeln!(
            out,
            "  z{i} [shape={shape}, label=\"{}\", tooltip=\"{}\"{hl}];",
            escape(&clip(&text)),
            escape(&text)
        );
    }
    for (k, &(a, b)) in g.edges.iter().enumerate() {
        let hl = if in_img_e.contains(&k) {
            " [penwidth=2, color=blue]"
        } else {
            ""
        };
        let _ = writeln!(out, "  z{a} -- z{b}{hl};");
    }
    out.push_str("}\n");
    out
}
