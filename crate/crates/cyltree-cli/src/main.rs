//! Command line front end. Reads instance files, runs the library
//! operations, and emits JSON reports plus optional DOT drawings.
//!
//! Exit codes: 0 when every requested check passes, 1 when a check
//! finds violations, 2 when an input cannot be parsed or an operation
//! lacks a required capability or declaration. Failures print a
//! machine-readable error object. Outputs depend only on the arguments,
//! the input bytes and the seed.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cyltree::algebra::BackendId;
use cyltree::analysis::{
    acylindricity_check, axis_witness_report, cylinder_diameter_report, diameter_two_check,
    dominates, fixed_point_check, idempotence_check, repeated_construction_check,
    unique_collapsed_edge_check, AcylMode,
};
use cyltree::cylinder::{compute_cylinders, junction_vertices, Cylinder};
use cyltree::dual::{collapsed_tree_of_cylinders, tree_of_cylinders, BipartiteDualTree, DualKind};
use cyltree::equivariant::EquivariantMap;
use cyltree::error::TreeError;
use cyltree::generate::{generate_pair, generate_window, GeneratorSpec};
use cyltree::induced::{constant_or_injective_on_cylinders, induced_map};
use cyltree::instance::{parse_window, window_to_value};
use cyltree::refine::blowup_refinement;
use cyltree::validate::{validate_admissibility, validate_window};
use cyltree::window::GTreeWindow;
use cyltree::zgraph::{embedding_j, segment5_check, zgraph_lemma_report, ZEmbedding, ZKind};

#[derive(Parser)]
#[command(name = "cyltree", version, about = "Trees of cylinders for windowed group trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Backend {
    W,
    L,
    P,
}

impl From<Backend> for BackendId {
    fn from(b: Backend) -> BackendId {
        match b {
            Backend::W => BackendId::W,
            Backend::L => BackendId::L,
            Backend::P => BackendId::P,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Structural and admissibility validation
    Validate {
        input: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// List cylinders, boundaries and junction vertices
    Cylinders {
        input: PathBuf,
        #[command(flatten)]
        output: Output,
        /// Draw the window tree with class-labeled edges
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Build the bipartite dual tree
    Toc {
        input: PathBuf,
        #[command(flatten)]
        output: Output,
        /// Draw the dual tree
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Build the dual tree and contract out-of-family incidences
    Collapse {
        input: PathBuf,
        #[command(flatten)]
        output: Output,
        /// Draw the collapsed dual tree
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Build the graph of classes and stabilizers with the dual embedding
    Zgraph {
        input: PathBuf,
        #[command(flatten)]
        output: Output,
        /// Draw the graph; image cells are drawn bold
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Examine an equivariant map between two instances
    Map {
        source: PathBuf,
        target: PathBuf,
        /// JSON file with a vertex_map object
        map: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Blow a collapse map up to a common refinement
    Refine {
        source: PathBuf,
        target: PathBuf,
        /// JSON file with a vertex_map object
        map: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Run diagnostic checks on one instance, or on every instance in
    /// CYLTREE_FIXTURES when no input is given
    Analyze {
        input: Option<PathBuf>,
        /// Check name, or "all" for the standing battery
        #[arg(long, default_value = "all")]
        check: String,
        #[command(flatten)]
        output: Output,
    },
    /// Emit a seeded instance, or a window pair joined by a move script
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum)]
        backend: Backend,
        /// Emit two windows and the elementary moves between them
        #[arg(long)]
        pairs: bool,
        #[arg(long, default_value_t = 24)]
        max_vertices: usize,
        #[arg(long, default_value_t = 4)]
        moves: usize,
        #[command(flatten)]
        output: Output,
    },
}

enum Failure {
    Tree(TreeError),
    Io(String),
}

impl From<TreeError> for Failure {
    fn from(e: TreeError) -> Failure {
        Failure::Tree(e)
    }
}

impl Failure {
    fn exit(&self) -> u8 {
        match self {
            Failure::Tree(e) if e.is_capability() => 2,
            Failure::Tree(_) => 1,
            Failure::Io(_) => 2,
        }
    }

    fn object(&self) -> Value {
        let (kind, message) = match self {
            Failure::Tree(e) => {
                let text = e.to_string();
                let kind = text.split(':').next().unwrap_or("Error").to_string();
                (kind, text)
            }
            Failure::Io(m) => ("IoError".to_string(), m.clone()),
        };
        json!({ "error": { "kind": kind, "message": message, "exit": self.exit() } })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            println!("{:#}", f.object());
            ExitCode::from(f.exit())
        }
    }
}

/// Missing paths are retried under CYLTREE_FIXTURES.
fn resolve(path: &Path) -> PathBuf {
    if path.exists() {
        return path.to_owned();
    }
    if let Ok(dir) = std::env::var("CYLTREE_FIXTURES") {
        let alt = Path::new(&dir).join(path);
        if alt.exists() {
            return alt;
        }
    }
    path.to_owned()
}

fn read_window(path: &Path) -> Result<GTreeWindow, Failure> {
    let p = resolve(path);
    let text = fs::read_to_string(&p)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", p.display())))?;
    Ok(parse_window(&text)?)
}

fn read_map(path: &Path) -> Result<EquivariantMap, Failure> {
    let p = resolve(path);
    let text = fs::read_to_string(&p)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", p.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::Tree(TreeError::Parse(format!("map file: {e}"))))
}

fn write_atomic(path: &Path, text: &str) -> Result<(), Failure> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", tmp.display())))?;
    fs::rename(&tmp, path)
        .map_err(|e| Failure::Io(format!("cannot move into {}: {e}", path.display())))
}

fn emit(report: &Value, output: &Output) -> Result<(), Failure> {
    let text = format!("{report:#}\n");
    match &output.out {
        None => print!("{text}"),
        Some(p) => write_atomic(p, &text)?,
    }
    Ok(())
}

fn emit_dot(dot: &Option<PathBuf>, text: String) -> Result<(), Failure> {
    if let Some(p) = dot {
        write_atomic(p, &text)?;
    }
    Ok(())
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Validate { input, output } => {
            let w = read_window(&input)?;
            let wr = validate_window(&w)?;
            let ar = validate_admissibility(&w)?;
            let ok = wr.is_empty() && ar.is_empty();
            let report = json!({
                "command": "validate",
                "ok": ok,
                "window": wr,
                "admissibility": ar,
            });
            emit(&report, &output)?;
            Ok(if ok { 0 } else { 1 })
        }
        Command::Cylinders { input, output, dot } => {
            let w = read_window(&input)?;
            let cyls = compute_cylinders(&w)?;
            let entries: Vec<Value> = cyls
                .iter()
                .map(|c| {
                    json!({
                        "class": c.class_rep.text(),
                        "edges": c.edges,
                        "vertices": c.vertices,
                        "boundary": c.boundary,
                        "diameter": c.diameter(&w),
                        "truncated": c.truncated,
                    })
                })
                .collect();
            let report = json!({
                "command": "cylinders",
                "count": cyls.len(),
                "cylinders": entries,
                "junctions": junction_vertices(&cyls),
            });
            emit_dot(&dot, window_dot(&w, &cyls))?;
            emit(&report, &output)?;
            Ok(0)
        }
        Command::Toc { input, output, dot } => {
            let w = read_window(&input)?;
            let t = tree_of_cylinders(&w)?;
            emit_dot(&dot, dual_dot(&t))?;
            emit(&dual_report("toc", &t), &output)?;
            Ok(0)
        }
        Command::Collapse { input, output, dot } => {
            let w = read_window(&input)?;
            let t = collapsed_tree_of_cylinders(&w)?;
            emit_dot(&dot, dual_dot(&t))?;
            emit(&dual_report("collapse", &t), &output)?;
            Ok(0)
        }
        Command::Zgraph { input, output, dot } => {
            let w = read_window(&input)?;
            let emb = embedding_j(&w)?;
            let verts: Vec<Value> = emb
                .graph
                .verts
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    json!({
                        "label": emb.graph.label(i),
                        "kind": match v.kind { ZKind::Elliptic => "elliptic", ZKind::Class => "class" },
                        "members": v.members.iter().map(|m| m.text()).collect::<Vec<_>>(),
                        "window_vertices": v.window_vertices,
                    })
                })
                .collect();
            let verified = emb.verified();
            let report = json!({
                "command": "zgraph",
                "nodes": verts,
                "edges": emb.graph.edges,
                "embedding": {
                    "verified": verified,
                    "vertex_map": emb.vertex_map,
                    "edge_map": emb.edge_map,
                    "failures": emb.failures,
                },
            });
            emit_dot(&dot, zgraph_dot(&emb))?;
            emit(&report, &output)?;
            Ok(if verified { 0 } else { 1 })
        }
        Command::Map { source, target, map, output } => {
            let w = read_window(&source)?;
            let w2 = read_window(&target)?;
            let f = read_map(&map)?;
            f.validate(&w, &w2)?;
            let cellular = f.is_cellular(&w, &w2)?;
            let collapse = f.is_collapse_map(&w, &w2)?;
            let fibers = constant_or_injective_on_cylinders(&f, &w)?;
            let domination = match dominates(&w, &w2) {
                Ok(b) => json!(b),
                Err(e) if e.is_capability() => json!({ "unavailable": e.to_string() }),
                Err(e) => return Err(e.into()),
            };
            let induced = match induced_map(&f, &w, &w2) {
                Ok(im) => json!({
                    "source_nodes": im.source.verts.len(),
                    "target_nodes": im.target.verts.len(),
                    "vertex_map": im.map.vertex_map,
                }),
                Err(e) if e.is_capability() => return Err(e.into()),
                Err(e) => json!({ "error": e.to_string() }),
            };
            let report = json!({
                "command": "map",
                "cellular": cellular,
                "collapse_map": collapse,
                "constant_or_injective_on_cylinders": fibers,
                "dominates": domination,
                "induced": induced,
            });
            emit(&report, &output)?;
            Ok(if collapse { 0 } else { 1 })
        }
        Command::Refine { source, target, map, output } => {
            let w = read_window(&source)?;
            let w2 = read_window(&target)?;
            let f = read_map(&map)?;
            let r = blowup_refinement(&w, &w2, &f)?;
            let ok = r.recovered_dual && r.recovered_target;
            let report = json!({
                "command": "refine",
                "recovered_dual": r.recovered_dual,
                "recovered_target": r.recovered_target,
                "refined": window_to_value(&r.refined),
                "dual_window": window_to_value(&r.dual_window),
                "to_dual": r.to_dual,
                "to_target": r.to_target,
                "parts": r.parts,
                "added": r.added,
            });
            emit(&report, &output)?;
            Ok(if ok { 0 } else { 1 })
        }
        Command::Analyze { input, check, output } => match input {
            Some(path) => {
                let w = read_window(&path)?;
                let (checks, ok) = analyze_window(&w, &check)?;
                let report = json!({ "command": "analyze", "ok": ok, "checks": checks });
                emit(&report, &output)?;
                Ok(if ok { 0 } else { 1 })
            }
            None => {
                let dir = std::env::var("CYLTREE_FIXTURES").map_err(|_| {
                    Failure::Io("no input file and CYLTREE_FIXTURES is unset".into())
                })?;
                let mut names: Vec<PathBuf> = fs::read_dir(&dir)
                    .map_err(|e| Failure::Io(format!("cannot list {dir}: {e}")))?
                    .filter_map(|entry| entry.ok().map(|d| d.path()))
                    .filter(|p| p.extension().is_some_and(|x| x == "json"))
                    .collect();
                names.sort();
                let mut fixtures = Vec::new();
                let mut all_ok = true;
                for path in names {
                    let w = read_window(&path)?;
                    let (checks, ok) = analyze_window(&w, &check)?;
                    all_ok &= ok;
                    let stem = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
                    fixtures.push(json!({ "fixture": stem, "ok": ok, "checks": checks }));
                }
                let report = json!({ "command": "analyze", "ok": all_ok, "fixtures": fixtures });
                emit(&report, &output)?;
                Ok(if all_ok { 0 } else { 1 })
            }
        },
        Command::Gen { seed, backend, pairs, max_vertices, moves, output } => {
            let spec = GeneratorSpec {
                seed,
                backend: backend.into(),
                max_vertices: max_vertices.min(64),
                moves,
            };
            let report = if pairs {
                let (base, script, other) = generate_pair(&spec)?;
                json!({
                    "command": "gen",
                    "seed": seed,
                    "pairs": true,
                    "base": window_to_value(&base),
                    "moves": script,
                    "result": window_to_value(&other),
                })
            } else {
                window_to_value(&generate_window(&spec)?)
            };
            emit(&report, &output)?;
            Ok(0)
        }
    }
}

/// The standing battery. Checks that assert a specific claim about the
/// window (fixed_point) run only when named.
const BATTERY: &[&str] = &[
    "acylindricity",
    "diameter",
    "diameter_two",
    "idempotence",
    "repeat",
    "unique_collapse",
    "segment5",
    "lemma",
    "axis",
];

/// Inconclusive: the window cannot show the property either way, most
/// often because a boundary hides part of the picture. Nothing failed,
/// nothing is certified.
#[derive(Copy, Clone, PartialEq, Eq)]
enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    fn of(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    fn caveated(ok: bool, caveat: bool) -> Verdict {
        match (ok, caveat) {
            (true, _) => Verdict::Pass,
            (false, true) => Verdict::Inconclusive,
            (false, false) => Verdict::Fail,
        }
    }

    fn status(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

fn run_check(w: &GTreeWindow, name: &str) -> Result<(Value, Verdict), TreeError> {
    match name {
        "acylindricity" => {
            let r = acylindricity_check(w, 2, AcylMode::Almost)?;
            let v = Verdict::of(r.passed);
            Ok((serde_json::to_value(r).unwrap(), v))
        }
        "diameter" => {
            let r = cylinder_diameter_report(w)?;
            Ok((serde_json::to_value(r).unwrap(), Verdict::Pass))
        }
        "diameter_two" => {
            let t = collapsed_tree_of_cylinders(w)?;
            let r = diameter_two_check(&t, w)?;
            let v = Verdict::of(r.all_at_most_two);
            Ok((serde_json::to_value(r).unwrap(), v))
        }
        "idempotence" => {
            let r = idempotence_check(w)?;
            let v = Verdict::of(r.equal);
            Ok((serde_json::to_value(r).unwrap(), v))
        }
        "repeat" => {
            let r = repeated_construction_check(w)?;
            let v = Verdict::of(!r.applicable || r.equal);
            Ok((serde_json::to_value(r).unwrap(), v))
        }
        "fixed_point" => {
            let r = fixed_point_check(w)?;
            let v = Verdict::of(r.equal);
            Ok((serde_json::to_value(r).unwrap(), v))
        }
        "unique_collapse" => {
            let r = unique_collapsed_edge_check(w)?;
            let v = Verdict::of(r.passed);
            Ok((serde_json::to_value(r).unwrap(), v))
        }
        "segment5" => {
            let r = segment5_check(w)?;
            let v = Verdict::caveated(r.equal, r.truncation_caveat);
            Ok((serde_json::to_value(r).unwrap(), v))
        }
        "lemma" => {
            let r = zgraph_lemma_report(w)?;
            let ok = r.class_valence
                && r.adjacency_locates
                && r.elliptic_neighbours
                && r.edge_endpoints;
            let v = Verdict::caveated(ok, r.truncation_caveat);
            Ok((serde_json::to_value(r).unwrap(), v))
        }
        "axis" => {
            let r = axis_witness_report(w)?;
            let v = Verdict::of(r.witnesses.is_empty());
            Ok((serde_json::to_value(r).unwrap(), v))
        }
        other => Err(TreeError::Parse(format!("unknown check: {other}"))),
    }
}

/// A named check propagates its errors. In battery mode a check that
/// refuses to run (missing declaration or capability) is recorded as
/// unavailable instead; the corpus mixes backends and declarations, and
/// a refusal is not a finding.
fn analyze_window(w: &GTreeWindow, check: &str) -> Result<(Value, bool), Failure> {
    if check != "all" {
        let (report, v) = run_check(w, check)?;
        let status = json!({ check: { "status": v.status(), "report": report } });
        return Ok((status, v != Verdict::Fail));
    }
    let mut out = serde_json::Map::new();
    let mut all_ok = true;
    for name in BATTERY {
        match run_check(w, name) {
            Ok((report, v)) => {
                all_ok &= v != Verdict::Fail;
                out.insert(
                    name.to_string(),
                    json!({ "status": v.status(), "report": report }),
                );
            }
            Err(e) if e.is_capability() => {
                out.insert(
                    name.to_string(),
                    json!({ "status": "unavailable", "error": e.to_string() }),
                );
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok((Value::Object(out), all_ok))
}

fn dual_report(command: &str, t: &BipartiteDualTree) -> Value {
    json!({
        "command": command,
        "nodes": t.verts.len(),
        "edges": t.edges.len(),
        "canonical": t.canonical_form(),
        "collapsed": t.collapsed,
        "swallowed": t.swallowed,
        "unresolved": t.unresolved,
        "tree": t,
    })
}

/// First 16 characters; the full payload goes into the tooltip.
fn clip(s: &str) -> String {
    s.chars().take(16).collect()
}

fn esc(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn window_dot(w: &GTreeWindow, cyls: &[Cylinder]) -> String {
    let mut s = String::from("graph window {\n");
    for &v in w.vertices() {
        let shape = if w.is_boundary(v) { "doublecircle" } else { "circle" };
        let tip = w
            .vertex_stab(v)
            .map(|h| h.text())
            .unwrap_or_else(|| "no stabilizer".into());
        s.push_str(&format!(
            "  v{v} [shape={shape}, label=\"{v}\", tooltip=\"{}\"];\n",
            esc(&tip)
        ));
    }
    let class_of_edge: std::collections::BTreeMap<usize, String> = cyls
        .iter()
        .flat_map(|c| c.edges.iter().map(|&ei| (ei, c.class_rep.text())))
        .collect();
    for (ei, e) in w.edges().iter().enumerate() {
        let full = class_of_edge.get(&ei).cloned().unwrap_or_default();
        s.push_str(&format!(
            "  v{} -- v{} [label=\"{}\", tooltip=\"{}\"];\n",
            e.u,
            e.v,
            esc(&clip(&full)),
            esc(&full)
        ));
    }
    s.push_str("}\n");
    s
}

fn dual_dot(t: &BipartiteDualTree) -> String {
    let mut s = String::from("graph dual {\n");
    for (i, v) in t.verts.iter().enumerate() {
        match v.kind {
            DualKind::Point => {
                let label = v
                    .window_vertices
                    .iter()
                    .map(u32::to_string)
                    .collect::<Vec<_>>()
                    .join("+");
                s.push_str(&format!("  n{i} [shape=circle, label=\"{}\"];\n", esc(&label)));
            }
            DualKind::Cylinder => {
                let full = v.class_rep.as_ref().map(|h| h.text()).unwrap_or_default();
                s.push_str(&format!(
                    "  n{i} [shape=box, label=\"{}\", tooltip=\"{}\"];\n",
                    esc(&clip(&full)),
                    esc(&full)
                ));
            }
        }
    }
    for e in &t.edges {
        let full = e.resolved().text();
        s.push_str(&format!(
            "  n{} -- n{} [label=\"{}\", tooltip=\"{}\"];\n",
            e.a,
            e.b,
            esc(&clip(&full)),
            esc(&full)
        ));
    }
    s.push_str("}\n");
    s
}

fn zgraph_dot(emb: &ZEmbedding) -> String {
    let image_verts = emb.image_vertices();
    let image_edges = emb.image_edges();
    let mut s = String::from("graph zgraph {\n");
    for (i, v) in emb.graph.verts.iter().enumerate() {
        let shape = match v.kind {
            ZKind::Elliptic => "ellipse",
            ZKind::Class => "box",
        };
        let bold = if image_verts.contains(&i) { ", penwidth=2" } else { "" };
        let full = emb.graph.label(i);
        s.push_str(&format!(
            "  z{i} [shape={shape}, label=\"{}\", tooltip=\"{}\"{bold}];\n",
            esc(&clip(&full)),
            esc(&full)
        ));
    }
    for (ei, &(a, b)) in emb.graph.edges.iter().enumerate() {
        let bold = if image_edges.contains(&ei) { " [penwidth=2]" } else { "" };
        s.push_str(&format!("  z{a} -- z{b}{bold};\n"));
    }
    s.push_str("}\n");
    s
}
