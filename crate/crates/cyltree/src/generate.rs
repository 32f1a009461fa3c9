//! Seeded fixture generator for the property suites.
//!
//! Windows come out admissible by construction: the skeleton is grown
//! cylinder by cylinder, each cylinder a connected subtree attached to
//! one existing vertex, and classes are assigned afterwards, one per
//! cylinder. The same seed always yields the same window, byte for
//! byte.
//!
//! Collapse material (a class whose declared stabilizer falls outside
//! the family) is planted only on single-edge leaf cylinders hanging
//! off a vertex that meets at least three cylinders. Smaller junctions
//! would not survive the collapse as junctions, which would make the
//! collapsed dual tree unstable under reconstruction.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Algebra, AlgebraConfig, BackendId, RawDatum, StabilizerHandle};
use crate::algebra::partition::TableSpec;
use crate::equivariant::EquivariantMap;
use crate::error::TreeError;
use crate::moves::{elementary_move, MoveSpec};
use crate::window::{GTreeWindow, TreeAutomorphism, VertexId, WindowBuilder};

#[derive(Debug, Clone)]
pub struct GeneratorSpec {
    pub seed: u64,
    pub backend: BackendId,
    /// Hard cap 64; the skeleton stays well under it by default.
    pub max_vertices: usize,
    /// Length of the move script in pair mode, capped at 4.
    pub moves: usize,
}

impl GeneratorSpec {
    pub fn new(seed: u64, backend: BackendId) -> GeneratorSpec {
        GeneratorSpec {
            seed,
            backend,
            max_vertices: 24,
            moves: 4,
        }
    }
}

const WORD_ROOTS: [&str; 8] = ["a", "b", "ab", "aab", "abb", "aabb", "aaab", "abbb"];
const LINES: [(i64, i64); 8] = [
    (1, 0),
    (0, 1),
    (1, 1),
    (1, -1),
    (2, 1),
    (1, 2),
    (3, 1),
    (1, 3),
];

struct Shape {
    n: VertexId,
    /// (parent, child, cylinder id); children are fresh, so this is a tree.
    edges: Vec<(VertexId, VertexId, usize)>,
    cyls: usize,
    /// Designated collapse instance: (cylinder id, junction vertex).
    collapse: Option<(usize, VertexId)>,
}

impl Shape {
    fn classes_at(&self, v: VertexId) -> BTreeSet<usize> {
        self.edges
            .iter()
            .filter(|(a, b, _)| *a == v || *b == v)
            .map(|(_, _, c)| *c)
            .collect()
    }

    fn incident(&self, v: VertexId) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, (a, b, _))| *a == v || *b == v)
            .map(|(ei, (_, _, c))| (ei, *c))
            .collect()
    }
}

fn skeleton(rng: &mut ChaCha8Rng, budget: VertexId, want_collapse: bool) -> Shape {
    let budget = budget.clamp(2, 64);
    let m = 1 + rng.gen_range(0..4usize);
    let mut edges = Vec::new();
    let mut n: VertexId = 1;
    let mut cyls = 0usize;
    for i in 0..m {
        if n >= budget {
            break;
        }
        let root = if i == 0 { 0 } else { rng.gen_range(0..n) };
        let mut members = vec![root];
        let grow = 1 + rng.gen_range(0..3usize);
        let mut grew = false;
        for _ in 0..grow {
            if n >= budget {
                break;
            }
            let parent = members[rng.gen_range(0..members.len())];
            edges.push((parent, n, cyls));
            members.push(n);
            n += 1;
            grew = true;
        }
        if grew {
            cyls += 1;
        }
    }
    if cyls == 0 {
        edges.push((0, 1, 0));
        n = 2;
        cyls = 1;
    }
    let mut shape = Shape {
        n,
        edges,
        cyls,
        collapse: None,
    };
    if want_collapse && rng.gen_range(0..3) == 0 {
        let x = rng.gen_range(0..shape.n);
        let have = shape.classes_at(x).len();
        let need = (3usize.saturating_sub(have)).max(1);
        if shape.n + (need as VertexId) <= budget {
            for _ in 0..need {
                shape.edges.push((x, shape.n, shape.cyls));
                shape.n += 1;
                shape.cyls += 1;
            }
            shape.collapse = Some((shape.cyls - 1, x));
        }
    }
    shape
}

fn pick_distinct(rng: &mut ChaCha8Rng, pool: usize, count: usize) -> Vec<usize> {
    let mut left: Vec<usize> = (0..pool).collect();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        out.push(left.remove(rng.gen_range(0..left.len())));
    }
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Edge multipliers: the first edge of every cylinder gets 1, so the
/// cylinder exhibits its class representative somewhere in the window.
fn multipliers(rng: &mut ChaCha8Rng, shape: &Shape) -> Vec<u64> {
    let mut seen = vec![false; shape.cyls];
    shape
        .edges
        .iter()
        .map(|&(_, _, c)| {
            if seen[c] {
                1 + rng.gen_range(0..3u64)
            } else {
                seen[c] = true;
                1
            }
        })
        .collect()
}

fn junction_set(shape: &Shape) -> BTreeSet<VertexId> {
    (0..shape.n)
        .filter(|&v| shape.classes_at(v).len() >= 2)
        .collect()
}

fn realize_w(shape: &Shape, rng: &mut ChaCha8Rng) -> Result<GTreeWindow, TreeError> {
    let alg = Arc::new(Algebra::new(AlgebraConfig::W { rank: 2 })?);
    let word = |root: &str, k: u64| -> Result<StabilizerHandle, TreeError> {
        Ok(alg.normalize(&RawDatum::Text(root.repeat(k as usize)))?)
    };
    let roots: Vec<&str> = pick_distinct(rng, WORD_ROOTS.len(), shape.cyls)
        .into_iter()
        .map(|i| WORD_ROOTS[i])
        .collect();
    let ks = multipliers(rng, shape);
    let junctions = junction_set(shape);

    let mut b = WindowBuilder::new(alg.clone());
    for v in 0..shape.n {
        b.vertex(v);
    }
    for (ei, &(u, v, c)) in shape.edges.iter().enumerate() {
        b.edge(u, v, word(roots[c], ks[ei])?);
    }
    for v in 0..shape.n {
        if junctions.contains(&v) {
            b.small_declared.insert(v, false);
            let mut per_class: BTreeMap<usize, u64> = BTreeMap::new();
            for (ei, c) in shape.incident(v) {
                let g = per_class.entry(c).or_insert(0);
                *g = gcd(*g, ks[ei]);
            }
            for (c, g) in per_class {
                b.dual_edge_stabs
                    .push((v, word(roots[c], 1)?, word(roots[c], g)?));
            }
        } else {
            let mut g = 0u64;
            let mut class = 0usize;
            for (ei, c) in shape.incident(v) {
                g = gcd(g, ks[ei]);
                class = c;
            }
            b.vertex_stabs.insert(v, word(roots[class], g)?);
        }
    }
    for c in 0..shape.cyls {
        b.cylinder_stabs.push((word(roots[c], 1)?, word(roots[c], 1)?));
    }
    if rng.gen_range(0..4) == 0 {
        let v = rng.gen_range(0..shape.n);
        b.relative_marks.push(BTreeSet::from([v]));
    }
    b.declared.cylinder_stabs_elliptic = true;
    b.build()
}

fn realize_l(shape: &Shape, rng: &mut ChaCha8Rng) -> Result<GTreeWindow, TreeError> {
    let alg = Arc::new(Algebra::new(AlgebraConfig::L {
        dim: 2,
        family_rank: Some(1),
    })?);
    let lat = |rows: Vec<Vec<i64>>| -> Result<StabilizerHandle, TreeError> {
        Ok(alg.normalize(&RawDatum::Rows(rows))?)
    };
    let lines: Vec<(i64, i64)> = pick_distinct(rng, LINES.len(), shape.cyls)
        .into_iter()
        .map(|i| LINES[i])
        .collect();
    let ks = multipliers(rng, shape);
    let junctions = junction_set(shape);
    let row = |c: usize, k: i64| -> Vec<i64> { vec![k * lines[c].0, k * lines[c].1] };
    let gy_extra: Option<(usize, Vec<i64>)> = shape.collapse.map(|(c, _)| {
        let s = 2 + rng.gen_range(0..2i64);
        (c, vec![-s * lines[c].1, s * lines[c].0])
    });

    let mut b = WindowBuilder::new(alg.clone());
    for v in 0..shape.n {
        b.vertex(v);
    }
    for (ei, &(u, v, c)) in shape.edges.iter().enumerate() {
        b.edge(u, v, lat(vec![row(c, ks[ei] as i64)])?);
    }
    for v in 0..shape.n {
        if junctions.contains(&v) {
            let mut rows: Vec<Vec<i64>> = shape
                .classes_at(v)
                .into_iter()
                .map(|c| row(c, 1))
                .collect();
            if let (Some((cc, extra)), Some((_, jx))) = (&gy_extra, &shape.collapse) {
                if *jx == v && shape.classes_at(v).contains(cc) {
                    rows.push(extra.clone());
                }
            }
            b.vertex_stabs.insert(v, lat(rows)?);
        } else {
            let mut g = 0u64;
            let mut class = 0usize;
            for (ei, c) in shape.incident(v) {
                g = gcd(g, ks[ei]);
                class = c;
            }
            b.vertex_stabs.insert(v, lat(vec![row(class, g as i64)])?);
        }
    }
    for c in 0..shape.cyls {
        let gy = match &gy_extra {
            Some((cc, extra)) if *cc == c => lat(vec![row(c, 1), extra.clone()])?,
            _ => lat(vec![row(c, 1)])?,
        };
        b.cylinder_stabs.push((lat(vec![row(c, 1)])?, gy));
    }
    if rng.gen_range(0..4) == 0 {
        let v = rng.gen_range(0..shape.n);
        b.relative_marks.push(BTreeSet::from([v]));
    }
    b.declared.cylinder_stabs_elliptic = true;
    b.build()
}

fn realize_p(
    shape: &Shape,
    rng: &mut ChaCha8Rng,
    allow_generators: bool,
) -> Result<GTreeWindow, TreeError> {
    let junctions = junction_set(shape);
    let member = |c: usize, j: usize| format!("c{c}e{j}");

    let mut labels: BTreeSet<String> = BTreeSet::new();
    let mut classes: Vec<Vec<String>> = vec![Vec::new(); shape.cyls];
    let mut inclusions: Vec<(String, String)> = Vec::new();
    let mut not_in_family: Vec<String> = Vec::new();

    let mut edge_label = Vec::new();
    let mut index_in_cyl = vec![0usize; shape.cyls];
    for &(_, _, c) in &shape.edges {
        let l = member(c, index_in_cyl[c]);
        index_in_cyl[c] += 1;
        labels.insert(l.clone());
        classes[c].push(l.clone());
        edge_label.push(l);
    }

    // kernel top per class, present everywhere a stabilizer is needed
    for c in 0..shape.cyls {
        let k = format!("k{c}");
        labels.insert(k.clone());
        for l in classes[c].clone() {
            inclusions.push((l, k.clone()));
        }
        classes[c].push(k);
    }

    let mut vertex_label: BTreeMap<VertexId, String> = BTreeMap::new();
    let mut small: BTreeMap<VertexId, bool> = BTreeMap::new();
    let mut dual_entries: Vec<(VertexId, String, String)> = Vec::new();
    for v in 0..shape.n {
        let inc = shape.incident(v);
        if junctions.contains(&v) {
            let j = format!("J{v}");
            labels.insert(j.clone());
            not_in_family.push(j.clone());
            small.insert(v, false);
            for (ei, _) in &inc {
                inclusions.push((edge_label[*ei].clone(), j.clone()));
            }
            let mut by_class: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for (ei, c) in &inc {
                by_class.entry(*c).or_default().push(*ei);
            }
            for (c, eis) in by_class {
                if shape.collapse == Some((c, v)) {
                    continue;
                }
                let x = format!("x{v}c{c}");
                labels.insert(x.clone());
                for ei in eis {
                    inclusions.push((edge_label[ei].clone(), x.clone()));
                }
                inclusions.push((x.clone(), format!("k{c}")));
                inclusions.push((x.clone(), j.clone()));
                classes[c].push(x.clone());
                dual_entries.push((v, member(c, 0), x));
            }
            vertex_label.insert(v, j);
        } else if inc.len() == 1 {
            vertex_label.insert(v, edge_label[inc[0].0].clone());
        } else {
            let l = format!("v{v}");
            labels.insert(l.clone());
            let c = inc[0].1;
            for (ei, _) in &inc {
                inclusions.push((edge_label[*ei].clone(), l.clone()));
            }
            classes[c].push(l.clone());
            vertex_label.insert(v, l);
        }
    }

    let mut cylinder_stabs: Vec<(String, String)> = Vec::new();
    for c in 0..shape.cyls {
        match shape.collapse {
            Some((cc, x)) if cc == c => {
                let t = format!("t{c}");
                labels.insert(t.clone());
                not_in_family.push(t.clone());
                inclusions.push((member(c, 0), t.clone()));
                inclusions.push((t.clone(), format!("J{x}")));
                dual_entries.push((x, member(c, 0), t.clone()));
                cylinder_stabs.push((member(c, 0), t));
            }
            _ => cylinder_stabs.push((member(c, 0), format!("k{c}"))),
        }
    }

    // optional automorphism swapping two sibling single-edge leaves
    let mut generators: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
    let mut automorphism: Option<TreeAutomorphism> = None;
    if allow_generators && rng.gen_range(0..4) == 0 {
        let mut by_parent: BTreeMap<(VertexId, usize), Vec<(VertexId, usize)>> = BTreeMap::new();
        for (ei, &(u, v, c)) in shape.edges.iter().enumerate() {
            let (parent, child) = (u, v);
            if shape.incident(child).len() == 1 {
                by_parent.entry((parent, c)).or_default().push((child, ei));
            }
        }
        if let Some(((_, _), leaves)) = by_parent.iter().find(|(_, ls)| ls.len() >= 2) {
            let (u, eu) = leaves[0];
            let (v, ev) = leaves[1];
            let (m1, m2) = (edge_label[eu].clone(), edge_label[ev].clone());
            generators.insert(
                "s".into(),
                BTreeMap::from([(m1.clone(), m2.clone()), (m2, m1)]),
            );
            let mut vm: BTreeMap<VertexId, VertexId> =
                (0..shape.n).map(|x| (x, x)).collect();
            vm.insert(u, v);
            vm.insert(v, u);
            automorphism = Some(TreeAutomorphism {
                name: "s".into(),
                vertex_map: vm,
            });
        }
    }

    let spec = TableSpec {
        labels: labels.into_iter().collect(),
        classes,
        inclusions,
        generators,
        finite: Vec::new(),
        not_in_family,
        intersections: Vec::new(),
    };
    let alg = Arc::new(Algebra::new(AlgebraConfig::P(spec))?);
    let lab = |l: &str| -> Result<StabilizerHandle, TreeError> {
        Ok(alg.normalize(&RawDatum::Text(l.into()))?)
    };

    let mut b = WindowBuilder::new(alg.clone());
    for v in 0..shape.n {
        b.vertex(v);
    }
    for (ei, &(u, v, _)) in shape.edges.iter().enumerate() {
        b.edge(u, v, lab(&edge_label[ei])?);
    }
    for (v, l) in &vertex_label {
        b.vertex_stabs.insert(*v, lab(l)?);
    }
    for (v, f) in small {
        b.small_declared.insert(v, f);
    }
    for (k, gy) in cylinder_stabs {
        b.cylinder_stabs.push((lab(&k)?, lab(&gy)?));
    }
    for (v, k, h) in dual_entries {
        b.dual_edge_stabs.push((v, lab(&k)?, lab(&h)?));
    }
    if let Some(a) = automorphism {
        b.generators.push(a);
    }
    if rng.gen_range(0..4) == 0 {
        let v = rng.gen_range(0..shape.n);
        b.relative_marks.push(BTreeSet::from([v]));
    }
    b.declared.cylinder_stabs_elliptic = true;
    b.build()
}

fn realize(
    shape: &Shape,
    backend: BackendId,
    rng: &mut ChaCha8Rng,
    allow_generators: bool,
) -> Result<GTreeWindow, TreeError> {
    match backend {
        BackendId::W => realize_w(shape, rng),
        BackendId::L => realize_l(shape, rng),
        BackendId::P => realize_p(shape, rng, allow_generators),
    }
}

pub fn generate_window(spec: &GeneratorSpec) -> Result<GTreeWindow, TreeError> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let want_collapse = spec.backend != BackendId::W;
    let shape = skeleton(&mut rng, spec.max_vertices as VertexId, want_collapse);
    realize(&shape, spec.backend, &mut rng, true)
}

fn class_rep_text(w: &GTreeWindow, h: &StabilizerHandle) -> Result<String, TreeError> {
    Ok(w.algebra().class_representative(h)?.text())
}

/// Leaf collapses that keep every class present in the window; these
/// are exactly the moves whose window-scale dual tree is unchanged.
fn collapse_candidates(w: &GTreeWindow) -> Result<Vec<(VertexId, VertexId)>, TreeError> {
    let adj = w.adjacency();
    let mut class_size: BTreeMap<String, usize> = BTreeMap::new();
    for e in w.edges() {
        *class_size.entry(class_rep_text(w, &e.stab)?).or_default() += 1;
    }
    let mut out = Vec::new();
    for (vi, &v) in w.vertices().iter().enumerate() {
        if adj[vi].len() != 1 {
            continue;
        }
        let (ui, ei) = adj[vi][0];
        let e = &w.edges()[ei];
        match w.vertex_stab(v) {
            Some(s) if s.text() == e.stab.text() => {}
            _ => continue,
        }
        if class_size[&class_rep_text(w, &e.stab)?] >= 2 {
            out.push((w.vertices()[ui], v));
        }
    }
    Ok(out)
}

/// Leaf collapses legal for domination scripts: the class may vanish
/// entirely if its junction still meets at least two other cylinders.
fn domination_candidates(w: &GTreeWindow) -> Result<Vec<(VertexId, VertexId)>, TreeError> {
    let adj = w.adjacency();
    let mut class_size: BTreeMap<String, usize> = BTreeMap::new();
    for e in w.edges() {
        *class_size.entry(class_rep_text(w, &e.stab)?).or_default() += 1;
    }
    let mut out = collapse_candidates(w)?;
    for (vi, &v) in w.vertices().iter().enumerate() {
        if adj[vi].len() != 1 {
            continue;
        }
        let (ui, ei) = adj[vi][0];
        let e = &w.edges()[ei];
        match w.vertex_stab(v) {
            Some(s) if s.text() == e.stab.text() => {}
            _ => continue,
        }
        if class_size[&class_rep_text(w, &e.stab)?] != 1 {
            continue;
        }
        let u = w.vertices()[ui];
        let mut reps = BTreeSet::new();
        for &(_, uei) in &adj[ui] {
            reps.insert(class_rep_text(w, &w.edges()[uei].stab)?);
        }
        if reps.len() >= 3 {
            out.push((u, v));
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Is h inside the stabilizer of some vertex other than `exclude`?
/// Moves passing this keep both windows in one deformation space.
fn stab_covered(
    w: &GTreeWindow,
    h: &StabilizerHandle,
    exclude: Option<VertexId>,
) -> Result<bool, TreeError> {
    let alg = w.algebra();
    for (&v, s) in w.vertex_stabs() {
        if Some(v) == exclude {
            continue;
        }
        if alg.includes(s, h)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn pick_move(w: &GTreeWindow, rng: &mut ChaCha8Rng) -> Result<MoveSpec, TreeError> {
    let alg = w.algebra();
    let mut collapses = Vec::new();
    for (keep, gone) in collapse_candidates(w)? {
        let s = w.vertex_stab(gone).expect("collapse candidates carry stabilizers");
        if stab_covered(w, s, Some(gone))? {
            collapses.push((keep, gone));
        }
    }
    if !collapses.is_empty() && rng.gen_range(0..2) == 0 {
        let (keep, gone) = collapses[rng.gen_range(0..collapses.len())];
        return Ok(MoveSpec::Collapse { keep, gone });
    }
    let new_vertex = w.vertices().last().unwrap() + 1;
    let ei = rng.gen_range(0..w.edges().len());
    let e = &w.edges()[ei];
    let at = if rng.gen_range(0..2) == 0 { e.u } else { e.v };
    let stab = e.stab.clone();
    if stab_covered(w, &stab, None)? {
        let adj = w.adjacency();
        let ai = w.vertex_index(at).unwrap();
        let mut moved = Vec::new();
        for &(ni, nei) in &adj[ai] {
            if nei == ei {
                continue;
            }
            if alg.includes(&stab, &w.edges()[nei].stab)? && rng.gen_range(0..2) == 0 {
                moved.push(w.vertices()[ni]);
            }
        }
        return Ok(MoveSpec::Expand {
            at,
            new_vertex,
            stab,
            moved,
        });
    }
    // grow a fresh leaf at a stabbed vertex; its own stabilizer is
    // always covered
    let (&at, stab) = w
        .vertex_stabs()
        .iter()
        .find(|(_, s)| alg.in_family(s).unwrap_or(false))
        .expect("realized windows keep an in-family leaf stabilizer");
    Ok(MoveSpec::Expand {
        at,
        new_vertex,
        stab: stab.clone(),
        moved: Vec::new(),
    })
}

pub fn generate_pair(
    spec: &GeneratorSpec,
) -> Result<(GTreeWindow, Vec<MoveSpec>, GTreeWindow), TreeError> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let want_collapse = spec.backend != BackendId::W;
    let shape = skeleton(&mut rng, spec.max_vertices as VertexId, want_collapse);
    let base = realize(&shape, spec.backend, &mut rng, false)?;
    let mut cur = base.clone();
    let mut script = Vec::new();
    for _ in 0..spec.moves.clamp(1, 4) {
        let mv = pick_move(&cur, &mut rng)?;
        cur = elementary_move(&cur, &mv)?;
        script.push(mv);
    }
    Ok((base, script, cur))
}

fn contract(
    w: &GTreeWindow,
    keep: VertexId,
    gone: VertexId,
) -> Result<(GTreeWindow, EquivariantMap), TreeError> {
    let next = elementary_move(w, &MoveSpec::Collapse { keep, gone })?;
    let mut vertex_map: BTreeMap<VertexId, VertexId> =
        w.vertices().iter().map(|&v| (v, v)).collect();
    vertex_map.insert(gone, keep);
    Ok((next, EquivariantMap { vertex_map }))
}

/// A window, a contraction of it, and the collapse map between them.
pub fn generate_domination(
    spec: &GeneratorSpec,
) -> Result<(GTreeWindow, GTreeWindow, EquivariantMap), TreeError> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let want_collapse = spec.backend != BackendId::W;
    let shape = skeleton(&mut rng, spec.max_vertices as VertexId, want_collapse);
    let base = realize(&shape, spec.backend, &mut rng, false)?;
    let mut cur = base.clone();
    let mut map = EquivariantMap::identity(&base);
    for _ in 0..(1 + rng.gen_range(0..3)) {
        let cands = domination_candidates(&cur)?;
        if cands.is_empty() {
            break;
        }
        let (keep, gone) = cands[rng.gen_range(0..cands.len())];
        let (next, step) = contract(&cur, keep, gone)?;
        map = map.compose(&step)?;
        cur = next;
    }
    Ok((base, cur, map))
}

/// A chain w → w1 → w2 of contractions with both collapse maps, for
/// composition checks.
pub type DominationChain = (
    GTreeWindow,
    GTreeWindow,
    GTreeWindow,
    EquivariantMap,
    EquivariantMap,
);

pub fn generate_domination_chain(spec: &GeneratorSpec) -> Result<DominationChain, TreeError> {
    let (base, mid, f) = generate_domination(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed.wrapping_mul(0x9e3779b97f4a7c15));
    let mut cur = mid.clone();
    let mut g = EquivariantMap::identity(&mid);
    for _ in 0..(1 + rng.gen_range(0..2)) {
        let cands = domination_candidates(&cur)?;
        if cands.is_empty() {
            break;
        }
        let (keep, gone) = cands[rng.gen_range(0..cands.len())];
        let (next, step) = contract(&cur, keep, gone)?;
        g = g.compose(&step)?;
        cur = next;
    }
    Ok((base, mid, cur, f, g))
}
