//! Randomized invariants over the seeded generator. The generator
//! guarantees admissibility by construction; everything downstream is
//! pinned here across all three backends.

use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;

use cyltree::algebra::BackendId;
use cyltree::analysis::repeated_construction_check;
use cyltree::cylinder::compute_cylinders;
use cyltree::generate::{generate_domination, generate_window, GeneratorSpec};
use cyltree::induced::induced_map;
use cyltree::instance::{parse_window, window_to_string};
use cyltree::moves::{elementary_move, MoveSpec};
use cyltree::refine::blowup_refinement;
use cyltree::validate::{validate_admissibility, validate_window};
use cyltree::window::{GTreeWindow, VertexId, WindowBuilder};

fn backend(i: u8) -> BackendId {
    match i % 3 {
        0 => BackendId::W,
        1 => BackendId::L,
        _ => BackendId::P,
    }
}

fn window(seed: u64, b: u8) -> GTreeWindow {
    generate_window(&GeneratorSpec::new(seed, backend(b))).expect("generator stays in contract")
}

/// The same tree under a fresh numbering.
fn relabel(w: &GTreeWindow, f: impl Fn(VertexId) -> VertexId) -> GTreeWindow {
    let mut b = WindowBuilder::new(Arc::clone(w.algebra()));
    for &v in w.vertices() {
        b.vertex(f(v));
    }
    for e in w.edges() {
        b.edge(f(e.u), f(e.v), e.stab.clone());
    }
    for (&v, s) in w.vertex_stabs() {
        b.vertex_stabs.insert(f(v), s.clone());
    }
    b.boundary = w.boundary().iter().map(|&v| f(v)).collect();
    for (&v, &flag) in w.small_declared() {
        b.small_declared.insert(f(v), flag);
    }
    for g in w.generators() {
        let mut g2 = g.clone();
        g2.vertex_map = g.vertex_map.iter().map(|(&a, &c)| (f(a), f(c))).collect();
        b.generators.push(g2);
    }
    b.relative_marks = w
        .relative_marks()
        .iter()
        .map(|m| m.iter().map(|&v| f(v)).collect())
        .collect();
    b.cylinder_stabs = w.cylinder_stab_table().to_vec();
    b.dual_edge_stabs = w
        .dual_edge_stab_table()
        .iter()
        .map(|(v, m, s)| (f(*v), m.clone(), s.clone()))
        .collect();
    b.extra_classes = w.extra_classes().to_vec();
    b.declared = w.declared();
    b.build().expect("renumbering keeps the structure legal")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn generated_windows_always_validate(seed in 0u64..100_000, b in 0u8..3) {
        let w = window(seed, b);
        prop_assert!(validate_window(&w).unwrap().is_empty());
        prop_assert!(validate_admissibility(&w).unwrap().is_empty());
    }

    #[test]
    fn serialization_round_trips(seed in 0u64..100_000, b in 0u8..3) {
        let w = window(seed, b);
        let text = window_to_string(&w);
        let back = parse_window(&text).expect("own output parses");
        prop_assert_eq!(w.canonical_form().unwrap(), back.canonical_form().unwrap());
        prop_assert_eq!(text, window_to_string(&back));
    }

    #[test]
    fn canonical_form_ignores_vertex_numbering(
        seed in 0u64..100_000,
        b in 0u8..3,
        offset in 0u32..1000,
    ) {
        let w = window(seed, b);
        let top = *w.vertices().last().unwrap();
        // order-reversing shift: every sorted structure is reshuffled
        let other = relabel(&w, |v| offset + top - v);
        prop_assert_eq!(w.canonical_form().unwrap(), other.canonical_form().unwrap());
    }

    #[test]
    fn cylinders_partition_edges_by_pairwise_equivalence(seed in 0u64..100_000, b in 0u8..3) {
        let w = window(seed, b);
        let alg = w.algebra();
        let cyls = compute_cylinders(&w).unwrap();
        let mut cyl_of_edge = vec![usize::MAX; w.edges().len()];
        for (ci, c) in cyls.iter().enumerate() {
            for &ei in &c.edges {
                cyl_of_edge[ei] = ci;
            }
        }
        prop_assert!(cyl_of_edge.iter().all(|&c| c != usize::MAX));
        for (i, e) in w.edges().iter().enumerate() {
            for (j, e2) in w.edges().iter().enumerate().skip(i + 1) {
                let together = cyl_of_edge[i] == cyl_of_edge[j];
                prop_assert_eq!(alg.equivalent(&e.stab, &e2.stab).unwrap(), together);
            }
        }
    }

    #[test]
    fn cylinders_are_connected_and_barely_overlap(seed in 0u64..100_000, b in 0u8..3) {
        let w = window(seed, b);
        let cyls = compute_cylinders(&w).unwrap();
        for c in &cyls {
            // reachability inside the cylinder's own edge set
            let mut seen = BTreeSet::from([c.vertices[0]]);
            let mut frontier = vec![c.vertices[0]];
            while let Some(v) = frontier.pop() {
                for &ei in &c.edges {
                    let e = &w.edges()[ei];
                    for (a, z) in [(e.u, e.v), (e.v, e.u)] {
                        if a == v && seen.insert(z) {
                            frontier.push(z);
                        }
                    }
                }
            }
            let all: BTreeSet<VertexId> = c.vertices.iter().copied().collect();
            prop_assert_eq!(seen, all);
        }
        for (i, c) in cyls.iter().enumerate() {
            for c2 in &cyls[i + 1..] {
                let shared = c.vertices.iter().filter(|v| c2.vertices.contains(v)).count();
                prop_assert!(shared <= 1);
            }
        }
    }

    #[test]
    fn rebuilding_the_dual_from_itself_changes_nothing(seed in 0u64..100_000, b in 0u8..3) {
        let w = window(seed, b);
        let r = repeated_construction_check(&w).unwrap();
        prop_assert!(!r.applicable || r.equal);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn expanding_then_collapsing_returns_home(seed in 0u64..100_000, b in 0u8..3) {
        let w = window(seed, b);
        if !w.generators().is_empty() {
            // moves refuse windows with declared actions
            return Ok(());
        }
        let Some((&at, stab)) = w
            .vertex_stabs()
            .iter()
            .find(|(_, s)| w.algebra().in_family(s).unwrap_or(false))
        else {
            return Ok(());
        };
        let new_vertex = w.vertices().last().unwrap() + 1;
        let grown = elementary_move(
            &w,
            &MoveSpec::Expand { at, new_vertex, stab: stab.clone(), moved: Vec::new() },
        )
        .unwrap();
        let back = elementary_move(&grown, &MoveSpec::Collapse { keep: at, gone: new_vertex })
            .unwrap();
        prop_assert_eq!(w.canonical_form().unwrap(), back.canonical_form().unwrap());
    }

    #[test]
    fn collapse_maps_induce_cellular_dual_maps(seed in 0u64..100_000, b in 0u8..3) {
        let spec = GeneratorSpec::new(seed, backend(b));
        let (w, w2, f) = generate_domination(&spec).unwrap();
        prop_assert!(f.is_collapse_map(&w, &w2).unwrap());
        let im = induced_map(&f, &w, &w2).unwrap();
        prop_assert!(im.map.preserves_alignment(&im.source, &im.target));
        // total on the source dual
        prop_assert_eq!(im.map.vertex_map.len(), im.source.verts.len());
    }

    #[test]
    fn blowups_recover_the_dual_and_the_target(seed in 0u64..100_000, b in 0u8..3) {
        let spec = GeneratorSpec::new(seed, backend(b));
        let (w, w2, f) = generate_domination(&spec).unwrap();
        let r = blowup_refinement(&w, &w2, &f).unwrap();
        prop_assert!(r.recovered_dual);
        prop_assert!(r.recovered_target);
        // the refined tree collapses onto both sides, alignment included
        prop_assert!(r.to_dual.is_collapse_map(&r.refined, &r.dual_window).unwrap());
        prop_assert!(r.to_target.is_collapse_map(&r.refined, &w2).unwrap());
    }
}
