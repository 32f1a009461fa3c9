//! End-to-end checks of the analysis and refinement passes over the
//! generated corpus. Small seed ranges here; the acceptance suite runs
//! the large ones.

use cyltree::algebra::BackendId;
use cyltree::analysis::{
    diameter_two_check, idempotence_check, sandwich_closed, unique_collapsed_edge_check,
};
use cyltree::dual::{collapsed_tree_of_cylinders, reinterpret_as_window, tree_of_cylinders};
use cyltree::generate::{generate_domination, generate_domination_chain, generate_window, GeneratorSpec};
use cyltree::refine::blowup_refinement;

const BACKENDS: [BackendId; 3] = [BackendId::W, BackendId::L, BackendId::P];

#[test]
fn cylinders_have_diameter_at_most_two_in_the_collapsed_tree() {
    for backend in BACKENDS {
        for seed in 0..100 {
            let w = generate_window(&GeneratorSpec::new(seed, backend)).unwrap();
            let t = collapsed_tree_of_cylinders(&w).unwrap();
            let report = diameter_two_check(&t, &w).unwrap();
            assert!(report.all_at_most_two, "seed {seed} {backend}: {report:?}");
        }
    }
}

#[test]
fn construction_is_idempotent_on_the_corpus() {
    for backend in BACKENDS {
        for seed in 0..100 {
            let w = generate_window(&GeneratorSpec::new(seed, backend)).unwrap();
            if !sandwich_closed(w.algebra(), &w.present_handles()).unwrap() {
                continue;
            }
            let report = match idempotence_check(&w) {
                Ok(r) => r,
                Err(e) => panic!("seed {seed} {backend}: {e}"),
            };
            assert!(report.equal, "seed {seed} {backend}: {report:?}");
        }
    }
}

#[test]
fn collapsed_incidences_are_unique_per_cylinder() {
    for backend in BACKENDS {
        for seed in 0..100 {
            let w = generate_window(&GeneratorSpec::new(seed, backend)).unwrap();
            let report = unique_collapsed_edge_check(&w).unwrap();
            assert!(report.passed, "seed {seed} {backend}: {report:?}");
        }
    }
}

#[test]
fn collapsed_tree_reinterprets_as_a_window() {
    for backend in BACKENDS {
        for seed in 0..100 {
            let w = generate_window(&GeneratorSpec::new(seed, backend)).unwrap();
            let t = collapsed_tree_of_cylinders(&w).unwrap();
            let w2 = reinterpret_as_window(&t, &w).unwrap();
            w2.ensure_tree().unwrap();
        }
    }
}

#[test]
fn blowup_recovers_both_trees() {
    for backend in BACKENDS {
        for seed in 0..60 {
            let (w, w2, f) = generate_domination(&GeneratorSpec::new(seed, backend)).unwrap();
            let r = match blowup_refinement(&w, &w2, &f) {
                Ok(r) => r,
                Err(e) => panic!("seed {seed} {backend}: {e}"),
            };
            assert!(r.recovered_dual, "seed {seed} {backend}");
            assert!(r.recovered_target, "seed {seed} {backend}");
        }
    }
}

#[test]
fn domination_chains_compose() {
    for backend in BACKENDS {
        for seed in 0..60 {
            let (w, w1, w2, f, g) =
                generate_domination_chain(&GeneratorSpec::new(seed, backend)).unwrap();
            let fg = f.compose(&g).unwrap();
            assert!(fg.is_collapse_map(&w, &w2).unwrap(), "seed {seed} {backend}");
            assert!(g.is_collapse_map(&w1, &w2).unwrap(), "seed {seed} {backend}");
            let _ = tree_of_cylinders(&w1).unwrap();
        }
    }
}
