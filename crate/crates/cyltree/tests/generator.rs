//! The seeded generator feeds every fuzz suite, so its output has to be
//! clean: admissible, deterministic, and stable under the move scripts
//! it emits.

use cyltree::algebra::BackendId;
use cyltree::analysis::same_deformation_space;
use cyltree::dual::{collapsed_tree_of_cylinders, tree_of_cylinders};
use cyltree::generate::{generate_domination, generate_pair, generate_window, GeneratorSpec};
use cyltree::instance::window_to_string;
use cyltree::validate::{validate_admissibility, validate_window};

const BACKENDS: [BackendId; 3] = [BackendId::W, BackendId::L, BackendId::P];

#[test]
fn windows_are_valid_and_admissible() {
    for backend in BACKENDS {
        for seed in 0..150 {
            let w = generate_window(&GeneratorSpec::new(seed, backend)).unwrap();
            let shape = validate_window(&w).unwrap();
            assert!(shape.is_empty(), "seed {seed} {backend}: {:?}", shape.violations);
            let adm = validate_admissibility(&w).unwrap();
            assert!(adm.is_empty(), "seed {seed} {backend}: {:?}", adm.violations);
            tree_of_cylinders(&w).unwrap();
            collapsed_tree_of_cylinders(&w).unwrap();
        }
    }
}

#[test]
fn same_seed_same_bytes() {
    for backend in BACKENDS {
        for seed in [0, 7, 42, 9001] {
            let a = generate_window(&GeneratorSpec::new(seed, backend)).unwrap();
            let b = generate_window(&GeneratorSpec::new(seed, backend)).unwrap();
            assert_eq!(window_to_string(&a), window_to_string(&b));
        }
    }
}

#[test]
fn pair_scripts_preserve_the_dual_tree() {
    for backend in BACKENDS {
        for seed in 0..60 {
            let (w, script, w2) = generate_pair(&GeneratorSpec::new(seed, backend)).unwrap();
            assert!(!script.is_empty());
            assert!(validate_window(&w2).unwrap().is_empty(), "seed {seed} {backend}");
            let a = tree_of_cylinders(&w).unwrap().canonical_form();
            let b = tree_of_cylinders(&w2).unwrap().canonical_form();
            assert_eq!(a, b, "seed {seed} {backend}");
            assert!(same_deformation_space(&w, &w2).unwrap(), "seed {seed} {backend}");
        }
    }
}

#[test]
fn dominations_carry_collapse_maps() {
    for backend in BACKENDS {
        for seed in 0..60 {
            let (w, w2, f) = generate_domination(&GeneratorSpec::new(seed, backend)).unwrap();
            assert!(f.is_collapse_map(&w, &w2).unwrap(), "seed {seed} {backend}");
        }
    }
}
