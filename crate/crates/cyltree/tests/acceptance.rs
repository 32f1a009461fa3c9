//! The release gate. Each test batches one claim over the seeded corpus
//! or the oracles and prints a single verdict line with its timing; a
//! failed claim panics with the same line.

mod common;

use std::path::PathBuf;
use std::sync::OnceLock;
use std::time::Instant;

use common::{oracle_root, ointersection_points, osum_index, oword_text, reduced_words, OBasis2};
use cyltree::algebra::{Algebra, AlgebraConfig, BackendId, RawDatum, StabilizerHandle};
use cyltree::analysis::{
    acylindricity_check, diameter_two_check, idempotence_check, infinite_intersection_condition,
    AcylMode,
};
use cyltree::cylinder::compute_cylinders;
use cyltree::dual::{collapsed_tree_of_cylinders, reinterpret_as_window, tree_of_cylinders};
use cyltree::error::TreeError;
use cyltree::generate::{
    generate_domination, generate_domination_chain, generate_pair, generate_window, GeneratorSpec,
};
use cyltree::induced::induced_map;
use cyltree::instance::parse_window;
use cyltree::refine::blowup_refinement;
use cyltree::validate::{validate_admissibility, validate_window};
use cyltree::window::GTreeWindow;
use cyltree::zgraph::segment5_check;

fn backend(seed: u64) -> BackendId {
    match seed % 3 {
        0 => BackendId::W,
        1 => BackendId::L,
        _ => BackendId::P,
    }
}

/// Seeds 0..10000 with backends cycled, built once and shared.
fn corpus() -> &'static [GTreeWindow] {
    static CORPUS: OnceLock<Vec<GTreeWindow>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        (0..10_000u64)
            .map(|s| {
                generate_window(&GeneratorSpec::new(s, backend(s)))
                    .expect("generator stays in contract")
            })
            .collect()
    })
}

fn fixture(name: &str) -> GTreeWindow {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_window(&text).expect("fixtures parse")
}

fn verdict(number: usize, name: &str, started: Instant, ok: bool, detail: &str) {
    let line = format!(
        "criterion {number} ({name}): {} in {:.2?} {detail}",
        if ok { "pass" } else { "fail" },
        started.elapsed(),
    );
    println!("{line}");
    assert!(ok, "{line}");
}

#[test]
fn c1_cylinders_connect_across_the_corpus() {
    let t0 = Instant::now();
    let mut inadmissible = 0usize;
    let mut disconnected = 0usize;
    for w in corpus() {
        if !validate_window(w).unwrap().is_empty() || !validate_admissibility(w).unwrap().is_empty()
        {
            inadmissible += 1;
        }
        match compute_cylinders(w) {
            Ok(_) => {}
            Err(TreeError::DisconnectedClass { .. }) => disconnected += 1,
            Err(e) => panic!("cylinder computation refused: {e}"),
        }
    }
    verdict(
        1,
        "cylinder connectedness",
        t0,
        inadmissible == 0 && disconnected == 0,
        &format!(
            "({} windows, {inadmissible} inadmissible, {disconnected} disconnected)",
            corpus().len()
        ),
    );
}

#[test]
fn c2_elementary_moves_preserve_the_dual_tree() {
    let t0 = Instant::now();
    let mut mismatches = 0usize;
    for seed in 0..1_000u64 {
        let (base, script, moved) =
            generate_pair(&GeneratorSpec::new(seed, backend(seed))).expect("pairs generate");
        assert!(script.len() <= 4);
        let before = tree_of_cylinders(&base).unwrap().canonical_form();
        let after = tree_of_cylinders(&moved).unwrap().canonical_form();
        if before != after {
            mismatches += 1;
        }
    }
    verdict(
        2,
        "deformation-space invariance",
        t0,
        mismatches == 0,
        &format!("({mismatches} of 1000 pairs differ)"),
    );
}

#[test]
fn c3_induced_maps_compose() {
    let t0 = Instant::now();
    let mut mismatches = 0usize;
    for seed in 0..500u64 {
        let (base, mid, target, f, g) =
            generate_domination_chain(&GeneratorSpec::new(seed, backend(seed)))
                .expect("chains generate");
        let fg = f.compose(&g).unwrap();
        let first = induced_map(&f, &base, &mid).unwrap();
        let second = induced_map(&g, &mid, &target).unwrap();
        let whole = induced_map(&fg, &base, &target).unwrap();
        if first.map.compose(&second.map).unwrap() != whole.map {
            mismatches += 1;
        }
    }
    verdict(
        3,
        "functoriality",
        t0,
        mismatches == 0,
        &format!("({mismatches} of 500 compositions differ)"),
    );
}

#[test]
fn c4_collapsed_cylinders_have_diameter_at_most_two() {
    let t0 = Instant::now();
    let mut exceptions = 0usize;
    for w in corpus() {
        let t = collapsed_tree_of_cylinders(w).unwrap();
        if !diameter_two_check(&t, w).unwrap().all_at_most_two {
            exceptions += 1;
        }
    }
    verdict(
        4,
        "diameter bound",
        t0,
        exceptions == 0,
        &format!("({exceptions} exceptions in {} windows)", corpus().len()),
    );
}

#[test]
fn c5_collapsing_twice_changes_nothing() {
    let t0 = Instant::now();
    let (mut checked, mut unequal, mut skipped) = (0usize, 0usize, 0usize);
    for w in corpus() {
        match idempotence_check(w) {
            Ok(rep) => {
                checked += 1;
                if !rep.equal {
                    unequal += 1;
                }
            }
            // windows outside the precondition prove nothing either way
            Err(TreeError::SandwichClosureUnverified(_)) | Err(TreeError::UnresolvedEdgeStab(_)) => {
                skipped += 1
            }
            Err(e) if e.is_capability() => skipped += 1,
            Err(e) => panic!("idempotence refused: {e}"),
        }
    }
    verdict(
        5,
        "idempotence",
        t0,
        checked > 0 && unequal == 0,
        &format!("({unequal} of {checked} differ, {skipped} outside the precondition)"),
    );
}

#[test]
fn c6_dual_trees_are_almost_two_acylindrical() {
    let t0 = Instant::now();
    let (mut checked, mut violating, mut skipped) = (0usize, 0usize, 0usize);
    for w in corpus() {
        if w.algebra().backend() == BackendId::P {
            continue;
        }
        if !infinite_intersection_condition(w.algebra(), &w.present_handles()).unwrap() {
            skipped += 1;
            continue;
        }
        let t = collapsed_tree_of_cylinders(w).unwrap();
        checked += 1;
        if t.is_point() {
            continue;
        }
        let proxy = reinterpret_as_window(&t, w).unwrap();
        let rep = acylindricity_check(&proxy, 2, AcylMode::Almost).unwrap();
        if rep.violations.iter().any(|v| !v.touches_boundary) {
            violating += 1;
        }
    }
    // the fat-cylinder fixture keeps an infinite stabilizer on a
    // length-3 segment and must be called out
    let e4 = acylindricity_check(&fixture("E4.json"), 2, AcylMode::Almost).unwrap();
    verdict(
        6,
        "almost 2-acylindricity",
        t0,
        checked > 0 && violating == 0 && !e4.passed && !e4.violations.is_empty(),
        &format!(
            "({violating} of {checked} violate, {skipped} skipped, E4 flagged: {})",
            !e4.passed
        ),
    );
}

#[test]
fn c7_blowups_recover_both_sides() {
    let t0 = Instant::now();
    let mut failures = 0usize;
    for seed in 0..300u64 {
        let (w, w2, f) =
            generate_domination(&GeneratorSpec::new(seed, backend(seed))).expect("triples generate");
        let r = blowup_refinement(&w, &w2, &f).unwrap();
        let ok = r.recovered_dual
            && r.recovered_target
            && r.to_dual.is_collapse_map(&r.refined, &r.dual_window).unwrap()
            && r.to_target.is_collapse_map(&r.refined, &w2).unwrap();
        if !ok {
            failures += 1;
        }
    }
    verdict(
        7,
        "blow-up compatibility",
        t0,
        failures == 0,
        &format!("({failures} of 300 triples fail)"),
    );
}

#[test]
fn c8_backends_agree_with_the_oracles() {
    let t0 = Instant::now();

    // free-group roots, every reduced word up to length 6
    let w = Algebra::new(AlgebraConfig::W { rank: 2 }).unwrap();
    let words = reduced_words(6);
    let mut root_mismatches = 0usize;
    for word in &words {
        let handle = w.normalize(&RawDatum::Text(oword_text(word))).unwrap();
        let got = w.class_representative(&handle).unwrap();
        let want = w
            .normalize(&RawDatum::Text(oword_text(&oracle_root(word, &words))))
            .unwrap();
        if got != want {
            root_mismatches += 1;
        }
    }

    // plane lattices, every rank-2 basis with entries in [-3,3]; bases
    // of one lattice share their near-origin points, so each lattice is
    // checked once and every basis is checked against its representative
    let l = Algebra::new(AlgebraConfig::L { dim: 2, family_rank: None }).unwrap();
    let mut reps: Vec<(Vec<(i64, i64)>, OBasis2, StabilizerHandle)> = Vec::new();
    let mut bases = 0usize;
    let mut normalize_splits = 0usize;
    for x1 in -3..=3i64 {
        for y1 in -3..=3i64 {
            for x2 in -3..=3i64 {
                for y2 in -3..=3i64 {
                    let b = OBasis2 { r1: (x1, y1), r2: (x2, y2) };
                    if b.det() == 0 {
                        continue;
                    }
                    bases += 1;
                    let h = l
                        .normalize(&RawDatum::Rows(vec![vec![x1, y1], vec![x2, y2]]))
                        .unwrap();
                    let key = b.box_points(3);
                    match reps.iter().find(|(k, _, _)| *k == key) {
                        Some((_, _, rep)) => {
                            if *rep != h {
                                normalize_splits += 1;
                            }
                        }
                        None => reps.push((key, b, h)),
                    }
                }
            }
        }
    }

    let mut includes_mismatches = 0usize;
    let mut intersect_mismatches = 0usize;
    for (i, (_, bx, hx)) in reps.iter().enumerate() {
        for (ky, _, hy) in &reps {
            // inclusion is decided by the generators, which sit inside
            // the key box
            let want = ky.iter().all(|&p| bx.contains(p));
            if l.includes(hx, hy).unwrap() != want {
                includes_mismatches += 1;
            }
        }
        for (_, by, hy) in &reps[i..] {
            let rows: Vec<Vec<i64>> =
                serde_json::from_str(&l.intersect(hx, hy).unwrap().text()).unwrap();
            let bi = OBasis2 { r1: (rows[0][0], rows[0][1]), r2: (rows[1][0], rows[1][1]) };
            if bi.det() == 0 {
                intersect_mismatches += 1;
                continue;
            }
            // contained in both, covering every common point near the
            // origin, and of the index forced by
            // det(X)det(Y) = det(X meet Y)det(X + Y)
            let inside = [bi.r1, bi.r2].iter().all(|&p| bx.contains(p) && by.contains(p));
            let covered = ointersection_points(bx, by, 8).iter().all(|&p| bi.contains(p));
            let index_ok = bi.det().unsigned_abs()
                == bx.det().unsigned_abs() * by.det().unsigned_abs() / osum_index(bx, by);
            if !(inside && covered && index_ok) {
                intersect_mismatches += 1;
            }
        }
    }

    verdict(
        8,
        "backend oracle equivalence",
        t0,
        root_mismatches == 0
            && normalize_splits == 0
            && includes_mismatches == 0
            && intersect_mismatches == 0,
        &format!(
            "({} words with {root_mismatches} bad roots; {bases} bases of {} lattices with \
             {normalize_splits} split, {includes_mismatches} bad inclusions, \
             {intersect_mismatches} bad intersections)",
            words.len(),
            reps.len()
        ),
    );
}

#[test]
fn c9_the_image_is_exactly_the_central_edges() {
    let t0 = Instant::now();
    let minimal = [
        "E1.json", "E3.json", "E5.json", "path3.json", "path4.json", "star3.json",
        "spider4.json", "hpath.json", "widestar.json", "deeppath.json", "lseg.json",
    ];
    let mut failing: Vec<&str> = Vec::new();
    for name in minimal {
        let rep = segment5_check(&fixture(name)).unwrap();
        if !rep.equal || rep.truncation_caveat {
            failing.push(name);
        }
    }
    verdict(
        9,
        "segment-5 characterization",
        t0,
        minimal.len() >= 10 && failing.is_empty(),
        &format!("({} fixtures, failing: {failing:?})", minimal.len()),
    );
}
