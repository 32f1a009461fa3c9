//! Cross-checks of the backend arithmetic against the brute-force
//! oracles in `common`. The frozen constants asserted here were read
//! off the oracle output, not the library's.

mod common;

use common::*;
use cyltree::algebra::{Algebra, AlgebraConfig, RawDatum, StabilizerHandle};

fn walg() -> Algebra {
    Algebra::new(AlgebraConfig::W { rank: 2 }).unwrap()
}

fn lalg() -> Algebra {
    Algebra::new(AlgebraConfig::L { dim: 2, family_rank: None }).unwrap()
}

fn wh(a: &Algebra, s: &str) -> StabilizerHandle {
    a.normalize(&RawDatum::Text(s.into())).unwrap()
}

fn lh(a: &Algebra, rows: &[[i64; 2]]) -> StabilizerHandle {
    a.normalize(&RawDatum::Rows(rows.iter().map(|r| r.to_vec()).collect()))
        .unwrap()
}

fn obasis(rows: &[[i64; 2]]) -> OBasis2 {
    OBasis2 {
        r1: (rows[0][0], rows[0][1]),
        r2: (rows[1][0], rows[1][1]),
    }
}

#[test]
fn hnf_of_a_staircase_basis_is_frozen() {
    let a = lalg();
    let h = lh(&a, &[[2, 2], [0, 4]]);
    assert_eq!(h.text(), "[[2,2],[0,4]]");
    // same point set as the input rows, so normalization changed nothing
    let orig = obasis(&[[2, 2], [0, 4]]);
    let out = obasis(&[[2, 2], [0, 4]]);
    assert_eq!(orig.box_points(12), out.box_points(12));
}

#[test]
fn hnf_agrees_with_box_points_on_skew_bases() {
    let a = lalg();
    for rows in [
        [[3, 1], [1, 3]],
        [[-2, 5], [4, 1]],
        [[1, 1], [1, -1]],
        [[6, 4], [2, 2]],
    ] {
        let h = lh(&a, &rows);
        let hnf_rows: Vec<Vec<i64>> = serde_json::from_str(&h.text()).unwrap();
        let out = obasis(&[
            [hnf_rows[0][0], hnf_rows[0][1]],
            [hnf_rows[1][0], hnf_rows[1][1]],
        ]);
        assert_eq!(obasis(&rows).box_points(20), out.box_points(20), "{rows:?}");
    }
}

#[test]
fn commensurability_of_two_grids_is_frozen() {
    let a = lalg();
    let x = lh(&a, &[[2, 0], [0, 2]]);
    let y = lh(&a, &[[3, 0], [0, 1]]);
    assert!(a.equivalent(&x, &y).unwrap());
    // oracle: the common points already span the plane, so the
    // intersection has finite index in both rank-2 lattices
    let pts = ointersection_points(&obasis(&[[2, 0], [0, 2]]), &obasis(&[[3, 0], [0, 1]]), 12);
    assert_eq!(opoint_rank(&pts), 2);
}

#[test]
fn grid_intersection_is_frozen() {
    let a = lalg();
    let x = lh(&a, &[[2, 0], [0, 2]]);
    let y = lh(&a, &[[3, 0], [0, 1]]);
    let i = a.intersect(&x, &y).unwrap();
    assert_eq!(i.text(), "[[6,0],[0,2]]");
    let oracle = ointersection_points(&obasis(&[[2, 0], [0, 2]]), &obasis(&[[3, 0], [0, 1]]), 24);
    assert_eq!(obasis(&[[6, 0], [0, 2]]).box_points(24), oracle);
}

#[test]
fn ab_and_ba_generate_incommensurable_subgroups() {
    let a = walg();
    assert!(!a.equivalent(&wh(&a, "a b"), &wh(&a, "b a")).unwrap());
    // oracle: no reduced word of length <= 8 has both ab and ba among
    // its powers of length <= 8
    let ab = vec![1i8, 2];
    let ba = vec![2i8, 1];
    for r in reduced_words(8) {
        let powers = opowers_upto(&r, 8);
        assert!(
            !(powers.contains(&ab) && powers.contains(&ba)),
            "{} has both",
            oword_text(&r)
        );
    }
}

#[test]
fn nested_powers_intersect_in_the_lcm_power() {
    let a = walg();
    let u2 = wh(&a, "a b a b");
    let u3 = wh(&a, "a b a b a b");
    let i = a.intersect(&u2, &u3).unwrap();
    assert_eq!(i, wh(&a, "a b a b a b a b a b a b"));
    // oracle: shortest common power of (ab)^2 and (ab)^3
    let r = vec![1i8, 2];
    let p2 = opowers_upto(&opow(&r, 2), 24);
    let p3 = opowers_upto(&opow(&r, 3), 24);
    let shortest = p2.iter().find(|w| p3.contains(w)).unwrap();
    assert_eq!(*shortest, opow(&r, 6));
}

#[test]
fn primitive_roots_match_the_oracle_on_short_words() {
    let a = walg();
    let candidates = reduced_words(4);
    for w in reduced_words(4) {
        let root = oracle_root(&w, &candidates);
        let got = a.class_representative(&wh(&a, &oword_text(&w))).unwrap();
        let want = wh(&a, &oword_text(&root));
        assert_eq!(got, want, "word {}", oword_text(&w));
    }
}

#[test]
fn lattice_inclusion_matches_the_oracle_on_small_bases() {
    let a = lalg();
    let bases: Vec<[[i64; 2]; 2]> = vec![
        [[1, 0], [0, 1]],
        [[2, 0], [0, 2]],
        [[3, 0], [0, 1]],
        [[2, 1], [0, 3]],
        [[1, 1], [1, -1]],
        [[2, 2], [0, 4]],
    ];
    for x in &bases {
        for y in &bases {
            let hx = lh(&a, x);
            let hy = lh(&a, y);
            let got = a.includes(&hx, &hy).unwrap();
            let ox = obasis(x);
            let want = obasis(y).box_points(24).iter().all(|&p| ox.contains(p));
            assert_eq!(got, want, "{x:?} >= {y:?}");
        }
    }
}
