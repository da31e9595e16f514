//! Builtin codes: serialization goldens, validity and the two bivariate
//! bicycle presentations.

use anyonlab::anyon::solve_bulk_anyons;
use anyonlab::catalog::*;
use anyonlab::poly::{LaurentPoly, PauliVector};

const GOLDEN: [&str; 7] = ["z2_toric", "z4_toric", "fish_toric", "double_semion", "six_semion", "color_code", "three_fermion"];

fn golden_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"))
}

#[test]
fn builtin_serialization_matches_goldens() {
    for name in GOLDEN {
        let expect = std::fs::read_to_string(golden_path(name)).unwrap();
        let got = to_json(&builtin(name).unwrap());
        assert_eq!(got.trim_end(), expect.trim_end(), "{name} drifted from its golden file");
    }
}

#[test]
fn goldens_parse_back_to_the_builtins() {
    for name in GOLDEN {
        let text = std::fs::read(golden_path(name)).unwrap();
        let parsed = parse_code_file(&text).unwrap();
        let spec = builtin(name).unwrap();
        assert_eq!(parsed.stabilizers, spec.stabilizers, "{name}");
        assert_eq!(parsed.gauge_constraints, spec.gauge_constraints, "{name}");
        assert_eq!((parsed.dim(), parsed.w), (spec.dim(), spec.w), "{name}");
    }
}

#[test]
fn z2_toric_matches_hand_built_generators() {
    let p = |t: &[(i64, i64, i64)]| LaurentPoly::from_terms(2, t);
    let z = LaurentPoly::zero(2);
    let star = PauliVector::from_slots(2, vec![p(&[(0, 0, 1), (-1, 0, -1)]), p(&[(0, 0, 1), (0, -1, -1)]), z.clone(), z.clone()]).unwrap();
    let plaq = PauliVector::from_slots(2, vec![z.clone(), z, p(&[(0, 0, 1), (0, 1, -1)]), p(&[(0, 0, -1), (1, 0, 1)])]).unwrap();
    assert_eq!(builtin("z2_toric").unwrap().stabilizers, vec![star, plaq]);
}

#[test]
fn every_builtin_validates() {
    for name in GOLDEN {
        assert!(validate(&builtin(name).unwrap()).is_empty(), "{name}");
    }
    for a in -3..=3 {
        for b in -3..=3 {
            assert!(validate(&bb(a, b).unwrap()).is_empty(), "bb({a},{b})");
            assert!(validate(&bb_shifted(a, b).unwrap()).is_empty(), "bb_shifted({a},{b})");
        }
    }
}

#[test]
fn builtin_names_resolve() {
    assert_eq!(builtin("bb(3,3)").unwrap().stabilizers, bb(3, 3).unwrap().stabilizers);
    assert_eq!(builtin("bb_shifted(-1, 2)").unwrap().stabilizers, bb_shifted(-1, 2).unwrap().stabilizers);
    assert!(matches!(builtin("bb(1)"), Err(anyonlab::error::Error::UnknownCode(_))));
}

#[test]
fn shifted_bivariate_bicycle_has_the_same_bulk_anyons() {
    for (a, b) in [(0, 0), (1, 1), (1, 2), (2, 1)] {
        let plain = solve_bulk_anyons(&bb(a, b).unwrap().stabilizers, 8, None).unwrap();
        let shifted = solve_bulk_anyons(&bb_shifted(a, b).unwrap().stabilizers, 8, None).unwrap();
        let mut x = plain.orders.clone();
        let mut y = shifted.orders.clone();
        x.sort_unstable();
        y.sort_unstable();
        assert_eq!(x, y, "bb({a},{b})");
    }
}

#[test]
fn orientation_reversal_is_an_involution() {
    for name in GOLDEN {
        let spec = builtin(name).unwrap();
        let twice = spec.orientation_reversed().orientation_reversed();
        assert_eq!(twice.stabilizers, spec.stabilizers, "{name}");
        assert!(validate(&spec.orientation_reversed()).is_empty(), "{name}");
    }
}
