//! Anyon theories of the builtin codes: identification up to isomorphism,
//! bulk-boundary agreement, syndrome sufficiency and spin invariance.

use anyonlab::anyon::{solve_bulk_anyons, topological_spin, BoundaryString, EngineOptions};
use anyonlab::boundary::{commutant_with, SolveOptions, Truncation};
use anyonlab::catalog::{builtin, Side};
use anyonlab::constructor::{analyze, Analysis};
use anyonlab::frame::Frame;
use anyonlab::lagrangian::AnyonGroup;
use anyonlab::poly::{LaurentPoly, PauliVector};
use proptest::prelude::*;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

fn boundary_analysis(name: &str) -> &'static Analysis {
    static CACHE: OnceLock<Mutex<HashMap<String, &'static Analysis>>> = OnceLock::new();
    let mut map = CACHE.get_or_init(Default::default).lock().unwrap();
    map.entry(name.to_string()).or_insert_with(|| {
        let spec = builtin(name).unwrap();
        let t = Truncation::boundary(&spec, Side::Left, spec.smooth_mask.clone()).unwrap();
        Box::leak(Box::new(analyze(t, SolveOptions::default(), &EngineOptions::default()).unwrap()))
    })
}

fn defect_analysis(name: &str) -> Analysis {
    let spec = builtin(name).unwrap();
    let t = Truncation::defect(&spec, &spec).unwrap();
    analyze(t, SolveOptions::default(), &EngineOptions::default()).unwrap()
}

mod common;

use common::{isomorphic, stack, theory, toric};

#[test]
fn z2_toric_code() {
    let got = AnyonGroup::from_theory(&boundary_analysis("z2_toric").theory);
    assert!(isomorphic(&toric(2), &got));
    // Both basis anyons are bosons with mutual braiding -1.
    assert_eq!(got.spins, vec![0, 0]);
    assert_eq!(got.braiding[0][1], 1);
}

#[test]
fn z4_toric_code_braids_by_i() {
    let got = AnyonGroup::from_theory(&boundary_analysis("z4_toric").theory);
    assert_eq!(got.d, 4);
    assert!(isomorphic(&toric(4), &got));
    assert!(!isomorphic(&theory(4, &[4, 4], &[0, 0], &[(0, 1, 2)]), &got));
}

#[test]
fn double_semion() {
    let got = AnyonGroup::from_theory(&boundary_analysis("double_semion").theory);
    // Semion s with spin i and boson b = s·s̄, braiding -1.
    let reference = theory(4, &[2, 2], &[1, 0], &[(0, 1, 2)]);
    assert!(isomorphic(&reference, &got));
    assert!(!isomorphic(&toric(2), &got));
}

#[test]
fn six_semion() {
    let got = AnyonGroup::from_theory(&boundary_analysis("six_semion").theory);
    let reference = theory(4, &[4, 4], &[1, 1], &[(0, 1, 1)]);
    assert!(isomorphic(&reference, &got));
}

#[test]
fn color_code_is_two_toric_codes() {
    let got = AnyonGroup::from_theory(&boundary_analysis("color_code").theory);
    assert!(isomorphic(&AnyonGroup::toric_copies(2), &got));
}

#[test]
fn fish_toric_code() {
    let got = AnyonGroup::from_theory(&boundary_analysis("fish_toric").theory);
    assert!(isomorphic(&toric(2), &got));
}

#[test]
fn three_fermion_defect_is_two_fermion_theories() {
    let an = defect_analysis("three_fermion");
    let got = AnyonGroup::from_theory(&an.theory);
    let three_fermion = theory(4, &[2, 2], &[2, 2], &[(0, 1, 2)]);
    assert!(isomorphic(&stack(&three_fermion, &three_fermion), &got));
}

fn sorted(mut v: Vec<u64>) -> Vec<u64> {
    v.sort_unstable();
    v
}

#[test]
fn boundary_and_bulk_orders_agree() {
    for name in ["z2_toric", "z4_toric", "fish_toric", "double_semion", "six_semion", "color_code"] {
        let spec = builtin(name).unwrap();
        let bulk = solve_bulk_anyons(&spec.stabilizers, 8, None).unwrap();
        let boundary = boundary_analysis(name).theory.orders();
        assert_eq!(sorted(boundary), sorted(bulk.orders), "{name}");
    }
}

/// Translates `g + (0, k·period)` inside `frame`.
fn y_translates(g: &PauliVector, period: u64, frame: &Frame) -> Vec<PauliVector> {
    let Some(b) = g.bounds() else { return vec![] };
    frame
        .inner_shifts(b)
        .filter(|&(sa, sb)| sa == 0 && sb.rem_euclid(period as i64) == 0)
        .map(|(_, sb)| g.shift(0, sb))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn primary_syndromes_determine_secondary_ones(
        name in prop::sample::select(vec!["fish_toric", "z2_toric", "double_semion"]),
        dy in -3i64..3,
        coeffs in prop::collection::vec(0u64..4, 64),
    ) {
        let an = boundary_analysis(name);
        let t = &an.truncation;
        let [x0, x1, y0, y1] = an.gauge.window;
        let frame = Frame::new(t.w, x0, x1, y0 + dy, y1 + dy);
        let (ex, ey) = t.extent();
        let wide = Frame::new(t.w, frame.x0 - ex, frame.x1 + ex, frame.y0 - ey, frame.y1 + ey);
        let mut terms = t.kept_translates(&frame, false);
        // Primary syndromes: every truncated stabilizer meeting the frame.
        terms.extend(t.truncated_translates(&wide).into_iter().filter(|p| p.entries().any(|(_, a, b, _)| frame.contains(a, b))));
        let quiet = commutant_with(t, &frame, &terms);
        // A random operator with no primary syndrome.
        let mut op = PauliVector::zero(t.d, t.w);
        for (q, &c) in quiet.iter().zip(coeffs.iter().cycle()) {
            op = op.add(&q.scale(c));
        }
        for g in an.gauge.secondary() {
            for s in y_translates(&g.pauli, g.y_period, &frame) {
                prop_assert_eq!(op.commutation(&s), 0, "{} secondary syndrome", name);
            }
        }
    }

    #[test]
    fn spin_ignores_endpoint_dressing(
        name in prop::sample::select(vec!["z2_toric", "z4_toric", "double_semion", "color_code", "fish_toric"]),
        pick in any::<prop::sample::Index>(),
        dress in prop::collection::vec((any::<prop::sample::Index>(), 0i64..6, 1u64..4), 1..4),
    ) {
        let an = boundary_analysis(name);
        let th = &an.theory;
        let i = pick.index(th.basis.len());
        let s = &th.basis[i].string;
        let n = s.period as i64;
        let gens = an.gauge.paulis();
        let mut local = PauliVector::zero(th.d, an.truncation.w);
        for (g, dy, c) in &dress {
            local = local.add(&gens[g.index(gens.len())].shift(0, *dy).scale(*c));
        }
        let ends = LaurentPoly::from_terms(th.d, &[(0, 0, 1), (0, n, -1)]);
        let dressed = BoundaryString { alpha: vec![], pauli: s.pauli.add(&local.mul_poly(&ends)), period: s.period };
        prop_assert_eq!(topological_spin(&dressed).unwrap(), th.spins[i]);
    }
}
