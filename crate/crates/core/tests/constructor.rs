//! Boundary and defect constructions: condensation, completion, the
//! topological-order check, strings through boundaries and defect endpoints.

use anyonlab::anyon::EngineOptions;
use anyonlab::boundary::{SolveOptions, Truncation};
use anyonlab::catalog::{builtin, Side};
use anyonlab::constructor::*;
use anyonlab::error::Error;
use anyonlab::frame::Frame;
use anyonlab::lagrangian::{count_lagrangians_z2n, enumerate_lagrangians, AnyonGroup, LagrangianSubgroup, DEFAULT_CAP};
use anyonlab::mge::SpanBasis;
use anyonlab::poly::PauliVector;
use anyonlab::report::default_corridor;
use std::collections::BTreeSet;

fn boundary(name: &str) -> Analysis {
    let spec = builtin(name).unwrap();
    let t = Truncation::boundary(&spec, Side::Left, spec.smooth_mask.clone()).unwrap();
    analyze(t, SolveOptions::default(), &EngineOptions::default()).unwrap()
}

fn defect(name: &str, reverse: bool) -> Analysis {
    let spec = builtin(name).unwrap();
    build_defect(&spec, &spec, reverse, SolveOptions::default(), &EngineOptions::default()).unwrap()
}

fn built(an: &Analysis) -> Vec<(LagrangianSubgroup, BoundaryHamiltonian)> {
    construct_all(an, DEFAULT_CAP, &ConstructOptions::default())
        .unwrap()
        .into_iter()
        .map(|(l, h)| (l, h.unwrap()))
        .collect()
}

fn completions(h: &BoundaryHamiltonian) -> usize {
    h.terms.iter().filter(|t| t.origin == Origin::Completion).count()
}

/// `(left, right)` charge pairs of the strings through the default corridor.
fn charges(h: &BoundaryHamiltonian) -> BTreeSet<(Vec<usize>, Vec<usize>)> {
    bulk_strings_through(h, default_corridor(h)).into_iter().map(|s| (s.left_charge, s.right_charge)).collect()
}

/// Whether some y-translate of `p` appears in `ops`.
fn has_translate(ops: &[PauliVector], p: &PauliVector) -> bool {
    let b = p.bounds().unwrap();
    ops.iter().any(|o| o.bounds().is_some_and(|ob| ob.0 == b.0 && &p.shift(0, ob.2 - b.2) == o))
}

#[test]
fn z2_boundaries_condense_e_and_m() {
    let hs = built(&boundary("z2_toric"));
    assert_eq!(hs.len(), 2);
    let mut seen = BTreeSet::new();
    for (_, h) in &hs {
        assert!(h.certificate.as_ref().unwrap().passed);
        let c = charges(h);
        // Exactly one anyon type terminates; the other is confined.
        assert_eq!(c.len(), 1, "{c:?}");
        let (left, right) = c.into_iter().next().unwrap();
        assert!(right.is_empty());
        seen.insert(left);
    }
    assert_eq!(seen, BTreeSet::from([vec![0], vec![1]]));
}

#[test]
fn z2_e_boundary_needs_no_completion() {
    let hs = built(&boundary("z2_toric"));
    let (_, e) = hs.iter().find(|(_, h)| charges(h).contains(&(vec![0], vec![]))).unwrap();
    assert_eq!(completions(e), 0);
}

#[test]
fn fish_boundaries_need_completion() {
    for (l, h) in built(&boundary("fish_toric")) {
        assert!(completions(&h) >= 1, "{:?}", l.generators);
        assert!(h.certificate.unwrap().passed);
    }
}

#[test]
fn completion_is_idempotent() {
    for (_, h) in built(&boundary("fish_toric")) {
        let again = to_complete(h.clone(), &ConstructOptions::default()).unwrap();
        assert_eq!(again.terms, h.terms);
    }
}

#[test]
fn deleting_the_condensed_string_breaks_the_order_condition() {
    let hs = built(&boundary("z2_toric"));
    let (_, h) = hs.iter().find(|(_, h)| completions(h) == 0).unwrap();
    let mut cut = h.clone();
    let deleted = cut.terms.remove(0);
    assert_eq!(deleted.origin, Origin::Condensed);
    let report = verify_to_condition(&cut, None);
    assert!(!report.passed);
    assert!(has_translate(&report.counterexamples, &deleted.pauli));
}

#[test]
fn double_semion_cannot_condense_the_semion() {
    let an = boundary("double_semion");
    let g = AnyonGroup::from_theory(&an.theory);
    let s = (0..g.rank()).find(|&i| g.spins[i] != 0).expect("a basis anyon with nontrivial spin");
    let mut gen = vec![0; g.rank()];
    gen[s] = 1;
    let fake = LagrangianSubgroup { generators: vec![gen.clone()], elements: vec![vec![0; g.rank()], gen] };
    assert!(matches!(condense(&an, &fake, &ConstructOptions::default()), Err(Error::CommutationFailure(_, _))));
    // The genuine boundary condenses the boson.
    let hs = built(&an);
    assert_eq!(hs.len(), 1);
    assert!(hs[0].1.certificate.as_ref().unwrap().passed);
}

#[test]
fn empty_lagrangian_condenses_nothing() {
    let an = boundary("z2_toric");
    let empty = LagrangianSubgroup { generators: vec![], elements: vec![vec![0, 0]] };
    let h = condense(&an, &empty, &ConstructOptions::default()).unwrap();
    assert!(h.terms.is_empty());
}

#[test]
fn pure_bulk_windows_pass() {
    for name in ["z2_toric", "z4_toric", "fish_toric", "double_semion", "color_code"] {
        let an = boundary(name);
        let (ex, ey) = an.truncation.extent();
        let (_, h) = built(&an).into_iter().next().unwrap();
        let x1 = an.truncation.core.0 - 4 * ex - 2;
        let report = verify_to_condition(&h, Some([x1 - 2 * ex - 2, x1, 0, 2 * ey + 2]));
        assert!(report.passed, "{name}: {} counterexamples", report.counterexample_count);
    }
}

#[test]
fn every_z2_and_fish_construction_commutes_and_passes() {
    for an in [boundary("z2_toric"), boundary("fish_toric"), defect("z2_toric", false), defect("fish_toric", false)] {
        for (l, h) in built(&an) {
            h.check_commutation().unwrap();
            assert!(h.certificate.unwrap().passed, "{:?}", l.generators);
        }
    }
}

#[test]
fn orientation_reversed_double_semion_defects_pass() {
    let hs = built(&defect("double_semion", true));
    assert!(!hs.is_empty());
    for (l, h) in hs {
        h.check_commutation().unwrap();
        assert!(h.certificate.unwrap().passed, "{:?}", l.generators);
    }
}

#[test]
fn completion_seed_does_not_change_what_condenses() {
    let an = boundary("fish_toric");
    let lagrangians = enumerate_lagrangians(&AnyonGroup::from_theory(&an.theory), DEFAULT_CAP).unwrap();
    for l in &lagrangians {
        let reference = construct(&an, l, &ConstructOptions::default()).unwrap();
        for seed in [1, 2, 7] {
            let h = construct(&an, l, &ConstructOptions { seed: Some(seed), ..Default::default() }).unwrap();
            assert!(h.certificate.as_ref().unwrap().passed);
            assert_eq!(charges(&h), charges(&reference), "seed {seed}");
        }
    }
}

#[test]
fn confined_anyons_have_no_terminating_strings() {
    for name in ["z2_toric", "z4_toric"] {
        // Boundaries condensing the powers of a single charge type: strings of
        // the other type are confined, so only one charge ever terminates.
        let mut kinds = BTreeSet::new();
        for (l, h) in built(&boundary(name)) {
            if l.generators.len() != 1 {
                continue;
            }
            let c = charges(&h);
            assert_eq!(c.len(), 1, "{name} {:?}: {c:?}", l.generators);
            kinds.extend(c);
        }
        assert_eq!(kinds, BTreeSet::from([(vec![0], vec![]), (vec![1], vec![])]), "{name}");
    }
}

/// The six z2 defects, classified by how charges cross.
fn z2_defects() -> Vec<(BoundaryHamiltonian, BTreeSet<(Vec<usize>, Vec<usize>)>)> {
    built(&defect("z2_toric", false)).into_iter().map(|(_, h)| (charges(&h), h)).map(|(c, h)| (h, c)).collect()
}

fn trivial_and_exchange() -> (BoundaryHamiltonian, BoundaryHamiltonian) {
    let mut trivial = None;
    let mut exchange = None;
    for (h, c) in z2_defects() {
        if c == BTreeSet::from([(vec![0], vec![0]), (vec![1], vec![1])]) {
            trivial = Some(h);
        } else if c == BTreeSet::from([(vec![0], vec![1]), (vec![1], vec![0])]) {
            exchange = Some(h);
        }
    }
    (trivial.expect("trivial defect"), exchange.expect("exchange defect"))
}

#[test]
fn z2_defects_classify() {
    let all = z2_defects();
    assert_eq!(all.len(), 6);
    // Four defects factorize into two boundaries: no string crosses.
    let factorized = all.iter().filter(|(_, c)| c.iter().all(|(l, r)| l.is_empty() || r.is_empty())).count();
    assert_eq!(factorized, 4);
    trivial_and_exchange();
}

/// Span of `ops` restricted to `frame`.
fn span(d: u64, frame: &Frame, ops: &[PauliVector]) -> SpanBasis {
    let mut s = SpanBasis::new(d, frame.width());
    for o in ops {
        if let Some(v) = frame.encode(o) {
            s.insert(&v);
        }
    }
    s
}

#[test]
fn trivial_defect_reproduces_the_bulk_across_the_cut() {
    let (h, _) = trivial_and_exchange();
    let t = &h.truncation;
    let spec = builtin("z2_toric").unwrap();
    let (lo, hi) = t.core;
    let frame = Frame::new(t.w, lo - 8, hi + 8, -8, 12);
    let terms = span(t.d, &frame, &h.instances(&frame, true));
    let inner = Frame::new(t.w, lo - 3, hi + 3, 0, 4);
    let mut crossing = 0;
    for g in &spec.stabilizers {
        for (sa, sb) in inner.inner_shifts(g.bounds().unwrap()) {
            let s = g.shift(sa, sb);
            if t.parts.iter().any(|p| p.contains_op(&s)) {
                continue;
            }
            crossing += 1;
            assert!(terms.contains(&frame.encode(&s).unwrap()), "bulk term {s:?} missing across the cut");
        }
    }
    assert!(crossing > 0);
}

#[test]
fn trivial_defect_endpoint_adds_only_bulk_terms() {
    let (h, _) = trivial_and_exchange();
    let t = &h.truncation;
    let spec = builtin("z2_toric").unwrap();
    let (lo, hi) = t.core;
    let frame = Frame::new(t.w, lo - 12, hi + 12, -16, 16);
    let mut bulk = Vec::new();
    for g in &spec.stabilizers {
        bulk.extend(frame.inner_shifts(g.bounds().unwrap()).map(|(sa, sb)| g.shift(sa, sb)));
    }
    let bulk = span(t.d, &frame, &bulk);
    for e in complete_defect_endpoint(&h, None, &ConstructOptions::default()).unwrap() {
        assert!(bulk.contains(&frame.encode(&e).unwrap()), "endpoint term {e:?} is not a bulk stabilizer");
    }
}

#[test]
fn exchange_defect_endpoint_needs_terms() {
    let (_, h) = trivial_and_exchange();
    let terms = complete_defect_endpoint(&h, None, &ConstructOptions::default()).unwrap();
    assert!(!terms.is_empty());
}

#[test]
fn endpoints_require_matching_codes() {
    let an = build_defect(
        &builtin("z2_toric").unwrap(),
        &builtin("fish_toric").unwrap(),
        false,
        SolveOptions::default(),
        &EngineOptions::default(),
    )
    .unwrap();
    let (_, h) = built(&an).into_iter().next().unwrap();
    assert!(matches!(complete_defect_endpoint(&h, None, &ConstructOptions::default()), Err(Error::IncompatibleCodes(_))));
}

/// Ordered bases of Lagrangian subspaces of `n` toric-code copies, counted by
/// depth-first search and divided by `|GL(n, 2)|`.
fn lagrangians_by_bases(n: usize) -> u128 {
    let g = AnyonGroup::toric_copies(n);
    let vectors: Vec<Vec<u64>> = (1u32..1 << (2 * n)).map(|m| (0..2 * n).map(|i| u64::from(m >> i & 1 == 1)).collect()).collect();
    let bosons: Vec<&Vec<u64>> = vectors.iter().filter(|v| g.q(v) == 0).collect();
    fn go(g: &AnyonGroup, bosons: &[&Vec<u64>], chosen: &mut Vec<Vec<u64>>, span: &mut BTreeSet<Vec<u64>>, n: usize) -> u128 {
        if chosen.len() == n {
            return 1;
        }
        let mut total = 0;
        for v in bosons {
            if span.contains(*v) || chosen.iter().any(|c| g.b(c, v) != 0) {
                continue;
            }
            let added: Vec<Vec<u64>> = span.iter().map(|s| s.iter().zip(v.iter()).map(|(a, b)| (a + b) % 2).collect()).collect();
            let fresh: Vec<Vec<u64>> = added.into_iter().filter(|a| !span.contains(a)).collect();
            span.extend(fresh.iter().cloned());
            chosen.push((*v).clone());
            total += go(g, bosons, chosen, span, n);
            chosen.pop();
            for f in &fresh {
                span.remove(f);
            }
        }
        total
    }
    let mut span = BTreeSet::from([vec![0; 2 * n]]);
    let bases = go(&g, &bosons, &mut Vec::new(), &mut span, n);
    let gl: u128 = (0..n).map(|i| (1u128 << n) - (1u128 << i)).product();
    bases / gl
}

#[test]
fn lagrangian_counts_match_independent_enumeration() {
    let expect = [2u128, 6, 30, 270];
    for (n, &e) in (1..=4).zip(&expect) {
        assert_eq!(lagrangians_by_bases(n), e, "bases, n = {n}");
        assert_eq!(count_lagrangians_z2n(n as u32), e, "formula, n = {n}");
        let listed = enumerate_lagrangians(&AnyonGroup::toric_copies(n), DEFAULT_CAP).unwrap();
        assert_eq!(listed.len() as u128, e, "enumeration, n = {n}");
    }
}
