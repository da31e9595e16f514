//! Property tests for modular arithmetic, Laurent polynomials, elimination and
//! Smith normal form, checked against brute-force oracles.

use anyonlab::arith::*;
use anyonlab::mge::{in_span, mge, Matrix, SpanBasis};
use anyonlab::poly::*;
use anyonlab::snf::*;
use proptest::prelude::*;
use std::collections::BTreeSet;

const MODULI: [u64; 7] = [2, 3, 4, 6, 8, 9, 12];

fn modulus() -> impl Strategy<Value = u64> {
    prop::sample::select(MODULI.to_vec())
}

/// Every `Z_d`-combination of `rows`, by closure.
fn span_of(d: u64, width: usize, rows: &[Vec<u64>]) -> BTreeSet<Vec<u64>> {
    let mut seen = BTreeSet::from([vec![0; width]]);
    let mut frontier = vec![vec![0; width]];
    while let Some(v) = frontier.pop() {
        for r in rows {
            let n: Vec<u64> = v.iter().zip(r).map(|(a, b)| (a + b) % d).collect();
            if seen.insert(n.clone()) {
                frontier.push(n);
            }
        }
    }
    seen
}

/// All `c` with `c·m = 0`, by enumeration.
fn kernel(m: &Matrix) -> BTreeSet<Vec<u64>> {
    let r = m.rows.len();
    let total = m.d.pow(r as u32);
    (0..total)
        .map(|mut k| {
            (0..r)
                .map(|_| {
                    let c = k % m.d;
                    k /= m.d;
                    c
                })
                .collect::<Vec<u64>>()
        })
        .filter(|c| m.left_mul(c).iter().all(|&x| x == 0))
        .collect()
}

fn small_matrix() -> impl Strategy<Value = Matrix> {
    (modulus(), 1usize..=3, 1usize..=3).prop_flat_map(|(d, r, c)| {
        prop::collection::vec(prop::collection::vec(0..d, c), r).prop_map(move |rows| Matrix::from_rows(d, c, rows))
    })
}

fn poly(d: u64) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-2i64..=2, -2i64..=2, 0..d as i64), 0..5).prop_map(move |t| LaurentPoly::from_terms(d, &t))
}

fn pauli(d: u64, w: usize) -> impl Strategy<Value = PauliVector> {
    prop::collection::vec(poly(d), 2 * w).prop_map(move |s| PauliVector::from_slots(d, s).unwrap())
}

proptest! {
    #[test]
    fn modular_ring_laws(d in modulus(), a in 0u64..100, b in 0u64..100, c in 0u64..100) {
        let m = Modulus::new(d).unwrap();
        let (a, b, c) = (a % d, b % d, c % d);
        prop_assert_eq!(m.add(a, b), m.add(b, a));
        prop_assert_eq!(m.mul(a, m.add(b, c)), m.add(m.mul(a, b), m.mul(a, c)));
        prop_assert_eq!(m.add(a, m.neg(a)), 0);
        prop_assert_eq!(m.sub(a, b), m.add(a, m.neg(b)));
    }

    #[test]
    fn inverse_exists_exactly_for_units(d in modulus(), a in 0u64..100) {
        let m = Modulus::new(d).unwrap();
        let brute = (1..d).find(|&u| (a % d) * u % d == 1);
        match zd_inverse(a, &m) {
            Ok(u) => prop_assert_eq!(Some(u), brute),
            Err(_) => prop_assert!(brute.is_none()),
        }
        prop_assert_eq!(m.is_unit(a), brute.is_some());
    }

    #[test]
    fn associate_representative_is_gcd(d in modulus(), a in 0u64..100) {
        let m = Modulus::new(d).unwrap();
        let (rep, u) = associate_normalize(a, &m);
        prop_assert!(m.is_unit(u));
        prop_assert_eq!(m.mul(u, a % d), rep);
        let class: BTreeSet<u64> = (1..d).filter(|&v| m.is_unit(v)).map(|v| m.mul(v, a % d)).collect();
        prop_assert_eq!(Some(rep), class.iter().copied().filter(|&x| x > 0).min().or(Some(0)));
    }

    #[test]
    fn gcd_chain_certificate(d in modulus(), vals in prop::collection::vec(0u64..20, 0..5)) {
        let m = Modulus::new(d).unwrap();
        let (g, c) = ext_gcd_chain(&vals, &m);
        let expect = vals.iter().fold(d, |acc, &v| gcd(acc, v % d)) % d;
        prop_assert_eq!(g, expect);
        let combo: i128 = vals.iter().zip(&c).map(|(&v, &k)| v as i128 * k as i128).sum();
        prop_assert_eq!(m.reduce(combo), g);
    }

    #[test]
    fn series_inverse_cancels(d in modulus(), low in -3i64..3, coeffs in prop::collection::vec(0u64..12, 1..5), order in 0usize..8) {
        let m = Modulus::new(d).unwrap();
        let f = FormalSeries::new(low, coeffs, &m);
        match series_inverse(&f, &m, order) {
            Ok(g) => {
                let p = f.mul(&g, &m);
                for deg in p.lowest_degree..=order as i64 {
                    prop_assert_eq!(p.coeff(deg), u64::from(deg == 0), "degree {}", deg);
                }
            }
            Err(_) => prop_assert!(!series_is_unit(&f, &m)),
        }
    }

    #[test]
    fn polynomial_ring_laws((f, g, h) in modulus().prop_flat_map(|d| (poly(d), poly(d), poly(d)))) {
        prop_assert_eq!(f.mul(&g), g.mul(&f));
        prop_assert_eq!(f.mul(&g.add(&h)), f.mul(&g).add(&f.mul(&h)));
        prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
        prop_assert_eq!(f.antipode().antipode(), f.clone());
        prop_assert_eq!(f.mul(&g).antipode(), f.antipode().mul(&g.antipode()));
        prop_assert!(f.sub(&f).is_zero());
    }

    #[test]
    fn symplectic_form_is_antisymmetric((p, q) in modulus().prop_flat_map(|d| (pauli(d, 2), pauli(d, 2))), a in -3i64..3, b in -3i64..3) {
        let d = p.d();
        let pq = dot(&p, &q).unwrap();
        let qp = dot(&q, &p).unwrap();
        prop_assert_eq!(pq.add(&qp.antipode()), LaurentPoly::zero(d));
        prop_assert!(dot(&p, &p).unwrap().constant_term() == 0);
        // Coefficient of x^a y^b is the commutation with q moved by -(a, b).
        prop_assert_eq!(pq.coeff(a, b), p.commutation(&q.shift(-a, -b)));
    }

    #[test]
    fn truncation_round_trips(p in modulus().prop_flat_map(|d| pauli(d, 2))) {
        let v = truncate(&p, 3).unwrap();
        prop_assert_eq!(untruncate(&v), p);
    }

    #[test]
    fn mge_relations_are_exactly_the_kernel(m in small_matrix()) {
        let res = mge(&m);
        for r in &res.relations {
            prop_assert!(m.left_mul(r).iter().all(|&x| x == 0), "unsound relation {:?}", r);
        }
        prop_assert_eq!(span_of(m.d, m.rows.len(), &res.relations), kernel(&m));
    }

    #[test]
    fn mge_echelon_spans_the_rows(m in small_matrix()) {
        let res = mge(&m);
        for (t, e) in res.transform.iter().zip(&res.echelon) {
            prop_assert_eq!(&m.left_mul(t), e);
        }
        let rows = span_of(m.d, m.cols, &m.rows);
        prop_assert_eq!(span_of(m.d, m.cols, &res.echelon), rows.clone());
        for (c, g) in &res.pivots {
            prop_assert_eq!(m.d % g, 0, "pivot {} at column {} does not divide d", g, c);
        }
        let everything = span_of(m.d, m.cols, &Matrix::identity(m.d, m.cols).rows);
        for v in everything {
            prop_assert_eq!(in_span(&v, &res).is_some(), rows.contains(&v));
        }
    }

    #[test]
    fn span_basis_membership(m in small_matrix()) {
        let mut basis = SpanBasis::new(m.d, m.cols);
        for r in &m.rows {
            basis.insert(r);
        }
        let rows = span_of(m.d, m.cols, &m.rows);
        let everything = span_of(m.d, m.cols, &Matrix::identity(m.d, m.cols).rows);
        for v in everything {
            prop_assert_eq!(basis.contains(&v), rows.contains(&v));
        }
    }

    #[test]
    fn snf_transforms_are_consistent(m in prop::collection::vec(prop::collection::vec(-9i128..10, 3), 1..4)) {
        let s = smith_normal_form_int(&m, 3);
        prop_assert_eq!(mat_mul(&mat_mul(&s.p, &m), &s.q), s.a.clone());
        let n = s.q.len();
        let id: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect();
        prop_assert_eq!(mat_mul(&s.q, &s.q_inv), id);
        for (i, row) in s.a.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                prop_assert!(i == j || x == 0);
            }
        }
        for w in s.diagonal.windows(2) {
            prop_assert!(w[0] >= 0 && (w[0] == 0 && w[1] == 0 || w[0] != 0 && w[1] % w[0] == 0));
        }
    }
}

#[test]
fn z8_worked_example_relations() {
    let m = Matrix::from_rows(8, 3, vec![vec![4, 2, 0], vec![6, 0, 3], vec![0, 7, 4]]);
    let res = mge(&m);
    let expect = span_of(8, 3, &[vec![2, 0, 4], vec![4, 0, 0]]);
    assert_eq!(span_of(8, 3, &res.relations), expect);
    assert_eq!(kernel(&m), expect);
}

#[test]
fn mge_exhaustive_small_matrices() {
    for (d, r, c) in [(4u64, 2usize, 2usize), (6, 2, 2), (2, 3, 3)] {
        let n = r * c;
        for code in 0..d.pow(n as u32) {
            let mut k = code;
            let entries: Vec<u64> = (0..n)
                .map(|_| {
                    let e = k % d;
                    k /= d;
                    e
                })
                .collect();
            let m = Matrix::from_rows(d, c, entries.chunks(c).map(<[u64]>::to_vec).collect());
            let res = mge(&m);
            assert_eq!(span_of(d, r, &res.relations), kernel(&m), "relations of {:?}", m.rows);
            assert_eq!(span_of(d, c, &res.echelon), span_of(d, c, &m.rows), "row span of {:?}", m.rows);
        }
    }
}
