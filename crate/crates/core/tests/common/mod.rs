//! Reference anyon theories and a brute-force isomorphism oracle.

#![allow(dead_code)]

use anyonlab::lagrangian::AnyonGroup;

/// Reference theory on `orders` with spin and braiding exponents over `d`.
pub fn theory(d: u64, orders: &[u64], spins: &[u64], pairs: &[(usize, usize, u64)]) -> AnyonGroup {
    let n = orders.len();
    let mut braiding = vec![vec![0; n]; n];
    for &(i, j, e) in pairs {
        braiding[i][j] = e;
        braiding[j][i] = e;
    }
    AnyonGroup { d, orders: orders.to_vec(), spins: spins.to_vec(), braiding }
}

pub fn stack(a: &AnyonGroup, b: &AnyonGroup) -> AnyonGroup {
    assert_eq!(a.d, b.d);
    let (n, m) = (a.rank(), b.rank());
    let mut braiding = vec![vec![0; n + m]; n + m];
    for i in 0..n {
        braiding[i][..n].copy_from_slice(&a.braiding[i]);
    }
    for i in 0..m {
        braiding[n + i][n..].copy_from_slice(&b.braiding[i]);
    }
    AnyonGroup {
        d: a.d,
        orders: [a.orders.clone(), b.orders.clone()].concat(),
        spins: [a.spins.clone(), b.spins.clone()].concat(),
        braiding,
    }
}

fn elements(g: &AnyonGroup) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for &o in &g.orders {
        out = out.into_iter().flat_map(|v| (0..o).map(move |k| [v.clone(), vec![k]].concat())).collect();
    }
    out
}

fn scale(e: u64, from: u64, to: u64) -> u64 {
    e * (to / from) % to
}

fn add(g: &AnyonGroup, x: &[u64], y: &[u64]) -> Vec<u64> {
    x.iter().zip(y).zip(&g.orders).map(|((a, b), o)| (a + b) % o).collect()
}

fn times(g: &AnyonGroup, x: &[u64], k: u64) -> Vec<u64> {
    x.iter().zip(&g.orders).map(|(a, o)| a * k % o).collect()
}

/// Brute-force search for a group isomorphism `reference → got` preserving
/// spins and braiding, with exponents compared over a common denominator.
struct Iso<'a> {
    reference: &'a AnyonGroup,
    got: &'a AnyonGroup,
    elems: Vec<Vec<u64>>,
    l: u64,
}

impl Iso<'_> {
    fn ref_q(&self, i: usize) -> u64 {
        scale(self.reference.spins[i], self.reference.d, self.l)
    }

    fn ref_b(&self, i: usize, j: usize) -> u64 {
        scale(self.reference.braiding[i][j], self.reference.d, self.l)
    }

    fn search(&self, images: &mut Vec<Vec<u64>>) -> bool {
        let got = self.got;
        let zero = vec![0; got.rank()];
        let k = images.len();
        if k == self.reference.rank() {
            // Surjective onto a group of the same size means bijective.
            let mut reached = std::collections::HashSet::from([zero]);
            for img in images.iter() {
                let snapshot: Vec<Vec<u64>> = reached.iter().cloned().collect();
                for mut v in snapshot {
                    loop {
                        v = add(got, &v, img);
                        if !reached.insert(v.clone()) {
                            break;
                        }
                    }
                }
            }
            return reached.len() as u128 == got.size();
        }
        for e in &self.elems {
            if times(got, e, self.reference.orders[k]) != zero || scale(got.q(e), got.d, self.l) != self.ref_q(k) {
                continue;
            }
            if (0..k).any(|j| scale(got.b(&images[j], e), got.d, self.l) != self.ref_b(j, k)) {
                continue;
            }
            images.push(e.clone());
            if self.search(images) {
                return true;
            }
            images.pop();
        }
        false
    }
}

pub fn isomorphic(reference: &AnyonGroup, got: &AnyonGroup) -> bool {
    if reference.size() != got.size() {
        return false;
    }
    let l = reference.d.max(got.d);
    assert!(l % reference.d == 0 && l % got.d == 0, "phase denominators must divide each other");
    Iso { reference, got, elems: elements(got), l }.search(&mut Vec::new())
}

pub fn toric(d: u64) -> AnyonGroup {
    theory(d, &[d, d], &[0, 0], &[(0, 1, 1)])
}
