//! Lagrangian subgroups of abelian anyon theories.

use crate::anyon::AnyonTheory;
use crate::error::{Error, Result};
use crate::par;
use serde::Serialize;
use std::collections::HashSet;

/// Default cap on `|A|` for explicit enumeration.
pub const DEFAULT_CAP: u128 = 1 << 16;

/// Finite abelian group `∏ Z_{N_i}` with the quadratic form of an anyon theory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnyonGroup {
    pub d: u64,
    pub orders: Vec<u64>,
    /// Spin exponents of the basis anyons.
    pub spins: Vec<u64>,
    /// Braiding exponents between basis anyons.
    pub braiding: Vec<Vec<u64>>,
}

impl AnyonGroup {
    pub fn from_theory(t: &AnyonTheory) -> Self {
        AnyonGroup {
            d: t.d,
            orders: t.orders(),
            spins: t.spins.iter().map(|s| s.e).collect(),
            braiding: t.braiding.iter().map(|r| r.iter().map(|b| b.e).collect()).collect(),
        }
    }

    /// `n` decoupled copies of the Z_2 toric code.
    pub fn toric_copies(n: usize) -> Self {
        let k = 2 * n;
        let mut braiding = vec![vec![0; k]; k];
        for i in 0..n {
            braiding[2 * i][2 * i + 1] = 1;
            braiding[2 * i + 1][2 * i] = 1;
        }
        AnyonGroup { d: 2, orders: vec![2; k], spins: vec![0; k], braiding }
    }

    pub fn size(&self) -> u128 {
        self.orders.iter().map(|&n| n as u128).product()
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    /// Spin exponent of the element with exponents `v`.
    pub fn q(&self, v: &[u64]) -> u64 {
        let d = self.d as u128;
        let mut e: u128 = 0;
        for i in 0..v.len() {
            e += (v[i] as u128 * v[i] as u128 % d) * self.spins[i] as u128;
            for j in i + 1..v.len() {
                e += (v[i] as u128 * v[j] as u128 % d) * self.braiding[i][j] as u128;
            }
        }
        (e % d) as u64
    }

    /// Braiding exponent between two elements.
    pub fn b(&self, x: &[u64], y: &[u64]) -> u64 {
        let d = self.d as u128;
        let mut e: u128 = 0;
        for i in 0..x.len() {
            for j in 0..y.len() {
                let bij = if i == j { 2 * self.spins[i] as u128 } else { self.braiding[i][j] as u128 };
                e += (x[i] as u128 * y[j] as u128 % d) * bij;
            }
        }
        (e % d) as u64
    }
}

/// Dense element table for enumeration. Index order is lexicographic in the
/// exponent vector, first basis anyon most significant.
struct Table {
    orders: Vec<u64>,
    radix: Vec<usize>,
    n: usize,
    q: Vec<u64>,
    elems: Vec<Vec<u64>>,
    /// Per element `x`, the coefficients of the linear form `y ↦ b(x, y)`.
    forms: Vec<Vec<u64>>,
    d: u64,
}

impl Table {
    fn new(g: &AnyonGroup) -> Self {
        let n = g.size() as usize;
        let mut radix = vec![1usize; g.rank()];
        for i in (0..g.rank().saturating_sub(1)).rev() {
            radix[i] = radix[i + 1] * g.orders[i + 1] as usize;
        }
        let elems: Vec<Vec<u64>> = (0..n).map(|idx| g.orders.iter().zip(&radix).map(|(&o, &r)| ((idx / r) as u64) % o).collect()).collect();
        let q = par::map(&elems, |e| g.q(e));
        let forms = par::map(&elems, |x| {
            (0..g.rank())
                .map(|j| {
                    let mut e = 0u128;
                    for (i, &xi) in x.iter().enumerate() {
                        let bij = if i == j { 2 * g.spins[i] } else { g.braiding[i][j] };
                        e += xi as u128 * bij as u128;
                    }
                    (e % g.d as u128) as u64
                })
                .collect()
        });
        Table { orders: g.orders.clone(), radix, n, q, elems, forms, d: g.d }
    }

    fn b(&self, i: usize, j: usize) -> u64 {
        let e: u128 = self.forms[i].iter().zip(&self.elems[j]).map(|(&f, &y)| f as u128 * y as u128).sum();
        (e % self.d as u128) as u64
    }

    fn add(&self, i: usize, j: usize) -> usize {
        let (a, b) = (&self.elems[i], &self.elems[j]);
        a.iter().zip(b).zip(&self.orders).zip(&self.radix).map(|(((&x, &y), &o), &r)| ((x + y) % o) as usize * r).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct LagrangianSubgroup {
    pub generators: Vec<Vec<u64>>,
    pub elements: Vec<Vec<u64>>,
}

fn words(n: usize) -> usize {
    n.div_ceil(64)
}

fn has(bits: &[u64], i: usize) -> bool {
    bits[i / 64] >> (i % 64) & 1 == 1
}

/// Closure of `members ∪ {x}` under addition.
fn extend(t: &Table, members: &[usize], x: usize) -> Vec<usize> {
    let mut out = members.to_vec();
    let mut seen: HashSet<usize> = members.iter().copied().collect();
    let mut mult = x;
    while !seen.contains(&mult) {
        let layer: Vec<usize> = members.iter().map(|&m| t.add(m, mult)).collect();
        for e in layer {
            if seen.insert(e) {
                out.push(e);
            }
        }
        mult = t.add(mult, x);
    }
    out.sort_unstable();
    out
}

/// Lexicographically greedy generating set of a subgroup.
fn generators(t: &Table, members: &[usize]) -> Vec<usize> {
    let mut span = vec![0usize];
    let mut gens = Vec::new();
    for &m in members {
        if !span.contains(&m) {
            gens.push(m);
            span = extend(t, &span, m);
        }
    }
    gens
}

/// All Lagrangian subgroups, ordered by their sorted generator vectors.
pub fn enumerate_lagrangians(g: &AnyonGroup, cap: u128) -> Result<Vec<LagrangianSubgroup>> {
    let size = g.size();
    if size > cap {
        return Err(Error::GroupTooLarge { order: size, cap });
    }
    let t = Table::new(g);
    let b = |i: usize, j: usize| t.b(i, j);
    let bosons: Vec<usize> = (1..t.n).filter(|&i| t.q[i] == 0).collect();
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut frontier: Vec<Vec<usize>> = vec![vec![0]];
    let mut found = Vec::new();
    while !frontier.is_empty() {
        let next: Vec<Vec<Vec<usize>>> = par::map(&frontier, |members| {
            let mut bits = vec![0u64; words(t.n)];
            for &m in members {
                bits[m / 64] |= 1 << (m % 64);
            }
            let gens = generators(&t, members);
            // `x` and `x + m` give the same extension; keep the smallest of each coset.
            bosons
                .iter()
                .filter(|&&x| !has(&bits, x) && gens.iter().all(|&gi| b(gi, x) == 0))
                .filter(|&&x| members.iter().all(|&m| t.add(x, m) >= x))
                .map(|&x| extend(&t, members, x))
                .collect()
        });
        let mut fresh = Vec::new();
        for members in frontier {
            // The perpendicular subgroup has at least |G|/|M| elements.
            if (members.len() as u128).pow(2) < size {
                continue;
            }
            let gens = generators(&t, &members);
            let perp = (0..t.n).filter(|&y| gens.iter().all(|&gi| b(gi, y) == 0)).count();
            if perp == members.len() {
                found.push(members);
            }
        }
        for list in next {
            for members in list {
                let mut bits = vec![0u64; words(t.n)];
                for &m in &members {
                    bits[m / 64] |= 1 << (m % 64);
                }
                if seen.insert(bits) {
                    fresh.push(members);
                }
            }
        }
        fresh.sort();
        frontier = fresh;
    }
    let mut out: Vec<LagrangianSubgroup> = found
        .into_iter()
        .map(|members| {
            let gens = generators(&t, &members);
            LagrangianSubgroup {
                generators: gens.iter().map(|&i| t.elems[i].clone()).collect(),
                elements: members.iter().map(|&i| t.elems[i].clone()).collect(),
            }
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Whether `gens` generate a Lagrangian subgroup of `g`.
pub fn is_lagrangian(g: &AnyonGroup, gens: &[Vec<u64>]) -> bool {
    if g.size() > DEFAULT_CAP {
        return false;
    }
    let t = Table::new(g);
    let idx = |v: &[u64]| v.iter().zip(&t.radix).zip(&t.orders).map(|((&x, &r), &o)| (x % o) as usize * r).sum::<usize>();
    let mut members = vec![0usize];
    for v in gens {
        members = extend(&t, &members, idx(v));
    }
    let iso = members.iter().all(|&m| t.q[m] == 0);
    let perp = (0..t.n).filter(|&y| gens.iter().all(|gv| g.b(gv, &t.elems[y]) == 0)).count();
    iso && perp == members.len()
}

/// `∏_{i<n} (2^i + 1)`, the number of Lagrangian subgroups of `n` Z_2 toric codes.
pub fn count_lagrangians_z2n(n: u32) -> u128 {
    (0..n).map(|i| (1u128 << i) + 1).product()
}

/// Number of `k`-dimensional subspaces of `Z_2^n`.
pub fn subspace_count(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let mut row = vec![1u128];
    for m in 1..=n {
        let mut next = vec![0u128; (m + 1) as usize];
        for j in 0..=m as usize {
            let stay = if j < row.len() { row[j] << j } else { 0 };
            let grow = if j >= 1 { row[j - 1] } else { 0 };
            next[j] = stay + grow;
        }
        row = next;
    }
    row[k as usize]
}

/// Arf invariant of a nondegenerate form on an elementary abelian 2-group;
/// `None` if some order differs from 2 or the form is degenerate.
pub fn arf_invariant(g: &AnyonGroup) -> Option<u64> {
    if g.d != 2 || g.orders.iter().any(|&o| o != 2) || g.rank() > 128 {
        return None;
    }
    let k = g.rank();
    let unit = |i: usize| -> u128 { 1 << i };
    let vecs = |x: u128| -> Vec<u64> { (0..k).map(|i| (x >> i & 1) as u64).collect() };
    let bf = |x: u128, y: u128| g.b(&vecs(x), &vecs(y));
    let mut pool: Vec<u128> = (0..k).map(unit).collect();
    let mut arf = 0;
    while let Some(a) = pool.pop() {
        let Some(pos) = pool.iter().position(|&c| bf(a, c) == 1) else { return None };
        let c = pool.remove(pos);
        arf ^= g.q(&vecs(a)) * g.q(&vecs(c));
        pool = pool.into_iter().map(|v| v ^ if bf(v, c) == 1 { a } else { 0 } ^ if bf(v, a) == 1 { c } else { 0 }).collect();
    }
    Some(arf & 1)
}

/// Number of Lagrangian subgroups: by enumeration under the cap, else by the
/// closed form when the theory is a stack of Z_2 toric codes.
pub fn count_lagrangians(g: &AnyonGroup, cap: u128) -> Result<u128> {
    if g.size() <= cap {
        return Ok(enumerate_lagrangians(g, cap)?.len() as u128);
    }
    match arf_invariant(g) {
        Some(0) => Ok(count_lagrangians_z2n((g.rank() / 2) as u32)),
        _ => Err(Error::GroupTooLarge { order: g.size(), cap }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_values() {
        assert_eq!(count_lagrangians_z2n(1), 2);
        assert_eq!(count_lagrangians_z2n(4), 270);
        assert_eq!(count_lagrangians_z2n(8), 1_270_075_950);
        assert_eq!(count_lagrangians_z2n(10), 167_448_083_323_950);
    }

    #[test]
    fn subspace_recurrence() {
        for n in 0..8u32 {
            for k in 1..=n {
                assert_eq!(subspace_count(n + 1, k), (subspace_count(n, k) << k) + subspace_count(n, k - 1));
            }
        }
        assert_eq!(subspace_count(4, 2), 35);
    }

    #[test]
    fn toric_copies_small() {
        assert_eq!(enumerate_lagrangians(&AnyonGroup::toric_copies(1), DEFAULT_CAP).unwrap().len(), 2);
        assert_eq!(enumerate_lagrangians(&AnyonGroup::toric_copies(2), DEFAULT_CAP).unwrap().len(), 6);
    }

    #[test]
    fn three_fermion_has_no_lagrangian() {
        let g = AnyonGroup { d: 2, orders: vec![2, 2], spins: vec![1, 1], braiding: vec![vec![0, 1], vec![1, 0]] };
        assert!(enumerate_lagrangians(&g, DEFAULT_CAP).unwrap().is_empty());
        assert_eq!(arf_invariant(&g), Some(1));
        assert_eq!(arf_invariant(&AnyonGroup::toric_copies(3)), Some(0));
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(enumerate_lagrangians(&AnyonGroup::toric_copies(9), DEFAULT_CAP), Err(Error::GroupTooLarge { .. })));
        assert_eq!(count_lagrangians(&AnyonGroup::toric_copies(9), DEFAULT_CAP).unwrap(), count_lagrangians_z2n(9));
    }
}
