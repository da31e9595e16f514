//! Laurent polynomials in `x, y` over `Z_d` and Pauli operators built from them.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Exponent pair of `x^a y^b`. Ordered by `b` first, then `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub b: i64,
    pub a: i64,
}

impl Monomial {
    #[inline]
    pub const fn new(a: i64, b: i64) -> Self {
        Monomial { b, a }
    }

    #[inline]
    pub fn shift(self, a: i64, b: i64) -> Self {
        Monomial { a: self.a + a, b: self.b + b }
    }
}

/// A Laurent polynomial over `Z_d`. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    d: u64,
    terms: BTreeMap<Monomial, u64>,
}

impl LaurentPoly {
    pub fn zero(d: u64) -> Self {
        LaurentPoly { d, terms: BTreeMap::new() }
    }

    pub fn one(d: u64) -> Self {
        Self::monomial(d, 0, 0, 1)
    }

    pub fn monomial(d: u64, a: i64, b: i64, c: i64) -> Self {
        let mut p = Self::zero(d);
        p.add_term(a, b, c);
        p
    }

    /// Builds a polynomial from `(a, b, coeff)` triples; coefficients may be negative.
    pub fn from_terms(d: u64, terms: &[(i64, i64, i64)]) -> Self {
        let mut p = Self::zero(d);
        for &(a, b, c) in terms {
            p.add_term(a, b, c);
        }
        p
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.d
    }

    pub fn add_term(&mut self, a: i64, b: i64, c: i64) {
        let c = c.rem_euclid(self.d as i64) as u64;
        self.add_reduced(Monomial::new(a, b), c);
    }

    fn add_reduced(&mut self, m: Monomial, c: u64) {
        if c == 0 {
            return;
        }
        let d = self.d;
        let e = self.terms.entry(m).or_insert(0);
        *e = (*e + c) % d;
        if *e == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn coeff(&self, a: i64, b: i64) -> u64 {
        self.terms.get(&Monomial::new(a, b)).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in `(b, a)` order.
    pub fn iter(&self) -> impl Iterator<Item = (Monomial, u64)> + '_ {
        self.terms.iter().map(|(&m, &c)| (m, c))
    }

    pub fn constant_term(&self) -> u64 {
        self.coeff(0, 0)
    }

    pub fn add(&self, o: &LaurentPoly) -> LaurentPoly {
        let mut r = self.clone();
        for (m, c) in o.iter() {
            r.add_reduced(m, c);
        }
        r
    }

    pub fn sub(&self, o: &LaurentPoly) -> LaurentPoly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> LaurentPoly {
        self.scale(self.d - 1)
    }

    pub fn scale(&self, s: u64) -> LaurentPoly {
        let d = self.d;
        let s = s % d;
        let mut r = Self::zero(d);
        for (m, c) in self.iter() {
            r.add_reduced(m, ((c as u128 * s as u128) % d as u128) as u64);
        }
        r
    }

    pub fn mul(&self, o: &LaurentPoly) -> LaurentPoly {
        let d = self.d;
        let mut r = Self::zero(d);
        for (m1, c1) in self.iter() {
            for (m2, c2) in o.iter() {
                r.add_reduced(m1.shift(m2.a, m2.b), ((c1 as u128 * c2 as u128) % d as u128) as u64);
            }
        }
        r
    }

    /// Multiplication by `x^a y^b`.
    pub fn shift(&self, a: i64, b: i64) -> LaurentPoly {
        LaurentPoly { d: self.d, terms: self.terms.iter().map(|(m, &c)| (m.shift(a, b), c)).collect() }
    }

    /// `x^a y^b ↦ x^{-a} y^{-b}`.
    pub fn antipode(&self) -> LaurentPoly {
        LaurentPoly { d: self.d, terms: self.terms.iter().map(|(m, &c)| (Monomial::new(-m.a, -m.b), c)).collect() }
    }

    /// `y ↦ y^{-1}`, leaving `x` alone.
    pub fn reflect_y(&self) -> LaurentPoly {
        LaurentPoly { d: self.d, terms: self.terms.iter().map(|(m, &c)| (Monomial::new(m.a, -m.b), c)).collect() }
    }

    /// Terms with `x`-exponent zero, as a polynomial in `y`.
    pub fn x0_slice(&self) -> LaurentPoly {
        LaurentPoly { d: self.d, terms: self.terms.iter().filter(|(m, _)| m.a == 0).map(|(&m, &c)| (m, c)).collect() }
    }

    /// `(amin, amax, bmin, bmax)` of the support.
    pub fn bounds(&self) -> Option<(i64, i64, i64, i64)> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let mut bx = (first.a, first.a, first.b, first.b);
        for m in it {
            bx.0 = bx.0.min(m.a);
            bx.1 = bx.1.max(m.a);
            bx.2 = bx.2.min(m.b);
            bx.3 = bx.3.max(m.b);
        }
        Some(bx)
    }

    /// `[a, b, coeff]` triples sorted lexicographically.
    pub fn to_triples(&self) -> Vec<[i64; 3]> {
        let mut v: Vec<[i64; 3]> = self.iter().map(|(m, c)| [m.a, m.b, c as i64]).collect();
        v.sort();
        v
    }

    pub fn from_triples(d: u64, triples: &[[i64; 3]]) -> Self {
        let mut p = Self::zero(d);
        for t in triples {
            p.add_term(t[0], t[1], t[2]);
        }
        p
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.iter() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono = match (m.a, m.b) {
                (0, 0) => String::new(),
                (a, 0) => format!("x^{a}"),
                (0, b) => format!("y^{b}"),
                (a, b) => format!("x^{a}y^{b}"),
            };
            match (c, mono.is_empty()) {
                (1, false) => write!(f, "{mono}")?,
                (_, true) => write!(f, "{c}")?,
                _ => write!(f, "{c}{mono}")?,
            }
        }
        Ok(())
    }
}

/// A Pauli operator modulo phase: `w` X-block polynomials then `w` Z-block polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliVector {
    d: u64,
    w: usize,
    slots: Vec<LaurentPoly>,
}

impl PauliVector {
    pub fn zero(d: u64, w: usize) -> Self {
        PauliVector { d, w, slots: vec![LaurentPoly::zero(d); 2 * w] }
    }

    pub fn from_slots(d: u64, slots: Vec<LaurentPoly>) -> Result<Self> {
        if slots.is_empty() || slots.len() % 2 != 0 {
            return Err(Error::DimensionMismatch(format!("{} slots is not a positive even count", slots.len())));
        }
        if slots.iter().any(|p| p.modulus() != d) {
            return Err(Error::DimensionMismatch("slot modulus differs from d".into()));
        }
        Ok(PauliVector { d, w: slots.len() / 2, slots })
    }

    /// Single-site Pauli `X^xe Z^ze` at `(slot, a, b)` of the unit cell.
    pub fn single(d: u64, w: usize, slot: usize, a: i64, b: i64, xe: i64, ze: i64) -> Self {
        let mut p = Self::zero(d, w);
        p.slots[slot].add_term(a, b, xe);
        p.slots[slot + w].add_term(a, b, ze);
        p
    }

    #[inline]
    pub fn d(&self) -> u64 {
        self.d
    }

    #[inline]
    pub fn w(&self) -> usize {
        self.w
    }

    pub fn slots(&self) -> &[LaurentPoly] {
        &self.slots
    }

    pub fn slot(&self, s: usize) -> &LaurentPoly {
        &self.slots[s]
    }

    pub fn slot_mut(&mut self, s: usize) -> &mut LaurentPoly {
        &mut self.slots[s]
    }

    pub fn xblock(&self) -> &[LaurentPoly] {
        &self.slots[..self.w]
    }

    pub fn zblock(&self) -> &[LaurentPoly] {
        &self.slots[self.w..]
    }

    pub fn is_zero(&self) -> bool {
        self.slots.iter().all(LaurentPoly::is_zero)
    }

    fn check(&self, o: &PauliVector) -> Result<()> {
        if self.d != o.d || self.w != o.w {
            return Err(Error::DimensionMismatch(format!(
                "(d={}, w={}) vs (d={}, w={})",
                self.d, self.w, o.d, o.w
            )));
        }
        Ok(())
    }

    fn zip(&self, o: &PauliVector, f: impl Fn(&LaurentPoly, &LaurentPoly) -> LaurentPoly) -> PauliVector {
        assert_eq!((self.d, self.w), (o.d, o.w), "Pauli vectors of different shape");
        PauliVector { d: self.d, w: self.w, slots: self.slots.iter().zip(&o.slots).map(|(a, b)| f(a, b)).collect() }
    }

    fn map(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> PauliVector {
        PauliVector { d: self.d, w: self.w, slots: self.slots.iter().map(f).collect() }
    }

    /// Operator product (addition of exponent vectors).
    pub fn add(&self, o: &PauliVector) -> PauliVector {
        self.zip(o, LaurentPoly::add)
    }

    pub fn sub(&self, o: &PauliVector) -> PauliVector {
        self.zip(o, LaurentPoly::sub)
    }

    pub fn neg(&self) -> PauliVector {
        self.map(LaurentPoly::neg)
    }

    pub fn scale(&self, s: u64) -> PauliVector {
        self.map(|p| p.scale(s))
    }

    pub fn shift(&self, a: i64, b: i64) -> PauliVector {
        self.map(|p| p.shift(a, b))
    }

    /// Multiplies every slot by the same polynomial.
    pub fn mul_poly(&self, f: &LaurentPoly) -> PauliVector {
        self.map(|p| p.mul(f))
    }

    pub fn reflect_y(&self) -> PauliVector {
        self.map(LaurentPoly::reflect_y)
    }

    pub fn bounds(&self) -> Option<(i64, i64, i64, i64)> {
        self.slots.iter().filter_map(LaurentPoly::bounds).reduce(|x, y| {
            (x.0.min(y.0), x.1.max(y.1), x.2.min(y.2), x.3.max(y.3))
        })
    }

    /// Nonzero entries as `(slot, a, b, coeff)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, i64, i64, u64)> + '_ {
        self.slots.iter().enumerate().flat_map(|(s, p)| p.iter().map(move |(m, c)| (s, m.a, m.b, c)))
    }

    /// Sites `(slot mod w, a, b)` on which the operator acts nontrivially.
    pub fn support(&self) -> std::collections::BTreeSet<(usize, i64, i64)> {
        self.entries().map(|(s, a, b, _)| (s % self.w, a, b)).collect()
    }

    /// Constant term of `dot(self, o)`, computed directly from overlapping sites.
    pub fn commutation(&self, o: &PauliVector) -> u64 {
        let d = self.d as i128;
        let w = self.w;
        let mut acc: i128 = 0;
        for s in 0..w {
            for (m, c) in self.slots[s].iter() {
                acc += c as i128 * o.slots[s + w].coeff(m.a, m.b) as i128;
            }
            for (m, c) in self.slots[s + w].iter() {
                acc -= c as i128 * o.slots[s].coeff(m.a, m.b) as i128;
            }
        }
        acc.rem_euclid(d) as u64
    }
}

/// Exponent `e` of the phase `ω^e`, `ω = exp(2πi/d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PhaseExponent {
    pub e: u64,
    pub d: u64,
}

impl PhaseExponent {
    pub fn new(e: i128, d: u64) -> Self {
        PhaseExponent { e: e.rem_euclid(d as i128) as u64, d }
    }
}

impl fmt::Display for PhaseExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ω^{}", self.e)
    }
}

pub fn antipode(p: &LaurentPoly) -> LaurentPoly {
    p.antipode()
}

/// `v̄1ᵀ Λ v2 = Σ_i ( v̄1.x_i · v2.z_i − v̄1.z_i · v2.x_i )`.
pub fn dot(v1: &PauliVector, v2: &PauliVector) -> Result<LaurentPoly> {
    v1.check(v2)?;
    let w = v1.w;
    let mut acc = LaurentPoly::zero(v1.d);
    for i in 0..w {
        acc = acc.add(&v1.slots[i].antipode().mul(&v2.slots[i + w]));
        acc = acc.sub(&v1.slots[i + w].antipode().mul(&v2.slots[i]));
    }
    Ok(acc)
}

/// Component `i` is `dot(stabilizers[i], p)`.
pub fn excitation_map(p: &PauliVector, stabilizers: &[PauliVector]) -> Result<Vec<LaurentPoly>> {
    stabilizers.iter().map(|s| dot(s, p)).collect()
}

/// Window-truncated dense form of a Pauli vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientVector {
    pub d: u64,
    pub w: usize,
    pub k: i64,
    pub data: Vec<u64>,
}

impl CoefficientVector {
    #[inline]
    pub fn index(w: usize, k: i64, s: usize, a: i64, b: i64) -> usize {
        let _ = w;
        let side = (2 * k + 1) as usize;
        s * side * side + (b + k) as usize * side + (a + k) as usize
    }
}

pub fn truncate(p: &PauliVector, k: i64) -> Result<CoefficientVector> {
    let side = (2 * k + 1) as usize;
    let mut data = vec![0u64; 2 * p.w * side * side];
    for (s, a, b, c) in p.entries() {
        if a.abs() > k || b.abs() > k {
            return Err(Error::WindowOverflow { a, b, k });
        }
        data[CoefficientVector::index(p.w, k, s, a, b)] = c;
    }
    Ok(CoefficientVector { d: p.d, w: p.w, k, data })
}

pub fn untruncate(v: &CoefficientVector) -> PauliVector {
    let side = (2 * v.k + 1) as usize;
    let mut p = PauliVector::zero(v.d, v.w);
    for (i, &c) in v.data.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let s = i / (side * side);
        let r = i % (side * side);
        let b = (r / side) as i64 - v.k;
        let a = (r % side) as i64 - v.k;
        p.slots[s].add_term(a, b, c as i64);
    }
    p
}

/// Rows `x^a y^b · row` for `b` in `[-m_y, m_y]` (outer) and `a` in `[-m_x, m_x]` (inner).
pub fn translational_duplicates(row: &[LaurentPoly], m_x: i64, m_y: i64) -> Vec<Vec<LaurentPoly>> {
    let mut out = Vec::with_capacity(((2 * m_x + 1) * (2 * m_y + 1)) as usize);
    for b in -m_y..=m_y {
        for a in -m_x..=m_x {
            out.push(row.iter().map(|p| p.shift(a, b)).collect());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toric(d: u64) -> (PauliVector, PauliVector) {
        let s1 = PauliVector::from_slots(
            d,
            vec![
                LaurentPoly::from_terms(d, &[(0, 0, 1), (-1, 0, -1)]),
                LaurentPoly::from_terms(d, &[(0, 0, 1), (0, -1, -1)]),
                LaurentPoly::zero(d),
                LaurentPoly::zero(d),
            ],
        )
        .unwrap();
        let s2 = PauliVector::from_slots(
            d,
            vec![
                LaurentPoly::zero(d),
                LaurentPoly::zero(d),
                LaurentPoly::from_terms(d, &[(0, 0, 1), (0, 1, -1)]),
                LaurentPoly::from_terms(d, &[(0, 0, -1), (1, 0, 1)]),
            ],
        )
        .unwrap();
        (s1, s2)
    }

    #[test]
    fn antipode_of_mixed_polynomial() {
        let f = LaurentPoly::from_terms(4, &[(0, 0, 1), (0, 1, 3), (1, -1, -2)]);
        let g = LaurentPoly::from_terms(4, &[(0, 0, 1), (0, -1, 3), (-1, 1, 2)]);
        assert_eq!(f.antipode(), g);
    }

    #[test]
    fn single_qudit_dot() {
        let x = PauliVector::single(5, 1, 0, 0, 0, 1, 0);
        let z = PauliVector::single(5, 1, 0, 0, 0, 0, 1);
        assert_eq!(dot(&x, &z).unwrap(), LaurentPoly::one(5));
        assert_eq!(x.commutation(&z), 1);
    }

    #[test]
    fn toric_generators_commute() {
        for d in [2, 3, 4, 6] {
            let (s1, s2) = toric(d);
            assert!(dot(&s1, &s2).unwrap().is_zero());
        }
    }

    #[test]
    fn edge_z_excites_two_vertices() {
        let (s1, s2) = toric(2);
        let z = PauliVector::single(2, 2, 0, 0, 0, 0, 1);
        let ex = excitation_map(&z, &[s1, s2]).unwrap();
        assert_eq!(ex[0].len(), 2);
        assert!(ex[1].is_zero());
    }

    #[test]
    fn truncation_layout() {
        let f = LaurentPoly::from_terms(4, &[(0, 0, 1), (0, 1, 3), (1, -1, -2)]);
        let p = PauliVector::from_slots(4, vec![f, LaurentPoly::zero(4)]).unwrap();
        let v = truncate(&p, 1).unwrap();
        assert_eq!(v.data.len(), 2 * 9);
        let nz: Vec<(usize, u64)> = v.data.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i, c)).collect();
        assert_eq!(nz, vec![(2, 2), (4, 1), (7, 3)]);
        assert_eq!(untruncate(&v), p);
        assert!(matches!(truncate(&p.shift(2, 0), 1), Err(Error::WindowOverflow { .. })));
    }

    #[test]
    fn td_ordering() {
        let rows = translational_duplicates(&[LaurentPoly::one(3)], 1, 0);
        let got: Vec<LaurentPoly> = rows.into_iter().map(|mut r| r.remove(0)).collect();
        assert_eq!(
            got,
            vec![LaurentPoly::monomial(3, -1, 0, 1), LaurentPoly::one(3), LaurentPoly::monomial(3, 1, 0, 1)]
        );
    }
}
