//! Boundary anyons: solving the anyon equation, reducing to a basis with
//! fusion orders, and computing spins and braiding from string operators.

use crate::arith::{lcm, Modulus};
use crate::boundary::gauge_violation_map;
use crate::error::{Error, Result};
use crate::mge::{mge, mge_tracking, Matrix, SpanBasis};
use crate::par;
use crate::poly::{excitation_map, LaurentPoly, PauliVector, PhaseExponent};
use crate::snf::{basis_indices, factor_order, smith_normal_form};
use serde::Serialize;

/// Dense layout of syndrome vectors with `comps` components over a rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct SynFrame {
    comps: usize,
    x0: i64,
    x1: i64,
    y0: i64,
    y1: i64,
}

impl SynFrame {
    fn nx(&self) -> usize {
        (self.x1 - self.x0 + 1) as usize
    }

    fn width(&self) -> usize {
        self.nx() * (self.y1 - self.y0 + 1) as usize * self.comps
    }

    fn contains(&self, a: i64, b: i64) -> bool {
        a >= self.x0 && a <= self.x1 && b >= self.y0 && b <= self.y1
    }

    fn col(&self, i: usize, a: i64, b: i64) -> usize {
        (((b - self.y0) as usize * self.nx()) + (a - self.x0) as usize) * self.comps + i
    }

    fn encode(&self, v: &[LaurentPoly]) -> Option<Vec<u64>> {
        let mut out = vec![0u64; self.width()];
        for (i, p) in v.iter().enumerate() {
            for (m, c) in p.iter() {
                if !self.contains(m.a, m.b) {
                    return None;
                }
                out[self.col(i, m.a, m.b)] = c;
            }
        }
        Some(out)
    }

    fn grow(&self, mx: i64, my: i64) -> SynFrame {
        SynFrame { x0: self.x0 - mx, x1: self.x1 + mx, y0: self.y0 - my, y1: self.y1 + my, ..*self }
    }
}

fn syn_bounds(v: &[LaurentPoly]) -> Option<(i64, i64, i64, i64)> {
    v.iter().filter_map(LaurentPoly::bounds).reduce(|x, y| (x.0.min(y.0), x.1.max(y.1), x.2.min(y.2), x.3.max(y.3)))
}

fn syn_shift(v: &[LaurentPoly], a: i64, b: i64) -> Vec<LaurentPoly> {
    v.iter().map(|p| p.shift(a, b)).collect()
}

/// Syndrome images of local moves together with the translations they admit.
struct Moves<'a> {
    d: u64,
    images: &'a [Vec<LaurentPoly>],
    /// Moves translate in `x` as well as `y`.
    planar: bool,
}

impl Moves<'_> {
    /// Every translate that fits inside `f`, tagged `(move, dx, dy)`.
    fn translates(&self, f: &SynFrame) -> Vec<((usize, i64, i64), Vec<u64>)> {
        let mut out = Vec::new();
        for (j, img) in self.images.iter().enumerate() {
            let Some((a0, a1, b0, b1)) = syn_bounds(img) else { continue };
            let xs: Vec<i64> = if self.planar { (f.x0 - a0..=f.x1 - a1).collect() } else { vec![0] };
            for sb in f.y0 - b0..=f.y1 - b1 {
                for &sa in &xs {
                    if let Some(v) = f.encode(&syn_shift(img, sa, sb)) {
                        out.push(((j, sa, sb), v));
                    }
                }
            }
        }
        out
    }

    fn height(&self) -> i64 {
        self.images.iter().filter_map(|v| syn_bounds(v)).map(|(a0, a1, b0, b1)| (a1 - a0).max(b1 - b0) + 1).max().unwrap_or(1)
    }
}

/// A solution of the anyon equation `(1 − t^n)·q = Σ α·moves` with `q` in the box.
#[derive(Debug, Clone)]
struct Candidate {
    q: Vec<LaurentPoly>,
    /// `(move, dx, dy, coeff)` terms of `α`, present when strings were tracked.
    alpha: Vec<(usize, i64, i64, u64)>,
    period: usize,
}

/// Relation solve for one period `n`.
fn solve_period(mv: &Moves, dir: (i64, i64), n: usize, boxf: SynFrame, margin: i64, with_strings: bool) -> Vec<Candidate> {
    let d = mv.d;
    let (dx, dy) = (dir.0 * n as i64, dir.1 * n as i64);
    let region = SynFrame {
        x0: boxf.x0.min(boxf.x0 + dx) - if mv.planar { margin } else { 0 },
        x1: boxf.x1.max(boxf.x1 + dx) + if mv.planar { margin } else { 0 },
        y0: boxf.y0.min(boxf.y0 + dy) - margin,
        y1: boxf.y1.max(boxf.y1 + dy) + margin,
        ..boxf
    };
    let mut rows = Vec::new();
    let mut qcells = Vec::new();
    for b in boxf.y0..=boxf.y1 {
        for a in boxf.x0..=boxf.x1 {
            for i in 0..boxf.comps {
                let mut r = vec![0u64; region.width()];
                r[region.col(i, a, b)] = 1;
                let k = region.col(i, a + dx, b + dy);
                r[k] = (r[k] + d - 1) % d;
                rows.push(r);
                qcells.push((i, a, b));
            }
        }
    }
    let nq = rows.len();
    let tr = mv.translates(&region);
    let tags: Vec<(usize, i64, i64)> = tr.iter().map(|t| t.0).collect();
    rows.extend(tr.into_iter().map(|t| t.1));
    let m = Matrix::from_rows(d, region.width(), rows);
    let res = if with_strings { mge(&m) } else { mge_tracking(&m, nq) };
    res.relations
        .iter()
        .filter(|rel| rel[..nq].iter().any(|&c| c != 0))
        .map(|rel| {
            let mut q = vec![LaurentPoly::zero(d); boxf.comps];
            for (&(i, a, b), &c) in qcells.iter().zip(&rel[..nq]) {
                if c != 0 {
                    q[i].add_term(a, b, c as i64);
                }
            }
            let alpha = if with_strings {
                tags.iter().zip(&rel[nq..]).filter(|(_, &c)| c != 0).map(|(&(j, sa, sb), &c)| (j, sa, sb, (d - c) % d)).collect()
            } else {
                Vec::new()
            };
            Candidate { q, alpha, period: n }
        })
        .collect()
}

/// Abelian group spanned by candidate syndromes modulo trivial ones.
#[derive(Debug, Clone)]
struct Group {
    accepted: Vec<Candidate>,
    /// `(order, coefficients over accepted)` per basis element.
    basis: Vec<(u64, Vec<u64>)>,
}

impl Group {
    fn count(&self) -> usize {
        self.basis.len()
    }

    fn orders(&self) -> Vec<u64> {
        let mut o: Vec<u64> = self.basis.iter().map(|b| b.0).collect();
        o.sort_unstable();
        o
    }

    fn size(&self) -> u128 {
        self.basis.iter().map(|b| b.0 as u128).product()
    }
}

fn reduce_group(mv: &Moves, cands: Vec<Candidate>, frame: SynFrame) -> Group {
    let d = mv.d;
    let modulus = Modulus::new(d).expect("valid modulus");
    let tr = mv.translates(&frame);
    let mut span = SpanBasis::new(d, frame.width());
    for (_, v) in &tr {
        span.insert(v);
    }
    let mut cands: Vec<(Vec<u64>, Candidate)> = cands.into_iter().filter_map(|c| frame.encode(&c.q).map(|v| (v, c))).collect();
    cands.sort_by_key(|(v, c)| (c.period, v.iter().filter(|&&x| x != 0).count()));
    let mut accepted = Vec::new();
    let mut vecs = Vec::new();
    for (v, c) in cands {
        if span.insert(&v) {
            vecs.push(v);
            accepted.push(c);
        }
    }
    let k = vecs.len();
    if k == 0 {
        return Group { accepted, basis: vec![] };
    }
    let mut rows = vecs;
    rows.extend(tr.into_iter().map(|t| t.1));
    let res = mge_tracking(&Matrix::from_rows(d, frame.width(), rows), k);
    let mut rel: Vec<Vec<u64>> = res.relations.iter().map(|r| r[..k].to_vec()).collect();
    for i in 0..k {
        let mut r = vec![0u64; k];
        r[i] = d;
        rel.push(r);
    }
    let s = smith_normal_form(&rel, k, &modulus);
    let basis = basis_indices(&s, &modulus)
        .into_iter()
        .map(|(i, row)| (factor_order(s.diagonal[i], &modulus), row.iter().map(|&x| modulus.reduce(x)).collect()))
        .collect();
    Group { accepted, basis }
}

/// A boundary anyon: the syndrome `v` with `(1 − y^n)·v` produced by a string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryAnyon {
    pub syndrome: Vec<LaurentPoly>,
    pub period: usize,
}

/// `pauli = Σ_j α_j(y)·G_j` with gauge-violation map `(1 − y^period)·v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryString {
    pub alpha: Vec<LaurentPoly>,
    pub pauli: PauliVector,
    pub period: usize,
}

impl BoundaryString {
    /// Concatenation of `k` translates by the period.
    pub fn repeated(&self, k: usize) -> BoundaryString {
        let n = self.period as i64;
        let mut geo = LaurentPoly::zero(self.pauli.d());
        for t in 0..k as i64 {
            geo.add_term(0, t * n, 1);
        }
        BoundaryString {
            alpha: self.alpha.iter().map(|a| a.mul(&geo)).collect(),
            pauli: self.pauli.mul_poly(&geo),
            period: self.period * k,
        }
    }

    fn height(&self) -> i64 {
        self.pauli.bounds().map_or(0, |b| b.3 - b.2 + 1)
    }

    fn add_scaled(&self, o: &BoundaryString, c: u64) -> BoundaryString {
        BoundaryString {
            alpha: self.alpha.iter().zip(&o.alpha).map(|(a, b)| a.add(&b.scale(c))).collect(),
            pauli: self.pauli.add(&o.pauli.scale(c)),
            period: self.period,
        }
    }

    /// Same string lengthened to period `n`, which must be a multiple of the current one.
    pub fn with_period(&self, n: usize) -> BoundaryString {
        assert!(n % self.period == 0, "period {n} is not a multiple of {}", self.period);
        self.repeated(n / self.period)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisAnyon {
    pub anyon: BoundaryAnyon,
    pub string: BoundaryString,
    pub order: u64,
}

#[derive(Debug, Clone)]
pub struct AnyonTheory {
    pub d: u64,
    pub basis: Vec<BasisAnyon>,
    pub spins: Vec<PhaseExponent>,
    pub braiding: Vec<Vec<PhaseExponent>>,
    /// `(n, number of basis anyons with period dividing n)` for every period tried.
    pub profile: Vec<(usize, usize)>,
    /// Smallest period reaching the full basis.
    pub min_period: usize,
    /// Set when the period search stopped at the cap before stabilizing.
    pub incomplete: bool,
}

impl AnyonTheory {
    pub fn orders(&self) -> Vec<u64> {
        self.basis.iter().map(|b| b.order).collect()
    }

    pub fn size(&self) -> u128 {
        self.basis.iter().map(|b| b.order as u128).product()
    }

    /// Spin exponents of the theory with no anyons.
    pub fn empty(d: u64) -> Self {
        AnyonTheory { d, basis: vec![], spins: vec![], braiding: vec![], profile: vec![], min_period: 1, incomplete: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineOptions {
    pub max_period: usize,
    /// Minimum number of consecutive periods without growth before stopping.
    pub patience: usize,
    /// Length of the box holding anyon syndromes; defaults from the generator height.
    pub box_len: Option<i64>,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions { max_period: 64, patience: 8, box_len: None }
    }
}

/// Commutator exponent `e` with `A·B = ω^e·B·A`.
pub fn commutator(a: &PauliVector, b: &PauliVector) -> PhaseExponent {
    PhaseExponent::new(b.commutation(a) as i128, a.d())
}

/// Boundary anyon solver over gauge generators `gens` (y-translation only).
pub struct BoundaryEngine {
    d: u64,
    gens: Vec<PauliVector>,
    zeta: Vec<Vec<LaurentPoly>>,
    box_len: i64,
    margin: i64,
}

impl BoundaryEngine {
    pub fn new(gens: &[PauliVector], box_len: Option<i64>) -> Result<Self> {
        let d = gens.first().map_or(2, PauliVector::d);
        let zeta = gens.iter().map(|g| gauge_violation_map(g, gens)).collect::<Result<Vec<_>>>()?;
        let mv = Moves { d, images: &zeta, planar: false };
        let h = mv.height();
        let box_len = box_len.unwrap_or(2 * h + 2);
        Ok(BoundaryEngine { d, gens: gens.to_vec(), zeta, box_len, margin: 2 * h + 2 })
    }

    fn moves(&self) -> Moves<'_> {
        Moves { d: self.d, images: &self.zeta, planar: false }
    }

    fn boxf(&self) -> SynFrame {
        SynFrame { comps: self.gens.len(), x0: 0, x1: 0, y0: 0, y1: self.box_len - 1 }
    }

    fn filter_frame(&self, n: usize) -> SynFrame {
        self.boxf().grow(0, n as i64 + self.margin)
    }

    fn realize(&self, alpha: &[(usize, i64, i64, u64)], period: usize) -> BoundaryString {
        let mut a = vec![LaurentPoly::zero(self.d); self.gens.len()];
        for &(j, _, sb, c) in alpha {
            a[j].add_term(0, sb, c as i64);
        }
        let mut p = PauliVector::zero(self.d, self.gens[0].w());
        for (j, aj) in a.iter().enumerate() {
            if !aj.is_zero() {
                p = p.add(&self.gens[j].mul_poly(aj));
            }
        }
        BoundaryString { alpha: a, pauli: p, period }
    }

    /// Candidate anyons and strings for period `n`.
    pub fn candidates(&self, n: usize) -> Vec<(BoundaryAnyon, BoundaryString)> {
        solve_period(&self.moves(), (0, 1), n, self.boxf(), self.margin, true)
            .into_iter()
            .map(|c| {
                let s = self.realize(&c.alpha, n);
                (BoundaryAnyon { syndrome: c.q, period: n }, s)
            })
            .collect()
    }

    fn group(&self, n: usize, with_strings: bool) -> Group {
        let cands = solve_period(&self.moves(), (0, 1), n, self.boxf(), self.margin, with_strings);
        reduce_group(&self.moves(), cands, self.filter_frame(n))
    }

    /// Whether `v` is a product of gauge-generator syndromes near its support.
    pub fn is_trivial(&self, v: &[LaurentPoly], margin: i64) -> bool {
        let Some((_, _, b0, b1)) = syn_bounds(v) else { return true };
        let f = SynFrame { comps: self.gens.len(), x0: 0, x1: 0, y0: b0 - margin, y1: b1 + margin };
        let mut span = SpanBasis::new(self.d, f.width());
        for (_, t) in self.moves().translates(&f) {
            span.insert(&t);
        }
        f.encode(v).is_some_and(|x| span.contains(&x))
    }

    /// Runs the period schedule and assembles the full theory.
    pub fn theory(&self, opts: &EngineOptions) -> Result<AnyonTheory> {
        let mut profile = Vec::new();
        let mut best: Option<(u128, usize)> = None;
        let mut since = 0usize;
        let mut n = 1usize;
        let mut incomplete = true;
        let chunk = if par::is_parallel() { 4 } else { 1 };
        'outer: while n <= opts.max_period {
            let hi = (n + chunk - 1).min(opts.max_period);
            let ns: Vec<usize> = (n..=hi).collect();
            let groups = par::map(&ns, |&k| self.group(k, false));
            for (&k, g) in ns.iter().zip(&groups) {
                profile.push((k, g.count()));
                if best.is_none_or(|(s, _)| g.size() > s) {
                    best = Some((g.size(), k));
                    since = 0;
                } else {
                    since += 1;
                }
                let l = best.map_or(1, |b| b.1);
                if since >= opts.patience.max(2 * l) {
                    incomplete = false;
                    break 'outer;
                }
            }
            n = hi + 1;
        }
        let l = best.map_or(1, |b| b.1);
        let mut theory = self.theory_at(l)?;
        theory.profile = profile;
        theory.min_period = l;
        theory.incomplete = incomplete;
        Ok(theory)
    }

    /// Theory of anyons whose period divides `n`.
    pub fn theory_at(&self, n: usize) -> Result<AnyonTheory> {
        let g = self.group(n, true);
        let mut basis = Vec::new();
        for (order, coeffs) in &g.basis {
            let mut q = vec![LaurentPoly::zero(self.d); self.gens.len()];
            let mut s = BoundaryString {
                alpha: vec![LaurentPoly::zero(self.d); self.gens.len()],
                pauli: PauliVector::zero(self.d, self.gens[0].w()),
                period: n,
            };
            for (c, cand) in coeffs.iter().zip(&g.accepted) {
                if *c != 0 {
                    for (qi, ci) in q.iter_mut().zip(&cand.q) {
                        *qi = qi.add(&ci.scale(*c));
                    }
                    s = s.add_scaled(&self.realize(&cand.alpha, n), *c);
                }
            }
            basis.push(BasisAnyon { anyon: BoundaryAnyon { syndrome: q, period: n }, string: s, order: *order });
        }
        let spins = basis.iter().map(|b| topological_spin(&b.string)).collect::<Result<Vec<_>>>()?;
        let mut braiding = vec![vec![PhaseExponent::new(0, self.d); basis.len()]; basis.len()];
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let b = braiding_phase(&basis[i].string, &basis[j].string)?;
                braiding[i][j] = b;
                braiding[j][i] = b;
            }
        }
        Ok(AnyonTheory { d: self.d, basis, spins, braiding, profile: vec![], min_period: n, incomplete: false })
    }

    pub fn generators(&self) -> &[PauliVector] {
        &self.gens
    }

    pub fn zeta(&self) -> &[Vec<LaurentPoly>] {
        &self.zeta
    }
}

/// All candidate anyons with their strings for periods `1..=n_max`.
pub fn solve_boundary_anyons(generators: &[PauliVector], n_max: usize, m_y: i64) -> Result<Vec<(BoundaryAnyon, BoundaryString)>> {
    if generators.is_empty() {
        return Ok(vec![]);
    }
    let engine = BoundaryEngine::new(generators, None)?;
    if m_y < engine.box_len {
        return Err(Error::WindowOverflow { a: 0, b: engine.box_len, k: m_y });
    }
    Ok((1..=n_max).flat_map(|n| engine.candidates(n)).collect())
}

/// Basis and orders of the group generated by `candidates`.
pub fn reduce_to_basis(candidates: &[(BoundaryAnyon, BoundaryString)], generators: &[PauliVector]) -> Result<AnyonTheory> {
    let engine = BoundaryEngine::new(generators, None)?;
    let n = candidates.iter().map(|c| c.0.period).fold(1, |a, b| lcm(a as u64, b as u64) as usize);
    let cands = candidates
        .iter()
        .map(|(a, s)| Candidate { q: a.syndrome.clone(), alpha: vec![], period: s.period })
        .collect::<Vec<_>>();
    let lo = candidates.iter().filter_map(|c| syn_bounds(&c.0.syndrome)).fold((0, engine.box_len - 1), |acc, b| (acc.0.min(b.2), acc.1.max(b.3)));
    let frame = SynFrame { comps: generators.len(), x0: 0, x1: 0, y0: lo.0, y1: lo.1 }.grow(0, n as i64 + engine.margin);
    let g = reduce_group(&engine.moves(), cands, frame);
    let d = engine.d;
    let mut basis = Vec::new();
    for (order, coeffs) in &g.basis {
        let mut q = vec![LaurentPoly::zero(d); generators.len()];
        let mut s: Option<BoundaryString> = None;
        for (c, cand) in coeffs.iter().zip(&g.accepted) {
            if *c == 0 {
                continue;
            }
            for (qi, ci) in q.iter_mut().zip(&cand.q) {
                *qi = qi.add(&ci.scale(*c));
            }
            let src = candidates.iter().find(|x| x.0.syndrome == cand.q).expect("accepted candidate comes from the input");
            let piece = src.1.with_period(n);
            s = Some(match s {
                None => BoundaryString { alpha: piece.alpha.iter().map(|a| a.scale(*c)).collect(), pauli: piece.pauli.scale(*c), period: n },
                Some(acc) => acc.add_scaled(&piece, *c),
            });
        }
        let string = s.expect("basis element has a nonzero coefficient");
        basis.push(BasisAnyon { anyon: BoundaryAnyon { syndrome: q, period: n }, string, order: *order });
    }
    Ok(AnyonTheory { d, basis, spins: vec![], braiding: vec![], profile: vec![], min_period: n, incomplete: false })
}

/// Spin exponent from `[U_{1→2}, U_{2→3}]`, lengthening the string as needed.
pub fn topological_spin(a: &BoundaryString) -> Result<PhaseExponent> {
    if a.period == 0 {
        return Err(Error::StringTooShort("string has period 0".into()));
    }
    let k = ((a.height() + a.period as i64) / a.period as i64).max(1) as usize;
    let u = a.repeated(k);
    let n = u.period as i64;
    if n <= a.height() - a.period as i64 {
        return Err(Error::StringTooShort(format!("length {n} does not clear height {}", a.height())));
    }
    Ok(commutator(&u.pauli, &u.pauli.shift(0, n)))
}

/// Braiding exponent from `[U(a)_{1→3}, U(b)_{2→4}]`.
pub fn braiding_phase(a: &BoundaryString, b: &BoundaryString) -> Result<PhaseExponent> {
    let l = lcm(a.period as u64, b.period as u64) as i64;
    let (Some(ba), Some(bb)) = (a.pauli.bounds(), b.pauli.bounds()) else {
        return Ok(PhaseExponent::new(0, a.pauli.d()));
    };
    let need = a.height().max(b.height()) + (ba.2 - bb.2).abs() + (ba.3 - bb.3).abs() + 1;
    let m = ((need + l - 1) / l).max(1) * l;
    let ua = a.with_period(2 * m as usize);
    let ub = b.with_period(2 * m as usize);
    Ok(commutator(&ua.pauli, &ub.pauli.shift(0, m)))
}

/// Spin of `∏ a_i^{n_i}` from the quadratic form fixed by spins and braiding.
pub fn composite_spin(theory: &AnyonTheory, exponents: &[i64]) -> PhaseExponent {
    assert_eq!(exponents.len(), theory.basis.len(), "one exponent per basis anyon");
    let mut e: i128 = 0;
    for (i, &ni) in exponents.iter().enumerate() {
        e += (ni as i128) * (ni as i128) * theory.spins[i].e as i128;
        for (j, &nj) in exponents.iter().enumerate().skip(i + 1) {
            e += (ni as i128) * (nj as i128) * theory.braiding[i][j].e as i128;
        }
    }
    PhaseExponent::new(e, theory.d)
}

/// Braiding exponent between two composites.
pub fn composite_braiding(theory: &AnyonTheory, x: &[i64], y: &[i64]) -> PhaseExponent {
    let mut e: i128 = 0;
    for (i, &xi) in x.iter().enumerate() {
        for (j, &yj) in y.iter().enumerate() {
            let b = if i == j { 2 * theory.spins[i].e as i128 } else { theory.braiding[i][j].e as i128 };
            e += xi as i128 * yj as i128 * b;
        }
    }
    PhaseExponent::new(e, theory.d)
}

/// Bulk anyon group: orders of the basis anyons.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BulkAnyons {
    pub orders: Vec<u64>,
    pub profile: Vec<(usize, usize)>,
}

/// Bulk anyons from `(1 − x^n)·v ∈ im ε` in planar windows, for `n ≤ n_max`.
pub fn solve_bulk_anyons(stabilizers: &[PauliVector], n_max: usize, window: Option<i64>) -> Result<BulkAnyons> {
    let Some(first) = stabilizers.first() else { return Ok(BulkAnyons { orders: vec![], profile: vec![] }) };
    let (d, w) = (first.d(), first.w());
    let mut images = Vec::new();
    for s in 0..w {
        for (xe, ze) in [(1, 0), (0, 1)] {
            images.push(excitation_map(&PauliVector::single(d, w, s, 0, 0, xe, ze), stabilizers)?);
        }
    }
    let mv = Moves { d, images: &images, planar: true };
    let h = mv.height();
    let c = window.unwrap_or(h + 1);
    let boxf = SynFrame { comps: stabilizers.len(), x0: 0, x1: c - 1, y0: 0, y1: c - 1 };
    let margin = h + 1;
    let mut best: Option<Group> = None;
    let mut profile = Vec::new();
    for n in 1..=n_max {
        let cands = solve_period(&mv, (1, 0), n, boxf, margin, false);
        let g = reduce_group(&mv, cands, boxf.grow(n as i64 + margin, n as i64 + margin));
        profile.push((n, g.count()));
        if best.as_ref().is_none_or(|b| g.size() > b.size()) {
            best = Some(g);
        }
    }
    Ok(BulkAnyons { orders: best.map(|g| g.orders()).unwrap_or_default(), profile })
}
