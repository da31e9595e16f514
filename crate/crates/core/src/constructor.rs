//! Boundary and defect Hamiltonians from Lagrangian subgroups: condensation
//! of boundary strings, completion to the topological-order condition,
//! bulk strings through the result, and defect endpoints.

use crate::anyon::{AnyonTheory, BoundaryEngine, EngineOptions};
use crate::arith::lcm;
use crate::boundary::{commutant_with, solve_gauge_operators, GaugeSolution, SolveOptions, Truncation};
use crate::catalog::StabilizerCodeSpec;
use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::lagrangian::{enumerate_lagrangians, AnyonGroup, LagrangianSubgroup};
use crate::mge::SpanBasis;
use crate::par;
use crate::poly::PauliVector;
use serde::Serialize;

/// Gauge operators and boundary anyon theory of one truncation.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub truncation: Truncation,
    pub gauge: GaugeSolution,
    pub theory: AnyonTheory,
}

pub fn analyze(truncation: Truncation, solve: SolveOptions, engine: &EngineOptions) -> Result<Analysis> {
    let gauge = solve_gauge_operators(&truncation, solve)?;
    let theory = BoundaryEngine::new(&gauge.paulis(), engine.box_len)?.theory(engine)?;
    Ok(Analysis { truncation, gauge, theory })
}

/// Defect analysis between `left` and `right`, optionally reversing the
/// orientation of the right code first.
pub fn build_defect(
    left: &StabilizerCodeSpec,
    right: &StabilizerCodeSpec,
    orientation_reverse: bool,
    solve: SolveOptions,
    engine: &EngineOptions,
) -> Result<Analysis> {
    let right = if orientation_reverse { right.orientation_reversed() } else { right.clone() };
    analyze(Truncation::defect(left, &right)?, solve, engine)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Condensed,
    /// Full bulk stabilizer restored across a defect cut.
    Bulk,
    Completion,
}

/// A Hamiltonian term repeated at every `y`-translate by a multiple of `y_period`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HamiltonianTerm {
    pub pauli: PauliVector,
    pub y_period: i64,
    pub origin: Origin,
    /// Exponents over the theory basis for condensed strings.
    pub anyon: Option<Vec<u64>>,
}

impl HamiltonianTerm {
    fn height(&self) -> i64 {
        self.pauli.bounds().map_or(0, |b| b.3 - b.2 + 1)
    }

    /// Translates meeting `frame`, or contained in it when `inner`.
    pub fn instances(&self, frame: &Frame, inner: bool) -> Vec<PauliVector> {
        let Some((a0, a1, b0, b1)) = self.pauli.bounds() else { return vec![] };
        let p = self.y_period;
        let ok_x = if inner { a0 >= frame.x0 && a1 <= frame.x1 } else { a1 >= frame.x0 && a0 <= frame.x1 };
        if !ok_x {
            return vec![];
        }
        let (lo, hi) = if inner { (frame.y0 - b0, frame.y1 - b1) } else { (frame.y0 - b1, frame.y1 - b0) };
        let (k0, k1) = (lo.div_euclid(p) + i64::from(lo.rem_euclid(p) != 0), hi.div_euclid(p));
        (k0..=k1).map(|k| self.pauli.shift(0, k * p)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TOReport {
    /// `[x0, x1, y0, y1]` of the checked window.
    pub window: [i64; 4],
    pub passed: bool,
    /// Local operators commuting with every term but outside their span.
    #[serde(skip)]
    pub counterexamples: Vec<PauliVector>,
    pub counterexample_count: usize,
}

/// A truncation with boundary terms added on top of the kept bulk stabilizers.
#[derive(Debug, Clone)]
pub struct BoundaryHamiltonian {
    pub truncation: Truncation,
    pub terms: Vec<HamiltonianTerm>,
    /// Translation period along the cut.
    pub period: i64,
    pub lagrangian: Vec<Vec<u64>>,
    /// Segment length in periods chosen for the condensed strings.
    pub segment: usize,
    pub certificate: Option<TOReport>,
}

impl BoundaryHamiltonian {
    fn max_height(&self) -> i64 {
        self.terms.iter().map(HamiltonianTerm::height).max().unwrap_or(0)
    }

    /// Kept bulk translates and boundary term instances meeting `frame`.
    pub fn instances(&self, frame: &Frame, inner: bool) -> Vec<PauliVector> {
        let mut out = self.truncation.kept_translates(frame, inner);
        for t in &self.terms {
            out.extend(t.instances(frame, inner));
        }
        out
    }

    /// Whether every pair of term instances commutes.
    pub fn check_commutation(&self) -> Result<()> {
        let frame = self.default_window();
        let all = self.instances(&frame, false);
        let own: Vec<Vec<PauliVector>> = self.terms.iter().map(|t| t.instances(&frame, false)).collect();
        for (i, inst) in own.iter().enumerate() {
            for p in inst {
                if let Some(j) = all.iter().position(|q| q.commutation(p) != 0) {
                    return Err(Error::CommutationFailure(i, j));
                }
            }
        }
        Ok(())
    }

    fn default_window(&self) -> Frame {
        let (ex, ey) = self.truncation.extent();
        let (lo, hi) = self.truncation.core;
        let x = 2 * ex + 1;
        let h = (2 * ey + 2).max(self.period + ey);
        Frame::new(self.truncation.w, lo - x, hi + x, 0, h - 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstructOptions {
    /// Maximum number of segment doublings while searching for commuting strings.
    pub max_doublings: usize,
    /// Maximum number of completion rounds.
    pub max_rounds: usize,
    /// Rotates the choice among equally light completion candidates.
    pub seed: Option<u64>,
}

impl Default for ConstructOptions {
    fn default() -> Self {
        ConstructOptions { max_doublings: 8, max_rounds: 16, seed: None }
    }
}

/// Whether `a` commutes with every translate of `b` by a multiple of `p`.
fn commutes_periodic(a: &PauliVector, b: &PauliVector, p: i64) -> bool {
    let (Some(ba), Some(bb)) = (a.bounds(), b.bounds()) else { return true };
    let lo = (ba.2 - bb.3).div_euclid(p) - 1;
    let hi = (ba.3 - bb.2).div_euclid(p) + 1;
    (lo..=hi).all(|k| a.commutation(&b.shift(0, k * p)) == 0)
}

/// Condensed terms for a Lagrangian subgroup: each generator's string is cut
/// into segments of `m` periods that tile the cut, and the tilings of
/// different generators are staggered by the smallest multiples of the
/// period that make every cut point fall inside the other segments.
pub fn condense(an: &Analysis, lagrangian: &LagrangianSubgroup, opts: &ConstructOptions) -> Result<BoundaryHamiltonian> {
    let th = &an.theory;
    let period = th.basis.iter().fold(1u64, |acc, b| lcm(acc, b.string.period as u64)).max(th.min_period as u64) as usize;
    let p = period as i64;
    // Shifting by a multiple of the period keeps the anyon type, so every
    // basis string is moved to start in `[0, p)` before combining.
    let basis: Vec<PauliVector> = th
        .basis
        .iter()
        .map(|b| {
            let u = b.string.with_period(period).pauli;
            let b0 = u.bounds().map_or(0, |x| x.2);
            u.shift(0, -b0.div_euclid(p) * p)
        })
        .collect();
    let strings: Vec<PauliVector> = lagrangian
        .generators
        .iter()
        .map(|g| g.iter().zip(&basis).fold(PauliVector::zero(th.d, an.truncation.w), |acc, (&c, u)| acc.add(&u.scale(c))))
        .collect();
    let mut m = 1usize;
    let mut failure = (0, 0);
    for _ in 0..=opts.max_doublings {
        let segments: Vec<PauliVector> = strings
            .iter()
            .map(|s| (0..m as i64).fold(PauliVector::zero(th.d, an.truncation.w), |acc, k| acc.add(&s.shift(0, k * p))))
            .collect();
        match place_segments(&segments, p, m) {
            Ok(offsets) => {
                let tile = m as i64 * p;
                let terms = segments
                    .iter()
                    .zip(&offsets)
                    .zip(&lagrangian.generators)
                    .map(|((s, &o), g)| HamiltonianTerm { pauli: s.shift(0, o * p), y_period: tile, origin: Origin::Condensed, anyon: Some(g.clone()) })
                    .collect();
                return Ok(BoundaryHamiltonian {
                    truncation: an.truncation.clone(),
                    terms,
                    period: tile,
                    lagrangian: lagrangian.generators.clone(),
                    segment: m,
                    certificate: None,
                });
            }
            Err(pair) => failure = pair,
        }
        m *= 2;
    }
    Err(Error::CommutationFailure(failure.0, failure.1))
}

/// Lexicographically smallest offsets (in periods, first fixed at zero) for
/// which all segment translates by multiples of `m·p` commute, or the first
/// failing pair.
fn place_segments(segments: &[PauliVector], p: i64, m: usize) -> std::result::Result<Vec<i64>, (usize, usize)> {
    let n = segments.len();
    let tile = m as i64 * p;
    for i in 0..n {
        if !commutes_periodic(&segments[i], &segments[i], tile) {
            return Err((i, i));
        }
    }
    let mut offsets = vec![0i64; n];
    let mut first_failure = None;
    // Depth-first over offsets in [0, m); offsets only matter relative to earlier segments.
    fn go(i: usize, segs: &[PauliVector], p: i64, m: usize, off: &mut [i64], fail: &mut Option<(usize, usize)>) -> bool {
        if i == segs.len() {
            return true;
        }
        let range = if i == 0 { 1 } else { m as i64 };
        for o in 0..range {
            off[i] = o;
            let me = segs[i].shift(0, o * p);
            let bad = (0..i).find(|&j| !commutes_periodic(&segs[j].shift(0, off[j] * p), &me, m as i64 * p));
            match bad {
                Some(j) => {
                    fail.get_or_insert((j, i));
                }
                None => {
                    if go(i + 1, segs, p, m, off, fail) {
                        return true;
                    }
                }
            }
        }
        false
    }
    if go(0, segments, p, m, &mut offsets, &mut first_failure) {
        Ok(offsets)
    } else {
        Err(first_failure.unwrap_or((0, 0)))
    }
}

/// Commutant of `terms` inside `window` modulo the span of `span_terms`
/// within `frame`; returns independent representatives, lightest first.
fn excess(t: &Truncation, window: &Frame, terms: &[PauliVector], frame: &Frame, span_terms: &[PauliVector]) -> Vec<PauliVector> {
    let comm = commutant_with(t, window, terms);
    let mut span = SpanBasis::new(t.d, frame.width());
    for s in span_terms {
        if let Some(v) = frame.encode(s) {
            span.insert(&v);
        }
    }
    comm.into_iter().filter(|c| span.insert(&frame.encode(c).unwrap())).collect()
}

fn span_frame(h: &BoundaryHamiltonian, window: &Frame) -> Frame {
    let (ex, ey) = h.truncation.extent();
    let wide = h.terms.iter().filter_map(|t| t.pauli.bounds()).fold((0, 0), |acc, b| (acc.0.max(b.1 - b.0 + 1), acc.1));
    let mx = ex + wide.0;
    let my = ey + h.max_height();
    Frame::new(h.truncation.w, window.x0 - mx, window.x1 + mx, window.y0 - my, window.y1 + my)
}

/// Checks that every local operator in the window that commutes with all
/// terms is generated by them.
pub fn verify_to_condition(h: &BoundaryHamiltonian, window: Option<[i64; 4]>) -> TOReport {
    let win = match window {
        Some([x0, x1, y0, y1]) => Frame::new(h.truncation.w, x0, x1, y0, y1),
        None => h.default_window(),
    };
    let frame = span_frame(h, &win);
    let terms = h.instances(&win, false);
    let span_terms = h.instances(&frame, true);
    let bad = excess(&h.truncation, &win, &terms, &frame, &span_terms);
    TOReport { window: [win.x0, win.x1, win.y0, win.y1], passed: bad.is_empty(), counterexample_count: bad.len(), counterexamples: bad }
}

/// Adds translation-invariant terms until the topological-order condition
/// holds. Each round takes the counterexamples lightest first and keeps every
/// one that commutes with the translates of those already taken.
pub fn to_complete(mut h: BoundaryHamiltonian, opts: &ConstructOptions) -> Result<BoundaryHamiltonian> {
    for _ in 0..opts.max_rounds {
        let report = verify_to_condition(&h, None);
        if report.passed {
            h.certificate = Some(report);
            return Ok(h);
        }
        let mut order = report.counterexamples;
        if let Some(seed) = opts.seed {
            let lightest = order[0].entries().count();
            let ties = order.iter().take_while(|c| c.entries().count() == lightest).count();
            order[..ties].rotate_left((seed % ties as u64) as usize);
        }
        let mut taken: Vec<PauliVector> = Vec::new();
        for c in order {
            if commutes_periodic(&c, &c, h.period) && taken.iter().all(|t| commutes_periodic(t, &c, h.period)) {
                taken.push(c);
            }
        }
        if taken.is_empty() {
            return Err(Error::NonTermination(opts.max_rounds));
        }
        h.terms.extend(taken.into_iter().map(|c| HamiltonianTerm { pauli: c, y_period: h.period, origin: Origin::Completion, anyon: None }));
    }
    Err(Error::NonTermination(opts.max_rounds))
}

/// Full stabilizer translates crossing a defect cut, one per class modulo `p`.
fn crossing_translates(t: &Truncation, p: i64) -> Vec<PauliVector> {
    let (ex, _) = t.extent();
    let (lo, hi) = t.core;
    let mut out: Vec<PauliVector> = Vec::new();
    for part in &t.parts {
        for g in &part.stabilizers {
            let Some(b) = g.bounds() else { continue };
            for sa in lo - ex - b.1..=hi + ex - b.0 {
                for k in 0..p {
                    let c = g.shift(sa, k - b.2);
                    if !t.parts.iter().any(|q| q.contains_op(&c)) && t.op_exists(&c) && !out.contains(&c) {
                        out.push(c);
                    }
                }
            }
        }
    }
    out
}

/// `p` with rows reduced modulo `c`, as on a cylinder of circumference `c`.
fn fold(p: &PauliVector, c: i64) -> PauliVector {
    let (d, w) = (p.d(), p.w());
    p.entries().fold(PauliVector::zero(d, w), |acc, (s, a, b, k)| {
        let (xe, ze) = if s < w { (k as i64, 0) } else { (0, k as i64) };
        acc.add(&PauliVector::single(d, w, s % w, a, b.rem_euclid(c), xe, ze))
    })
}

/// The bulk across a defect cut when it condenses every condensed string:
/// each string, wrapped around a cylinder along the cut, must be a product of
/// kept and crossing stabilizers.
fn bulk_condensing(c: &BoundaryHamiltonian) -> Option<BoundaryHamiltonian> {
    let t = &c.truncation;
    let (ex, ey) = t.extent();
    let p = c.period;
    let strings: Vec<&PauliVector> = c.terms.iter().map(|term| &term.pauli).collect();
    let (x0, x1) = strings.iter().filter_map(|s| s.bounds()).fold((t.core.0, t.core.1), |acc, b| (acc.0.min(b.0), acc.1.max(b.1)));
    let height = c.max_height().max(ey);
    let circ = p * ((2 * height + 2 + p - 1) / p);
    let cyl = Frame::new(t.w, x0 - 2 * ex, x1 + 2 * ex, 0, circ - 1);
    let wide = Frame::new(t.w, cyl.x0, cyl.x1, -ey, circ + ey);
    let mut span = SpanBasis::new(t.d, cyl.width());
    let mut ops = t.kept_translates(&wide, true);
    for g in crossing_translates(t, p) {
        ops.extend(HamiltonianTerm { pauli: g, y_period: p, origin: Origin::Bulk, anyon: None }.instances(&wide, true));
    }
    for o in &ops {
        span.insert(&cyl.encode(&fold(o, circ))?);
    }
    for s in strings {
        let wrapped = (0..circ / p).fold(PauliVector::zero(t.d, t.w), |acc, k| acc.add(&s.shift(0, k * p)));
        if !span.contains(&cyl.encode(&fold(&wrapped, circ))?) {
            return None;
        }
    }
    Some(restore_bulk(BoundaryHamiltonian { terms: vec![], ..c.clone() }))
}

/// Adds every full stabilizer translate crossing a defect cut that commutes
/// with all terms, so completion only has to repair what the bulk cannot.
pub fn restore_bulk(mut h: BoundaryHamiltonian) -> BoundaryHamiltonian {
    let t = h.truncation.clone();
    if t.parts.len() < 2 {
        return h;
    }
    let (ex, ey) = t.extent();
    let (lo, hi) = t.core;
    let p = h.period;
    let crossing = crossing_translates(&t, p);
    let my = h.max_height() + ey;
    let frame = Frame::new(t.w, lo - 3 * ex, hi + 3 * ex, -my, p + my);
    let present = h.instances(&frame, false);
    let mut accepted: Vec<PauliVector> = Vec::new();
    for c in crossing {
        if present.iter().all(|q| q.commutation(&c) == 0)
            && commutes_periodic(&c, &c, p)
            && accepted.iter().all(|a| commutes_periodic(a, &c, p))
        {
            accepted.push(c);
        }
    }
    h.terms.extend(accepted.into_iter().map(|c| HamiltonianTerm { pauli: c, y_period: p, origin: Origin::Bulk, anyon: None }));
    h
}

/// Condensation, restoration of the bulk across a defect cut, then completion.
///
/// A defect whose condensed strings are all products of bulk stabilizers is
/// the trivial one, and gets the bulk itself across the cut.
pub fn construct(an: &Analysis, lagrangian: &LagrangianSubgroup, opts: &ConstructOptions) -> Result<BoundaryHamiltonian> {
    let c = condense(an, lagrangian, opts)?;
    if transmits(&c) {
        if let Some(bulk) = bulk_condensing(&c) {
            return to_complete(bulk, opts);
        }
    }
    to_complete(restore_bulk(c), opts)
}

/// Whether some condensed term acts on both halves of a defect.
fn transmits(h: &BoundaryHamiltonian) -> bool {
    let t = &h.truncation;
    t.parts.len() >= 2
        && h.terms.iter().any(|term| {
            t.parts.iter().all(|part| term.pauli.entries().any(|(s, a, _, _)| part.contains(s % t.w, a)))
        })
}


/// Every Lagrangian subgroup of the analysed theory with its construction.
pub fn construct_all(
    an: &Analysis,
    cap: u128,
    opts: &ConstructOptions,
) -> Result<Vec<(LagrangianSubgroup, Result<BoundaryHamiltonian>)>> {
    let lagrangians = enumerate_lagrangians(&AnyonGroup::from_theory(&an.theory), cap)?;
    let built = par::map(&lagrangians, |l| construct(an, l, opts));
    Ok(lagrangians.into_iter().zip(built).collect())
}

/// A bulk string running through a corridor, with the stabilizer generators
/// it violates near each open end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BulkString {
    pub pauli: PauliVector,
    /// Indices into the left part's stabilizers violated at the left end.
    pub left_charge: Vec<usize>,
    /// Same for the right part, empty for a boundary.
    pub right_charge: Vec<usize>,
}

fn touches_columns(p: &PauliVector, x0: i64, x1: i64) -> bool {
    p.entries().any(|(_, a, _, _)| a >= x0 && a <= x1)
}

/// Generator indices of `part` violated by `p` through translates meeting columns `[x0, x1]`.
fn charge(t: &Truncation, part: usize, p: &PauliVector, frame: &Frame, x0: i64, x1: i64) -> Vec<usize> {
    let Some(pt) = t.parts.get(part) else { return vec![] };
    let mut out = Vec::new();
    for (i, g) in pt.stabilizers.iter().enumerate() {
        let Some(b) = g.bounds() else { continue };
        let hit = frame.overlapping_shifts(b).any(|(sa, sb)| {
            let s = g.shift(sa, sb);
            pt.contains_op(&s) && touches_columns(&s, x0, x1) && s.commutation(p) != 0
        });
        if hit {
            out.push(i);
        }
    }
    out
}

/// Operators in `corridor` that commute with every term away from its open
/// ends, modulo operators commuting with everything and operators local to
/// an end. A corridor reaching past both sides of a defect has two open ends.
pub fn bulk_strings_through(h: &BoundaryHamiltonian, corridor: [i64; 4]) -> Vec<BulkString> {
    let t = &h.truncation;
    let (ex, _) = t.extent();
    let win = Frame::new(t.w, corridor[0], corridor[1], corridor[2], corridor[3]);
    let left_end = (win.x0, win.x0 + ex - 1);
    let right_end = (t.parts.len() == 2).then(|| (win.x1 - ex + 1, win.x1));
    let near_end = |p: &PauliVector| {
        touches_columns(p, i64::MIN, left_end.1) || right_end.is_some_and(|(r0, _)| touches_columns(p, r0, i64::MAX))
    };
    let all = h.instances(&win, false);
    let away: Vec<PauliVector> = all.iter().filter(|p| !near_end(p)).cloned().collect();
    let open = commutant_with(t, &win, &away);
    let closed = commutant_with(t, &win, &all);
    let mut span = SpanBasis::new(t.d, win.width());
    for c in &closed {
        span.insert(&win.encode(c).unwrap());
    }
    // Sites meeting some term that reaches an end.
    let end_local = |p: &PauliVector| {
        touches_columns(p, i64::MIN, left_end.1 + ex) || right_end.is_some_and(|(r0, _)| touches_columns(p, r0 - ex, i64::MAX))
    };
    for s in t.single_paulis(&win) {
        if end_local(&s) {
            span.insert(&win.encode(&s).unwrap());
        }
    }
    let probe = Frame::new(t.w, win.x0 - 2 * ex, win.x1 + 2 * ex, win.y0 - 2 * ex, win.y1 + 2 * ex);
    open.into_iter()
        .filter(|c| span.insert(&win.encode(c).unwrap()))
        .map(|p| BulkString {
            left_charge: charge(t, 0, &p, &probe, i64::MIN, left_end.1),
            right_charge: right_end.map_or(vec![], |(r0, _)| charge(t, 1, &p, &probe, r0, i64::MAX)),
            pauli: p,
        })
        .collect()
}

/// Terms terminating a defect at `y = 0`: the defect terms live at `y ≥ 0`,
/// the plain bulk below, and local terms are added around the endpoint until
/// the topological-order condition holds there.
pub fn complete_defect_endpoint(h: &BoundaryHamiltonian, window: Option<[i64; 4]>, opts: &ConstructOptions) -> Result<Vec<PauliVector>> {
    let t = &h.truncation;
    if t.parts.len() != 2 || t.parts[0].stabilizers != t.parts[1].stabilizers {
        return Err(Error::IncompatibleCodes("an endpoint needs the same code on both sides".into()));
    }
    let (ex, ey) = t.extent();
    let (lo, hi) = t.core;
    let win = match window {
        Some([x0, x1, y0, y1]) => Frame::new(t.w, x0, x1, y0, y1),
        None => {
            let r = 2 * ey + 2 + h.period;
            Frame::new(t.w, lo - 2 * ex - 1, hi + 2 * ex + 1, -r, r)
        }
    };
    let frame = span_frame(h, &win);
    let above = |f: &Frame, inner: bool| -> Vec<PauliVector> {
        let mut out = t.kept_translates(f, inner);
        for term in &h.terms {
            out.extend(term.instances(f, inner).into_iter().filter(|s| s.bounds().is_some_and(|b| b.2 >= 0)));
        }
        out
    };
    // Bulk translates straddling `y = 0` join the bulk side when they commute
    // with everything above.
    let upper = above(&frame, false);
    let below = |f: &Frame, inner: bool| -> Vec<PauliVector> {
        let mut out = Vec::new();
        for g in t.parts[0].stabilizers.iter().chain(&t.global_constraints).chain(&t.parts[0].constraints) {
            let Some(b) = g.bounds() else { continue };
            let shifts: Vec<(i64, i64)> = if inner { f.inner_shifts(b).collect() } else { f.overlapping_shifts(b).collect() };
            out.extend(shifts.into_iter().map(|(sa, sb)| g.shift(sa, sb)).filter(|s| {
                s.bounds().is_some_and(|sb| sb.3 < 0 || sb.2 < 0 && upper.iter().all(|u| u.commutation(s) == 0))
            }));
        }
        out
    };
    let mut added: Vec<PauliVector> = Vec::new();
    for _ in 0..opts.max_rounds {
        let mut terms = below(&win, false);
        terms.extend(above(&win, false));
        terms.extend(added.iter().cloned());
        let mut span_terms = below(&frame, true);
        span_terms.extend(above(&frame, true));
        span_terms.extend(added.iter().cloned());
        let bad = excess(t, &win, &terms, &frame, &span_terms);
        let Some(c) = bad.into_iter().next() else { return Ok(added) };
        added.push(c);
    }
    Err(Error::NonTermination(opts.max_rounds))
}
