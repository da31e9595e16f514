//! Boundary and defect gauge operators of truncated codes.

use crate::catalog::{Side, StabilizerCodeSpec, TruncationGeometry};
use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::mge::{mge, Matrix, SpanBasis};
use crate::par;
use crate::poly::{dot, LaurentPoly, PauliVector};
use serde::{Deserialize, Serialize};

/// One half-plane of a truncation together with the generators living on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Part {
    pub stabilizers: Vec<PauliVector>,
    pub constraints: Vec<PauliVector>,
    pub side: Side,
    /// Column containing the cut.
    pub edge: i64,
    /// Slots of the `edge` column that belong to this part.
    pub mask: Vec<bool>,
}

impl Part {
    #[inline]
    pub fn contains(&self, slot: usize, a: i64) -> bool {
        match self.side {
            Side::Left => a < self.edge || (a == self.edge && self.mask[slot]),
            Side::Right => a > self.edge || (a == self.edge && self.mask[slot]),
        }
    }

    pub fn contains_op(&self, p: &PauliVector) -> bool {
        let w = p.w();
        p.entries().all(|(s, a, _, _)| self.contains(s % w, a))
    }

    /// `p` with every site outside the part removed.
    pub fn restrict(&self, p: &PauliVector) -> PauliVector {
        let w = p.w();
        let mut out = PauliVector::zero(p.d(), w);
        for (s, a, b, c) in p.entries() {
            if self.contains(s % w, a) {
                out.slot_mut(s).add_term(a, b, c as i64);
            }
        }
        out
    }
}

/// A code truncated to one or two half-planes. For a boundary only the
/// sites of the single part exist; for a defect every site exists and each
/// part contributes the stabilizers that fit inside it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Truncation {
    pub name: String,
    pub d: u64,
    pub w: usize,
    pub parts: Vec<Part>,
    /// Gauge constraints imposed on the whole plane.
    pub global_constraints: Vec<PauliVector>,
    pub everywhere: bool,
    /// Columns `[lo, hi]` spanned by the cut.
    pub core: (i64, i64),
}

/// Width of the strip of sites between the two halves of a defect.
pub const DEFECT_GAP: i64 = 1;

impl Truncation {
    pub fn boundary(spec: &StabilizerCodeSpec, side: Side, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != spec.w {
            return Err(Error::DimensionMismatch(format!("mask of length {} for w = {}", mask.len(), spec.w)));
        }
        let mask = match side {
            Side::Left => mask,
            Side::Right => mask.iter().map(|m| !m).collect(),
        };
        let part = Part { stabilizers: spec.stabilizers.clone(), constraints: spec.gauge_constraints.clone(), side, edge: 0, mask };
        Ok(Truncation { name: spec.name.clone(), d: spec.dim(), w: spec.w, parts: vec![part], global_constraints: vec![], everywhere: false, core: (0, 0) })
    }

    pub fn from_geometry(spec: &StabilizerCodeSpec, geom: &TruncationGeometry) -> Result<Self> {
        Self::boundary(spec, geom.side, geom.mask(spec)?)
    }

    /// Left code on `a ≤ 0`, right code on `a ≥ 1 + DEFECT_GAP`, all sites present.
    pub fn defect(left: &StabilizerCodeSpec, right: &StabilizerCodeSpec) -> Result<Self> {
        if left.d != right.d {
            return Err(Error::IncompatibleCodes(format!("d = {} on the left but {} on the right", left.dim(), right.dim())));
        }
        let w = left.w.max(right.w);
        let (l, r) = (left.padded(w), right.padded(w));
        let shared = l.gauge_constraints == r.gauge_constraints;
        let part = |c: &StabilizerCodeSpec, side, edge| Part {
            stabilizers: c.stabilizers.clone(),
            constraints: if shared { vec![] } else { c.gauge_constraints.clone() },
            side,
            edge,
            mask: vec![true; w],
        };
        Ok(Truncation {
            name: format!("{}|{}", left.name, right.name),
            d: left.dim(),
            w,
            parts: vec![part(&l, Side::Left, 0), part(&r, Side::Right, 1 + DEFECT_GAP)],
            global_constraints: if shared { l.gauge_constraints.clone() } else { vec![] },
            everywhere: true,
            core: (0, 1 + DEFECT_GAP),
        })
    }

    pub fn site_exists(&self, slot: usize, a: i64) -> bool {
        self.everywhere || self.parts.iter().any(|p| p.contains(slot, a))
    }

    pub fn op_exists(&self, p: &PauliVector) -> bool {
        self.everywhere || p.entries().all(|(s, a, _, _)| self.site_exists(s % self.w, a))
    }

    /// Largest x- and y-extent of any generator.
    pub fn extent(&self) -> (i64, i64) {
        self.all_generators()
            .filter_map(|(_, p)| p.bounds())
            .fold((1, 1), |acc, (a0, a1, b0, b1)| (acc.0.max(a1 - a0 + 1), acc.1.max(b1 - b0 + 1)))
    }

    /// Every generator with the index of the part it belongs to (`None` for global constraints).
    fn all_generators(&self) -> impl Iterator<Item = (Option<usize>, &PauliVector)> {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, p)| p.stabilizers.iter().chain(&p.constraints).map(move |g| (Some(i), g)))
            .chain(self.global_constraints.iter().map(|g| (None, g)))
    }

    fn keeps(&self, part: Option<usize>, p: &PauliVector) -> bool {
        match part {
            Some(i) => self.parts[i].contains_op(p),
            None => self.op_exists(p),
        }
    }

    /// Bulk stabilizer and constraint translates that are kept and meet `frame`.
    pub fn kept_translates(&self, frame: &Frame, inner_only: bool) -> Vec<PauliVector> {
        let mut out = Vec::new();
        for (part, g) in self.all_generators() {
            let Some(bounds) = g.bounds() else { continue };
            let shifts: Vec<(i64, i64)> =
                if inner_only { frame.inner_shifts(bounds).collect() } else { frame.overlapping_shifts(bounds).collect() };
            for (sa, sb) in shifts {
                let t = g.shift(sa, sb);
                if self.keeps(part, &t) {
                    out.push(t);
                }
            }
        }
        out
    }

    /// Stabilizer translates inside `frame` that are cut by a part, restricted to that part.
    pub fn truncated_translates(&self, frame: &Frame) -> Vec<PauliVector> {
        let mut out = Vec::new();
        for part in &self.parts {
            for g in &part.stabilizers {
                let Some(bounds) = g.bounds() else { continue };
                for (sa, sb) in frame.inner_shifts(bounds) {
                    let t = g.shift(sa, sb);
                    if part.contains_op(&t) {
                        continue;
                    }
                    let r = part.restrict(&t);
                    if !r.is_zero() {
                        out.push(r);
                    }
                }
            }
        }
        out
    }

    /// Single-site Paulis `X` and `Z` on existing sites of `frame`.
    pub fn single_paulis(&self, frame: &Frame) -> Vec<PauliVector> {
        let mut out = Vec::new();
        for b in frame.y0..=frame.y1 {
            for a in frame.x0..=frame.x1 {
                for s in 0..self.w {
                    if self.site_exists(s, a) {
                        out.push(PauliVector::single(self.d, self.w, s, a, b, 1, 0));
                        out.push(PauliVector::single(self.d, self.w, s, a, b, 0, 1));
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tag {
    Trivial,
    Primary,
    Secondary,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaugeOperator {
    pub pauli: PauliVector,
    pub y_period: u64,
    pub tag: Tag,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    /// Initial half-width of the Pauli window in x.
    pub window_x: Option<i64>,
    /// Initial window height in y.
    pub window_y: Option<i64>,
    /// Maximum number of window doublings.
    pub max_doublings: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { window_x: None, window_y: None, max_doublings: 8 }
    }
}

#[derive(Debug, Clone)]
pub struct GaugeSolution {
    pub generators: Vec<GaugeOperator>,
    /// Final Pauli window `[x0, x1, y0, y1]`.
    pub window: [i64; 4],
    pub doublings: usize,
}

impl GaugeSolution {
    pub fn paulis(&self) -> Vec<PauliVector> {
        self.generators.iter().map(|g| g.pauli.clone()).collect()
    }

    pub fn secondary(&self) -> impl Iterator<Item = &GaugeOperator> {
        self.generators.iter().filter(|g| g.tag == Tag::Secondary)
    }
}

/// Span of bulk translates plus accepted generators and their y-translates,
/// in a frame with margins around the Pauli window.
struct Quotient {
    frame: Frame,
    trivial: SpanBasis,
    primary: SpanBasis,
}

impl Quotient {
    fn new(t: &Truncation, frame: Frame) -> Self {
        let mut trivial = SpanBasis::new(t.d, frame.width());
        for s in t.kept_translates(&frame, true) {
            trivial.insert(&frame.encode(&s).unwrap());
        }
        let mut primary = trivial.clone();
        for s in t.truncated_translates(&frame) {
            primary.insert(&frame.encode(&s).unwrap());
        }
        Quotient { frame, trivial, primary }
    }

    fn add_translates(&mut self, p: &PauliVector) {
        let Some(bounds) = p.bounds() else { return };
        for (_, sb) in self.frame.inner_shifts((bounds.0, bounds.0, bounds.2, bounds.3)).filter(|&(sa, _)| sa == 0) {
            let v = self.frame.encode(&p.shift(0, sb)).unwrap();
            self.trivial.insert(&v);
            self.primary.insert(&v);
        }
    }
}

/// Operators supported in `window` that commute with every kept translate.
pub fn commutant(t: &Truncation, window: &Frame, extra: &[PauliVector]) -> Vec<PauliVector> {
    let mut cols = t.kept_translates(window, false);
    cols.extend(extra.iter().cloned());
    commutant_with(t, window, &cols)
}

/// Operators on existing sites of `window` that commute with every operator
/// in `terms`, lightest first.
pub fn commutant_with(t: &Truncation, window: &Frame, terms: &[PauliVector]) -> Vec<PauliVector> {
    let rows = t.single_paulis(window);
    let entries: Vec<Vec<u64>> = par::map(&rows, |r| terms.iter().map(|c| c.commutation(r)).collect());
    let m = Matrix::from_rows(t.d, terms.len(), entries);
    let res = mge(&m);
    let mut out: Vec<PauliVector> = res
        .relations
        .iter()
        .map(|rel| {
            let mut p = PauliVector::zero(t.d, t.w);
            for (r, &c) in rows.iter().zip(rel) {
                if c != 0 {
                    p = p.add(&r.scale(c));
                }
            }
            p
        })
        .filter(|p| !p.is_zero())
        .collect();
    out.sort_by_key(|p| (p.entries().count(), p.bounds()));
    out
}

fn solve_once(t: &Truncation, x_half: i64, height: i64) -> Vec<GaugeOperator> {
    let (ex, ey) = t.extent();
    let (lo, hi) = t.core;
    let frame = Frame::new(t.w, lo - x_half - 2 * ex, hi + x_half + 2 * ex, -2 * ey, height + 2 * ey);
    let mut q = Quotient::new(t, frame);
    let mut gens = Vec::new();
    for h in 1..=height {
        let window = Frame::new(t.w, lo - x_half, hi + x_half, 0, h - 1);
        let cands = commutant(t, &window, &[]);
        let encoded: Vec<(PauliVector, Vec<u64>)> =
            cands.into_iter().map(|p| { let v = frame.encode(&p).unwrap(); (p, v) }).collect();
        // Primary candidates first so that secondary generators are only
        // reported when the truncated stabilizers cannot account for them.
        for pass in [Tag::Primary, Tag::Secondary] {
            for (p, v) in &encoded {
                let is_primary = q.primary.contains(v);
                if (pass == Tag::Primary) != is_primary || q.trivial.contains(v) {
                    continue;
                }
                q.add_translates(p);
                gens.push(GaugeOperator { pauli: p.clone(), y_period: 1, tag: pass });
            }
        }
    }
    gens
}

/// Generators of the boundary gauge operators modulo bulk stabilizers and
/// y-translation. The window grows until a doubled window yields nothing new.
pub fn solve_gauge_operators(t: &Truncation, opts: SolveOptions) -> Result<GaugeSolution> {
    let (ex, ey) = t.extent();
    let mut x_half = opts.window_x.unwrap_or(2 * ex + 1);
    let mut height = opts.window_y.unwrap_or(2 * ey + 2);
    let probe = Frame::new(t.w, t.core.0 - x_half, t.core.1 + x_half, 0, height);
    if t.kept_translates(&probe, true).is_empty() {
        return Err(Error::WindowTooSmall(format!("no stabilizer fits in a window of half-width {x_half}")));
    }
    let mut gens = solve_once(t, x_half, height);
    for doublings in 0..opts.max_doublings {
        let (lo, hi) = t.core;
        let window = Frame::new(t.w, lo - 2 * x_half, hi + 2 * x_half, 0, 2 * height - 1);
        let frame = Frame::new(t.w, window.x0 - 2 * ex, window.x1 + 2 * ex, -2 * ey, 2 * height + 2 * ey);
        let mut q = Quotient::new(t, frame);
        for g in &gens {
            q.add_translates(&g.pauli);
        }
        let stable = commutant(t, &window, &[]).iter().all(|p| q.trivial.contains(&frame.encode(p).unwrap()));
        if stable {
            return Ok(GaugeSolution { generators: gens, window: [lo - x_half, hi + x_half, 0, height - 1], doublings });
        }
        x_half *= 2;
        height *= 2;
        gens = solve_once(t, x_half, height);
    }
    Err(Error::NonTermination(opts.max_doublings))
}

/// Re-tags generators against a fresh quotient frame.
pub fn classify_primary_secondary(ops: &[GaugeOperator], t: &Truncation) -> Vec<GaugeOperator> {
    let (ex, ey) = t.extent();
    let bounds = ops.iter().filter_map(|g| g.pauli.bounds()).fold((t.core.0, t.core.1, 0, 0), |acc, b| {
        (acc.0.min(b.0), acc.1.max(b.1), acc.2.min(b.2), acc.3.max(b.3))
    });
    let frame = Frame::new(t.w, bounds.0 - 2 * ex, bounds.1 + 2 * ex, bounds.2 - 2 * ey, bounds.3 + 2 * ey);
    let q = Quotient::new(t, frame);
    ops.iter()
        .map(|g| {
            let v = frame.encode(&g.pauli).unwrap();
            let tag = if q.trivial.contains(&v) {
                Tag::Trivial
            } else if q.primary.contains(&v) {
                Tag::Primary
            } else {
                Tag::Secondary
            };
            GaugeOperator { tag, ..g.clone() }
        })
        .collect()
}

/// Entry `i` is the `x⁰` part of `dot(generators[i], p)`, a polynomial in `y`.
pub fn gauge_violation_map(p: &PauliVector, generators: &[PauliVector]) -> Result<Vec<LaurentPoly>> {
    generators.iter().map(|g| Ok(dot(g, p)?.x0_slice())).collect()
}

/// Whether `p` commutes with every kept translate it touches.
pub fn commutes_with_bulk(t: &Truncation, p: &PauliVector) -> bool {
    let Some((a0, a1, b0, b1)) = p.bounds() else { return true };
    let frame = Frame::new(t.w, a0, a1, b0, b1);
    t.kept_translates(&frame, false).iter().all(|s| s.commutation(p) == 0)
}
