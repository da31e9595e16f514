//! Built-in codes, the JSON code-file format, validation and truncation geometry.
//!
//! Lattice conventions for two-slot edge codes: slot 0 of cell `(a, b)` is the
//! horizontal edge from vertex `(a, b)` to `(a+1, b)`, slot 1 the vertical edge
//! from `(a, b)` to `(a, b+1)`. Four-slot codes stack two such layers, slots
//! `(0, 1)` and `(2, 3)`.

use crate::arith::Modulus;
use crate::error::{Error, Result};
use crate::poly::{dot, LaurentPoly, PauliVector};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerCodeSpec {
    pub name: String,
    pub d: Modulus,
    pub w: usize,
    pub stabilizers: Vec<PauliVector>,
    pub gauge_constraints: Vec<PauliVector>,
    /// Slot masks of the edge column for the smooth and rough truncations.
    pub smooth_mask: Vec<bool>,
    pub rough_mask: Vec<bool>,
}

impl StabilizerCodeSpec {
    pub fn new(name: &str, d: u64, w: usize, stabilizers: Vec<PauliVector>, gauge_constraints: Vec<PauliVector>) -> Result<Self> {
        let mut smooth_mask = vec![true; w];
        for (s, m) in smooth_mask.iter_mut().enumerate() {
            *m = s % 2 == 1;
        }
        let rough_mask = vec![true; w];
        Ok(StabilizerCodeSpec { name: name.to_string(), d: Modulus::new(d)?, w, stabilizers, gauge_constraints, smooth_mask, rough_mask })
    }

    pub fn dim(&self) -> u64 {
        self.d.d()
    }

    /// Largest x- and y-extent over all generators.
    pub fn extent(&self) -> (i64, i64) {
        self.stabilizers
            .iter()
            .chain(&self.gauge_constraints)
            .filter_map(PauliVector::bounds)
            .fold((0, 0), |acc, (a0, a1, b0, b1)| (acc.0.max(a1 - a0), acc.1.max(b1 - b0)))
    }

    /// The same code with `y ↦ y^{-1}` applied to every generator.
    pub fn orientation_reversed(&self) -> Self {
        let mut c = self.clone();
        c.name = format!("{}~", self.name);
        c.stabilizers = self.stabilizers.iter().map(PauliVector::reflect_y).collect();
        c.gauge_constraints = self.gauge_constraints.iter().map(PauliVector::reflect_y).collect();
        c
    }

    /// Pads every generator with identity slots up to `w` qudits per cell.
    pub fn padded(&self, w: usize) -> Self {
        if w == self.w {
            return self.clone();
        }
        let pad = |p: &PauliVector| {
            let d = self.dim();
            let mut slots = vec![LaurentPoly::zero(d); 2 * w];
            for s in 0..self.w {
                slots[s] = p.slot(s).clone();
                slots[w + s] = p.slot(self.w + s).clone();
            }
            PauliVector::from_slots(d, slots).unwrap()
        };
        let mut c = self.clone();
        c.w = w;
        c.stabilizers = self.stabilizers.iter().map(pad).collect();
        c.gauge_constraints = self.gauge_constraints.iter().map(pad).collect();
        c.smooth_mask.resize(w, true);
        c.rough_mask.resize(w, true);
        c
    }
}

fn poly(d: u64, t: &[(i64, i64, i64)]) -> LaurentPoly {
    LaurentPoly::from_terms(d, t)
}

fn pv(d: u64, slots: Vec<LaurentPoly>) -> PauliVector {
    PauliVector::from_slots(d, slots).expect("catalog vectors are well formed")
}

/// Vertex term `[1 − x̄, 1 − ȳ | 0, 0]` and plaquette term `[0, 0 | 1 − y, −1 + x]`.
pub fn toric_pair(d: u64) -> (PauliVector, PauliVector) {
    let z = LaurentPoly::zero(d);
    let a = pv(d, vec![poly(d, &[(0, 0, 1), (-1, 0, -1)]), poly(d, &[(0, 0, 1), (0, -1, -1)]), z.clone(), z.clone()]);
    let b = pv(d, vec![z.clone(), z, poly(d, &[(0, 0, 1), (0, 1, -1)]), poly(d, &[(0, 0, -1), (1, 0, 1)])]);
    (a, b)
}

/// Places a two-slot operator into layer `layer` of a four-slot cell.
fn layer(p: &PauliVector, layer: usize) -> PauliVector {
    let d = p.d();
    let mut slots = vec![LaurentPoly::zero(d); 8];
    for s in 0..2 {
        slots[2 * layer + s] = p.slot(s).clone();
        slots[4 + 2 * layer + s] = p.slot(2 + s).clone();
    }
    pv(d, slots)
}

fn toric(name: &str, d: u64) -> Result<StabilizerCodeSpec> {
    let (a, b) = toric_pair(d);
    StabilizerCodeSpec::new(name, d, 2, vec![a, b], vec![])
}

/// The Z_2 toric code conjugated by CNOTs from each vertical edge `(a, b)` to
/// the horizontal edge of cell `(a+1, b)`.
fn fish_toric() -> Result<StabilizerCodeSpec> {
    let (a, b) = toric_pair(2);
    let cnot = |p: &PauliVector| {
        let x0 = p.slot(0).add(&p.slot(1).shift(1, 0));
        let z1 = p.slot(3).add(&p.slot(2).shift(-1, 0));
        pv(2, vec![x0, p.slot(1).clone(), p.slot(2).clone(), z1])
    };
    StabilizerCodeSpec::new("fish_toric", 2, 2, vec![cnot(&a), cnot(&b)], vec![])
}

/// Stacks `layers` Z_d toric codes and condenses the bosons `condensed`,
/// each given as exponents `(e_1, m_1, e_2, m_2, ...)`. Generators are the
/// same-cell vertex/plaquette products commuting with every hop, followed by
/// the x- and y-hops of each condensed boson.
fn condensed_toric(d: u64, layers: usize, condensed: &[Vec<i64>]) -> Vec<PauliVector> {
    let w = 2 * layers;
    let (a, b) = toric_pair(d);
    let embed = |p: &PauliVector, k: usize| {
        let mut slots = vec![LaurentPoly::zero(d); 2 * w];
        for s in 0..2 {
            slots[2 * k + s] = p.slot(s).clone();
            slots[w + 2 * k + s] = p.slot(2 + s).clone();
        }
        pv(d, slots)
    };
    let sites: Vec<PauliVector> = (0..layers).flat_map(|k| [embed(&a, k), embed(&b, k)]).collect();
    let mut hops = Vec::new();
    for c in condensed {
        let mut hx = vec![LaurentPoly::zero(d); 2 * w];
        let mut hy = vec![LaurentPoly::zero(d); 2 * w];
        for k in 0..layers {
            let (e, m) = (c[2 * k], c[2 * k + 1]);
            hx[w + 2 * k].add_term(0, 0, e);
            hx[2 * k + 1].add_term(1, 0, m);
            hy[w + 2 * k + 1].add_term(0, 0, e);
            hy[2 * k].add_term(0, 1, m);
        }
        hops.push(pv(d, hx));
        hops.push(pv(d, hy));
    }
    let mut rows = Vec::new();
    for s in &sites {
        let mut r = Vec::new();
        for h in &hops {
            for sa in -2..=2 {
                for sb in -2..=2 {
                    r.push(h.shift(sa, sb).commutation(s));
                }
            }
        }
        rows.push(r);
    }
    let cols = rows[0].len();
    let kernel = crate::mge::mge(&crate::mge::Matrix::from_rows(d, cols, rows)).relations;
    let mut out: Vec<PauliVector> = kernel
        .iter()
        .map(|k| k.iter().zip(&sites).fold(PauliVector::zero(d, w), |acc, (&c, s)| acc.add(&s.scale(c))))
        .collect();
    out.extend(hops);
    out
}

/// Condensing `e²m²` in the Z_4 toric code.
fn double_semion() -> Result<StabilizerCodeSpec> {
    StabilizerCodeSpec::new("double_semion", 4, 2, condensed_toric(4, 1, &[vec![2, 2]]), vec![])
}

/// Two Z_4 toric-code layers with `e_2²m_2²` and `e_1²m_1²m_2²` condensed.
pub fn six_semion() -> Result<StabilizerCodeSpec> {
    StabilizerCodeSpec::new("six_semion", 4, 4, condensed_toric(4, 2, &[vec![0, 0, 2, 2], vec![2, 2, 0, 2]]), vec![])
}

/// Two toric-code layers regrouped so that the gauge-constraint-free anyons
/// form the three-fermion theory.
fn three_fermion() -> Result<StabilizerCodeSpec> {
    let (a, b) = toric_pair(2);
    let (a1, b1, a2, b2) = (layer(&a, 0), layer(&b, 0), layer(&a, 1), layer(&b, 1));
    let s1 = a1.add(&b1);
    let s2 = a1.add(&a2).add(&b2);
    let g1 = a2.add(&b2);
    let g2 = a2.add(&a1).add(&b1);
    // Each Z_4 qudit is pinned to X² = 1, leaving X and Z² as a qubit pair.
    let lift = |p: &PauliVector| {
        let slots = p.slots().iter().enumerate().map(|(i, s)| {
            let k = if i < 4 { 1 } else { 2 };
            let t: Vec<[i64; 3]> = s.to_triples().into_iter().map(|[a, b, c]| [a, b, c * k]).collect();
            LaurentPoly::from_triples(4, &t)
        });
        pv(4, slots.collect())
    };
    let mut constraints = vec![lift(&g1), lift(&g2)];
    constraints.extend((0..4).map(|s| PauliVector::single(4, 4, s, 0, 0, 2, 0)));
    StabilizerCodeSpec::new("three_fermion", 4, 4, vec![lift(&s1), lift(&s2)], constraints)
}

/// Honeycomb color code in the brick-wall embedding: slot 0 holds the A site,
/// slot 1 the B site of each cell; a hexagon is A at `{1, x, y}` and B at `{x, y, xy}`.
fn color_code() -> Result<StabilizerCodeSpec> {
    let d = 2;
    let ha = poly(d, &[(0, 0, 1), (1, 0, 1), (0, 1, 1)]);
    let hb = poly(d, &[(1, 0, 1), (0, 1, 1), (1, 1, 1)]);
    let z = LaurentPoly::zero(d);
    let sx = pv(d, vec![ha.clone(), hb.clone(), z.clone(), z.clone()]);
    let sz = pv(d, vec![z.clone(), z, ha, hb]);
    let mut c = StabilizerCodeSpec::new("color_code", d, 2, vec![sx, sz], vec![])?;
    c.smooth_mask = vec![true, true];
    c.rough_mask = vec![false, true];
    Ok(c)
}

fn bb_polys(a: i64, b: i64) -> (LaurentPoly, LaurentPoly) {
    let f = poly(2, &[(1, 0, 1), (2, 0, 1), (0, b, 1)]);
    let g = poly(2, &[(0, 1, 1), (0, 2, 1), (a, 0, 1)]);
    (f, g)
}

fn bb_from(name: String, f: LaurentPoly, g: LaurentPoly) -> Result<StabilizerCodeSpec> {
    let z = LaurentPoly::zero(2);
    let s1 = pv(2, vec![f.clone(), g.clone(), z.clone(), z.clone()]);
    let s2 = pv(2, vec![z.clone(), z, g.antipode(), f.antipode()]);
    StabilizerCodeSpec::new(&name, 2, 2, vec![s1, s2], vec![])
}

/// Bivariate bicycle code with `f' = x + x² + y^b`, `g' = y + y² + x^a`.
pub fn bb(a: i64, b: i64) -> Result<StabilizerCodeSpec> {
    let (f, g) = bb_polys(a, b);
    bb_from(format!("bb({a},{b})"), f, g)
}

/// Same family with `f = y²f'`, `g = x²g'`.
pub fn bb_shifted(a: i64, b: i64) -> Result<StabilizerCodeSpec> {
    let (f, g) = bb_polys(a, b);
    bb_from(format!("bb_shifted({a},{b})"), f.shift(0, 2), g.shift(2, 0))
}

/// Single-qudit paramagnet `H = −Σ X`.
pub fn trivial_code(d: u64) -> Result<StabilizerCodeSpec> {
    let s = pv(d, vec![LaurentPoly::one(d), LaurentPoly::zero(d)]);
    StabilizerCodeSpec::new("trivial", d, 1, vec![s], vec![])
}

fn parse_pair(name: &str, prefix: &str) -> Option<(i64, i64)> {
    let inner = name.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')?;
    let (a, b) = inner.split_once(',')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

pub const BUILTIN_NAMES: &[&str] =
    &["z2_toric", "fish_toric", "z4_toric", "double_semion", "six_semion", "color_code", "three_fermion", "bb(a,b)", "bb_shifted(a,b)"];

pub fn builtin(name: &str) -> Result<StabilizerCodeSpec> {
    let spec = match name {
        "z2_toric" => toric("z2_toric", 2),
        "z4_toric" => toric("z4_toric", 4),
        "fish_toric" => fish_toric(),
        "double_semion" => double_semion(),
        "six_semion" => six_semion(),
        "color_code" => color_code(),
        "three_fermion" => three_fermion(),
        "trivial" => trivial_code(2),
        _ => {
            if let Some((a, b)) = parse_pair(name, "bb_shifted") {
                bb_shifted(a, b)
            } else if let Some((a, b)) = parse_pair(name, "bb") {
                bb(a, b)
            } else {
                return Err(Error::UnknownCode(name.to_string()));
            }
        }
    }?;
    debug_assert!(validate(&spec).is_empty(), "builtin {name} fails validation");
    Ok(spec)
}

/// One violated commutation: generator indices and a monomial of the offending
/// dot-product polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub first: String,
    pub second: String,
    pub monomial: [i64; 2],
    pub coeff: u64,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} and {} fail to commute at x^{} y^{} (phase exponent {})", self.first, self.second, self.monomial[0], self.monomial[1], self.coeff)
    }
}

pub fn validate(spec: &StabilizerCodeSpec) -> Vec<Violation> {
    let named: Vec<(String, &PauliVector)> = spec
        .stabilizers
        .iter()
        .enumerate()
        .map(|(i, p)| (format!("S{}", i + 1), p))
        .chain(spec.gauge_constraints.iter().enumerate().map(|(i, p)| (format!("G{}", i + 1), p)))
        .collect();
    let mut out = Vec::new();
    for (i, (ni, pi)) in named.iter().enumerate() {
        for (nj, pj) in &named[i..] {
            match dot(pi, pj) {
                Ok(poly) => {
                    if let Some((m, c)) = poly.iter().next() {
                        out.push(Violation { first: ni.clone(), second: nj.clone(), monomial: [m.a, m.b], coeff: c });
                    }
                }
                Err(e) => out.push(Violation { first: ni.clone(), second: format!("{nj}: {e}"), monomial: [0, 0], coeff: 0 }),
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub slot: usize,
    pub monomial: [i64; 2],
    pub coeff: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub d: u64,
    pub w: usize,
    pub stabilizers: Vec<Vec<Term>>,
    #[serde(default)]
    pub gauge_constraints: Vec<Vec<Term>>,
}

pub fn pauli_to_terms(p: &PauliVector) -> Vec<Term> {
    let mut t: Vec<Term> = p.entries().map(|(slot, a, b, coeff)| Term { slot, monomial: [a, b], coeff }).collect();
    t.sort_by_key(|t| (t.slot, t.monomial));
    t
}

fn terms_to_pauli(d: u64, w: usize, terms: &[Term], what: &str) -> Result<PauliVector> {
    let mut p = PauliVector::zero(d, w);
    for t in terms {
        if t.slot >= 2 * w {
            return Err(Error::ValidationError(format!("{what}: slot {} is outside [0, {})", t.slot, 2 * w)));
        }
        if t.coeff == 0 || t.coeff >= d {
            return Err(Error::ValidationError(format!("{what}: coefficient {} is outside [1, {d})", t.coeff)));
        }
        p.slot_mut(t.slot).add_term(t.monomial[0], t.monomial[1], t.coeff as i64);
    }
    Ok(p)
}

pub fn to_code_file(spec: &StabilizerCodeSpec) -> CodeFile {
    CodeFile {
        name: Some(spec.name.clone()),
        d: spec.dim(),
        w: spec.w,
        stabilizers: spec.stabilizers.iter().map(pauli_to_terms).collect(),
        gauge_constraints: spec.gauge_constraints.iter().map(pauli_to_terms).collect(),
    }
}

pub fn to_json(spec: &StabilizerCodeSpec) -> String {
    serde_json::to_string_pretty(&to_code_file(spec)).expect("code files always serialize")
}

/// Parses and validates a JSON code file.
pub fn parse_code_file(text: &[u8]) -> Result<StabilizerCodeSpec> {
    let file: CodeFile = serde_json::from_slice(text)
        .map_err(|e| Error::ParseError(format!("line {} column {}: {e}", e.line(), e.column())))?;
    if file.w == 0 {
        return Err(Error::ValidationError("w must be at least 1".into()));
    }
    let d = file.d;
    Modulus::new(d)?;
    let stabilizers = file
        .stabilizers
        .iter()
        .enumerate()
        .map(|(i, t)| terms_to_pauli(d, file.w, t, &format!("S{}", i + 1)))
        .collect::<Result<Vec<_>>>()?;
    let gauge_constraints = file
        .gauge_constraints
        .iter()
        .enumerate()
        .map(|(i, t)| terms_to_pauli(d, file.w, t, &format!("G{}", i + 1)))
        .collect::<Result<Vec<_>>>()?;
    let name = file.name.unwrap_or_else(|| "custom".into());
    let spec = StabilizerCodeSpec::new(&name, d, file.w, stabilizers, gauge_constraints)?;
    let v = validate(&spec);
    if let Some(first) = v.first() {
        return Err(Error::ValidationError(first.to_string()));
    }
    Ok(spec)
}

/// Which half-plane survives a truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BoundaryStyle {
    Named(String),
    Mask(Vec<bool>),
}

/// Geometry file contents.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationGeometry {
    pub side: Side,
    /// `[x0, x1, y0, y1]` in unit cells.
    pub pauli_window: [i64; 4],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stabilizer_window: Option<[i64; 4]>,
    pub boundary_style: BoundaryStyle,
}

impl TruncationGeometry {
    /// Default geometry for a code: window of about twice the stabilizer
    /// extent next to the cut, grown later by the solver if needed.
    pub fn default_for(spec: &StabilizerCodeSpec, side: Side) -> Self {
        let (ex, ey) = spec.extent();
        let x = 2 * ex.max(1) + 1;
        let y = 2 * ey.max(1) + 1;
        let pauli_window = match side {
            Side::Left => [-x, 0, -y, y],
            Side::Right => [0, x, -y, y],
        };
        TruncationGeometry { side, pauli_window, stabilizer_window: None, boundary_style: BoundaryStyle::Named("smooth".into()) }
    }

    pub fn mask(&self, spec: &StabilizerCodeSpec) -> Result<Vec<bool>> {
        match &self.boundary_style {
            BoundaryStyle::Named(s) if s == "smooth" => Ok(spec.smooth_mask.clone()),
            BoundaryStyle::Named(s) if s == "rough" => Ok(spec.rough_mask.clone()),
            BoundaryStyle::Named(s) => Err(Error::ParseError(format!("unknown boundary style `{s}`"))),
            BoundaryStyle::Mask(m) if m.len() == spec.w => Ok(m.clone()),
            BoundaryStyle::Mask(m) => Err(Error::DimensionMismatch(format!("mask of length {} for w = {}", m.len(), spec.w))),
        }
    }

    pub fn parse(text: &[u8]) -> Result<Self> {
        let g: TruncationGeometry = serde_json::from_slice(text)
            .map_err(|e| Error::ParseError(format!("line {} column {}: {e}", e.line(), e.column())))?;
        let [x0, x1, y0, y1] = g.pauli_window;
        if x0 > x1 || y0 > y1 {
            return Err(Error::ValidationError("pauli_window is empty".into()));
        }
        Ok(g)
    }
}
