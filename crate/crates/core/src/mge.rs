//! Modified Gaussian elimination over `Z_d` with relation tracking, and
//! span-membership queries against the resulting echelon form.
//!
//! Column schedule: the synthetic row `[d, 0, …]` starts as the holder and the
//! rows with a nonzero entry are visited bottom-up. A row whose entry is a
//! multiple of the holder's entry is deferred; any other row runs a Euclid loop
//! against the holder (the larger entry is reduced, ties reduce the larger
//! index, the synthetic row counting as the last). The final holder is the
//! pivot and carries `gcd(column ∪ {d})`. Deferred rows are then cleared by the
//! pivot, which is the step that runs in parallel.

use crate::arith::{associate_normalize, reduce_target};
use crate::par;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Row storage and arithmetic for one choice of `d`.
pub(crate) trait Backend: Send + Sync {
    type Row: Clone + Send + Sync;
    fn d(&self) -> u64;
    fn zero_row(&self, width: usize) -> Self::Row;
    fn get(&self, r: &Self::Row, i: usize) -> u64;
    fn set(&self, r: &mut Self::Row, i: usize, v: u64);
    /// `r += q·o` on columns `>= from`; `o` must vanish on `[from & !63, from)`.
    fn axpy(&self, r: &mut Self::Row, q: u64, o: &Self::Row, from: usize);
    fn scale(&self, r: &mut Self::Row, u: u64);
    fn first_nonzero(&self, r: &Self::Row, from: usize, to: usize) -> Option<usize>;

    fn from_slice(&self, v: &[u64], width: usize) -> Self::Row {
        let mut r = self.zero_row(width);
        for (i, &x) in v.iter().enumerate() {
            if x % self.d() != 0 {
                self.set(&mut r, i, x % self.d());
            }
        }
        r
    }

    fn to_vec(&self, r: &Self::Row, from: usize, to: usize) -> Vec<u64> {
        (from..to).map(|i| self.get(r, i)).collect()
    }

    fn is_zero(&self, r: &Self::Row, from: usize, to: usize) -> bool {
        self.first_nonzero(r, from, to).is_none()
    }
}

/// Dense `u32` rows for general `d < 2^31`.
#[derive(Clone)]
pub(crate) struct Dense {
    d: u64,
    mask: Option<u32>,
}

impl Dense {
    pub(crate) fn new(d: u64) -> Self {
        assert!(d >= 2 && d < (1 << 31), "matrix engine supports 2 <= d < 2^31");
        let mask = if d.is_power_of_two() { Some((d - 1) as u32) } else { None };
        Dense { d, mask }
    }
}

impl Backend for Dense {
    type Row = Vec<u32>;

    fn d(&self) -> u64 {
        self.d
    }

    fn zero_row(&self, width: usize) -> Vec<u32> {
        vec![0; width]
    }

    #[inline]
    fn get(&self, r: &Vec<u32>, i: usize) -> u64 {
        r[i] as u64
    }

    #[inline]
    fn set(&self, r: &mut Vec<u32>, i: usize, v: u64) {
        r[i] = (v % self.d) as u32;
    }

    fn axpy(&self, r: &mut Vec<u32>, q: u64, o: &Vec<u32>, from: usize) {
        let q = q % self.d;
        if q == 0 {
            return;
        }
        match self.mask {
            Some(mask) => {
                let q = q as u32;
                for (x, &y) in r[from..].iter_mut().zip(&o[from..]) {
                    *x = x.wrapping_add(q.wrapping_mul(y)) & mask;
                }
            }
            None => {
                let d = self.d;
                for (x, &y) in r[from..].iter_mut().zip(&o[from..]) {
                    if y != 0 {
                        *x = ((*x as u64 + q * y as u64) % d) as u32;
                    }
                }
            }
        }
    }

    fn scale(&self, r: &mut Vec<u32>, u: u64) {
        let d = self.d;
        for x in r.iter_mut() {
            *x = ((*x as u64 * u) % d) as u32;
        }
    }

    fn first_nonzero(&self, r: &Vec<u32>, from: usize, to: usize) -> Option<usize> {
        r[from..to].iter().position(|&x| x != 0).map(|p| p + from)
    }
}

/// Bit-packed rows for `d = 2`.
#[derive(Clone)]
pub(crate) struct Bits;

impl Backend for Bits {
    type Row = Vec<u64>;

    fn d(&self) -> u64 {
        2
    }

    fn zero_row(&self, width: usize) -> Vec<u64> {
        vec![0; width.div_ceil(64)]
    }

    #[inline]
    fn get(&self, r: &Vec<u64>, i: usize) -> u64 {
        (r[i >> 6] >> (i & 63)) & 1
    }

    #[inline]
    fn set(&self, r: &mut Vec<u64>, i: usize, v: u64) {
        let bit = 1u64 << (i & 63);
        if v & 1 == 1 {
            r[i >> 6] |= bit;
        } else {
            r[i >> 6] &= !bit;
        }
    }

    fn axpy(&self, r: &mut Vec<u64>, q: u64, o: &Vec<u64>, from: usize) {
        if q & 1 == 0 {
            return;
        }
        let w = from >> 6;
        for (x, &y) in r[w..].iter_mut().zip(&o[w..]) {
            *x ^= y;
        }
    }

    fn scale(&self, r: &mut Vec<u64>, u: u64) {
        if u & 1 == 0 {
            r.iter_mut().for_each(|x| *x = 0);
        }
    }

    fn first_nonzero(&self, r: &Vec<u64>, from: usize, to: usize) -> Option<usize> {
        if from >= to {
            return None;
        }
        let mut wi = from >> 6;
        let mut word = r[wi] & (!0u64 << (from & 63));
        loop {
            if word != 0 {
                let i = (wi << 6) + word.trailing_zeros() as usize;
                return (i < to).then_some(i);
            }
            wi += 1;
            if wi << 6 >= to || wi >= r.len() {
                return None;
            }
            word = r[wi];
        }
    }
}

/// A dense matrix over `Z_d` with entries in `[0, d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matrix {
    pub d: u64,
    pub cols: usize,
    pub rows: Vec<Vec<u64>>,
}

impl Matrix {
    pub fn new(d: u64, cols: usize) -> Self {
        Matrix { d, cols, rows: Vec::new() }
    }

    pub fn from_rows(d: u64, cols: usize, rows: Vec<Vec<u64>>) -> Self {
        let rows = rows
            .into_iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "row width differs from column count");
                r.into_iter().map(|x| x % d).collect()
            })
            .collect();
        Matrix { d, cols, rows }
    }

    pub fn push(&mut self, row: Vec<u64>) {
        assert_eq!(row.len(), self.cols);
        self.rows.push(row);
    }

    pub fn identity(d: u64, n: usize) -> Self {
        let rows = (0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect();
        Matrix { d, cols: n, rows }
    }

    /// `coeffs · self`, reduced mod `d`.
    pub fn left_mul(&self, coeffs: &[u64]) -> Vec<u64> {
        let d = self.d as u128;
        let mut out = vec![0u128; self.cols];
        for (c, row) in coeffs.iter().zip(&self.rows) {
            if *c == 0 {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(row) {
                *o = (*o + *c as u128 * x as u128) % d;
            }
        }
        out.into_iter().map(|x| x as u64).collect()
    }
}

/// Output of [`mge`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MgeResult {
    pub d: u64,
    pub cols: usize,
    /// Pivot rows in staircase order.
    pub echelon: Vec<Vec<u64>>,
    /// `(column, pivot value)` per echelon row; the value divides `d`.
    pub pivots: Vec<(usize, u64)>,
    /// `transform[k] · input = echelon[k]` when every row is tracked.
    pub transform: Vec<Vec<u64>>,
    /// Canonical generating set of the left kernel over the tracked rows.
    pub relations: Vec<Vec<u64>>,
}

fn pair_mut<T>(v: &mut [T], i: usize, j: usize) -> (&mut T, &mut T) {
    assert_ne!(i, j);
    if i < j {
        let (a, b) = v.split_at_mut(j);
        (&mut a[i], &mut b[0])
    } else {
        let (a, b) = v.split_at_mut(i);
        (&mut b[0], &mut a[j])
    }
}

/// Euclid loop between a holder and a challenger on column `c`. Returns whether
/// the holder still carries the nonzero entry afterwards.
fn euclid_pair<B: Backend>(b: &B, hold: &mut B::Row, hi: usize, other: &mut B::Row, oi: usize, c: usize) -> bool {
    let d = b.d();
    loop {
        let vh = b.get(hold, c);
        let vo = b.get(other, c);
        if vo == 0 {
            return true;
        }
        if vh == 0 {
            return false;
        }
        if reduce_target(vh, hi, vo, oi) {
            b.axpy(hold, d - (vh / vo) % d, other, c);
        } else {
            b.axpy(other, d - (vo / vh) % d, hold, c);
        }
    }
}

struct Elim<R> {
    echelon: Vec<R>,
    pivots: Vec<(usize, u64)>,
    zero_rows: Vec<R>,
}

fn eliminate<B: Backend>(b: &B, mut active: Vec<B::Row>, n: usize, width: usize) -> Elim<B::Row> {
    let d = b.d();
    let binary = d == 2;
    let mut echelon = Vec::new();
    let mut pivots = Vec::new();
    let mut zero_rows = Vec::new();
    for c in 0..n {
        let nz: Vec<usize> = (0..active.len()).filter(|&i| b.get(&active[i], c) != 0).collect();
        if nz.is_empty() {
            continue;
        }
        let mut touched = vec![false; active.len()];
        let mut deferred = vec![false; active.len()];
        let pivot: B::Row;
        let mut synth: Option<B::Row> = None;
        if binary {
            let h = *nz.last().unwrap();
            for &i in &nz[..nz.len() - 1] {
                deferred[i] = true;
            }
            pivot = active[h].clone();
            let g = 1;
            clear_deferred(b, &mut active, &deferred, &pivot, c, g);
            touched = deferred;
            active.remove(h);
            touched.remove(h);
            pivots.push((c, 1));
        } else {
            let mut holder: Option<usize> = None;
            for &i in nz.iter().rev() {
                let vi = b.get(&active[i], c);
                let vh = match (holder, &synth) {
                    (Some(h), _) => b.get(&active[h], c),
                    (None, Some(s)) => b.get(s, c),
                    (None, None) => d,
                };
                if vi % vh == 0 {
                    deferred[i] = true;
                    continue;
                }
                touched[i] = true;
                match holder {
                    None => {
                        let s = synth.get_or_insert_with(|| {
                            let mut s = b.zero_row(width);
                            b.axpy(&mut s, d - (d / vi) % d, &active[i], c);
                            s
                        });
                        if !euclid_pair(b, s, usize::MAX, &mut active[i], i, c) {
                            holder = Some(i);
                        }
                    }
                    Some(h) => {
                        let (hr, ir) = pair_mut(&mut active, h, i);
                        if !euclid_pair(b, hr, h, ir, i, c) {
                            holder = Some(i);
                        }
                    }
                }
            }
            let g;
            match holder {
                Some(h) => {
                    pivot = active[h].clone();
                    g = b.get(&pivot, c);
                    clear_deferred(b, &mut active, &deferred, &pivot, c, g);
                    active.remove(h);
                    touched.remove(h);
                    deferred.remove(h);
                }
                None => {
                    pivot = synth.take().expect("a nonzero column always materializes the synthetic row");
                    g = b.get(&pivot, c);
                    clear_deferred(b, &mut active, &deferred, &pivot, c, g);
                }
            }
            debug_assert_eq!(d % g, 0);
            for (t, df) in touched.iter_mut().zip(&deferred) {
                *t |= *df;
            }
            pivots.push((c, g));
        }
        echelon.push(pivot);
        // Rows whose data vanished are finished; keep their tracking only.
        let mut keep = Vec::with_capacity(active.len());
        for (row, t) in active.into_iter().zip(touched) {
            if t && b.is_zero(&row, c + 1, n) {
                if !b.is_zero(&row, n, width) {
                    zero_rows.push(row);
                }
            } else {
                keep.push(row);
            }
        }
        active = keep;
        if let Some(s) = synth {
            if b.is_zero(&s, c + 1, n) {
                if !b.is_zero(&s, n, width) {
                    zero_rows.push(s);
                }
            } else {
                active.push(s);
            }
        }
    }
    for row in active {
        if !b.is_zero(&row, n, width) {
            zero_rows.push(row);
        }
    }
    Elim { echelon, pivots, zero_rows }
}

fn clear_deferred<B: Backend>(b: &B, active: &mut [B::Row], deferred: &[bool], pivot: &B::Row, c: usize, g: u64) {
    let d = b.d();
    par::for_each_mut(active, |i, r| {
        if deferred[i] {
            let q = b.get(r, c) / g;
            b.axpy(r, d - q % d, pivot, c);
        }
    });
}

fn run_mge<B: Backend>(b: &B, m: &Matrix, track: usize) -> MgeResult {
    let n = m.cols;
    let width = n + track;
    let rows: Vec<B::Row> = m
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = b.from_slice(r, width);
            if i < track {
                b.set(&mut row, n + i, 1);
            }
            row
        })
        .collect();
    let el = eliminate(b, rows, n, width);
    let echelon = el.echelon.iter().map(|r| b.to_vec(r, 0, n)).collect();
    let transform = el.echelon.iter().map(|r| b.to_vec(r, n, width)).collect();
    let mut span = SpanBasis::new(b.d(), track);
    for r in &el.zero_rows {
        span.insert(&b.to_vec(r, n, width));
    }
    MgeResult { d: b.d(), cols: n, echelon, pivots: el.pivots, transform, relations: span.canonical_rows() }
}

/// Elimination with every row tracked.
pub fn mge(m: &Matrix) -> MgeResult {
    mge_tracking(m, m.rows.len())
}

/// Elimination tracking only the first `track` rows. Relations are then the
/// projection of the left kernel onto those rows.
pub fn mge_tracking(m: &Matrix, track: usize) -> MgeResult {
    assert!(track <= m.rows.len());
    if m.d == 2 {
        run_mge(&Bits, m, track)
    } else {
        run_mge(&Dense::new(m.d), m, track)
    }
}

/// Coefficients over `basis.echelon` reproducing `v`, if `v` lies in the span.
pub fn in_span(v: &[u64], basis: &MgeResult) -> Option<Vec<u64>> {
    assert_eq!(v.len(), basis.cols, "width mismatch");
    let d = basis.d as u128;
    let mut r: Vec<u64> = v.iter().map(|&x| x % basis.d).collect();
    let mut coeffs = vec![0u64; basis.echelon.len()];
    for (k, (&(c, g), row)) in basis.pivots.iter().zip(&basis.echelon).enumerate() {
        let vc = r[c];
        if vc == 0 {
            continue;
        }
        if vc % g != 0 {
            return None;
        }
        let q = vc / g;
        coeffs[k] = q;
        let nq = (basis.d - q) as u128;
        for (x, &y) in r[c..].iter_mut().zip(&row[c..]) {
            *x = ((*x as u128 + nq * y as u128) % d) as u64;
        }
    }
    r.iter().all(|&x| x == 0).then_some(coeffs)
}

#[derive(Clone)]
enum SpanRows {
    Dense(Dense, BTreeMap<usize, Vec<u32>>),
    Bits(BTreeMap<usize, Vec<u64>>),
}

/// Incrementally maintained Howell basis of a row span. Every pivot row `p`
/// with pivot `g` has `(d/g)·p` in the span of the rows after it, which makes
/// greedy reduction a complete membership test.
#[derive(Clone)]
pub struct SpanBasis {
    d: u64,
    width: usize,
    rows: SpanRows,
}

fn howell_insert<B: Backend>(b: &B, rows: &mut BTreeMap<usize, B::Row>, width: usize, v: B::Row) -> bool {
    let d = b.d();
    let modulus = crate::arith::Modulus::new(d).unwrap();
    let mut grew = false;
    let mut queue = vec![v];
    while let Some(mut v) = queue.pop() {
        let mut from = 0;
        while let Some(c) = b.first_nonzero(&v, from, width) {
            from = c;
            let vc = b.get(&v, c);
            match rows.get_mut(&c) {
                None => {
                    let (g, u) = associate_normalize(vc, &modulus);
                    b.scale(&mut v, u);
                    if g != 1 {
                        let mut ann = v.clone();
                        b.scale(&mut ann, d / g);
                        queue.push(ann);
                    }
                    rows.insert(c, v);
                    grew = true;
                    break;
                }
                Some(p) => {
                    let g = b.get(p, c);
                    if vc % g == 0 {
                        b.axpy(&mut v, d - (vc / g) % d, p, c);
                        continue;
                    }
                    let mut h = p.clone();
                    if !euclid_pair(b, &mut h, 0, &mut v, 1, c) {
                        std::mem::swap(&mut h, &mut v);
                    }
                    let (g2, u) = associate_normalize(b.get(&h, c), &modulus);
                    b.scale(&mut h, u);
                    if g2 != 1 {
                        let mut ann = h.clone();
                        b.scale(&mut ann, d / g2);
                        queue.push(ann);
                    }
                    *p = h;
                    grew = true;
                }
            }
        }
    }
    grew
}

fn howell_reduce<B: Backend>(b: &B, rows: &BTreeMap<usize, B::Row>, width: usize, mut v: B::Row) -> B::Row {
    let d = b.d();
    let mut from = 0;
    while let Some(c) = b.first_nonzero(&v, from, width) {
        from = c + 1;
        if let Some(p) = rows.get(&c) {
            let g = b.get(p, c);
            let q = b.get(&v, c) / g;
            b.axpy(&mut v, d - q % d, p, c);
        }
    }
    v
}

impl SpanBasis {
    pub fn new(d: u64, width: usize) -> Self {
        let rows = if d == 2 { SpanRows::Bits(BTreeMap::new()) } else { SpanRows::Dense(Dense::new(d), BTreeMap::new()) };
        SpanBasis { d, width, rows }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    /// Number of pivot rows.
    pub fn len(&self) -> usize {
        match &self.rows {
            SpanRows::Dense(_, r) => r.len(),
            SpanRows::Bits(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Adds `v` to the span; returns whether the span grew.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        assert_eq!(v.len(), self.width, "width mismatch");
        let w = self.width;
        match &mut self.rows {
            SpanRows::Dense(b, r) => {
                let row = b.from_slice(v, w);
                howell_insert(b, r, w, row)
            }
            SpanRows::Bits(r) => {
                let row = Bits.from_slice(v, w);
                howell_insert(&Bits, r, w, row)
            }
        }
    }

    /// Inserts sparse `(index, value)` entries.
    pub fn insert_sparse(&mut self, v: &[(usize, u64)]) -> bool {
        let mut dense = vec![0u64; self.width];
        for &(i, x) in v {
            dense[i] = (dense[i] + x) % self.d;
        }
        self.insert(&dense)
    }

    /// Residual of `v` after greedy reduction; zero iff `v` is in the span.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.width, "width mismatch");
        let w = self.width;
        match &self.rows {
            SpanRows::Dense(b, r) => {
                let row = howell_reduce(b, r, w, b.from_slice(v, w));
                b.to_vec(&row, 0, w)
            }
            SpanRows::Bits(r) => {
                let row = howell_reduce(&Bits, r, w, Bits.from_slice(v, w));
                Bits.to_vec(&row, 0, w)
            }
        }
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let w = self.width;
        match &self.rows {
            SpanRows::Dense(b, r) => {
                let row = howell_reduce(b, r, w, b.from_slice(v, w));
                b.is_zero(&row, 0, w)
            }
            SpanRows::Bits(r) => {
                let row = howell_reduce(&Bits, r, w, Bits.from_slice(v, w));
                Bits.is_zero(&row, 0, w)
            }
        }
    }

    pub fn contains_sparse(&self, v: &[(usize, u64)]) -> bool {
        let mut dense = vec![0u64; self.width];
        for &(i, x) in v {
            dense[i] = (dense[i] + x) % self.d;
        }
        self.contains(&dense)
    }

    /// Reduced Howell form: pivots ascending, entries above each pivot in `[0, g)`.
    pub fn canonical_rows(&self) -> Vec<Vec<u64>> {
        fn go<B: Backend>(b: &B, rows: &BTreeMap<usize, B::Row>, w: usize) -> Vec<Vec<u64>> {
            let d = b.d();
            let mut out: Vec<(usize, B::Row)> = rows.iter().map(|(&c, r)| (c, r.clone())).collect();
            for k in 0..out.len() {
                let (c, pk) = (out[k].0, out[k].1.clone());
                let g = b.get(&pk, c);
                for row in out[..k].iter_mut() {
                    let q = b.get(&row.1, c) / g;
                    if q != 0 {
                        b.axpy(&mut row.1, d - q % d, &pk, c);
                    }
                }
            }
            out.into_iter().map(|(_, r)| b.to_vec(&r, 0, w)).collect()
        }
        match &self.rows {
            SpanRows::Dense(b, r) => go(b, r, self.width),
            SpanRows::Bits(r) => go(&Bits, r, self.width),
        }
    }
}
