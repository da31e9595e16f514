//! Dense column layouts for Pauli operators inside a rectangle of unit cells.

use crate::poly::PauliVector;

/// Rectangle `[x0, x1] × [y0, y1]` with `2w` columns per cell, `y` outermost.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Frame {
    pub w: usize,
    pub x0: i64,
    pub x1: i64,
    pub y0: i64,
    pub y1: i64,
}

impl Frame {
    pub fn new(w: usize, x0: i64, x1: i64, y0: i64, y1: i64) -> Self {
        assert!(x0 <= x1 && y0 <= y1, "empty frame");
        Frame { w, x0, x1, y0, y1 }
    }

    pub fn nx(&self) -> usize {
        (self.x1 - self.x0 + 1) as usize
    }

    pub fn ny(&self) -> usize {
        (self.y1 - self.y0 + 1) as usize
    }

    pub fn width(&self) -> usize {
        self.nx() * self.ny() * 2 * self.w
    }

    pub fn contains(&self, a: i64, b: i64) -> bool {
        a >= self.x0 && a <= self.x1 && b >= self.y0 && b <= self.y1
    }

    pub fn contains_bounds(&self, bounds: Option<(i64, i64, i64, i64)>) -> bool {
        match bounds {
            None => true,
            Some((a0, a1, b0, b1)) => a0 >= self.x0 && a1 <= self.x1 && b0 >= self.y0 && b1 <= self.y1,
        }
    }

    #[inline]
    pub fn col(&self, slot: usize, a: i64, b: i64) -> usize {
        debug_assert!(self.contains(a, b));
        (((b - self.y0) as usize * self.nx()) + (a - self.x0) as usize) * 2 * self.w + slot
    }

    pub fn locate(&self, col: usize) -> (usize, i64, i64) {
        let slot = col % (2 * self.w);
        let cell = col / (2 * self.w);
        let a = self.x0 + (cell % self.nx()) as i64;
        let b = self.y0 + (cell / self.nx()) as i64;
        (slot, a, b)
    }

    /// Dense coefficients of `p`, or `None` if `p` leaves the frame.
    pub fn encode(&self, p: &PauliVector) -> Option<Vec<u64>> {
        let mut v = vec![0u64; self.width()];
        for (s, a, b, c) in p.entries() {
            if !self.contains(a, b) {
                return None;
            }
            v[self.col(s, a, b)] = c;
        }
        Some(v)
    }

    pub fn decode(&self, d: u64, v: &[u64]) -> PauliVector {
        let mut p = PauliVector::zero(d, self.w);
        for (i, &c) in v.iter().enumerate() {
            if c != 0 {
                let (s, a, b) = self.locate(i);
                p.slot_mut(s).add_term(a, b, c as i64);
            }
        }
        p
    }

    /// Shifts `(sa, sb)` for which `bounds` moved by the shift meets the frame.
    pub fn overlapping_shifts(&self, bounds: (i64, i64, i64, i64)) -> impl Iterator<Item = (i64, i64)> {
        let (a0, a1, b0, b1) = bounds;
        let (x0, x1, y0, y1) = (self.x0, self.x1, self.y0, self.y1);
        (y0 - b1..=y1 - b0).flat_map(move |sb| (x0 - a1..=x1 - a0).map(move |sa| (sa, sb)))
    }

    /// Shifts for which `bounds` moved by the shift lies inside the frame.
    pub fn inner_shifts(&self, bounds: (i64, i64, i64, i64)) -> impl Iterator<Item = (i64, i64)> {
        let (a0, a1, b0, b1) = bounds;
        let (x0, x1, y0, y1) = (self.x0, self.x1, self.y0, self.y1);
        (y0 - b0..=y1 - b1).flat_map(move |sb| (x0 - a0..=x1 - a1).map(move |sa| (sa, sb)))
    }
}
