//! Modular arithmetic over `Z_d` and formal Laurent series over `Z_d`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// The qudit dimension `d` with its prime-power factorization cached.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Modulus {
    d: u64,
    factors: Vec<(u64, u32)>,
}

impl TryFrom<u64> for Modulus {
    type Error = Error;
    fn try_from(d: u64) -> Result<Self> {
        Modulus::new(d)
    }
}

impl From<Modulus> for u64 {
    fn from(m: Modulus) -> u64 {
        m.d
    }
}

impl Modulus {
    pub fn new(d: u64) -> Result<Self> {
        if d < 2 {
            return Err(Error::ValidationError(format!("qudit dimension {d} is below 2")));
        }
        Ok(Modulus { d, factors: factorize(d) })
    }

    #[inline]
    pub fn d(&self) -> u64 {
        self.d
    }

    /// Prime powers `(p, k)` with primes ascending.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    #[inline]
    pub fn reduce(&self, v: i128) -> u64 {
        v.rem_euclid(self.d as i128) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.d as u128) as u64
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.d - b % self.d)
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.d as u128) as u64
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        (self.d - a % self.d) % self.d
    }

    pub fn is_unit(&self, a: u64) -> bool {
        gcd(a % self.d, self.d) == 1
    }
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut k = 0;
            while n % p == 0 {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// Extended gcd over the integers: returns `(g, s, t)` with `s·a + t·b = g ≥ 0`.
pub fn xgcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// One step of the pairwise subtraction schedule shared with the elimination
/// engine. Given the current holder `h` and a challenger `i`, decides which
/// entry is reduced: the larger one, and on a tie the one with the larger index.
#[inline]
pub(crate) fn reduce_target(vh: u64, h: usize, vi: u64, i: usize) -> bool {
    vh > vi || (vh == vi && h > i)
}

/// Gcd of `values ∪ {d}` with an integer certificate.
///
/// The synthetic entry `d` starts as the holder. Values are folded in from the
/// last index to the first; each fold is a Euclid loop that subtracts the
/// smaller entry from the larger until one vanishes.
pub fn ext_gcd_chain(values: &[u64], modulus: &Modulus) -> (u64, Vec<i64>) {
    let d = modulus.d();
    let m = values.len();
    let mut vals: Vec<u64> = values.iter().map(|v| v % d).collect();
    vals.push(d);
    let mut coef: Vec<Vec<i128>> = (0..=m)
        .map(|i| {
            let mut c = vec![0i128; m + 1];
            c[i] = 1;
            c
        })
        .collect();
    let mut holder = m;
    for i in (0..m).rev() {
        while vals[i] != 0 && vals[holder] != 0 {
            let (big, small) = if reduce_target(vals[holder], holder, vals[i], i) {
                (holder, i)
            } else {
                (i, holder)
            };
            let q = vals[big] / vals[small];
            vals[big] -= q * vals[small];
            let cs = coef[small].clone();
            for (c, s) in coef[big].iter_mut().zip(cs) {
                *c -= q as i128 * s;
            }
        }
        if vals[holder] == 0 {
            holder = i;
        }
    }
    let g = vals[holder] % d;
    if g == 0 {
        return (0, vec![0; m]);
    }
    (g, coef[holder][..m].iter().map(|&c| c as i64).collect())
}

/// Multiplicative inverse of `a` modulo `d`.
pub fn zd_inverse(a: u64, modulus: &Modulus) -> Result<u64> {
    let d = modulus.d();
    let (g, s, _) = xgcd((a % d) as i128, d as i128);
    if g != 1 {
        return Err(Error::NotAUnit { value: a, modulus: d });
    }
    Ok(modulus.reduce(s))
}

/// Smallest positive representative of the associate class of `a`, with a unit
/// `u` such that `u·a ≡ rep (mod d)`. The representative is `gcd(a, d)`.
pub fn associate_normalize(a: u64, modulus: &Modulus) -> (u64, u64) {
    let d = modulus.d();
    let a = a % d;
    if a == 0 {
        return (0, 1);
    }
    let g = gcd(a, d);
    // a = g·a', with a' a unit modulo d/g; lift its inverse to a unit modulo d.
    let dg = d / g;
    let ap = (a / g) % dg;
    let inv = if dg == 1 { 1 } else { zd_inverse(ap, &Modulus::new(dg).unwrap()).unwrap() };
    let mut u = inv;
    while gcd(u, d) != 1 {
        u += dg;
    }
    (g, u % d)
}

/// A truncated formal Laurent series `Σ a_i x^i` starting at `lowest_degree`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormalSeries {
    pub lowest_degree: i64,
    pub coefficients: Vec<u64>,
}

impl FormalSeries {
    pub fn new(lowest_degree: i64, coefficients: Vec<u64>, modulus: &Modulus) -> Self {
        let coefficients = coefficients.into_iter().map(|c| c % modulus.d()).collect();
        FormalSeries { lowest_degree, coefficients }
    }

    pub fn highest_degree(&self) -> i64 {
        self.lowest_degree + self.coefficients.len() as i64 - 1
    }

    pub fn coeff(&self, deg: i64) -> u64 {
        let i = deg - self.lowest_degree;
        if i < 0 {
            return 0;
        }
        self.coefficients.get(i as usize).copied().unwrap_or(0)
    }

    /// Full product of the stored parts.
    pub fn mul(&self, other: &FormalSeries, modulus: &Modulus) -> FormalSeries {
        if self.coefficients.is_empty() || other.coefficients.is_empty() {
            return FormalSeries { lowest_degree: 0, coefficients: vec![] };
        }
        let mut out = vec![0u64; self.coefficients.len() + other.coefficients.len() - 1];
        for (i, &a) in self.coefficients.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coefficients.iter().enumerate() {
                out[i + j] = modulus.add(out[i + j], modulus.mul(a, b));
            }
        }
        FormalSeries { lowest_degree: self.lowest_degree + other.lowest_degree, coefficients: out }
    }
}

pub fn series_is_unit(f: &FormalSeries, modulus: &Modulus) -> bool {
    let g = f.coefficients.iter().fold(modulus.d(), |g, &c| gcd(g, c % modulus.d()));
    g == 1
}

/// Dense integer series used during lifting: coefficient `i` has degree `low + i`.
#[derive(Clone)]
struct Dense {
    low: i64,
    c: Vec<i128>,
}

impl Dense {
    fn coeff(&self, deg: i64) -> i128 {
        let i = deg - self.low;
        if i < 0 || i as usize >= self.c.len() {
            0
        } else {
            self.c[i as usize]
        }
    }

    /// Product truncated to degrees `<= top`, reduced modulo `q`.
    fn mul_trunc(&self, o: &Dense, top: i64, q: i128) -> Dense {
        let low = self.low + o.low;
        let len = (top - low + 1).max(0) as usize;
        let mut c = vec![0i128; len];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                let k = i + j;
                if k >= len {
                    break;
                }
                c[k] = (c[k] + a * b).rem_euclid(q);
            }
        }
        Dense { low, c }
    }
}

/// Inverse of a unit series to relative precision `order`: the product with
/// `f` has constant term 1 and vanishes at every other degree `<= order`.
pub fn series_inverse(f: &FormalSeries, modulus: &Modulus, order: usize) -> Result<FormalSeries> {
    if !series_is_unit(f, modulus) {
        let g = f.coefficients.iter().fold(modulus.d(), |g, &c| gcd(g, c));
        return Err(Error::NotAUnit { value: g, modulus: modulus.d() });
    }
    let lf = f.lowest_degree;
    let top = order as i64 - lf;
    let mut parts: Vec<(u64, Dense)> = Vec::new();
    for &(p, k) in modulus.factors() {
        let q = p.pow(k);
        parts.push((q, inverse_prime_power(f, p, k, top)));
    }
    // CRT, primes ascending.
    let low = parts.iter().map(|(_, s)| s.low).min().unwrap();
    let len = (top - low + 1).max(1) as usize;
    let mut acc = vec![0i128; len];
    let mut acc_mod: i128 = 1;
    for (q, s) in &parts {
        let q = *q as i128;
        let (_, inv, _) = xgcd(acc_mod.rem_euclid(q), q);
        for (i, a) in acc.iter_mut().enumerate() {
            let r = s.coeff(low + i as i64);
            let t = ((r - *a).rem_euclid(q) * inv.rem_euclid(q)).rem_euclid(q);
            *a += acc_mod * t;
        }
        acc_mod *= q;
    }
    let coefficients = acc.into_iter().map(|c| modulus.reduce(c)).collect();
    Ok(FormalSeries { lowest_degree: low, coefficients })
}

fn inverse_prime_power(f: &FormalSeries, p: u64, k: u32, top: i64) -> Dense {
    let pi = p as i128;
    let lf = f.lowest_degree;
    let j = f
        .coefficients
        .iter()
        .position(|&c| c % p != 0)
        .expect("unit series has a coefficient prime to p") as i64;
    // Each lifting round costs j degrees of validity at the top.
    let work_top = top + (k as i64 - 1) * j;
    let fd = Dense { low: lf, c: f.coefficients.iter().map(|&c| c as i128).collect() };

    // Field inverse of u = x^{-(lf+j)}·f mod p by recursive coefficient solving.
    let u: Vec<i128> = f.coefficients[j as usize..].iter().map(|&c| (c % p) as i128).collect();
    let u0_inv = xgcd(u[0], pi).1.rem_euclid(pi);
    let h_low = -(lf + j);
    let h_len = (work_top - h_low + 1).max(1) as usize;
    let mut h = vec![0i128; h_len];
    h[0] = u0_inv;
    for n in 1..h_len {
        let mut s = 0i128;
        for i in 1..=n.min(u.len() - 1) {
            s += u[i] * h[n - i];
        }
        h[n] = (-u0_inv * s).rem_euclid(pi);
    }
    let h = Dense { low: h_low, c: h };
    let mut g = h.clone();
    let mut qs = pi;
    for _ in 1..k {
        qs *= pi;
        // g ← g − (f·g − 1)·h  (mod p^{s+1})
        let mut e = fd.mul_trunc(&g, work_top + lf + j, qs);
        let z = -e.low;
        if z >= 0 && (z as usize) < e.c.len() {
            e.c[z as usize] = (e.c[z as usize] - 1).rem_euclid(qs);
        } else {
            // Constant term lies outside the stored range; extend.
            let mut c = vec![0i128; e.c.len().max(z as usize + 1)];
            c[..e.c.len()].copy_from_slice(&e.c);
            c[z as usize] = (c[z as usize] - 1).rem_euclid(qs);
            e.c = c;
        }
        let corr = e.mul_trunc(&h, work_top, qs);
        let low = g.low.min(corr.low);
        let len = (work_top - low + 1).max(0) as usize;
        let c = (0..len)
            .map(|i| {
                let deg = low + i as i64;
                (g.coeff(deg) - corr.coeff(deg)).rem_euclid(qs)
            })
            .collect();
        g = Dense { low, c };
    }
    // Drop leading zeros so the CRT window starts at a real coefficient.
    let first = g.c.iter().position(|&c| c != 0).unwrap_or(0);
    Dense { low: g.low + first as i64, c: g.c[first..].to_vec() }
}
