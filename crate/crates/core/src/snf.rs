//! Smith normal form over the integers with unimodular transforms.

use crate::arith::{gcd, Modulus};
use serde::{Deserialize, Serialize};

/// `P·M·Q = A` over the integers, with `A` diagonal. `q_inv` is `Q⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnfResult {
    pub p: Vec<Vec<i128>>,
    pub a: Vec<Vec<i128>>,
    pub q: Vec<Vec<i128>>,
    pub q_inv: Vec<Vec<i128>>,
    /// Diagonal of `A`, nonnegative, each dividing the next.
    pub diagonal: Vec<i128>,
}

fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

pub fn smith_normal_form_int(m: &[Vec<i128>], cols: usize) -> SnfResult {
    let rows = m.len();
    let mut a: Vec<Vec<i128>> = m.to_vec();
    let mut p = identity(rows);
    let mut q = identity(cols);
    let mut qi = identity(cols);

    let swap_cols = |a: &mut Vec<Vec<i128>>, q: &mut Vec<Vec<i128>>, qi: &mut Vec<Vec<i128>>, i: usize, j: usize| {
        if i == j {
            return;
        }
        for r in a.iter_mut() {
            r.swap(i, j);
        }
        for r in q.iter_mut() {
            r.swap(i, j);
        }
        qi.swap(i, j);
    };
    // col_j -= k·col_t
    let col_op = |a: &mut Vec<Vec<i128>>, q: &mut Vec<Vec<i128>>, qi: &mut Vec<Vec<i128>>, j: usize, t: usize, k: i128| {
        for r in a.iter_mut() {
            r[j] -= k * r[t];
        }
        for r in q.iter_mut() {
            r[j] -= k * r[t];
        }
        let rj = qi[j].clone();
        for (x, y) in qi[t].iter_mut().zip(rj) {
            *x += k * y;
        }
    };
    // row_i -= k·row_t
    let row_op = |a: &mut Vec<Vec<i128>>, p: &mut Vec<Vec<i128>>, i: usize, t: usize, k: i128| {
        let rt = a[t].clone();
        for (x, y) in a[i].iter_mut().zip(rt) {
            *x -= k * y;
        }
        let pt = p[t].clone();
        for (x, y) in p[i].iter_mut().zip(pt) {
            *x -= k * y;
        }
    };

    let n = rows.min(cols);
    for t in 0..n {
        loop {
            // Smallest nonzero magnitude in the trailing block.
            let mut best: Option<(i128, usize, usize)> = None;
            for (i, r) in a.iter().enumerate().skip(t) {
                for (j, &x) in r.iter().enumerate().skip(t) {
                    if x != 0 && best.is_none_or(|(v, _, _)| x.abs() < v) {
                        best = Some((x.abs(), i, j));
                    }
                }
            }
            let Some((_, bi, bj)) = best else { break };
            a.swap(t, bi);
            p.swap(t, bi);
            swap_cols(&mut a, &mut q, &mut qi, t, bj);
            let mut clean = true;
            for i in t + 1..rows {
                let k = a[i][t] / a[t][t];
                if k != 0 {
                    row_op(&mut a, &mut p, i, t, k);
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..cols {
                let k = a[t][j] / a[t][t];
                if k != 0 {
                    col_op(&mut a, &mut q, &mut qi, j, t, k);
                }
                clean &= a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            let piv = a[t][t];
            let bad = (t + 1..rows).find(|&i| a[i][t + 1..].iter().any(|&x| x % piv != 0));
            match bad {
                Some(i) => row_op(&mut a, &mut p, t, i, -1),
                None => break,
            }
        }
        if a[t][t] < 0 {
            for x in a[t].iter_mut() {
                *x = -*x;
            }
            for x in p[t].iter_mut() {
                *x = -*x;
            }
        }
    }
    let diagonal = (0..n).map(|i| a[i][i]).collect();
    SnfResult { p, a, q, q_inv: qi, diagonal }
}

/// SNF of a `Z_d` matrix read as integers. Callers that need the structure of
/// a `Z_d`-module append `d·I` rows first.
pub fn smith_normal_form(m: &[Vec<u64>], cols: usize, modulus: &Modulus) -> SnfResult {
    let mi: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| (x % modulus.d()) as i128).collect()).collect();
    smith_normal_form_int(&mi, cols)
}

/// Diagonal reduced mod `d`.
pub fn diagonal_mod(s: &SnfResult, modulus: &Modulus) -> Vec<u64> {
    s.diagonal.iter().map(|&x| modulus.reduce(x)).collect()
}

/// Indices whose diagonal entry is not `±1 (mod d)`, with the matching rows of
/// `Q⁻¹`. Those rows express the basis generators in the original coordinates.
pub fn basis_indices(s: &SnfResult, modulus: &Modulus) -> Vec<(usize, Vec<i128>)> {
    let d = modulus.d();
    diagonal_mod(s, modulus)
        .into_iter()
        .enumerate()
        .filter(|&(_, x)| x != 1 && x != d - 1)
        .map(|(i, _)| (i, s.q_inv[i].clone()))
        .collect()
}

/// Order of the cyclic factor with diagonal entry `a` inside a `Z_d`-module.
pub fn factor_order(a: i128, modulus: &Modulus) -> u64 {
    gcd(modulus.reduce(a), modulus.d())
}

pub fn mat_mul(x: &[Vec<i128>], y: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let inner = y.len();
    let cols = y.first().map_or(0, Vec::len);
    x.iter()
        .map(|r| {
            (0..cols)
                .map(|j| (0..inner).map(|k| r[k] * y[k][j]).sum())
                .collect()
        })
        .collect()
}
