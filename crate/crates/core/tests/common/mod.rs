//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use mtv::series_eval::BigReal;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::{Float, Integer};

// Nested sums: the partial sums S(M) over m_1 < ... < m_r <= M are
// extrapolated to M = infinity by fitting S(M) = L + sum c_ij log(M)^i / M^j
// at several cutoffs M = 2^s.

const BITS: u32 = 192;
const SOLVE_BITS: u32 = 512;
const J: usize = 3;

#[derive(Clone, Copy, Debug)]
pub enum Fam {
    T,
    Hoffman,
    Zeta,
}

impl Fam {
    /// Whether m may occupy summation slot `i` (0-based).
    fn allowed(self, i: usize, m: u64) -> bool {
        match self {
            Fam::T => m % 2 == (i as u64 + 1) % 2,
            Fam::Hoffman => m % 2 == 1,
            Fam::Zeta => true,
        }
    }

    fn prefactor(self, depth: usize) -> u32 {
        match self {
            Fam::T => 1 << depth,
            _ => 1,
        }
    }
}

/// Partial sums at each cutoff in `cutoffs` (ascending).
fn partial_sums(fam: Fam, k: &[u32], cutoffs: &[u64]) -> Vec<Float> {
    let r = k.len();
    let mut acc: Vec<Float> = vec![Float::new(BITS); r];
    let mut out = Vec::with_capacity(cutoffs.len());
    let mut next = 0;
    let last = *cutoffs.last().unwrap();
    for m in 1..=last {
        let inv = Float::with_val(BITS, m).recip();
        for i in (0..r).rev() {
            if !fam.allowed(i, m) {
                continue;
            }
            let term = Float::with_val(BITS, (&inv).pow(k[i]));
            if i == 0 {
                acc[0] += term;
            } else {
                let add = Float::with_val(BITS, &acc[i - 1] * &term);
                acc[i] += add;
            }
        }
        if m == cutoffs[next] {
            out.push(Float::with_val(BITS, &acc[r - 1] * fam.prefactor(r)));
            next += 1;
        }
    }
    out
}

/// Gaussian elimination with partial pivoting; returns the solution of `a x = b`.
fn solve(mut a: Vec<Vec<Float>>, mut b: Vec<Float>) -> Vec<Float> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].clone().abs().partial_cmp(&a[j][col].clone().abs()).unwrap())
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = Float::with_val(SOLVE_BITS, &a[row][col] / &a[col][col]);
            for c in col..n {
                let sub = Float::with_val(SOLVE_BITS, &f * &a[col][c]);
                a[row][c] -= sub;
            }
            let sub = Float::with_val(SOLVE_BITS, &f * &b[col]);
            b[row] -= sub;
        }
    }
    let mut x = vec![Float::new(SOLVE_BITS); n];
    for row in (0..n).rev() {
        let mut s = b[row].clone();
        for c in row + 1..n {
            s -= Float::with_val(SOLVE_BITS, &a[row][c] * &x[c]);
        }
        x[row] = Float::with_val(SOLVE_BITS, &s / &a[row][row]);
    }
    x
}

/// Extrapolated value of the nested sum.
pub fn nested_sum(fam: Fam, k: &[u32]) -> f64 {
    let logs = k.len();
    let unknowns = 1 + J * logs;
    let top = 19u32;
    let cutoffs: Vec<u64> = (0..unknowns as u32).map(|s| 1u64 << (top + 1 - unknowns as u32 + s)).collect();
    let sums = partial_sums(fam, k, &cutoffs);
    let rows: Vec<Vec<Float>> = cutoffs
        .iter()
        .map(|&m| {
            let mf = Float::with_val(SOLVE_BITS, m);
            let lg = Float::with_val(SOLVE_BITS, mf.ln_ref());
            let mut row = vec![Float::with_val(SOLVE_BITS, 1)];
            for j in 1..=J {
                let mj = Float::with_val(SOLVE_BITS, (&mf).pow(j as u32)).recip();
                for i in 0..logs {
                    row.push(Float::with_val(SOLVE_BITS, (&lg).pow(i as u32)) * &mj);
                }
            }
            row
        })
        .collect();
    let b = sums.into_iter().map(|s| Float::with_val(SOLVE_BITS, s)).collect();
    solve(rows, b)[0].to_f64()
}

/// Row Hermite normal form, computed by Euclidean row elimination.
pub fn hermite(rows: &[Vec<Integer>]) -> Vec<Vec<Integer>> {
    let mut a: Vec<Vec<Integer>> = rows.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        loop {
            let nonzero: Vec<usize> = (r..a.len()).filter(|&i| a[i][c] != 0).collect();
            if nonzero.len() <= 1 {
                if let Some(&p) = nonzero.first() {
                    a.swap(r, p);
                }
                break;
            }
            let p = *nonzero.iter().min_by_key(|&&i| a[i][c].clone().abs()).unwrap();
            for &i in &nonzero {
                if i != p {
                    let q = Integer::from(&a[i][c] / &a[p][c]);
                    let prow = a[p].clone();
                    for (x, y) in a[i].iter_mut().zip(&prow) {
                        *x -= Integer::from(&q * y);
                    }
                }
            }
        }
        if r < a.len() && a[r][c] != 0 {
            if a[r][c] < 0 {
                a[r].iter_mut().for_each(|x| *x = Integer::from(-&*x));
            }
            let prow = a[r].clone();
            for i in 0..r {
                let (q, _) = a[i][c].clone().div_rem_euc(prow[c].clone());
                for (x, y) in a[i].iter_mut().zip(&prow) {
                    *x -= Integer::from(&q * y);
                }
            }
            r += 1;
        }
    }
    a.truncate(r);
    a
}

pub fn random_real(rng: &mut ChaCha8Rng, bits: u32) -> BigReal {
    let words: Vec<u64> = (0..bits.div_ceil(64)).map(|_| rng.gen()).collect();
    let i = Integer::from_digits(&words, rug::integer::Order::Lsf);
    let x = Float::with_val(bits, &i) >> (64 * words.len() as u32);
    BigReal::exact(x)
}

