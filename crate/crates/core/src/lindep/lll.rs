//! LLL reduction of integer lattices.
//!
//! The basis and its Gram matrix are kept exactly; Gram-Schmidt coefficients
//! are floating point and are recomputed from the exact Gram matrix whenever a
//! row changes, so rounding errors never accumulate across iterations.

use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Size-reduction parameter; slightly above 1/2 so floating-point GSO cannot loop.
pub const ETA: f64 = 0.51;

/// Rows of arbitrary-precision integers spanning a lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegerLattice {
    rows: Vec<Vec<Integer>>,
}

impl IntegerLattice {
    pub fn new(rows: Vec<Vec<Integer>>) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(Error::DegenerateLattice("basis has no rows"));
        };
        let m = first.len();
        if m == 0 {
            return Err(Error::DegenerateLattice("rows have no entries"));
        }
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::DegenerateLattice("rows have different lengths"));
        }
        if rows.iter().any(|r| r.iter().all(|x| *x == 0)) {
            return Err(Error::DegenerateLattice("basis contains a zero row"));
        }
        Ok(IntegerLattice { rows })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| Integer::from(x)).collect()).collect())
    }

    pub fn rows(&self) -> &[Vec<Integer>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vec<Integer>> {
        self.rows
    }

    /// Number of basis vectors.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Length of each row.
    pub fn ambient_dim(&self) -> usize {
        self.rows[0].len()
    }
}

/// Reduced basis together with the unimodular matrix `U` such that
/// `reduced = U * input` (rows).
#[derive(Clone, Debug)]
pub struct Reduction {
    pub basis: IntegerLattice,
    pub transform: Vec<Vec<Integer>>,
}

pub fn lll_reduce(basis: &IntegerLattice, delta: &Rational) -> Result<IntegerLattice> {
    Ok(reduce(basis, delta, false)?.basis)
}

pub fn lll_reduce_with_transform(basis: &IntegerLattice, delta: &Rational) -> Result<Reduction> {
    reduce(basis, delta, true)
}

/// The default `delta = 99/100`.
pub fn default_delta() -> Rational {
    Rational::from((99, 100))
}

fn dot(a: &[Integer], b: &[Integer]) -> Integer {
    let mut acc = Integer::new();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

/// Rank over `Z/p` for a prime `p`; a lower bound for the rank over `Q`.
fn rank_mod(rows: &[Vec<Integer>], p: u64) -> usize {
    let m = rows[0].len();
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|x| x.mod_u(p as u32) as u64).collect())
        .collect();
    let mul = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let inv = |x: u64| {
        let (mut base, mut e, mut acc) = (x, p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            e >>= 1;
        }
        acc
    };
    let mut rank = 0;
    for col in 0..m {
        let Some(piv) = (rank..a.len()).find(|&i| a[i][col] != 0) else { continue };
        a.swap(rank, piv);
        let iv = inv(a[rank][col]);
        for i in rank + 1..a.len() {
            if a[i][col] != 0 {
                let f = mul(a[i][col], iv);
                for j in col..m {
                    let s = mul(f, a[rank][j]);
                    a[i][j] = (a[i][j] + p - s) % p;
                }
            }
        }
        rank += 1;
        if rank == a.len() {
            break;
        }
    }
    rank
}

fn is_independent(rows: &[Vec<Integer>]) -> bool {
    if rows.len() > rows[0].len() {
        return false;
    }
    // full rank modulo any prime proves full rank; a dependent verdict from
    // several unrelated primes is wrong only with negligible probability
    [4_294_967_291u64, 4_294_967_279, 4_294_967_231]
        .iter()
        .any(|&p| rank_mod(rows, p) == rows.len())
}

struct State {
    b: Vec<Vec<Integer>>,
    h: Option<Vec<Vec<Integer>>>,
    gram: Vec<Vec<Integer>>,
    mu: Vec<Vec<Float>>,
    bn: Vec<Float>,
    prec: u32,
}

impl State {
    fn f(&self, x: &Integer) -> Float {
        Float::with_val(self.prec, x)
    }

    /// `mu[k][0..k]` and `bn[k]` from the exact Gram row.
    fn gso_row(&mut self, k: usize) {
        let mut r: Vec<Float> = Vec::with_capacity(k + 1);
        for j in 0..=k {
            let mut acc = self.f(&self.gram[k][j]);
            for (i, ri) in r.iter().enumerate().take(j) {
                acc -= Float::with_val(self.prec, &self.mu[j][i] * ri);
            }
            if j < k {
                self.mu[k][j] = Float::with_val(self.prec, &acc / &self.bn[j]);
            }
            r.push(acc);
        }
        self.bn[k] = r.pop().expect("k + 1 entries");
    }

    /// `b_k -= q b_j`, keeping the Gram matrix exact.
    fn sub_row(&mut self, k: usize, j: usize, q: &Integer) {
        let n = self.b.len();
        let (bk, bj) = pair_mut(&mut self.b, k, j);
        for (x, y) in bk.iter_mut().zip(bj.iter()) {
            *x -= q * y;
        }
        if let Some(h) = self.h.as_mut() {
            let (hk, hj) = pair_mut(h, k, j);
            for (x, y) in hk.iter_mut().zip(hj.iter()) {
                *x -= q * y;
            }
        }
        // G[k][k] - 2 q G[k][j] + q^2 G[j][j]
        let gkj = self.gram[k][j].clone();
        let gjj = self.gram[j][j].clone();
        let new_kk = Integer::from(&self.gram[k][k] - Integer::from(q * &gkj) * 2u32) + Integer::from(q * q) * &gjj;
        for i in 0..n {
            if i != k {
                let t = Integer::from(q * &self.gram[j][i]);
                self.gram[k][i] -= &t;
                self.gram[i][k] = self.gram[k][i].clone();
            }
        }
        self.gram[k][k] = new_kk;
    }

    /// Size-reduce `b_k` against `b_0..b_{k-1}`, recomputing the GSO row after
    /// every pass until no coefficient exceeds `ETA`. Precision is doubled if
    /// the passes stop making progress.
    fn size_reduce(&mut self, k: usize) {
        let eta = Float::with_val(53, ETA);
        let mut passes = 0;
        loop {
            self.gso_row(k);
            let mut changed = false;
            for j in (0..k).rev() {
                if Float::with_val(self.prec, self.mu[k][j].abs_ref()) <= eta {
                    continue;
                }
                let q = self.mu[k][j]
                    .to_integer()
                    .expect("finite Gram-Schmidt coefficient");
                if q == 0 {
                    continue;
                }
                self.sub_row(k, j, &q);
                let qf = self.f(&q);
                for i in 0..j {
                    let t = Float::with_val(self.prec, &qf * &self.mu[j][i]);
                    self.mu[k][i] -= t;
                }
                self.mu[k][j] -= &qf;
                changed = true;
            }
            if !changed {
                return;
            }
            passes += 1;
            if passes % 32 == 0 {
                self.raise_precision(k);
            }
        }
    }

    fn raise_precision(&mut self, k: usize) {
        self.prec *= 2;
        log::debug!("LLL precision raised to {} bits", self.prec);
        for i in 0..=k {
            self.gso_row(i);
        }
    }

    fn lovasz_fails(&self, k: usize, delta: &Float) -> bool {
        let mu2 = Float::with_val(self.prec, self.mu[k][k - 1].square_ref());
        let rhs = Float::with_val(self.prec, delta - mu2) * &self.bn[k - 1];
        self.bn[k] < rhs
    }

    fn swap(&mut self, k: usize) {
        self.b.swap(k, k - 1);
        if let Some(h) = self.h.as_mut() {
            h.swap(k, k - 1);
        }
        self.gram.swap(k, k - 1);
        for row in self.gram.iter_mut() {
            row.swap(k, k - 1);
        }
        self.gso_row(k - 1);
    }
}

fn pair_mut<T>(v: &mut [T], a: usize, b: usize) -> (&mut T, &T) {
    assert_ne!(a, b);
    if a < b {
        let (lo, hi) = v.split_at_mut(b);
        (&mut lo[a], &hi[0])
    } else {
        let (lo, hi) = v.split_at_mut(a);
        (&mut hi[0], &lo[b])
    }
}

fn reduce(basis: &IntegerLattice, delta: &Rational, track: bool) -> Result<Reduction> {
    let lo = Rational::from((1, 4));
    if *delta <= lo || *delta >= 1 {
        return Err(Error::Domain(format!("LLL parameter delta = {delta} must lie in (1/4, 1)")));
    }
    let rows = basis.rows().to_vec();
    if !is_independent(&rows) {
        return Err(Error::DegenerateLattice("rows are linearly dependent"));
    }
    let n = rows.len();
    let gram: Vec<Vec<Integer>> = (0..n)
        .map(|i| (0..n).map(|j| dot(&rows[i], &rows[j])).collect())
        .collect();
    // enough bits to resolve Gram-Schmidt norms near 1 next to the largest entry
    let gram_bits = gram.iter().flatten().map(|g| g.significant_bits()).max().unwrap_or(0);
    let prec = gram_bits + 4 * n as u32 + 160;
    let h = track.then(|| {
        (0..n)
            .map(|i| (0..n).map(|j| Integer::from((i == j) as u32)).collect())
            .collect()
    });
    let mut st = State {
        b: rows,
        h,
        gram,
        mu: vec![vec![Float::new(prec); n]; n],
        bn: vec![Float::new(prec); n],
        prec,
    };
    // work a hair above delta so the exact condition holds despite rounding
    let delta_f = {
        let d = Float::with_val(prec, delta);
        let slack = Float::with_val(prec, 1u32 - &d) / 64u32;
        d + slack
    };

    st.gso_row(0);
    let mut k = 1;
    let mut verified = false;
    while !verified {
        while k < n {
            st.size_reduce(k);
            if st.lovasz_fails(k, &delta_f) {
                st.swap(k);
                k = if k > 1 { k - 1 } else { 1 };
            } else {
                k += 1;
            }
        }
        // recompute everything from the exact Gram matrix and confirm
        verified = true;
        for i in 0..n {
            st.gso_row(i);
            let needs_work = i > 0
                && (st.mu[i][..i]
                    .iter()
                    .any(|m| Float::with_val(53, m.abs_ref()) > ETA)
                    || st.lovasz_fails(i, &delta_f));
            if needs_work {
                k = i;
                verified = false;
                break;
            }
        }
    }

    let transform = st.h.unwrap_or_default();
    Ok(Reduction {
        basis: IntegerLattice { rows: st.b },
        transform,
    })
}

/// Exact check of size reduction (`|mu| <= ETA`) and the Lovász condition,
/// with Gram-Schmidt data computed in rational arithmetic.
pub fn is_lll_reduced(basis: &IntegerLattice, delta: &Rational) -> bool {
    let rows = basis.rows();
    let n = rows.len();
    let gram: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| Rational::from(dot(&rows[i], &rows[j]))).collect())
        .collect();
    let mut mu = vec![vec![Rational::new(); n]; n];
    let mut bn = vec![Rational::new(); n];
    for k in 0..n {
        let mut r: Vec<Rational> = Vec::with_capacity(k + 1);
        for j in 0..=k {
            let mut acc = gram[k][j].clone();
            for (i, ri) in r.iter().enumerate().take(j) {
                acc -= Rational::from(&mu[j][i] * ri);
            }
            if j < k {
                mu[k][j] = Rational::from(&acc / &bn[j]);
            }
            r.push(acc);
        }
        bn[k] = r.pop().expect("entry");
        if bn[k] == 0 {
            return false;
        }
    }
    let eta = Rational::from((51, 100));
    for k in 1..n {
        if mu[k][..k].iter().any(|m| Rational::from(m.abs_ref()) > eta) {
            return false;
        }
        let lhs = &bn[k];
        let rhs = Rational::from(delta - Rational::from(mu[k][k - 1].square_ref())) * &bn[k - 1];
        if *lhs < rhs {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    fn lat(rows: &[Vec<i64>]) -> IntegerLattice {
        IntegerLattice::from_i64(rows).unwrap()
    }

    fn mat_mul(u: &[Vec<Integer>], b: &[Vec<Integer>]) -> Vec<Vec<Integer>> {
        u.iter()
            .map(|row| {
                (0..b[0].len())
                    .map(|j| row.iter().zip(b).map(|(x, r)| Integer::from(x * &r[j])).sum())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn identity_is_already_reduced() {
        let id = lat(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let r = lll_reduce(&id, &default_delta()).unwrap();
        let mut rows = r.into_rows();
        rows.sort();
        let mut want = id.into_rows();
        want.sort();
        assert_eq!(rows, want);
    }

    #[test]
    fn euclid_in_two_dimensions() {
        let big = Integer::from(10).pow(40);
        let b = IntegerLattice::new(vec![
            vec![Integer::from(1), Integer::new()],
            vec![big, Integer::from(1)],
        ])
        .unwrap();
        let r = lll_reduce(&b, &default_delta()).unwrap();
        let n0 = dot(&r.rows()[0], &r.rows()[0]);
        assert_eq!(n0, 1);
        assert!(is_lll_reduced(&r, &default_delta()));
    }

    #[test]
    fn transform_maps_input_to_output() {
        let b = lat(&[vec![1, 1, 1], vec![-1, 0, 2], vec![3, 5, 6]]);
        let red = lll_reduce_with_transform(&b, &default_delta()).unwrap();
        assert_eq!(mat_mul(&red.transform, b.rows()), red.basis.rows());
        assert!(is_lll_reduced(&red.basis, &default_delta()));
    }

    #[test]
    fn errors() {
        assert!(matches!(IntegerLattice::new(vec![]), Err(Error::DegenerateLattice(_))));
        assert!(matches!(
            IntegerLattice::from_i64(&[vec![1, 2], vec![0, 0]]),
            Err(Error::DegenerateLattice(_))
        ));
        let dep = lat(&[vec![1, 2], vec![2, 4]]);
        assert!(matches!(lll_reduce(&dep, &default_delta()), Err(Error::DegenerateLattice(_))));
        let ok = lat(&[vec![1, 0], vec![0, 1]]);
        assert!(matches!(lll_reduce(&ok, &Rational::from((1, 5))), Err(Error::Domain(_))));
    }

    #[test]
    fn knapsack_lattice_finds_planted_relation() {
        // x = (3, 7, 11) * 10^30 / 10^30 style lattice: rows [e_i | C x_i]
        let c = Integer::from(10).pow(30);
        let xs = [Integer::from(3), Integer::from(7), Integer::from(-13)];
        let rows: Vec<Vec<Integer>> = (0..3)
            .map(|i| {
                let mut r: Vec<Integer> = (0..3).map(|j| Integer::from((i == j) as u32)).collect();
                r.push(Integer::from(&c * &xs[i]));
                r
            })
            .collect();
        let red = lll_reduce(&IntegerLattice::new(rows).unwrap(), &default_delta()).unwrap();
        let first = &red.rows()[0];
        assert_eq!(first[3], 0);
        let combo: Integer = (0..3).map(|i| Integer::from(&first[i] * &xs[i])).sum();
        assert_eq!(combo, 0);
    }
}
