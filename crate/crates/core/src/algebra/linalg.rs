//! Small dense linear algebra: integer Hermite normal form and row reduction
//! over ℤ/p. Matrices are lists of rows and vectors act from the left
//! (`x · A`).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Row-style Hermite normal form `H = U · A` with `U` unimodular.
#[derive(Clone, Debug)]
pub struct Hnf {
    pub h: Vec<Vec<BigInt>>,
    pub u: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
}

impl Hnf {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Nonzero rows of `H`, a basis of the row lattice.
    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.h[..self.rank()]
    }
}

fn sub_row(rows: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let (a, b) = if dst < src {
        let (lo, hi) = rows.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in a.iter_mut().zip(b.iter()) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

pub fn hnf(a: &[Vec<BigInt>], ncols: usize) -> Hnf {
    let m = a.len();
    let mut h: Vec<Vec<BigInt>> = a.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..m)
        .map(|i| (0..m).map(|j| BigInt::from((i == j) as u8)).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m {
            break;
        }
        loop {
            let best = (r..m).filter(|&k| !h[k][c].is_zero()).min_by_key(|&k| h[k][c].abs());
            let Some(k) = best else { break };
            h.swap(r, k);
            u.swap(r, k);
            let mut done = true;
            for k in r + 1..m {
                if h[k][c].is_zero() {
                    continue;
                }
                let q = h[k][c].div_floor(&h[r][c]);
                sub_row(&mut h, k, r, &q);
                sub_row(&mut u, k, r, &q);
                if !h[k][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.get(r).map_or(true, |row| row[c].is_zero()) {
            continue;
        }
        if h[r][c].is_negative() {
            for x in h[r].iter_mut().chain(u[r].iter_mut()) {
                *x = -x.clone();
            }
        }
        for k in 0..r {
            let q = h[k][c].div_floor(&h[r][c]);
            sub_row(&mut h, k, r, &q);
            sub_row(&mut u, k, r, &q);
        }
        pivots.push(c);
        r += 1;
    }
    Hnf { h, u, pivots }
}

/// Integer `x` with `x · A = target`, if the target lies in the row lattice.
pub fn solve_in_lattice(a: &[Vec<BigInt>], ncols: usize, target: &[BigInt]) -> Option<Vec<BigInt>> {
    let f = hnf(a, ncols);
    let mut rem = target.to_vec();
    let mut x = vec![BigInt::zero(); a.len()];
    for (i, &c) in f.pivots.iter().enumerate() {
        if rem[..c].iter().any(|v| !v.is_zero()) {
            return None;
        }
        let (q, r) = rem[c].div_rem(&f.h[i][c]);
        if !r.is_zero() {
            return None;
        }
        for (t, hv) in rem.iter_mut().zip(&f.h[i]) {
            *t -= &q * hv;
        }
        for (xv, uv) in x.iter_mut().zip(&f.u[i]) {
            *xv += &q * uv;
        }
    }
    rem.iter().all(|v| v.is_zero()).then_some(x)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let e = (a as i128).extended_gcd(&(p as i128));
    assert_eq!(e.gcd, 1, "{a} not invertible mod {p}");
    e.x.rem_euclid(p as i128) as u64
}

/// Inverse of `a` modulo `p`, if it exists.
pub fn try_inv_mod(a: u64, p: u64) -> Option<u64> {
    let e = ((a % p) as i128).extended_gcd(&(p as i128));
    (e.gcd == 1).then(|| e.x.rem_euclid(p as i128) as u64)
}

/// Reduced row echelon form over ℤ/p with the transform recording each
/// reduced row as a combination of the input rows.
#[derive(Clone, Debug)]
pub struct ModReduction {
    pub p: u64,
    pub rows: Vec<Vec<u64>>,
    pub transform: Vec<Vec<u64>>,
    pub pivots: Vec<usize>,
}

impl ModReduction {
    pub fn new(a: &[Vec<u64>], ncols: usize, p: u64) -> Self {
        let m = a.len();
        let mut rows: Vec<Vec<u64>> = a.iter().map(|r| r.iter().map(|v| v % p).collect()).collect();
        let mut tr: Vec<Vec<u64>> = (0..m).map(|i| (0..m).map(|j| (i == j) as u64).collect()).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..ncols {
            let Some(k) = (r..m).find(|&k| rows[k][c] != 0) else { continue };
            rows.swap(r, k);
            tr.swap(r, k);
            let inv = inv_mod(rows[r][c], p);
            for v in rows[r].iter_mut().chain(tr[r].iter_mut()) {
                *v = mul_mod(*v, inv, p);
            }
            for k in 0..m {
                if k == r || rows[k][c] == 0 {
                    continue;
                }
                let f = rows[k][c];
                for j in 0..ncols {
                    rows[k][j] = sub_mod(rows[k][j], mul_mod(f, rows[r][j], p), p);
                }
                for j in 0..m {
                    tr[k][j] = sub_mod(tr[k][j], mul_mod(f, tr[r][j], p), p);
                }
            }
            pivots.push(c);
            r += 1;
            if r == m {
                break;
            }
        }
        ModReduction { p, rows, transform: tr, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// `x` with `x · A = target`, if solvable.
    pub fn solve(&self, target: &[u64]) -> Option<Vec<u64>> {
        let p = self.p;
        let mut rem: Vec<u64> = target.iter().map(|v| v % p).collect();
        let mut x = vec![0u64; self.transform.len()];
        for (i, &c) in self.pivots.iter().enumerate() {
            let f = rem[c];
            if f == 0 {
                continue;
            }
            for (t, v) in rem.iter_mut().zip(&self.rows[i]) {
                *t = sub_mod(*t, mul_mod(f, *v, p), p);
            }
            for (t, v) in x.iter_mut().zip(&self.transform[i]) {
                *t = (*t + mul_mod(f, *v, p)) % p;
            }
        }
        rem.iter().all(|&v| v == 0).then_some(x)
    }

    /// Basis of `{x : x · A = 0}`.
    pub fn left_kernel(&self) -> Vec<Vec<u64>> {
        self.transform[self.rank()..].to_vec()
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    (a + p - b) % p
}

pub fn rank_mod(a: &[Vec<u64>], ncols: usize, p: u64) -> usize {
    ModReduction::new(a, ncols, p).rank()
}

/// Inverse of a square matrix over ℤ/p, or `None` if singular.
pub fn inverse_mod(a: &[Vec<u64>], p: u64) -> Option<Vec<Vec<u64>>> {
    let n = a.len();
    let red = ModReduction::new(a, n, p);
    if red.rank() < n {
        return None;
    }
    (0..n)
        .map(|i| {
            let e: Vec<u64> = (0..n).map(|j| (i == j) as u64).collect();
            red.solve(&e)
        })
        .collect()
}

/// Reduces an integer to its residue in `[0, p)`.
pub fn residue(c: &BigInt, p: u64) -> u64 {
    let r = c.mod_floor(&BigInt::from(p));
    r.try_into().expect("residue fits in u64")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
    }

    #[test]
    fn hnf_of_small_lattice() {
        let a = bi(&[&[2, 4], &[3, 1], &[0, 5]]);
        let f = hnf(&a, 2);
        assert_eq!(f.rank(), 2);
        // U · A = H
        for (hr, ur) in f.h.iter().zip(&f.u) {
            for c in 0..2 {
                let s: BigInt = ur.iter().zip(&a).map(|(x, row)| x * &row[c]).sum();
                assert_eq!(s, hr[c]);
            }
        }
        assert_eq!(f.h[0][0], BigInt::from(1));
        assert!(solve_in_lattice(&a, 2, &[BigInt::from(1), BigInt::from(2)]).is_some());
        assert!(solve_in_lattice(&a, 2, &[BigInt::from(1), BigInt::from(0)]).is_none());
        let b = bi(&[&[2, 0], &[0, 2]]);
        assert!(solve_in_lattice(&b, 2, &[BigInt::from(1), BigInt::from(0)]).is_none());
    }

    #[test]
    fn mod_p_kernel_and_inverse() {
        let a = vec![vec![1, 2], vec![2, 4], vec![0, 1]];
        let red = ModReduction::new(&a, 2, 5);
        assert_eq!(red.rank(), 2);
        let k = red.left_kernel();
        assert_eq!(k.len(), 1);
        for c in 0..2 {
            let s: u64 = k[0].iter().zip(&a).map(|(x, r)| x * r[c]).sum();
            assert_eq!(s % 5, 0);
        }
        let m = vec![vec![1, 1], vec![0, 1]];
        assert_eq!(inverse_mod(&m, 3).unwrap(), vec![vec![1, 2], vec![0, 1]]);
        assert!(inverse_mod(&[vec![1, 1], vec![1, 1]], 3).is_none());
    }
}
