//! Exact linear algebra over Z and Q: Hermite normal form, integer kernels
//! and solutions of linear systems.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

/// Row echelon reduction by unimodular row operations.
///
/// Only the first `ncols` columns are used for pivots; any further columns are
/// carried along. Returns the pivot column of every nonzero leading row; rows
/// past the pivots are zero in the first `ncols` columns.
fn echelon(rows: &mut [Vec<BigInt>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        // Euclid on column c among rows r..
        loop {
            let mut best: Option<usize> = None;
            for i in r..rows.len() {
                if !rows[i][c].is_zero()
                    && best.map_or(true, |b| rows[i][c].abs() < rows[b][c].abs())
                {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            rows.swap(r, b);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[r][c]);
                let (head, tail) = rows.split_at_mut(i);
                let pr = &head[r];
                for (x, y) in tail[0].iter_mut().zip(pr) {
                    *x -= &q * y;
                }
                if !tail[0][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < rows.len() && !rows[r][c].is_zero() {
            if rows[r][c].is_negative() {
                for x in rows[r].iter_mut() {
                    *x = -&*x;
                }
            }
            // reduce entries above the pivot into [0, pivot)
            for i in 0..r {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[r][c]);
                let (head, tail) = rows.split_at_mut(r);
                for (x, y) in head[i].iter_mut().zip(&tail[0]) {
                    *x -= &q * y;
                }
            }
            pivots.push(c);
            r += 1;
        }
    }
    pivots
}

/// Hermite normal form of the row lattice, zero rows dropped.
pub fn hnf_rows(mat: &[Vec<BigInt>]) -> IntMatrix {
    let ncols = mat.first().map_or(0, |r| r.len());
    let mut rows = mat.to_vec();
    let k = echelon(&mut rows, ncols).len();
    rows.truncate(k);
    rows
}

/// Result of reducing `[A^T | I]`: `A * units[i] = echelon[i]^T` for the
/// pivot rows, and the remaining `units` span the integer kernel of `A`.
struct Reduction {
    echelon: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    units: Vec<Vec<BigInt>>,
    kernel: Vec<Vec<BigInt>>,
}

fn reduce(a: &[Vec<BigInt>], ncols: usize) -> Reduction {
    let m = a.len();
    let mut rows: Vec<Vec<BigInt>> = (0..ncols)
        .map(|j| {
            let mut r: Vec<BigInt> = (0..m).map(|i| a[i][j].clone()).collect();
            r.extend((0..ncols).map(|k| if k == j { int(1) } else { int(0) }));
            r
        })
        .collect();
    let pivots = echelon(&mut rows, m);
    let k = pivots.len();
    let mut echelon_rows = Vec::new();
    let mut units = Vec::new();
    let mut kernel = Vec::new();
    for (i, row) in rows.into_iter().enumerate() {
        let (e, u) = row.split_at(m);
        if i < k {
            echelon_rows.push(e.to_vec());
            units.push(u.to_vec());
        } else {
            kernel.push(u.to_vec());
        }
    }
    Reduction { echelon: echelon_rows, pivots, units, kernel }
}

/// HNF basis of `{x in Z^ncols : A x = 0}`.
pub fn integer_kernel(a: &[Vec<BigInt>], ncols: usize) -> IntMatrix {
    let red = reduce(a, ncols);
    hnf_rows(&red.kernel)
}

/// Some integer solution of `A x = b`, or `None` if there is none.
pub fn solve_integer(a: &[Vec<BigInt>], ncols: usize, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let red = reduce(a, ncols);
    let mut rest = b.to_vec();
    let mut x = vec![int(0); ncols];
    for (i, &c) in red.pivots.iter().enumerate() {
        if rest[c].is_zero() {
            continue;
        }
        let (q, r) = rest[c].div_rem(&red.echelon[i][c]);
        if !r.is_zero() {
            return None;
        }
        for (t, e) in rest.iter_mut().zip(&red.echelon[i]) {
            *t -= &q * e;
        }
        for (t, u) in x.iter_mut().zip(&red.units[i]) {
            *t += &q * u;
        }
    }
    if rest.iter().all(|v| v.is_zero()) {
        Some(x)
    } else {
        None
    }
}

/// Rank over Q.
pub fn rank(a: &[Vec<BigInt>]) -> usize {
    hnf_rows(a).len()
}

/// Some rational solution of `A x = b` (free variables set to zero).
pub fn solve_rational(a: &[Vec<BigRational>], ncols: usize, b: &[BigRational]) -> Option<Vec<BigRational>> {
    let m = a.len();
    let mut rows: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(r, v)| {
            let mut r = r.clone();
            r.push(v.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let (lo, hi) = if i < r { rows.split_at_mut(r) } else { rows.split_at_mut(i) };
                let (target, src) = if i < r { (&mut lo[i], &hi[0]) } else { (&mut hi[0], &lo[r]) };
                for (x, y) in target.iter_mut().zip(src) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m {
            break;
        }
    }
    if rows[r..].iter().any(|row| !row[ncols].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); ncols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = rows[i][ncols].clone();
    }
    Some(x)
}

/// Determinant over Q by elimination.
pub fn det_rational(a: &[Vec<BigRational>]) -> BigRational {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= &m[c][c];
        let inv = m[c][c].recip();
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            let (lo, hi) = m.split_at_mut(i);
            for (x, y) in hi[0].iter_mut().zip(&lo[c]) {
                *x -= &f * y;
            }
        }
    }
    det
}

/// Rank of an integer matrix modulo a prime `p`.
pub fn rank_mod_p(a: &[Vec<i64>], p: i64) -> usize {
    let mut m: Vec<Vec<i64>> = a.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, piv);
        let inv = mod_inverse(m[r][c], p);
        for x in m[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                let (lo, hi) = if i < r { m.split_at_mut(r) } else { m.split_at_mut(i) };
                let (t, s) = if i < r { (&mut lo[i], &hi[0]) } else { (&mut hi[0], &lo[r]) };
                for (x, y) in t.iter_mut().zip(s) {
                    *x = (*x - f * y).rem_euclid(p);
                }
            }
        }
        r += 1;
    }
    r
}

fn mod_inverse(a: i64, p: i64) -> i64 {
    let e = i64::extended_gcd(&a.rem_euclid(p), &p);
    e.x.rem_euclid(p)
}

pub fn mat_vec(a: &[Vec<BigInt>], x: &[BigInt]) -> Vec<BigInt> {
    a.iter().map(|r| r.iter().zip(x).map(|(u, v)| u * v).sum()).collect()
}
