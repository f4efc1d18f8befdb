//! Dense integer and rational matrices: Smith normal form, determinants, inertia, rank.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IMat = Vec<Vec<i64>>;

pub fn identity(n: usize) -> IMat {
    (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect()
}

pub fn transpose(a: &IMat) -> IMat {
    if a.is_empty() {
        return vec![];
    }
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

pub fn mat_mul(a: &IMat, b: &IMat) -> IMat {
    let m = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|r| {
            (0..m)
                .map(|j| {
                    let s: i128 = r.iter().zip(b).map(|(&x, row)| x as i128 * row[j] as i128).sum();
                    i64::try_from(s).expect("matrix entry overflow")
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &IMat, v: &[i64]) -> Vec<i64> {
    a.iter()
        .map(|r| {
            let s: i128 = r.iter().zip(v).map(|(&x, &y)| x as i128 * y as i128).sum();
            i64::try_from(s).expect("vector entry overflow")
        })
        .collect()
}

/// xᵀ A y.
pub fn bilinear(a: &IMat, x: &[i64], y: &[i64]) -> i64 {
    let ay = mat_vec(a, y);
    x.iter().zip(&ay).map(|(&p, &q)| p * q).sum()
}

/// Block diagonal sum.
pub fn block_diag(blocks: &[IMat]) -> IMat {
    let n: usize = blocks.iter().map(|b| b.len()).sum();
    let mut out = vec![vec![0i64; n]; n];
    let mut off = 0;
    for b in blocks {
        for (i, r) in b.iter().enumerate() {
            for (j, &x) in r.iter().enumerate() {
                out[off + i][off + j] = x;
            }
        }
        off += b.len();
    }
    out
}

/// Fraction-free Bareiss determinant.
pub fn det(a: &IMat) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// Smith normal form: P A Q = D with P, Q unimodular.
#[derive(Clone, Debug)]
pub struct Smith {
    pub d: Vec<i64>,
    pub p: IMat,
    pub p_inv: IMat,
    pub q: IMat,
    pub q_inv: IMat,
}

pub fn smith(a: &IMat) -> Smith {
    let n = a.len();
    let m = if n == 0 { 0 } else { a[0].len() };
    let mut w: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let to128 = |x: IMat| -> Vec<Vec<i128>> { x.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect() };
    let mut p = to128(identity(n));
    let mut pi = to128(identity(n));
    let mut q = to128(identity(m));
    let mut qi = to128(identity(m));
    // row op: row_i += c row_j  (P <- E P, P^{-1} <- P^{-1} E^{-1})
    fn row_add(w: &mut [Vec<i128>], p: &mut [Vec<i128>], pi: &mut [Vec<i128>], i: usize, j: usize, c: i128) {
        for k in 0..w[0].len() {
            w[i][k] += c * w[j][k];
        }
        for k in 0..p[0].len() {
            p[i][k] += c * p[j][k];
        }
        for r in pi.iter_mut() {
            r[j] -= c * r[i];
        }
    }
    fn col_add(w: &mut [Vec<i128>], q: &mut [Vec<i128>], qi: &mut [Vec<i128>], i: usize, j: usize, c: i128) {
        for r in w.iter_mut() {
            r[i] += c * r[j];
        }
        for r in q.iter_mut() {
            r[i] += c * r[j];
        }
        for k in 0..qi[0].len() {
            qi[j][k] -= c * qi[i][k];
        }
    }
    fn row_swap(w: &mut [Vec<i128>], p: &mut [Vec<i128>], pi: &mut [Vec<i128>], i: usize, j: usize) {
        w.swap(i, j);
        p.swap(i, j);
        for r in pi.iter_mut() {
            r.swap(i, j);
        }
    }
    fn col_swap(w: &mut [Vec<i128>], q: &mut [Vec<i128>], qi: &mut [Vec<i128>], i: usize, j: usize) {
        for r in w.iter_mut() {
            r.swap(i, j);
        }
        for r in q.iter_mut() {
            r.swap(i, j);
        }
        qi.swap(i, j);
    }
    fn row_neg(w: &mut [Vec<i128>], p: &mut [Vec<i128>], pi: &mut [Vec<i128>], i: usize) {
        for x in w[i].iter_mut() {
            *x = -*x;
        }
        for x in p[i].iter_mut() {
            *x = -*x;
        }
        for r in pi.iter_mut() {
            r[i] = -r[i];
        }
    }
    let k = n.min(m);
    for t in 0..k {
        loop {
            // smallest absolute nonzero entry, row-major tie-break
            let mut best: Option<(i128, usize, usize)> = None;
            for i in t..n {
                for j in t..m {
                    let v = w[i][j].abs();
                    if v != 0 && best.map_or(true, |(b, _, _)| v < b) {
                        best = Some((v, i, j));
                    }
                }
            }
            let Some((_, bi, bj)) = best else { break };
            if bi != t {
                row_swap(&mut w, &mut p, &mut pi, bi, t);
            }
            if bj != t {
                col_swap(&mut w, &mut q, &mut qi, bj, t);
            }
            let piv = w[t][t];
            let mut clean = true;
            for i in t + 1..n {
                let c = w[i][t].div_euclid(piv);
                if c != 0 {
                    row_add(&mut w, &mut p, &mut pi, i, t, -c);
                }
                if w[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..m {
                let c = w[t][j].div_euclid(piv);
                if c != 0 {
                    col_add(&mut w, &mut q, &mut qi, j, t, -c);
                }
                if w[t][j] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the remaining block
            let bad = (t + 1..n).flat_map(|i| (t + 1..m).map(move |j| (i, j))).find(|&(i, j)| w[i][j] % piv != 0);
            match bad {
                Some((i, _)) => row_add(&mut w, &mut p, &mut pi, t, i, 1),
                None => break,
            }
        }
        if w[t][t] < 0 {
            row_neg(&mut w, &mut p, &mut pi, t);
        }
    }
    let back = |x: Vec<Vec<i128>>| -> IMat {
        x.into_iter().map(|r| r.into_iter().map(|v| i64::try_from(v).expect("SNF transform overflow")).collect()).collect()
    };
    Smith {
        d: (0..k).map(|i| w[i][i] as i64).collect(),
        p: back(p),
        p_inv: back(pi),
        q: back(q),
        q_inv: back(qi),
    }
}

pub type RMat = Vec<Vec<BigRational>>;

pub fn to_rational(a: &IMat) -> RMat {
    a.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect()
}

/// Inverse over Q; None if singular.
pub fn inverse_q(a: &IMat) -> Option<RMat> {
    let n = a.len();
    let mut m = to_rational(a);
    let mut inv = to_rational(&identity(n));
    for c in 0..n {
        let piv = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(piv, c);
        inv.swap(piv, c);
        let f = m[c][c].recip();
        for j in 0..n {
            m[c][j] = &m[c][j] * &f;
            inv[c][j] = &inv[c][j] * &f;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for j in 0..n {
                    let t = &f * &m[c][j];
                    m[r][j] -= t;
                    let t = &f * &inv[c][j];
                    inv[r][j] -= t;
                }
            }
        }
    }
    Some(inv)
}

/// (positive, negative, zero) eigenvalue counts of a symmetric matrix.
pub fn inertia(a: &IMat) -> (usize, usize, usize) {
    let n = a.len();
    let mut m = to_rational(a);
    let (mut pos, mut neg) = (0, 0);
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        // diagonal pivot if available, otherwise combine to create one
        let piv = active.iter().copied().find(|&i| !m[i][i].is_zero());
        let piv = match piv {
            Some(i) => i,
            None => {
                let pair = active
                    .iter()
                    .flat_map(|&i| active.iter().map(move |&j| (i, j)))
                    .find(|&(i, j)| i != j && !m[i][j].is_zero());
                let Some((i, j)) = pair else { break };
                // replace basis vector i by e_i + e_j
                for k in 0..n {
                    let t = m[j][k].clone();
                    m[i][k] += t;
                }
                for k in 0..n {
                    let t = m[k][j].clone();
                    m[k][i] += t;
                }
                i
            }
        };
        let d = m[piv][piv].clone();
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        active.retain(|&x| x != piv);
        for &i in &active {
            if m[i][piv].is_zero() {
                continue;
            }
            let f = &m[i][piv] / &d;
            for &j in &active {
                let t = &f * &m[piv][j];
                m[i][j] -= t;
            }
            m[i][piv] = BigRational::zero();
            m[piv][i] = BigRational::zero();
        }
    }
    (pos, neg, n - pos - neg)
}

/// Row-reduces in place and returns the rank.
pub fn rank_rational(rows: &mut RMat) -> usize {
    let nr = rows.len();
    if nr == 0 {
        return 0;
    }
    let nc = rows[0].len();
    let mut r = 0;
    for c in 0..nc {
        let Some(piv) = (r..nr).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(piv, r);
        let f = rows[r][c].recip();
        for j in c..nc {
            rows[r][j] = &rows[r][j] * &f;
        }
        for i in 0..nr {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in c..nc {
                    let t = &f * &rows[r][j];
                    rows[i][j] -= t;
                }
            }
        }
        r += 1;
        if r == nr {
            break;
        }
    }
    r
}

/// Basis of the right kernel {x : A x = 0} over Q.
pub fn nullspace(a: &RMat) -> RMat {
    let mut m = a.clone();
    let nc = if m.is_empty() { 0 } else { m[0].len() };
    rank_rational(&mut m);
    let mut pivots = Vec::new();
    for row in &m {
        if let Some(c) = row.iter().position(|x| !x.is_zero()) {
            pivots.push(c);
        }
    }
    let mut out = Vec::new();
    for f in (0..nc).filter(|c| !pivots.contains(c)) {
        let mut v = vec![BigRational::zero(); nc];
        v[f] = BigRational::one();
        for (row, &pc) in m.iter().zip(&pivots) {
            v[pc] = -row[f].clone();
        }
        out.push(v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smith_diag() {
        let a = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let s = smith(&a);
        assert_eq!(s.d, vec![2, 6, 12]);
        let d = mat_mul(&mat_mul(&s.p, &a), &s.q);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(d[i][j], if i == j { s.d[i] } else { 0 });
            }
        }
        assert_eq!(mat_mul(&s.p, &s.p_inv), identity(3));
        assert_eq!(mat_mul(&s.q, &s.q_inv), identity(3));
    }

    #[test]
    fn det_and_inertia() {
        let u = vec![vec![0, 1], vec![1, 0]];
        assert_eq!(det(&u), -1);
        assert_eq!(inertia(&u), (1, 1, 0));
        let a = vec![vec![2, -1], vec![-1, 2]];
        assert_eq!(det(&a), 3);
        assert_eq!(inertia(&a), (2, 0, 0));
        assert_eq!(inertia(&vec![vec![0, 0], vec![0, -2]]), (0, 1, 1));
    }
}
