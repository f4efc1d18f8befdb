//! Fincke–Pohst enumeration of short vectors of a positive-definite integral quadratic form.

use crate::matrix::IMat;
use rayon::prelude::*;

struct Decomp {
    n: usize,
    qd: Vec<f64>,
    qo: Vec<Vec<f64>>,
}

fn decompose(a: &IMat) -> Decomp {
    let n = a.len();
    let mut q: Vec<Vec<f64>> = a.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
    for i in 0..n {
        assert!(q[i][i] > 0.0, "form is not positive definite");
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    Decomp { n, qd: (0..n).map(|i| q[i][i]).collect(), qo: q }
}

fn exact_norm(a: &IMat, y: &[i64]) -> i64 {
    let mut s = 0i64;
    for i in 0..y.len() {
        if y[i] == 0 {
            continue;
        }
        let mut t = a[i][i] * y[i];
        for j in i + 1..y.len() {
            t += 2 * a[i][j] * y[j];
        }
        s += t * y[i];
    }
    s
}

/// Calls `f(y, yᵀAy)` for every integer y with yᵀAy ≤ bound, with the last coordinate fixed to `last`
/// when given.
fn run<F: FnMut(&[i64], i64)>(a: &IMat, d: &Decomp, bound: i64, last: Option<i64>, f: &mut F) {
    let n = d.n;
    if n == 0 {
        f(&[], 0);
        return;
    }
    let slack = 1e-7 * (1.0 + bound as f64);
    let b = bound as f64 + slack;
    let mut y = vec![0i64; n];
    let mut rem = vec![0f64; n + 1];
    let mut center = vec![0f64; n];
    let mut upper = vec![0i64; n];
    rem[n] = b;
    let mut i = n - 1;
    // set up level i
    let setup = |i: usize, y: &mut [i64], rem: &[f64], center: &mut [f64], upper: &mut [i64]| {
        let mut c = 0.0;
        for j in i + 1..n {
            c -= d.qo[i][j] * y[j] as f64;
        }
        center[i] = c;
        let r = (rem[i + 1].max(0.0) / d.qd[i]).sqrt();
        y[i] = (c - r).ceil() as i64;
        upper[i] = (c + r).floor() as i64;
    };
    setup(i, &mut y, &rem, &mut center, &mut upper);
    if let Some(l) = last {
        if l < y[n - 1] || l > upper[n - 1] {
            return;
        }
        y[n - 1] = l;
        upper[n - 1] = l;
    }
    loop {
        if y[i] > upper[i] {
            if i == n - 1 {
                return;
            }
            i += 1;
            y[i] += 1;
            continue;
        }
        let t = y[i] as f64 - center[i];
        rem[i] = rem[i + 1] - d.qd[i] * t * t;
        if i == 0 {
            let nm = exact_norm(a, &y);
            if nm <= bound {
                f(&y, nm);
            }
            y[0] += 1;
        } else {
            i -= 1;
            setup(i, &mut y, &rem, &mut center, &mut upper);
        }
    }
}

pub fn for_each_short<F: FnMut(&[i64], i64)>(a: &IMat, bound: i64, mut f: F) {
    let d = decompose(a);
    run(a, &d, bound, None, &mut f);
}

/// Parallel fold over the last coordinate; partial results are reduced in coordinate order.
pub fn par_fold_short<T, I, F, R>(a: &IMat, bound: i64, init: I, fold: F, reduce: R) -> T
where
    T: Send,
    I: Fn() -> T + Sync,
    F: Fn(&mut T, &[i64], i64) + Sync,
    R: Fn(T, T) -> T + Sync,
{
    let d = decompose(a);
    let n = d.n;
    if n == 0 {
        let mut t = init();
        fold(&mut t, &[], 0);
        return t;
    }
    let r = ((bound as f64 + 1e-7 * (1.0 + bound as f64)) / d.qd[n - 1]).sqrt().floor() as i64;
    let parts: Vec<T> = (-r..=r)
        .into_par_iter()
        .map(|l| {
            let mut t = init();
            run(a, &d, bound, Some(l), &mut |y: &[i64], nm: i64| fold(&mut t, y, nm));
            t
        })
        .collect();
    parts.into_iter().reduce(|x, y| reduce(x, y)).unwrap_or_else(init)
}

pub fn count_short(a: &IMat, bound: i64) -> Vec<u64> {
    let mut c = vec![0u64; bound as usize + 1];
    for_each_short(a, bound, |_, nm| c[nm as usize] += 1);
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e8_roots() {
        let e8 = crate::lattice::e8(1).unwrap().gram;
        let c = count_short(&e8, 4);
        assert_eq!((c[0], c[1], c[2], c[3], c[4]), (1, 0, 240, 0, 2160));
        let tot = par_fold_short(&e8, 4, || 0u64, |t, _, _| *t += 1, |a, b| a + b);
        assert_eq!(tot, 2401);
    }

    #[test]
    fn z2_counts() {
        let a = vec![vec![1, 0], vec![0, 1]];
        let c = count_short(&a, 5);
        assert_eq!(c, vec![1, 4, 4, 0, 4, 8]);
    }
}
