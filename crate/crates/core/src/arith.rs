//! Elementary integer arithmetic.

use num_integer::Integer;
use num_rational::Rational64;

pub type Q = Rational64;

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn lcm(a: i64, b: i64) -> i64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a.lcm(&b)
}

/// Returns (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0.
pub fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
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

pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factor(n) == vec![(n, 1)]
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut d: Vec<u64> = (1..).take_while(|i| i * i <= n).filter(|i| n % i == 0).collect();
    let mut hi: Vec<u64> = d.iter().rev().map(|i| n / i).filter(|j| j * j != n).collect();
    d.append(&mut hi);
    d
}

pub fn sigma(k: u32, n: u64) -> u64 {
    divisors(n).iter().map(|d| d.pow(k)).sum()
}

/// Jacobi symbol (a/n) for odd positive n.
pub fn jacobi(a: i64, n: i64) -> i64 {
    assert!(n > 0 && n % 2 == 1, "jacobi needs odd positive modulus");
    let mut a = a.rem_euclid(n);
    let mut n = n;
    let mut t = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Kronecker symbol (a/n).
pub fn kronecker(a: i64, n: i64) -> i64 {
    if n == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    let mut t = 1;
    let mut n = n;
    if n < 0 {
        n = -n;
        if a < 0 {
            t = -t;
        }
    }
    let mut v = 0;
    while n % 2 == 0 {
        n /= 2;
        v += 1;
    }
    if v > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if v % 2 == 1 && (a.rem_euclid(8) == 3 || a.rem_euclid(8) == 5) {
            t = -t;
        }
    }
    t * jacobi(a, n)
}

/// Solves x = r_i mod m_i for pairwise coprime moduli.
pub fn crt(rs: &[i64], ms: &[i64]) -> i64 {
    let mut x = 0i64;
    let mut m = 1i64;
    for (&r, &mi) in rs.iter().zip(ms) {
        let (_, s, _) = egcd(m, mi);
        let t = ((r - x).rem_euclid(mi) as i128 * s.rem_euclid(mi) as i128 % mi as i128) as i64;
        x += m * t;
        m *= mi;
        x = x.rem_euclid(m);
    }
    x
}

pub fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: i128 = 1;
    for i in 0..k {
        r = r * (n - i) as i128 / (i + 1) as i128;
    }
    r as i64
}

/// Fractional part in [0, 1).
pub fn frac(x: Q) -> Q {
    x - Q::from_integer(x.numer().div_euclid(*x.denom()))
}

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_small() {
        assert_eq!(jacobi(2, 7), 1);
        assert_eq!(jacobi(3, 7), -1);
        assert_eq!(jacobi(6, 9), 0);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(7, 2), 1);
        assert_eq!(kronecker(-1, -1), -1);
    }

    #[test]
    fn divisor_sums() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(sigma(3, 2), 9);
        assert_eq!(sigma(1, 36), 91);
    }

    #[test]
    fn crt_and_egcd() {
        let (g, x, y) = egcd(240, 46);
        assert_eq!(g, 2);
        assert_eq!(240 * x + 46 * y, 2);
        assert_eq!(crt(&[1, 2], &[4, 3]), 5);
        assert_eq!(frac(q(-1, 4)), q(3, 4));
    }
}
