//! Exact arithmetic in cyclotomic fields Q(ζ_n), power basis modulo Φ_n.

use crate::arith::{factor, Q};
use num_complex::Complex64;
use num_integer::Integer;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

fn cyclotomic_poly(n: u32) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let f = cyclotomic_poly(d);
            p = poly_div_exact(&p, &f);
        }
    }
    let p = Arc::new(p);
    cache.lock().unwrap().insert(n, p.clone());
    p
}

fn poly_div_exact(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let da = a.len() - 1;
    let mut qt = vec![0i64; da - db + 1];
    for i in (0..=da - db).rev() {
        let c = r[i + db];
        qt[i] = c;
        for j in 0..=db {
            r[i + j] -= c * b[j];
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    qt
}

pub fn euler_phi(n: u32) -> u32 {
    factor(n as u64)
        .iter()
        .map(|&(p, e)| ((p - 1) * p.pow(e - 1)) as u32)
        .product()
}

fn ck_mul(a: i128, b: i128) -> i128 {
    a.checked_mul(b).expect("cyclotomic coefficient overflow")
}

fn ck_add(a: i128, b: i128) -> i128 {
    a.checked_add(b).expect("cyclotomic coefficient overflow")
}

/// An element of Q(ζ_n): sum of num[i] ζ_n^i over den.
#[derive(Clone, Debug)]
pub struct Cyc {
    n: u32,
    num: Vec<i128>,
    den: i128,
}

impl Cyc {
    pub fn zero(n: u32) -> Cyc {
        Cyc { n, num: vec![0; euler_phi(n) as usize], den: 1 }
    }

    pub fn one(n: u32) -> Cyc {
        Cyc::from_int(n, 1)
    }

    pub fn from_int(n: u32, a: i128) -> Cyc {
        let mut c = Cyc::zero(n);
        c.num[0] = a;
        c
    }

    pub fn from_q(n: u32, x: Q) -> Cyc {
        let mut c = Cyc::zero(n);
        c.num[0] = *x.numer() as i128;
        c.den = *x.denom() as i128;
        c
    }

    /// ζ_n^k.
    pub fn zeta(n: u32, k: i64) -> Cyc {
        let mut v = vec![0i128; n as usize];
        v[k.rem_euclid(n as i64) as usize] = 1;
        Cyc::from_full(n, v, 1)
    }

    /// e(x) = exp(2πi x) for rational x whose denominator divides n.
    pub fn e(n: u32, x: Q) -> Cyc {
        let d = *x.denom();
        assert!(n as i64 % d == 0, "e({}) not in Q(zeta_{})", x, n);
        Cyc::zeta(n, x.numer() * (n as i64 / d))
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn coeffs(&self) -> (&[i128], i128) {
        (&self.num, self.den)
    }

    fn from_full(n: u32, mut v: Vec<i128>, den: i128) -> Cyc {
        let phi = cyclotomic_poly(n);
        let deg = phi.len() - 1;
        for i in (deg..v.len()).rev() {
            let c = v[i];
            if c != 0 {
                for j in 0..=deg {
                    v[i - deg + j] = ck_add(v[i - deg + j], -ck_mul(c, phi[j] as i128));
                }
            }
        }
        v.truncate(deg);
        let mut c = Cyc { n, num: v, den };
        c.normalize();
        c
    }

    fn normalize(&mut self) {
        let mut g = self.den;
        for &x in &self.num {
            g = g.gcd(&x);
            if g == 1 {
                break;
            }
        }
        if self.den < 0 {
            g = -g.abs();
        } else {
            g = g.abs();
        }
        if g != 1 && g != 0 {
            for x in self.num.iter_mut() {
                *x /= g;
            }
            self.den /= g;
        }
        if self.num.iter().all(|&x| x == 0) {
            self.den = 1;
        }
    }

    /// Re-expresses in Q(ζ_m) for a multiple m of the conductor.
    pub fn lift(&self, m: u32) -> Cyc {
        if m == self.n {
            return self.clone();
        }
        assert!(m % self.n == 0);
        let s = (m / self.n) as usize;
        let mut v = vec![0i128; m as usize];
        for (i, &c) in self.num.iter().enumerate() {
            v[i * s] = c;
        }
        Cyc::from_full(m, v, self.den)
    }

    fn common(&self, o: &Cyc) -> (Cyc, Cyc) {
        if self.n == o.n {
            return (self.clone(), o.clone());
        }
        let m = (self.n as u64).lcm(&(o.n as u64)) as u32;
        (self.lift(m), o.lift(m))
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|&x| x == 0)
    }

    pub fn is_one(&self) -> bool {
        self.as_rational() == Some(Q::from_integer(1))
    }

    pub fn as_rational(&self) -> Option<Q> {
        if self.num.iter().skip(1).all(|&x| x == 0) {
            Some(Q::new(self.num[0] as i64, self.den as i64))
        } else {
            None
        }
    }

    pub fn scale(&self, x: Q) -> Cyc {
        let mut c = Cyc {
            n: self.n,
            num: self.num.iter().map(|&a| ck_mul(a, *x.numer() as i128)).collect(),
            den: ck_mul(self.den, *x.denom() as i128),
        };
        c.normalize();
        c
    }

    pub fn scale_int(&self, a: i128) -> Cyc {
        let mut c = Cyc { n: self.n, num: self.num.iter().map(|&x| ck_mul(x, a)).collect(), den: self.den };
        c.normalize();
        c
    }

    /// Multiplication by ζ_n^k.
    pub fn mul_zeta(&self, k: i64) -> Cyc {
        let n = self.n as usize;
        let s = k.rem_euclid(n as i64) as usize;
        let mut v = vec![0i128; n];
        for (i, &c) in self.num.iter().enumerate() {
            v[(i + s) % n] = c;
        }
        Cyc::from_full(self.n, v, self.den)
    }

    /// Galois action ζ ↦ ζ^j with gcd(j, n) = 1.
    pub fn galois(&self, j: i64) -> Cyc {
        let n = self.n as i64;
        assert_eq!(j.gcd(&n), 1);
        let mut v = vec![0i128; n as usize];
        for (i, &c) in self.num.iter().enumerate() {
            let t = (i as i64 * j).rem_euclid(n) as usize;
            v[t] = ck_add(v[t], c);
        }
        Cyc::from_full(self.n, v, self.den)
    }

    pub fn conj(&self) -> Cyc {
        self.galois(self.n as i64 - 1)
    }

    pub fn to_complex(&self) -> Complex64 {
        let mut z = Complex64::new(0.0, 0.0);
        for (i, &c) in self.num.iter().enumerate() {
            if c != 0 {
                let t = 2.0 * std::f64::consts::PI * i as f64 / self.n as f64;
                z += Complex64::new(t.cos(), t.sin()) * c as f64;
            }
        }
        z / self.den as f64
    }

    /// Multiplicative inverse via the norm: x^{-1} = (prod of other conjugates) / N(x).
    pub fn inv(&self) -> Cyc {
        assert!(!self.is_zero(), "inverse of zero");
        let n = self.n as i64;
        let mut other = Cyc::one(self.n);
        for j in 2..n {
            if j.gcd(&n) == 1 {
                other = &other * &self.galois(j);
            }
        }
        let norm = (&other * self).as_rational().expect("norm is rational");
        other.scale(Q::from_integer(1) / norm)
    }

    /// Σ a_i b_i with a single reduction modulo Φ_n at the end.
    pub fn dot<'a>(n: u32, pairs: impl Iterator<Item = (&'a Cyc, &'a Cyc)>) -> Cyc {
        let len = n as usize;
        let mut v = vec![0i128; len];
        let mut den: i128 = 1;
        for (a, b) in pairs {
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let (a, b) = if a.n == n && b.n == n { (a.clone(), b.clone()) } else { (a.lift(n), b.lift(n)) };
            let d = ck_mul(a.den, b.den);
            let l = den.lcm(&d);
            if l != den {
                let f = l / den;
                for x in v.iter_mut() {
                    *x = ck_mul(*x, f);
                }
                den = l;
            }
            let f = den / d;
            for (i, &x) in a.num.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let xf = ck_mul(x, f);
                for (j, &y) in b.num.iter().enumerate() {
                    if y != 0 {
                        let t = (i + j) % len;
                        v[t] = ck_add(v[t], ck_mul(xf, y));
                    }
                }
            }
        }
        Cyc::from_full(n, v, den)
    }

    /// Square root of a non-negative rational, expressed cyclotomically.
    pub fn sqrt_rational(x: Q) -> Cyc {
        assert!(x >= Q::from_integer(0));
        if x == Q::from_integer(0) {
            return Cyc::zero(1);
        }
        let (a, b) = (*x.numer() as u64, *x.denom() as u64);
        // sqrt(a/b) = sqrt(a b) / b
        let mut r = Cyc::from_q(1, Q::new(1, b as i64));
        for (p, e) in factor(a * b) {
            let k = p.pow(e / 2) as i128;
            r = r.scale_int(k);
            if e % 2 == 1 {
                r = &r * &sqrt_prime(p);
            }
        }
        r
    }
}

fn sqrt_prime(p: u64) -> Cyc {
    if p == 2 {
        return &Cyc::zeta(8, 1) + &Cyc::zeta(8, -1);
    }
    let n = p as u32;
    let mut g = Cyc::zero(n);
    for a in 1..p as i64 {
        let s = crate::arith::jacobi(a, p as i64) as i128;
        g = &g + &Cyc::zeta(n, a).scale_int(s);
    }
    if p % 4 == 1 {
        g
    } else {
        // g = i sqrt(p)
        &g * &Cyc::zeta(4, -1)
    }
}

impl PartialEq for Cyc {
    fn eq(&self, o: &Cyc) -> bool {
        let (a, b) = self.common(o);
        a.den == b.den && a.num == b.num
    }
}

impl Eq for Cyc {}

impl<'a> Add<&'a Cyc> for &'a Cyc {
    type Output = Cyc;
    fn add(self, o: &Cyc) -> Cyc {
        let (a, b) = self.common(o);
        if b.is_zero() {
            return a;
        }
        if a.is_zero() {
            return b;
        }
        let g = a.den.gcd(&b.den);
        let (fa, fb) = (b.den / g, a.den / g);
        let num = a
            .num
            .iter()
            .zip(&b.num)
            .map(|(&x, &y)| ck_add(ck_mul(x, fa), ck_mul(y, fb)))
            .collect();
        let mut c = Cyc { n: a.n, num, den: ck_mul(a.den, fa) };
        c.normalize();
        c
    }
}

impl<'a> Sub<&'a Cyc> for &'a Cyc {
    type Output = Cyc;
    fn sub(self, o: &Cyc) -> Cyc {
        self + &(-o)
    }
}

impl Neg for &Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        Cyc { n: self.n, num: self.num.iter().map(|&x| -x).collect(), den: self.den }
    }
}

impl Neg for Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        -&self
    }
}

impl<'a> Mul<&'a Cyc> for &'a Cyc {
    type Output = Cyc;
    fn mul(self, o: &Cyc) -> Cyc {
        let (a, b) = self.common(o);
        if a.is_zero() || b.is_zero() {
            return Cyc::zero(a.n);
        }
        let n = a.n as usize;
        let mut v = vec![0i128; n];
        for (i, &x) in a.num.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.num.iter().enumerate() {
                if y != 0 {
                    let t = (i + j) % n;
                    v[t] = ck_add(v[t], ck_mul(x, y));
                }
            }
        }
        Cyc::from_full(a.n, v, ck_mul(a.den, b.den))
    }
}

macro_rules! owned_ops {
    ($tr:ident, $f:ident) => {
        impl $tr<Cyc> for Cyc {
            type Output = Cyc;
            fn $f(self, o: Cyc) -> Cyc {
                (&self).$f(&o)
            }
        }
        impl<'a> $tr<&'a Cyc> for Cyc {
            type Output = Cyc;
            fn $f(self, o: &Cyc) -> Cyc {
                (&self).$f(o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        let terms: Vec<String> = self
            .num
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match i {
                0 => format!("{}", c),
                _ => format!("{}*z{}^{}", c, self.n, i),
            })
            .collect();
        let body = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        if self.den == 1 {
            write!(f, "{}", body)
        } else {
            write!(f, "({})/{}", body, self.den)
        }
    }
}

/// Serializes as `cyc:n:den:c0,c1,...`.
pub fn to_token(c: &Cyc) -> String {
    let cs: Vec<String> = c.num.iter().map(|x| x.to_string()).collect();
    format!("cyc:{}:{}:{}", c.n, c.den, cs.join(","))
}

pub fn from_token(s: &str) -> Option<Cyc> {
    let mut it = s.strip_prefix("cyc:")?.splitn(3, ':');
    let n: u32 = it.next()?.parse().ok()?;
    let den: i128 = it.next()?.parse().ok()?;
    let num: Vec<i128> = it.next()?.split(',').map(|t| t.parse().ok()).collect::<Option<_>>()?;
    if num.len() != euler_phi(n) as usize || den == 0 {
        return None;
    }
    let mut c = Cyc { n, num, den };
    c.normalize();
    Some(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_unity() {
        let z = Cyc::zeta(12, 1);
        let mut p = Cyc::one(12);
        for _ in 0..12 {
            p = &p * &z;
        }
        assert!(p.is_one());
        assert_eq!(Cyc::zeta(4, 1), Cyc::zeta(8, 2));
        let s = (0..5).fold(Cyc::zero(5), |a, k| &a + &Cyc::zeta(5, k));
        assert!(s.is_zero());
    }

    #[test]
    fn square_roots() {
        for x in [2, 3, 5, 6, 7, 12, 48] {
            let r = Cyc::sqrt_rational(Q::from_integer(x));
            assert_eq!((&r * &r).as_rational(), Some(Q::from_integer(x)));
            assert!((r.to_complex().re - (x as f64).sqrt()).abs() < 1e-12);
        }
        let r = Cyc::sqrt_rational(Q::new(1, 2));
        assert!((r.to_complex().re - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn inverse_and_conj() {
        let x = &Cyc::zeta(24, 5) + &Cyc::from_int(24, 3);
        assert!((&x * &x.inv()).is_one());
        let n = &x * &x.conj();
        assert!(n.to_complex().im.abs() < 1e-12);
        assert_eq!(from_token(&to_token(&x)), Some(x));
    }
}
