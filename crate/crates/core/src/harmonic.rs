//! Polynomials over Q, harmonic bases for a quadratic form, Gegenbauer coefficients.

use crate::matrix::RMat;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Polynomial in r variables: exponent vector -> coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    pub r: usize,
    pub terms: BTreeMap<Vec<u32>, BigRational>,
}

impl Poly {
    pub fn zero(r: usize) -> Poly {
        Poly { r, terms: BTreeMap::new() }
    }

    pub fn constant(r: usize, c: BigRational) -> Poly {
        let mut p = Poly::zero(r);
        p.add_term(vec![0; r], c);
        p
    }

    pub fn var(r: usize, i: usize) -> Poly {
        let mut e = vec![0; r];
        e[i] = 1;
        let mut p = Poly::zero(r);
        p.add_term(e, BigRational::one());
        p
    }

    /// Linear form Σ c_i x_i.
    pub fn linear(c: &[BigRational]) -> Poly {
        let r = c.len();
        let mut p = Poly::zero(r);
        for (i, ci) in c.iter().enumerate() {
            let mut e = vec![0; r];
            e[i] = 1;
            p.add_term(e, ci.clone());
        }
        p
    }

    /// Quadratic form xᵀ A x.
    pub fn quadratic(a: &RMat) -> Poly {
        let r = a.len();
        let mut p = Poly::zero(r);
        for i in 0..r {
            for j in 0..r {
                let mut e = vec![0; r];
                e[i] += 1;
                e[j] += 1;
                p.add_term(e, a[i][j].clone());
            }
        }
        p
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let ent = self.terms.entry(e.clone()).or_insert_with(BigRational::zero);
        *ent += c;
        if ent.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        let mut p = Poly::zero(self.r);
        for (e, x) in &self.terms {
            p.add_term(e.clone(), x * c);
        }
        p
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(&rat(-1)))
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut p = Poly::zero(self.r);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1 * c2);
            }
        }
        p
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut p = Poly::constant(self.r, BigRational::one());
        for _ in 0..n {
            p = p.mul(self);
        }
        p
    }

    pub fn deriv(&self, i: usize) -> Poly {
        let mut p = Poly::zero(self.r);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                p.add_term(f, c * rat(e[i] as i64));
            }
        }
        p
    }

    /// Σ (A)_ij ∂_i ∂_j.
    pub fn laplacian(&self, a: &RMat) -> Poly {
        let mut p = Poly::zero(self.r);
        for i in 0..self.r {
            let di = self.deriv(i);
            for j in 0..self.r {
                if !a[i][j].is_zero() {
                    p = p.add(&di.deriv(j).scale(&a[i][j]));
                }
            }
        }
        p
    }

    /// x ↦ f(B x).
    pub fn substitute(&self, b: &RMat) -> Poly {
        let lin: Vec<Poly> = b.iter().map(|row| Poly::linear(row)).collect();
        let mut p = Poly::zero(self.r);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(self.r, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&lin[i].pow(k));
                }
            }
            p = p.add(&t);
        }
        p
    }

    pub fn eval(&self, x: &[BigRational]) -> BigRational {
        let mut s = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    t *= xi;
                }
            }
            s += t;
        }
        s
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c.to_f64().unwrap_or(f64::NAN) * x.iter().zip(e).map(|(v, &k)| v.powi(k as i32)).product::<f64>())
            .sum()
    }

    /// Clears denominators: returns (integer coefficients, common denominator).
    pub fn integral(&self) -> (Vec<(Vec<u32>, BigInt)>, BigInt) {
        let mut den = BigInt::one();
        for c in self.terms.values() {
            den = num_integer::Integer::lcm(&den, c.denom());
        }
        let t = self.terms.iter().map(|(e, c)| (e.clone(), (c * BigRational::from_integer(den.clone())).to_integer())).collect();
        (t, den)
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

/// Apolar inner product relative to the ambient form Q: ⟨f, g⟩ = f(Q⁻¹∂) g.
pub fn apolar(f: &Poly, g: &Poly, q_inv: &RMat) -> BigRational {
    let fs = f.substitute(q_inv);
    let mut s = BigRational::zero();
    for (e, c) in &fs.terms {
        if let Some(d) = g.terms.get(e) {
            let w: BigInt = e.iter().map(|&k| factorial(k)).product();
            s += c * d * BigRational::from_integer(w);
        }
    }
    s
}

/// Harmonic polynomial for the ambient form Q (lattice coordinates).
#[derive(Clone, Debug)]
pub struct HarmonicPolynomial {
    pub r: usize,
    pub h: u32,
    pub poly: Poly,
    /// ambient Gram matrix
    pub form: RMat,
    /// apolar self-pairing; the orthonormal element is poly / sqrt(norm_sq)
    pub norm_sq: BigRational,
}

impl HarmonicPolynomial {
    pub fn is_harmonic(&self) -> bool {
        self.h < 2 || self.poly.laplacian(&inverse(&self.form)).is_zero()
    }

    pub fn constant_one(form: &RMat) -> HarmonicPolynomial {
        let r = form.len();
        HarmonicPolynomial { r, h: 0, poly: Poly::constant(r, BigRational::one()), form: form.clone(), norm_sq: BigRational::one() }
    }
}

pub fn identity_form(r: usize) -> RMat {
    (0..r).map(|i| (0..r).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect()).collect()
}

pub fn inverse(a: &RMat) -> RMat {
    let n = a.len();
    let mut m = a.clone();
    let mut inv = identity_form(n);
    for c in 0..n {
        let piv = (c..n).find(|&r| !m[r][c].is_zero()).expect("nonsingular form");
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
    inv
}

pub fn harmonic_dimension(r: usize, h: u32) -> usize {
    let c = |n: i64, k: i64| if n < 0 || k < 0 || k > n { 0 } else { crate::arith::binomial(n, k) };
    let (r, h) = (r as i64, h as i64);
    (c(r + h - 1, r - 1) - c(r + h - 3, r - 1)) as usize
}

/// F_u(x) = ⟨u,x⟩² − ⟨u,u⟩⟨x,x⟩/r in coordinates x with ⟨x,x⟩ = xᵀQx.
pub fn f_u(form: &RMat, u: &[BigRational]) -> Poly {
    let r = form.len();
    let qu: Vec<BigRational> = (0..r).map(|i| (0..r).map(|j| &form[i][j] * &u[j]).sum()).collect();
    let uu: BigRational = u.iter().zip(&qu).map(|(a, b)| a * b).sum();
    let l = Poly::linear(&qu);
    l.mul(&l).sub(&Poly::quadratic(form).scale(&(uu / rat(r as i64))))
}

fn monomials(r: usize, h: u32) -> Vec<Vec<u32>> {
    if r == 0 {
        return if h == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for k in (0..=h).rev() {
        for mut rest in monomials(r - 1, h - k) {
            rest.insert(0, k);
            out.push(rest);
        }
    }
    out
}

fn gram_schmidt(cands: Vec<Poly>, q_inv: &RMat, form: &RMat, h: u32) -> Vec<HarmonicPolynomial> {
    let mut out: Vec<HarmonicPolynomial> = Vec::new();
    for c in cands {
        let mut v = c;
        for b in &out {
            let k = apolar(&b.poly, &v, q_inv) / &b.norm_sq;
            v = v.sub(&b.poly.scale(&k));
        }
        if v.is_zero() {
            continue;
        }
        let n = apolar(&v, &v, q_inv);
        out.push(HarmonicPolynomial { r: form.len(), h, poly: v, form: form.clone(), norm_sq: n });
    }
    out
}

/// Orthogonal basis of degree-h harmonics for the ambient form (apolar pairing).
pub fn harmonic_basis_form(form: &RMat, h: u32) -> Vec<HarmonicPolynomial> {
    let r = form.len();
    let q_inv = inverse(form);
    let cands: Vec<Poly> = match h {
        0 => vec![Poly::constant(r, BigRational::one())],
        1 => (0..r).map(|i| Poly::var(r, i)).collect(),
        2 => {
            let mut us: Vec<Vec<BigRational>> = Vec::new();
            for i in 0..r {
                for j in i..r {
                    let mut u = vec![BigRational::zero(); r];
                    u[i] += BigRational::one();
                    u[j] += BigRational::one();
                    us.push(u);
                }
            }
            us.iter().map(|u| f_u(form, u)).collect()
        }
        _ => {
            let mons = monomials(r, h);
            let lap: Vec<Poly> = mons
                .iter()
                .map(|e| {
                    let mut p = Poly::zero(r);
                    p.add_term(e.clone(), BigRational::one());
                    p.laplacian(&q_inv)
                })
                .collect();
            let low = monomials(r, h - 2);
            let a: RMat = low.iter().map(|le| lap.iter().map(|p| p.terms.get(le).cloned().unwrap_or_else(BigRational::zero)).collect()).collect();
            crate::matrix::nullspace(&a)
                .into_iter()
                .map(|v| {
                    let mut p = Poly::zero(r);
                    for (e, c) in mons.iter().zip(v) {
                        p.add_term(e.clone(), c);
                    }
                    p
                })
                .collect()
        }
    };
    gram_schmidt(cands, &q_inv, form, h)
}

pub fn harmonic_basis(r: usize, h: u32) -> Vec<HarmonicPolynomial> {
    harmonic_basis_form(&identity_form(r), h)
}

pub fn mat_vec_r(a: &RMat, v: &[BigRational]) -> Vec<BigRational> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

/// Bivariate polynomial Σ c x^i y^j.
pub type Bivariate = Vec<(u32, u32, BigRational)>;

fn pochhammer(a: &BigRational, n: u32) -> BigRational {
    (0..n).fold(BigRational::one(), |acc, i| acc * (a + rat(i as i64)))
}

/// T^h coefficient of (1 − 2xT + yT²)^{−(r/2 − 1)}.
pub fn gegenbauer(r: usize, h: u32) -> crate::error::Result<Bivariate> {
    if r < 3 {
        return Err(crate::error::Error::Precondition("gegenbauer needs r >= 3".into()));
    }
    let lam = BigRational::new(BigInt::from(r as i64 - 2), BigInt::from(2));
    let mut out = Vec::new();
    for j in 0..=h / 2 {
        let n = h - j;
        let c = pochhammer(&lam, n) / BigRational::from_integer(factorial(n))
            * rat(crate::arith::binomial(n as i64, j as i64))
            * BigRational::from_integer(BigInt::from(2).pow(h - 2 * j))
            * if j % 2 == 1 { rat(-1) } else { rat(1) };
        out.push((h - 2 * j, j, c));
    }
    Ok(out)
}

/// Zonal kernel in degree h: Gegenbauer for r ≥ 3, the T^h coefficient of −log(1 − 2xT + yT²) for r = 2.
pub fn zonal(r: usize, h: u32) -> Bivariate {
    if r >= 3 {
        return gegenbauer(r, h).expect("r >= 3");
    }
    if h == 0 {
        return vec![(0, 0, BigRational::one())];
    }
    let mut out = Vec::new();
    for j in 0..=h / 2 {
        let n = h - j;
        let c = rat(crate::arith::binomial(n as i64, j as i64)) * BigRational::from_integer(BigInt::from(2).pow(h - 2 * j))
            / rat(n as i64)
            * if j % 2 == 1 { rat(-1) } else { rat(1) };
        out.push((h - 2 * j, j, c));
    }
    out
}

pub fn eval_bivariate(p: &Bivariate, x: &BigRational, y: &BigRational) -> BigRational {
    p.iter().map(|(i, j, c)| c * x.pow(*i as i32) * y.pow(*j as i32)).sum()
}
