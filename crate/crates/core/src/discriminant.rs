//! Finite quadratic modules G = M∨/M and their invariants.

use crate::arith::{frac, lcm, Q};
use crate::cyclo::Cyc;
use crate::error::{Error, Result};
use crate::lattice::EvenLattice;
use crate::matrix::{inverse_q, smith, IMat};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// Element index into the mixed-radix enumeration of G (last coordinate fastest).
pub type Elt = usize;

#[derive(Clone, Debug)]
pub struct LatticeData {
    /// rows of the SNF transform for the kept divisors: γ_i = (P Gram x)_i mod d_i
    pub p_rows: IMat,
    /// generator lifts in lattice coordinates (rational)
    pub gen_lifts: Vec<Vec<BigRational>>,
}

#[derive(Clone, Debug)]
pub struct DiscriminantForm {
    pub divisors: Vec<i64>,
    pub qgen: Vec<Q>,
    pub bil: Vec<Vec<Q>>,
    pub level: i64,
    pub sign8: i64,
    qvals: Vec<Q>,
    strides: Vec<usize>,
    pub lattice: Option<LatticeData>,
}

fn big_to_q(x: &BigRational) -> Q {
    let n = x.numer().to_i64().expect("numerator fits");
    let d = x.denom().to_i64().expect("denominator fits");
    Q::new(n, d)
}

impl DiscriminantForm {
    /// Builds from generator orders, q on generators and the off-diagonal bilinear values.
    pub fn new(divisors: Vec<i64>, qgen: Vec<Q>, offdiag: Vec<Vec<Q>>) -> Result<DiscriminantForm> {
        let k = divisors.len();
        if qgen.len() != k || (k > 0 && offdiag.len() != k) {
            return Err(Error::InvalidForm("dimension mismatch".into()));
        }
        let mut bil = vec![vec![Q::from_integer(0); k]; k];
        for i in 0..k {
            if divisors[i] < 2 {
                return Err(Error::InvalidForm("generator orders must exceed 1".into()));
            }
            for j in 0..k {
                bil[i][j] = if i == j { frac(qgen[i] * 2) } else { frac(offdiag[i][j]) };
            }
        }
        for i in 0..k {
            let d = Q::from_integer(divisors[i]);
            if !frac(d * d * qgen[i]).is_zero() || !frac(d * 2 * qgen[i]).is_zero() {
                return Err(Error::InvalidForm(format!("q not well defined on generator {}", i)));
            }
            for j in 0..k {
                if bil[i][j] != bil[j][i] || !frac(d * bil[i][j]).is_zero() {
                    return Err(Error::InvalidForm("bilinear form not well defined".into()));
                }
            }
        }
        let mut level = 1;
        for i in 0..k {
            level = lcm(level, *qgen[i].denom());
            for j in 0..k {
                level = lcm(level, *bil[i][j].denom());
            }
        }
        let mut strides = vec![1usize; k];
        for i in (0..k.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * divisors[i + 1] as usize;
        }
        let mut g = DiscriminantForm {
            divisors,
            qgen: qgen.iter().map(|&x| frac(x)).collect(),
            bil,
            level,
            sign8: 0,
            qvals: vec![],
            strides,
            lattice: None,
        };
        g.qvals = (0..g.order()).map(|e| g.q_coords(&g.coords(e))).collect();
        for e in 1..g.order() {
            if (0..k).all(|j| g.bil_coords(&g.coords(e), j).is_zero()) {
                return Err(Error::InvalidForm("degenerate bilinear form".into()));
            }
        }
        g.sign8 = g.gauss_signature().ok_or_else(|| Error::InvalidForm("Gauss sum has wrong absolute value".into()))?;
        Ok(g)
    }

    pub fn trivial() -> DiscriminantForm {
        DiscriminantForm::new(vec![], vec![], vec![]).unwrap()
    }

    /// Z/n with q(1) = a.
    pub fn cyclic(n: i64, a: Q) -> Result<DiscriminantForm> {
        DiscriminantForm::new(vec![n], vec![a], vec![vec![Q::from_integer(0)]])
    }

    pub fn from_lattice(l: &EvenLattice) -> DiscriminantForm {
        let gram = &l.gram;
        let n = gram.len();
        let s = smith(gram);
        let ginv = inverse_q(gram).expect("nondegenerate");
        let kept: Vec<usize> = (0..n).filter(|&i| s.d[i] > 1).collect();
        let mut lifts = Vec::new();
        for &i in &kept {
            // y = P^{-1} e_i, x = Gram^{-1} y
            let y: Vec<BigRational> = (0..n).map(|r| BigRational::from_integer(BigInt::from(s.p_inv[r][i]))).collect();
            let x: Vec<BigRational> = (0..n)
                .map(|r| (0..n).fold(BigRational::zero(), |acc, c| acc + &ginv[r][c] * &y[c]))
                .collect();
            lifts.push(x);
        }
        let ip = |a: &[BigRational], b: &[BigRational]| -> BigRational {
            let mut acc = BigRational::zero();
            for i in 0..n {
                for j in 0..n {
                    if gram[i][j] != 0 {
                        acc += &a[i] * &b[j] * BigRational::from_integer(BigInt::from(gram[i][j]));
                    }
                }
            }
            acc
        };
        let k = kept.len();
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let qgen: Vec<Q> = lifts.iter().map(|x| frac(big_to_q(&(ip(x, x) * &half)))).collect();
        let off: Vec<Vec<Q>> = (0..k).map(|i| (0..k).map(|j| frac(big_to_q(&ip(&lifts[i], &lifts[j])))).collect()).collect();
        let divs = kept.iter().map(|&i| s.d[i]).collect();
        let mut g = DiscriminantForm::new(divs, qgen, off).expect("lattice discriminant form is valid");
        g.lattice = Some(LatticeData { p_rows: kept.iter().map(|&i| s.p[i].clone()).collect(), gen_lifts: lifts });
        g
    }

    /// G with q negated.
    pub fn dual(&self) -> DiscriminantForm {
        let k = self.divisors.len();
        let off = (0..k).map(|i| (0..k).map(|j| -self.bil[i][j]).collect()).collect();
        let mut g = DiscriminantForm::new(self.divisors.clone(), self.qgen.iter().map(|&x| -x).collect(), off).unwrap();
        g.lattice = self.lattice.clone();
        g
    }

    pub fn direct_sum(&self, o: &DiscriminantForm) -> DiscriminantForm {
        let (a, b) = (self.divisors.len(), o.divisors.len());
        let mut off = vec![vec![Q::from_integer(0); a + b]; a + b];
        for i in 0..a {
            for j in 0..a {
                off[i][j] = self.bil[i][j];
            }
        }
        for i in 0..b {
            for j in 0..b {
                off[a + i][a + j] = o.bil[i][j];
            }
        }
        let mut divs = self.divisors.clone();
        divs.extend(&o.divisors);
        let mut qg = self.qgen.clone();
        qg.extend(&o.qgen);
        DiscriminantForm::new(divs, qg, off).unwrap()
    }

    pub fn order(&self) -> usize {
        self.divisors.iter().product::<i64>() as usize
    }

    pub fn coords(&self, e: Elt) -> Vec<i64> {
        self.strides.iter().zip(&self.divisors).map(|(&s, &d)| ((e / s) % d as usize) as i64).collect()
    }

    pub fn index(&self, c: &[i64]) -> Elt {
        c.iter().zip(&self.divisors).zip(&self.strides).map(|((&x, &d), &s)| x.rem_euclid(d) as usize * s).sum()
    }

    pub fn add(&self, a: Elt, b: Elt) -> Elt {
        let (ca, cb) = (self.coords(a), self.coords(b));
        self.index(&ca.iter().zip(&cb).map(|(x, y)| x + y).collect::<Vec<_>>())
    }

    pub fn sub(&self, a: Elt, b: Elt) -> Elt {
        self.add(a, self.neg(b))
    }

    pub fn neg(&self, a: Elt) -> Elt {
        self.index(&self.coords(a).iter().map(|x| -x).collect::<Vec<_>>())
    }

    pub fn mul(&self, n: i64, a: Elt) -> Elt {
        self.index(&self.coords(a).iter().map(|x| x * n).collect::<Vec<_>>())
    }

    pub fn q(&self, e: Elt) -> Q {
        self.qvals[e]
    }

    fn q_coords(&self, c: &[i64]) -> Q {
        let k = c.len();
        let mut s = Q::from_integer(0);
        for i in 0..k {
            s += self.qgen[i] * c[i] * c[i];
            for j in i + 1..k {
                s += self.bil[i][j] * c[i] * c[j];
            }
        }
        frac(s)
    }

    fn bil_coords(&self, c: &[i64], j: usize) -> Q {
        frac(c.iter().enumerate().fold(Q::from_integer(0), |acc, (i, &x)| acc + self.bil[i][j] * x))
    }

    pub fn bil(&self, a: Elt, b: Elt) -> Q {
        let (ca, cb) = (self.coords(a), self.coords(b));
        let mut s = Q::from_integer(0);
        for (j, &y) in cb.iter().enumerate() {
            if y != 0 {
                s += self.bil_coords(&ca, j) * y;
            }
        }
        frac(s)
    }

    pub fn elements(&self) -> std::ops::Range<Elt> {
        0..self.order()
    }

    /// Conductor for exact Weil representation entries.
    pub fn conductor(&self) -> u32 {
        lcm(8, self.level) as u32
    }

    pub fn gauss_sum(&self) -> Cyc {
        let n = self.conductor();
        let mut acc = vec![0i128; n as usize];
        for e in self.elements() {
            let x = self.q(e);
            acc[(*x.numer() * (n as i64 / *x.denom())) as usize] += 1;
        }
        acc.iter().enumerate().fold(Cyc::zero(n), |s, (i, &c)| if c == 0 { s } else { &s + &Cyc::zeta(n, i as i64).scale_int(c) })
    }

    /// s mod 8 with Σ e(q) = √|G| e(s/8), checked exactly.
    fn gauss_signature(&self) -> Option<i64> {
        let g = self.gauss_sum();
        let r = Cyc::sqrt_rational(Q::from_integer(self.order() as i64));
        (0..8).find(|&s| g == &r * &Cyc::zeta(8, s))
    }

    pub fn p_rank(&self, p: u64) -> usize {
        self.divisors.iter().filter(|&&d| d % p as i64 == 0).count()
    }

    pub fn is_two_torsion(&self) -> bool {
        self.divisors.iter().all(|&d| d == 2)
    }

    /// Coparity δ_G (2-torsion only): 0 iff 2q ≡ 0 everywhere.
    pub fn coparity(&self) -> Result<u8> {
        if !self.is_two_torsion() {
            return Err(Error::Precondition("coparity needs a 2-torsion group".into()));
        }
        Ok(if self.elements().all(|e| frac(self.q(e) * 2).is_zero()) { 0 } else { 1 })
    }

    /// The unique α with 2q(γ) ≡ (γ, α) (2-torsion only).
    pub fn characteristic_element(&self) -> Result<Elt> {
        if !self.is_two_torsion() {
            return Err(Error::Precondition("characteristic element needs a 2-torsion group".into()));
        }
        self.elements()
            .find(|&a| self.elements().all(|g| frac(self.q(g) * 2) == self.bil(g, a)))
            .ok_or_else(|| Error::InvalidForm("no characteristic element".into()))
    }

    /// G^n = nG.
    pub fn image_mul(&self, n: i64) -> Vec<Elt> {
        let mut v: Vec<Elt> = self.elements().map(|e| self.mul(n, e)).collect();
        v.sort();
        v.dedup();
        v
    }

    /// G_n = ker(n).
    pub fn kernel_mul(&self, n: i64) -> Vec<Elt> {
        self.elements().filter(|&e| self.mul(n, e) == 0).collect()
    }

    /// G^{n*} = {γ : n q(μ) + (μ, γ) ≡ 0 for all μ ∈ G_n}.
    pub fn star_set(&self, n: i64) -> Vec<Elt> {
        let kn = self.kernel_mul(n);
        self.elements().filter(|&g| kn.iter().all(|&m| frac(self.q(m) * n + self.bil(m, g)).is_zero())).collect()
    }

    /// Reduces an integer dual-coordinate vector y = Gram x (x ∈ M∨) to an element.
    pub fn from_dual_coords(&self, y: &[i64]) -> Elt {
        let ld = self.lattice.as_ref().expect("form carries lattice data");
        let c: Vec<i64> = ld.p_rows.iter().map(|r| r.iter().zip(y).map(|(&a, &b)| a * b).sum()).collect();
        self.index(&c)
    }

    /// Canonical description of (G, q) used for isomorphism-free comparisons in tests.
    pub fn q_table(&self) -> Vec<Q> {
        self.qvals.clone()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FormInvariants {
    pub order: usize,
    pub level: i64,
    pub ell: usize,
    pub p_ranks: Vec<(u64, usize)>,
    pub signature_mod8: i64,
    pub coparity: Option<u8>,
    pub characteristic_element: Option<Vec<i64>>,
}

pub fn form_invariants(g: &DiscriminantForm) -> FormInvariants {
    let primes = crate::arith::factor(g.order() as u64);
    FormInvariants {
        order: g.order(),
        level: g.level,
        ell: g.divisors.len(),
        p_ranks: primes.iter().map(|&(p, _)| (p, g.p_rank(p))).collect(),
        signature_mod8: g.sign8,
        coparity: g.coparity().ok(),
        characteristic_element: g.characteristic_element().ok().map(|a| g.coords(a)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::*;

    #[test]
    fn small_forms() {
        let g = angle(6).unwrap().discriminant();
        assert_eq!(g.divisors, vec![6]);
        let qs: Vec<Q> = g.elements().map(|e| g.q(e)).collect();
        let mut want: Vec<Q> = (0..6).map(|j| frac(Q::new(j * j, 12))).collect();
        let mut got = qs.clone();
        got.sort();
        want.sort();
        assert_eq!(got, want);
        let u2 = u(2).unwrap().discriminant();
        let mut q2: Vec<Q> = u2.elements().map(|e| u2.q(e)).collect();
        q2.sort();
        assert_eq!(q2, vec![Q::from_integer(0), Q::from_integer(0), Q::from_integer(0), Q::new(1, 2)]);
        assert_eq!(u(1).unwrap().discriminant().order(), 1);
    }

    #[test]
    fn invariants() {
        let a1 = a1(1).unwrap().discriminant();
        assert_eq!(a1.level, 4);
        assert_eq!(a1.sign8, 1);
        let a1m = crate::lattice::a1(-1).unwrap().discriminant();
        assert_eq!(a1m.coparity().unwrap(), 1);
        assert_eq!(a1m.characteristic_element().unwrap(), 1);
        let t = DiscriminantForm::trivial();
        let inv = form_invariants(&t);
        assert_eq!((inv.level, inv.signature_mod8, inv.coparity), (1, 0, Some(0)));
        assert!(a1.coparity().is_ok());
        assert!(angle(6).unwrap().discriminant().coparity().is_err());
    }

    #[test]
    fn milgram_lambda() {
        for g in 2..6 {
            let l = lambda_g(g).unwrap();
            let d = l.discriminant();
            assert_eq!(d.order() as i128, l.det().abs());
            assert_eq!(d.sign8, l.sign().rem_euclid(8));
        }
    }
}
