//! The Weil representation ρ_G of Mp₂(Z) and its extension to the double cosets Ỹ_{α²}.

use crate::arith::Q;
use crate::cyclo::Cyc;
use crate::discform::CoeffVector;
use crate::discriminant::{DiscriminantForm, Elt};
use crate::error::{Error, Result};
use crate::matrix::smith;
use crate::mp::{decompose, det2, mat_mul2, Gen, Mat2, MetaplecticElement};

pub type CMat = Vec<Vec<Cyc>>;

pub fn cmat_identity(n: usize, cond: u32) -> CMat {
    (0..n).map(|i| (0..n).map(|j| if i == j { Cyc::one(cond) } else { Cyc::zero(cond) }).collect()).collect()
}

pub fn cmat_mul(a: &CMat, b: &CMat) -> CMat {
    let m = b[0].len();
    let cond = a[0][0].conductor();
    a.iter().map(|r| (0..m).map(|j| Cyc::dot(cond, r.iter().zip(b.iter().map(|br| &br[j])))).collect()).collect()
}

pub fn cmat_adjoint(a: &CMat) -> CMat {
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j].conj()).collect()).collect()
}

pub fn cmat_scale(a: &CMat, c: &Cyc) -> CMat {
    a.iter().map(|r| r.iter().map(|x| x * c).collect()).collect()
}

pub fn cmat_apply(a: &CMat, v: &CoeffVector) -> CoeffVector {
    let cond = a[0][0].conductor();
    a.iter()
        .map(|r| r.iter().zip(v).fold(Cyc::zero(cond), |s, (x, y)| if y.is_zero() { s } else { &s + &(x * y) }))
        .collect()
}

pub fn cmat_trace(a: &CMat) -> Cyc {
    let cond = a[0][0].conductor();
    (0..a.len()).fold(Cyc::zero(cond), |s, i| &s + &a[i][i])
}

#[derive(Clone, Debug)]
pub struct WeilRep {
    pub g: DiscriminantForm,
    pub cond: u32,
    /// e(−sign/8)/√|G| = conj(Gauss sum)/|G|
    pub c: Cyc,
    qexp: Vec<i64>,
}

impl WeilRep {
    pub fn new(g: &DiscriminantForm) -> WeilRep {
        let cond = g.conductor();
        let c = g.gauss_sum().conj().scale(Q::new(1, g.order() as i64));
        let qexp = g.elements().map(|e| zeta_exp(g.q(e), cond)).collect();
        WeilRep { g: g.clone(), cond, c, qexp }
    }

    pub fn dim(&self) -> usize {
        self.g.order()
    }

    fn bil_exp(&self, a: Elt, b: Elt) -> i64 {
        zeta_exp(self.g.bil(a, b), self.cond)
    }

    pub fn t(&self) -> CMat {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { Cyc::zeta(self.cond, self.qexp[i]) } else { Cyc::zero(self.cond) }).collect())
            .collect()
    }

    pub fn t_inv(&self) -> CMat {
        cmat_adjoint(&self.t())
    }

    /// ρ(S)_{δγ} = c e(−(γ,δ)).
    pub fn s(&self) -> CMat {
        let n = self.dim();
        (0..n).map(|d| (0..n).map(|g| self.c.mul_zeta(-self.bil_exp(g, d))).collect()).collect()
    }

    /// ρ(S)/c: the root-of-unity part e(−(γ,δ)).
    pub fn s_unscaled(&self) -> CMat {
        let n = self.dim();
        (0..n).map(|d| (0..n).map(|g| Cyc::zeta(self.cond, -self.bil_exp(g, d))).collect()).collect()
    }

    /// ρ(Z) e_γ = e(−sign/4) e_{−γ}.
    pub fn z(&self) -> CMat {
        let n = self.dim();
        let mut o = vec![vec![Cyc::zero(self.cond); n]; n];
        let s = Cyc::e(self.cond, Q::new(-self.g.sign8, 4));
        for gm in self.g.elements() {
            o[self.g.neg(gm)][gm] = s.clone();
        }
        o
    }

    pub fn gen_matrix(&self, g: Gen) -> CMat {
        match g {
            Gen::S => self.s(),
            Gen::T => self.t(),
            Gen::Tinv => self.t_inv(),
        }
    }

    pub fn rho_word(&self, word: &[Gen]) -> CMat {
        let (s, t, ti) = (self.s(), self.t(), self.t_inv());
        word.iter().fold(cmat_identity(self.dim(), self.cond), |acc, g| {
            let m = match g {
                Gen::S => &s,
                Gen::T => &t,
                Gen::Tinv => &ti,
            };
            cmat_mul(&acc, m)
        })
    }

    pub fn rho(&self, el: &MetaplecticElement) -> Result<CMat> {
        Ok(self.rho_word(&decompose(el)?))
    }

    /// ρ(g)⁻¹ v for a generator g.
    fn apply_gen_inv(&self, g: Gen, v: &CoeffVector) -> CoeffVector {
        match g {
            Gen::T => v.iter().enumerate().map(|(i, x)| x.mul_zeta(-self.qexp[i])).collect(),
            Gen::Tinv => v.iter().enumerate().map(|(i, x)| x.mul_zeta(self.qexp[i])).collect(),
            Gen::S => {
                let cc = self.c.conj();
                (0..self.dim())
                    .map(|d| {
                        let s = v.iter().enumerate().fold(Cyc::zero(self.cond), |s, (g, x)| {
                            if x.is_zero() {
                                s
                            } else {
                                &s + &x.mul_zeta(self.bil_exp(g, d))
                            }
                        });
                        &s * &cc
                    })
                    .collect()
            }
        }
    }

    /// v|[g̃] = ρ(g̃)⁻¹ v.
    pub fn slash(&self, el: &MetaplecticElement, v: &CoeffVector) -> Result<CoeffVector> {
        let w = decompose(el)?;
        Ok(w.iter().fold(v.clone(), |acc, &g| self.apply_gen_inv(g, &acc)))
    }

    fn alpha_map(&self, alpha: i64, v: &CoeffVector) -> CoeffVector {
        let mut out = vec![Cyc::zero(self.cond); self.dim()];
        for (i, x) in v.iter().enumerate() {
            if !x.is_zero() {
                let j = self.g.mul(alpha, i);
                out[j] = &out[j] + x;
            }
        }
        out
    }

    /// v|[Ũ g̃_α Ṽ] with explicit factors (also covers α = 0).
    pub fn act_factored(&self, u: &MetaplecticElement, alpha: i64, v_el: &MetaplecticElement, v: &CoeffVector) -> Result<CoeffVector> {
        let a = self.slash(u, v)?;
        let b = self.alpha_map(alpha, &a);
        self.slash(v_el, &b)
    }

    /// v|[δ̃] for δ̃ ∈ Ỹ_{α²}.
    pub fn act_extended(&self, el: &MetaplecticElement, v: &CoeffVector) -> Result<CoeffVector> {
        let (u, alpha, w) = factor_double_coset(el)?;
        self.act_factored(&u, alpha, &w, v)
    }

    /// Matrix whose column μ is e_μ|[δ̃].
    pub fn extended_matrix(&self, el: &MetaplecticElement) -> Result<CMat> {
        let (u, alpha, w) = factor_double_coset(el)?;
        let n = self.dim();
        let mut cols = Vec::with_capacity(n);
        for mu in 0..n {
            let mut e = vec![Cyc::zero(self.cond); n];
            e[mu] = Cyc::one(self.cond);
            cols.push(self.act_factored(&u, alpha, &w, &e)?);
        }
        Ok((0..n).map(|r| (0..n).map(|c| cols[c][r].clone()).collect()).collect())
    }

    pub fn basis_vector(&self, g: Elt) -> CoeffVector {
        let mut e = vec![Cyc::zero(self.cond); self.dim()];
        e[g] = Cyc::one(self.cond);
        e
    }
}

pub fn zeta_exp(x: Q, n: u32) -> i64 {
    let d = *x.denom();
    assert!(n as i64 % d == 0);
    (x.numer() * (n as i64 / d)).rem_euclid(n as i64)
}

fn isqrt_exact(x: i64) -> Option<i64> {
    let r = (x as f64).sqrt().round() as i64;
    (r >= 0 && r * r == x).then_some(r)
}

/// Factors δ̃ = Ũ g̃_α Ṽ with Ũ, Ṽ ∈ Mp₂(Z).
pub fn factor_double_coset(el: &MetaplecticElement) -> Result<(MetaplecticElement, i64, MetaplecticElement)> {
    let m = el.mat;
    let det = det2(&m);
    let alpha = isqrt_exact(det).filter(|&a| a >= 1).ok_or_else(|| Error::Precondition(format!("det {} is not a positive square", det)))?;
    let content = crate::arith::gcd(crate::arith::gcd(m[0][0], m[0][1]), crate::arith::gcd(m[1][0], m[1][1]));
    if content != 1 {
        return Err(Error::Precondition("matrix content must be 1".into()));
    }
    let a = vec![vec![m[0][0], m[0][1]], vec![m[1][0], m[1][1]]];
    let s = smith(&a);
    let to2 = |x: &Vec<Vec<i64>>| -> Mat2 { [[x[0][0], x[0][1]], [x[1][0], x[1][1]]] };
    let (mut up, mut vp) = (to2(&s.p_inv), to2(&s.q_inv));
    debug_assert_eq!(s.d, vec![1, alpha * alpha]);
    if det2(&up) == -1 {
        let f = [[1, 0], [0, -1]];
        up = mat_mul2(&up, &f);
        vp = mat_mul2(&f, &vp);
    }
    let sm = [[0, -1], [1, 0]];
    let sinv = [[0, 1], [-1, 0]];
    let u = MetaplecticElement::new(mat_mul2(&up, &sm), 1);
    let v = MetaplecticElement::new(mat_mul2(&sinv, &vp), 1);
    let prod = u.mul(&MetaplecticElement::g_alpha(alpha)).mul(&v);
    debug_assert_eq!(prod.mat, m);
    let u = if prod.branch == el.branch { u } else { u.flip() };
    Ok((u, alpha, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discriminant::DiscriminantForm;

    fn z2(q: Q) -> WeilRep {
        WeilRep::new(&DiscriminantForm::cyclic(2, q).unwrap())
    }

    #[test]
    fn z2_examples() {
        let w = z2(Q::new(3, 4));
        let s = w.s();
        let c = &Cyc::zeta(8, 1) * &Cyc::sqrt_rational(Q::new(1, 2));
        assert_eq!(s[0][0], c);
        assert_eq!(s[1][1], -c.clone());
        assert_eq!(w.t()[1][1], Cyc::zeta(4, 3));
        let w1 = z2(Q::new(1, 4));
        let c1 = &Cyc::zeta(8, -1) * &Cyc::sqrt_rational(Q::new(1, 2));
        assert_eq!(w1.s()[0][1], c1);
    }

    #[test]
    fn relations() {
        for g in [
            DiscriminantForm::cyclic(2, Q::new(1, 4)).unwrap(),
            DiscriminantForm::cyclic(6, Q::new(1, 12)).unwrap(),
            crate::lattice::u(2).unwrap().discriminant(),
            crate::lattice::a2(1).unwrap().discriminant(),
        ] {
            let w = WeilRep::new(&g);
            let (s, t) = (w.s(), w.t());
            let z = cmat_mul(&s, &s);
            let st = cmat_mul(&s, &t);
            assert_eq!(cmat_mul(&cmat_mul(&st, &st), &st), z);
            let z2 = cmat_mul(&z, &z);
            let sgn = if g.sign8 % 2 == 0 { 1 } else { -1 };
            assert_eq!(z2, cmat_scale(&cmat_identity(w.dim(), w.cond), &Cyc::from_int(w.cond, sgn)));
            assert_eq!(cmat_mul(&s, &cmat_adjoint(&s)), cmat_identity(w.dim(), w.cond));
        }
    }

    #[test]
    fn extended_alpha() {
        let w = z2(Q::new(3, 4));
        let e1 = w.basis_vector(1);
        let r = w.act_extended(&MetaplecticElement::g_alpha(2), &e1).unwrap();
        assert_eq!(r, w.basis_vector(0));
        // α = 1 agrees with the Weil representation
        let el = MetaplecticElement::new([[2, 1], [-7, -3]], -1);
        let a = w.act_extended(&el, &e1).unwrap();
        let b = w.slash(&el, &e1).unwrap();
        assert_eq!(a, b);
    }
}
