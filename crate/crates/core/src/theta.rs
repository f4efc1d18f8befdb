//! Theta series with harmonic coefficients, genus averages and the split-theta identities.

use crate::arith::Q;
use crate::cyclo::Cyc;
use crate::discform::orthogonal_group;
use crate::discriminant::{DiscriminantForm, Elt};
use crate::enumerate::{count_short, for_each_short, par_fold_short};
use crate::error::{Error, Result};
use crate::harmonic::{eval_bivariate, harmonic_basis_form, zonal, HarmonicPolynomial};
use crate::lattice::EvenLattice;
use crate::matrix::{inverse_q, to_rational, IMat, RMat};
use crate::qexp::{big_to_q, genus_theta, FourierExpansion, GenusRep, TailBound};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::{BTreeMap, HashMap};

/// Positive-definite integral form used for enumeration in dual coordinates: A = d Q⁻¹.
pub struct DualEnum {
    pub a: IMat,
    pub d: i64,
    pub q_inv: RMat,
}

pub fn dual_enum(gram: &IMat) -> DualEnum {
    let q_inv = inverse_q(gram).expect("nondegenerate");
    let d = q_inv.iter().flatten().fold(1i64, |acc, x| crate::arith::lcm(acc, x.denom().to_i64().unwrap()));
    let a = q_inv.iter().map(|r| r.iter().map(|x| (x * BigRational::from_integer(BigInt::from(d))).to_integer().to_i64().unwrap()).collect()).collect();
    DualEnum { a, d, q_inv }
}

fn negate(g: &IMat) -> IMat {
    g.iter().map(|r| r.iter().map(|x| -x).collect()).collect()
}

/// F in dual coordinates y = Q x as an integer polynomial over a common denominator.
struct IntPoly {
    terms: Vec<(Vec<u32>, i128)>,
    den: BigInt,
}

impl IntPoly {
    fn new(f: &HarmonicPolynomial, q_inv: &RMat) -> IntPoly {
        let (t, den) = f.poly.substitute(q_inv).integral();
        IntPoly { terms: t.into_iter().map(|(e, c)| (e, c.to_i128().expect("coefficient fits"))).collect(), den }
    }

    fn eval(&self, y: &[i64]) -> i128 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = *c;
                for (&yi, &k) in y.iter().zip(e) {
                    for _ in 0..k {
                        t = t.checked_mul(yi as i128).expect("harmonic value overflow");
                    }
                }
                t
            })
            .sum()
    }
}

fn theta_core(pos_gram: &IMat, g: &DiscriminantForm, sign: i64, f: Option<&HarmonicPolynomial>, prec: Q, dual: bool) -> Result<FourierExpansion> {
    let r = pos_gram.len();
    let h = f.map_or(0, |f| f.h);
    if let Some(f) = f {
        if f.r != r || f.form != to_rational(pos_gram) {
            return Err(Error::Precondition("harmonic polynomial is not attached to this lattice".into()));
        }
        if !f.is_harmonic() {
            return Err(Error::Precondition("polynomial is not harmonic".into()));
        }
    }
    let de = dual_enum(pos_gram);
    let ip = f.map(|f| IntPoly::new(f, &de.q_inv));
    let bound = (prec * 2 * de.d).floor().to_integer();
    let acc: HashMap<(Elt, i64), i128> = par_fold_short(
        &de.a,
        bound,
        HashMap::new,
        |m: &mut HashMap<(Elt, i64), i128>, y: &[i64], n: i64| {
            let w = ip.as_ref().map_or(1, |p| p.eval(y));
            if w != 0 {
                let yy: Vec<i64> = y.iter().map(|x| sign * x).collect();
                *m.entry((g.from_dual_coords(&yy), n)).or_insert(0) += w;
            }
        },
        |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        },
    );
    let weight = Q::from_integer(h as i64) + Q::new(r as i64, 2);
    let mut out = FourierExpansion::new(g, dual, weight, prec)?;
    let den = ip.as_ref().map_or(BigInt::one(), |p| p.den.clone());
    let mut sorted: Vec<_> = acc.into_iter().filter(|(_, v)| *v != 0).collect();
    sorted.sort();
    for ((e, n), v) in sorted {
        let c = big_to_q(&BigRational::new(BigInt::from(v), den.clone()));
        out.set(e, Q::new(n, 2 * de.d), Cyc::from_q(1, c))?;
    }
    Ok(out)
}

/// Θ_{M,F} = Σ_{v ∈ M∨} F(v) q^{⟨v,v⟩/2} e_{v+M} for positive-definite M.
pub fn theta_coeffs(m: &EvenLattice, f: Option<&HarmonicPolynomial>, prec: Q) -> Result<FourierExpansion> {
    if !m.is_positive_definite() {
        return Err(Error::InvalidLattice("theta series needs a definite lattice".into()));
    }
    theta_core(&m.gram, &m.discriminant(), 1, f, prec, false)
}

/// Θ_{M,F} := Θ_{M(−1),F} for negative-definite M, typed by the dual of G_M.
pub fn theta_coeffs_negative(m: &EvenLattice, f: Option<&HarmonicPolynomial>, prec: Q) -> Result<FourierExpansion> {
    if !m.is_negative_definite() {
        return Err(Error::InvalidLattice("expected a negative-definite lattice".into()));
    }
    theta_core(&negate(&m.gram), &m.discriminant(), -1, f, prec, true)
}

/// Ambient form for harmonic polynomials on M (or on M(−1) when M is negative definite).
pub fn positive_form(m: &EvenLattice) -> RMat {
    if m.is_negative_definite() {
        to_rational(&negate(&m.gram))
    } else {
        to_rational(&m.gram)
    }
}

/// Shortest nonzero ⟨v,v⟩ over v ∈ M∨ for definite M.
pub fn shortest_dual_norm(m: &EvenLattice) -> Q {
    let g = if m.is_negative_definite() { negate(&m.gram) } else { m.gram.clone() };
    let de = dual_enum(&g);
    let b = (0..de.a.len()).map(|i| de.a[i][i]).min().unwrap_or(1);
    let counts = count_short(&de.a, b);
    let n = (1..counts.len()).find(|&n| counts[n] > 0).unwrap_or(b as usize);
    Q::new(n as i64, de.d)
}

/// Tail bound for Θ_{M,F}; uses |F(v)| ≤ ‖F‖ ⟨v,v⟩^{h/2} / √(h!) for the apolar norm.
pub fn tail_bound(m: &EvenLattice, f: Option<&HarmonicPolynomial>) -> TailBound {
    let mu = shortest_dual_norm(m);
    let (h, fcoef) = match f {
        None => (0, 1.0),
        Some(f) => {
            let fact: f64 = (1..=f.h).map(|x| x as f64).product();
            (f.h, (f.norm_sq.to_f64().unwrap() / fact).sqrt() * (1.0 + 1e-12))
        }
    };
    TailBound { rank: m.rank(), mu_sq: *mu.numer() as f64 / *mu.denom() as f64, h, fcoef }
}

/// Genus theta for a genus with a single class: the average over Aut(G_M).
pub fn genus_theta_single(m: &EvenLattice, prec: Q) -> Result<FourierExpansion> {
    let th = theta_coeffs(m, None, prec)?;
    let g = th.g.clone();
    let isos = orthogonal_group(&g, 4096)?;
    let n = isos.len();
    genus_theta(&g, &[GenusRep { theta: th, aut_order: 1, isos }], n)
}

#[derive(Clone, Debug)]
pub struct SplitThetaReport {
    pub decomposition_holds: bool,
    pub h: u32,
    /// LHS/RHS of the ∂_h identity; the constant is (πi)^h times this ratio
    pub ratio: Option<BigRational>,
    pub consistent: bool,
    pub nonzero_slots: usize,
}

/// Checks Θ^{(2)} = Θ ⊗ Θ on diagonal blocks and ∂_h Θ^{(2)} ∝ Σ_i Θ_{F_i} ⊗ Θ_{F_i}.
pub fn split_theta_decomposition_check(m: &EvenLattice, prec: Q, h: u32) -> Result<SplitThetaReport> {
    if !m.is_positive_definite() || m.rank() > 8 {
        return Err(Error::Precondition("needs a positive-definite lattice of rank at most 8".into()));
    }
    let de = dual_enum(&m.gram);
    let bound = (prec * 2 * de.d).floor().to_integer();
    if count_short(&de.a, bound).iter().sum::<u64>() > 5000 {
        return Err(Error::Precondition("enumeration budget exceeded".into()));
    }
    let g = m.discriminant();
    let mut vecs: Vec<(Vec<i64>, i64, Elt)> = Vec::new();
    for_each_short(&de.a, bound, |y, n| vecs.push((y.to_vec(), n, g.from_dual_coords(y))));
    let theta = theta_coeffs(m, None, prec)?;
    let key = |n: i64| Q::new(n, 2 * de.d);

    // degree-2 theta restricted to diagonal blocks, enumerated over pairs
    let mut pairs: BTreeMap<(Elt, Q, Elt, Q), i64> = BTreeMap::new();
    let mut lhs: BTreeMap<(Elt, Q, Elt, Q), BigRational> = BTreeMap::new();
    let z = zonal(m.rank(), h);
    let dq = BigRational::from_integer(BigInt::from(de.d));
    let ipd = |a: &[i64], b: &[i64]| -> BigRational {
        let mut s = BigRational::zero();
        for i in 0..a.len() {
            for j in 0..b.len() {
                s += &de.q_inv[i][j] * BigRational::from_integer(BigInt::from(a[i] * b[j]));
            }
        }
        s
    };
    for (y1, n1, g1) in &vecs {
        for (y2, n2, g2) in &vecs {
            let k = (*g1, key(*n1), *g2, key(*n2));
            *pairs.entry(k).or_insert(0) += 1;
            let x = ipd(y1, y2);
            let yy = BigRational::from_integer(BigInt::from(n1 * n2)) / (&dq * &dq);
            *lhs.entry(k).or_insert_with(BigRational::zero) += eval_bivariate(&z, &x, &yy);
        }
    }
    let decomposition_holds = theta.slots().iter().all(|&(a, ma)| {
        theta.slots().iter().all(|&(b, mb)| {
            let prod = theta.get(a, ma).as_rational().unwrap() * theta.get(b, mb).as_rational().unwrap();
            Q::from_integer(*pairs.get(&(a, ma, b, mb)).unwrap_or(&0)) == prod
        })
    });

    let basis = harmonic_basis_form(&to_rational(&m.gram), h);
    let thetas: Vec<FourierExpansion> = basis.iter().map(|f| theta_coeffs(m, Some(f), prec)).collect::<Result<_>>()?;
    let mut ratio: Option<BigRational> = None;
    let mut consistent = true;
    let mut nonzero = 0;
    for &(a, ma) in &theta.slots() {
        for &(b, mb) in &theta.slots() {
            let mut rhs = BigRational::zero();
            for (f, t) in basis.iter().zip(&thetas) {
                let ca = to_big(t.get(a, ma).as_rational().unwrap());
                let cb = to_big(t.get(b, mb).as_rational().unwrap());
                rhs += ca * cb / &f.norm_sq;
            }
            let l = lhs.get(&(a, ma, b, mb)).cloned().unwrap_or_else(BigRational::zero);
            match (l.is_zero(), rhs.is_zero()) {
                (true, true) => {}
                (false, false) => {
                    nonzero += 1;
                    let r = l / rhs;
                    match &ratio {
                        None => ratio = Some(r),
                        Some(r0) => consistent &= *r0 == r,
                    }
                }
                _ => consistent = false,
            }
        }
    }
    Ok(SplitThetaReport { decomposition_holds, h, ratio, consistent, nonzero_slots: nonzero })
}

fn to_big(x: Q) -> BigRational {
    BigRational::new(BigInt::from(*x.numer()), BigInt::from(*x.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::f_u;
    use crate::lattice::{a2, angle, e8};
    use crate::mp::MetaplecticElement;
    use crate::qexp::modularity_residual;
    use num_complex::Complex64;

    fn c(th: &FourierExpansion, g: Elt, m: Q) -> i64 {
        th.get(g, m).as_rational().unwrap().to_integer()
    }

    #[test]
    fn theta_small() {
        let th = theta_coeffs(&angle(2).unwrap(), None, Q::from_integer(1)).unwrap();
        assert_eq!(c(&th, 0, Q::zero()), 1);
        assert_eq!(c(&th, 1, Q::new(1, 4)), 2);
        assert_eq!(c(&th, 0, Q::from_integer(1)), 2);
        let th = theta_coeffs(&e8(1).unwrap(), None, Q::from_integer(3)).unwrap();
        for n in 0..=3 {
            let want = if n == 0 { 1 } else { 240 * crate::arith::sigma(3, n as u64) as i64 };
            assert_eq!(c(&th, 0, Q::from_integer(n)), want);
        }
    }

    #[test]
    fn degree_two_vanishes_at_zero_and_is_modular() {
        let m = e8(1).unwrap();
        let form = positive_form(&m);
        let mut u = vec![BigRational::zero(); 8];
        u[0] = BigRational::one();
        u[3] = BigRational::one();
        let hp = harmonic_basis_form(&form, 2).into_iter().next().unwrap();
        let th = theta_coeffs(&m, Some(&hp), Q::from_integer(8)).unwrap();
        assert!(th.get(0, Q::zero()).is_zero());
        // weight 6 cusp forms of level one vanish, so every degree-2 theta of E8 is zero
        let fu = HarmonicPolynomial { poly: f_u(&form, &u), ..hp.clone() };
        let th2 = theta_coeffs(&m, Some(&fu), Q::from_integer(6)).unwrap();
        assert!(th2.coeffs.is_empty());
        let tb = tail_bound(&m, Some(&hp));
        let rep = modularity_residual(&th, &MetaplecticElement::s(), &[Complex64::new(0.0, 1.0)], &tb).unwrap();
        assert!(rep.certified(1e-8), "{:?}", rep);
    }

    #[test]
    fn theta_inversion_rank_one() {
        let m = angle(2).unwrap();
        let th = theta_coeffs(&m, None, Q::from_integer(25)).unwrap();
        let tb = tail_bound(&m, None);
        let samples = [Complex64::new(0.0, 2.0), Complex64::new(1.0, 2.0), Complex64::new(0.5, 1.5)];
        for el in [MetaplecticElement::s(), MetaplecticElement::t()] {
            let rep = modularity_residual(&th, &el, &samples, &tb).unwrap();
            assert!(rep.certified(1e-8), "{:?}", rep);
        }
    }

    #[test]
    fn harmonic_and_negative_thetas_are_modular() {
        let m = EvenLattice::new(vec![vec![2, 1], vec![1, 4]]).unwrap();
        let samples = [Complex64::new(0.0, 1.0), Complex64::new(0.3, 1.2), Complex64::new(-0.4, 2.0)];
        let mut nonzero = 0;
        for f in harmonic_basis_form(&positive_form(&m), 2) {
            let th = theta_coeffs(&m, Some(&f), Q::from_integer(30)).unwrap();
            nonzero += !th.coeffs.is_empty() as usize;
            let tb = tail_bound(&m, Some(&f));
            for el in [MetaplecticElement::s(), MetaplecticElement::t()] {
                let rep = modularity_residual(&th, &el, &samples, &tb).unwrap();
                assert!(rep.certified(1e-8), "{:?}", rep);
            }
        }
        // the reflection (x, y) -> (x + y, -y) kills the anti-invariant harmonic
        assert_eq!(nonzero, 1);
        let n = angle(-6).unwrap();
        let th = theta_coeffs_negative(&n, None, Q::from_integer(30)).unwrap();
        assert!(th.dual);
        let tb = tail_bound(&n, None);
        let rep = modularity_residual(&th, &MetaplecticElement::s(), &samples, &tb).unwrap();
        assert!(rep.certified(1e-8), "{:?}", rep);
    }

    #[test]
    fn split_theta() {
        let r = split_theta_decomposition_check(&angle(2).unwrap(), Q::from_integer(2), 0).unwrap();
        assert!(r.decomposition_holds && r.consistent, "{:?}", r);
        // hexagonal symmetry kills every degree-2 theta of A2, so the identity is 0 = 0 there
        let r = split_theta_decomposition_check(&a2(1).unwrap(), Q::from_integer(2), 2).unwrap();
        assert!(r.decomposition_holds && r.consistent && r.nonzero_slots == 0, "{:?}", r);
        let r = split_theta_decomposition_check(&a2(1).unwrap(), Q::from_integer(3), 6).unwrap();
        assert!(r.consistent && r.nonzero_slots >= 10, "{:?}", r);
        let m = EvenLattice::new(vec![vec![2, 1], vec![1, 4]]).unwrap();
        let r = split_theta_decomposition_check(&m, Q::from_integer(3), 2).unwrap();
        assert!(r.decomposition_holds && r.consistent && r.nonzero_slots >= 10, "{:?}", r);
    }

    #[test]
    fn genus_single_class() {
        let th = genus_theta_single(&angle(2).unwrap(), Q::from_integer(3)).unwrap();
        let direct = theta_coeffs(&angle(2).unwrap(), None, Q::from_integer(3)).unwrap();
        assert_eq!(th.to_text(), direct.to_text());
    }
}
