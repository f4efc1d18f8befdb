//! Truncated vector-valued q-expansions and numeric checks on them.

use crate::arith::{frac, sigma, Q};
use crate::cyclo::{from_token, to_token, Cyc};
use crate::discform::{self, Quotient};
use crate::discriminant::{DiscriminantForm, Elt};
use crate::error::{Error, Result};
use crate::mp::MetaplecticElement;
use crate::weil::WeilRep;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::f64::consts::PI;

#[derive(Clone, Debug)]
pub struct FourierExpansion {
    /// base form; the effective form negates q when `dual` is set
    pub g: DiscriminantForm,
    pub dual: bool,
    pub weight: Q,
    pub prec: Q,
    pub coeffs: BTreeMap<(Elt, Q), Cyc>,
}

pub fn fmt_q(x: Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational '{}'", s));
    match s.split_once('/') {
        Some((a, b)) => {
            let d: i64 = b.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Q::new(a.trim().parse().map_err(|_| bad())?, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl FourierExpansion {
    pub fn new(g: &DiscriminantForm, dual: bool, weight: Q, prec: Q) -> Result<FourierExpansion> {
        let sign = if dual { -g.sign8 } else { g.sign8 };
        let t = weight * 2 + Q::from_integer(sign);
        if !t.is_integer() || t.to_integer().rem_euclid(2) != 0 {
            return Err(Error::Precondition(format!("parity fails: 2k + sign = {}", t)));
        }
        if prec < Q::zero() {
            return Err(Error::Precondition("negative precision".into()));
        }
        Ok(FourierExpansion { g: g.clone(), dual, weight, prec, coeffs: BTreeMap::new() })
    }

    pub fn effective_form(&self) -> DiscriminantForm {
        if self.dual {
            self.g.dual()
        } else {
            self.g.clone()
        }
    }

    pub fn q_eff(&self, g: Elt) -> Q {
        let q = self.g.q(g);
        if self.dual {
            frac(-q)
        } else {
            q
        }
    }

    pub fn get(&self, g: Elt, m: Q) -> Cyc {
        self.coeffs.get(&(g, m)).cloned().unwrap_or_else(|| Cyc::zero(1))
    }

    pub fn set(&mut self, g: Elt, m: Q, c: Cyc) -> Result<()> {
        self.check_slot(g, m)?;
        if c.is_zero() {
            self.coeffs.remove(&(g, m));
        } else {
            self.coeffs.insert((g, m), c);
        }
        Ok(())
    }

    pub fn add_to(&mut self, g: Elt, m: Q, c: &Cyc) -> Result<()> {
        let v = &self.get(g, m) + c;
        self.set(g, m, v)
    }

    fn check_slot(&self, g: Elt, m: Q) -> Result<()> {
        if g >= self.g.order() {
            return Err(Error::Precondition("element out of range".into()));
        }
        if !frac(m - self.q_eff(g)).is_zero() {
            return Err(Error::Precondition(format!("exponent {} not congruent to q({}) mod 1", m, g)));
        }
        if m < Q::zero() || m > self.prec {
            return Err(Error::Precondition(format!("exponent {} outside [0, {}]", m, self.prec)));
        }
        Ok(())
    }

    pub fn check_invariants(&self) -> Result<()> {
        FourierExpansion::new(&self.g, self.dual, self.weight, self.prec)?;
        for &(g, m) in self.coeffs.keys() {
            self.check_slot(g, m)?;
        }
        Ok(())
    }

    pub fn is_cusp(&self) -> bool {
        !self.coeffs.iter().any(|(&(_, m), c)| m.is_zero() && !c.is_zero())
    }

    /// All admissible (γ, m) with 0 ≤ m ≤ P, sorted.
    pub fn slots(&self) -> Vec<(Elt, Q)> {
        let mut out = Vec::new();
        for g in self.g.elements() {
            let mut m = self.q_eff(g);
            while m <= self.prec {
                out.push((g, m));
                m += 1;
            }
        }
        out
    }

    pub fn same_space(&self, o: &FourierExpansion) -> bool {
        self.g.q_table() == o.g.q_table() && self.dual == o.dual && self.weight == o.weight
    }

    pub fn add(&self, o: &FourierExpansion) -> Result<FourierExpansion> {
        if !self.same_space(o) {
            return Err(Error::Precondition("expansions live in different spaces".into()));
        }
        let mut out = self.truncate(self.prec.min(o.prec));
        for (&(g, m), c) in &o.coeffs {
            if m <= out.prec {
                out.add_to(g, m, c)?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Cyc) -> FourierExpansion {
        let mut out = self.clone();
        out.coeffs = self.coeffs.iter().map(|(k, v)| (*k, v * c)).filter(|(_, v)| !v.is_zero()).collect();
        out
    }

    pub fn truncate(&self, p: Q) -> FourierExpansion {
        let mut out = self.clone();
        out.prec = p.min(self.prec);
        out.coeffs.retain(|&(_, m), _| m <= out.prec);
        out
    }

    /// Vector of coefficients at exponent m, indexed by G.
    pub fn component(&self, m: Q) -> Vec<Cyc> {
        self.g.elements().map(|g| self.get(g, m)).collect()
    }

    pub fn exponents(&self) -> Vec<Q> {
        let mut ms: Vec<Q> = self.slots().into_iter().map(|(_, m)| m).collect();
        ms.sort();
        ms.dedup();
        ms
    }

    /// Theta-lift ↑_H from an expansion over H^⊥/H to the ambient form.
    pub fn lift_up(&self, ambient: &DiscriminantForm, qt: &Quotient) -> Result<FourierExpansion> {
        if self.g.q_table() != qt.quotient.q_table() {
            return Err(Error::Precondition("expansion is not over the quotient".into()));
        }
        let mut out = FourierExpansion::new(ambient, self.dual, self.weight, self.prec)?;
        for m in self.exponents() {
            let v = discform::lift_up(ambient, qt, &self.component(m))?;
            for (g, c) in v.into_iter().enumerate() {
                if !c.is_zero() {
                    out.set(g, m, c)?;
                }
            }
        }
        Ok(out)
    }

    pub fn descend_down(&self, qt: &Quotient) -> Result<FourierExpansion> {
        let mut out = FourierExpansion::new(&qt.quotient, self.dual, self.weight, self.prec)?;
        for m in self.exponents() {
            let v = discform::descend_down(&self.g, qt, &self.component(m))?;
            for (g, c) in v.into_iter().enumerate() {
                if !c.is_zero() {
                    out.set(g, m, c)?;
                }
            }
        }
        Ok(out)
    }

    /// Product of two scalar-valued (trivial G) expansions.
    pub fn mul_scalar(&self, o: &FourierExpansion) -> Result<FourierExpansion> {
        if self.g.order() != 1 || o.g.order() != 1 {
            return Err(Error::Precondition("products need scalar-valued expansions".into()));
        }
        let prec = self.prec.min(o.prec);
        let mut out = FourierExpansion::new(&self.g, false, self.weight + o.weight, prec)?;
        for (&(_, m1), c1) in &self.coeffs {
            for (&(_, m2), c2) in &o.coeffs {
                if m1 + m2 <= prec {
                    out.add_to(0, m1 + m2, &(c1 * c2))?;
                }
            }
        }
        Ok(out)
    }

    /// Truncated evaluation f(τ) as a vector over G.
    pub fn eval(&self, tau: Complex64) -> Vec<Complex64> {
        let mut out = vec![Complex64::zero(); self.g.order()];
        for (&(g, m), c) in &self.coeffs {
            let mf = m.numer().to_f64().unwrap() / m.denom().to_f64().unwrap();
            out[g] += c.to_complex() * (Complex64::new(0.0, 2.0 * PI * mf) * tau).exp();
        }
        out
    }

    pub fn to_text(&self) -> String {
        let g = &self.g;
        let divs: Vec<String> = g.divisors.iter().map(|d| d.to_string()).collect();
        let qs: Vec<String> = g.qgen.iter().map(|&x| fmt_q(x)).collect();
        let k = g.divisors.len();
        let mut bs = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                bs.push(fmt_q(g.bil[i][j]));
            }
        }
        let mut s = format!(
            "group={} dual={} k={} prec={} q={} b={}\n",
            divs.join(","),
            self.dual as u8,
            fmt_q(self.weight),
            fmt_q(self.prec),
            qs.join(","),
            bs.join(",")
        );
        for (&(e, m), c) in &self.coeffs {
            let coords: Vec<String> = g.coords(e).iter().map(|x| x.to_string()).collect();
            s.push_str(&format!("{} ; {} ; {}\n", coords.join(","), fmt_q(m), to_token(c)));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<FourierExpansion> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty file".into()))?;
        let mut kv = BTreeMap::new();
        for tok in header.split_whitespace() {
            let (a, b) = tok.split_once('=').ok_or_else(|| Error::Parse(format!("bad header token '{}'", tok)))?;
            kv.insert(a, b);
        }
        let field = |k: &str| kv.get(k).copied().ok_or_else(|| Error::Parse(format!("missing header field {}", k)));
        let list = |s: &str| -> Vec<String> { s.split(',').filter(|x| !x.is_empty()).map(|x| x.to_string()).collect() };
        let divs: Vec<i64> = list(field("group")?).iter().map(|x| x.parse().map_err(|_| Error::Parse("bad divisor".into()))).collect::<Result<_>>()?;
        let qgen: Vec<Q> = list(field("q")?).iter().map(|x| parse_q(x)).collect::<Result<_>>()?;
        let bs: Vec<Q> = list(kv.get("b").copied().unwrap_or("")).iter().map(|x| parse_q(x)).collect::<Result<_>>()?;
        let k = divs.len();
        let mut off = vec![vec![Q::zero(); k]; k];
        let mut it = bs.into_iter();
        for i in 0..k {
            for j in i + 1..k {
                let b = it.next().ok_or_else(|| Error::Parse("missing bilinear values".into()))?;
                off[i][j] = b;
                off[j][i] = b;
            }
        }
        let g = DiscriminantForm::new(divs, qgen, off)?;
        let dual = field("dual")? == "1";
        let mut f = FourierExpansion::new(&g, dual, parse_q(field("k")?)?, parse_q(field("prec")?)?)?;
        for line in lines {
            let parts: Vec<&str> = line.split(';').map(|s| s.trim()).collect();
            if parts.len() != 3 {
                return Err(Error::Parse(format!("bad line '{}'", line)));
            }
            let coords: Vec<i64> = list(parts[0]).iter().map(|x| x.parse().map_err(|_| Error::Parse("bad coordinate".into()))).collect::<Result<_>>()?;
            if coords.len() != k {
                return Err(Error::Parse("coordinate length mismatch".into()));
            }
            let m = parse_q(parts[1])?;
            let c = parse_coeff(parts[2])?;
            f.set(g.index(&coords), m, c)?;
        }
        Ok(f)
    }
}

/// Exact `cyc:` token, or a float pair `re,im` that must round to an integer.
fn parse_coeff(s: &str) -> Result<Cyc> {
    if s.starts_with("cyc:") {
        return from_token(s).ok_or_else(|| Error::Parse(format!("bad coefficient '{}'", s)));
    }
    let (a, b) = s.split_once(',').ok_or_else(|| Error::Parse(format!("bad coefficient '{}'", s)))?;
    let re: f64 = a.trim().parse().map_err(|_| Error::Parse("bad float".into()))?;
    let im: f64 = b.trim().parse().map_err(|_| Error::Parse("bad float".into()))?;
    if im.abs() > 1e-9 || (re - re.round()).abs() > 1e-9 {
        return Err(Error::Parse("float coefficient is not an integer".into()));
    }
    Ok(Cyc::from_int(1, re.round() as i128))
}

pub fn big_to_q(x: &BigRational) -> Q {
    Q::new(x.numer().to_i64().expect("numerator fits"), x.denom().to_i64().expect("denominator fits"))
}

/// Certified bound on the omitted part of a theta-type expansion: vectors of a lattice whose
/// shortest nonzero dual vector has squared length `mu_sq`, weighted by |F(v)| ≤ fcoef ⟨v,v⟩^{h/2}.
#[derive(Clone, Debug)]
pub struct TailBound {
    pub rank: usize,
    pub mu_sq: f64,
    pub h: u32,
    pub fcoef: f64,
}

impl TailBound {
    /// Σ over vectors with ½⟨v,v⟩ > P of |F(v)| e^{−2π m y}, summed over all components.
    pub fn bound(&self, prec: Q, y: f64) -> f64 {
        let p = prec.numer().to_f64().unwrap() / prec.denom().to_f64().unwrap();
        let mu = self.mu_sq.sqrt();
        let mut total = 0.0;
        for n in 0..100_000 {
            let top = p + n as f64 + 1.0;
            let count = (2.0 * (2.0 * top).sqrt() / mu + 1.0).powi(self.rank as i32);
            let term = count * self.fcoef * (2.0 * top).powf(self.h as f64 / 2.0) * (-2.0 * PI * (p + n as f64) * y).exp();
            total += term;
            if term < 1e-40 * total.max(1e-300) || (n > 10 && term < 1e-300) {
                break;
            }
        }
        total
    }
}

#[derive(Clone, Debug)]
pub struct ResidualReport {
    pub max_residual: f64,
    pub tail_bound: f64,
    pub samples: Vec<(Complex64, f64)>,
}

impl ResidualReport {
    pub fn certified(&self, eps: f64) -> bool {
        self.max_residual + self.tail_bound < eps
    }
}

pub fn cmat_to_complex(m: &crate::weil::CMat) -> Vec<Vec<Complex64>> {
    m.iter().map(|r| r.iter().map(|c| c.to_complex()).collect()).collect()
}

/// max over samples of |f|[g̃](τ) − f(τ)| with (f|[g̃])(τ) = φ(τ)^{−2k} ρ(g̃)⁻¹ f(gτ).
pub fn modularity_residual(f: &FourierExpansion, el: &MetaplecticElement, samples: &[Complex64], tail: &TailBound) -> Result<ResidualReport> {
    if el.det() != 1 {
        return Err(Error::Precondition("element must lie in Mp2(Z)".into()));
    }
    if let Some(t) = samples.iter().find(|t| t.im < 1.0) {
        return Err(Error::Precondition(format!("sample {} too low for the tail bound", t)));
    }
    let w = WeilRep::new(&f.effective_form());
    let rho = cmat_to_complex(&w.rho(el)?);
    let two_k = (f.weight * 2).to_integer() as i32;
    let mut max = 0.0f64;
    let mut tb = 0.0f64;
    let mut per = Vec::new();
    for &tau in samples {
        let gt = el.act(tau);
        let phi = el.phi(tau);
        let fac = phi.powi(-two_k);
        let fg = f.eval(gt);
        let ft = f.eval(tau);
        let mut r = 0.0f64;
        for d in 0..ft.len() {
            // ρ⁻¹ = ρ^* since ρ is unitary
            let s: Complex64 = (0..fg.len()).map(|g| rho[g][d].conj() * fg[g]).sum();
            r = r.max((fac * s - ft[d]).norm());
        }
        max = max.max(r);
        tb = tb.max(fac.norm() * tail.bound(f.prec, gt.im) + tail.bound(f.prec, tau.im));
        per.push((tau, r));
    }
    Ok(ResidualReport { max_residual: max, tail_bound: tb, samples: per })
}

#[derive(Clone, Debug)]
pub struct LipschitzReport {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub diff: f64,
    pub lhs_tail: f64,
    pub rhs_tail: f64,
}

/// (c + βt)^{−k} summed over t = 0, 1, 2, ... by Euler–Maclaurin; returns (sum, size of the first omitted term).
fn em_tail(c: Complex64, beta: f64, k: f64) -> (Complex64, f64) {
    let pw = |e: f64| (c.ln() * e).exp();
    let integral = pw(1.0 - k) / (beta * (k - 1.0));
    let mut s = integral + pw(-k) * 0.5;
    // B_{2p}/(2p)! for p = 1, 2, 3, 4
    let bern = [1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0];
    let mut deriv_coeff = 1.0;
    let mut j = 0;
    let mut last = 0.0;
    for (p, b) in bern.iter().enumerate() {
        let order = 2 * p + 1;
        while j < order {
            deriv_coeff *= (-k - j as f64) * beta;
            j += 1;
        }
        let term = pw(-k - order as f64) * (b * deriv_coeff);
        if p == bern.len() - 1 {
            last = term.norm();
        } else {
            s -= term;
        }
    }
    (s, last)
}

fn e(x: f64) -> Complex64 {
    Complex64::new(0.0, 2.0 * PI * x).exp()
}

/// Both sides of Σ_n e(nx)(z+n)^{−k} = ((−2πi)^k/Γ(k)) Σ_{r∈Z−x, r>0} r^{k−1} e(rz).
pub fn lipschitz_check(k: f64, x: Q, z: Complex64, n_terms: u64) -> Result<LipschitzReport> {
    if k <= 1.0 {
        return Err(Error::Precondition("need Re(k) > 1".into()));
    }
    if z.im <= 0.0 {
        return Err(Error::Precondition("z must lie in the upper half plane".into()));
    }
    let xf = x.numer().to_f64().unwrap() / x.denom().to_f64().unwrap();
    let pw = |w: Complex64, e: f64| (w.ln() * e).exp();
    let n = n_terms as i64;
    let mut lhs = Complex64::zero();
    for j in -n..=n {
        lhs += e(j as f64 * xf) * pw(z + j as f64, -k);
    }
    // tails |n| > N grouped by residue modulo the denominator of x
    let b = *x.denom();
    let mut lhs_tail = 0.0;
    for s in 1..=b {
        let (tp, ep) = em_tail(z + (n + s) as f64, b as f64, k);
        let (tm, em) = em_tail(z - (n + s) as f64, -(b as f64), k);
        let xs = frac(x * (n + s));
        let xsf = xs.numer().to_f64().unwrap() / xs.denom().to_f64().unwrap();
        lhs += e(xsf) * tp + e(-xsf) * tm;
        lhs_tail += ep + em;
    }
    let pref = (Complex64::new((2.0 * PI).ln(), -PI / 2.0) * k).exp() / statrs::function::gamma::gamma(k);
    let r0 = (x.floor() + 1 - x).numer().to_f64().unwrap() / (x.floor() + 1 - x).denom().to_f64().unwrap();
    let mut rhs = Complex64::zero();
    let mut last = 0.0;
    for j in 0..=n {
        let r = r0 + j as f64;
        let t = r.powf(k - 1.0) * e(r * z.re) * (-2.0 * PI * r * z.im).exp();
        rhs += t;
        last = t.norm();
        if last < 1e-300 {
            break;
        }
    }
    let q = (-2.0 * PI * z.im).exp();
    let rhs_tail = pref.norm() * last * q / (1.0 - q) * 2.0;
    let rhs = rhs * pref;
    Ok(LipschitzReport { lhs, rhs, diff: (lhs - rhs).norm(), lhs_tail, rhs_tail })
}

pub fn bernoulli(n: usize) -> BigRational {
    let mut b = vec![BigRational::one()];
    for m in 1..=n {
        let mut s = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            s += BigRational::from_integer(BigInt::from(crate::arith::binomial(m as i64 + 1, j as i64))) * bj;
        }
        b.push(-s / BigRational::from_integer(BigInt::from(m as i64 + 1)));
    }
    b[n].clone()
}

/// Coefficients of the classical level-one Eisenstein series E_k up to q^n.
pub fn eisenstein_level_one(k: u32, n: u64) -> Vec<BigRational> {
    let c = BigRational::from_integer(BigInt::from(-2 * k as i64)) / bernoulli(k as usize);
    let mut out = vec![BigRational::one()];
    for m in 1..=n {
        out.push(&c * BigRational::from_integer(BigInt::from(sigma(k - 1, m))));
    }
    out
}

/// E_k as a scalar FourierExpansion up to precision n.
pub fn eisenstein_expansion(k: u32, n: u64) -> Result<FourierExpansion> {
    let mut f = FourierExpansion::new(&DiscriminantForm::trivial(), false, Q::from_integer(k as i64), Q::from_integer(n as i64))?;
    for (m, c) in eisenstein_level_one(k, n).into_iter().enumerate() {
        f.set(0, Q::from_integer(m as i64), Cyc::from_q(1, big_to_q(&c)))?;
    }
    Ok(f)
}

/// Genus representative for the genus theta average.
pub struct GenusRep {
    pub theta: FourierExpansion,
    pub aut_order: u64,
    /// isomorphisms G_M → G_L as tables indexed by G_M
    pub isos: Vec<Vec<Elt>>,
}

/// (Σ_L |Aut L|⁻¹ Σ_σ σ*Θ_L) / (|Aut(G_M)| Σ_L |Aut L|⁻¹).
pub fn genus_theta(g_m: &DiscriminantForm, reps: &[GenusRep], aut_gm: usize) -> Result<FourierExpansion> {
    let first = reps.first().ok_or_else(|| Error::Precondition("no genus representatives".into()))?;
    let prec = reps.iter().map(|r| r.theta.prec).min().unwrap();
    let mut out = FourierExpansion::new(g_m, first.theta.dual, first.theta.weight, prec)?;
    let mut wsum = Q::zero();
    for rep in reps {
        if rep.isos.is_empty() || rep.theta.weight != first.theta.weight {
            return Err(Error::Precondition("representative has a mismatched discriminant form".into()));
        }
        let w = Q::new(1, rep.aut_order as i64);
        wsum += w;
        for sigma in &rep.isos {
            if sigma.len() != g_m.order() || g_m.elements().any(|d| g_m.q(d) != rep.theta.g.q(sigma[d])) {
                return Err(Error::Precondition("isomorphism does not preserve q".into()));
            }
            for d in g_m.elements() {
                let mut m = out.q_eff(d);
                while m <= prec {
                    let c = rep.theta.get(sigma[d], m);
                    if !c.is_zero() {
                        out.add_to(d, m, &c.scale(w))?;
                    }
                    m += 1;
                }
            }
        }
    }
    let norm = Q::one() / (wsum * Q::from_integer(aut_gm as i64));
    Ok(out.scale(&Cyc::from_q(1, norm)))
}

#[derive(Clone, Debug)]
pub struct EisensteinReport {
    pub constant_term_one: bool,
    /// Some(agreement) when an independent oracle exists (trivial G)
    pub oracle_agrees: Option<bool>,
    pub expansion: FourierExpansion,
}

/// Compares the genus theta of a single-class genus with the Eisenstein series.
pub fn eisenstein_identity_check(rank: usize, genus: &FourierExpansion) -> Result<EisensteinReport> {
    if rank <= 4 {
        return Err(Error::Precondition("needs r/2 > 2".into()));
    }
    let constant_term_one = genus.get(0, Q::zero()).is_one();
    let oracle_agrees = if genus.g.order() == 1 && rank % 2 == 0 {
        let n = genus.prec.to_integer() as u64;
        let e = eisenstein_level_one(rank as u32 / 2, n);
        Some((0..=n).all(|m| genus.get(0, Q::from_integer(m as i64)).as_rational().map(|x| BigRational::new(BigInt::from(*x.numer()), BigInt::from(*x.denom()))) == Some(e[m as usize].clone())))
    } else {
        None
    };
    Ok(EisensteinReport { constant_term_one, oracle_agrees, expansion: genus.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(4), BigRational::new(BigInt::from(-1), BigInt::from(30)));
        assert_eq!(eisenstein_level_one(4, 3)[1], BigRational::from_integer(BigInt::from(240)));
        assert_eq!(eisenstein_level_one(4, 3)[2], BigRational::from_integer(BigInt::from(2160)));
    }

    #[test]
    fn lipschitz_examples() {
        let r = lipschitz_check(2.0, Q::zero(), Complex64::new(0.0, 2.0), 10_000).unwrap();
        assert!(r.diff < 1e-8, "{:?}", r);
        let r = lipschitz_check(2.5, Q::new(1, 4), Complex64::new(1.0 / 3.0, 1.0), 10_000).unwrap();
        assert!(r.diff < 1e-6, "{:?}", r);
        let r2 = lipschitz_check(2.5, Q::new(5, 4), Complex64::new(1.0 / 3.0, 1.0), 10_000).unwrap();
        assert!((r.lhs - r2.lhs).norm() < 1e-9 && (r.rhs - r2.rhs).norm() < 1e-9);
        assert!(lipschitz_check(1.0, Q::zero(), Complex64::new(0.0, 1.0), 10).is_err());
    }

    #[test]
    fn parity_and_slots() {
        let g = DiscriminantForm::cyclic(2, Q::new(1, 4)).unwrap();
        assert!(FourierExpansion::new(&g, false, Q::new(1, 2), Q::from_integer(1)).is_ok());
        assert!(FourierExpansion::new(&g, false, Q::from_integer(1), Q::from_integer(1)).is_err());
        let mut f = FourierExpansion::new(&g, false, Q::new(1, 2), Q::from_integer(1)).unwrap();
        assert!(f.set(1, Q::new(1, 2), Cyc::one(1)).is_err());
        f.set(1, Q::new(1, 4), Cyc::from_int(1, 2)).unwrap();
        let back = FourierExpansion::from_text(&f.to_text()).unwrap();
        assert_eq!(back.to_text(), f.to_text());
    }
}
