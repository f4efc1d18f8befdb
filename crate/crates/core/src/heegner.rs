//! Heegner combinations, coefficient functionals, cusp dimensions and the obstruction span.

use crate::arith::{frac, jacobi, lcm, Q};
use crate::cyclo::Cyc;
use crate::discform::{orthogonal_group, span};
use crate::discriminant::{DiscriminantForm, Elt};
use crate::enumerate::par_fold_short;
use crate::error::{Error, Result};
use crate::lattice::EvenLattice;
use crate::matrix::{block_diag, det, inverse_q, mat_mul, rank_rational, transpose, IMat, RMat};
use crate::qexp::FourierExpansion;
use crate::theta::dual_enum;
use crate::weil::{cmat_identity, cmat_mul, cmat_scale, cmat_trace, CMat, WeilRep};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use std::collections::{BTreeMap, HashMap};

#[derive(Clone, Debug, PartialEq)]
pub struct RankFormulaTerms {
    pub g: i64,
    pub leading: Q,
    /// −¼ ((2g−2)/(2g−3)) (g/2)
    pub second: Q,
    /// −⅙ ((g−1)/(4g−5))
    pub third: Q,
    /// −⅙ (−1)^{−((g−1)/3)}
    pub fourth: Q,
    pub frac_sum: Q,
    pub integral_count: i64,
    pub total: i64,
}

/// (g/2) read as the parity indicator: 1 for odd g, 0 for even g.
fn symbol_over_two(g: i64) -> i64 {
    g.rem_euclid(2)
}

/// The sign (−1)^{−((g−1)/3)}, read as +1 exactly when g ≡ 2 mod 3.
fn cube_sign(g: i64) -> i64 {
    if g.rem_euclid(3) == 2 {
        1
    } else {
        -1
    }
}

pub fn rank_formula_terms(g: i64) -> Result<RankFormulaTerms> {
    if g < 2 {
        return Err(Error::Precondition("rank formula needs g >= 2".into()));
    }
    let leading = Q::new(31 * g + 24, 24);
    let second = Q::new(-jacobi(2 * g - 2, 2 * g - 3) * symbol_over_two(g), 4);
    let third = Q::new(-jacobi(g - 1, 4 * g - 5), 6);
    let fourth = Q::new(-cube_sign(g), 6);
    let den = 4 * g - 4;
    let mut frac_sum = Q::zero();
    let mut integral_count = 0;
    for k in 0..g {
        let x = Q::new(k * k, den);
        frac_sum += frac(x);
        if x.is_integer() {
            integral_count += 1;
        }
    }
    let t = leading + second + third + fourth - frac_sum - Q::from_integer(integral_count);
    if !t.is_integer() {
        return Err(Error::Undecided(format!("rank formula is not integral at g = {}: {}", g, t)));
    }
    Ok(RankFormulaTerms { g, leading, second, third, fourth, frac_sum, integral_count, total: t.to_integer() })
}

pub fn rank_formula(g: i64) -> Result<i64> {
    Ok(rank_formula_terms(g)?.total)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DimensionReport {
    pub modular: i64,
    pub cusp: i64,
    /// dimension of the ρ(Z)-eigenspace carrying weight-k forms
    pub invariant_dim: i64,
}

fn lift_mat(m: &CMat, n: u32) -> CMat {
    m.iter().map(|r| r.iter().map(|c| c.lift(n)).collect()).collect()
}

fn rational_trace(m: &CMat) -> Result<Q> {
    let t = cmat_trace(m);
    t.as_rational().ok_or_else(|| Error::Undecided("trace is not rational".into()))
}

/// Dimensions of M_k(ρ) and S_k(ρ) (ρ* when `dual`) from the eigenvalue multiplicities of ρ(S), ρ(ST), ρ(T).
pub fn dimensions(k: Q, g: &DiscriminantForm, dual: bool) -> Result<DimensionReport> {
    if k < Q::new(5, 2) {
        return Err(Error::Precondition(format!("dimension formula needs k >= 5/2, got {}", k)));
    }
    let gp = if dual { g.dual() } else { g.clone() };
    let w = WeilRep::new(&gp);
    let n = lcm(w.cond as i64, 24) as u32;
    let s = lift_mat(&w.s(), n);
    let t = lift_mat(&w.t(), n);
    let z = cmat_mul(&s, &s);
    let dim = w.dim();
    let id = cmat_identity(dim, n);
    // projector onto {ρ(Z)v = e(−k/2)v}
    let zs = cmat_scale(&z, &Cyc::e(n, k / 2));
    let half = Cyc::from_q(n, Q::new(1, 2));
    let pi: CMat = (0..dim).map(|i| (0..dim).map(|j| &(&id[i][j] + &zs[i][j]) * &half).collect()).collect();
    let d = rational_trace(&pi)?;
    if !d.is_integer() {
        return Err(Error::Undecided("fractional eigenspace dimension".into()));
    }
    let d = d.to_integer();
    let es = cmat_scale(&s, &Cyc::e(n, k / 4));
    let ts = rational_trace(&cmat_mul(&es, &pi))?;
    let n_minus = (Q::from_integer(d) - ts) / 2;
    let b = cmat_scale(&cmat_mul(&s, &t), &Cyc::e(n, k / 6));
    let tb = cmat_trace(&cmat_mul(&b, &pi));
    let c = tb.to_complex();
    let n12 = (2.0 * c.im / 3f64.sqrt()).round() as i64;
    let n0 = ((2.0 * c.re + d as f64) / 3.0).round() as i64;
    let n1 = (d - n0 + n12) / 2;
    let n2 = d - n0 - n1;
    let omega = Cyc::e(n, Q::new(1, 3));
    let check = &(&Cyc::from_int(n, n0 as i128) + &omega.scale_int(n1 as i128)) + &(&omega * &omega).scale_int(n2 as i128);
    if check != tb || n1 < 0 || n2 < 0 || n0 < 0 {
        return Err(Error::Undecided("could not split the eigenvalues of ρ(ST)".into()));
    }
    let mut alpha_t = Q::zero();
    let mut null_mult = Q::zero();
    for e in gp.elements() {
        let mult = pi[e][e].as_rational().ok_or_else(|| Error::Undecided("irrational projector diagonal".into()))?;
        let beta = frac(gp.q(e));
        alpha_t += beta * mult;
        if beta.is_zero() {
            null_mult += mult;
        }
    }
    let kd = k * d;
    let m = Q::from_integer(d) + kd / 12 - n_minus / 2 - Q::new(2 * n1 + n2, 3) - alpha_t;
    if !m.is_integer() || !null_mult.is_integer() {
        return Err(Error::Undecided(format!("non-integral dimension {}", m)));
    }
    let modular = m.to_integer();
    let cusp = modular - null_mult.to_integer();
    if cusp < 0 {
        return Err(Error::Undecided(format!("negative cusp dimension {}", cusp)));
    }
    Ok(DimensionReport { modular, cusp, invariant_dim: d })
}

pub fn dim_cusp(k: Q, g: &DiscriminantForm, dual: bool) -> Result<usize> {
    Ok(dimensions(k, g, dual)?.cusp as usize)
}

/// Formal combination Σ a_{m,γ} H_{m,γ}; the key (0, 0) stands for −λ.
#[derive(Clone, Debug)]
pub struct HeegnerCombo {
    pub ambient: EvenLattice,
    pub g: DiscriminantForm,
    pub terms: BTreeMap<(Q, Elt), Q>,
}

impl HeegnerCombo {
    pub fn new(ambient: &EvenLattice) -> Result<HeegnerCombo> {
        let (pos, neg, _) = crate::matrix::inertia(&ambient.gram);
        if pos != 2 || neg + 2 != ambient.rank() {
            return Err(Error::InvalidLattice("ambient must have signature (2, n)".into()));
        }
        Ok(HeegnerCombo { ambient: ambient.clone(), g: ambient.discriminant(), terms: BTreeMap::new() })
    }

    /// c · H_{0,0} = −c λ.
    pub fn hodge(ambient: &EvenLattice, c: Q) -> Result<HeegnerCombo> {
        let mut h = HeegnerCombo::new(ambient)?;
        h.add_term(Q::zero(), 0, c)?;
        Ok(h)
    }

    pub fn add_term(&mut self, m: Q, gamma: Elt, a: Q) -> Result<()> {
        if gamma >= self.g.order() {
            return Err(Error::Precondition("coset out of range".into()));
        }
        if m > Q::zero() || !frac(m - self.g.q(gamma)).is_zero() {
            return Err(Error::Precondition(format!("H_({}, {}) needs m <= 0 and m = q(γ) mod 1", m, gamma)));
        }
        let e = self.terms.entry((m, gamma)).or_insert_with(Q::zero);
        *e += a;
        if e.is_zero() {
            self.terms.remove(&(m, gamma));
        }
        Ok(())
    }

    pub fn weight(&self) -> Q {
        Q::new(self.ambient.rank() as i64, 2)
    }

    pub fn max_order(&self) -> Q {
        self.terms.keys().map(|(m, _)| -*m).max().unwrap_or_else(Q::zero)
    }
}

fn check_pairing(h: &HeegnerCombo, f: &FourierExpansion) -> Result<()> {
    if !f.dual || f.weight != h.weight() || f.g.q_table() != h.g.q_table() {
        return Err(Error::Precondition("form must be of dual type and weight (2+n)/2 on the ambient group".into()));
    }
    if f.prec < h.max_order() {
        return Err(Error::Precondition(format!("precision {} below the combination order {}", f.prec, h.max_order())));
    }
    Ok(())
}

/// Σ a_{m,γ} c_{−m,γ}(f).
pub fn coefficient_pairing(h: &HeegnerCombo, f: &FourierExpansion) -> Result<Cyc> {
    check_pairing(h, f)?;
    let mut s = Cyc::zero(1);
    for (&(m, g), &a) in &h.terms {
        s = &s + &f.get(g, -m).scale(a);
    }
    Ok(s)
}

#[derive(Clone, Debug, PartialEq)]
pub enum HodgeVerdict {
    ProportionalToHodge,
    NotProportional { witness: usize },
}

#[derive(Clone, Debug)]
pub struct HodgeReport {
    pub verdict: HodgeVerdict,
    /// rows: terms of H in key order; columns: supplied cusp forms
    pub matrix: Vec<Vec<Cyc>>,
    pub pairings: Vec<Cyc>,
}

pub fn hodge_criterion(h: &HeegnerCombo, cusp_span: &[FourierExpansion]) -> Result<HodgeReport> {
    for f in cusp_span {
        check_pairing(h, f)?;
    }
    let matrix: Vec<Vec<Cyc>> = h.terms.iter().map(|(&(m, g), &a)| cusp_span.iter().map(|f| f.get(g, -m).scale(a)).collect()).collect();
    let pairings: Vec<Cyc> = (0..cusp_span.len()).map(|j| matrix.iter().fold(Cyc::zero(1), |s, r| &s + &r[j])).collect();
    let verdict = match pairings.iter().position(|c| !c.is_zero()) {
        None => HodgeVerdict::ProportionalToHodge,
        Some(witness) => HodgeVerdict::NotProportional { witness },
    };
    Ok(HodgeReport { verdict, matrix, pairings })
}

/// M = U(N₁) ⊕ U(N₂) ⊕ L exhibited by a unimodular change of basis (columns are the new basis).
#[derive(Clone, Debug)]
pub struct AdmissibleDecomposition {
    pub ambient: EvenLattice,
    pub change_of_basis: IMat,
    pub n1: i64,
    pub n2: i64,
    pub l: EvenLattice,
}

fn hyperbolic(n: i64) -> IMat {
    vec![vec![0, n], vec![n, 0]]
}

impl AdmissibleDecomposition {
    pub fn new(ambient: &EvenLattice, change_of_basis: IMat, n1: i64, n2: i64) -> Result<AdmissibleDecomposition> {
        let r = ambient.rank();
        if change_of_basis.len() != r || change_of_basis.iter().any(|row| row.len() != r) || r < 4 {
            return Err(Error::Precondition("change of basis has the wrong shape".into()));
        }
        if det(&change_of_basis).abs() != 1 {
            return Err(Error::Precondition("change of basis is not in GL(Z)".into()));
        }
        if n1 == 0 || n2 == 0 {
            return Err(Error::Precondition("N1 and N2 must be nonzero".into()));
        }
        let b = mat_mul(&transpose(&change_of_basis), &mat_mul(&ambient.gram, &change_of_basis));
        let lg: IMat = (4..r).map(|i| b[i][4..].to_vec()).collect();
        let expect = block_diag(&[hyperbolic(n1), hyperbolic(n2), lg.clone()]);
        if b != expect {
            return Err(Error::Precondition("change of basis does not produce U(N1) + U(N2) + L".into()));
        }
        let l = EvenLattice::new(lg)?;
        if !l.is_negative_definite() {
            return Err(Error::Precondition("L must be negative definite".into()));
        }
        Ok(AdmissibleDecomposition { ambient: ambient.clone(), change_of_basis, n1, n2, l })
    }

    /// Uses the first two hyperbolic diagonal blocks of the given Gram matrix.
    pub fn block_split(ambient: &EvenLattice) -> Result<AdmissibleDecomposition> {
        let g = &ambient.gram;
        let r = g.len();
        let isolated = |i: usize, j: usize| (0..r).all(|c| c == i || c == j || (g[i][c] == 0 && g[j][c] == 0));
        let mut pairs = Vec::new();
        let mut i = 0;
        while i + 1 < r && pairs.len() < 2 {
            if g[i][i] == 0 && g[i + 1][i + 1] == 0 && g[i][i + 1] != 0 && isolated(i, i + 1) {
                pairs.push(i);
                i += 2;
            } else {
                i += 1;
            }
        }
        if pairs.len() < 2 {
            return Err(Error::Precondition("no pair of hyperbolic blocks on the diagonal".into()));
        }
        let mut order: Vec<usize> = vec![pairs[0], pairs[0] + 1, pairs[1], pairs[1] + 1];
        let rest: Vec<usize> = (0..r).filter(|c| !order.contains(c)).collect();
        order.extend(rest);
        let mut c = vec![vec![0; r]; r];
        for (new, &old) in order.iter().enumerate() {
            c[old][new] = 1;
        }
        AdmissibleDecomposition::new(ambient, c, g[pairs[0]][pairs[0] + 1], g[pairs[1]][pairs[1] + 1])
    }

    /// C^{−T}: maps dual coordinates in the new basis to dual coordinates in the old one.
    fn dual_transfer(&self) -> IMat {
        let inv = inverse_q(&self.change_of_basis).expect("unimodular");
        let r = inv.len();
        (0..r).map(|i| (0..r).map(|j| inv[j][i].to_integer().to_i64().unwrap()).collect()).collect()
    }

    fn to_ambient_dual(&self, y_new: &[i64]) -> Vec<i64> {
        crate::matrix::mat_vec(&self.dual_transfer(), y_new)
    }

    /// H_J = ⟨e₁/N₁, e₂/N₂⟩ as elements of G_M.
    pub fn isotropic_subgroup(&self, gm: &DiscriminantForm) -> Vec<Elt> {
        let r = self.ambient.rank();
        let gens: Vec<Elt> = [1, 3]
            .iter()
            .map(|&k| {
                let mut y = vec![0; r];
                y[k] = 1;
                gm.from_dual_coords(&self.to_ambient_dual(&y))
            })
            .collect();
        span(gm, &gens)
    }

    /// The embedding G_L → H_J^⊥/H_J ⊂ G_M, as a table of section elements.
    pub fn embedding(&self, gm: &DiscriminantForm) -> (DiscriminantForm, Vec<Elt>) {
        let gl = self.l.discriminant();
        let ld = gl.lattice.clone().expect("lattice data");
        let r = self.ambient.rank();
        let gens: Vec<Elt> = ld
            .gen_lifts
            .iter()
            .map(|x| {
                let mut y = vec![0; r];
                for i in 0..self.l.rank() {
                    let v = (0..self.l.rank()).fold(BigRational::zero(), |a, j| a + &x[j] * BigRational::from_integer(BigInt::from(self.l.gram[i][j])));
                    y[4 + i] = v.to_integer().to_i64().unwrap();
                }
                gm.from_dual_coords(&self.to_ambient_dual(&y))
            })
            .collect();
        let table = gl.elements().map(|e| gl.coords(e).iter().zip(&gens).fold(0, |a, (&c, &g)| gm.add(a, gm.mul(c, g)))).collect();
        (gl, table)
    }
}

/// Second moments Σ y yᵀ (upper triangle, dual coordinates of L(−1)) per (γ ∈ G_L, 2d·norm/2).
struct Moments {
    r: usize,
    d: i64,
    q: IMat,
    data: HashMap<(Elt, i64), Vec<i128>>,
}

fn tri_index(r: usize, i: usize, j: usize) -> usize {
    i * r - i * (i + 1) / 2 + j
}

fn moments(l: &EvenLattice, gl: &DiscriminantForm, prec: Q) -> Moments {
    let q: IMat = l.gram.iter().map(|row| row.iter().map(|x| -x).collect()).collect();
    let r = q.len();
    let de = dual_enum(&q);
    let bound = (prec * 2 * de.d).floor().to_integer();
    let len = r * (r + 1) / 2;
    let data = par_fold_short(
        &de.a,
        bound,
        HashMap::new,
        |acc: &mut HashMap<(Elt, i64), Vec<i128>>, y: &[i64], n: i64| {
            let e = gl.from_dual_coords(y);
            let v = acc.entry((e, n)).or_insert_with(|| vec![0; len]);
            let mut k = 0;
            for i in 0..r {
                let yi = y[i] as i128;
                for j in i..r {
                    v[k] += yi * y[j] as i128;
                    k += 1;
                }
            }
        },
        |mut a, b| {
            for (key, v) in b {
                match a.get_mut(&key) {
                    Some(w) => w.iter_mut().zip(v).for_each(|(x, y)| *x += y),
                    None => {
                        a.insert(key, v);
                    }
                }
            }
            a
        },
    );
    Moments { r, d: de.d, q, data }
}

/// Integral basis of {B symmetric : tr(QB) = 0}, each as an upper-triangle pairing vector w with tr(BS) = w · S_tri.
fn traceless_basis(q: &IMat) -> Vec<Vec<i128>> {
    let r = q.len();
    let len = r * (r + 1) / 2;
    let q00 = q[0][0] as i128;
    let mut out = Vec::new();
    for i in 0..r {
        for j in i..r {
            if i == 0 && j == 0 {
                continue;
            }
            let mut w = vec![0i128; len];
            if i == j {
                w[tri_index(r, i, i)] = q00;
                w[0] = -(q[i][i] as i128);
            } else {
                // B = Q00 (E_ij + E_ji) − 2 Q_ij E_00; tr(BS) counts the off-diagonal entry twice
                w[tri_index(r, i, j)] = 2 * q00;
                w[0] = -2 * q[i][j] as i128;
            }
            out.push(w);
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct ObstructionSpan {
    pub basis: Vec<FourierExpansion>,
    pub rank: usize,
    /// rank at each precision examined, ascending
    pub ranks: Vec<(Q, usize)>,
    pub stabilized: bool,
    pub vectors_enumerated: u64,
}

/// One row per (decomposition, σ, F): coefficients of ↑_{H_J}(σ*Θ_{L(−1),F}) over the ambient slots.
struct LiftRows {
    slots: Vec<(Elt, i64, i64)>,
    rows: Vec<Vec<i128>>,
}

fn lift_rows(m: &EvenLattice, decomps: &[AdmissibleDecomposition], prec: Q, count: &mut u64) -> Result<LiftRows> {
    let gm = m.discriminant();
    let mut per: Vec<(Moments, Vec<Elt>, Vec<Elt>, Vec<Vec<Elt>>)> = Vec::new();
    for dc in decomps {
        if dc.ambient.gram != m.gram {
            return Err(Error::Precondition("decomposition belongs to another lattice".into()));
        }
        let h = dc.isotropic_subgroup(&gm);
        let (gl, iota) = dc.embedding(&gm);
        let sigmas = orthogonal_group(&gl, 4096)?;
        let mo = moments(&dc.l, &gl, prec);
        *count += mo.data.len() as u64;
        per.push((mo, h, iota, sigmas));
    }
    // slot key: (δ ∈ G_M, numerator, denominator) of the exponent
    let mut slot_set: BTreeMap<(Q, Elt), ()> = BTreeMap::new();
    for (mo, h, iota, _) in &per {
        for &(e, n) in mo.data.keys() {
            for &x in h {
                slot_set.insert((Q::new(n, 2 * mo.d), gm.add(iota[e], x)), ());
            }
        }
    }
    let slots: Vec<(Elt, i64, i64)> = slot_set.keys().map(|(m, e)| (*e, *m.numer(), *m.denom())).collect();
    let index: HashMap<(Elt, Q), usize> = slots.iter().enumerate().map(|(i, &(e, a, b))| ((e, Q::new(a, b)), i)).collect();
    let mut rows = Vec::new();
    for (mo, h, iota, sigmas) in &per {
        let basis = traceless_basis(&mo.q);
        let _ = mo.r;
        for sigma in sigmas {
            for w in &basis {
                let mut row = vec![0i128; slots.len()];
                for (&(e, n), s) in &mo.data {
                    let v: i128 = w.iter().zip(s).map(|(a, b)| a * b).sum();
                    if v == 0 {
                        continue;
                    }
                    let ex = Q::new(n, 2 * mo.d);
                    for &x in h {
                        row[index[&(gm.add(iota[sigma[e]], x), ex)]] += v;
                    }
                }
                rows.push(row);
            }
        }
    }
    Ok(LiftRows { slots, rows })
}

fn rows_rank(rows: &[Vec<i128>], keep: &[usize]) -> usize {
    let mut m: RMat = rows
        .iter()
        .filter(|r| keep.iter().any(|&i| r[i] != 0))
        .map(|r| keep.iter().map(|&i| BigRational::from_integer(BigInt::from(r[i]))).collect())
        .collect();
    rank_rational(&mut m)
}

/// Span of isotropically lifted degree-2 theta series, with ranks at P, P+1, …, P+steps.
pub fn obstruction_span_steps(m: &EvenLattice, decomps: &[AdmissibleDecomposition], p: Q, steps: u32) -> Result<ObstructionSpan> {
    let (pos, neg, _) = crate::matrix::inertia(&m.gram);
    if pos != 2 || neg + 2 != m.rank() {
        return Err(Error::InvalidLattice("ambient must have signature (2, n)".into()));
    }
    let top = p + Q::from_integer(steps as i64);
    let mut count = 0;
    let lr = lift_rows(m, decomps, top, &mut count)?;
    let mut ranks = Vec::new();
    for s in 0..=steps {
        let pp = p + Q::from_integer(s as i64);
        let keep: Vec<usize> = (0..lr.slots.len()).filter(|&i| Q::new(lr.slots[i].1, lr.slots[i].2) <= pp).collect();
        ranks.push((pp, rows_rank(&lr.rows, &keep)));
    }
    let rank = ranks.last().map_or(0, |r| r.1);
    let stabilized = ranks.iter().all(|r| r.1 == rank);
    // basis: greedily independent rows at the top precision
    let gm = m.discriminant();
    let weight = Q::new(m.rank() as i64, 2);
    let mut basis = Vec::new();
    let mut chosen: Vec<Vec<i128>> = Vec::new();
    for row in &lr.rows {
        if basis.len() == rank {
            break;
        }
        let mut trial = chosen.clone();
        trial.push(row.clone());
        let all: Vec<usize> = (0..lr.slots.len()).collect();
        if rows_rank(&trial, &all) == trial.len() {
            chosen = trial;
            let mut f = FourierExpansion::new(&gm, true, weight, top)?;
            for (i, &(e, a, b)) in lr.slots.iter().enumerate() {
                if row[i] != 0 {
                    f.set(e, Q::new(a, b), Cyc::from_int(1, row[i]))?;
                }
            }
            basis.push(f);
        }
    }
    Ok(ObstructionSpan { basis, rank, ranks, stabilized, vectors_enumerated: count })
}

/// Ranks at P and P+1; `stabilized` reports whether they agree.
pub fn obstruction_span(m: &EvenLattice, decomps: &[AdmissibleDecomposition], p: Q) -> Result<ObstructionSpan> {
    obstruction_span_steps(m, decomps, p, 1)
}

#[derive(Clone, Debug)]
pub enum BoundaryVerdict {
    PassesThisPlane,
    Obstructed { witness: FourierExpansion, pairing: Cyc },
}

/// Necessary condition for extension over the boundary plane of `decomp`.
pub fn bf_boundary_check(h: &HeegnerCombo, decomp: &AdmissibleDecomposition, p: Q) -> Result<BoundaryVerdict> {
    let p = p.max(h.max_order());
    let span = obstruction_span_steps(&h.ambient, std::slice::from_ref(decomp), p, 0)?;
    for f in span.basis {
        let c = coefficient_pairing(h, &f)?;
        if !c.is_zero() {
            return Ok(BoundaryVerdict::Obstructed { witness: f, pairing: c });
        }
    }
    Ok(BoundaryVerdict::PassesThisPlane)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::harmonic_basis_form;
    use crate::lattice::{from_blocks, lambda_g, u};
    use crate::theta::{positive_form, theta_coeffs_negative};

    fn with_z7(first: i64) -> EvenLattice {
        let l = EvenLattice::new(vec![vec![-2, -1], vec![-1, -4]]).unwrap();
        EvenLattice::direct_sum(&[u(first).unwrap(), u(1).unwrap(), l])
    }

    #[test]
    fn level_one_dimensions() {
        let t = DiscriminantForm::trivial();
        assert_eq!(dim_cusp(Q::from_integer(12), &t, false).unwrap(), 1);
        assert_eq!(dim_cusp(Q::from_integer(6), &t, false).unwrap(), 0);
        assert_eq!(dim_cusp(Q::from_integer(4), &t, false).unwrap(), 0);
        assert_eq!(dimensions(Q::from_integer(12), &t, false).unwrap().modular, 2);
        assert_eq!(dim_cusp(Q::from_integer(24), &t, false).unwrap(), 2);
        assert!(dim_cusp(Q::from_integer(2), &t, false).is_err());
    }

    #[test]
    fn rank_formula_matches_cusp_dimension() {
        let expected = [2, 3, 4, 4, 6, 7, 7, 8, 9, 10, 11];
        for g in 2..=12 {
            let r = rank_formula(g).unwrap();
            let gm = lambda_g(g).unwrap().discriminant();
            let d = dim_cusp(Q::new(21, 2), &gm, true).unwrap() as i64;
            assert_eq!(r, 1 + d, "g = {}", g);
            assert_eq!(r, expected[g as usize - 2]);
        }
        for g in 2..=200 {
            assert!(rank_formula(g).unwrap() > 0);
        }
    }

    #[test]
    fn easy_instance_has_no_obstruction() {
        let m = from_blocks("U(1) + U(1) + E8(-1)").unwrap();
        let dc = AdmissibleDecomposition::block_split(&m).unwrap();
        let sp = obstruction_span(&m, &[dc], Q::from_integer(2)).unwrap();
        assert_eq!(sp.rank, 0);
        assert!(sp.stabilized);
        assert_eq!(dim_cusp(Q::from_integer(6), &m.discriminant(), true).unwrap(), 0);
        let none = obstruction_span(&m, &[], Q::from_integer(2)).unwrap();
        assert_eq!(none.rank, 0);
    }

    #[test]
    fn lifted_rows_match_direct_theta() {
        // small ambient with trivial H_J: the lifted rows agree with Θ_{L(−1),F} built directly
        let m = with_z7(1);
        let dc = AdmissibleDecomposition::block_split(&m).unwrap();
        let sp = obstruction_span_steps(&m, &[dc.clone()], Q::from_integer(3), 1).unwrap();
        assert_eq!(sp.rank, 1);
        assert!(sp.stabilized);
        let gm = m.discriminant();
        assert_eq!(sp.rank, dim_cusp(Q::from_integer(3), &gm, true).unwrap());
        let f = &sp.basis[0];
        assert!(f.is_cusp() && f.dual && f.weight == Q::from_integer(3));
        f.check_invariants().unwrap();
        // independent route: harmonic basis polynomials fed to the generic theta enumerator
        let (gl, iota) = dc.embedding(&gm);
        let direct: Vec<FourierExpansion> = harmonic_basis_form(&positive_form(&dc.l), 2)
            .iter()
            .map(|h| theta_coeffs_negative(&dc.l, Some(h), Q::from_integer(4)).unwrap())
            .collect();
        let mut keys: Vec<(Elt, Q)> = direct.iter().flat_map(|t| t.coeffs.keys().cloned()).collect();
        keys.extend(f.coeffs.keys().map(|&(e, m)| (gl.elements().find(|&x| iota[x] == e).unwrap(), m)));
        keys.sort();
        keys.dedup();
        let row = |t: &FourierExpansion, mapped: bool| -> Vec<BigRational> {
            keys.iter()
                .map(|&(e, m)| {
                    let c = if mapped { t.get(iota[e], m) } else { t.get(e, m) };
                    let q = c.as_rational().unwrap();
                    BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))
                })
                .collect()
        };
        let mut rows: RMat = direct.iter().map(|t| row(t, false)).collect();
        assert_eq!(rank_rational(&mut rows.clone()), 1);
        rows.push(row(f, true));
        assert_eq!(rank_rational(&mut rows), 1);
    }

    #[test]
    fn hodge_and_boundary() {
        let m = with_z7(2);
        let dc = AdmissibleDecomposition::block_split(&m).unwrap();
        let gm = m.discriminant();
        let h_j = dc.isotropic_subgroup(&gm);
        assert_eq!(h_j.len(), 2);
        let hodge = HeegnerCombo::hodge(&m, Q::new(3, 2)).unwrap();
        assert!(matches!(bf_boundary_check(&hodge, &dc, Q::from_integer(2)).unwrap(), BoundaryVerdict::PassesThisPlane));
        // a coset outside H_J^⊥
        let outside = gm.elements().find(|&e| h_j.iter().any(|&x| !gm.bil(e, x).is_zero())).unwrap();
        let mut h = HeegnerCombo::new(&m).unwrap();
        h.add_term(gm.q(outside) - Q::from_integer(1), outside, Q::from_integer(1)).unwrap();
        assert!(matches!(bf_boundary_check(&h, &dc, Q::from_integer(2)).unwrap(), BoundaryVerdict::PassesThisPlane));
        // a witness coefficient inside gives an obstruction and a failed Hodge test
        let sp = obstruction_span(&m, &[dc.clone()], Q::from_integer(2)).unwrap();
        let f = &sp.basis[0];
        let (&(g, mm), _) = f.coeffs.iter().next().unwrap();
        let mut h = HeegnerCombo::new(&m).unwrap();
        h.add_term(-mm, g, Q::from_integer(1)).unwrap();
        assert!(matches!(bf_boundary_check(&h, &dc, Q::from_integer(2)).unwrap(), BoundaryVerdict::Obstructed { .. }));
        let rep = hodge_criterion(&h, &sp.basis).unwrap();
        assert_eq!(rep.verdict, HodgeVerdict::NotProportional { witness: 0 });
        assert_eq!(hodge_criterion(&hodge, &sp.basis).unwrap().verdict, HodgeVerdict::ProportionalToHodge);
    }
}
