//! Isotropic subgroups, subquotients, lift/descent and orthogonal groups of discriminant forms.

use crate::cyclo::Cyc;
use crate::discriminant::{DiscriminantForm, Elt};
use crate::error::{Error, Result};
use crate::matrix::{smith, IMat};
use num_traits::Zero;
use std::collections::BTreeSet;

/// Coefficient vector over G, indexed by element.
pub type CoeffVector = Vec<Cyc>;

/// All elements of the subgroup generated by `gens`.
pub fn span(g: &DiscriminantForm, gens: &[Elt]) -> Vec<Elt> {
    let mut set: BTreeSet<Elt> = BTreeSet::from([0]);
    let mut frontier = vec![0];
    while let Some(x) = frontier.pop() {
        for &h in gens {
            let y = g.add(x, h);
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    set.into_iter().collect()
}

#[derive(Clone, Debug)]
pub struct IsotropicSubgroup {
    pub generators: Vec<Elt>,
    pub elements: Vec<Elt>,
}

impl IsotropicSubgroup {
    pub fn new(g: &DiscriminantForm, generators: Vec<Elt>) -> Result<IsotropicSubgroup> {
        let elements = span(g, &generators);
        if elements.iter().any(|&h| !g.q(h).is_zero()) {
            return Err(Error::Precondition("subgroup is not isotropic".into()));
        }
        Ok(IsotropicSubgroup { generators, elements })
    }

    pub fn trivial() -> IsotropicSubgroup {
        IsotropicSubgroup { generators: vec![], elements: vec![0] }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: Elt) -> bool {
        self.elements.binary_search(&x).is_ok()
    }
}

/// A/B for subgroups B ≤ A ≤ G given by generators: invariant factors and lifts of generators.
pub fn subquotient(g: &DiscriminantForm, a: &[Elt], b: &[Elt]) -> (Vec<i64>, Vec<Elt>) {
    let k = g.divisors.len();
    if k == 0 {
        return (vec![], vec![]);
    }
    let columns = |gens: &[Elt]| -> IMat {
        let mut cols: Vec<Vec<i64>> = gens.iter().map(|&x| g.coords(x)).collect();
        for i in 0..k {
            let mut c = vec![0; k];
            c[i] = g.divisors[i];
            cols.push(c);
        }
        (0..k).map(|r| cols.iter().map(|c| c[r]).collect()).collect()
    };
    // basis of the lattice of A: P^{-1} diag(D)
    let sa = smith(&columns(a));
    let basis: IMat = (0..k).map(|r| (0..k).map(|c| sa.p_inv[r][c] * sa.d[c]).collect()).collect();
    // B's generators in that basis: diag(1/D) P C
    let cb = columns(b);
    let pc = crate::matrix::mat_mul(&sa.p, &cb);
    let rel: IMat = pc
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .map(|&x| {
                    assert_eq!(x % sa.d[i], 0, "B is not contained in A");
                    x / sa.d[i]
                })
                .collect()
        })
        .collect();
    let sr = smith(&rel);
    let newbasis = crate::matrix::mat_mul(&basis, &sr.p_inv);
    let mut divs = Vec::new();
    let mut lifts = Vec::new();
    for i in 0..k {
        if sr.d[i] != 1 {
            assert!(sr.d[i] > 1, "subquotient must be finite");
            divs.push(sr.d[i]);
            lifts.push(g.index(&(0..k).map(|r| newbasis[r][i]).collect::<Vec<_>>()));
        }
    }
    (divs, lifts)
}

#[derive(Clone, Debug)]
pub struct Quotient {
    pub h: IsotropicSubgroup,
    pub perp: Vec<Elt>,
    pub quotient: DiscriminantForm,
    /// projection H^⊥ → H^⊥/H as (element of G, element of the quotient)
    pub proj: Vec<Option<Elt>>,
    /// section of the projection
    pub section: Vec<Elt>,
}

pub fn complement_and_quotient(g: &DiscriminantForm, h: &IsotropicSubgroup) -> Quotient {
    let perp: Vec<Elt> = g.elements().filter(|&x| h.generators.iter().all(|&y| g.bil(x, y).is_zero())).collect();
    let (divs, lifts) = subquotient(g, &perp, &h.generators);
    let k = divs.len();
    let qgen = lifts.iter().map(|&x| g.q(x)).collect();
    let off = (0..k).map(|i| (0..k).map(|j| g.bil(lifts[i], lifts[j])).collect()).collect();
    let quotient = DiscriminantForm::new(divs, qgen, off).expect("subquotient of a nondegenerate form");
    let mut proj = vec![None; g.order()];
    let mut section = vec![0; quotient.order()];
    for e in quotient.elements() {
        let c = quotient.coords(e);
        let mut x = 0;
        for (i, &ci) in c.iter().enumerate() {
            x = g.add(x, g.mul(ci, lifts[i]));
        }
        section[e] = x;
        for &hh in &h.elements {
            proj[g.add(x, hh)] = Some(e);
        }
    }
    Quotient { h: h.clone(), perp, quotient, proj, section }
}

/// ↑_H(e_{γ+H}) = Σ_{μ∈H} e_{γ+μ}.
pub fn lift_up(g: &DiscriminantForm, qt: &Quotient, v: &CoeffVector) -> Result<CoeffVector> {
    if v.len() != qt.quotient.order() {
        return Err(Error::Precondition("vector is not over H^perp/H".into()));
    }
    let n = v.first().map_or(8, |c| c.conductor());
    let mut out = vec![Cyc::zero(n); g.order()];
    for (x, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for &hh in &qt.h.elements {
            let y = g.add(qt.section[x], hh);
            out[y] = &out[y] + c;
        }
    }
    Ok(out)
}

/// ↓_H(e_γ) = e_{γ+H} for γ ∈ H^⊥, 0 otherwise.
pub fn descend_down(g: &DiscriminantForm, qt: &Quotient, w: &CoeffVector) -> Result<CoeffVector> {
    if w.len() != g.order() {
        return Err(Error::Precondition("vector is not over G".into()));
    }
    let n = w.first().map_or(8, |c| c.conductor());
    let mut out = vec![Cyc::zero(n); qt.quotient.order()];
    for (x, c) in w.iter().enumerate() {
        if let Some(y) = qt.proj[x] {
            out[y] = &out[y] + c;
        }
    }
    Ok(out)
}

/// Standard Hermitian product Σ a_γ conj(b_γ).
pub fn hermitian(a: &CoeffVector, b: &CoeffVector) -> Cyc {
    let n = a.first().map_or(1, |c| c.conductor());
    a.iter().zip(b).fold(Cyc::zero(n), |s, (x, y)| &s + &(x * &y.conj()))
}

/// All q-preserving automorphisms as permutation tables, sorted.
pub fn orthogonal_group(g: &DiscriminantForm, bound: usize) -> Result<Vec<Vec<Elt>>> {
    if g.order() > bound {
        return Err(Error::Precondition(format!("|G| = {} exceeds bound {}", g.order(), bound)));
    }
    let k = g.divisors.len();
    let gens: Vec<Elt> = (0..k).map(|i| g.index(&(0..k).map(|j| (i == j) as i64).collect::<Vec<_>>())).collect();
    let mut out = Vec::new();
    let mut images = Vec::new();
    fn rec(g: &DiscriminantForm, gens: &[Elt], images: &mut Vec<Elt>, out: &mut Vec<Vec<Elt>>) {
        let i = images.len();
        if i == gens.len() {
            let table: Vec<Elt> = g
                .elements()
                .map(|e| {
                    g.coords(e).iter().enumerate().fold(0, |acc, (j, &c)| g.add(acc, g.mul(c, images[j])))
                })
                .collect();
            out.push(table);
            return;
        }
        for cand in g.elements() {
            if g.mul(g.divisors[i], cand) != 0 || g.q(cand) != g.q(gens[i]) {
                continue;
            }
            if (0..i).any(|j| g.bil(cand, images[j]) != g.bil(gens[i], gens[j])) {
                continue;
            }
            images.push(cand);
            rec(g, gens, images, out);
            images.pop();
        }
    }
    rec(g, &gens, &mut images, &mut out);
    out.sort();
    Ok(out)
}

/// True iff H contains no nonzero characteristic element.
pub fn is_characteristic_free(g: &DiscriminantForm, h: &IsotropicSubgroup) -> Result<bool> {
    let a = g.characteristic_element()?;
    Ok(a == 0 || !h.contains(a))
}

/// All isotropic subgroups, each listed once by its element set.
pub fn isotropic_subgroups(g: &DiscriminantForm) -> Vec<IsotropicSubgroup> {
    let iso: Vec<Elt> = g.elements().filter(|&e| e != 0 && g.q(e).is_zero()).collect();
    let mut seen: BTreeSet<Vec<Elt>> = BTreeSet::new();
    let mut out = vec![IsotropicSubgroup::trivial()];
    seen.insert(vec![0]);
    let mut i = 0;
    while i < out.len() {
        let cur = out[i].clone();
        for &x in &iso {
            if cur.contains(x) {
                continue;
            }
            let mut gens = cur.generators.clone();
            gens.push(x);
            if let Ok(s) = IsotropicSubgroup::new(g, gens) {
                if seen.insert(s.elements.clone()) {
                    out.push(s);
                }
            }
        }
        i += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::*;

    #[test]
    fn u2_quotient() {
        let g = u(2).unwrap().discriminant();
        let e = g.elements().find(|&x| x != 0 && g.q(x).is_zero()).unwrap();
        let h = IsotropicSubgroup::new(&g, vec![e]).unwrap();
        let qt = complement_and_quotient(&g, &h);
        assert_eq!(qt.perp.len(), 2);
        assert_eq!(qt.quotient.order(), 1);
        let v = vec![Cyc::one(8)];
        let up = lift_up(&g, &qt, &v).unwrap();
        assert!(up[0].is_one() && up[e].is_one());
        let f = g.elements().find(|&x| x != 0 && x != e && g.q(x).is_zero()).unwrap();
        let mut w = vec![Cyc::zero(8); 4];
        w[f] = Cyc::one(8);
        assert!(descend_down(&g, &qt, &w).unwrap()[0].is_zero());
    }

    #[test]
    fn orthogonal_groups() {
        assert_eq!(orthogonal_group(&DiscriminantForm::trivial(), 10).unwrap().len(), 1);
        let g = u(2).unwrap().discriminant();
        assert_eq!(orthogonal_group(&g, 10).unwrap().len(), 2);
        let z2 = a1(1).unwrap().discriminant();
        assert_eq!(orthogonal_group(&z2, 10).unwrap().len(), 1);
    }

    #[test]
    fn u2u2_quotient_trivial() {
        let m = EvenLattice::direct_sum(&[u(2).unwrap(), u(2).unwrap()]);
        let g = m.discriminant();
        let h = IsotropicSubgroup::new(&g, vec![g.index(&[1, 0, 0, 0]), g.index(&[0, 0, 1, 0])]);
        let h = h.unwrap_or_else(|_| {
            let e: Vec<Elt> = g.elements().filter(|&x| g.q(x).is_zero()).collect();
            let mut found = None;
            'o: for &a in &e {
                for &b in &e {
                    if let Ok(s) = IsotropicSubgroup::new(&g, vec![a, b]) {
                        if s.order() == 4 {
                            found = Some(s);
                            break 'o;
                        }
                    }
                }
            }
            found.unwrap()
        });
        let qt = complement_and_quotient(&g, &h);
        assert_eq!(qt.quotient.order(), 1);
    }

    #[test]
    fn characteristic_free() {
        let m = EvenLattice::direct_sum(&[u(2).unwrap(), a1(-1).unwrap(), a1(-1).unwrap()]);
        let g = m.discriminant();
        assert!(is_characteristic_free(&g, &IsotropicSubgroup::trivial()).unwrap());
        let a = g.characteristic_element().unwrap();
        for h in isotropic_subgroups(&g) {
            assert_eq!(is_characteristic_free(&g, &h).unwrap(), !h.contains(a) || a == 0);
        }
    }
}
