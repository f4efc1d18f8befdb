//! Named property suites over a bundled corpus of lattices.

use crate::arith::Q;
use crate::cyclo::Cyc;
use crate::discriminant::DiscriminantForm;
use crate::error::{Error, Result};
use crate::lattice::{a1, a2, angle, d4, e8, u, EvenLattice};
use crate::mp::Gen;
use crate::discform::{complement_and_quotient, descend_down, hermitian, isotropic_subgroups, lift_up, CoeffVector, IsotropicSubgroup};
use crate::eichler::{divisibility, dual_class_in, eichler_move, is_primitive, EichlerSetting};
use crate::lattice::eichler_lattice;
use crate::matrix::bilinear;
use crate::weil::{cmat_adjoint, cmat_identity, cmat_mul, cmat_scale, WeilRep};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Even lattices whose discriminant groups have order at most 48, both signs and several primes.
pub fn corpus() -> Vec<EvenLattice> {
    let mut out = Vec::new();
    for m in 1..=24 {
        out.push(angle(2 * m).unwrap());
    }
    for m in [1, 3, 5, 7, 12] {
        out.push(angle(-2 * m).unwrap());
    }
    for n in 2..=6 {
        out.push(u(n).unwrap());
    }
    out.push(a2(1).unwrap());
    out.push(a2(-1).unwrap());
    out.push(a2(2).unwrap());
    out.push(d4(1).unwrap());
    out.push(d4(-1).unwrap());
    out.push(e8(-1).unwrap());
    out.push(EvenLattice::new(vec![vec![2, 1], vec![1, 4]]).unwrap().named("[2 1; 1 4]"));
    let sums: [&[EvenLattice]; 6] = [
        &[a1(1).unwrap(), a1(1).unwrap()],
        &[a1(1).unwrap(), a2(1).unwrap()],
        &[a2(1).unwrap(), a2(1).unwrap()],
        &[d4(1).unwrap(), a1(1).unwrap()],
        &[a1(1).unwrap(), a1(-1).unwrap(), angle(6).unwrap()],
        &[u(2).unwrap(), a1(-1).unwrap(), a1(-1).unwrap()],
    ];
    for s in sums {
        let name = s.iter().map(label).collect::<Vec<_>>().join(" + ");
        out.push(EvenLattice::direct_sum(s).named(&name));
    }
    out
}

/// Name if set, otherwise the block expression.
pub fn label(l: &EvenLattice) -> String {
    if !l.name.is_empty() {
        l.name.clone()
    } else {
        l.blocks.clone().unwrap_or_else(|| format!("{:?}", l.gram))
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.cases > 0
    }
}

/// ρ(S)² = ρ(Z), ρ(Z)² = (−1)^{sign}, (ρ(S)ρ(T))³ = ρ(S)², ρ(S), ρ(T) unitary.
/// ρ(S) = c·F with F the root-of-unity part, so products are formed on F and rescaled by powers of c.
pub fn weil_relations(g: &DiscriminantForm) -> Vec<&'static str> {
    let w = WeilRep::new(g);
    let (f, t, z) = (w.s_unscaled(), w.t(), w.z());
    let c = &w.c;
    let id = cmat_identity(w.dim(), w.cond);
    let c2 = c * c;
    let s2 = cmat_scale(&cmat_mul(&f, &f), &c2);
    let sgn = if g.sign8 % 2 == 0 { 1 } else { -1 };
    let ft = cmat_mul(&f, &t);
    let ft3 = cmat_mul(&cmat_mul(&ft, &ft), &ft);
    let mut bad = Vec::new();
    if s2 != z {
        bad.push("S^2 = Z");
    }
    if cmat_mul(&z, &z) != cmat_scale(&id, &Cyc::from_int(w.cond, sgn)) {
        bad.push("Z^2 = (-1)^sign");
    }
    if cmat_scale(&ft3, &(&c2 * c)) != s2 {
        bad.push("(ST)^3 = S^2");
    }
    let ff = cmat_scale(&cmat_mul(&f, &cmat_adjoint(&f)), &(c * &c.conj()));
    if ff != id || cmat_mul(&t, &cmat_adjoint(&t)) != id {
        bad.push("unitary");
    }
    if w.rho_word(&[Gen::T, Gen::Tinv]) != id {
        bad.push("T T^-1 = 1");
    }
    bad
}

/// Σ e(q(γ)) = √|G| e(sign/8) with the signature taken from the lattice.
pub fn milgram(l: &EvenLattice) -> bool {
    let g = l.discriminant();
    let sign = l.sign().rem_euclid(8);
    g.gauss_sum() == &Cyc::sqrt_rational(Q::from_integer(g.order() as i64)) * &Cyc::zeta(8, sign)
}

pub fn run_weil_relations() -> SuiteReport {
    let c = corpus();
    let failures = c
        .iter()
        .flat_map(|l| weil_relations(&l.discriminant()).into_iter().map(move |r| format!("{}: {}", label(l), r)))
        .collect();
    SuiteReport { name: "weil-relations".into(), cases: c.len(), failures }
}

pub fn run_milgram() -> SuiteReport {
    let c = corpus();
    let failures = c.iter().filter(|l| !milgram(l)).map(label).collect();
    SuiteReport { name: "milgram".into(), cases: c.len(), failures }
}

pub fn run_rank_formula(max_g: i64) -> SuiteReport {
    let mut failures = Vec::new();
    for g in 2..=max_g {
        match crate::heegner::rank_formula(g) {
            Ok(r) if g <= 12 => {
                let dim = crate::lattice::lambda_g(g)
                    .map(|l| l.discriminant())
                    .and_then(|gm| crate::heegner::dim_cusp(Q::new(21, 2), &gm, true));
                match dim {
                    Ok(d) if r == 1 + d as i64 => {}
                    Ok(d) => failures.push(format!("g={}: r_g={} but 1 + dim Cusp = {}", g, r, 1 + d)),
                    Err(e) => failures.push(format!("g={}: {}", g, e)),
                }
            }
            Ok(_) => {}
            Err(e) => failures.push(format!("g={}: {}", g, e)),
        }
    }
    SuiteReport { name: "rank-formula".into(), cases: (max_g - 1) as usize, failures }
}

pub fn run_coset_action() -> SuiteReport {
    let words: [(&[Gen], &[Gen]); 3] = [(&[], &[]), (&[Gen::S], &[Gen::T]), (&[Gen::S, Gen::T], &[Gen::T, Gen::T, Gen::S])];
    let mut failures = Vec::new();
    let mut cases = 0;
    for (n, q) in [(2, Q::new(3, 4)), (3, Q::new(1, 3)), (5, Q::new(2, 5))] {
        let g = DiscriminantForm::cyclic(n, q).expect("valid cyclic form");
        for alpha in [0, -1, -2] {
            for (a, b) in words {
                cases += 1;
                match crate::mp4::verify_coset_action(&g, alpha, a, b) {
                    Ok(r) if r.holds && r.functional_equation != Some(false) => {}
                    Ok(_) => failures.push(format!("Z/{} α={} {:?} {:?}", n, alpha, a, b)),
                    Err(e) => failures.push(e.to_string()),
                }
            }
        }
    }
    SuiteReport { name: "coset-action".into(), cases, failures }
}

/// Random (G, H) pairs with H a nontrivial isotropic subgroup, drawn from the corpus and a few extra forms.
pub fn random_isotropic_pairs(seed: u64, count: usize) -> Vec<(DiscriminantForm, IsotropicSubgroup)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lats = corpus();
    lats.extend([angle(8).unwrap(), angle(18).unwrap(), angle(32).unwrap(), d4(2).unwrap()]);
    let mut pool = Vec::new();
    for l in &lats {
        let g = l.discriminant();
        if g.order() > 64 {
            continue;
        }
        for h in isotropic_subgroups(&g) {
            if h.order() > 1 {
                pool.push((g.clone(), h));
            }
        }
    }
    (0..count).map(|_| pool[rng.gen_range(0..pool.len())].clone()).collect()
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize, cond: u32) -> CoeffVector {
    (0..n)
        .map(|_| Cyc::zeta(cond, rng.gen_range(0..cond as i64)).scale_int(rng.gen_range(-3..=3)))
        .collect()
}

/// ⟨↑v, w⟩ = ⟨v, ↓w⟩ and ↓↑ = |H| on random vectors.
pub fn run_lift_descent(seed: u64, count: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut failures = Vec::new();
    for (i, (g, h)) in random_isotropic_pairs(seed, count).into_iter().enumerate() {
        let qt = complement_and_quotient(&g, &h);
        let cond = g.conductor();
        let v = random_vector(&mut rng, qt.quotient.order(), cond);
        let w = random_vector(&mut rng, g.order(), cond);
        let up = lift_up(&g, &qt, &v).expect("vector over the quotient");
        let down = descend_down(&g, &qt, &w).expect("vector over G");
        if hermitian(&up, &w) != hermitian(&v, &down) {
            failures.push(format!("pair {}: adjointness", i));
        }
        let back = descend_down(&g, &qt, &up).expect("vector over G");
        let scaled: CoeffVector = v.iter().map(|x| x.scale_int(h.order() as i128)).collect();
        if back != scaled {
            failures.push(format!("pair {}: descent after lift", i));
        }
    }
    SuiteReport { name: "lift-descent".into(), cases: count, failures }
}

type EichlerPair = (usize, Vec<i64>, Vec<i64>);

/// Primitive pairs in U ⊕ U(2) ⊕ A1(−1)^m with equal (norm, divisibility, dual class), coordinates in [−5, 5].
pub fn matched_eichler_pairs(seed: u64, count: usize) -> Vec<EichlerPair> {
    eichler_pairs(seed, count, true)
}

/// Pairs with equal norm whose divisibility or dual class differ.
pub fn mismatched_eichler_pairs(seed: u64, count: usize) -> Vec<EichlerPair> {
    eichler_pairs(seed, count, false)
}

fn eichler_pairs(seed: u64, count: usize, matched: bool) -> Vec<EichlerPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let per = count.div_ceil(4);
    for m in 1..=4 {
        let lat = eichler_lattice(m).expect("valid lattice");
        let g = &lat.gram;
        let gm = lat.discriminant();
        let mut buckets: BTreeMap<(i64, i64, usize), Vec<Vec<i64>>> = BTreeMap::new();
        for _ in 0..4000 {
            let u: Vec<i64> = (0..m + 4).map(|_| rng.gen_range(-5..=5)).collect();
            if is_primitive(&u) {
                buckets.entry((bilinear(g, &u, &u), divisibility(g, &u), dual_class_in(&gm, g, &u))).or_default().push(u);
            }
        }
        let mut found = Vec::new();
        if matched {
            for b in buckets.values() {
                for w in b.chunks(2).filter(|w| w.len() == 2) {
                    found.push((m, w[0].clone(), w[1].clone()));
                }
            }
        } else {
            let keys: Vec<_> = buckets.keys().cloned().collect();
            for (i, a) in keys.iter().enumerate() {
                for b in &keys[i + 1..] {
                    if a.0 == b.0 && (a.1 != b.1 || a.2 != b.2) {
                        found.push((m, buckets[a][0].clone(), buckets[b][0].clone()));
                    }
                }
            }
        }
        // spread the picks over the available norms
        let step = (found.len() / per).max(1);
        out.extend(found.into_iter().step_by(step).take(per));
    }
    out.truncate(count);
    out
}

/// Matched pairs must produce a verified isometry; mismatched controls must never verify.
pub fn run_eichler(seed: u64, matched: usize, controls: usize) -> SuiteReport {
    let mut failures = Vec::new();
    let pairs = matched_eichler_pairs(seed, matched);
    let ctl = mismatched_eichler_pairs(seed.wrapping_add(1), controls);
    for (m, u, v) in &pairs {
        let set = EichlerSetting::new(*m).expect("m >= 1");
        match eichler_move(&set, u, v) {
            Ok(mv) if mv.isometry.preserves(&set.lattice.gram) && mv.isometry.apply(u) == *v => {}
            Ok(_) => failures.push(format!("m={} {:?} -> {:?}: unverified result", m, u, v)),
            Err(e) => failures.push(format!("m={} {:?} -> {:?}: {}", m, u, v, e)),
        }
    }
    for (m, u, v) in &ctl {
        let set = EichlerSetting::new(*m).expect("m >= 1");
        if let Ok(mv) = eichler_move(&set, u, v) {
            if mv.isometry.preserves(&set.lattice.gram) && mv.isometry.apply(u) == *v {
                failures.push(format!("control m={} {:?} -> {:?} verified", m, u, v));
            }
        }
    }
    if pairs.len() < matched || ctl.len() < controls {
        failures.push(format!("only {} pairs and {} controls generated", pairs.len(), ctl.len()));
    }
    SuiteReport { name: "eichler".into(), cases: pairs.len() + ctl.len(), failures }
}

pub const SUITES: [&str; 6] = ["weil-relations", "milgram", "rank-formula", "coset-action", "lift-descent", "eichler"];

pub fn run_suite(name: &str, seed: u64) -> Result<SuiteReport> {
    match name {
        "weil-relations" => Ok(run_weil_relations()),
        "milgram" => Ok(run_milgram()),
        "rank-formula" => Ok(run_rank_formula(200)),
        "coset-action" => Ok(run_coset_action()),
        "lift-descent" => Ok(run_lift_descent(seed, 20)),
        "eichler" => Ok(run_eichler(seed, 100, 20)),
        _ => Err(Error::Precondition(format!("unknown suite '{}' (known: {})", name, SUITES.join(", ")))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_shape() {
        let c = corpus();
        assert!(c.len() >= 30);
        assert!(c.iter().all(|l| l.discriminant().order() <= 48));
    }

    #[test]
    fn suites_pass() {
        for s in ["weil-relations", "milgram", "lift-descent"] {
            let r = run_suite(s, 7).unwrap();
            assert!(r.passed(), "{:?}", r.failures);
        }
        assert!(run_suite("nope", 7).is_err());
    }

    #[test]
    fn eichler_pair_generators() {
        let m = matched_eichler_pairs(3, 12);
        let c = mismatched_eichler_pairs(3, 8);
        assert_eq!((m.len(), c.len()), (12, 8));
        for (k, u, v) in m.iter().chain(&c) {
            let l = eichler_lattice(*k).unwrap();
            assert_eq!(bilinear(&l.gram, u, u), bilinear(&l.gram, v, v));
        }
        assert!(run_eichler(3, 12, 8).passed());
    }
}
