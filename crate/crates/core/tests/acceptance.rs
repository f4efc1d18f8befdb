//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};
use vvmf::arith::Q;
use vvmf::checks::{corpus, label, milgram, run_eichler, run_lift_descent, run_rank_formula, weil_relations};
use vvmf::harmonic::{f_u, harmonic_basis_form, HarmonicPolynomial};
use vvmf::hecke::{hecke_t, scalar_comparison, star_condition};
use vvmf::heegner::{
    bf_boundary_check, dim_cusp, hodge_criterion, obstruction_span, obstruction_span_steps, AdmissibleDecomposition, BoundaryVerdict, HeegnerCombo,
    HodgeVerdict,
};
use vvmf::lattice::{a2, angle, e8, from_blocks, lambda_g, EvenLattice};
use vvmf::mp::MetaplecticElement;
use vvmf::qexp::{lipschitz_check, modularity_residual};
use vvmf::theta::{positive_form, tail_bound, theta_coeffs};

const SEED: u64 = 2024;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn run(f: impl FnOnce() -> vvmf::error::Result<Outcome>) -> Outcome {
    f().unwrap_or_else(|e| outcome(false, format!("error: {}", e)))
}

fn secs(d: Duration) -> String {
    format!("{:.1}s", d.as_secs_f64())
}

fn weil_relations_small() -> vvmf::error::Result<Outcome> {
    let t = Instant::now();
    let forms: Vec<EvenLattice> = corpus().into_iter().filter(|l| l.discriminant().order() <= 48).collect();
    let bad: Vec<String> = forms.iter().filter(|l| !weil_relations(&l.discriminant()).is_empty()).map(label).collect();
    let el = t.elapsed();
    let pass = forms.len() >= 30 && bad.is_empty() && el < Duration::from_secs(30);
    Ok(outcome(pass, format!("{} forms with |G| <= 48, {} failing {:?}, {}", forms.len(), bad.len(), bad, secs(el))))
}

fn milgram_all() -> vvmf::error::Result<Outcome> {
    let c = corpus();
    let bad: Vec<String> = c.iter().filter(|l| !milgram(l)).map(label).collect();
    Ok(outcome(bad.is_empty(), format!("exact Gauss sums on {} lattices, {} failing {:?}", c.len(), bad.len(), bad)))
}

fn theta_modularity() -> vvmf::error::Result<Outcome> {
    let prec = Q::from_integer(25);
    let samples = [Complex64::new(0.0, 2.0), Complex64::new(1.0, 2.0), Complex64::new(0.5, 1.5)];
    let e = e8(1)?;
    let form = positive_form(&e);
    let mut u = vec![BigRational::from_integer(BigInt::from(0)); 8];
    u[0] = BigRational::from_integer(BigInt::from(1));
    u[3] = BigRational::from_integer(BigInt::from(1));
    let hp = harmonic_basis_form(&form, 2).remove(0);
    let fu = HarmonicPolynomial { poly: f_u(&form, &u), ..hp };
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, m, f) in [("Θ_<2>", angle(2)?, None), ("Θ_E8", e.clone(), None), ("Θ_E8,F_u", e.clone(), Some(&fu))] {
        let th = theta_coeffs(&m, f, prec)?;
        let tb = tail_bound(&m, f);
        for (g, el) in [("S", MetaplecticElement::s()), ("T", MetaplecticElement::t())] {
            let r = modularity_residual(&th, &el, &samples, &tb)?;
            pass &= r.certified(1e-8);
            parts.push(format!("{} {} {:.1e}+{:.1e}", name, g, r.max_residual, r.tail_bound));
        }
    }
    Ok(outcome(pass, format!("P = 25, residual+tail: {}", parts.join(", "))))
}

/// σ₃ by trial division, independent of the library.
fn sigma3(n: i64) -> i64 {
    (1..=n).filter(|d| n % d == 0).map(|d| d * d * d).sum()
}

fn theta_e8() -> vvmf::error::Result<Outcome> {
    let th = theta_coeffs(&e8(1)?, None, Q::from_integer(10))?;
    let mut bad = Vec::new();
    for n in 0..=10i64 {
        let c = th.get(0, Q::from_integer(n)).as_rational();
        let want = if n == 0 { 1 } else { 240 * sigma3(n) };
        if c != Some(Q::from_integer(want)) {
            bad.push(n);
        }
    }
    Ok(outcome(bad.is_empty(), format!("coefficients n = 0..10 against 240σ₃(n), mismatches at {:?}", bad)))
}

fn hecke() -> vvmf::error::Result<Outcome> {
    let f = theta_coeffs(&angle(2)?, None, Q::from_integer(72))?;
    let p = Q::from_integer(2);
    let mult = hecke_t(2, &hecke_t(3, &f, Q::from_integer(8))?, p)?.to_text() == hecke_t(6, &f, p)?.to_text();
    let mut pass = mult;
    let mut notes = vec![format!("T4T9 = T36 {}", mult)];
    let mut nonvacuous = 0;
    let cases = [("Z/2", angle(2)?, 2u64), ("Z/2", angle(2)?, 3), ("Z/4", angle(4)?, 2), ("Z/4", angle(4)?, 3), ("Z/3 (A2)", a2(1)?, 3), ("Z/6", angle(6)?, 3)];
    for (name, m, pr) in cases {
        let f = theta_coeffs(&m, None, Q::from_integer(3 * (pr * pr) as i64))?;
        let g = f.effective_form();
        let gammas: Vec<_> = g.elements().filter(|&x| star_condition(&g, x, pr)).collect();
        if gammas.is_empty() {
            notes.push(format!("{} p={} vacuous", name, pr));
        }
        for gamma in gammas {
            let r = scalar_comparison(&f, gamma, pr, 1, Q::from_integer(3))?;
            nonvacuous += 1;
            pass &= r.with_pn;
            notes.push(format!("{} p={} γ={} {}", name, pr, gamma, if r.with_pn { "holds" } else { "fails" }));
        }
    }
    pass &= nonvacuous > 0;
    Ok(outcome(pass, notes.join(", ")))
}

fn lift_descent() -> vvmf::error::Result<Outcome> {
    let r = run_lift_descent(SEED, 20);
    Ok(outcome(r.passed(), format!("{} random (G, H) pairs, {} failures", r.cases, r.failures.len())))
}

fn lipschitz() -> vvmf::error::Result<Outcome> {
    let pts = [(2.0, Q::new(0, 1), Complex64::new(0.0, 2.0)), (2.5, Q::new(1, 4), Complex64::new(1.0 / 3.0, 1.0)), (4.0, Q::new(1, 3), Complex64::new(0.0, 3.0))];
    let mut worst: f64 = 0.0;
    for (k, x, z) in pts {
        worst = worst.max(lipschitz_check(k, x, z, 10_000)?.diff);
    }
    Ok(outcome(worst < 1e-6, format!("max |lhs - rhs| = {:.2e} at three points", worst)))
}

fn eichler() -> vvmf::error::Result<Outcome> {
    let t = Instant::now();
    let r = run_eichler(SEED, 100, 20);
    let el = t.elapsed();
    Ok(outcome(r.passed() && el < Duration::from_secs(120), format!("{} cases (100 matched, 20 mismatched), {} failures, {}", r.cases, r.failures.len(), secs(el))))
}

fn flagship() -> vvmf::error::Result<Outcome> {
    let m = lambda_g(2)?;
    let dc = AdmissibleDecomposition::block_split(&m)?;
    let sp = obstruction_span_steps(&m, &[dc], Q::from_integer(1), 2)?;
    let d = dim_cusp(Q::new(21, 2), &m.discriminant(), true)?;
    let pass = sp.stabilized && sp.rank == d;
    if pass {
        println!("Pic(F̄₂)^Heegner rank = 1");
    }
    let ranks: Vec<String> = sp.ranks.iter().map(|(p, r)| format!("P={}:{}", p, r)).collect();
    Ok(outcome(pass, format!("obstruction rank {} vs dim Cusp {}, ranks {}, stabilized {}", sp.rank, d, ranks.join(" "), sp.stabilized)))
}

fn easy_instance() -> vvmf::error::Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let m = from_blocks("U(1) + U(1) + E8(-1)")?;
    let dc = AdmissibleDecomposition::block_split(&m)?;
    let dim = dim_cusp(Q::from_integer(6), &m.discriminant(), true)?;
    let sp = obstruction_span(&m, &[dc.clone()], Q::from_integer(2))?;
    let mut passed = 0;
    for _ in 0..10 {
        let mut h = HeegnerCombo::new(&m)?;
        for _ in 0..rng.gen_range(1..=4) {
            h.add_term(Q::from_integer(-rng.gen_range(1..=5)), 0, Q::from_integer(rng.gen_range(-9..=9)))?;
        }
        let hodge = hodge_criterion(&h, &sp.basis)?.verdict == HodgeVerdict::ProportionalToHodge;
        let bf = matches!(bf_boundary_check(&h, &dc, Q::from_integer(5))?, BoundaryVerdict::PassesThisPlane);
        passed += (hodge && bf) as usize;
    }
    let pass = dim == 0 && sp.rank == 0 && passed == 10;
    Ok(outcome(pass, format!("dim Cusp {}, obstruction rank {}, {}/10 combinations pass", dim, sp.rank, passed)))
}

fn rank_formula() -> vvmf::error::Result<Outcome> {
    let r = run_rank_formula(200);
    Ok(outcome(r.passed(), format!("g = 2..200 integral, g <= 12 equal to 1 + dim Cusp, {} failures {:?}", r.failures.len(), r.failures)))
}

fn main() {
    let criteria: Vec<(&str, fn() -> vvmf::error::Result<Outcome>)> = vec![
        ("Weil relations", weil_relations_small),
        ("Milgram", milgram_all),
        ("theta modularity", theta_modularity),
        ("Θ_E8 = 240σ₃", theta_e8),
        ("Hecke", hecke),
        ("lift/descent", lift_descent),
        ("Lipschitz", lipschitz),
        ("Eichler", eichler),
        ("flagship g = 2", flagship),
        ("U²⊕E8(−1)", easy_instance),
        ("rank formula", rank_formula),
    ];
    let results: Vec<Outcome> = std::thread::scope(|s| {
        let hs: Vec<_> = criteria.iter().map(|&(_, f)| s.spawn(move || run(f))).collect();
        hs.into_iter().map(|h| h.join().unwrap_or_else(|_| outcome(false, "panicked".into()))).collect()
    });
    let mut failed = 0;
    for (i, ((name, _), r)) in criteria.iter().zip(&results).enumerate() {
        println!("criterion {:>2} [{}] {}: {}", i + 1, if r.pass { "PASS" } else { "FAIL" }, name, r.detail);
        failed += (!r.pass) as usize;
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
