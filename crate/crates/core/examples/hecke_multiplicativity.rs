//! T₄T₉ = T₃₆ on Θ_{⟨2⟩} and the vector/scalar Hecke comparison on small forms.

use vvmf::arith::Q;
use vvmf::hecke::{hecke_t, scalar_comparison, star_condition};
use vvmf::lattice::{a2, angle, d4};
use vvmf::theta::theta_coeffs;

fn main() -> vvmf::error::Result<()> {
    let f = theta_coeffs(&angle(2)?, None, Q::from_integer(72))?;
    let p = Q::from_integer(2);
    let t4t9 = hecke_t(2, &hecke_t(3, &f, Q::from_integer(8))?, p)?;
    let t36 = hecke_t(6, &f, p)?;
    println!("T4 T9 = T36 on Θ_<2> up to q^2: {}", t4t9.to_text() == t36.to_text());
    print!("{}", t36.to_text());
    for (name, m, pr) in [("<2>", angle(2)?, 2u64), ("<4>", angle(4)?, 2), ("<2>", angle(2)?, 3), ("<4>", angle(4)?, 3), ("D4", d4(1)?, 2), ("A2", a2(1)?, 3), ("<6>", angle(6)?, 3)] {
        let f = theta_coeffs(&m, None, Q::from_integer(3 * (pr * pr) as i64))?;
        let g = f.effective_form();
        let gammas: Vec<_> = g.elements().filter(|&x| star_condition(&g, x, pr)).collect();
        if gammas.is_empty() {
            println!("{:<4} p = {}: (*_p) holds for no γ", name, pr);
            continue;
        }
        for gamma in gammas {
            let r = scalar_comparison(&f, gamma, pr, 1, Q::from_integer(3))?;
            println!("{:<4} p = {} γ = {}: p^n γ reading {}, p^2n γ reading {}", name, pr, gamma, r.with_pn, r.with_p2n);
        }
    }
    Ok(())
}
