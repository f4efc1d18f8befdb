//! Modularity residuals of Θ_{⟨2⟩}, Θ_{E8} and Θ_{E8,F_u} under S and T, with certified truncation tails.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use vvmf::arith::Q;
use vvmf::harmonic::{f_u, harmonic_basis_form, HarmonicPolynomial};
use vvmf::lattice::{angle, e8};
use vvmf::mp::MetaplecticElement;
use vvmf::qexp::modularity_residual;
use vvmf::theta::{positive_form, tail_bound, theta_coeffs};

fn main() -> vvmf::error::Result<()> {
    let prec = Q::from_integer(25);
    let samples = [Complex64::new(0.0, 2.0), Complex64::new(1.0, 2.0), Complex64::new(0.5, 1.5)];
    let e = e8(1)?;
    let form = positive_form(&e);
    let mut u = vec![BigRational::from_integer(BigInt::from(0)); 8];
    u[0] = BigRational::from_integer(BigInt::from(1));
    u[3] = BigRational::from_integer(BigInt::from(1));
    let hp = harmonic_basis_form(&form, 2).remove(0);
    let fu = HarmonicPolynomial { poly: f_u(&form, &u), ..hp };
    let cases: Vec<(&str, _, Option<&HarmonicPolynomial>)> = vec![("Θ_<2>", angle(2)?, None), ("Θ_E8", e.clone(), None), ("Θ_E8,F_u", e.clone(), Some(&fu))];
    for (name, m, f) in cases {
        let t = std::time::Instant::now();
        let th = theta_coeffs(&m, f, prec)?;
        let tb = tail_bound(&m, f);
        for (gname, el) in [("S", MetaplecticElement::s()), ("T", MetaplecticElement::t())] {
            let r = modularity_residual(&th, &el, &samples, &tb)?;
            println!(
                "{:<9} {}  residual {:.2e}  tail {:.2e}  certified(1e-8) {}  slots {}  ({:.1?})",
                name,
                gname,
                r.max_residual,
                r.tail_bound,
                r.certified(1e-8),
                th.slots().len(),
                t.elapsed()
            );
        }
    }
    Ok(())
}
