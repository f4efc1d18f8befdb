//! Checks the degree-two coset identity for C̃_α u(Ã) d(B̃) on a few finite quadratic modules.

use vvmf::arith::Q;
use vvmf::discriminant::DiscriminantForm;
use vvmf::mp::parse_word;
use vvmf::mp4::verify_coset_action;

fn main() -> vvmf::error::Result<()> {
    let forms = [(2, Q::new(3, 4)), (3, Q::new(1, 3)), (4, Q::new(1, 8)), (5, Q::new(2, 5)), (7, Q::new(1, 7))];
    let words = [("", ""), ("S", "T"), ("ST", "TS"), ("TTS", "S"), ("STt", "TTST")];
    for (n, q) in forms {
        let g = DiscriminantForm::cyclic(n, q)?;
        for alpha in [0, -1, -2, -3] {
            for (a, b) in words {
                let r = verify_coset_action(&g, alpha, &parse_word(a)?, &parse_word(b)?)?;
                println!(
                    "Z/{n} q={q} α={alpha:>2} Ã={a:<4} B̃={b:<5} holds={} literal-α={} factor-branch={} φ-equation={:?}",
                    r.holds, r.holds_literal_alpha, r.factorization_branch_agrees, r.functional_equation
                );
            }
        }
    }
    Ok(())
}
