//! Both sides of the Lipschitz summation formula at three points.

use num_complex::Complex64;
use vvmf::arith::Q;
use vvmf::qexp::lipschitz_check;

fn main() -> vvmf::error::Result<()> {
    let pts = [(2.0, Q::new(0, 1), Complex64::new(0.0, 2.0)), (2.5, Q::new(1, 4), Complex64::new(1.0 / 3.0, 1.0)), (4.0, Q::new(1, 3), Complex64::new(0.0, 3.0))];
    for (k, x, z) in pts {
        let r = lipschitz_check(k, x, z, 10_000)?;
        println!("k = {} x = {} z = {}: lhs {:.12} rhs {:.12} |diff| {:.2e} (tails {:.1e}, {:.1e})", k, x, z, r.lhs, r.rhs, r.diff, r.lhs_tail, r.rhs_tail);
    }
    Ok(())
}
