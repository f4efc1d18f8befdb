//! Θ_{E8} against 240σ₃(n) and the weight-4 Eisenstein series.

use vvmf::arith::{sigma, Q};
use vvmf::lattice::e8;
use vvmf::qexp::eisenstein_level_one;
use vvmf::theta::theta_coeffs;

fn main() -> vvmf::error::Result<()> {
    let n = 10;
    let th = theta_coeffs(&e8(1)?, None, Q::from_integer(n))?;
    let eis = eisenstein_level_one(4, n as u64);
    for m in 0..=n {
        let c = th.get(0, Q::from_integer(m)).as_rational().expect("rational coefficient");
        let want = if m == 0 { 1 } else { 240 * sigma(3, m as u64) as i64 };
        println!("n = {:>2}  Θ {:>8}  240σ₃ {:>8}  E4 {:>8}", m, c, want, eis[m as usize]);
    }
    Ok(())
}
