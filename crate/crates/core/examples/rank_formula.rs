//! r_g with its terms, and the comparison with 1 + dim S_{21/2}(ρ*) for small g.

use vvmf::arith::Q;
use vvmf::heegner::{dim_cusp, rank_formula_terms};
use vvmf::lattice::lambda_g;

fn main() -> vvmf::error::Result<()> {
    let max: i64 = std::env::args().nth(1).map_or(20, |a| a.parse().expect("genus bound"));
    println!("{:>4} {:>10} {:>6} {:>6} {:>6} {:>8} {:>6} {:>5} {:>12}", "g", "leading", "2nd", "3rd", "4th", "frac", "count", "r_g", "1+dim Cusp");
    for g in 2..=max {
        let t = rank_formula_terms(g)?;
        let oracle = if g <= 12 { (1 + dim_cusp(Q::new(21, 2), &lambda_g(g)?.discriminant(), true)?).to_string() } else { "-".into() };
        println!(
            "{:>4} {:>10} {:>6} {:>6} {:>6} {:>8} {:>6} {:>5} {:>12}",
            g,
            t.leading.to_string(),
            t.second.to_string(),
            t.third.to_string(),
            t.fourth.to_string(),
            t.frac_sum.to_string(),
            t.integral_count,
            t.total,
            oracle
        );
    }
    Ok(())
}
