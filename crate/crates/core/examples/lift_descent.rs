//! Adjointness of ↑_H and ↓_H and ↓↑ = |H| on random isotropic subgroups.

use vvmf::checks::{random_isotropic_pairs, run_lift_descent};

fn main() {
    let seed: u64 = std::env::args().nth(1).map_or(2024, |a| a.parse().expect("seed"));
    for (g, h) in random_isotropic_pairs(seed, 20) {
        println!("G = {:?} q = {:?}  |H| = {}", g.divisors, g.qgen.iter().map(|x| x.to_string()).collect::<Vec<_>>(), h.order());
    }
    let r = run_lift_descent(seed, 20);
    println!("{} pairs, failures {:?}", r.cases, r.failures);
}
