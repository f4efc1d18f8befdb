//! U² ⊕ E8(−1): no cusp forms of weight 6, no obstructions, and every Heegner combination passes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vvmf::arith::Q;
use vvmf::heegner::{bf_boundary_check, dim_cusp, hodge_criterion, obstruction_span, AdmissibleDecomposition, HeegnerCombo};
use vvmf::lattice::from_blocks;

fn main() -> vvmf::error::Result<()> {
    let seed: u64 = std::env::args().nth(1).map_or(2024, |a| a.parse().expect("seed"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = from_blocks("U(1) + U(1) + E8(-1)")?;
    let dc = AdmissibleDecomposition::block_split(&m)?;
    let dim = dim_cusp(Q::from_integer(6), &m.discriminant(), true)?;
    let sp = obstruction_span(&m, &[dc.clone()], Q::from_integer(2))?;
    println!("dim Cusp = {}, obstruction rank = {}, stabilized = {}", dim, sp.rank, sp.stabilized);
    for i in 0..10 {
        let mut h = HeegnerCombo::new(&m)?;
        for _ in 0..rng.gen_range(1..=4) {
            h.add_term(Q::from_integer(-rng.gen_range(1..=5)), 0, Q::from_integer(rng.gen_range(-9..=9)))?;
        }
        let hodge = hodge_criterion(&h, &sp.basis)?;
        let bf = bf_boundary_check(&h, &dc, Q::from_integer(5))?;
        println!("combo {}: {} terms, Hodge {:?}, boundary {:?}", i, h.terms.len(), hodge.verdict, bf);
    }
    Ok(())
}
