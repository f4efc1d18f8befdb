//! Discriminant form invariants, isotropic subgroups and splitting criteria for a few lattices.

use vvmf::discform::{isotropic_subgroups, orthogonal_group};
use vvmf::discriminant::form_invariants;
use vvmf::lattice::{from_blocks, split_predicates, write_lattice_file};

fn main() -> vvmf::error::Result<()> {
    for expr in ["<-2> + E8(-1) + E8(-1) + U(1) + U(1)", "U(1) + U(2) + A1(-1) + A1(-1)", "D4(1)", "<4> + <-4>", "U(3) + A2(-1)"] {
        let l = from_blocks(expr)?;
        let g = l.discriminant();
        let inv = form_invariants(&g);
        let subs = isotropic_subgroups(&g);
        let nontrivial = subs.iter().filter(|h| h.order() > 1).count();
        let aut = orthogonal_group(&g, 100_000)?.len();
        println!("{}", expr);
        println!("  rank {} signature {:?} det {}", l.rank(), l.signature, l.det());
        println!("  G = {:?}, level {}, sign mod 8 {}, coparity {:?}", g.divisors, inv.level, inv.signature_mod8, inv.coparity);
        println!("  isotropic subgroups {} (nontrivial {}), |O(G)| = {}", subs.len(), nontrivial, aut);
        for (p, _) in &inv.p_ranks {
            println!("  p = {}: {:?}", p, split_predicates(&l, *p));
        }
    }
    print!("{}", write_lattice_file(&from_blocks("U(1) + U(2) + A1(-1)")?.named("eichler_1")));
    Ok(())
}
