use vvmf::arith::Q;
use vvmf::heegner::{dim_cusp, obstruction_span_steps, AdmissibleDecomposition};
use vvmf::lattice::lambda_g;

fn main() {
    let g: i64 = std::env::args().nth(1).map_or(2, |a| a.parse().expect("genus"));
    let m = lambda_g(g).unwrap();
    let dc = AdmissibleDecomposition::block_split(&m).unwrap();
    let t = std::time::Instant::now();
    let sp = obstruction_span_steps(&m, &[dc], Q::from_integer(1), 2).unwrap();
    let d = dim_cusp(Q::new(21, 2), &m.discriminant(), true).unwrap();
    for (p, r) in &sp.ranks {
        println!("P = {}: rank {}", p, r);
    }
    println!("dim Cusp_21/2 = {}, stabilized = {}, {:.1}s", d, sp.stabilized, t.elapsed().as_secs_f64());
    if sp.stabilized && sp.rank == d {
        println!("Pic(F̄{})^Heegner rank = 1", subscript(g));
    } else {
        println!("undecided: obstruction rank {} vs dim Cusp {}", sp.rank, d);
    }
}

fn subscript(n: i64) -> String {
    n.to_string().chars().map(|c| char::from_u32(0x2080 + c.to_digit(10).unwrap()).unwrap()).collect()
}
