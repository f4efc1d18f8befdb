use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use vvmf::eichler::{divisibility, dual_class_in, eichler_move, is_primitive, EichlerSetting};
use vvmf::matrix::bilinear;

fn main() {
    let seed: u64 = std::env::args().nth(1).map_or(2024, |a| a.parse().expect("seed"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = std::time::Instant::now();
    let mut tally: BTreeMap<String, usize> = BTreeMap::new();
    let mut failures = 0;
    for m in 1..=4 {
        let set = EichlerSetting::new(m).unwrap();
        let g = &set.lattice.gram;
        let gm = set.lattice.discriminant();
        let mut buckets: BTreeMap<(i64, i64, usize), Vec<Vec<i64>>> = BTreeMap::new();
        for _ in 0..4000 {
            let u: Vec<i64> = (0..m + 4).map(|_| rng.gen_range(-5..=5)).collect();
            if is_primitive(&u) {
                buckets.entry((bilinear(g, &u, &u), divisibility(g, &u), dual_class_in(&gm, g, &u))).or_default().push(u);
            }
        }
        let pairs: Vec<_> = buckets.values().filter(|b| b.len() >= 2).map(|b| (b[0].clone(), b[1].clone())).take(40).collect();
        for (u, v) in pairs {
            match eichler_move(&set, &u, &v) {
                Ok(mv) if mv.isometry.preserves(g) && mv.isometry.apply(&u) == v => {
                    *tally.entry(format!("m={} {:?}", m, mv.subcase)).or_default() += 1;
                }
                other => {
                    failures += 1;
                    println!("FAIL m={} u={:?} v={:?}: {:?}", m, u, v, other.err());
                }
            }
        }
    }
    for (k, n) in &tally {
        println!("{}: {}", k, n);
    }
    println!("failures {}, {:.1}s", failures, t.elapsed().as_secs_f64());
}
