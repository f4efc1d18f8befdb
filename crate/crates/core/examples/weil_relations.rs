//! Runs the Weil relation and Milgram checks over the bundled corpus, with timings.

use std::time::Instant;
use vvmf::checks::{corpus, label, milgram, weil_relations};

fn main() {
    let total = Instant::now();
    for l in corpus() {
        let t = Instant::now();
        let g = l.discriminant();
        let bad = weil_relations(&g);
        println!(
            "{:<28} |G|={:<3} sign={:<2} relations={} milgram={} ({:.2?})",
            label(&l),
            g.order(),
            l.sign(),
            if bad.is_empty() { "ok".to_string() } else { bad.join(", ") },
            milgram(&l),
            t.elapsed()
        );
    }
    println!("total {:.2?}", total.elapsed());
}
