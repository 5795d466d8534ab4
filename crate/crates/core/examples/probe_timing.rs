use std::time::Instant;
use urnlab_core::exact::UrnConfig;
use urnlab_core::schedule::{self, Schedule};

fn main() {
    let cfg = UrnConfig::new(1, 1).unwrap();
    let s = Schedule::polynomial_floor("1".parse().unwrap(), 1).unwrap();

    for n in [0u64, 100, 1_000, 10_000] {
        let t = Instant::now();
        let v = schedule::survival_general(&cfg, &s, n);
        println!("survival_general({n}) -> f64 {:.6} in {:?}", v.to_f64(), t.elapsed());
    }

    for depth in [1_000u64, 10_000, 100_000] {
        let t = Instant::now();
        let verdict = schedule::classify_with_depth(&cfg, &s, depth);
        println!("classify depth {depth}: {verdict:?} in {:?}", t.elapsed());
    }
}
