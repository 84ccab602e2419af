//! Compares the two MaxMin methods on generated GKD_D instances.
//!
//! cargo run --release --example maxmin_methods -- [n] [m] [instances]

use std::time::Instant;

use dispersion::instance::{generate, GeneratorSpec};
use dispersion::solvers::{solve_maxmin_improved, solve_maxmin_original, SolverBudget};
use dispersion::Family;

fn main() {
    let args: Vec<usize> = std::env::args().skip(1).map(|a| a.parse().expect("integer argument")).collect();
    let n = args.first().copied().unwrap_or(100);
    let m = args.get(1).copied().unwrap_or(10);
    let count = args.get(2).copied().unwrap_or(5);
    let b = SolverBudget::default();
    println!("seed,distinct,z,improved_ms,improved_solves,original_ms,original_solves");
    for seed in 0..count as u64 {
        let inst = generate(&GeneratorSpec::new(Family::GkdD, n, m, seed)).unwrap();
        let t = Instant::now();
        let a = solve_maxmin_improved(&inst, m, &b).unwrap();
        let ta = t.elapsed().as_secs_f64() * 1e3;
        let t = Instant::now();
        let o = solve_maxmin_original(&inst, m, &b).unwrap();
        let to = t.elapsed().as_secs_f64() * 1e3;
        assert_eq!(a.value, o.value);
        println!(
            "{seed},{},{},{ta:.1},{},{to:.1},{}",
            inst.distinct_distances().len(),
            a.value.unwrap(),
            a.stats.decision_solves,
            o.stats.decision_solves
        );
    }
}
