//! Many listeners, one quantum score: each hears a classical melody.
//!
//! Run with `cargo run --example parallelism -- [count] [seed]`.

use std::collections::BTreeMap;

use qmusic::perform::{melody_distribution, sample_performance};
use qmusic::score::parse;

fn main() {
    let mut args = std::env::args().skip(1);
    let count: u64 = args.next().map_or(10_000, |a| a.parse().expect("count"));
    let seed: u64 = args.next().map_or(42, |a| a.parse().expect("seed"));

    let score = parse(include_str!("scores/two_note.qms")).expect("valid score");
    let exact = melody_distribution(&score, "v1").unwrap();

    let mut heard: BTreeMap<String, u64> = BTreeMap::new();
    for p in sample_performance(&score, seed, count).unwrap() {
        *heard.entry(p.melody()).or_default() += 1;
    }

    println!("{count} listeners, seed {seed}");
    println!("{:<8} {:>10} {:>10}", "melody", "exact", "heard");
    for e in &exact.entries {
        let n = heard.get(&e.label()).copied().unwrap_or(0);
        println!("{:<8} {:>10.4} {:>10.4}", e.label(), e.p, n as f64 / count as f64);
    }
}
