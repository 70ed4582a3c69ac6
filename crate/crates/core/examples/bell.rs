//! Entangled note pairs: the four Bell states, their correlations, and the
//! product test that separates them from independent notes.

use std::collections::BTreeMap;

use qmusic::models::{NoteLabel, Pitch};
use qmusic::perform::sample_performance;
use qmusic::qcore::{bell_state, inner_product, is_entangled, normalize, product_defect, tensor, Amplitude, BellKind};
use qmusic::score::parse;

fn main() {
    let (e, a) = (NoteLabel::new(Pitch::E, 0), NoteLabel::new(Pitch::A, 0));
    let states: Vec<_> = BellKind::ALL.iter().map(|&k| bell_state(k, e, a).unwrap()).collect();

    println!("Gram matrix of the Bell states:");
    for x in &states {
        let row: Vec<String> = states.iter().map(|y| format!("{:5.2}", inner_product(x, y).unwrap().re)).collect();
        println!("  {}", row.join(" "));
    }
    for (k, s) in BellKind::ALL.iter().zip(&states) {
        println!(
            "{k:>4}: {s}   |a1 a4 - a2 a3| = {:.3}  entangled: {}",
            product_defect(s).unwrap(),
            is_entangled(s).unwrap()
        );
    }

    let h = std::f64::consts::FRAC_1_SQRT_2;
    let half =
        |l: &str| normalize(&[Amplitude::new(h, 0.0), Amplitude::new(h, 0.0)], &[format!("1_{l}"), format!("0_{l}")]);
    let product = tensor(&half("e").unwrap(), &half("a").unwrap()).unwrap();
    println!("independent e, a: entangled: {}", is_entangled(&product).unwrap());

    let score = parse("model modes\ntempo 60\nvoice v { psi-(e, a) q phi+(e, a) q }").unwrap();
    let mut seen: BTreeMap<String, u32> = BTreeMap::new();
    for p in sample_performance(&score, 1, 10_000).unwrap() {
        *seen.entry(p.melody()).or_default() += 1;
    }
    println!("psi- then phi+, 10000 performances:");
    for (m, n) in seen {
        println!("  {m:<10} {n}");
    }
}
