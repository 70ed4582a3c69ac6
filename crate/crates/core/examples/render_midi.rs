//! Renders sampled performances of a score to a Standard MIDI File, plus a
//! text staff and the exact distribution as CSV.
//!
//! `cargo run --example render_midi -- [score.qms] [out.mid] [seed] [count]`

use qmusic::perform::{melody_distribution, render_csv, render_midi, render_text, sample_performance};
use qmusic::score::parse;

fn main() {
    let mut args = std::env::args().skip(1);
    let src = match args.next() {
        Some(path) => std::fs::read_to_string(path).expect("readable score"),
        None => include_str!("scores/two_note.qms").to_string(),
    };
    let out = args.next().unwrap_or_else(|| std::env::temp_dir().join("qmusic.mid").to_string_lossy().into_owned());
    let seed: u64 = args.next().map_or(42, |s| s.parse().expect("seed"));
    let count: u64 = args.next().map_or(1, |s| s.parse().expect("count"));

    let score = match parse(&src) {
        Ok(s) => s,
        Err(errs) => {
            errs.iter().for_each(|e| eprintln!("{e}"));
            std::process::exit(1);
        }
    };

    print!("{}", render_text(&score));
    let first = &score.voices[0].id;
    if let Ok(md) = melody_distribution(&score, first) {
        print!("{}", render_csv(&md));
    }

    let samples = sample_performance(&score, seed, count).unwrap();
    for p in &samples {
        println!("performance {}: {}", p.index, p.melody());
    }
    let bytes = render_midi(&samples, score.tempo_bpm).unwrap();
    std::fs::write(&out, &bytes).expect("writable output");
    println!("wrote {} bytes to {out}", bytes.len());
}
