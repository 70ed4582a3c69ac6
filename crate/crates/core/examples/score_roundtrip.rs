//! Parsing, error reporting and canonical reprinting of `.qms` scores.

use qmusic::score::{parse, pretty_print};

const BROKEN: &str = "model bundled 7
tempo 120
voice v { sup{0.8 c, 0.8 g} q occ(c, 1, 0) q z h }
voice v { psi-(e, e) q }
";

fn main() {
    for src in [include_str!("scores/octave8.qms"), include_str!("scores/hadamard.qms")] {
        let score = parse(src).unwrap();
        let printed = pretty_print(&score);
        assert_eq!(parse(&printed).unwrap(), score);
        println!("{printed}");
    }

    println!("errors in a broken score, all at once:");
    for e in parse(BROKEN).unwrap_err() {
        println!("  {e}");
    }
}
