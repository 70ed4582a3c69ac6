//! The occupancy ladder: states of one note with decreasing mean occupancy,
//! their gray levels, and which pairs are complementary.

use qmusic::models::{complementary_sequence, gray_level, NoteLabel, Pitch, OCCUPANCY_LADDER};
use qmusic::qcore::{is_complementary, overlap};

fn main() {
    let c = NoteLabel::new(Pitch::C, 0);
    let ladder = complementary_sequence(c, &OCCUPANCY_LADDER).unwrap();
    let states: Vec<_> = ladder.iter().map(|s| s.to_state()).collect();

    println!("gray levels: {}", ladder.iter().map(|s| gray_level(s).to_string()).collect::<Vec<_>>().join(" "));
    println!("overlap |<i|j>|, * marks complementary pairs:");
    for a in &states {
        let row: Vec<String> = states
            .iter()
            .map(|b| {
                let mark = if is_complementary(a, b).unwrap() { '*' } else { ' ' };
                format!("{:.3}{mark}", overlap(a, b).unwrap())
            })
            .collect();
        println!("  {}", row.join(" "));
    }

    let err = complementary_sequence(c, &[0.2, 0.5, 0.4]).unwrap_err();
    println!("non-monotone ladder: {err}");
}
