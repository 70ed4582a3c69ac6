//! Gates on a single note mode and the gray level a listener would see.

use qmusic::models::{gray_level, NoteLabel, OccupancyState, Pitch};
use qmusic::qcore::{apply_unitary, gate, inner_product, normalize, Amplitude, GateName};

fn main() {
    let g = NoteLabel::new(Pitch::G, 0);
    let vacuum = OccupancyState::vacuum(g);
    println!("vacuum g:       {}", vacuum.to_state());

    for name in [GateName::X, GateName::H, GateName::I] {
        let out = apply_unitary(&gate(name), &vacuum.to_state()).unwrap();
        let occ = OccupancyState::from_state(g, &out).unwrap();
        println!("{name}|0_g>:          {out}   gray {}", gray_level(&occ));
    }

    // (|0_g> - |1_g>)/sqrt 2, written by label
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let s = vacuum.to_state();
    let amps: Vec<Amplitude> =
        s.labels().iter().map(|l| Amplitude::new(if l.starts_with('0') { h } else { -h }, 0.0)).collect();
    let target = normalize(&amps, s.labels()).unwrap();
    let out = apply_unitary(&gate(GateName::H), &s).unwrap();
    let ip = inner_product(&target, &out).unwrap();
    println!("<(0_g - 1_g)/sqrt2 | H 0_g> = {ip:.6}  (equal up to a global phase)");

    let back = apply_unitary(&gate(GateName::H), &out).unwrap();
    println!("H H|0_g>:       {back}");
}
