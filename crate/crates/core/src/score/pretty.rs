use std::fmt::Write;

use super::ast::{Body, Event, Score};

/// Canonical source text for `score`; parsing it yields an equal score.
pub fn pretty_print(score: &Score) -> String {
    let mut out = String::new();
    writeln!(out, "model {}", score.model).unwrap();
    writeln!(out, "tempo {}", score.tempo_bpm).unwrap();
    for v in &score.voices {
        writeln!(out).unwrap();
        writeln!(out, "voice {} {{", v.id).unwrap();
        for e in &v.events {
            match e {
                Event::Bar => out.push_str("  |\n"),
                Event::Tone(t) => writeln!(out, "  {} {}", body(&t.body), t.duration.symbol()).unwrap(),
            }
        }
        out.push_str("}\n");
    }
    out
}

fn body(b: &Body) -> String {
    match b {
        Body::Pure(n) => n.to_string(),
        Body::Superpose { terms, renormalize } => {
            let terms: Vec<String> = terms.iter().map(|t| format!("{} {}", t.amp, t.note)).collect();
            format!("sup{}{{{}}}", if *renormalize { "~" } else { "" }, terms.join(", "))
        }
        Body::Occ { note, alpha, beta } => format!("occ({note}, {alpha}, {beta})"),
        Body::Gated { gate, inner } => format!("{gate}({})", body(inner)),
        Body::Bell { kind, lo, hi } => format!("{kind}({lo}, {hi})"),
    }
}
