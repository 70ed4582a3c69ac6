use std::collections::BTreeMap;

use super::{measure, MelodyDistribution, Outcome};
use crate::models::{GrayLevel, NoteLabel};
use crate::score::{Body, Event, Score};
use crate::util::format_sig;

/// `melody,probability` rows in the distribution's order, LF line endings.
pub fn render_csv(md: &MelodyDistribution) -> String {
    let mut out = String::from("melody,probability\n");
    for e in &md.entries {
        out.push_str(&e.label());
        out.push(',');
        out.push_str(&format_sig(e.p, 12));
        out.push('\n');
    }
    out
}

enum Cell {
    Empty,
    Gray(u8),
    BracketTop(u8),
    BracketMid,
    BracketBottom(u8),
    Bar,
    Unknown,
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Empty => ".".into(),
            Cell::Gray(g) => g.to_string(),
            Cell::BracketTop(g) => format!("┌{g}"),
            Cell::BracketMid => "│".into(),
            Cell::BracketBottom(g) => format!("└{g}"),
            Cell::Bar => "|".into(),
            Cell::Unknown => "?".into(),
        }
    }
}

/// Chance that each note sounds in this event, as a gray level.
fn sounding_levels(score: &Score, body: &Body) -> Option<BTreeMap<NoteLabel, u8>> {
    let m = measure(score.model, body).ok()?;
    let mut weight: BTreeMap<NoteLabel, f64> = body.notes().into_iter().map(|n| (n, 0.0)).collect();
    for (o, p) in m.outcomes.iter().zip(m.probabilities()) {
        if let Outcome::Notes(ns) = o {
            for n in ns {
                *weight.entry(*n).or_default() += p;
            }
        }
    }
    Some(weight.into_iter().map(|(n, w)| (n, GrayLevel::from_weight(w).rounded())).collect())
}

fn bell_pair(body: &Body) -> Option<(NoteLabel, NoteLabel)> {
    match body {
        Body::Bell { lo, hi, .. } => Some((*lo, *hi)),
        Body::Gated { inner, .. } => bell_pair(inner),
        _ => None,
    }
}

/// A monospaced staff sketch, one block per voice.
///
/// Rows are the voice's notes, highest first; columns are events. A cell is
/// the chance (in percent) that the note sounds, which for occupancy modes is
/// the gray level of the mean occupancy. Entangled pairs are joined by a
/// bracket. Phases are not shown.
pub fn render_text(score: &Score) -> String {
    let mut out = String::new();
    for v in &score.voices {
        out.push_str(&format!("voice {}\n", v.id));
        let mut rows: Vec<NoteLabel> = v.tones().flat_map(|t| t.body.notes()).collect();
        rows.sort_unstable_by(|a, b| b.cmp(a));
        rows.dedup();
        if rows.is_empty() {
            continue;
        }

        let columns: Vec<Vec<Cell>> = v
            .events
            .iter()
            .map(|e| match e {
                Event::Bar => rows.iter().map(|_| Cell::Bar).collect(),
                Event::Tone(t) => {
                    let Some(levels) = sounding_levels(score, &t.body) else {
                        return rows
                            .iter()
                            .map(|n| if t.body.notes().contains(n) { Cell::Unknown } else { Cell::Empty })
                            .collect();
                    };
                    let span = bell_pair(&t.body).map(|(a, b)| {
                        let ia = rows.iter().position(|r| *r == a).unwrap();
                        let ib = rows.iter().position(|r| *r == b).unwrap();
                        (ia.min(ib), ia.max(ib))
                    });
                    rows.iter()
                        .enumerate()
                        .map(|(i, n)| match (span, levels.get(n)) {
                            (Some((top, _)), Some(&g)) if i == top => Cell::BracketTop(g),
                            (Some((_, bottom)), Some(&g)) if i == bottom => Cell::BracketBottom(g),
                            (Some((top, bottom)), None) if i > top && i < bottom => Cell::BracketMid,
                            (_, Some(&g)) => Cell::Gray(g),
                            (_, None) => Cell::Empty,
                        })
                        .collect()
                }
            })
            .collect();

        let label_width = rows.iter().map(|n| n.to_string().len()).max().unwrap_or(0);
        let widths: Vec<usize> =
            columns.iter().map(|c| c.iter().map(|cell| cell.text().chars().count()).max().unwrap_or(1)).collect();
        for (i, n) in rows.iter().enumerate() {
            let mut line = format!("{:<label_width$}:", n.to_string());
            for (col, w) in columns.iter().zip(&widths) {
                let text = col[i].text();
                let pad = w - text.chars().count();
                line.push(' ');
                line.extend(std::iter::repeat_n(' ', pad));
                line.push_str(&text);
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
    }
    out
}
