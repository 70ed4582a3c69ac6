//! From a score to what an audience hears.
//!
//! Every event of a voice is an independent measurement: the listener hears
//! one outcome with its Born probability, and the probability of a whole
//! melody is the product over its events. A Bell pair is one joint
//! measurement of both notes.

mod midi;
mod render;

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

pub use midi::{render_midi, RenderError, TICKS_PER_QUARTER, VELOCITY};
pub use render::{render_csv, render_text};

use crate::models::{NoteLabel, OccupancyState};
use crate::qcore::{
    self, apply_unitary, bell_state, gate, Amplitude, Distribution, QError, SeededRng, StateVector, MODE_BITS,
};
use crate::score::{Body, Duration, Event, Model, Score};

/// Largest number of joint outcomes enumerated exactly.
pub const ENUM_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PerformError {
    #[error("no voice `{0}`")]
    UnknownVoice(String),
    #[error("event index {index} out of range (voice has {len} events)")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("event {0} is a bar line, not a measurable event")]
    NotMeasurable(usize),
    #[error("{count} joint outcomes exceed the enumeration cap of {cap}; sample performances instead")]
    EnumerationTooLarge { count: u128, cap: u128 },
    #[error("event cannot be evaluated: {0}")]
    State(#[from] QError),
    #[error("event is not valid in this model: {0}")]
    Invalid(String),
}

/// What a listener hears from one event.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    Rest,
    /// One note, or a chord when a Bell pair sounds on both notes.
    Notes(Vec<NoteLabel>),
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Rest => f.write_str("rest"),
            Outcome::Notes(ns) => {
                for (k, n) in ns.iter().enumerate() {
                    if k > 0 {
                        f.write_str("+")?;
                    }
                    write!(f, "{n}")?;
                }
                Ok(())
            }
        }
    }
}

/// An event's quantum state together with the outcome of each basis vector.
#[derive(Debug, Clone)]
pub struct Measurement {
    pub state: StateVector,
    pub outcomes: Vec<Outcome>,
}

impl Measurement {
    pub fn probabilities(&self) -> Vec<f64> {
        self.state.amps().iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn distribution(&self) -> Distribution {
        let outcomes = self.outcomes.iter().map(ToString::to_string).zip(self.probabilities()).collect();
        Distribution::new(outcomes).expect("states are normalized")
    }
}

fn mode_outcome(note: NoteLabel, bit: u8) -> Outcome {
    if bit == 1 {
        Outcome::Notes(vec![note])
    } else {
        Outcome::Rest
    }
}

fn mode_measurement(s: OccupancyState) -> Measurement {
    Measurement { state: s.to_state(), outcomes: MODE_BITS.iter().map(|&b| mode_outcome(s.note, b)).collect() }
}

/// The state an event prepares and how each basis outcome sounds.
pub fn measure(model: Model, body: &Body) -> Result<Measurement, PerformError> {
    match (model, body) {
        (Model::Bundled(_), Body::Pure(n)) => Ok(Measurement {
            state: StateVector::basis(&[n.to_string()], &n.to_string())?,
            outcomes: vec![Outcome::Notes(vec![*n])],
        }),
        (Model::Bundled(_), Body::Superpose { terms, .. }) => {
            // the subspace spanned by the written notes, lowest note first
            let mut terms: Vec<_> = terms.iter().map(|t| (t.note, t.amp.value())).collect();
            terms.sort_by_key(|(n, _)| *n);
            let labels: Vec<String> = terms.iter().map(|(n, _)| n.to_string()).collect();
            let amps: Vec<Amplitude> = terms.iter().map(|(_, a)| *a).collect();
            Ok(Measurement {
                state: qcore::normalize(&amps, &labels)?,
                outcomes: terms.iter().map(|(n, _)| Outcome::Notes(vec![*n])).collect(),
            })
        }
        (Model::Modes, Body::Pure(n)) => Ok(mode_measurement(OccupancyState::occupied(*n))),
        (Model::Modes, Body::Occ { note, alpha, beta }) => {
            let s = crate::models::occupancy_state(*note, alpha.value(), beta.value(), true)
                .map_err(|e| PerformError::Invalid(e.to_string()))?;
            Ok(mode_measurement(s))
        }
        (_, Body::Gated { gate: g, inner }) => {
            let inner = measure(model, inner)?;
            Ok(Measurement { state: apply_unitary(&gate(*g), &inner.state)?, outcomes: inner.outcomes })
        }
        (_, Body::Bell { kind, lo, hi }) => {
            let outcomes = MODE_BITS
                .iter()
                .flat_map(|&l| {
                    MODE_BITS.iter().map(move |&h| match (l, h) {
                        (1, 1) => Outcome::Notes(vec![*lo, *hi]),
                        (1, 0) => Outcome::Notes(vec![*lo]),
                        (0, 1) => Outcome::Notes(vec![*hi]),
                        _ => Outcome::Rest,
                    })
                })
                .collect();
            Ok(Measurement { state: bell_state(*kind, *lo, *hi)?, outcomes })
        }
        (Model::Modes, Body::Superpose { .. }) => Err(PerformError::Invalid("`sup` in model modes".into())),
        (Model::Bundled(_), Body::Occ { .. }) => Err(PerformError::Invalid("`occ` in model bundled".into())),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EventDistribution {
    pub event_index: usize,
    pub dist: Distribution,
}

fn voice<'s>(score: &'s Score, id: &str) -> Result<&'s crate::score::Voice, PerformError> {
    score.voice(id).ok_or_else(|| PerformError::UnknownVoice(id.to_string()))
}

/// Born distribution of event `event_index` (bar lines count as events).
pub fn event_distribution(
    score: &Score,
    voice_id: &str,
    event_index: usize,
) -> Result<EventDistribution, PerformError> {
    let v = voice(score, voice_id)?;
    match v.events.get(event_index) {
        None => Err(PerformError::IndexOutOfRange { index: event_index, len: v.events.len() }),
        Some(Event::Bar) => Err(PerformError::NotMeasurable(event_index)),
        Some(Event::Tone(t)) => {
            Ok(EventDistribution { event_index, dist: measure(score.model, &t.body)?.distribution() })
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MelodyEntry {
    pub melody: Vec<String>,
    pub p: f64,
}

impl MelodyEntry {
    pub fn label(&self) -> String {
        self.melody.join("-")
    }
}

/// Exact joint distribution over melodies, most likely first.
#[derive(Debug, Clone, PartialEq)]
pub struct MelodyDistribution {
    pub entries: Vec<MelodyEntry>,
}

impl MelodyDistribution {
    pub fn prob(&self, melody: &[&str]) -> f64 {
        self.entries
            .iter()
            .filter(|e| e.melody.iter().map(String::as_str).eq(melody.iter().copied()))
            .map(|e| e.p)
            .sum()
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|e| e.p).sum()
    }
}

type Support = Vec<(Vec<Outcome>, Vec<f64>, Duration)>;

/// Per-event outcomes with nonzero probability.
fn support(score: &Score, voice_id: &str) -> Result<Support, PerformError> {
    voice(score, voice_id)?
        .tones()
        .map(|t| {
            let m = measure(score.model, &t.body)?;
            let probs = m.probabilities();
            let (outs, ps): (Vec<_>, Vec<_>) = m.outcomes.into_iter().zip(probs).filter(|(_, p)| *p > 0.0).unzip();
            Ok((outs, ps, t.duration))
        })
        .collect()
}

pub fn melody_distribution(score: &Score, voice_id: &str) -> Result<MelodyDistribution, PerformError> {
    melody_distribution_capped(score, voice_id, ENUM_CAP)
}

/// As [`melody_distribution`], refusing to enumerate more than `cap` melodies.
pub fn melody_distribution_capped(
    score: &Score,
    voice_id: &str,
    cap: u128,
) -> Result<MelodyDistribution, PerformError> {
    let steps = support(score, voice_id)?;
    let count = steps.iter().fold(1u128, |acc, (o, _, _)| acc.saturating_mul(o.len() as u128));
    if count > cap {
        return Err(PerformError::EnumerationTooLarge { count, cap });
    }

    let mut partial: Vec<(Vec<String>, f64)> = vec![(Vec::new(), 1.0)];
    for (outs, ps, _) in &steps {
        let labels: Vec<String> = outs.iter().map(ToString::to_string).collect();
        partial = partial
            .into_iter()
            .flat_map(|(melody, p)| {
                labels.iter().zip(ps).map(move |(l, q)| {
                    let mut m = melody.clone();
                    m.push(l.clone());
                    (m, p * q)
                })
            })
            .collect();
    }

    let mut entries: Vec<MelodyEntry> = partial.into_iter().map(|(melody, p)| MelodyEntry { melody, p }).collect();
    // probabilities equal to 1e-12 count as ties
    entries.sort_by(|a, b| {
        let qa = (a.p * 1e12).round() as i64;
        let qb = (b.p * 1e12).round() as i64;
        qb.cmp(&qa).then_with(|| a.melody.cmp(&b.melody))
    });
    Ok(MelodyDistribution { entries })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Heard {
    pub outcome: Outcome,
    pub duration: Duration,
}

/// One voice as heard in one performance.
#[derive(Debug, Clone, PartialEq)]
pub struct VoiceTake {
    pub voice: String,
    pub heard: Vec<Heard>,
    pub probability: f64,
}

impl VoiceTake {
    pub fn melody(&self) -> String {
        self.heard.iter().map(|h| h.outcome.to_string()).collect::<Vec<_>>().join("-")
    }
}

/// One classical realization of a score.
#[derive(Debug, Clone, PartialEq)]
pub struct PerformanceSample {
    pub seed: u64,
    pub index: u64,
    pub voices: Vec<VoiceTake>,
    /// Product of the Born probabilities of everything heard.
    pub probability: f64,
}

impl PerformanceSample {
    /// The melody of a single-voice score, or `id=melody` pairs joined by `;`.
    pub fn melody(&self) -> String {
        match self.voices.as_slice() {
            [only] => only.melody(),
            many => many.iter().map(|t| format!("{}={}", t.voice, t.melody())).collect::<Vec<_>>().join(";"),
        }
    }
}

struct Step {
    outcomes: Vec<Outcome>,
    dist: Distribution,
    duration: Duration,
}

/// Samples `count` performances. Performance `k` draws from its own stream
/// `(seed, k)`, so the result does not depend on scheduling.
pub fn sample_performance(score: &Score, seed: u64, count: u64) -> Result<Vec<PerformanceSample>, PerformError> {
    let plan: Vec<(String, Vec<Step>)> = score
        .voices
        .iter()
        .map(|v| {
            let steps = support(score, &v.id)?
                .into_iter()
                .map(|(outcomes, ps, duration)| {
                    let labels = outcomes.iter().map(ToString::to_string);
                    let dist = Distribution::new(labels.zip(ps).collect()).expect("renormalized support");
                    Step { outcomes, dist, duration }
                })
                .collect();
            Ok((v.id.clone(), steps))
        })
        .collect::<Result<_, PerformError>>()?;

    Ok((0..count)
        .into_par_iter()
        .map(|index| {
            let mut rng = SeededRng::stream(seed, index);
            let voices: Vec<VoiceTake> = plan
                .iter()
                .map(|(id, steps)| {
                    let mut probability = 1.0;
                    let heard = steps
                        .iter()
                        .map(|s| {
                            let k = qcore::sample_index(&s.dist, &mut rng);
                            probability *= s.dist.outcomes()[k].1;
                            Heard { outcome: s.outcomes[k].clone(), duration: s.duration }
                        })
                        .collect();
                    VoiceTake { voice: id.clone(), heard, probability }
                })
                .collect();
            let probability = voices.iter().map(|t| t.probability).product();
            PerformanceSample { seed, index, voices, probability }
        })
        .collect())
}
