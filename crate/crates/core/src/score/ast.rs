use std::fmt;

use crate::models::NoteLabel;
use crate::qcore::{Amplitude, BellKind, GateName};

/// Source position of a node, 1-based. Ignored by equality so that a score
/// compares equal to its own reprint.
#[derive(Debug, Clone, Copy, Default, Eq)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

impl PartialEq for Span {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl std::hash::Hash for Span {
    fn hash<H: std::hash::Hasher>(&self, _: &mut H) {}
}

impl Span {
    pub fn new(line: usize, column: usize) -> Self {
        Self { line, column }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// One octave per observable, seven or eight keys.
    Bundled(u32),
    /// One two-level occupancy mode per note.
    Modes,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::Bundled(dim) => write!(f, "bundled {dim}"),
            Model::Modes => f.write_str("modes"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Score {
    pub model: Model,
    pub tempo_bpm: u32,
    pub voices: Vec<Voice>,
}

impl Score {
    pub fn voice(&self, id: &str) -> Option<&Voice> {
        self.voices.iter().find(|v| v.id == id)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Voice {
    pub id: String,
    pub events: Vec<Event>,
    pub span: Span,
}

impl Voice {
    pub fn new(id: impl Into<String>, events: Vec<Event>) -> Self {
        Self { id: id.into(), events, span: Span::default() }
    }

    pub fn tones(&self) -> impl Iterator<Item = &Tone> {
        self.events.iter().filter_map(|e| match e {
            Event::Tone(t) => Some(t),
            Event::Bar => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Event {
    Tone(Tone),
    Bar,
}

impl Event {
    pub fn tone(body: Body, duration: Duration) -> Self {
        Event::Tone(Tone { body, duration, span: Span::default() })
    }
}

/// A measurable event with its length.
#[derive(Debug, Clone, PartialEq)]
pub struct Tone {
    pub body: Body,
    pub duration: Duration,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    Pure(NoteLabel),
    Superpose { terms: Vec<Term>, renormalize: bool },
    Occ { note: NoteLabel, alpha: Amp, beta: Amp },
    Gated { gate: GateName, inner: Box<Body> },
    Bell { kind: BellKind, lo: NoteLabel, hi: NoteLabel },
}

impl Body {
    /// Every note the event mentions, in source order.
    pub fn notes(&self) -> Vec<NoteLabel> {
        match self {
            Body::Pure(n) => vec![*n],
            Body::Superpose { terms, .. } => terms.iter().map(|t| t.note).collect(),
            Body::Occ { note, .. } => vec![*note],
            Body::Gated { inner, .. } => inner.notes(),
            Body::Bell { lo, hi, .. } => vec![*lo, *hi],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub amp: Amp,
    pub note: NoteLabel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Duration {
    Whole,
    Half,
    Quarter,
    Eighth,
}

impl Duration {
    pub const ALL: [Duration; 4] = [Duration::Whole, Duration::Half, Duration::Quarter, Duration::Eighth];

    pub fn symbol(self) -> char {
        match self {
            Duration::Whole => 'w',
            Duration::Half => 'h',
            Duration::Quarter => 'q',
            Duration::Eighth => 'e',
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|d| s.len() == 1 && s.starts_with(d.symbol()))
    }

    /// Length in ticks at the given resolution per quarter note.
    pub fn ticks(self, per_quarter: u32) -> u32 {
        match self {
            Duration::Whole => 4 * per_quarter,
            Duration::Half => 2 * per_quarter,
            Duration::Quarter => per_quarter,
            Duration::Eighth => per_quarter / 2,
        }
    }
}

/// A real number literal as written.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Number {
    Decimal(f64),
    Fraction(u64, u64),
}

impl Number {
    pub fn value(self) -> f64 {
        match self {
            Number::Decimal(x) => x,
            Number::Fraction(n, d) => n as f64 / d as f64,
        }
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Decimal(x) => write!(f, "{x}"),
            Number::Fraction(n, d) => write!(f, "{n}/{d}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmpPart {
    pub negative: bool,
    pub number: Number,
    pub imaginary: bool,
}

/// An amplitude literal: a signed sum of real and imaginary parts, such as
/// `4/5`, `-0.6` or `3/5-4/5i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Amp {
    pub parts: Vec<AmpPart>,
}

impl Amp {
    pub fn real(x: f64) -> Self {
        Self::from_number(x < 0.0, Number::Decimal(x.abs()), false)
    }

    pub fn frac(num: i64, den: u64) -> Self {
        Self::from_number(num < 0, Number::Fraction(num.unsigned_abs(), den), false)
    }

    pub fn from_number(negative: bool, number: Number, imaginary: bool) -> Self {
        Self { parts: vec![AmpPart { negative, number, imaginary }] }
    }

    pub fn value(&self) -> Amplitude {
        self.parts
            .iter()
            .map(|p| {
                let x = if p.negative { -p.number.value() } else { p.number.value() };
                if p.imaginary {
                    Amplitude::new(0.0, x)
                } else {
                    Amplitude::new(x, 0.0)
                }
            })
            .sum()
    }
}

impl fmt::Display for Amp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, p) in self.parts.iter().enumerate() {
            match (k, p.negative) {
                (_, true) => f.write_str("-")?,
                (0, false) => {}
                (_, false) => f.write_str("+")?,
            }
            write!(f, "{}", p.number)?;
            if p.imaginary {
                f.write_str("i")?;
            }
        }
        Ok(())
    }
}
