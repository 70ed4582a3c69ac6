//! The `.qms` quantum-score language.
//!
//! ```text
//! model bundled 7
//! tempo 120
//! voice v1 { sup{4/5 c, 3/5 g} q  X(sup{4/5 c, 3/5 g}) q | }
//! ```
//!
//! A score names its quantization model, a tempo, and one or more voices.
//! Each event carries a duration (`w`, `h`, `q`, `e`):
//!
//! * `c`, `g'` – a definite note;
//! * `sup{a1 n1, a2 n2, ...}` – superposed notes of one octave block (bundled
//!   model); `sup~{...}` rescales the amplitudes to unit norm;
//! * `occ(n, alpha, beta)` – a note's vacuum and occupied amplitudes (modes model);
//! * `X(...)`, `H(...)`, `I(...)` – a gate applied to a two-level event;
//! * `psi-(n1, n2)`, `psi+`, `phi-`, `phi+` – an entangled pair of note modes.
//!
//! `|` is a bar line and `#` starts a comment. Amplitudes are decimals or
//! fractions, optionally negated and optionally complex (`3/5-4/5i`).

mod ast;
mod lexer;
mod parser;
mod pretty;

use std::fmt;

pub use ast::{Amp, AmpPart, Body, Duration, Event, Model, Number, Score, Span, Term, Tone, Voice};
pub use lexer::{lex, Token, TokenKind};
pub use parser::MAX_GATE_DEPTH;
pub use pretty::pretty_print;

use crate::models::{midi_pitch, OctaveModelConfig};
use crate::qcore::NORM_EPS;
use crate::util::format_sig;

pub const MIN_TEMPO: u32 = 4;
pub const MAX_TEMPO: u32 = 1000;

/// A syntax or validation error at a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub found_token: String,
}

impl ParseError {
    pub fn new(span: Span, message: impl Into<String>, found_token: impl Into<String>) -> Self {
        Self {
            line: span.line.max(1),
            column: span.column.max(1),
            message: message.into(),
            found_token: found_token.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Parses and validates a score. All problems are reported together, in
/// source order.
pub fn parse(source: &str) -> Result<Score, Vec<ParseError>> {
    let (tokens, mut errors) = lex(source);
    let (parsed, syntax) = parser::Parser::new(tokens).parse_score();
    errors.extend(syntax);

    if parsed.voices.is_empty() && errors.is_empty() {
        errors.push(ParseError::new(Span::new(1, 1), "score has no voices", ""));
    }
    errors.extend(check(parsed.model, parsed.tempo, &parsed.voices));
    errors.sort_by_key(|e| (e.line, e.column));
    errors.dedup();

    match (parsed.model, parsed.tempo, errors.is_empty()) {
        (Some(model), Some(tempo_bpm), true) => Ok(Score { model, tempo_bpm, voices: parsed.voices }),
        _ => Err(errors),
    }
}

/// Semantic checks on an already-built score. An empty list means valid.
pub fn validate(score: &Score) -> Vec<ParseError> {
    let mut errors = Vec::new();
    if !(MIN_TEMPO..=MAX_TEMPO).contains(&score.tempo_bpm) {
        errors.push(ParseError::new(
            Span::new(1, 1),
            format!("tempo must be between {MIN_TEMPO} and {MAX_TEMPO} bpm"),
            score.tempo_bpm.to_string(),
        ));
    }
    if let Model::Bundled(dim) = score.model {
        if !(dim == 7 || dim == 8) {
            errors.push(ParseError::new(Span::new(1, 1), "octave block dimension must be 7 or 8", dim.to_string()));
        }
    }
    if score.voices.is_empty() {
        errors.push(ParseError::new(Span::new(1, 1), "score has no voices", ""));
    }
    errors.extend(check(Some(score.model), Some(score.tempo_bpm), &score.voices));
    errors
}

fn check(model: Option<Model>, _tempo: Option<u32>, voices: &[Voice]) -> Vec<ParseError> {
    let mut errors = Vec::new();
    for (k, v) in voices.iter().enumerate() {
        if voices[..k].iter().any(|u| u.id == v.id) {
            errors.push(ParseError::new(v.span, format!("duplicate voice `{}`", v.id), v.id.clone()));
        }
        for tone in v.tones() {
            check_body(model, &tone.body, tone.span, &mut errors);
        }
    }
    errors
}

/// Dimension of the space a gate would act on, if the event has one.
fn local_dim(model: Model, body: &Body) -> Option<usize> {
    match (model, body) {
        (Model::Bundled(_), Body::Superpose { terms, .. }) => Some(terms.len()),
        (Model::Bundled(_), Body::Pure(_)) => Some(1),
        (Model::Modes, Body::Pure(_) | Body::Occ { .. }) => Some(2),
        (_, Body::Gated { inner, .. }) => local_dim(model, inner),
        (_, Body::Bell { .. }) => Some(4),
        _ => None,
    }
}

fn check_body(model: Option<Model>, body: &Body, span: Span, errors: &mut Vec<ParseError>) {
    let mut err = |msg: String| errors.push(ParseError::new(span, msg, ""));

    for n in body.notes() {
        if midi_pitch(n).is_err() {
            err(format!("note {n} is out of range"));
        }
    }

    match body {
        Body::Pure(_) => {}
        Body::Superpose { terms, renormalize } => {
            for (k, t) in terms.iter().enumerate() {
                if terms[..k].iter().any(|u| u.note == t.note) {
                    err(format!("note {} appears twice in superposition", t.note));
                }
            }
            let norm_sqr: f64 = terms.iter().map(|t| t.amp.value().norm_sqr()).sum();
            if !norm_sqr.is_finite() {
                err("amplitudes are not finite".into());
            } else if *renormalize {
                if norm_sqr.sqrt() < NORM_EPS {
                    err("superposition has zero norm".into());
                }
            } else if (norm_sqr - 1.0).abs() > NORM_EPS {
                err(format!("amplitudes not normalized: norm² = {}", format_sig(norm_sqr, 12)));
            }
            match model {
                Some(Model::Bundled(dim)) => {
                    let notes: Vec<_> = terms.iter().map(|t| t.note).collect();
                    if let Err(e) = OctaveModelConfig::block_for(dim, &notes) {
                        err(format!("superposition spans several octave blocks: {e}"));
                    }
                }
                Some(Model::Modes) => err("`sup` needs model bundled; use `occ` in model modes".into()),
                None => {}
            }
        }
        Body::Occ { alpha, beta, .. } => {
            let norm_sqr = alpha.value().norm_sqr() + beta.value().norm_sqr();
            if !norm_sqr.is_finite() {
                err("amplitudes are not finite".into());
            } else if (norm_sqr - 1.0).abs() > NORM_EPS {
                err(format!("occupancy not normalized: norm² = {}", format_sig(norm_sqr, 12)));
            }
            if let Some(Model::Bundled(_)) = model {
                err("`occ` needs model modes".into());
            }
        }
        Body::Gated { gate, inner } => {
            if let Some(m) = model {
                match local_dim(m, inner) {
                    Some(2) => {}
                    Some(d) => err(format!("gate {gate} acts on two levels, event has {d}")),
                    None => {}
                }
            }
            check_body(model, inner, span, errors);
        }
        Body::Bell { lo, hi, .. } => {
            if lo == hi {
                err(format!("Bell pair needs two distinct notes, got {lo} twice"));
            }
        }
    }
}
