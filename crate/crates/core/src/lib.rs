//! Scores whose notes are quantum states.
//!
//! A note can be definite, a superposition of notes within one octave
//! block, a partly occupied mode, or one half of an entangled pair. A
//! listener hears each event as a measurement with Born probabilities.
//!
//! * [`qcore`] – state vectors, unitaries, projectors, Born distributions,
//!   tensor products and entanglement tests.
//! * [`models`] – the two quantizations of a note: bundled octave blocks and
//!   per-note occupancy modes, plus gray-level coloring.
//! * [`score`] – the `.qms` language: lexer, parser, validation, pretty printer.
//! * [`perform`] – exact melody distributions, seeded performances, and
//!   MIDI, CSV and text output.
//! * [`cli`] – the `qmus` command.
//!
//! ```
//! use qmusic::{perform, score};
//!
//! let s = score::parse("model bundled 7\ntempo 120\nvoice v { sup{4/5 c, 3/5 g} q }").unwrap();
//! let md = perform::melody_distribution(&s, "v").unwrap();
//! assert!((md.prob(&["c"]) - 0.64).abs() < 1e-12);
//! ```

pub mod cli;
pub mod models;
pub mod perform;
pub mod qcore;
pub mod score;
pub mod util;
