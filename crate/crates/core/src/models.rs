//! Notes and the two ways of quantizing them.
//!
//! *Bundled octave*: the white keys of one octave form an orthonormal basis of
//! a 7- (or 8-) dimensional space, and a tone is a unit vector in it.
//!
//! *Occupancy modes*: every note is its own two-level mode, empty or sounding,
//! with amplitudes `alpha` (vacuum) and `beta` (occupied). Mean occupancy
//! `|beta|²` is drawn as a gray level.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::qcore::{self, mode_labels, Amplitude, QError, StateVector, NORM_EPS};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("note {note} is outside the octave block {block}")]
    NoteOutOfBlock { note: NoteLabel, block: String },
    #[error("occupancy amplitudes are not normalized (|alpha|² + |beta|² = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
    #[error("occupancy levels must be strictly monotone (index {index})")]
    NotMonotone { index: usize },
    #[error("occupancy level {level} at index {index} is outside [0, 1] or touches an end in the interior")]
    LevelOutOfRange { index: usize, level: f64 },
    #[error("note {0} has no MIDI pitch")]
    OctaveOutOfRange(NoteLabel),
    #[error("octave block dimension must be 7 or 8, got {0}")]
    BadBlockDim(u32),
    #[error("`{0}` is not a note name")]
    BadNote(String),
    #[error(transparent)]
    State(#[from] QError),
}

/// The seven white-key pitch classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pitch {
    C,
    D,
    E,
    F,
    G,
    A,
    B,
}

impl Pitch {
    pub const ALL: [Pitch; 7] = [Pitch::C, Pitch::D, Pitch::E, Pitch::F, Pitch::G, Pitch::A, Pitch::B];

    pub fn letter(self) -> char {
        match self {
            Pitch::C => 'c',
            Pitch::D => 'd',
            Pitch::E => 'e',
            Pitch::F => 'f',
            Pitch::G => 'g',
            Pitch::A => 'a',
            Pitch::B => 'b',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.letter() == c)
    }

    /// Semitones above c.
    fn semitone(self) -> u8 {
        match self {
            Pitch::C => 0,
            Pitch::D => 2,
            Pitch::E => 4,
            Pitch::F => 5,
            Pitch::G => 7,
            Pitch::A => 9,
            Pitch::B => 11,
        }
    }
}

/// A white key: pitch class plus octave (`c'` is `(C, 1)`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NoteLabel {
    pub octave: u8,
    pub pitch: Pitch,
}

impl NoteLabel {
    pub const fn new(pitch: Pitch, octave: u8) -> Self {
        Self { octave, pitch }
    }
}

impl fmt::Display for NoteLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pitch.letter())?;
        for _ in 0..self.octave {
            f.write_str("'")?;
        }
        Ok(())
    }
}

impl FromStr for NoteLabel {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.chars();
        let pitch = chars.next().and_then(Pitch::from_letter).ok_or_else(|| ModelError::BadNote(s.into()))?;
        let rest = chars.as_str();
        if !rest.chars().all(|c| c == '\'') || rest.len() > u8::MAX as usize {
            return Err(ModelError::BadNote(s.into()));
        }
        Ok(NoteLabel::new(pitch, rest.len() as u8))
    }
}

/// One octave block of the bundled model.
///
/// Coordinates follow the printed tuples: the highest key comes first and c
/// last, so `|Ψ_c⟩ = (0,0,0,0,0,0,1)`. With `dim == 8` the c of the next
/// octave sits in front of b.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OctaveModelConfig {
    dim: u8,
    base_octave: u8,
}

impl Default for OctaveModelConfig {
    fn default() -> Self {
        Self { dim: 7, base_octave: 0 }
    }
}

impl OctaveModelConfig {
    pub fn new(dim: u32) -> Result<Self, ModelError> {
        Self::at_octave(dim, 0)
    }

    pub fn at_octave(dim: u32, base_octave: u8) -> Result<Self, ModelError> {
        match dim {
            7 | 8 => Ok(Self { dim: dim as u8, base_octave }),
            other => Err(ModelError::BadBlockDim(other)),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn base_octave(&self) -> u8 {
        self.base_octave
    }

    /// Keys of the block in coordinate order.
    pub fn notes(&self) -> Vec<NoteLabel> {
        let mut notes: Vec<NoteLabel> = Pitch::ALL.iter().rev().map(|&p| NoteLabel::new(p, self.base_octave)).collect();
        if self.dim == 8 {
            notes.insert(0, NoteLabel::new(Pitch::C, self.base_octave.saturating_add(1)));
        }
        notes
    }

    pub fn labels(&self) -> Vec<String> {
        self.notes().iter().map(ToString::to_string).collect()
    }

    pub fn contains(&self, n: NoteLabel) -> bool {
        n.octave == self.base_octave
            || (self.dim == 8 && n.pitch == Pitch::C && n.octave == self.base_octave.wrapping_add(1))
    }

    /// The lowest block of dimension `dim` holding every note in `notes`.
    pub fn block_for(dim: u32, notes: &[NoteLabel]) -> Result<Self, ModelError> {
        let lowest = notes.iter().map(|n| n.octave).min().unwrap_or(0);
        let cfg = Self::at_octave(dim, lowest)?;
        match notes.iter().find(|n| !cfg.contains(**n)) {
            None => Ok(cfg),
            Some(&note) => Err(ModelError::NoteOutOfBlock { note, block: cfg.to_string() }),
        }
    }
}

impl fmt::Display for OctaveModelConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let notes = self.notes();
        write!(f, "{}..{}", notes[notes.len() - 1], notes[0])
    }
}

/// `|Ψ_n⟩` as a Cartesian basis vector of its octave block.
pub fn note_basis_state(n: NoteLabel, cfg: &OctaveModelConfig) -> Result<StateVector, ModelError> {
    if !cfg.contains(n) {
        return Err(ModelError::NoteOutOfBlock { note: n, block: cfg.to_string() });
    }
    Ok(StateVector::basis(&cfg.labels(), &n.to_string())?)
}

/// A single note in the occupancy model: `alpha|0⟩ + beta|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OccupancyState {
    pub note: NoteLabel,
    pub alpha: Amplitude,
    pub beta: Amplitude,
}

impl OccupancyState {
    pub fn vacuum(note: NoteLabel) -> Self {
        Self { note, alpha: Amplitude::new(1.0, 0.0), beta: Amplitude::new(0.0, 0.0) }
    }

    pub fn occupied(note: NoteLabel) -> Self {
        Self { note, alpha: Amplitude::new(0.0, 0.0), beta: Amplitude::new(1.0, 0.0) }
    }

    /// The mode vector in storage order (see [`qcore::MODE_BITS`]).
    pub fn to_state(&self) -> StateVector {
        qcore::normalize(&[self.beta, self.alpha], &mode_labels(self.note)).expect("occupancy states are normalized")
    }

    pub fn from_state(note: NoteLabel, s: &StateVector) -> Result<Self, ModelError> {
        let labels = mode_labels(note);
        if s.labels() != labels.as_slice() {
            return Err(QError::BasisMismatch.into());
        }
        Ok(Self { note, alpha: s.amps()[1], beta: s.amps()[0] })
    }
}

/// Builds `alpha|0_n⟩ + beta|1_n⟩`, optionally rescaling to unit norm.
pub fn occupancy_state(
    n: NoteLabel,
    alpha: Amplitude,
    beta: Amplitude,
    renormalize: bool,
) -> Result<OccupancyState, ModelError> {
    let norm_sqr = alpha.norm_sqr() + beta.norm_sqr();
    if !norm_sqr.is_finite() {
        return Err(QError::NonFinite { index: 0 }.into());
    }
    if renormalize {
        if norm_sqr.sqrt() < NORM_EPS {
            return Err(QError::ZeroVector.into());
        }
        let norm = norm_sqr.sqrt();
        return Ok(OccupancyState { note: n, alpha: alpha / norm, beta: beta / norm });
    }
    if (norm_sqr - 1.0).abs() > NORM_EPS {
        return Err(ModelError::NotNormalized { norm_sqr });
    }
    Ok(OccupancyState { note: n, alpha, beta })
}

/// Real parametrization `alpha = cos φ`, `beta = sin φ`.
pub fn angle_state(n: NoteLabel, phi: f64) -> OccupancyState {
    let phi = phi.rem_euclid(std::f64::consts::TAU);
    OccupancyState { note: n, alpha: Amplitude::new(phi.cos(), 0.0), beta: Amplitude::new(phi.sin(), 0.0) }
}

pub fn mean_occupancy(s: &OccupancyState) -> f64 {
    s.beta.norm_sqr().clamp(0.0, 1.0)
}

/// Blackness in percent: 100 is fully occupied, 0 is empty.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct GrayLevel(f64);

impl GrayLevel {
    pub fn from_weight(w: f64) -> Self {
        Self((100.0 * w).clamp(0.0, 100.0))
    }

    pub fn percent(self) -> f64 {
        self.0
    }

    /// Integer percent, halves rounded up.
    ///
    /// The slack absorbs representation error such as `0.285 * 100 = 28.4999…`.
    pub fn rounded(self) -> u8 {
        (self.0 + 0.5 + 1e-9).floor().min(100.0) as u8
    }
}

impl fmt::Display for GrayLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rounded())
    }
}

pub fn gray_level(s: &OccupancyState) -> GrayLevel {
    GrayLevel::from_weight(mean_occupancy(s))
}

/// Decreasing occupancy ladder used for the gray-level note sequences.
pub const OCCUPANCY_LADDER: [f64; 8] = [1.00, 0.85, 0.70, 0.55, 0.40, 0.30, 0.20, 0.10];

/// One state per level with `|beta|² = level` and real non-negative amplitudes.
///
/// Levels must be strictly monotone; only the first and last may sit at 0 or 1.
pub fn complementary_sequence(n: NoteLabel, levels: &[f64]) -> Result<Vec<OccupancyState>, ModelError> {
    let last = levels.len().saturating_sub(1);
    for (index, &level) in levels.iter().enumerate() {
        let inside = level > 0.0 && level < 1.0;
        let at_end = (index == 0 || index == last) && (0.0..=1.0).contains(&level);
        if !(inside || at_end) {
            return Err(ModelError::LevelOutOfRange { index, level });
        }
    }
    if levels.len() > 2 {
        let rising = levels[1] > levels[0];
        if let Some(w) = levels.windows(2).position(|w| (w[1] > w[0]) != rising || w[1] == w[0]) {
            return Err(ModelError::NotMonotone { index: w + 1 });
        }
    } else if levels.len() == 2 && levels[0] == levels[1] {
        return Err(ModelError::NotMonotone { index: 1 });
    }
    Ok(levels
        .iter()
        .map(|&level| OccupancyState {
            note: n,
            alpha: Amplitude::new((1.0 - level).sqrt(), 0.0),
            beta: Amplitude::new(level.sqrt(), 0.0),
        })
        .collect())
}

/// MIDI key number: c of octave 0 is middle C (60).
pub fn midi_pitch(n: NoteLabel) -> Result<u8, ModelError> {
    let key = 60 + 12 * n.octave as u32 + n.pitch.semitone() as u32;
    u8::try_from(key).ok().filter(|k| *k <= 127).ok_or(ModelError::OctaveOutOfRange(n))
}
