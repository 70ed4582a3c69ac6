//! Shared generators and independent oracles for the integration tests.
#![allow(dead_code)]

use num_complex::Complex64 as C;
use qmusic::models::{NoteLabel, OctaveModelConfig, Pitch};
use qmusic::qcore::{BellKind, GateName, Matrix};
use qmusic::score::{
    self, Amp, AmpPart, Body, Duration, Event, Model, Number, Score, Term, Voice, MAX_TEMPO, MIN_TEMPO,
};
use rand::rngs::StdRng;
use rand::Rng;
use rand_distr::StandardNormal;

pub const TWO_NOTE: &str = include_str!("../fixtures/two_note.qms");

pub fn gaussian(rng: &mut StdRng) -> C {
    C::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_unit_vector(rng: &mut StdRng, dim: usize) -> Vec<C> {
    loop {
        let v: Vec<C> = (0..dim).map(|_| gaussian(rng)).collect();
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-6 {
            return v.into_iter().map(|z| z / n).collect();
        }
    }
}

/// Haar-like random unitary from Gram-Schmidt on Gaussian columns.
pub fn random_unitary(rng: &mut StdRng, dim: usize) -> Matrix {
    let mut cols: Vec<Vec<C>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<C> = (0..dim).map(|_| gaussian(rng)).collect();
        for _ in 0..2 {
            for u in &cols {
                let proj: C = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(u) {
                    *x -= proj * y;
                }
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-6 {
            cols.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    let rows: Vec<Vec<C>> = (0..dim).map(|r| (0..dim).map(|c| cols[c][r]).collect()).collect();
    Matrix::from_rows(&rows).unwrap()
}

/// Singular values of the 2×2 coefficient matrix `[[a0, a1], [a2, a3]]`,
/// by one complex Jacobi rotation of its columns. Largest first.
pub fn schmidt_coefficients(a: &[C]) -> (f64, f64) {
    let mut p = [a[0], a[2]];
    let mut q = [a[1], a[3]];
    let alpha: f64 = p.iter().map(|z| z.norm_sqr()).sum();
    let beta: f64 = q.iter().map(|z| z.norm_sqr()).sum();
    let gamma: C = p.iter().zip(&q).map(|(x, y)| x.conj() * y).sum();
    let g = gamma.norm();
    if g > 0.0 {
        // rotate q's phase so the column overlap is real, then a real rotation
        let phase = gamma / g;
        for z in &mut q {
            *z *= phase.conj();
        }
        let zeta = (beta - alpha) / (2.0 * g);
        let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
        let c = 1.0 / (1.0 + t * t).sqrt();
        let s = c * t;
        let (p0, q0) = (p, q);
        for k in 0..2 {
            p[k] = p0[k] * c - q0[k] * s;
            q[k] = p0[k] * s + q0[k] * c;
        }
    }
    let s1 = p.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let s2 = q.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    (s1.max(s2), s1.min(s2))
}

/// Schmidt rank with singular values below `tol` (relative to a unit state) treated as zero.
pub fn schmidt_rank(a: &[C], tol: f64) -> usize {
    let (hi, lo) = schmidt_coefficients(a);
    usize::from(hi > tol) + usize::from(hi * lo > tol)
}

/// States with a spread of determinants: generic, exact products, and
/// products nudged by perturbations from 1e-12 to 1e-1.
pub fn random_two_mode_state(rng: &mut StdRng) -> Vec<C> {
    match rng.random_range(0..5) {
        0 | 1 => random_unit_vector(rng, 4),
        kind => {
            let u = random_unit_vector(rng, 2);
            let v = random_unit_vector(rng, 2);
            let mut s: Vec<C> = u.iter().flat_map(|x| v.iter().map(move |y| x * y)).collect();
            if kind > 2 {
                let scale = 10f64.powf(rng.random_range(-12.0..-1.0));
                for z in &mut s {
                    *z += gaussian(rng) * scale;
                }
                let n = s.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                s.iter_mut().for_each(|z| *z /= n);
            }
            s
        }
    }
}

fn random_note(rng: &mut StdRng) -> NoteLabel {
    NoteLabel::new(Pitch::ALL[rng.random_range(0..7)], rng.random_range(0..=4))
}

fn decimal_part(x: f64, imaginary: bool) -> AmpPart {
    AmpPart { negative: x.is_sign_negative(), number: Number::Decimal(x.abs()), imaginary }
}

fn amp_of(z: C, rng: &mut StdRng) -> Amp {
    // imaginary part first or second; both orders are valid source
    if rng.random_bool(0.5) {
        Amp { parts: vec![decimal_part(z.re, false), decimal_part(z.im, true)] }
    } else {
        Amp { parts: vec![decimal_part(z.im, true), decimal_part(z.re, false)] }
    }
}

const TRIPLES: [(u64, u64, u64); 5] = [(3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25), (20, 21, 29)];

/// `k` amplitudes with unit norm, written as decimals or Pythagorean fractions.
fn unit_amps(rng: &mut StdRng, k: usize) -> Vec<Amp> {
    if k == 2 && rng.random_bool(0.4) {
        let (a, b, c) = TRIPLES[rng.random_range(0..TRIPLES.len())];
        return [a, b]
            .into_iter()
            .map(|n| Amp {
                parts: vec![AmpPart {
                    negative: rng.random_bool(0.5),
                    number: Number::Fraction(n, c),
                    imaginary: rng.random_bool(0.2),
                }],
            })
            .collect();
    }
    let v = random_unit_vector(rng, k);
    let real = rng.random_bool(0.5);
    // keep only the parts that will be written, then renormalize
    let v: Vec<C> = v.into_iter().map(|z| if real { C::new(z.re, 0.0) } else { z }).collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n < 1e-3 {
        return unit_amps(rng, k);
    }
    v.into_iter()
        .map(|z| z / n)
        .map(|z| if real { Amp { parts: vec![decimal_part(z.re, false)] } } else { amp_of(z, rng) })
        .collect()
}

fn sup_body(rng: &mut StdRng, dim: u32, k: usize) -> Body {
    let cfg = OctaveModelConfig::at_octave(dim, rng.random_range(0..=3)).unwrap();
    let mut pool = cfg.notes();
    let mut notes = Vec::new();
    for _ in 0..k {
        notes.push(pool.swap_remove(rng.random_range(0..pool.len())));
    }
    let renormalize = rng.random_bool(0.3);
    let amps: Vec<Amp> = if renormalize {
        (0..k)
            .map(|_| {
                let x = rng.random_range(1..=999) as f64 / 100.0;
                Amp { parts: vec![decimal_part(if rng.random_bool(0.3) { -x } else { x }, false)] }
            })
            .collect()
    } else {
        unit_amps(rng, k)
    };
    Body::Superpose { terms: amps.into_iter().zip(notes).map(|(amp, note)| Term { amp, note }).collect(), renormalize }
}

fn two_level_body(rng: &mut StdRng, model: Model, depth: usize) -> Body {
    if depth < 3 && rng.random_bool(0.25) {
        return Body::Gated { gate: random_gate(rng), inner: Box::new(two_level_body(rng, model, depth + 1)) };
    }
    match model {
        Model::Bundled(dim) => sup_body(rng, dim, 2),
        Model::Modes => {
            if rng.random_bool(0.3) {
                Body::Pure(random_note(rng))
            } else {
                let mut a = unit_amps(rng, 2);
                let beta = a.pop().unwrap();
                Body::Occ { note: random_note(rng), alpha: a.pop().unwrap(), beta }
            }
        }
    }
}

fn random_gate(rng: &mut StdRng) -> GateName {
    [GateName::X, GateName::H, GateName::I][rng.random_range(0..3)]
}

fn random_body(rng: &mut StdRng, model: Model) -> Body {
    match rng.random_range(0..10) {
        0..=1 => Body::Pure(random_note(rng)),
        2 => {
            let lo = random_note(rng);
            let mut hi = random_note(rng);
            while hi == lo {
                hi = random_note(rng);
            }
            Body::Bell { kind: BellKind::ALL[rng.random_range(0..4)], lo, hi }
        }
        3..=4 => Body::Gated { gate: random_gate(rng), inner: Box::new(two_level_body(rng, model, 1)) },
        _ => match model {
            Model::Bundled(dim) => {
                let k = rng.random_range(1..=(dim as usize).min(5));
                sup_body(rng, dim, k)
            }
            Model::Modes => two_level_body(rng, model, 0),
        },
    }
}

/// A random score that passes validation.
pub fn random_score(rng: &mut StdRng) -> Score {
    let model = match rng.random_range(0..3) {
        0 => Model::Bundled(7),
        1 => Model::Bundled(8),
        _ => Model::Modes,
    };
    let voices = (0..rng.random_range(1..=3))
        .map(|k| {
            let events = (0..rng.random_range(0..=8))
                .map(|_| {
                    if rng.random_bool(0.15) {
                        Event::Bar
                    } else {
                        Event::tone(random_body(rng, model), Duration::ALL[rng.random_range(0..4)])
                    }
                })
                .collect();
            let id = if rng.random_bool(0.5) { format!("v{k}") } else { format!("voice_{k}x") };
            Voice::new(id, events)
        })
        .collect();
    Score { model, tempo_bpm: rng.random_range(MIN_TEMPO..=MAX_TEMPO), voices }
}

const VOCAB: &[&str] = &[
    "model",
    "bundled",
    "modes",
    "7",
    "8",
    "9",
    "tempo",
    "120",
    "0",
    "voice",
    "v1",
    "{",
    "}",
    "(",
    ")",
    ",",
    "|",
    "sup",
    "sup~",
    "occ",
    "X",
    "H",
    "I",
    "Z",
    "psi-",
    "psi+",
    "phi-",
    "phi+",
    "psi",
    "c",
    "g'",
    "c''",
    "h",
    "q",
    "w",
    "e",
    "0.8",
    "4/5",
    "3/5i",
    "-",
    "+",
    "--",
    "i",
    "#",
    "\n",
    " ",
    "1/0",
    "99999999999999999999999",
    "~",
    "'",
    "\t",
    "é",
    "∞",
    "\r\n",
    ".",
    "1.",
    "..",
];

/// Inputs for the parser fuzz: byte noise, token soup and mutated valid scores.
pub fn fuzz_input(rng: &mut StdRng) -> String {
    match rng.random_range(0..3) {
        0 => {
            let bytes: Vec<u8> = (0..rng.random_range(0..200)).map(|_| rng.random()).collect();
            String::from_utf8_lossy(&bytes).into_owned()
        }
        1 => (0..rng.random_range(0..80))
            .map(|_| VOCAB[rng.random_range(0..VOCAB.len())])
            .collect::<Vec<_>>()
            .join(if rng.random_bool(0.5) { " " } else { "" }),
        _ => {
            let mut chars: Vec<char> = score::pretty_print(&random_score(rng)).chars().collect();
            for _ in 0..rng.random_range(1..=5) {
                let at = rng.random_range(0..=chars.len());
                match rng.random_range(0..4) {
                    0 if at < chars.len() => {
                        let end = (at + rng.random_range(1..10)).min(chars.len());
                        chars.drain(at..end);
                    }
                    1 => {
                        let tok: Vec<char> = VOCAB[rng.random_range(0..VOCAB.len())].chars().collect();
                        chars.splice(at..at, tok);
                    }
                    2 if at < chars.len() => {
                        let end = (at + rng.random_range(1..20)).min(chars.len());
                        let dup: Vec<char> = chars[at..end].to_vec();
                        chars.splice(at..at, dup);
                    }
                    _ => chars.insert(at.min(chars.len()), char::from(rng.random_range(0x20u8..0x7f))),
                }
            }
            chars.into_iter().collect()
        }
    }
}

/// Parser totality on one input: no panic, errors point inside the text,
/// and accepted input is a valid score that reprints to itself.
pub fn check_total(src: &str) -> Result<(), String> {
    let result = std::panic::catch_unwind(|| score::parse(src)).map_err(|_| format!("parser panicked on {src:?}"))?;
    match result {
        Ok(s) => {
            let problems = score::validate(&s);
            if !problems.is_empty() {
                return Err(format!("accepted invalid score {src:?}: {problems:?}"));
            }
            if score::parse(&score::pretty_print(&s)).as_ref() != Ok(&s) {
                return Err(format!("reprint of accepted {src:?} differs"));
            }
        }
        Err(errs) => {
            if errs.is_empty() {
                return Err(format!("rejected {src:?} without an error"));
            }
            let lines = src.split('\n').count();
            for e in &errs {
                let width = src.split('\n').nth(e.line.saturating_sub(1)).map_or(0, |l| l.chars().count());
                if e.line == 0 || e.line > lines || e.column == 0 || e.column > width + 1 {
                    return Err(format!("error {e} outside {src:?}"));
                }
            }
        }
    }
    Ok(())
}

/// One decoded track event: absolute tick and raw bytes (status first).
#[derive(Debug, Clone, PartialEq)]
pub struct TrackEvent {
    pub tick: u32,
    pub data: Vec<u8>,
}

#[derive(Debug)]
pub struct Smf {
    pub format: u16,
    pub division: u16,
    pub tracks: Vec<Vec<TrackEvent>>,
}

fn read_vlq(b: &[u8], at: &mut usize) -> Result<u32, String> {
    let mut v = 0u32;
    for _ in 0..4 {
        let byte = *b.get(*at).ok_or("truncated varlen")?;
        *at += 1;
        v = (v << 7) | u32::from(byte & 0x7f);
        if byte & 0x80 == 0 {
            return Ok(v);
        }
    }
    Err("varlen longer than 4 bytes".into())
}

/// Strict reader for the subset the renderer writes: no running status,
/// note on/off and meta events only, every track closed by end-of-track.
pub fn read_smf(b: &[u8]) -> Result<Smf, String> {
    let be16 = |at: usize| u16::from_be_bytes([b[at], b[at + 1]]);
    let be32 = |at: usize| u32::from_be_bytes([b[at], b[at + 1], b[at + 2], b[at + 3]]);
    if b.len() < 14 || &b[..4] != b"MThd" || be32(4) != 6 {
        return Err("bad header chunk".into());
    }
    let (format, ntracks, division) = (be16(8), be16(10), be16(12));
    let mut at = 14;
    let mut tracks = Vec::new();
    for _ in 0..ntracks {
        if b.len() < at + 8 || &b[at..at + 4] != b"MTrk" {
            return Err(format!("missing track chunk at {at}"));
        }
        let len = be32(at + 4) as usize;
        let end = at + 8 + len;
        if end > b.len() {
            return Err("track overruns file".into());
        }
        let body = &b[at + 8..end];
        let (mut i, mut tick, mut events) = (0usize, 0u32, Vec::new());
        let mut closed = false;
        while i < body.len() {
            if closed {
                return Err("data after end-of-track".into());
            }
            tick += read_vlq(body, &mut i)?;
            let status = *body.get(i).ok_or("truncated event")?;
            let size = match status {
                0xff => {
                    let mut j = i + 2;
                    let n = read_vlq(body, &mut j)? as usize;
                    j - i + n
                }
                0x80..=0x9f => 3,
                _ => return Err(format!("unexpected status {status:#x}")),
            };
            let data = body.get(i..i + size).ok_or("truncated event")?.to_vec();
            closed = data == [0xff, 0x2f, 0x00];
            events.push(TrackEvent { tick, data });
            i += size;
        }
        if !closed {
            return Err("track without end-of-track".into());
        }
        tracks.push(events);
        at = end;
    }
    if at != b.len() {
        return Err("trailing bytes".into());
    }
    Ok(Smf { format, division, tracks })
}
