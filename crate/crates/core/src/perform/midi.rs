//! Standard MIDI File output: format 1, a conductor track carrying the tempo,
//! then one track per performed voice. No running status.

use thiserror::Error;

use super::{Outcome, PerformanceSample};
use crate::models::{midi_pitch, ModelError};

pub const TICKS_PER_QUARTER: u16 = 480;
pub const VELOCITY: u8 = 80;

const NOTE_ON: u8 = 0x90;
const NOTE_OFF: u8 = 0x80;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RenderError {
    #[error("nothing to render")]
    EmptyInput,
    #[error("tempo {0} bpm cannot be encoded")]
    BadTempo(u32),
    #[error(transparent)]
    Pitch(#[from] ModelError),
}

fn push_vlq(out: &mut Vec<u8>, mut value: u32) {
    let mut groups = [0u8; 5];
    let mut n = 0;
    loop {
        groups[n] = (value & 0x7f) as u8;
        n += 1;
        value >>= 7;
        if value == 0 {
            break;
        }
    }
    for k in (0..n).rev() {
        out.push(if k > 0 { groups[k] | 0x80 } else { groups[k] });
    }
}

fn chunk(out: &mut Vec<u8>, tag: &[u8; 4], body: &[u8]) {
    out.extend_from_slice(tag);
    out.extend_from_slice(&(body.len() as u32).to_be_bytes());
    out.extend_from_slice(body);
}

fn conductor(tempo_bpm: u32) -> Result<Vec<u8>, RenderError> {
    let micros = 60_000_000u32.checked_div(tempo_bpm).ok_or(RenderError::BadTempo(tempo_bpm))?;
    if micros == 0 || micros > 0xff_ffff {
        return Err(RenderError::BadTempo(tempo_bpm));
    }
    let mut t = vec![0x00, 0xff, 0x51, 0x03];
    t.extend_from_slice(&micros.to_be_bytes()[1..]);
    t.extend_from_slice(&[0x00, 0xff, 0x2f, 0x00]);
    Ok(t)
}

fn voice_track(heard: &[super::Heard]) -> Result<Vec<u8>, RenderError> {
    let mut t = Vec::new();
    let mut now = 0u32;
    let mut last = 0u32;
    let mut event = |t: &mut Vec<u8>, at: u32, bytes: [u8; 3]| {
        push_vlq(t, at - last);
        last = at;
        t.extend_from_slice(&bytes);
    };
    for h in heard {
        let len = h.duration.ticks(TICKS_PER_QUARTER as u32);
        if let Outcome::Notes(notes) = &h.outcome {
            let keys = notes.iter().map(|&n| midi_pitch(n)).collect::<Result<Vec<u8>, _>>()?;
            for &k in &keys {
                event(&mut t, now, [NOTE_ON, k, VELOCITY]);
            }
            for &k in &keys {
                event(&mut t, now + len, [NOTE_OFF, k, 0]);
            }
        }
        now += len;
    }
    push_vlq(&mut t, now - last);
    t.extend_from_slice(&[0xff, 0x2f, 0x00]);
    Ok(t)
}

/// Encodes the performances as a format-1 Standard MIDI File.
///
/// Track 0 holds the tempo; each voice of each sample follows as its own
/// track on channel 0. Rests advance time without events.
pub fn render_midi(samples: &[PerformanceSample], tempo_bpm: u32) -> Result<Vec<u8>, RenderError> {
    if samples.is_empty() {
        return Err(RenderError::EmptyInput);
    }
    let mut tracks = vec![conductor(tempo_bpm)?];
    for s in samples {
        for take in &s.voices {
            tracks.push(voice_track(&take.heard)?);
        }
    }
    let ntracks = u16::try_from(tracks.len()).map_err(|_| RenderError::EmptyInput)?;

    let mut out = Vec::new();
    let mut header = vec![0x00, 0x01];
    header.extend_from_slice(&ntracks.to_be_bytes());
    header.extend_from_slice(&TICKS_PER_QUARTER.to_be_bytes());
    chunk(&mut out, b"MThd", &header);
    for t in &tracks {
        chunk(&mut out, b"MTrk", t);
    }
    Ok(out)
}
