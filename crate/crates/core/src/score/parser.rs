//! Recursive-descent parser. Errors are collected, not fatal: after a bad
//! event the parser skips to the next plausible event boundary and carries on.

use super::ast::{Amp, AmpPart, Body, Duration, Event, Model, Number, Term, Tone, Voice};
use super::lexer::{Token, TokenKind};
use super::ParseError;
use crate::models::NoteLabel;
use crate::qcore::{BellKind, GateName};

/// Gates may nest, but not without bound.
pub const MAX_GATE_DEPTH: usize = 64;

/// What the parser recovered, header fields included only when present.
#[derive(Debug, Default)]
pub struct Parsed {
    pub model: Option<Model>,
    pub tempo: Option<u32>,
    pub voices: Vec<Voice>,
}

pub struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    pub errors: Vec<ParseError>,
}

type PResult<T> = Result<T, ParseError>;

fn is_note_word(w: &str) -> bool {
    let mut chars = w.chars();
    matches!(chars.next(), Some('a'..='g')) && chars.all(|c| c == '\'')
}

impl Parser {
    pub fn new(tokens: Vec<Token>) -> Self {
        debug_assert!(matches!(tokens.last().map(|t| &t.kind), Some(TokenKind::Eof)));
        Self { tokens, pos: 0, errors: Vec::new() }
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    fn peek_kind(&self) -> &TokenKind {
        &self.peek().kind
    }

    fn peek_nth(&self, k: usize) -> &Token {
        &self.tokens[(self.pos + k).min(self.tokens.len() - 1)]
    }

    fn bump(&mut self) -> Token {
        let tok = self.peek().clone();
        if !matches!(tok.kind, TokenKind::Eof) {
            self.pos += 1;
        }
        tok
    }

    fn at_word(&self, w: &str) -> bool {
        matches!(self.peek_kind(), TokenKind::Word(x) if x == w)
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        let tok = self.peek();
        ParseError::new(tok.span, format!("{}, found {}", message.into(), tok.describe()), tok.text.clone())
    }

    fn expect(&mut self, kind: TokenKind, what: &str) -> PResult<Token> {
        if *self.peek_kind() == kind {
            Ok(self.bump())
        } else {
            Err(self.error_here(format!("expected {what}")))
        }
    }

    fn skip_newlines(&mut self) {
        while matches!(self.peek_kind(), TokenKind::Newline) {
            self.bump();
        }
    }

    fn skip_line(&mut self) {
        while !matches!(self.peek_kind(), TokenKind::Newline | TokenKind::Eof) {
            self.bump();
        }
    }

    pub fn parse_score(mut self) -> (Parsed, Vec<ParseError>) {
        let mut out = Parsed::default();
        self.skip_newlines();
        if self.at_word("model") {
            match self.header() {
                Ok((model, tempo)) => {
                    out.model = model;
                    out.tempo = tempo;
                }
                Err(e) => {
                    self.errors.push(e);
                    while !matches!(self.peek_kind(), TokenKind::Eof) && !self.at_word("voice") {
                        self.bump();
                    }
                }
            }
        } else {
            let e = self.error_here("missing header: expected `model`");
            self.errors.push(e);
        }

        loop {
            self.skip_newlines();
            match self.peek_kind() {
                TokenKind::Eof => break,
                TokenKind::Word(w) if w == "voice" => {
                    if let Some(v) = self.voice() {
                        out.voices.push(v);
                    }
                }
                _ => {
                    let e = self.error_here("expected `voice`");
                    self.errors.push(e);
                    self.bump();
                    while !matches!(self.peek_kind(), TokenKind::Eof) && !self.at_word("voice") {
                        self.bump();
                    }
                }
            }
        }
        (out, self.errors)
    }

    fn end_of_line(&mut self) -> PResult<()> {
        match self.peek_kind() {
            TokenKind::Newline => {
                self.bump();
                Ok(())
            }
            _ => Err(self.error_here("expected end of line")),
        }
    }

    fn header(&mut self) -> PResult<(Option<Model>, Option<u32>)> {
        self.bump();
        let model = match self.peek_kind().clone() {
            TokenKind::Word(w) if w == "modes" => {
                self.bump();
                Model::Modes
            }
            TokenKind::Word(w) if w == "bundled" => {
                self.bump();
                let tok = self.peek().clone();
                match tok.kind {
                    TokenKind::Int(dim @ (7 | 8)) => {
                        self.bump();
                        Model::Bundled(dim as u32)
                    }
                    TokenKind::Int(_) => {
                        return Err(ParseError::new(tok.span, "octave block dimension must be 7 or 8", tok.text));
                    }
                    _ => return Err(self.error_here("expected block dimension 7 or 8")),
                }
            }
            _ => return Err(self.error_here("expected `bundled` or `modes`")),
        };
        self.end_of_line()?;
        self.skip_newlines();

        let tempo = if self.at_word("tempo") {
            self.bump();
            let tok = self.peek().clone();
            match tok.kind {
                TokenKind::Int(t) if (super::MIN_TEMPO as u64..=super::MAX_TEMPO as u64).contains(&t) => {
                    self.bump();
                    Some(t as u32)
                }
                TokenKind::Int(_) => {
                    self.errors.push(ParseError::new(
                        tok.span,
                        format!("tempo must be between {} and {} bpm", super::MIN_TEMPO, super::MAX_TEMPO),
                        tok.text,
                    ));
                    self.bump();
                    None
                }
                _ => {
                    let e = self.error_here("expected tempo in bpm");
                    self.errors.push(e);
                    self.skip_line();
                    None
                }
            }
        } else {
            let e = self.error_here("expected `tempo`");
            self.errors.push(e);
            return Ok((Some(model), None));
        };
        if !matches!(self.peek_kind(), TokenKind::Eof) {
            if let Err(e) = self.end_of_line() {
                self.errors.push(e);
                self.skip_line();
            }
        }
        Ok((Some(model), tempo))
    }

    fn voice(&mut self) -> Option<Voice> {
        let start = self.bump().span;
        let id = match self.peek_kind().clone() {
            TokenKind::Word(w) if !is_reserved(&w) => {
                self.bump();
                w
            }
            _ => {
                let e = self.error_here("expected voice name");
                self.errors.push(e);
                String::new()
            }
        };
        self.skip_newlines();
        if let Err(e) = self.expect(TokenKind::LBrace, "`{`") {
            self.errors.push(e);
            while !matches!(self.peek_kind(), TokenKind::Eof | TokenKind::LBrace) && !self.at_word("voice") {
                self.bump();
            }
            if !matches!(self.peek_kind(), TokenKind::LBrace) {
                return None;
            }
            self.bump();
        }

        let mut events = Vec::new();
        loop {
            self.skip_newlines();
            match self.peek_kind() {
                TokenKind::RBrace => {
                    self.bump();
                    break;
                }
                TokenKind::Eof => {
                    let e = self.error_here("unclosed voice, expected `}`");
                    self.errors.push(e);
                    break;
                }
                TokenKind::Word(w) if w == "voice" => {
                    let e = self.error_here("unclosed voice, expected `}`");
                    self.errors.push(e);
                    break;
                }
                TokenKind::Pipe => {
                    self.bump();
                    events.push(Event::Bar);
                }
                _ => {
                    let begin = self.pos;
                    match self.tone() {
                        Ok(t) => events.push(Event::Tone(t)),
                        Err(e) => {
                            self.errors.push(e);
                            self.recover_event(begin);
                        }
                    }
                }
            }
        }
        (!id.is_empty()).then_some(Voice { id, events, span: start })
    }

    /// Skips from `begin` past the broken event: up to and including a
    /// duration at nesting depth zero, or up to a line end, bar, or closing
    /// brace of the voice.
    fn recover_event(&mut self, begin: usize) {
        self.pos = begin;
        let mut depth = 0usize;
        let mut consumed = false;
        loop {
            match self.peek_kind() {
                TokenKind::Eof => return,
                TokenKind::Newline | TokenKind::Pipe if depth == 0 => return,
                TokenKind::RBrace | TokenKind::RParen if depth == 0 => {
                    if consumed {
                        return;
                    }
                    self.bump();
                    return;
                }
                TokenKind::Word(w) if depth == 0 && consumed && w == "voice" => return,
                TokenKind::Word(w) if depth == 0 && consumed && Duration::from_symbol(w).is_some() => {
                    self.bump();
                    return;
                }
                TokenKind::LBrace | TokenKind::LParen => depth += 1,
                TokenKind::RBrace | TokenKind::RParen => depth -= 1,
                _ => {}
            }
            self.bump();
            consumed = true;
        }
    }

    fn tone(&mut self) -> PResult<Tone> {
        let span = self.peek().span;
        let body = self.body(0)?;
        let duration = self.duration()?;
        Ok(Tone { body, duration, span })
    }

    fn duration(&mut self) -> PResult<Duration> {
        if let TokenKind::Word(w) = self.peek_kind() {
            if let Some(d) = Duration::from_symbol(w) {
                self.bump();
                return Ok(d);
            }
        }
        Err(self.error_here("expected duration `w`, `h`, `q` or `e`"))
    }

    fn note(&mut self) -> PResult<NoteLabel> {
        if let TokenKind::Word(w) = self.peek_kind() {
            if is_note_word(w) {
                let tok = self.bump();
                return tok.text.parse().map_err(|_| ParseError::new(tok.span, "octave too high", tok.text.clone()));
            }
        }
        Err(self.error_here("expected a note `a`..`g`"))
    }

    fn body(&mut self, depth: usize) -> PResult<Body> {
        let tok = self.peek().clone();
        let TokenKind::Word(word) = &tok.kind else {
            return Err(self.error_here("expected an event"));
        };
        if is_note_word(word) {
            return Ok(Body::Pure(self.note()?));
        }
        if let Some(kind) = BellKind::from_keyword(word) {
            self.bump();
            self.expect(TokenKind::LParen, "`(`")?;
            let lo = self.note()?;
            self.expect(TokenKind::Comma, "`,`")?;
            let hi = self.note()?;
            self.expect(TokenKind::RParen, "`)`")?;
            return Ok(Body::Bell { kind, lo, hi });
        }
        match word.as_str() {
            "sup" => {
                self.bump();
                let renormalize = matches!(self.peek_kind(), TokenKind::Tilde);
                if renormalize {
                    self.bump();
                }
                self.expect(TokenKind::LBrace, "`{`")?;
                let mut terms = vec![self.term()?];
                while matches!(self.peek_kind(), TokenKind::Comma) {
                    self.bump();
                    terms.push(self.term()?);
                }
                self.expect(TokenKind::RBrace, "`,` or `}`")?;
                Ok(Body::Superpose { terms, renormalize })
            }
            "occ" => {
                self.bump();
                self.expect(TokenKind::LParen, "`(`")?;
                let note = self.note()?;
                self.expect(TokenKind::Comma, "`,`")?;
                let alpha = self.amp()?;
                self.expect(TokenKind::Comma, "`,`")?;
                let beta = self.amp()?;
                self.expect(TokenKind::RParen, "`)`")?;
                Ok(Body::Occ { note, alpha, beta })
            }
            w if w.starts_with(|c: char| c.is_ascii_uppercase())
                && matches!(self.peek_nth(1).kind, TokenKind::LParen) =>
            {
                if depth >= MAX_GATE_DEPTH {
                    return Err(ParseError::new(
                        tok.span,
                        format!("gates nested deeper than {MAX_GATE_DEPTH}"),
                        tok.text,
                    ));
                }
                let gate: GateName = w.parse().map_err(|_| {
                    ParseError::new(tok.span, format!("unknown gate `{w}` (expected X, H or I)"), tok.text.clone())
                })?;
                self.bump();
                self.bump();
                let inner = self.body(depth + 1)?;
                self.expect(TokenKind::RParen, "`)`")?;
                Ok(Body::Gated { gate, inner: Box::new(inner) })
            }
            _ => Err(self.error_here("expected an event")),
        }
    }

    fn term(&mut self) -> PResult<Term> {
        self.skip_newlines();
        let amp = self.amp()?;
        let note = self.note()?;
        self.skip_newlines();
        Ok(Term { amp, note })
    }

    fn amp(&mut self) -> PResult<Amp> {
        let mut negative = false;
        while matches!(self.peek_kind(), TokenKind::Minus) {
            self.bump();
            negative = !negative;
        }
        let mut parts = vec![self.amp_part(negative)?];
        loop {
            let sign = match self.peek_kind() {
                TokenKind::Plus => false,
                TokenKind::Minus => true,
                _ => break,
            };
            if !matches!(self.peek_nth(1).kind, TokenKind::Int(_) | TokenKind::Num { .. }) {
                break;
            }
            self.bump();
            parts.push(self.amp_part(sign)?);
        }
        Ok(Amp { parts })
    }

    fn amp_part(&mut self, negative: bool) -> PResult<AmpPart> {
        match self.peek_kind().clone() {
            TokenKind::Int(n) => {
                self.bump();
                Ok(AmpPart { negative, number: Number::Decimal(n as f64), imaginary: false })
            }
            TokenKind::Num { number, imaginary } => {
                self.bump();
                Ok(AmpPart { negative, number, imaginary })
            }
            _ => Err(self.error_here("expected an amplitude")),
        }
    }
}

fn is_reserved(w: &str) -> bool {
    matches!(w, "voice" | "model" | "tempo")
}
