use super::ast::{Number, Span};
use super::ParseError;

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    /// Identifier-like word, including trailing primes (`c''`) and the Bell
    /// keywords `psi-`, `psi+`, `phi-`, `phi+`.
    Word(String),
    /// Bare unsigned integer.
    Int(u64),
    /// Decimal, fraction, or any `i`-suffixed number.
    Num {
        number: Number,
        imaginary: bool,
    },
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Pipe,
    Plus,
    Minus,
    Tilde,
    Newline,
    Eof,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub span: Span,
}

impl Token {
    pub fn describe(&self) -> String {
        match self.kind {
            TokenKind::Newline => "end of line".into(),
            TokenKind::Eof => "end of input".into(),
            _ => format!("`{}`", self.text),
        }
    }
}

fn is_word_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
}

impl Cursor {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, k: usize) -> Option<char> {
        self.chars.get(self.pos + k).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek().filter(|&c| pred(c)) {
            s.push(c);
            self.bump();
        }
        s
    }
}

/// Splits `src` into tokens. Always ends with `Eof`; bad characters are
/// reported and skipped.
pub fn lex(src: &str) -> (Vec<Token>, Vec<ParseError>) {
    let mut cur = Cursor { chars: src.chars().collect(), pos: 0, line: 1, column: 1 };
    let mut tokens = Vec::new();
    let mut errors = Vec::new();

    while let Some(c) = cur.peek() {
        let span = Span::new(cur.line, cur.column);
        let single = |kind| Some((kind, c.to_string()));
        let tok = match c {
            '\n' => {
                cur.bump();
                single(TokenKind::Newline)
            }
            c if c.is_whitespace() => {
                cur.bump();
                None
            }
            '#' => {
                cur.take_while(|c| c != '\n');
                None
            }
            '{' | '}' | '(' | ')' | ',' | '|' | '+' | '-' | '~' => {
                cur.bump();
                single(match c {
                    '{' => TokenKind::LBrace,
                    '}' => TokenKind::RBrace,
                    '(' => TokenKind::LParen,
                    ')' => TokenKind::RParen,
                    ',' => TokenKind::Comma,
                    '|' => TokenKind::Pipe,
                    '+' => TokenKind::Plus,
                    '-' => TokenKind::Minus,
                    _ => TokenKind::Tilde,
                })
            }
            c if is_word_start(c) => {
                let mut word = cur.take_while(is_word_char);
                word.push_str(&cur.take_while(|c| c == '\''));
                if (word == "psi" || word == "phi") && matches!(cur.peek(), Some('+' | '-')) {
                    word.push(cur.bump().unwrap());
                }
                Some((TokenKind::Word(word.clone()), word))
            }
            c if c.is_ascii_digit() => match lex_number(&mut cur) {
                Ok(tok) => Some(tok),
                Err((text, message)) => {
                    errors.push(ParseError::new(span, message, text));
                    None
                }
            },
            other => {
                cur.bump();
                errors.push(ParseError::new(span, format!("unexpected character `{other}`"), other.to_string()));
                None
            }
        };
        if let Some((kind, text)) = tok {
            tokens.push(Token { kind, text, span });
        }
    }
    tokens.push(Token { kind: TokenKind::Eof, text: String::new(), span: Span::new(cur.line, cur.column) });
    (tokens, errors)
}

fn lex_number(cur: &mut Cursor) -> Result<(TokenKind, String), (String, String)> {
    let int_part = cur.take_while(|c| c.is_ascii_digit());
    let mut text = int_part.clone();
    let mut number = None;

    if cur.peek() == Some('.') && cur.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
        cur.bump();
        let frac = cur.take_while(|c| c.is_ascii_digit());
        text = format!("{int_part}.{frac}");
        let x: f64 = text.parse().map_err(|_| (text.clone(), format!("bad number `{text}`")))?;
        if !x.is_finite() {
            return Err((text.clone(), format!("number `{text}` is out of range")));
        }
        number = Some(Number::Decimal(x));
    } else if cur.peek() == Some('/') && cur.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
        cur.bump();
        let den = cur.take_while(|c| c.is_ascii_digit());
        text = format!("{int_part}/{den}");
        let n: u64 = int_part.parse().map_err(|_| (text.clone(), format!("numerator of `{text}` is too large")))?;
        let d: u64 = den.parse().map_err(|_| (text.clone(), format!("denominator of `{text}` is too large")))?;
        if d == 0 {
            return Err((text.clone(), format!("zero denominator in `{text}`")));
        }
        number = Some(Number::Fraction(n, d));
    }

    let imaginary = cur.peek() == Some('i') && !cur.peek_at(1).is_some_and(is_word_char);
    if imaginary {
        cur.bump();
        text.push('i');
    }

    if cur.peek().is_some_and(|c| is_word_char(c) || c == '.' || c == '/') {
        let tail = cur.take_while(|c| is_word_char(c) || c == '.' || c == '/');
        text.push_str(&tail);
        return Err((text.clone(), format!("malformed number `{text}`")));
    }

    match (number, imaginary) {
        (Some(number), imaginary) => Ok((TokenKind::Num { number, imaginary }, text)),
        (None, _) => {
            let n: u64 = int_part.parse().map_err(|_| (text.clone(), format!("number `{text}` is too large")))?;
            if imaginary {
                Ok((TokenKind::Num { number: Number::Decimal(n as f64), imaginary }, text))
            } else {
                Ok((TokenKind::Int(n), text))
            }
        }
    }
}
