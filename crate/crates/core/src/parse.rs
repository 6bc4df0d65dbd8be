//! Hand-rolled recursive-descent parsers for the text forms of words,
//! timed words and monomials. Every error carries a byte position.
//!
//! ```text
//! word    := letter*
//! letter  := (symbol | '(' symbol+ ')') '_' digits
//! symbol  := '1' | ident ('*' | '†')?
//! timed   := ('e' '(' int ')')* | '1'
//! ```

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::word::{normalize, Letter, ObservableSymbol, Word};

impl Error {
    pub(crate) fn shifted(self, by: usize) -> Self {
        match self {
            Error::Parse { position, token, message } => Error::Parse {
                position: position + by,
                token,
                message,
            },
            other => other,
        }
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { text, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.text.len()
    }

    fn token_here(&self) -> String {
        let rest = self.rest();
        let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
        let tok = &rest[..end];
        if tok.is_empty() {
            "<end of input>".to_string()
        } else {
            tok.to_string()
        }
    }

    fn error(&self, message: &str) -> Error {
        Error::parse(self.pos, self.token_here(), message)
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn digits(&mut self) -> Result<&'a str> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        Ok(&self.text[start..self.pos])
    }

    fn symbol(&mut self) -> Result<ObservableSymbol> {
        match self.peek() {
            Some('1') => {
                self.bump();
                Ok(ObservableSymbol::identity())
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric()) {
                    self.bump();
                }
                let sym = ObservableSymbol::new(&self.text[start..self.pos]);
                match self.peek() {
                    Some('*') | Some('†') => {
                        self.bump();
                        Ok(sym.adjoint())
                    }
                    _ => Ok(sym),
                }
            }
            _ => Err(self.error("expected an observable symbol")),
        }
    }

    fn copy_index(&mut self) -> Result<u32> {
        self.expect('_')?;
        let at = self.pos;
        let d = self.digits()?;
        match d.parse::<u32>() {
            Ok(c) if c >= 1 => Ok(c),
            _ => Err(Error::parse(at, d, "copy index must be a positive integer")),
        }
    }

    fn letter(&mut self) -> Result<Letter> {
        if self.peek() == Some('(') {
            self.bump();
            let mut syms = Vec::new();
            loop {
                self.skip_ws();
                if self.peek() == Some(')') {
                    break;
                }
                syms.push(self.symbol()?);
            }
            if syms.is_empty() {
                return Err(self.error("empty parenthesized monomial"));
            }
            self.bump();
            let copy = self.copy_index()?;
            Ok(Letter::monomial(copy, syms))
        } else {
            let sym = self.symbol()?;
            let copy = self.copy_index()?;
            Ok(Letter::new(copy, sym))
        }
    }
}

/// Parses the raw letter sequence without normalizing.
pub fn parse_letters(text: &str) -> Result<Vec<Letter>> {
    let mut cur = Cursor::new(text);
    let mut letters = Vec::new();
    cur.skip_ws();
    while !cur.at_end() {
        letters.push(cur.letter()?);
        cur.skip_ws();
    }
    Ok(letters)
}

/// Parses `A_1 B_2 (A C)_1` into its normal form.
pub fn parse_word(text: &str) -> Result<Word> {
    if text.trim() == "1" {
        return Ok(Word::identity());
    }
    parse_letters(text).map(normalize)
}

/// Parses a whitespace-separated single-copy monomial such as `A C*`.
pub fn parse_monomial(text: &str) -> Result<Vec<ObservableSymbol>> {
    let mut cur = Cursor::new(text);
    let mut out = Vec::new();
    cur.skip_ws();
    while !cur.at_end() {
        out.push(cur.symbol()?);
        cur.skip_ws();
    }
    if out.is_empty() {
        return Err(Error::parse(0, text, "empty monomial"));
    }
    Ok(out)
}

/// Parses `e(3) e(7) e(3)`; `1` or the empty string is the identity.
pub fn parse_timed(text: &str) -> Result<Vec<i64>> {
    let mut cur = Cursor::new(text);
    let mut times = Vec::new();
    cur.skip_ws();
    if cur.rest().trim() == "1" {
        return Ok(times);
    }
    while !cur.at_end() {
        cur.expect('e')?;
        cur.skip_ws();
        cur.expect('(')?;
        cur.skip_ws();
        let start = cur.pos;
        if cur.peek() == Some('-') {
            cur.bump();
        }
        cur.digits()?;
        let raw = &text[start..cur.pos];
        let t = raw
            .parse::<i64>()
            .map_err(|_| Error::parse(start, raw, "time out of range"))?;
        cur.skip_ws();
        cur.expect(')')?;
        times.push(t);
        cur.skip_ws();
    }
    Ok(times)
}

/// `0.7` or `0.7,-0.1` (real, imaginary).
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let bad = || Error::parse(0, text, "invalid number");
    match text.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(
            re.trim().parse().map_err(|_| bad())?,
            im.trim().parse().map_err(|_| bad())?,
        )),
        None => Ok(Complex64::new(text.trim().parse().map_err(|_| bad())?, 0.0)),
    }
}
