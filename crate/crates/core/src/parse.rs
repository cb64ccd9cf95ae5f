//! Text syntax for words and presentations.
//!
//! ```text
//! presentation := '<' names '|' [word {',' word}] '>'
//! word         := factor { ['*'] factor }
//! factor       := atom ['^' integer]
//! atom         := name | '1' | '(' word ')' | '[' word ',' word ']'
//! ```
//!
//! Juxtaposed names such as `ab` are split against the alphabet when they do
//! not name a generator themselves.

use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::word::{Alphabet, Word};

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    alphabet: &'a Alphabet,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_raw() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(d) if d == c => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(d) => self.err(format!("expected `{c}`, found `{d}`")),
            None => self.err(format!("expected `{c}`, found end of input")),
        }
    }

    fn ident(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let len = rest
            .char_indices()
            .find(|&(i, c)| !(c.is_alphanumeric() && (i > 0 || c.is_alphabetic())))
            .map_or(rest.len(), |(i, _)| i);
        if len == 0 {
            return self.err("expected a generator name");
        }
        self.pos += len;
        Ok(&rest[..len])
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        let mut end = start;
        let bytes = self.src.as_bytes();
        if end < bytes.len() && (bytes[end] == b'-' || bytes[end] == b'+') {
            end += 1;
        }
        let digits = end;
        while end < bytes.len() && bytes[end].is_ascii_digit() {
            end += 1;
        }
        if end == digits {
            return self.err("expected an integer exponent");
        }
        self.pos = end;
        self.src[start..end]
            .parse()
            .map_err(|_| Error::Syntax { pos: start, msg: "exponent out of range".into() })
    }

    /// Splits a run of letters into generator names, longest match first.
    fn resolve_name(&self, name: &str) -> Result<Word> {
        if let Ok(g) = self.alphabet.get(name) {
            return Ok(Word::generator(g));
        }
        let mut out = Word::identity();
        let mut rest = name;
        'outer: while !rest.is_empty() {
            for len in (1..=rest.len()).rev() {
                if !rest.is_char_boundary(len) {
                    continue;
                }
                if let Ok(g) = self.alphabet.get(&rest[..len]) {
                    out.push(g, 1);
                    rest = &rest[len..];
                    continue 'outer;
                }
            }
            return Err(Error::UnknownGenerator(name.to_string()));
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<Word> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let w = self.word()?;
                self.expect(')')?;
                Ok(w)
            }
            Some('[') => {
                self.pos += 1;
                let x = self.word()?;
                self.expect(',')?;
                let y = self.word()?;
                self.expect(']')?;
                Ok(Word::commutator(&x, &y))
            }
            Some('1') => {
                self.pos += 1;
                Ok(Word::identity())
            }
            Some(c) if c.is_alphabetic() => {
                let name = self.ident()?;
                self.resolve_name(name)
            }
            Some(c) => self.err(format!("unexpected `{c}`")),
            None => self.err("unexpected end of input"),
        }
    }

    fn factor(&mut self) -> Result<Word> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.integer()?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn word(&mut self) -> Result<Word> {
        let mut w = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    w = w.mul(&self.factor()?);
                }
                Some(c) if c == '(' || c == '[' || c == '1' || c.is_alphabetic() => {
                    w = w.mul(&self.factor()?);
                }
                _ => return Ok(w),
            }
        }
    }

    fn finish(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.err(format!("trailing input starting at `{c}`")),
        }
    }
}

pub fn parse_word(text: &str, alphabet: &Alphabet) -> Result<Word> {
    let mut p = Parser { src: text, pos: 0, alphabet };
    let w = p.word()?;
    p.finish()?;
    Ok(w)
}

/// Parses `<g1,...,gm | r1, ..., rn>`. Relators that freely reduce to the
/// identity are an error.
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let empty = Alphabet::new(Vec::<String>::new())?;
    let mut p = Parser { src: text, pos: 0, alphabet: &empty };
    p.expect('<')?;
    let mut names = Vec::new();
    if p.peek() != Some('|') {
        loop {
            let name = p.ident()?;
            if names.iter().any(|n: &String| n == name) {
                return Err(Error::DuplicateGenerator(name.to_string()));
            }
            names.push(name.to_string());
            if p.peek() == Some(',') {
                p.pos += 1;
            } else {
                break;
            }
        }
    }
    p.expect('|')?;
    let alphabet = Alphabet::new(names)?;
    let mut p = Parser { src: text, pos: p.pos, alphabet: &alphabet };
    let mut relators = Vec::new();
    if p.peek() != Some('>') {
        loop {
            let r = p.word()?;
            if r.is_identity() {
                return Err(Error::EmptyRelator { index: relators.len() });
            }
            relators.push(r);
            if p.peek() == Some(',') {
                p.pos += 1;
            } else {
                break;
            }
        }
    }
    p.expect('>')?;
    p.finish()?;
    Presentation::new(alphabet, relators)
}
