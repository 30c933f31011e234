//! Words in named generators with exponents ±1.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub gen: String,
    /// `1` or `-1`.
    pub exp: i8,
}

impl Letter {
    pub fn new(gen: impl Into<String>, exp: i8) -> Self {
        debug_assert!(exp == 1 || exp == -1);
        Letter {
            gen: gen.into(),
            exp,
        }
    }

    pub fn inverse(&self) -> Letter {
        Letter {
            gen: self.gen.clone(),
            exp: -self.exp,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 1 {
            f.write_str(&self.gen)
        } else {
            write!(f, "{}^-1", self.gen)
        }
    }
}

/// Serialized as its display string, e.g. `"T1 T01^-1"`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn gen(name: &str) -> Self {
        Word(vec![Letter::new(name, 1)])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// Parses whitespace- or `*`-separated tokens such as `s01`, `T1^-1`,
    /// `s2^3` or `(s1 s2)^2`.
    pub fn parse(s: &str) -> Result<Word> {
        let mut p = Parser {
            chars: s.chars().collect(),
            pos: 0,
        };
        let w = p.sequence()?;
        p.skip_ws();
        if p.pos != p.chars.len() {
            return Err(Error::Parse(format!(
                "unexpected {:?} in word {s:?}",
                p.chars[p.pos]
            )));
        }
        Ok(w)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(Letter::inverse).collect())
    }

    pub fn concat(&self, o: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend(o.0.iter().cloned());
        Word(v)
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::empty();
        for _ in 0..k.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// Cancels adjacent `x x^-1` pairs until none remain.
    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for l in &self.0 {
            if out
                .last()
                .is_some_and(|t| t.gen == l.gen && t.exp == -l.exp)
            {
                out.pop();
            } else {
                out.push(l.clone());
            }
        }
        Word(out)
    }

    /// Replaces each generator by a word (generators missing from `f` are kept).
    pub fn substitute(&self, f: &dyn Fn(&str) -> Option<Word>) -> Word {
        let mut out = Word::empty();
        for l in &self.0 {
            let img = f(&l.gen).unwrap_or_else(|| Word::gen(&l.gen));
            out = out.concat(&if l.exp == 1 { img } else { img.inverse() });
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Word, D::Error> {
        let s = String::deserialize(d)?;
        Word::parse(&s).map_err(serde::de::Error::custom)
    }
}

impl std::str::FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Word> {
        Word::parse(s)
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len()
            && (self.chars[self.pos].is_whitespace() || self.chars[self.pos] == '*')
        {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn sequence(&mut self) -> Result<Word> {
        let mut w = Word::empty();
        loop {
            self.skip_ws();
            match self.peek() {
                None | Some(')') => return Ok(w),
                Some('1') if self.is_identity_token() => {
                    self.pos += 1;
                }
                Some(_) => {
                    let atom = self.atom()?;
                    w = w.concat(&atom);
                }
            }
        }
    }

    fn is_identity_token(&self) -> bool {
        !self
            .chars
            .get(self.pos + 1)
            .is_some_and(|c| c.is_alphanumeric() || *c == '_')
    }

    fn atom(&mut self) -> Result<Word> {
        let base = if self.peek() == Some('(') {
            self.pos += 1;
            let inner = self.sequence()?;
            if self.peek() != Some(')') {
                return Err(Error::Parse("unbalanced parenthesis".into()));
            }
            self.pos += 1;
            inner
        } else {
            let start = self.pos;
            while self
                .peek()
                .is_some_and(|c| c.is_alphanumeric() || c == '_' || c == '@' || c == '\'')
            {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(Error::Parse(format!(
                    "unexpected character {:?}",
                    self.peek().unwrap()
                )));
            }
            Word::gen(&self.chars[start..self.pos].iter().collect::<String>())
        };
        if self.peek() == Some('^') {
            self.pos += 1;
            let start = self.pos;
            if self.peek() == Some('-') || self.peek() == Some('+') {
                self.pos += 1;
            }
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            let txt: String = self.chars[start..self.pos].iter().collect();
            let k: i64 = txt
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent {txt:?}")))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        let w = Word::parse("s01^-1 s1*s2^2 (T1 T2)^-1").unwrap();
        assert_eq!(w.to_string(), "s01^-1 s1 s2 s2 T2^-1 T1^-1");
        assert_eq!(Word::parse("").unwrap(), Word::empty());
        assert_eq!(Word::parse("1").unwrap(), Word::empty());
        assert!(Word::parse("s1 )").is_err());
        assert!(Word::parse("s1^x").is_err());
    }

    #[test]
    fn free_reduction() {
        let w = Word::parse("a a^-1 b").unwrap();
        assert_eq!(w.free_reduce(), Word::parse("b").unwrap());
        let w = Word::parse("a b b^-1 c c^-1 a^-1").unwrap();
        assert!(w.free_reduce().is_empty());
        let r = Word::parse("a b a^-1").unwrap();
        assert_eq!(r.free_reduce(), r);
    }
}
