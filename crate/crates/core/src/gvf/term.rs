//! Positively homogeneous piecewise-linear terms built from `+`, `min` and
//! rational scalar multiples.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

use super::GvfError;
use crate::rational::{parse_rat, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TropTerm {
    /// Zero-based variable index, written `x1, x2, ...`.
    Var(usize),
    Zero,
    Add(Box<TropTerm>, Box<TropTerm>),
    Min(Box<TropTerm>, Box<TropTerm>),
    Scale(Rat, Box<TropTerm>),
}

impl TropTerm {
    pub fn var(i: usize) -> Self {
        TropTerm::Var(i)
    }

    pub fn add(a: TropTerm, b: TropTerm) -> Self {
        TropTerm::Add(Box::new(a), Box::new(b))
    }

    pub fn min(a: TropTerm, b: TropTerm) -> Self {
        TropTerm::Min(Box::new(a), Box::new(b))
    }

    pub fn scale(q: Rat, a: TropTerm) -> Self {
        TropTerm::Scale(q, Box::new(a))
    }

    /// `max(a, b) = -min(-a, -b)`.
    pub fn max(a: TropTerm, b: TropTerm) -> Self {
        let m = -Rat::one();
        Self::scale(
            m.clone(),
            Self::min(Self::scale(m.clone(), a), Self::scale(m, b)),
        )
    }

    /// Number of variables referenced (one more than the largest index).
    pub fn arity(&self) -> usize {
        match self {
            TropTerm::Var(i) => i + 1,
            TropTerm::Zero => 0,
            TropTerm::Add(a, b) | TropTerm::Min(a, b) => a.arity().max(b.arity()),
            TropTerm::Scale(_, a) => a.arity(),
        }
    }

    pub fn eval(&self, x: &[Rat]) -> Result<Rat, GvfError> {
        if x.len() < self.arity() {
            return Err(GvfError::Arity {
                expected: self.arity(),
                found: x.len(),
            });
        }
        Ok(self.eval_unchecked(x))
    }

    fn eval_unchecked(&self, x: &[Rat]) -> Rat {
        match self {
            TropTerm::Var(i) => x[*i].clone(),
            TropTerm::Zero => Rat::zero(),
            TropTerm::Add(a, b) => a.eval_unchecked(x) + b.eval_unchecked(x),
            TropTerm::Min(a, b) => a.eval_unchecked(x).min(b.eval_unchecked(x)),
            TropTerm::Scale(q, a) => q * a.eval_unchecked(x),
        }
    }

    /// Parses e.g. `min(x1, x2)`, `x1 - min(x1, 0)`, `1/2*max(x1, x2, 0)`.
    pub fn parse(s: &str) -> Result<Self, GvfError> {
        let mut p = TermParser {
            s: s.as_bytes(),
            i: 0,
        };
        let t = p.expr()?;
        p.ws();
        if p.i != p.s.len() {
            return Err(GvfError::Parse(format!("trailing input in term {s:?}")));
        }
        Ok(t)
    }
}

impl fmt::Display for TropTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TropTerm::Var(i) => write!(f, "x{}", i + 1),
            TropTerm::Zero => write!(f, "0"),
            TropTerm::Add(a, b) => write!(f, "({a} + {b})"),
            TropTerm::Min(a, b) => write!(f, "min({a}, {b})"),
            TropTerm::Scale(q, a) => {
                if q.is_integer() && !q.is_negative() {
                    write!(f, "{q}*{a}")
                } else {
                    write!(f, "({q})*{a}")
                }
            }
        }
    }
}

impl Serialize for TropTerm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for TropTerm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        TropTerm::parse(&s).map_err(de::Error::custom)
    }
}

struct TermParser<'a> {
    s: &'a [u8],
    i: usize,
}

impl TermParser<'_> {
    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.i).copied()
    }

    fn err(&self, what: &str) -> GvfError {
        GvfError::Parse(format!("{what} at byte {}", self.i))
    }

    fn eat(&mut self, word: &str) -> bool {
        self.ws();
        if self.s[self.i..].starts_with(word.as_bytes()) {
            self.i += word.len();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<TropTerm, GvfError> {
        let mut acc = self.product()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.i += 1;
            let t = self.product()?;
            let t = if c == b'-' {
                TropTerm::scale(-Rat::one(), t)
            } else {
                t
            };
            acc = TropTerm::add(acc, t);
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<TropTerm, GvfError> {
        if self.peek() == Some(b'-') {
            self.i += 1;
            return Ok(TropTerm::scale(-Rat::one(), self.product()?));
        }
        if self
            .peek()
            .is_some_and(|c| c.is_ascii_digit() || c == b'(' && self.rational_ahead())
        {
            let q = self.rational()?;
            if self.peek() == Some(b'*') {
                self.i += 1;
                return Ok(TropTerm::scale(q, self.product()?));
            }
            if q.is_zero() {
                return Ok(TropTerm::Zero);
            }
            return Err(self.err("nonzero constants are not homogeneous"));
        }
        self.atom()
    }

    /// Whether a parenthesized rational literal such as `(-1/2)` follows.
    fn rational_ahead(&self) -> bool {
        let rest = &self.s[self.i..];
        let close = match rest.iter().position(|&c| c == b')') {
            Some(c) => c,
            None => return false,
        };
        let inner = std::str::from_utf8(&rest[1..close]).unwrap_or("");
        parse_rat(inner.trim()).is_some()
    }

    fn rational(&mut self) -> Result<Rat, GvfError> {
        self.ws();
        if self.s[self.i] == b'(' {
            let close = self.i + self.s[self.i..].iter().position(|&c| c == b')').unwrap();
            let inner = std::str::from_utf8(&self.s[self.i + 1..close])
                .unwrap()
                .trim()
                .to_string();
            self.i = close + 1;
            return parse_rat(&inner).ok_or_else(|| self.err("bad rational"));
        }
        let start = self.i;
        while self.i < self.s.len() && (self.s[self.i].is_ascii_digit() || self.s[self.i] == b'/') {
            self.i += 1;
        }
        let txt = std::str::from_utf8(&self.s[start..self.i]).unwrap();
        parse_rat(txt).ok_or_else(|| self.err("bad rational"))
    }

    fn args(&mut self) -> Result<Vec<TropTerm>, GvfError> {
        if self.peek() != Some(b'(') {
            return Err(self.err("expected '('"));
        }
        self.i += 1;
        let mut out = vec![self.expr()?];
        while self.peek() == Some(b',') {
            self.i += 1;
            out.push(self.expr()?);
        }
        if self.peek() != Some(b')') {
            return Err(self.err("expected ')'"));
        }
        self.i += 1;
        if out.len() < 2 {
            return Err(self.err("min/max need at least two arguments"));
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<TropTerm, GvfError> {
        if self.eat("min") {
            let args = self.args()?;
            return Ok(args.into_iter().reduce(TropTerm::min).unwrap());
        }
        if self.eat("max") {
            let args = self.args()?;
            return Ok(args.into_iter().reduce(TropTerm::max).unwrap());
        }
        match self.peek() {
            Some(b'x') => {
                self.i += 1;
                let start = self.i;
                while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
                    self.i += 1;
                }
                let k: usize = std::str::from_utf8(&self.s[start..self.i])
                    .unwrap()
                    .parse()
                    .map_err(|_| self.err("expected variable index"))?;
                if k == 0 {
                    return Err(self.err("variables are numbered from x1"));
                }
                Ok(TropTerm::Var(k - 1))
            }
            Some(b'(') => {
                self.i += 1;
                let t = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.i += 1;
                Ok(t)
            }
            _ => Err(self.err("expected a term")),
        }
    }
}
