//! Recursive-descent parsers for ordinals, spaces and points.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::cardinal::Cardinal;
use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::space::{AtomKind, Family, IndexSize, Point, Space, Step, SymbolicAtom};

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn error(&self, expected: &str) -> Error {
        let before = &self.src[..self.pos];
        let line = before.matches('\n').count() + 1;
        let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Error::Syntax { line, col, expected: expected.to_string() }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("'{token}'")))
        }
    }

    fn finish(&mut self) -> Result<()> {
        self.skip_ws();
        if self.pos == self.src.len() {
            Ok(())
        } else {
            Err(self.error("end of input"))
        }
    }

    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let len = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return None;
        }
        let d = &self.rest()[..len];
        self.pos += len;
        Some(d)
    }

    fn nat(&mut self) -> Result<u64> {
        let save = self.pos;
        let d = self.digits().ok_or_else(|| self.error("natural number"))?;
        d.parse().map_err(|_| {
            self.pos = save;
            self.error("natural number below 2^64")
        })
    }

    fn positive(&mut self) -> Result<u64> {
        let save = self.pos;
        let n = self.nat()?;
        if n == 0 {
            self.pos = save;
            return Err(self.error("positive natural number"));
        }
        Ok(n)
    }

    fn ordinal(&mut self) -> Result<Ordinal> {
        let mut acc = Ordinal::zero();
        loop {
            let term = self.ordinal_term()?;
            acc = acc.add(&term);
            if !self.eat("+") {
                return Ok(acc);
            }
        }
    }

    fn ordinal_term(&mut self) -> Result<Ordinal> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(Ordinal::nat(self.nat()?)),
            Some('w') => {
                self.pos += 1;
                let exp = if self.eat("^") {
                    self.expect("(")?;
                    let e = self.ordinal()?;
                    self.expect(")")?;
                    e
                } else {
                    Ordinal::one()
                };
                let coeff = if self.eat("*") { self.positive()? } else { 1 };
                Ok(Ordinal::monomial(exp, coeff))
            }
            _ => Err(self.error("ordinal term ('w' or natural number)")),
        }
    }

    fn ident(&mut self) -> &'a str {
        self.skip_ws();
        let len = self
            .rest()
            .char_indices()
            .find(|(_, c)| !(c.is_ascii_alphanumeric() || *c == '_'))
            .map_or(self.rest().len(), |(i, _)| i);
        let id = &self.rest()[..len];
        self.pos += len;
        id
    }

    fn space(&mut self) -> Result<Space> {
        self.skip_ws();
        for kind in AtomKind::ALL {
            if self.eat(kind.name()) {
                return Ok(Space::atom(kind));
            }
        }
        let start = self.pos;
        let id = self.ident();
        match id {
            "empty" => Ok(Space::Empty),
            "unit" => Ok(Space::Unit),
            "cantor" => Ok(Space::Cantor),
            "fin" => {
                self.expect("(")?;
                let n = self.positive()?;
                self.expect(")")?;
                Ok(Space::Fin(n))
            }
            "I" => {
                self.expect("(")?;
                let a = self.ordinal()?;
                self.expect(",")?;
                let m = self.positive()?;
                self.expect(")")?;
                Ok(Space::Interval(a, m))
            }
            "sum" => {
                self.expect("(")?;
                let mut parts = vec![self.space()?];
                while self.eat(",") {
                    parts.push(self.space()?);
                }
                self.expect(")")?;
                Ok(Space::Sum(parts))
            }
            "op" => {
                self.expect("(")?;
                let index = match self.ident() {
                    "w" | "aleph0" => IndexSize::Aleph0,
                    "aleph1" => IndexSize::Aleph1,
                    "c" => IndexSize::Continuum,
                    _ => return Err(self.error("index size (w, aleph1, c)")),
                };
                self.expect(",")?;
                let l = self.space()?;
                self.expect(")")?;
                Ok(Space::OnePoint { index, family: Family::Uniform(Box::new(l)) })
            }
            "opramp" => {
                self.expect("(")?;
                let at = self.pos;
                let a = self.ordinal()?;
                if !a.is_limit() {
                    self.pos = at;
                    return Err(self.error("limit ordinal"));
                }
                self.expect(")")?;
                Ok(Space::OnePoint { index: IndexSize::Aleph0, family: Family::Ramp(a) })
            }
            "derive" => {
                self.expect("(")?;
                let at = self.pos;
                let base = self.space()?;
                let kind = match base {
                    Space::Atom(SymbolicAtom { kind, .. }) => kind,
                    _ => {
                        self.pos = at;
                        return Err(self.error("symbolic atom"));
                    }
                };
                self.expect(",")?;
                let shift = self.ordinal()?;
                self.expect(")")?;
                Ok(Space::Atom(SymbolicAtom { kind, shift }))
            }
            _ => {
                self.pos = start;
                Err(self.error("space (fin, I, unit, cantor, sum, op, opramp, derive, empty or an atom name)"))
            }
        }
    }

    fn rational(&mut self) -> Result<BigRational> {
        self.skip_ws();
        let neg = self.eat("-");
        let p: BigInt = self.digits().ok_or_else(|| self.error("integer"))?.parse().expect("digits");
        let q: BigInt = if self.eat("/") {
            let save = self.pos;
            let q: BigInt = self.digits().ok_or_else(|| self.error("denominator"))?.parse().expect("digits");
            if q == BigInt::from(0) {
                self.pos = save;
                return Err(self.error("nonzero denominator"));
            }
            q
        } else {
            BigInt::from(1)
        };
        let r = BigRational::new(p, q);
        Ok(if neg { -r } else { r })
    }

    fn step(&mut self) -> Result<Step> {
        self.skip_ws();
        if self.eat("inf") {
            return Ok(Step::AtInfinity);
        }
        match self.rest().chars().next() {
            Some('b') => {
                self.pos += 1;
                Ok(Step::SumBranch(self.nat()?))
            }
            Some('c') => {
                self.pos += 1;
                Ok(Step::CopyIndex(self.positive()?))
            }
            Some('l') => {
                self.pos += 1;
                Ok(Step::LeafIndex(self.nat()?))
            }
            Some('o') => {
                self.pos += 1;
                self.expect("(")?;
                let o = self.ordinal()?;
                self.expect(")")?;
                Ok(Step::OrdinalPoint(o))
            }
            Some('x') => {
                self.pos += 1;
                let len = self.rest().bytes().take_while(|b| *b == b'0' || *b == b'1').count();
                let bits = self.rest()[..len].bytes().map(|b| b == b'1').collect();
                self.pos += len;
                Ok(Step::CantorPrefix(bits))
            }
            Some('u') => {
                self.pos += 1;
                self.expect("(")?;
                let q = self.rational()?;
                self.expect(")")?;
                Ok(Step::UnitCoord(q))
            }
            _ => Err(self.error("point step (b, c, inf, l, o, x, u)")),
        }
    }
}

pub fn parse_ordinal(text: &str) -> Result<Ordinal> {
    let mut p = Parser::new(text);
    let o = p.ordinal()?;
    p.finish()?;
    Ok(o)
}

pub fn parse_space(text: &str) -> Result<Space> {
    let mut p = Parser::new(text);
    let s = p.space()?;
    p.finish()?;
    Ok(s)
}

/// Steps separated by `/`; the empty string is the root of a point-free path.
pub fn parse_point(text: &str) -> Result<Point> {
    let mut p = Parser::new(text);
    let mut steps = Vec::new();
    if p.peek().is_some() {
        steps.push(p.step()?);
        while p.eat("/") {
            steps.push(p.step()?);
        }
    }
    p.finish()?;
    Ok(Point(steps))
}

pub fn parse_cardinal(text: &str) -> Result<Cardinal> {
    text.parse()
}

pub fn parse_rational(text: &str) -> Result<BigRational> {
    let mut p = Parser::new(text);
    let r = p.rational()?;
    p.finish()?;
    Ok(r)
}
