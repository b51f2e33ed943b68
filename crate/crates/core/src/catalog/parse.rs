//! Recursive-descent parser for the radial expression mini-language.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := ['-'] base ('^' ['-'] integer)?
//! base   := integer | name prime* | 'sqrt' '(' expr ')' | '(' expr ')'
//! ```
//!
//! Names are `x`, `y`, `z`, `r`, `i`, the constants (`hbar`, `eps`,
//! `alphaN`, `beta`, `betaN`, `cN`) and the function symbols (`V0..V5`,
//! `f1..f10`), where each trailing `'` takes one radial derivative.

use std::fmt;

use thiserror::Error;

use crate::field::{Field, Gaussian};
use crate::geomring::{Constant, FuncName, FuncSym, GeomScalar, RingError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedEnd,
    Expected(&'static str),
    UnknownName(String),
    IntegerOverflow,
    InadmissibleRadical,
    NonMonomialDenominator,
    Ring(RingError),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character `{c}`"),
            ParseErrorKind::UnexpectedEnd => write!(f, "unexpected end of input"),
            ParseErrorKind::Expected(what) => write!(f, "expected {what}"),
            ParseErrorKind::UnknownName(n) => write!(f, "unknown name `{n}`"),
            ParseErrorKind::IntegerOverflow => write!(f, "integer literal out of range"),
            ParseErrorKind::InadmissibleRadical => {
                write!(f, "sqrt argument must be r^2 or 2+alpha7*hbar^2*r^2")
            }
            ParseErrorKind::NonMonomialDenominator => write!(f, "division by a non-monomial denominator"),
            ParseErrorKind::Ring(e) => write!(f, "{e}"),
        }
    }
}

/// A parse failure at byte offset `pos` of the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at position {pos}: {kind}")]
pub struct ParseError {
    pub pos: usize,
    pub kind: ParseErrorKind,
}

/// Parses `text` into an exact ring element.
pub fn parse_radial<T: Field>(text: &str) -> Result<GeomScalar<T>, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let value = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err(ParseErrorKind::UnexpectedChar(p.src[p.pos] as char)));
    }
    Ok(value)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { pos: self.pos, kind }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8, what: &'static str) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else if self.pos >= self.src.len() {
            Err(self.err(ParseErrorKind::UnexpectedEnd))
        } else {
            Err(self.err(ParseErrorKind::Expected(what)))
        }
    }

    fn expr<T: Field>(&mut self) -> Result<GeomScalar<T>, ParseError> {
        let negate = self.eat(b'-');
        let first = self.term()?;
        let mut terms = vec![if negate { first.neg() } else { first }];
        loop {
            if self.eat(b'+') {
                terms.push(self.term()?);
            } else if self.eat(b'-') {
                terms.push(self.term()?.neg());
            } else {
                break;
            }
        }
        Ok(GeomScalar::sum(terms.iter()))
    }

    fn term<T: Field>(&mut self) -> Result<GeomScalar<T>, ParseError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.factor()?);
            } else if self.eat(b'/') {
                let at = self.pos;
                let den = self.factor()?;
                let inv = den.try_inverse().map_err(|e| ParseError {
                    pos: at,
                    kind: match e {
                        RingError::NotUnit => ParseErrorKind::NonMonomialDenominator,
                        other => ParseErrorKind::Ring(other),
                    },
                })?;
                acc = acc.mul(&inv);
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn factor<T: Field>(&mut self) -> Result<GeomScalar<T>, ParseError> {
        let negate = self.eat(b'-');
        let base = self.base()?;
        let value = if self.eat(b'^') {
            let neg_exp = self.eat(b'-');
            let at = self.pos;
            let e = self.integer()?;
            let e = i32::try_from(e).map_err(|_| ParseError { pos: at, kind: ParseErrorKind::IntegerOverflow })?;
            let e = if neg_exp { -e } else { e };
            base.pow(e).map_err(|err| ParseError {
                pos: at,
                kind: match err {
                    RingError::NotUnit => ParseErrorKind::NonMonomialDenominator,
                    other => ParseErrorKind::Ring(other),
                },
            })?
        } else {
            base
        };
        Ok(if negate { value.neg() } else { value })
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err(ParseErrorKind::Expected("integer")));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        text.parse().map_err(|_| ParseError { pos: start, kind: ParseErrorKind::IntegerOverflow })
    }

    fn base<T: Field>(&mut self) -> Result<GeomScalar<T>, ParseError> {
        match self.peek() {
            None => Err(self.err(ParseErrorKind::UnexpectedEnd)),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')', "`)`")?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => Ok(GeomScalar::from_i64(self.integer()?)),
            Some(c) if c.is_ascii_alphabetic() => self.named(),
            Some(c) => Err(self.err(ParseErrorKind::UnexpectedChar(c as char))),
        }
    }

    fn named<T: Field>(&mut self) -> Result<GeomScalar<T>, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii name");
        let mut primes = 0u8;
        while self.pos < self.src.len() && self.src[self.pos] == b'\'' {
            self.pos += 1;
            primes += 1;
        }
        let unknown = || ParseError { pos: start, kind: ParseErrorKind::UnknownName(name.to_string()) };
        let plain = |value: GeomScalar<T>| if primes == 0 { Ok(value) } else { Err(unknown()) };
        match name {
            "x" => return plain(GeomScalar::coord(0)),
            "y" => return plain(GeomScalar::coord(1)),
            "z" => return plain(GeomScalar::coord(2)),
            "r" => return plain(GeomScalar::r()),
            "i" => return plain(GeomScalar::i()),
            "sqrt" if primes == 0 => return self.radical(),
            _ => {}
        }
        if let Ok(c) = name.parse::<Constant>() {
            return plain(GeomScalar::constant(c));
        }
        if let Ok(f) = name.parse::<FuncName>() {
            return Ok(GeomScalar::func(FuncSym::new(f, primes)));
        }
        Err(unknown())
    }

    fn radical<T: Field>(&mut self) -> Result<GeomScalar<T>, ParseError> {
        let at = self.pos;
        self.expect(b'(', "`(` after sqrt")?;
        let arg: GeomScalar<T> = self.expr()?;
        self.expect(b')', "`)`")?;
        if arg == GeomScalar::q() {
            Ok(GeomScalar::w())
        } else if arg == GeomScalar::s() {
            Ok(GeomScalar::r())
        } else {
            Err(ParseError { pos: at, kind: ParseErrorKind::InadmissibleRadical })
        }
    }
}

/// Parses a rational or Gaussian literal such as `3/2` or `-i`.
pub fn parse_gaussian<T: Field>(text: &str) -> Result<Gaussian<T>, ParseError> {
    let value: GeomScalar<T> = parse_radial(text)?;
    value.as_gaussian().ok_or(ParseError { pos: 0, kind: ParseErrorKind::Expected("a numeric literal") })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::inv_r_pow;
    use num_rational::BigRational;

    type G = GeomScalar<BigRational>;

    fn p(text: &str) -> G {
        parse_radial(text).unwrap()
    }

    #[test]
    fn item_one_spin_orbit_potential() {
        let expected = G::hbar()
            .mul(&inv_r_pow(2))
            .scale(&Gaussian::ratio(-1, 2))
            .add(&G::constant(Constant::Alpha(1)).mul(&G::hbar()).scale(&Gaussian::from_i64(3)));
        assert_eq!(p("-hbar/(2*r^2) + 3*alpha1*hbar"), expected);
    }

    #[test]
    fn zero_and_literals() {
        assert!(p("0").is_zero());
        assert_eq!(p("3/2"), G::ratio(3, 2));
        assert_eq!(p("-i*i"), G::one());
        assert_eq!(p("r^2"), G::s());
        assert_eq!(p("x^2+y^2+z^2"), G::s());
    }

    #[test]
    fn radical_term() {
        let v = p("eps*hbar/(r^2*sqrt(2+alpha7*hbar^2*r^2))");
        let expected = G::constant(Constant::Eps)
            .mul(&G::hbar())
            .mul(&inv_r_pow(2))
            .mul(&G::w().try_inverse().unwrap());
        assert_eq!(v, expected);
        assert_eq!(p("sqrt(r^2)"), G::r());
    }

    #[test]
    fn primes_and_negative_powers() {
        assert_eq!(p("V5''"), G::func(FuncSym::new(FuncName::V(5), 2)));
        assert_eq!(p("hbar^-1").mul(&G::hbar()), G::one());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_radial::<BigRational>("1 + (x").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnexpectedEnd);
        let e = parse_radial::<BigRational>("1/(1+r)").unwrap_err();
        assert_eq!((e.pos, e.kind), (2, ParseErrorKind::NonMonomialDenominator));
        let e = parse_radial::<BigRational>("sqrt(1+r^2)").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::InadmissibleRadical);
        let e = parse_radial::<BigRational>("gamma").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownName("gamma".into()));
        let e = parse_radial::<BigRational>("x $").unwrap_err();
        assert_eq!((e.pos, e.kind), (2, ParseErrorKind::UnexpectedChar('$')));
    }

    #[test]
    fn printing_round_trips() {
        for text in [
            "-hbar/(2*r^2) + 3*alpha1*hbar",
            "eps*hbar^2/(2*r^2*sqrt(2+alpha7*hbar^2*r^2)) + hbar^2*alpha6/2",
            "(1/2+3*i)*x*y*V1'/r^3 - beta*hbar^-2",
            "1/(r^4*(2+alpha7*hbar^2*r^2)^2)",
        ] {
            let once = p(text);
            let twice = p(&once.to_string());
            assert_eq!(once, twice, "{text} -> {once}");
        }
    }
}
