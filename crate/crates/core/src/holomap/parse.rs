//! Recursive-descent parser for the map DSL.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor (('*' | '/') factor)*
//! factor  := '-' factor | base ('^' uint)?
//! base    := 'z' | literal | '(' expr ')' | 'cayley(' expr ')'
//!          | 'cayinv(' expr ')' | 'compose(' expr ',' expr ')'
//! literal := float | float 'i' | 'i' | '(' float ('+' | '-') float 'i' ')'
//! ```

use thiserror::Error;

use super::expr::{MapExpr, MAX_POW};
use crate::Complex;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("denominator at byte {pos} is identically zero")]
    ZeroDenominator { pos: usize },
    #[error("exponent {exp} at byte {pos} exceeds the limit of {MAX_POW}")]
    ExponentTooLarge { pos: usize, exp: u64 },
}

/// Parses map-DSL text into an expression tree.
pub fn parse_map(text: &str) -> Result<MapExpr, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

// Probe points for the identically-zero denominator test.
const PROBES: [(f64, f64); 5] = [(0.1, 0.0), (0.0, 0.3), (-0.2, 0.1), (0.5, 0.0), (0.77, -0.2)];

fn identically_zero(e: &MapExpr) -> bool {
    let mut hits = 0;
    for (re, im) in PROBES {
        match e.eval(Complex::new(re, im)) {
            Ok(v) if v.norm() <= 1e-14 => hits += 1,
            Ok(_) => return false,
            Err(_) => {}
        }
    }
    hits > 0
}

impl<'a> Parser<'a> {
    fn error(&self, msg: &str) -> ParseError {
        ParseError::Syntax { pos: self.pos, msg: msg.to_string() }
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

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        let end = self.pos + kw.len();
        if self.src.get(self.pos..end) == Some(kw.as_bytes()) {
            let next = self.src.get(end).copied();
            if !next.is_some_and(|b| b.is_ascii_alphanumeric()) {
                self.pos = end;
                return true;
            }
        }
        false
    }

    fn expr(&mut self) -> Result<MapExpr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                let rhs = self.term()?;
                lhs = MapExpr::Add(Box::new(lhs), Box::new(rhs));
            } else if self.eat(b'-') {
                let rhs = self.term()?;
                lhs = MapExpr::Sub(Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<MapExpr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat(b'*') {
                let rhs = self.factor()?;
                lhs = MapExpr::Mul(Box::new(lhs), Box::new(rhs));
            } else if self.peek() == Some(b'/') {
                let pos = self.pos;
                self.pos += 1;
                let rhs = self.factor()?;
                if identically_zero(&rhs) {
                    return Err(ParseError::ZeroDenominator { pos });
                }
                lhs = MapExpr::Div(Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<MapExpr, ParseError> {
        if self.eat(b'-') {
            return Ok(match self.factor()? {
                MapExpr::Const(c) => MapExpr::Const(-c),
                other => MapExpr::Mul(Box::new(MapExpr::real(-1.0)), Box::new(other)),
            });
        }
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let pos = self.pos;
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.error("expected unsigned integer exponent"));
            }
            let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
            let exp: u64 = digits.parse().unwrap_or(u64::MAX);
            if exp > u64::from(MAX_POW) {
                return Err(ParseError::ExponentTooLarge { pos, exp });
            }
            return Ok(MapExpr::Pow(Box::new(base), exp as u32));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<MapExpr, ParseError> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'z') if self.keyword("z") => Ok(MapExpr::Var),
            Some(b'c') if self.keyword("cayley") => {
                let a = self.call_args(1)?;
                Ok(MapExpr::Cayley(Box::new(a.into_iter().next().unwrap())))
            }
            Some(b'c') if self.keyword("cayinv") => {
                let a = self.call_args(1)?;
                Ok(MapExpr::CayleyInv(Box::new(a.into_iter().next().unwrap())))
            }
            Some(b'c') if self.keyword("compose") => {
                let mut a = self.call_args(2)?.into_iter();
                let outer = a.next().unwrap();
                let inner = a.next().unwrap();
                Ok(MapExpr::Compose(Box::new(outer), Box::new(inner)))
            }
            Some(b'(') => {
                let save = self.pos;
                if let Some(c) = self.paren_literal() {
                    return Ok(MapExpr::Const(c));
                }
                self.pos = save;
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' || c == b'i' => {
                Ok(MapExpr::Const(self.real_or_imag()?))
            }
            Some(_) => Err(self.error("expected 'z', a number, '(' or a function")),
        }
    }

    fn call_args(&mut self, n: usize) -> Result<Vec<MapExpr>, ParseError> {
        self.expect(b'(')?;
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            if k > 0 {
                self.expect(b',')?;
            }
            out.push(self.expr()?);
        }
        self.expect(b')')?;
        Ok(out)
    }

    /// Unsigned decimal float with optional exponent; `None` if none starts here.
    fn float(&mut self) -> Option<f64> {
        self.skip_ws();
        let start = self.pos;
        let s = self.src;
        let mut i = self.pos;
        let mut digits = 0;
        while i < s.len() && s[i].is_ascii_digit() {
            i += 1;
            digits += 1;
        }
        if i < s.len() && s[i] == b'.' {
            i += 1;
            while i < s.len() && s[i].is_ascii_digit() {
                i += 1;
                digits += 1;
            }
        }
        if digits == 0 {
            return None;
        }
        if i < s.len() && (s[i] == b'e' || s[i] == b'E') {
            let mut j = i + 1;
            if j < s.len() && (s[j] == b'+' || s[j] == b'-') {
                j += 1;
            }
            let exp_start = j;
            while j < s.len() && s[j].is_ascii_digit() {
                j += 1;
            }
            if j > exp_start {
                i = j;
            }
        }
        let text = std::str::from_utf8(&s[start..i]).ok()?;
        let v = text.parse().ok()?;
        self.pos = i;
        Some(v)
    }

    fn imag_suffix(&mut self) -> bool {
        if self.src.get(self.pos) == Some(&b'i') {
            let next = self.src.get(self.pos + 1).copied();
            if !next.is_some_and(|b| b.is_ascii_alphanumeric()) {
                self.pos += 1;
                return true;
            }
        }
        false
    }

    fn real_or_imag(&mut self) -> Result<Complex, ParseError> {
        self.skip_ws();
        if self.imag_suffix() {
            return Ok(Complex::new(0.0, 1.0));
        }
        let v = self.float().ok_or_else(|| self.error("expected a number"))?;
        if self.imag_suffix() {
            Ok(Complex::new(0.0, v))
        } else {
            Ok(Complex::new(v, 0.0))
        }
    }

    /// `'(' float ('+'|'-') float 'i' ')'`, restoring nothing on failure.
    fn paren_literal(&mut self) -> Option<Complex> {
        if !self.eat(b'(') {
            return None;
        }
        self.skip_ws();
        let neg = if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let re = self.float()?;
        self.skip_ws();
        let sign = match self.src.get(self.pos) {
            Some(b'+') => 1.0,
            Some(b'-') => -1.0,
            _ => return None,
        };
        self.pos += 1;
        self.skip_ws();
        let im = self.float()?;
        if !self.imag_suffix() {
            return None;
        }
        if !self.eat(b')') {
            return None;
        }
        Some(Complex::new(if neg { -re } else { re }, sign * im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holomap::Mobius;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn parses_identity() {
        assert_eq!(parse_map(" z ").unwrap(), MapExpr::Var);
    }

    #[test]
    fn parses_complex_literals() {
        assert_eq!(parse_map("(0.3-0.5i)").unwrap(), MapExpr::Const(c(0.3, -0.5)));
        assert_eq!(parse_map("2i").unwrap(), MapExpr::Const(c(0.0, 2.0)));
        assert_eq!(parse_map("-i").unwrap(), MapExpr::Const(c(0.0, -1.0)));
        assert_eq!(parse_map("1e-3").unwrap(), MapExpr::Const(c(1e-3, 0.0)));
    }

    #[test]
    fn parenthesized_sum_is_not_a_literal() {
        let e = parse_map("(z+0.5i)").unwrap();
        assert!(matches!(e, MapExpr::Add(..)));
    }

    #[test]
    fn example_polynomial_evaluates() {
        let e = parse_map("0.5*(z+1)+0.05*(z-1)^4").unwrap();
        let v = e.eval(c(0.0, 1.0)).unwrap();
        assert!((v - c(0.3, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn mobius_quotient_evaluates_like_mobius() {
        let e = parse_map("(z+0.3)/(1+0.3*z)").unwrap();
        let m = Mobius::from_real(1.0, 0.3, 0.3, 1.0);
        let z = c(0.2, 0.4);
        assert!((e.eval(z).unwrap() - m.apply(z)).norm() < 1e-15);
    }

    #[test]
    fn reports_syntax_position() {
        match parse_map("z + * 2") {
            Err(ParseError::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_map("compose(z)").is_err());
        assert!(parse_map("z)").is_err());
    }

    #[test]
    fn rejects_identically_zero_denominator() {
        assert!(matches!(parse_map("1/(z-z)"), Err(ParseError::ZeroDenominator { pos: 1 })));
        assert!(matches!(parse_map("z/0"), Err(ParseError::ZeroDenominator { .. })));
    }

    #[test]
    fn rejects_large_exponent() {
        assert!(matches!(parse_map("z^17"), Err(ParseError::ExponentTooLarge { exp: 17, .. })));
        assert!(parse_map("z^16").is_ok());
    }

    #[test]
    fn unary_minus() {
        let e = parse_map("-z^2").unwrap();
        assert!((e.eval(c(0.5, 0.0)).unwrap() - c(-0.25, 0.0)).norm() < 1e-16);
    }
}
