//! Expression grammar shared by the CLI and the table data.
//!
//! ```text
//! expr    := ['-'] term (('+' | '-') term)*
//! term    := factor (['*'] factor)*
//! factor  := atom postfix*
//! postfix := "'" | "^*" | '^' digits
//! atom    := number | 'r2' | 'sqrt2' | 'I'
//!          | 's' digits          isometry s_J
//!          | 's[' J ',' K ']'    s_J s_K^*
//!          | 'E[' J ',' K ']'    matrix unit
//!          | 'a' digits          fermion
//!          | 'b[' half ']'       mixture
//!          | '(' expr ')' | '{' expr '}'
//! ```
//!
//! Words inside brackets are digit strings, so this grammar covers N ≤ 9.

use num_rational::Rational64;

use crate::algebra::CuntzPoly;
use crate::error::ParseError;
use crate::fermions::{mixture, parse_half, psi_generator, CarExpr};
use crate::scalar::Scalar;
use crate::words::Word;

/// Values an expression can be evaluated into.
pub trait Target: Sized + Clone {
    fn scalar(&self, c: Scalar) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn adjoint(&self) -> Self;
    fn isometry_pair(&self, j: Word, k: Word) -> Result<Self, String>;
    fn matrix_unit(&self, j: Word, k: Word) -> Result<Self, String>;
    fn fermion(&self, n: u32) -> Result<Self, String>;
    fn mode(&self, k: Rational64) -> Result<Self, String>;
}

impl Target for CuntzPoly {
    fn scalar(&self, c: Scalar) -> Self {
        CuntzPoly::scalar(self.alphabet(), c)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn adjoint(&self) -> Self {
        CuntzPoly::adjoint(self)
    }
    fn isometry_pair(&self, j: Word, k: Word) -> Result<Self, String> {
        let n = self.alphabet();
        j.check_alphabet(n).map_err(|e| e.to_string())?;
        k.check_alphabet(n).map_err(|e| e.to_string())?;
        Ok(CuntzPoly::term(n, j, k, Scalar::one()))
    }
    fn matrix_unit(&self, j: Word, k: Word) -> Result<Self, String> {
        let n = self.alphabet();
        j.check_alphabet(n).map_err(|e| e.to_string())?;
        k.check_alphabet(n).map_err(|e| e.to_string())?;
        CuntzPoly::matrix_unit(n, j, k).map_err(|e| e.to_string())
    }
    fn fermion(&self, n: u32) -> Result<Self, String> {
        if self.alphabet() != 2 {
            return Err("fermions live in O_2".into());
        }
        psi_generator(n).map_err(|e| e.to_string())
    }
    fn mode(&self, k: Rational64) -> Result<Self, String> {
        if self.alphabet() != 2 {
            return Err("fermions live in O_2".into());
        }
        Ok(mixture(k).map_err(|e| e.to_string())?.to_cuntz())
    }
}

impl Target for CarExpr {
    fn scalar(&self, c: Scalar) -> Self {
        CarExpr::scalar(c)
    }
    fn add(&self, other: &Self) -> Self {
        CarExpr::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        CarExpr::mul(self, other)
    }
    fn neg(&self) -> Self {
        self.scale(&-Scalar::one())
    }
    fn adjoint(&self) -> Self {
        CarExpr::adjoint(self)
    }
    fn isometry_pair(&self, _: Word, _: Word) -> Result<Self, String> {
        Err("Cuntz generators are not fermion expressions".into())
    }
    fn matrix_unit(&self, _: Word, _: Word) -> Result<Self, String> {
        Err("matrix units are not fermion expressions".into())
    }
    fn fermion(&self, n: u32) -> Result<Self, String> {
        CarExpr::a(n).map_err(|e| e.to_string())
    }
    fn mode(&self, k: Rational64) -> Result<Self, String> {
        mixture(k).map_err(|e| e.to_string())
    }
}

struct Parser<'a, T: Target> {
    src: &'a [u8],
    pos: usize,
    proto: T,
}

impl<'a, T: Target> Parser<'a, T> {
    fn err(&self, at: usize, msg: impl Into<String>) -> ParseError {
        ParseError::new(at, msg)
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
            Err(self.err(self.pos, format!("expected '{}'", c as char)))
        }
    }

    fn digits(&mut self) -> &'a [u8] {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn word(&mut self) -> Result<Word, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let d = self.digits();
        let letters: Vec<u8> = d.iter().map(|b| b - b'0').collect();
        if letters.contains(&0) {
            return Err(self.err(start, "letter 0 in word"));
        }
        Ok(Word::new(letters))
    }

    fn expr(&mut self) -> Result<T, ParseError> {
        let negate = self.eat(b'-');
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            if self.eat(b'+') {
                let t = self.term()?;
                acc = acc.add(&t);
            } else if self.eat(b'-') {
                let t = self.term()?;
                acc = acc.add(&t.neg());
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_factor(&mut self) -> bool {
        matches!(
            self.peek(),
            Some(b'0'..=b'9' | b'r' | b's' | b'I' | b'E' | b'a' | b'b' | b'(' | b'{')
        )
    }

    fn term(&mut self) -> Result<T, ParseError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') || self.starts_factor() {
                let f = self.factor()?;
                acc = acc.mul(&f);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<T, ParseError> {
        let mut value = self.atom()?;
        loop {
            if self.eat(b'\'') {
                value = value.adjoint();
                continue;
            }
            self.skip_ws();
            if self.src.get(self.pos) == Some(&b'^') {
                let at = self.pos;
                self.pos += 1;
                if self.eat(b'*') {
                    value = value.adjoint();
                    continue;
                }
                self.skip_ws();
                let d = self.digits();
                let e: u32 = std::str::from_utf8(d)
                    .ok()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| self.err(at, "expected exponent"))?;
                let mut out = value.scalar(Scalar::one());
                for _ in 0..e {
                    out = out.mul(&value);
                }
                value = out;
                continue;
            }
            return Ok(value);
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn pair(&mut self) -> Result<(Word, Word), ParseError> {
        self.expect(b'[')?;
        let j = self.word()?;
        self.expect(b',')?;
        let k = self.word()?;
        self.expect(b']')?;
        Ok((j, k))
    }

    fn atom(&mut self) -> Result<T, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let Some(c) = self.src.get(self.pos).copied() else {
            return Err(self.err(start, "unexpected end of input"));
        };
        let lift = |s: &Self, r: Result<T, String>| r.map_err(|m| s.err(start, m));
        match c {
            b'0'..=b'9' => {
                let num = self.digits();
                let num: i64 = std::str::from_utf8(num)
                    .unwrap()
                    .parse()
                    .map_err(|_| self.err(start, "number too large"))?;
                let mut value = Scalar::from_int(num);
                // a following '/' always belongs to the literal
                self.skip_ws();
                if self.src.get(self.pos) == Some(&b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let den_at = self.pos;
                    let den = self.digits();
                    let den: i64 = std::str::from_utf8(den)
                        .ok()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| self.err(den_at, "expected denominator"))?;
                    value = Scalar::from_ratio(num, den).map_err(|e| self.err(den_at, e.to_string()))?;
                }
                Ok(self.proto.scalar(value))
            }
            b'(' | b'{' => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(if c == b'(' { b')' } else { b'}' })?;
                Ok(inner)
            }
            _ => {
                if self.keyword("sqrt2") || self.keyword("r2") {
                    return Ok(self.proto.scalar(Scalar::sqrt2()));
                }
                if self.keyword("I") {
                    return Ok(self.proto.scalar(Scalar::one()));
                }
                if self.keyword("E") {
                    let (j, k) = self.pair()?;
                    return lift(self, self.proto.matrix_unit(j, k));
                }
                if self.keyword("b") {
                    self.expect(b'[')?;
                    let inner_start = self.pos;
                    while self.pos < self.src.len() && self.src[self.pos] != b']' {
                        self.pos += 1;
                    }
                    let text = std::str::from_utf8(&self.src[inner_start..self.pos]).unwrap();
                    let k = parse_half(text).map_err(|e| self.err(inner_start, e.to_string()))?;
                    self.expect(b']')?;
                    return lift(self, self.proto.mode(k));
                }
                if self.keyword("a") {
                    let at = self.pos;
                    let d = self.digits();
                    let n: u32 = std::str::from_utf8(d)
                        .ok()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| self.err(at, "expected fermion index"))?;
                    return lift(self, self.proto.fermion(n));
                }
                if self.keyword("s") {
                    if self.src.get(self.pos) == Some(&b'[') {
                        let (j, k) = self.pair()?;
                        return lift(self, self.proto.isometry_pair(j, k));
                    }
                    let at = self.pos;
                    let j = self.word()?;
                    if j.is_empty() {
                        return Err(self.err(at, "expected generator index"));
                    }
                    return lift(self, self.proto.isometry_pair(j, Word::empty()));
                }
                Err(self.err(start, format!("unknown identifier starting with '{}'", c as char)))
            }
        }
    }
}

/// Parses `text` into any [`Target`]; `proto` supplies the context.
pub fn parse_with<T: Target>(proto: T, text: &str) -> Result<T, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        proto,
    };
    if p.peek().is_none() {
        return Err(ParseError::new(0, "empty expression"));
    }
    let v = p.expr()?;
    if p.peek().is_some() {
        return Err(ParseError::new(p.pos, "unexpected trailing input"));
    }
    Ok(v)
}

/// Parses an element of O_N.
pub fn parse_poly(n: u8, text: &str) -> Result<CuntzPoly, ParseError> {
    parse_with(CuntzPoly::zero(n), text)
}

/// Parses a formal fermion expression.
pub fn parse_car(text: &str) -> Result<CarExpr, ParseError> {
    parse_with(CarExpr::zero(), text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphisms::PermEndo;

    fn p(s: &str) -> CuntzPoly {
        parse_poly(2, s).unwrap()
    }

    #[test]
    fn flip_unitary() {
        let u = p("s1 s2' + s2 s1'");
        assert_eq!(u, PermEndo::parse(2, 1, "12").unwrap().unitary());
        assert!(p("s1' s1").equals(&p("1")).unwrap());
        assert!(p("s1 s1^* + s2 s2^*").equals(&p("I")).unwrap());
        assert_eq!(p("s12"), p("s1 s2"));
        assert_eq!(p("s12'"), p("s2' s1'"));
        assert_eq!(p("E[12,21]"), p("s[12,21]"));
        assert_eq!(p("r2 * r2"), p("2"));
        assert_eq!(p("(s1 + s2)^2"), p("s11 + s12 + s21 + s22"));
    }

    #[test]
    fn fermion_expressions() {
        let rho = PermEndo::parse(2, 2, "142").unwrap();
        let lhs = p("a1 a1' a2 - a1' a1 a2'");
        let rhs = rho.morphism().apply(&p("a1"));
        assert!(lhs.equals(&rhs).unwrap());
        let car = parse_car("a1 a1' a2 - a1' a1 a2'").unwrap();
        assert_eq!(car.to_string(), "a1 a1' a2 - a1' a1 a2'");
        assert!(car.to_cuntz().equals(&lhs).unwrap());
        assert!(parse_car("s1").is_err());
        assert_eq!(parse_car("b[1/2]").unwrap(), mixture(Rational64::new(1, 2)).unwrap());
        assert!(p("b[-3/2]'").equals(&mixture(Rational64::new(-3, 2)).unwrap().adjoint().to_cuntz()).unwrap());
        assert!(p("{a1 + a1'}(a2)").equals(&p("a1 a2 + a1' a2")).unwrap());
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse_poly(2, "").unwrap_err().position, 0);
        assert_eq!(parse_poly(2, "s1 +").unwrap_err().position, 4);
        assert_eq!(parse_poly(2, "s1 x").unwrap_err().position, 3);
        assert!(parse_poly(2, "s3").is_err());
        assert!(parse_poly(2, "E[1,12]").is_err());
        assert!(parse_poly(2, "b[1]").is_err());
        assert!(parse_poly(2, "(s1").is_err());
    }

    #[test]
    fn render_round_trip() {
        let samples = [
            "s1 s2' + s2 s1'",
            "(s1 + s2) 1/2 r2",
            "1/2 s1 - 3 s2 s2' + r2 s[12,1]",
            "a1 a2 + a3'",
            "(1 + r2) s1' s2",
            "-s2'",
            "0",
            "1/2 + 1/2 * sqrt2",
        ];
        for s in samples {
            let x = parse_poly(2, s).unwrap();
            let again = parse_poly(2, &x.to_string()).unwrap();
            assert!(again.equals(&x).unwrap(), "{s} -> {x}");
        }
        let rendered = p("(1/2 r2) s1").to_string();
        assert!(parse_poly(2, &rendered).unwrap().equals(&p("(1/2 r2) s1")).unwrap());
    }
}
