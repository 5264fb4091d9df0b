//! Plain-text divisor files.
//!
//! ```text
//! # d[e1, √2 e2] + d[√2 e1, −e2] over ℚ(√2)
//! field { minpoly = [-2, 0, 1], interval = [1, 2] }
//! m = 2
//! pair mult=1 lambda=[1, 0] mu=[0, [0, 1]]
//! pair mult=1 lambda=[[0, 1], 0] mu=[0, -1]
//! ```
//!
//! The `field` header is optional and defaults to ℚ. It accepts the keys
//! `minpoly`, `interval` and `assume_irreducible`. Scalars are rationals
//! (`3`, `-3/2`) or θ-power coefficient lists (`[c0, c1, ...]`). Every pair
//! needs `mult`, `lambda` and `mu`, each exactly once. `#` starts a comment.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::divisor::{Divisor, DivisorError, Pair};
use crate::scalar::{Field, FieldError, Scalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Field { line: usize, source: FieldError },
    #[error("line {line}: {source}")]
    Divisor { line: usize, source: DivisorError },
    #[error("missing `m = <int>` line")]
    MissingDimension,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Num(BigRational),
    Punct(char),
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    last_line: usize,
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_rational(s: &str, line: usize) -> Result<BigRational, ParseError> {
    let bad = || syntax(line, format!("invalid number `{s}`"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d == BigInt::from(0) || d < BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

impl Lexer {
    fn new(text: &str) -> Result<Self, ParseError> {
        let mut toks = Vec::new();
        let mut last_line = 1;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let code = raw.split('#').next().unwrap_or("");
            let mut chars = code.char_indices().peekable();
            while let Some(&(start, c)) = chars.peek() {
                if c.is_whitespace() {
                    chars.next();
                } else if "{}[]=,".contains(c) {
                    toks.push((Tok::Punct(c), line));
                    chars.next();
                } else if c.is_ascii_digit() || c == '-' || c == '+' {
                    let mut end = start;
                    while let Some(&(j, d)) = chars.peek() {
                        if d.is_ascii_digit() || (j == start && (d == '-' || d == '+')) || d == '/'
                        {
                            end = j + d.len_utf8();
                            chars.next();
                        } else {
                            break;
                        }
                    }
                    toks.push((Tok::Num(parse_rational(&code[start..end], line)?), line));
                } else if c.is_ascii_alphabetic() || c == '_' {
                    let mut end = start;
                    while let Some(&(j, d)) = chars.peek() {
                        if d.is_ascii_alphanumeric() || d == '_' {
                            end = j + 1;
                            chars.next();
                        } else {
                            break;
                        }
                    }
                    toks.push((Tok::Word(code[start..end].to_string()), line));
                } else {
                    return Err(syntax(line, format!("unexpected character `{c}`")));
                }
            }
            last_line = line;
        }
        Ok(Self {
            toks,
            pos: 0,
            last_line,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn line(&self) -> usize {
        self.toks.get(self.pos).map_or(self.last_line, |(_, l)| *l)
    }

    fn next(&mut self) -> Result<(Tok, usize), ParseError> {
        let t = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| syntax(self.last_line, "unexpected end of input"))?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        match self.next()? {
            (Tok::Punct(p), _) if p == c => Ok(()),
            (_, line) => Err(syntax(line, format!("expected `{c}`"))),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Punct(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn word(&mut self) -> Result<(String, usize), ParseError> {
        match self.next()? {
            (Tok::Word(w), line) => Ok((w, line)),
            (_, line) => Err(syntax(line, "expected a keyword")),
        }
    }

    fn number(&mut self) -> Result<BigRational, ParseError> {
        match self.next()? {
            (Tok::Num(q), _) => Ok(q),
            (_, line) => Err(syntax(line, "expected a number")),
        }
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        let line = self.line();
        let q = self.number()?;
        if !q.is_integer() {
            return Err(syntax(line, "expected an integer"));
        }
        i64::try_from(q.to_integer()).map_err(|_| syntax(line, "integer out of range"))
    }

    fn rational_list(&mut self) -> Result<Vec<BigRational>, ParseError> {
        self.expect('[')?;
        let mut out = vec![self.number()?];
        while self.eat(',') {
            out.push(self.number()?);
        }
        self.expect(']')?;
        Ok(out)
    }

    fn scalar(&mut self, field: &Field) -> Result<Scalar, ParseError> {
        let line = self.line();
        if self.peek() == Some(&Tok::Punct('[')) {
            let coeffs = self.rational_list()?;
            field
                .scalar(coeffs)
                .map_err(|source| ParseError::Field { line, source })
        } else {
            Ok(field.rational(self.number()?))
        }
    }

    fn scalar_list(&mut self, field: &Field) -> Result<Vec<Scalar>, ParseError> {
        self.expect('[')?;
        let mut out = vec![self.scalar(field)?];
        while self.eat(',') {
            out.push(self.scalar(field)?);
        }
        self.expect(']')?;
        Ok(out)
    }
}

fn parse_field(lx: &mut Lexer, line: usize) -> Result<Field, ParseError> {
    lx.expect('{')?;
    let mut minpoly = None;
    let mut interval = None;
    let mut assume = None;
    loop {
        let (key, kline) = lx.word()?;
        lx.expect('=')?;
        let dup = || syntax(kline, format!("duplicate key `{key}`"));
        match key.as_str() {
            "minpoly" => {
                if minpoly.replace(lx.rational_list()?).is_some() {
                    return Err(dup());
                }
            }
            "interval" => {
                let v = lx.rational_list()?;
                if v.len() != 2 {
                    return Err(syntax(kline, "interval needs exactly two endpoints"));
                }
                if interval.replace(v).is_some() {
                    return Err(dup());
                }
            }
            "assume_irreducible" => {
                let (w, wline) = lx.word()?;
                let b = match w.as_str() {
                    "true" => true,
                    "false" => false,
                    _ => return Err(syntax(wline, "expected `true` or `false`")),
                };
                if assume.replace(b).is_some() {
                    return Err(dup());
                }
            }
            _ => return Err(syntax(kline, format!("unknown field key `{key}`"))),
        }
        if lx.eat('}') {
            break;
        }
        lx.expect(',')?;
    }
    let minpoly = minpoly.ok_or_else(|| syntax(line, "field needs `minpoly`"))?;
    let mut interval = interval.ok_or_else(|| syntax(line, "field needs `interval`"))?;
    let hi = interval.pop().unwrap();
    let lo = interval.pop().unwrap();
    let made = if assume.unwrap_or(false) {
        Field::with_assumed_irreducible(minpoly, (lo, hi))
    } else {
        Field::new(minpoly, (lo, hi))
    };
    made.map_err(|source| ParseError::Field { line, source })
}

fn parse_pair(lx: &mut Lexer, field: &Field, m: usize, line: usize) -> Result<Pair, ParseError> {
    let mut mult = None;
    let mut lambda = None;
    let mut mu = None;
    while matches!(lx.peek(), Some(Tok::Word(w)) if w != "pair") && lx.line() == line {
        let (key, kline) = lx.word()?;
        lx.expect('=')?;
        let dup = || syntax(kline, format!("duplicate key `{key}`"));
        let fresh = match key.as_str() {
            "mult" => mult.replace(lx.integer()?).is_none(),
            "lambda" => lambda.replace(lx.scalar_list(field)?).is_none(),
            "mu" => mu.replace(lx.scalar_list(field)?).is_none(),
            _ => return Err(syntax(kline, format!("unknown pair key `{key}`"))),
        };
        if !fresh {
            return Err(dup());
        }
    }
    if lx.peek().is_some() && lx.line() == line {
        return Err(syntax(line, "unexpected token after pair"));
    }
    let mult = mult.ok_or_else(|| syntax(line, "pair needs `mult`"))?;
    let lambda = lambda.ok_or_else(|| syntax(line, "pair needs `lambda`"))?;
    let mu = mu.ok_or_else(|| syntax(line, "pair needs `mu`"))?;
    if lambda.len() != m || mu.len() != m {
        return Err(syntax(
            line,
            format!(
                "expected vectors of length {m}, got {} and {}",
                lambda.len(),
                mu.len()
            ),
        ));
    }
    Pair::new(lambda, mu, mult).map_err(|source| ParseError::Divisor { line, source })
}

/// Parses a divisor file.
pub fn parse_divisor(text: &str) -> Result<Divisor, ParseError> {
    let mut lx = Lexer::new(text)?;
    let mut field = Field::rationals();
    if let Some(Tok::Word(w)) = lx.peek() {
        if w == "field" {
            let line = lx.line();
            lx.next()?;
            field = parse_field(&mut lx, line)?;
        }
    }
    let (key, line) = match lx.peek() {
        None => return Err(ParseError::MissingDimension),
        _ => lx.word()?,
    };
    if key != "m" {
        return Err(syntax(line, format!("expected `m = <int>`, found `{key}`")));
    }
    lx.expect('=')?;
    let m = lx.integer()?;
    if m < 1 {
        return Err(syntax(line, "m must be positive"));
    }
    let m = m as usize;
    let mut d = Divisor::new(field.clone(), m);
    while lx.peek().is_some() {
        let (key, line) = lx.word()?;
        if key != "pair" {
            return Err(syntax(line, format!("expected `pair`, found `{key}`")));
        }
        let pair = parse_pair(&mut lx, &field, m, line)?;
        d.push(pair)
            .map_err(|source| ParseError::Divisor { line, source })?;
    }
    Ok(d)
}

fn write_vec(out: &mut String, v: &[Scalar]) {
    out.push('[');
    for (i, s) in v.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write!(out, "{s}").unwrap();
    }
    out.push(']');
}

/// Writes `d` in the divisor file format; `parse_divisor` reads it back unchanged.
pub fn write_divisor(d: &Divisor) -> String {
    let mut out = String::new();
    if d.field().degree() > 1 {
        writeln!(out, "{}", d.field()).unwrap();
    }
    writeln!(out, "m = {}", d.dim()).unwrap();
    for p in d.pairs() {
        write!(out, "pair mult={} lambda=", p.mult()).unwrap();
        write_vec(&mut out, p.lambda());
        out.push_str(" mu=");
        write_vec(&mut out, p.mu());
        out.push('\n');
    }
    out
}
