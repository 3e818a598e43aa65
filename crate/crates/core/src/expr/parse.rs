//! Recursive-descent parser for coefficient expressions.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := '-' factor | base ('^' integer)*
//! base   := number | identifier | identifier '(' expr ')' | '(' expr ')'
//! ```
//!
//! Exponent chains are right-associative. Identifiers resolve against the
//! coordinate list, then parameters, then function names.

use thiserror::Error;

use super::{Expr, Func};
use crate::scalar::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedToken(String),
    UnexpectedEnd,
    UnknownIdentifier(String),
    Arity { function: String, got: usize },
    BadExponent(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at position {position}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// Byte offset into the source.
    pub position: usize,
}

impl std::fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character `{c}`"),
            ParseErrorKind::UnexpectedToken(t) => write!(f, "unexpected `{t}`"),
            ParseErrorKind::UnexpectedEnd => write!(f, "unexpected end of input"),
            ParseErrorKind::UnknownIdentifier(id) => write!(f, "unknown identifier `{id}`"),
            ParseErrorKind::Arity { function, got } => {
                write!(f, "function `{function}` takes 1 argument, got {got}")
            }
            ParseErrorKind::BadExponent(e) => write!(f, "exponent `{e}` is not a small integer"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(char),
}

impl Tok {
    fn text(&self) -> String {
        match self {
            Tok::Num(s) | Tok::Ident(s) => s.clone(),
            Tok::Sym(c) => c.to_string(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit()
            || (c == '.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit))
        {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            out.push((Tok::Num(src[start..i].to_string()), start));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), start));
        } else if "+-*/^(),".contains(c) {
            out.push((Tok::Sym(c), i));
            i += 1;
        } else {
            let ch = src[i..].chars().next().unwrap_or(c);
            return Err(ParseError {
                kind: ParseErrorKind::UnexpectedChar(ch),
                position: i,
            });
        }
    }
    Ok(out)
}

/// Exact value of a decimal literal such as `12` or `0.125`.
fn literal_value(text: &str) -> Rational {
    let (int_part, frac_part) = text.split_once('.').unwrap_or((text, ""));
    let digits = format!("{int_part}{frac_part}");
    let numer: num_bigint::BigInt = if digits.is_empty() {
        0.into()
    } else {
        digits.parse().expect("lexer only emits digits")
    };
    let denom = num_bigint::BigInt::from(10u32).pow(frac_part.len() as u32);
    Rational::new(numer, denom)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    coords: &'a [&'a str],
    params: &'a [&'a str],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            kind,
            position: self.offset(),
        }
    }

    fn unexpected(&self) -> ParseError {
        match self.peek() {
            Some(t) => self.err(ParseErrorKind::UnexpectedToken(t.text())),
            None => self.err(ParseErrorKind::UnexpectedEnd),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.unexpected())
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat('+') {
                terms.push(self.term()?);
            } else if self.eat('-') {
                terms.push(-self.term()?);
            } else {
                return Ok(Expr::sum(terms));
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = acc * self.factor()?;
            } else if self.eat('/') {
                acc = acc / self.factor()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            return Ok(-self.factor()?);
        }
        let base = self.base()?;
        if self.eat('^') {
            let k = self.exponent()?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    /// `integer ('^' exponent)?`, right-associative.
    fn exponent(&mut self) -> Result<i32, ParseError> {
        let at = self.offset();
        let text = match self.peek() {
            Some(Tok::Num(s)) if !s.contains('.') => s.clone(),
            _ => return Err(self.unexpected()),
        };
        self.pos += 1;
        let bad = || ParseError {
            kind: ParseErrorKind::BadExponent(text.clone()),
            position: at,
        };
        let k: i32 = text.parse().map_err(|_| bad())?;
        if self.eat('^') {
            let inner = self.exponent()?;
            let value = u32::try_from(inner)
                .ok()
                .and_then(|e| k.checked_pow(e))
                .ok_or_else(bad)?;
            return Ok(value);
        }
        Ok(k)
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Num(text)) => {
                self.pos += 1;
                Ok(Expr::num(literal_value(&text)))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Some(i) = self.coords.iter().position(|c| *c == name) {
                    return Ok(Expr::coord(i));
                }
                if self.params.contains(&name.as_str()) {
                    return Ok(Expr::param(&name));
                }
                match Func::from_name(&name) {
                    Some(f) if self.peek() == Some(&Tok::Sym('(')) => {
                        self.pos += 1;
                        if self.eat(')') {
                            return Err(ParseError {
                                kind: ParseErrorKind::Arity {
                                    function: name,
                                    got: 0,
                                },
                                position: at,
                            });
                        }
                        let arg = self.expr()?;
                        let mut extra = 0;
                        while self.eat(',') {
                            self.expr()?;
                            extra += 1;
                        }
                        if extra > 0 {
                            return Err(ParseError {
                                kind: ParseErrorKind::Arity {
                                    function: name,
                                    got: 1 + extra,
                                },
                                position: at,
                            });
                        }
                        self.expect(')')?;
                        Ok(Expr::apply(f, arg))
                    }
                    _ => Err(ParseError {
                        kind: ParseErrorKind::UnknownIdentifier(name),
                        position: at,
                    }),
                }
            }
            _ => Err(self.unexpected()),
        }
    }
}

/// Parses `source` with the given coordinate and parameter names.
pub fn parse_expr(source: &str, coords: &[&str], params: &[&str]) -> Result<Expr, ParseError> {
    let toks = lex(source)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: source.len(),
        coords,
        params,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.unexpected());
    }
    Ok(e)
}

/// Like [`parse_expr`] with owned name lists.
pub fn parse_with(source: &str, coords: &[String], params: &[String]) -> Result<Expr, ParseError> {
    let c: Vec<&str> = coords.iter().map(String::as_str).collect();
    let p: Vec<&str> = params.iter().map(String::as_str).collect();
    parse_expr(source, &c, &p)
}

#[cfg(test)]
mod tests {
    use super::*;

    const C: [&str; 4] = ["t", "r", "th", "ph"];

    fn p(src: &str) -> Expr {
        parse_expr(src, &C, &["M"]).unwrap()
    }

    fn e(src: &str) -> ParseError {
        parse_expr(src, &C, &["M"]).unwrap_err()
    }

    #[test]
    fn schwarzschild_component() {
        let got = p("-(1 - 2*M/r)");
        let want = -(Expr::one() - Expr::int(2) * Expr::param("M") / Expr::coord(1));
        assert_eq!(got, want);
    }

    #[test]
    fn power_of_function() {
        assert_eq!(p("sin(th)^2"), Expr::coord(2).sin().pow(2));
    }

    #[test]
    fn exact_rationals() {
        let got = parse_expr("x0*x1 + 3/2", &["x0", "x1"], &[]).unwrap();
        assert_eq!(got, Expr::coord(0) * Expr::coord(1) + Expr::rational(3, 2));
        assert_eq!(p("0.125"), Expr::rational(1, 8));
        assert_eq!(p("2.50*t"), Expr::rational(5, 2) * Expr::coord(0));
    }

    #[test]
    fn precedence() {
        // ^ binds tighter than unary minus
        assert_eq!(p("-t^2"), -(Expr::coord(0).pow(2)));
        assert_eq!(p("2^3^2"), Expr::int(512));
        assert_eq!(
            p("t - r - th"),
            Expr::coord(0) - Expr::coord(1) - Expr::coord(2)
        );
        assert_eq!(
            p("t/r/th"),
            Expr::coord(0) / (Expr::coord(1) * Expr::coord(2))
        );
        assert_eq!(
            p("t + r*th"),
            Expr::coord(0) + Expr::coord(1) * Expr::coord(2)
        );
        assert!((p("--t") - Expr::coord(0)).is_zero());
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            e("t + q"),
            ParseError {
                kind: ParseErrorKind::UnknownIdentifier("q".into()),
                position: 4
            }
        );
        assert_eq!(
            e("sin(t, r)").kind,
            ParseErrorKind::Arity {
                function: "sin".into(),
                got: 2
            }
        );
        assert_eq!(
            e("sin()").kind,
            ParseErrorKind::Arity {
                function: "sin".into(),
                got: 0
            }
        );
        assert_eq!(e("t +").kind, ParseErrorKind::UnexpectedEnd);
        assert_eq!(
            e("t $ r"),
            ParseError {
                kind: ParseErrorKind::UnexpectedChar('$'),
                position: 2
            }
        );
        assert_eq!(e("(t").kind, ParseErrorKind::UnexpectedEnd);
        assert_eq!(e("t r").kind, ParseErrorKind::UnexpectedToken("r".into()));
        assert!(matches!(e("t^r").kind, ParseErrorKind::UnexpectedToken(_)));
        assert!(matches!(
            e("t^0.5").kind,
            ParseErrorKind::UnexpectedToken(_)
        ));
        // a function name without an argument is not a value
        assert_eq!(
            e("sin").kind,
            ParseErrorKind::UnknownIdentifier("sin".into())
        );
    }

    #[test]
    fn coordinates_shadow_parameters_and_functions() {
        let got = parse_expr("exp", &["exp"], &["exp"]).unwrap();
        assert_eq!(got, Expr::coord(0));
        let got = parse_expr("M", &[], &["M"]).unwrap();
        assert_eq!(got, Expr::param("M"));
    }
}
