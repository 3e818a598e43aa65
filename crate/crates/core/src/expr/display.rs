use std::fmt::{self, Write};

use num_traits::{One, Signed, Zero};

use super::{from_term, Expr, Node};
use crate::scalar::Rational;

/// Renders an expression in the input grammar with named coordinates.
///
/// The output parses back to a structurally identical expression.
pub struct ExprDisplay<'a> {
    expr: &'a Expr,
    names: Option<&'a [String]>,
}

impl Expr {
    pub fn display<'a>(&'a self, coord_names: &'a [String]) -> ExprDisplay<'a> {
        ExprDisplay {
            expr: self,
            names: Some(coord_names),
        }
    }

    pub fn to_text(&self, coord_names: &[String]) -> String {
        self.display(coord_names).to_string()
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        ExprDisplay {
            expr: self,
            names: None,
        }
        .fmt(f)
    }
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        self.write_sum(&mut out, self.expr)?;
        f.write_str(&out)
    }
}

impl ExprDisplay<'_> {
    fn coord_name(&self, i: usize, out: &mut String) -> fmt::Result {
        match self.names.and_then(|n| n.get(i)) {
            Some(name) => out.write_str(name),
            None => write!(out, "x{i}"),
        }
    }

    /// Top level: anything goes.
    fn write_sum(&self, out: &mut String, e: &Expr) -> fmt::Result {
        match e.node() {
            Node::Add(c, ts) => {
                let mut first = true;
                if !c.is_zero() {
                    write_rational(out, c)?;
                    first = false;
                }
                for (m, k) in ts {
                    if first {
                        self.write_product(out, &from_term(k.clone(), m.clone()))?;
                        first = false;
                    } else if k.is_negative() {
                        out.write_str(" - ")?;
                        self.write_product(out, &from_term(-k, m.clone()))?;
                    } else {
                        out.write_str(" + ")?;
                        self.write_product(out, &from_term(k.clone(), m.clone()))?;
                    }
                }
                Ok(())
            }
            _ => self.write_product(out, e),
        }
    }

    /// Product level: sums are parenthesised.
    fn write_product(&self, out: &mut String, e: &Expr) -> fmt::Result {
        match e.node() {
            Node::Add(..) => {
                out.write_char('(')?;
                self.write_sum(out, e)?;
                out.write_char(')')
            }
            Node::Num(q) => write_rational(out, q),
            Node::Mul(c, fs) => {
                if c.is_negative() {
                    out.write_char('-')?;
                }
                let numer = Rational::from_integer(c.numer().abs());
                let denom = c.denom().clone();
                let positive: Vec<_> = fs.iter().filter(|(_, k)| *k > 0).collect();
                let mut wrote = false;
                if !numer.is_one() || positive.is_empty() {
                    write!(out, "{}", numer.numer())?;
                    wrote = true;
                }
                for (b, k) in positive {
                    if wrote {
                        out.write_char('*')?;
                    }
                    self.write_power(out, b, *k)?;
                    wrote = true;
                }
                if !denom.is_one() {
                    write!(out, "/{denom}")?;
                }
                for (b, k) in fs.iter().filter(|(_, k)| *k < 0) {
                    if matches!(b.node(), Node::Add(..)) {
                        // repeated division keeps the sum as a reciprocal base
                        for _ in 0..k.unsigned_abs() {
                            out.write_char('/')?;
                            self.write_atom(out, b)?;
                        }
                    } else {
                        out.write_char('/')?;
                        self.write_power(out, b, -k)?;
                    }
                }
                Ok(())
            }
            _ => self.write_atom(out, e),
        }
    }

    fn write_power(&self, out: &mut String, base: &Expr, k: i32) -> fmt::Result {
        self.write_atom(out, base)?;
        if k != 1 {
            write!(out, "^{k}")?;
        }
        Ok(())
    }

    fn write_atom(&self, out: &mut String, e: &Expr) -> fmt::Result {
        match e.node() {
            Node::Coord(i) => self.coord_name(*i, out),
            Node::Param(p) => out.write_str(p),
            Node::Func(f, arg) => {
                write!(out, "{}(", f.name())?;
                self.write_sum(out, arg)?;
                out.write_char(')')
            }
            Node::Num(q) if q.is_integer() && !q.is_negative() => write_rational(out, q),
            _ => {
                out.write_char('(')?;
                self.write_sum(out, e)?;
                out.write_char(')')
            }
        }
    }
}

fn write_rational(out: &mut String, q: &Rational) -> fmt::Result {
    if q.is_integer() {
        write!(out, "{}", q.numer())
    } else {
        write!(out, "{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;

    fn names() -> Vec<String> {
        ["t", "r", "th", "ph"]
            .iter()
            .map(|s| s.to_string())
            .collect()
    }

    fn roundtrip(src: &str) -> String {
        let e = parse_expr(src, &["t", "r", "th", "ph"], &["M", "H"]).unwrap();
        let text = e.to_text(&names());
        let back = parse_expr(&text, &["t", "r", "th", "ph"], &["M", "H"]).unwrap();
        assert_eq!(back, e, "{src} -> {text}");
        text
    }

    #[test]
    fn rendering() {
        assert_eq!(roundtrip("-(1 - 2*M/r)"), "-1 + 2*M/r");
        assert_eq!(roundtrip("sin(th)^2"), "sin(th)^2");
        assert_eq!(roundtrip("3/2*t"), "3*t/2");
        assert_eq!(roundtrip("-t^2"), "-t^2");
        roundtrip("1/(1 - 2*M/r)^2");
        roundtrip("exp(2*H*t)*r^2/(3 + sin(th))");
        roundtrip("-7/3");
        roundtrip("t - r + 5");
        roundtrip("1/r^3");
    }

    #[test]
    fn default_names() {
        assert_eq!(Expr::coord(2).to_string(), "x2");
    }
}
