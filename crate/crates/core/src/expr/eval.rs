use std::collections::BTreeMap;

use thiserror::Error;

use super::{Expr, Func, Node};
use crate::scalar::{rational_to_real, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainErrorKind {
    LogOfNonPositive,
    SqrtOfNegative,
    DivisionByZero,
}

impl std::fmt::Display for DomainErrorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DomainErrorKind::LogOfNonPositive => "logarithm of a non-positive value",
            DomainErrorKind::SqrtOfNegative => "square root of a negative value",
            DomainErrorKind::DivisionByZero => "division by zero",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("domain error: {kind} in `{subtree}`")]
    Domain {
        kind: DomainErrorKind,
        subtree: String,
    },
    #[error("parameter `{0}` is not bound")]
    UnboundParameter(String),
    #[error("coordinate index {index} out of range for a point of dimension {dim}")]
    CoordinateOutOfRange { index: usize, dim: usize },
}

impl Expr {
    /// Evaluates the expression at `point` with the given parameter values.
    pub fn eval<F: Real>(&self, point: &[F], params: &BTreeMap<String, F>) -> Result<F, EvalError> {
        match self.node() {
            Node::Num(q) => Ok(rational_to_real(q)),
            Node::Coord(i) => point
                .get(*i)
                .copied()
                .ok_or(EvalError::CoordinateOutOfRange {
                    index: *i,
                    dim: point.len(),
                }),
            Node::Param(name) => params
                .get(name.as_ref())
                .copied()
                .ok_or_else(|| EvalError::UnboundParameter(name.to_string())),
            Node::Func(f, arg) => {
                let u = arg.eval(point, params)?;
                let domain = |kind| EvalError::Domain {
                    kind,
                    subtree: self.to_string(),
                };
                Ok(match f {
                    Func::Sin => u.sin(),
                    Func::Cos => u.cos(),
                    Func::Tan => u.tan(),
                    Func::Exp => u.exp(),
                    Func::Ln => {
                        if u <= F::zero() {
                            return Err(domain(DomainErrorKind::LogOfNonPositive));
                        }
                        u.ln()
                    }
                    Func::Sqrt => {
                        if u < F::zero() {
                            return Err(domain(DomainErrorKind::SqrtOfNegative));
                        }
                        u.sqrt()
                    }
                })
            }
            Node::Mul(c, fs) => {
                let mut acc: F = rational_to_real(c);
                for (base, e) in fs {
                    let b = base.eval(point, params)?;
                    if *e < 0 && b == F::zero() {
                        return Err(EvalError::Domain {
                            kind: DomainErrorKind::DivisionByZero,
                            subtree: base.to_string(),
                        });
                    }
                    acc = acc * b.powi(*e);
                }
                Ok(acc)
            }
            Node::Add(c, ts) => {
                let mut acc: F = rational_to_real(c);
                for (m, k) in ts {
                    acc = acc + rational_to_real::<F>(k) * m.eval(point, params)?;
                }
                Ok(acc)
            }
        }
    }

    /// Evaluation in `f64` with parameters given as `(name, value)` pairs.
    pub fn eval_f64(&self, point: &[f64], params: &[(&str, f64)]) -> Result<f64, EvalError> {
        let map: BTreeMap<String, f64> = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        self.eval(point, &map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;

    const COORDS: [&str; 4] = ["t", "r", "th", "ph"];

    #[test]
    fn arithmetic() {
        let e = parse_expr("-(1 - 2*M/r)", &COORDS, &["M"]).unwrap();
        assert_eq!(
            e.eval_f64(&[0.0, 4.0, 0.0, 0.0], &[("M", 1.0)]).unwrap(),
            -0.5
        );
        let e = parse_expr("x0*x1", &["x0", "x1", "x2", "x3"], &[]).unwrap();
        assert_eq!(e.eval_f64(&[2.0, 3.0, 9.0, 9.0], &[]).unwrap(), 6.0);
    }

    #[test]
    fn single_precision() {
        let e = parse_expr("sin(th)^2 + cos(th)^2", &COORDS, &[]).unwrap();
        let v: f32 = e.eval(&[0.0f32, 1.0, 0.7, 0.0], &BTreeMap::new()).unwrap();
        assert!((v - 1.0).abs() < 1e-6);
    }

    #[test]
    fn domain_errors() {
        let e = parse_expr("1/r", &COORDS, &[]).unwrap();
        let err = e.eval_f64(&[0.0, 0.0, 0.0, 0.0], &[]).unwrap_err();
        assert!(matches!(
            err,
            EvalError::Domain { kind: DomainErrorKind::DivisionByZero, ref subtree } if subtree == "x1"
        ));
        let e = parse_expr("ln(r - 1)", &COORDS, &[]).unwrap();
        assert!(matches!(
            e.eval_f64(&[0.0, 0.5, 0.0, 0.0], &[]),
            Err(EvalError::Domain {
                kind: DomainErrorKind::LogOfNonPositive,
                ..
            })
        ));
        let e = parse_expr("sqrt(r - 1)", &COORDS, &[]).unwrap();
        assert!(matches!(
            e.eval_f64(&[0.0, 0.5, 0.0, 0.0], &[]),
            Err(EvalError::Domain {
                kind: DomainErrorKind::SqrtOfNegative,
                ..
            })
        ));
        let e = parse_expr("M*r", &COORDS, &["M"]).unwrap();
        assert_eq!(
            e.eval_f64(&[0.0; 4], &[]),
            Err(EvalError::UnboundParameter("M".into()))
        );
        assert!(matches!(
            Expr::coord(5).eval_f64(&[1.0], &[]),
            Err(EvalError::CoordinateOutOfRange { index: 5, dim: 1 })
        ));
    }

    #[test]
    fn deterministic() {
        let e = parse_expr("exp(t)*sin(th)/(r^2 + 1)", &COORDS, &[]).unwrap();
        let p = [0.3, 2.0, 1.1, 0.0];
        assert_eq!(
            e.eval_f64(&p, &[]).unwrap().to_bits(),
            e.eval_f64(&p, &[]).unwrap().to_bits()
        );
    }
}
