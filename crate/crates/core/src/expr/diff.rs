use super::{Expr, Func, Node};
use crate::scalar::Rational;

impl Expr {
    /// Exact partial derivative with respect to coordinate `i`.
    pub fn diff(&self, i: usize) -> Expr {
        if !self.depends_on(i) {
            return Expr::zero();
        }
        match self.node() {
            Node::Num(_) | Node::Param(_) => Expr::zero(),
            Node::Coord(j) => {
                if *j == i {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Node::Func(f, u) => {
                let du = u.diff(i);
                if du.is_zero() {
                    return Expr::zero();
                }
                let outer = match f {
                    Func::Sin => u.clone().cos(),
                    Func::Cos => -u.clone().sin(),
                    Func::Tan => Expr::one() + u.clone().tan().pow(2),
                    Func::Exp => u.clone().exp(),
                    Func::Ln => u.recip(),
                    Func::Sqrt => u
                        .clone()
                        .sqrt()
                        .recip()
                        .scale(&Rational::new(1.into(), 2.into())),
                };
                outer * du
            }
            Node::Add(_, ts) => Expr::sum(
                ts.iter()
                    .filter(|(m, _)| m.depends_on(i))
                    .map(|(m, k)| m.diff(i).scale(k)),
            ),
            Node::Mul(c, fs) => {
                let mut terms = Vec::new();
                for (k, (base, e)) in fs.iter().enumerate() {
                    if !base.depends_on(i) {
                        continue;
                    }
                    let db = base.diff(i);
                    if db.is_zero() {
                        continue;
                    }
                    let mut parts = Vec::with_capacity(fs.len() + 2);
                    parts.push(Expr::num(c * Rational::from_integer((*e).into())));
                    parts.push(db);
                    for (j, (b, ej)) in fs.iter().enumerate() {
                        let ex = if j == k { ej - 1 } else { *ej };
                        if ex != 0 {
                            parts.push(b.pow(ex));
                        }
                    }
                    terms.push(Expr::product(parts));
                }
                Expr::sum(terms)
            }
        }
    }

    /// Mixed partial derivative over a list of coordinates, applied left to right.
    pub fn diff_many(&self, coords: &[usize]) -> Expr {
        coords.iter().fold(self.clone(), |e, &i| e.diff(i))
    }
}
