use num_traits::{One, Zero};

use super::{Chart, GeometryError};
use crate::expr::Expr;
use crate::scalar::Rational;

/// Levi-Civita data of a chart, derived symbolically once.
///
/// Index conventions: `christoffel[r][n][m]` is `Gamma^r_{nm}`,
/// `riemann[r][s][m][n]` is `R^r_{s mn}` with
/// `R^r_{s mn} = d_m Gamma^r_{ns} - d_n Gamma^r_{ms}
///             + Gamma^r_{ml} Gamma^l_{ns} - Gamma^r_{nl} Gamma^l_{ms}`,
/// `riemann_lower[r][s][m][n]` is `R_{rs|mn} = g_{rl} R^l_{s mn}`,
/// `ricci[s][n]` is `R^r_{s r n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometryCache {
    metric: Vec<Vec<Expr>>,
    inverse: Vec<Vec<Expr>>,
    christoffel: Vec<Vec<Vec<Expr>>>,
    riemann: Vec<Vec<Vec<Vec<Expr>>>>,
    riemann_lower: Vec<Vec<Vec<Vec<Expr>>>>,
    ricci: Vec<Vec<Expr>>,
    scalar: Expr,
}

impl GeometryCache {
    pub fn new(chart: &Chart) -> Result<Self, GeometryError> {
        let g = chart.metric().to_vec();
        let d = g.len();
        let inverse = inverse_metric(&g)?;
        let dg: Vec<Vec<Vec<Expr>>> = (0..d)
            .map(|l| {
                (0..d)
                    .map(|m| (0..d).map(|n| g[m][n].diff(l)).collect())
                    .collect()
            })
            .collect();

        let mut christoffel = vec![vec![vec![Expr::zero(); d]; d]; d];
        for r in 0..d {
            for n in 0..d {
                for m in n..d {
                    let terms = (0..d).filter(|&l| !inverse[r][l].is_zero()).map(|l| {
                        let bracket =
                            Expr::sum([dg[n][l][m].clone(), dg[m][l][n].clone(), -&dg[l][n][m]]);
                        &inverse[r][l] * &bracket
                    });
                    let v = Expr::sum(terms).scale(&Rational::new(1.into(), 2.into()));
                    christoffel[r][n][m] = v.clone();
                    christoffel[r][m][n] = v;
                }
            }
        }

        let gamma = &christoffel;
        let mut riemann = vec![vec![vec![vec![Expr::zero(); d]; d]; d]; d];
        for r in 0..d {
            for s in 0..d {
                for m in 0..d {
                    for n in m + 1..d {
                        let mut parts = vec![gamma[r][n][s].diff(m), -gamma[r][m][s].diff(n)];
                        for l in 0..d {
                            parts.push(&gamma[r][m][l] * &gamma[l][n][s]);
                            parts.push(-(&gamma[r][n][l] * &gamma[l][m][s]));
                        }
                        let v = Expr::sum(parts);
                        riemann[r][s][n][m] = -&v;
                        riemann[r][s][m][n] = v;
                    }
                }
            }
        }

        let mut riemann_lower = vec![vec![vec![vec![Expr::zero(); d]; d]; d]; d];
        for r in 0..d {
            for s in 0..d {
                for m in 0..d {
                    for n in 0..d {
                        riemann_lower[r][s][m][n] = Expr::sum(
                            (0..d)
                                .filter(|&l| !g[r][l].is_zero())
                                .map(|l| &g[r][l] * &riemann[l][s][m][n]),
                        );
                    }
                }
            }
        }

        let ricci: Vec<Vec<Expr>> = (0..d)
            .map(|s| {
                (0..d)
                    .map(|n| Expr::sum((0..d).map(|r| riemann[r][s][r][n].clone())))
                    .collect()
            })
            .collect();
        let scalar = Expr::sum(
            (0..d)
                .flat_map(|s| (0..d).map(move |n| (s, n)))
                .map(|(s, n)| &inverse[s][n] * &ricci[s][n]),
        );

        Ok(GeometryCache {
            metric: g,
            inverse,
            christoffel,
            riemann,
            riemann_lower,
            ricci,
            scalar,
        })
    }

    pub fn dim(&self) -> usize {
        self.metric.len()
    }

    pub fn metric(&self) -> &[Vec<Expr>] {
        &self.metric
    }

    pub fn inverse_metric(&self) -> &[Vec<Expr>] {
        &self.inverse
    }

    /// `Gamma^r_{nm}`.
    pub fn christoffel(&self, r: usize, n: usize, m: usize) -> &Expr {
        &self.christoffel[r][n][m]
    }

    /// `R^r_{s mn}`.
    pub fn riemann(&self, r: usize, s: usize, m: usize, n: usize) -> &Expr {
        &self.riemann[r][s][m][n]
    }

    /// `R_{rs|mn}`.
    pub fn riemann_lower(&self, r: usize, s: usize, m: usize, n: usize) -> &Expr {
        &self.riemann_lower[r][s][m][n]
    }

    pub fn ricci(&self, s: usize, n: usize) -> &Expr {
        &self.ricci[s][n]
    }

    pub fn scalar_curvature(&self) -> &Expr {
        &self.scalar
    }

    /// Whether every Christoffel symbol vanishes identically.
    pub fn is_flat(&self) -> bool {
        self.christoffel
            .iter()
            .flatten()
            .flatten()
            .all(Expr::is_zero)
    }
}

/// Symbolic inverse: exact for constant metrics, entrywise for diagonal
/// ones, adjugate over determinant otherwise.
fn inverse_metric(g: &[Vec<Expr>]) -> Result<Vec<Vec<Expr>>, GeometryError> {
    let d = g.len();
    if let Some(q) = g
        .iter()
        .map(|row| row.iter().map(|e| e.as_rational().cloned()).collect())
        .collect::<Option<Vec<Vec<_>>>>()
    {
        let inv = rational_inverse(q).ok_or(GeometryError::SingularMetric)?;
        return Ok(inv
            .into_iter()
            .map(|row| row.into_iter().map(Expr::num).collect())
            .collect());
    }
    let diagonal = (0..d).all(|i| (0..d).all(|j| i == j || g[i][j].is_zero()));
    if diagonal {
        if g.iter().enumerate().any(|(i, row)| row[i].is_zero()) {
            return Err(GeometryError::SingularMetric);
        }
        return Ok((0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        if i == j {
                            g[i][i].recip()
                        } else {
                            Expr::zero()
                        }
                    })
                    .collect()
            })
            .collect());
    }
    let det = cofactor_det(g);
    if det.is_zero() {
        return Err(GeometryError::SingularMetric);
    }
    let inv_det = det.recip();
    Ok((0..d)
        .map(|i| (0..d).map(|j| &cofactor(g, j, i) * &inv_det).collect())
        .collect())
}

fn minor(g: &[Vec<Expr>], row: usize, col: usize) -> Vec<Vec<Expr>> {
    g.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|(j, _)| *j != col)
                .map(|(_, e)| e.clone())
                .collect()
        })
        .collect()
}

fn cofactor(g: &[Vec<Expr>], row: usize, col: usize) -> Expr {
    let m = cofactor_det(&minor(g, row, col));
    if (row + col) % 2 == 1 {
        -m
    } else {
        m
    }
}

fn cofactor_det(g: &[Vec<Expr>]) -> Expr {
    match g.len() {
        0 => Expr::one(),
        1 => g[0][0].clone(),
        n => Expr::sum(
            (0..n)
                .filter(|&j| !g[0][j].is_zero())
                .map(|j| &g[0][j] * &cofactor(g, 0, j)),
        ),
    }
}

fn rational_inverse(mut a: Vec<Vec<Rational>>) -> Option<Vec<Vec<Rational>>> {
    let n = a.len();
    let mut inv: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(pivot, col);
        inv.swap(pivot, col);
        let p = a[col][col].clone();
        for c in 0..n {
            a[col][c] /= &p;
            inv[col][c] /= &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..n {
                    let (x, y) = (&f * &a[col][c], &f * &inv[col][c]);
                    a[r][c] -= x;
                    inv[r][c] -= y;
                }
            }
        }
    }
    Some(inv)
}
