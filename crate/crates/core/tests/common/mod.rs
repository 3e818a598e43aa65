//! Independent reference computations for the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use zgraded::algebra::Accumulator;
use zgraded::expr::Expr;
use zgraded::geometry::{Chart, GeometryCache};
use zgraded::multiform::{THETA, XI};
use zgraded::random::{random_polynomial, PolySpec};
use zgraded::{Algebra, BiForm, Degree, GradedElement, Monomial};

/// Degree of the generator at a flattened position.
pub fn position_degree(alg: &Algebra, p: usize) -> Degree {
    let (s, _) = alg.locate(p);
    alg.sector(s).unwrap().degree().clone()
}

/// Product of two monomials by sorting the concatenated factor list with
/// adjacent transpositions, one Koszul sign per swap. `None` when the
/// product vanishes by nilpotency or truncation.
pub fn naive_monomial_product(alg: &Algebra, a: &Monomial, b: &Monomial) -> Option<(i32, Vec<u8>)> {
    let mut f: Vec<usize> = a.factors().chain(b.factors()).collect();
    let mut sign = 1;
    for i in 1..f.len() {
        let mut j = i;
        while j > 0 && f[j - 1] > f[j] {
            let s = position_degree(alg, f[j - 1])
                .koszul_sign(&position_degree(alg, f[j]))
                .unwrap();
            sign *= s;
            f.swap(j - 1, j);
            j -= 1;
        }
    }
    let mut exps = vec![0u8; alg.formal_dim()];
    for p in f {
        exps[p] += 1;
    }
    for (p, &e) in exps.iter().enumerate() {
        let (s, _) = alg.locate(p);
        let sector = alg.sector(s).unwrap();
        let cap = if sector.is_nilpotent() {
            1
        } else {
            sector.truncation()
        };
        if e as u32 > cap {
            return None;
        }
    }
    Some((sign, exps))
}

/// Whether two symbolic elements agree structurally.
pub fn same(a: &BiForm, b: &BiForm) -> bool {
    (a - b).is_zero()
}

pub fn max_over(w: &BiForm, points: &[Vec<f64>], params: &BTreeMap<String, f64>) -> f64 {
    points
        .iter()
        .map(|p| w.max_abs_at(p, params).unwrap())
        .fold(
            0.0,
            |m: f64, v| if v.is_nan() { f64::NAN } else { m.max(v) },
        )
}

/// Christoffel symbols from central differences of the numeric metric.
pub fn fd_christoffel(chart: &Chart, p: &[f64]) -> Vec<Vec<Vec<f64>>> {
    let d = p.len();
    let metric = |x: &[f64]| -> Vec<Vec<f64>> {
        chart
            .metric()
            .iter()
            .map(|row| {
                row.iter()
                    .map(|g| g.eval(x, chart.params()).unwrap())
                    .collect()
            })
            .collect()
    };
    let g = metric(p);
    let inv = invert(&g);
    let dg: Vec<Vec<Vec<f64>>> = (0..d)
        .map(|l| {
            let h = 1e-5 * p[l].abs().max(1.0);
            let mut up = p.to_vec();
            let mut down = p.to_vec();
            up[l] += h;
            down[l] -= h;
            let (gu, gd) = (metric(&up), metric(&down));
            (0..d)
                .map(|i| (0..d).map(|j| (gu[i][j] - gd[i][j]) / (2.0 * h)).collect())
                .collect()
        })
        .collect();
    let mut out = vec![vec![vec![0.0; d]; d]; d];
    for r in 0..d {
        for n in 0..d {
            for m in 0..d {
                out[r][n][m] = 0.5
                    * (0..d)
                        .map(|l| inv[r][l] * (dg[n][l][m] + dg[m][l][n] - dg[l][n][m]))
                        .sum::<f64>();
            }
        }
    }
    out
}

/// Inverse by cofactor expansion; only used for small matrices.
pub fn invert(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    fn det(a: &[Vec<f64>]) -> f64 {
        if a.len() == 1 {
            return a[0][0];
        }
        (0..a.len())
            .map(|j| if j % 2 == 0 { 1.0 } else { -1.0 } * a[0][j] * det(&minor(a, 0, j)))
            .sum()
    }
    fn minor(a: &[Vec<f64>], r: usize, c: usize) -> Vec<Vec<f64>> {
        a.iter()
            .enumerate()
            .filter(|(i, _)| *i != r)
            .map(|(_, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != c)
                    .map(|(_, x)| *x)
                    .collect()
            })
            .collect()
    }
    let n = a.len();
    let dt = det(a);
    if n == 1 {
        return vec![vec![1.0 / dt]];
    }
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if (i + j) % 2 == 0 { 1.0 } else { -1.0 } * det(&minor(a, j, i)) / dt)
                .collect()
        })
        .collect()
}

/// The curvature operators assembled from Riemann components:
/// `R_(0,1) = th^m xi^l xi^n R^r_{mnl} d/dth^r`,
/// `R_(1,0) = xi^m th^l th^n R^r_{mnl} d/dxi^r`,
/// `R_(1,1) = 1/2 (xi^m th^l th^n R^r_{mnl} d/dth^r - th^m xi^l xi^n R^r_{mnl} d/dxi^r)`.
pub fn curvature_oracle(which: usize, w: &BiForm, cache: &GeometryCache) -> BiForm {
    let alg = w.algebra();
    let d = cache.dim();
    let coefficient = |a: usize, b: usize, r: usize| {
        let mut acc = Accumulator::new(alg);
        for m in 0..d {
            for l in 0..d {
                for n in 0..d {
                    acc.extend(
                        BiForm::from_factors(
                            alg,
                            &[(a, m), (b, l), (b, n)],
                            cache.riemann(r, m, n, l).clone(),
                        )
                        .unwrap(),
                    );
                }
            }
        }
        acc.finish()
    };
    let mut out = BiForm::zero(alg);
    for r in 0..d {
        let dth = w.sector_derivative(THETA, r).unwrap();
        let dxi = w.sector_derivative(XI, r).unwrap();
        out = out
            + match which {
                0 => &coefficient(THETA, XI, r) * &dth,
                1 => &coefficient(XI, THETA, r) * &dxi,
                _ => (&(&coefficient(XI, THETA, r) * &dth) - &(&coefficient(THETA, XI, r) * &dxi))
                    .scale(&Expr::rational(1, 2)),
            };
    }
    out
}

/// A random tensor with the given shape; entries are random polynomials.
pub fn random_tensor<R: Rng>(
    rng: &mut R,
    shape: &[usize],
    spec: &PolySpec,
) -> BTreeMap<Vec<usize>, Expr> {
    let mut out = BTreeMap::new();
    let mut idx = vec![0; shape.len()];
    loop {
        out.insert(idx.clone(), random_polynomial(rng, spec));
        let mut k = shape.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < shape[k] {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Parity of the permutation sorting `v`, or `None` on repeats.
pub fn perm_sign(v: &[usize]) -> Option<i64> {
    let mut s = 1;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] == v[j] {
                return None;
            }
            if v[i] > v[j] {
                s = -s;
            }
        }
    }
    Some(s)
}

/// Index-loop Curtright calculus on `D = 5` Minkowski space. Components
/// follow the reversed pairing `xi^{m1}...xi^{mq} w_{mq...m1}`, in which
/// a de Rham differential inserts its index last and the inverse metric
/// contracts the last index of each block.
pub struct CurtrightOracle {
    pub d: usize,
    pub eta: Vec<i64>,
}

pub type Tensor = BTreeMap<(Vec<usize>, Vec<usize>), Expr>;

impl CurtrightOracle {
    pub fn new() -> Self {
        CurtrightOracle {
            d: 5,
            eta: vec![-1, 1, 1, 1, 1],
        }
    }

    /// All index tuples of length `k`.
    pub fn tuples(&self, k: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for _ in 0..k {
            out = out
                .into_iter()
                .flat_map(|t| (0..self.d).map(move |i| [t.clone(), vec![i]].concat()))
                .collect();
        }
        out
    }

    /// `C'_{mn|r} = C_{mn|r} - (C_{mn|r} + C_{nr|m} + C_{rm|n}) / 3` from an
    /// arbitrary array, antisymmetrized in `mn` first.
    pub fn projected(&self, raw: &BTreeMap<Vec<usize>, Expr>) -> Tensor {
        let c = |m: usize, n: usize, r: usize| {
            (&raw[&vec![m, n, r]] - &raw[&vec![n, m, r]]).scale(&zgraded::scalar::rational(1, 2))
        };
        let mut out = Tensor::new();
        for t in self.tuples(3) {
            let (m, n, r) = (t[0], t[1], t[2]);
            let cyc = Expr::sum([c(m, n, r), c(n, r, m), c(r, m, n)]);
            out.insert(
                (vec![m, n], vec![r]),
                c(m, n, r) - cyc.scale(&zgraded::scalar::rational(1, 3)),
            );
        }
        out
    }

    /// Adds one derivative index at the end of block `which` (0 for xi, 1 for th).
    pub fn d(&self, w: &Tensor, which: usize) -> Tensor {
        let mut out = Tensor::new();
        let (q, p) = {
            let (a, b) = w.keys().next().unwrap();
            (a.len(), b.len())
        };
        let (nq, np) = if which == 0 { (q + 1, p) } else { (q, p + 1) };
        for a in self.tuples(nq) {
            for b in self.tuples(np) {
                let block = if which == 0 { &a } else { &b };
                let k = block.len();
                let mut terms = Vec::new();
                for i in 0..k {
                    let rest: Vec<usize> = block
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != i)
                        .map(|(_, x)| *x)
                        .collect();
                    let key = if which == 0 {
                        (rest, b.clone())
                    } else {
                        (a.clone(), rest)
                    };
                    let term = w[&key].diff(block[i]);
                    terms.push(if (k - 1 - i) % 2 == 0 { term } else { -term });
                }
                out.insert((a.clone(), b.clone()), Expr::sum(terms));
            }
        }
        out
    }

    /// Contracts the last xi index with the last th index using `eta`.
    pub fn eta_inverse(&self, w: &Tensor) -> Tensor {
        let (q, p) = {
            let (a, b) = w.keys().next().unwrap();
            (a.len(), b.len())
        };
        let mut out = Tensor::new();
        for a in self.tuples(q - 1) {
            for b in self.tuples(p - 1) {
                let terms = (0..self.d).map(|o| {
                    let mut aa = a.clone();
                    aa.push(o);
                    let mut bb = b.clone();
                    bb.push(o);
                    w[&(aa, bb)].clone() * Expr::int(self.eta[o])
                });
                out.insert((a.clone(), b.clone()), Expr::sum(terms));
            }
        }
        out
    }
}

impl Default for CurtrightOracle {
    fn default() -> Self {
        Self::new()
    }
}

/// Builds the form of a (1,2) tensor via the library's component
/// convention, for feeding the pipeline.
pub fn tensor_form(alg: &Arc<Algebra>, t: &Tensor, totals: &[u32]) -> BiForm {
    zgraded::multiform::from_components(alg, totals, |b| t[&(b[0].clone(), b[1].clone())].clone())
        .unwrap()
}

/// Every `(a, b)` key of `t` agrees with the library component of `w`.
pub fn components_match(w: &BiForm, t: &Tensor) -> Result<(), String> {
    for ((a, b), v) in t {
        let c =
            zgraded::multiform::component(w, &[a.clone(), b.clone()]).map_err(|e| e.to_string())?;
        if !(c.clone() - v.clone()).is_zero() {
            return Err(format!(
                "component {a:?}|{b:?}: library {c:?}, oracle {v:?}"
            ));
        }
    }
    Ok(())
}

/// Sum of a random polynomial in `dim` coordinates times each generator
/// of fiber degree one, for bundle algebras.
pub fn random_fiber_element<R: Rng>(
    rng: &mut R,
    alg: &Arc<Algebra>,
    spec: &PolySpec,
) -> GradedElement<Expr> {
    let p = rng.random_range(0..=2u32.min(alg.base_dim() as u32));
    let q = rng.random_range(0..=2u32.min(alg.base_dim() as u32));
    zgraded::random::random_homogeneous(rng, alg, &[p, q, 1], spec, 0.4)
}
