use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{CheckRecord, CheckReport, HarnessError};
use crate::algebra::{Accumulator, Algebra, GradedElement};
use crate::expr::Expr;
use crate::geometry::{
    bianchi_checks, bundle_covariant_field, covariant_field, curvature_field, metric_form,
    ricci_form, BiSector, BundleConnection, Chart, Curvature, GeometryCache, Z,
};
use crate::multiform::{
    curtright_pipeline, curtright_project, de_rham, de_rham_field, delta_field,
    MinkowskiMetricForm, Signature, THETA, XI,
};
use crate::operator::VectorField;
use crate::random::{random_element, random_homogeneous, random_polynomial, PolySpec};

type Form = GradedElement<Expr>;

/// Tolerance of the finite-difference Christoffel comparison.
const FD_TOLERANCE: f64 = 1e-6;
/// Tolerance of tensor identities evaluated directly from the cache.
const TENSOR_TOLERANCE: f64 = 1e-10;
/// A generic variation must reach this size somewhere.
const POWER_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    FlatBicomplex,
    OperatorAlgebra,
    Curtright,
    Geometry,
    Bianchi,
    Susy,
    Bundle,
    All,
}

impl Suite {
    pub const EVERY: [Suite; 8] = [
        Suite::FlatBicomplex,
        Suite::OperatorAlgebra,
        Suite::Curtright,
        Suite::Geometry,
        Suite::Bianchi,
        Suite::Susy,
        Suite::Bundle,
        Suite::All,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::FlatBicomplex => "flat-bicomplex",
            Suite::OperatorAlgebra => "operator-algebra",
            Suite::Curtright => "curtright",
            Suite::Geometry => "geometry",
            Suite::Bianchi => "bianchi",
            Suite::Susy => "susy",
            Suite::Bundle => "bundle",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::EVERY
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| HarnessError::UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Sample points for pointwise checks.
    pub points: usize,
    /// Tolerance for pointwise operator identities.
    pub tol: f64,
    /// Random forms per identity.
    pub samples: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 7,
            points: 32,
            tol: 1e-9,
            samples: 20,
        }
    }
}

/// Runs a suite on a chart. Deterministic in `(suite, chart, config)`.
pub fn run_suite(
    suite: Suite,
    chart: &Chart,
    config: &SuiteConfig,
) -> Result<CheckReport, HarnessError> {
    let ctx = Context::new(chart, config)?;
    let checks = match suite {
        Suite::All => {
            let mut all = Vec::new();
            for s in Suite::EVERY.into_iter().filter(|&s| s != Suite::All) {
                if s == Suite::Curtright && !is_minkowski(chart, 5) {
                    continue;
                }
                for mut c in ctx.run(s)? {
                    c.name = format!("{}/{}", s.name(), c.name);
                    all.push(c);
                }
            }
            all
        }
        s => ctx.run(s)?,
    };
    Ok(CheckReport::new(
        suite.name(),
        chart.name(),
        config.seed,
        config.points,
        checks,
    ))
}

/// Whether the chart metric is exactly `diag(-1, 1, ..., 1)` in dimension `d`.
fn is_minkowski(chart: &Chart, d: usize) -> bool {
    chart.dim() == d
        && chart.metric().iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, g)| {
                let want = if i != j {
                    0
                } else if i == 0 {
                    -1
                } else {
                    1
                };
                *g == Expr::int(want)
            })
        })
}

struct Context<'a> {
    chart: &'a Chart,
    config: &'a SuiteConfig,
    cache: GeometryCache,
    points: Vec<Vec<f64>>,
    flat: bool,
}

impl<'a> Context<'a> {
    fn new(chart: &'a Chart, config: &'a SuiteConfig) -> Result<Self, HarnessError> {
        let cache = GeometryCache::new(chart)?;
        let points = chart.sample_points(config.seed, config.points)?;
        let flat = cache.is_flat();
        Ok(Context {
            chart,
            config,
            cache,
            points,
            flat,
        })
    }

    fn params(&self) -> &BTreeMap<String, f64> {
        self.chart.params()
    }

    fn dim(&self) -> usize {
        self.chart.dim()
    }

    /// An independent stream per suite so that suites do not perturb each
    /// other under `all`.
    fn rng(&self, suite: Suite) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
        rng.set_stream(suite as u64 + 1);
        rng
    }

    fn small_spec(&self) -> PolySpec {
        PolySpec {
            dim: self.dim(),
            max_degree: 1,
            max_terms: 2,
        }
    }

    fn form(&self, name: &str, exact: bool, w: &Form, tol: f64) -> CheckRecord {
        CheckRecord::form(name, exact, w, &self.points, self.params(), tol)
    }

    /// Checks scalar expressions that should vanish.
    fn scalars(&self, name: &str, exprs: &[Expr], tol: f64) -> CheckRecord {
        if self.flat {
            let bad = exprs.iter().filter(|e| !e.is_zero()).count();
            if bad == 0 {
                return CheckRecord::pointwise(name, 0.0, 0.0).into_exact();
            }
            return CheckRecord::failed(
                name,
                super::CheckMode::Exact,
                0.0,
                format!("{bad} residuals are not structural zeros"),
            );
        }
        let mut max: f64 = 0.0;
        for p in &self.points {
            for e in exprs {
                match e.eval(p, self.params()) {
                    Ok(v) if v.is_nan() => max = f64::NAN,
                    Ok(v) if !max.is_nan() => max = max.max(v.abs()),
                    Ok(_) => {}
                    Err(err) => {
                        return CheckRecord::failed(
                            name,
                            super::CheckMode::Pointwise,
                            tol,
                            format!("evaluation failed: {err}"),
                        )
                    }
                }
            }
        }
        CheckRecord::pointwise(name, max, tol)
    }

    fn run(&self, suite: Suite) -> Result<Vec<CheckRecord>, HarnessError> {
        match suite {
            Suite::FlatBicomplex => self.flat_bicomplex(),
            Suite::OperatorAlgebra => self.operator_algebra(),
            Suite::Curtright => self.curtright(),
            Suite::Geometry => self.geometry(),
            Suite::Bianchi => self.bianchi(),
            Suite::Susy => self.susy(),
            Suite::Bundle => self.bundle(),
            Suite::All => unreachable!("expanded by run_suite"),
        }
    }

    fn flat_bicomplex(&self) -> Result<Vec<CheckRecord>, HarnessError> {
        let d = self.dim();
        let mut rng = self.rng(Suite::FlatBicomplex);
        let spec = PolySpec::new(d);
        let mut out = Vec::new();

        let alg = Algebra::bi_form(d);
        let (mut sq01, mut sq10, mut comm) = (Vec::new(), Vec::new(), Vec::new());
        for _ in 0..self.config.samples {
            let w = random_element(&mut rng, &alg, 2, &spec);
            let x = de_rham(XI, &w)?;
            let t = de_rham(THETA, &w)?;
            sq01.push(self.form("", true, &de_rham(XI, &x)?, 0.0));
            sq10.push(self.form("", true, &de_rham(THETA, &t)?, 0.0));
            comm.push(self.form("", true, &(&de_rham(THETA, &x)? - &de_rham(XI, &t)?), 0.0));
        }
        out.push(CheckRecord::merge("d01_squared", sq01));
        out.push(CheckRecord::merge("d10_squared", sq10));
        out.push(CheckRecord::merge("d01_d10_commutator", comm));

        let tri = Algebra::multi_form(3, d);
        let fields: Vec<VectorField<Expr>> = (0..3)
            .map(|s| de_rham_field(&tri, s))
            .collect::<Result<_, _>>()?;
        let (mut sq, mut comm) = (Vec::new(), Vec::new());
        for _ in 0..self.config.samples {
            let w = random_element(&mut rng, &tri, 1, &spec);
            let images: Vec<Form> = fields
                .iter()
                .map(|f| f.apply(&w))
                .collect::<Result<_, _>>()?;
            for (s, f) in fields.iter().enumerate() {
                sq.push(self.form("", true, &f.apply(&images[s])?, 0.0));
                for t in s + 1..3 {
                    let r = &f.apply(&images[t])? - &fields[t].apply(&images[s])?;
                    comm.push(self.form("", true, &r, 0.0));
                }
            }
        }
        out.push(CheckRecord::merge("triform_d_squared", sq));
        out.push(CheckRecord::merge("triform_d_commutators", comm));
        Ok(out)
    }

    fn operator_algebra(&self) -> Result<Vec<CheckRecord>, HarnessError> {
        let d = self.dim();
        let alg = Algebra::bi_form(d);
        let d01 = de_rham_field::<Expr>(&alg, XI)?;
        let d10 = de_rham_field::<Expr>(&alg, THETA)?;
        let delta01 = delta_field::<Expr>(&alg, XI, THETA)?;
        let delta10 = delta_field::<Expr>(&alg, THETA, XI)?;
        let coeff = generic_coefficient(d);
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for p in 0..=2.min(d as u32) {
            for q in 0..=2.min(d as u32) {
                for m in alg.monomials_with_totals(&[q, p]) {
                    let w = Form::from_terms(&alg, [(m, coeff.clone())]);
                    let r = &graded_commutator(&delta01, &d10, &w)? - &d01.apply(&w)?;
                    a.push(self.form("", true, &r, 0.0));
                    let r = &graded_commutator(&delta10, &d01, &w)? - &d10.apply(&w)?;
                    b.push(self.form("", true, &r, 0.0));
                }
            }
        }
        let mut out = vec![
            CheckRecord::merge("delta01_d10_commutator", a),
            CheckRecord::merge("delta10_d01_commutator", b),
        ];

        if is_minkowski(self.chart, d) {
            let eta = MinkowskiMetricForm::new(d, Signature::MostlyPlus);
            let r = &eta.inverse_apply(&eta.form::<Expr>(&alg)?)?
                - &Form::scalar(&alg, Expr::int(d as i64));
            out.push(self.form("metric_trace", true, &r, 0.0));
        } else {
            let g = self.cache.metric();
            let inv = self.cache.inverse_metric();
            let trace = Expr::sum(
                (0..d)
                    .flat_map(|m| (0..d).map(move |n| (m, n)))
                    .map(|(m, n)| &inv[m][n] * &g[n][m]),
            );
            out.push(self.scalars(
                "metric_trace",
                &[trace - Expr::int(d as i64)],
                self.config.tol,
            ));
        }
        Ok(out)
    }

    fn curtright(&self) -> Result<Vec<CheckRecord>, HarnessError> {
        if !is_minkowski(self.chart, 5) {
            return Err(HarnessError::NotApplicable {
                suite: Suite::Curtright.name().into(),
                chart: self.chart.name().into(),
                why: "needs five-dimensional Minkowski space".into(),
            });
        }
        let alg = Algebra::bi_form(5);
        let eta = MinkowskiMetricForm::new(5, Signature::MostlyPlus);
        let mut rng = self.rng(Suite::Curtright);
        let spec = PolySpec::new(5);
        let (mut constraint, mut gauge, mut closed_f, mut closed_e) =
            (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for _ in 0..self.config.samples {
            let c = curtright_project(&random_homogeneous(&mut rng, &alg, &[2, 1], &spec, 0.2))?;
            let fields = curtright_pipeline(&c, &eta)?;
            constraint.push(self.form("", true, &fields.constraint, 0.0));
            closed_f.push(self.form("", true, &de_rham(XI, &fields.field_strength)?, 0.0));
            closed_e.push(self.form("", true, &de_rham(THETA, &fields.curvature)?, 0.0));

            let alpha = random_homogeneous(&mut rng, &alg, &[1, 1], &spec, 0.2);
            let beta = random_homogeneous(&mut rng, &alg, &[2, 0], &spec, 0.2);
            let shifted = &(&c + &de_rham(XI, &alpha)?) + &de_rham(THETA, &beta)?;
            let moved = curtright_pipeline(&shifted, &eta)?;
            gauge.push(self.form("", true, &(&moved.curvature - &fields.curvature), 0.0));
        }
        Ok(vec![
            CheckRecord::merge("constraint_after_projection", constraint),
            CheckRecord::merge("field_strength_closed", closed_f),
            CheckRecord::merge("curvature_closed", closed_e),
            CheckRecord::merge("curvature_gauge_invariance", gauge),
        ])
    }

    fn geometry(&self) -> Result<Vec<CheckRecord>, HarnessError> {
        let d = self.dim();
        let c = &self.cache;
        let g = c.metric();
        let tol = self.config.tol;
        let mut out = vec![self.christoffel_fd()];

        let mut torsion = Vec::new();
        let mut compat = Vec::new();
        for r in 0..d {
            for n in 0..d {
                for m in 0..d {
                    torsion.push(c.christoffel(r, n, m) - c.christoffel(r, m, n));
                    let mut parts = vec![g[n][m].diff(r)];
                    for s in 0..d {
                        parts.push(-(c.christoffel(s, r, n) * &g[s][m]));
                        parts.push(-(c.christoffel(s, r, m) * &g[n][s]));
                    }
                    compat.push(Expr::sum(parts));
                }
            }
        }
        out.push(self.scalars("torsion_free", &torsion, TENSOR_TOLERANCE));
        out.push(self.scalars("metric_compatibility", &compat, TENSOR_TOLERANCE));

        let mut sym = Vec::new();
        for r in 0..d {
            for s in 0..d {
                for m in 0..d {
                    for n in 0..d {
                        let x = c.riemann_lower(r, s, m, n);
                        sym.push(x + c.riemann_lower(s, r, m, n));
                        sym.push(x + c.riemann_lower(r, s, n, m));
                        sym.push(x - c.riemann_lower(m, n, r, s));
                    }
                }
            }
        }
        out.push(self.scalars("riemann_symmetries", &sym, TENSOR_TOLERANCE));

        if let Some(k) = self.chart.einstein_constant() {
            let res: Vec<Expr> = (0..d)
                .flat_map(|s| (0..d).map(move |n| (s, n)))
                .map(|(s, n)| c.ricci(s, n) - &(k * &g[s][n]))
                .collect();
            out.push(self.scalars("einstein_condition", &res, TENSOR_TOLERANCE));
        }

        let alg = Algebra::bi_form(d);
        let nx = covariant_field(&alg, c, BiSector::Xi)?;
        let nt = covariant_field(&alg, c, BiSector::Theta)?;
        let rx = curvature_field(&alg, c, Curvature::Xi)?;
        let rt = curvature_field(&alg, c, Curvature::Theta)?;
        let rm = curvature_field(&alg, c, Curvature::Mixed)?;
        let delta01 = delta_field::<Expr>(&alg, XI, THETA)?;
        let delta10 = delta_field::<Expr>(&alg, THETA, XI)?;
        let mut rng = self.rng(Suite::Geometry);
        let spec = self.small_spec();
        let mut recs: [Vec<CheckRecord>; 5] = Default::default();
        for _ in 0..self.config.samples {
            let w = random_element(&mut rng, &alg, 2, &spec);
            let xw = nx.apply(&w)?;
            let tw = nt.apply(&w)?;
            let r = &nx.apply(&xw)?.scale_int(2) - &rx.apply(&w)?;
            recs[0].push(self.form("", self.flat, &r, tol));
            let r = &nt.apply(&tw)?.scale_int(2) - &rt.apply(&w)?;
            recs[1].push(self.form("", self.flat, &r, tol));
            let r = &(&nt.apply(&xw)? - &nx.apply(&tw)?) - &rm.apply(&w)?;
            recs[2].push(self.form("", self.flat, &r, tol));
            let r = &graded_commutator(&delta01, &nt, &w)? - &xw;
            recs[3].push(self.form("", self.flat, &r, tol));
            let r = &graded_commutator(&delta10, &nx, &w)? - &tw;
            recs[4].push(self.form("", self.flat, &r, tol));
        }
        let names = [
            "curvature_commutator_01",
            "curvature_commutator_10",
            "curvature_commutator_11",
            "delta01_nabla10_commutator",
            "delta10_nabla01_commutator",
        ];
        for (name, r) in names.into_iter().zip(recs) {
            out.push(CheckRecord::merge(name, r));
        }
        Ok(out)
    }

    /// Symbolic Christoffel symbols against central differences of the
    /// numeric metric, relative to `max(1, |Gamma|)`.
    fn christoffel_fd(&self) -> CheckRecord {
        let name = "christoffel_finite_difference";
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for p in &self.points {
            let fd = match fd_christoffel(self.chart, p) {
                Ok(fd) => fd,
                Err(e) => {
                    return CheckRecord::failed(name, super::CheckMode::Pointwise, FD_TOLERANCE, e)
                }
            };
            for r in 0..d {
                for n in 0..d {
                    for m in 0..d {
                        let v = match self.cache.christoffel(r, n, m).eval(p, self.params()) {
                            Ok(v) => v,
                            Err(e) => {
                                return CheckRecord::failed(
                                    name,
                                    super::CheckMode::Pointwise,
                                    FD_TOLERANCE,
                                    e.to_string(),
                                )
                            }
                        };
                        let f = fd[r][n][m];
                        let rel = (v - f).abs() / f.abs().max(1.0);
                        worst = if rel.is_nan() || worst.is_nan() {
                            f64::NAN
                        } else {
                            worst.max(rel)
                        };
                    }
                }
            }
        }
        CheckRecord::pointwise(name, worst, FD_TOLERANCE)
    }

    fn bianchi(&self) -> Result<Vec<CheckRecord>, HarnessError> {
        let alg = Algebra::bi_form(self.dim());
        let b = bianchi_checks(&alg, &self.cache)?;
        let tol = self.config.tol;
        Ok(vec![
            self.form("first_bianchi", self.flat, &b.first, tol),
            self.form("second_bianchi_01", self.flat, &b.second, tol),
            self.form("second_bianchi_10", self.flat, &b.second_theta, tol),
        ])
    }

    fn susy(&self) -> Result<Vec<CheckRecord>, HarnessError> {
        let alg = Algebra::bi_form(self.dim());
        let c = &self.cache;
        let nx = covariant_field(&alg, c, BiSector::Xi)?;
        let nt = covariant_field(&alg, c, BiSector::Theta)?;
        let g = metric_form(&alg, c)?;
        let mut out = vec![
            self.form(
                "metric_invariant_01",
                self.flat,
                &nx.apply(&g)?,
                TENSOR_TOLERANCE,
            ),
            self.form(
                "metric_invariant_10",
                self.flat,
                &nt.apply(&g)?,
                TENSOR_TOLERANCE,
            ),
        ];
        if self.chart.einstein_constant().is_some() {
            let ric = ricci_form(&alg, c)?;
            out.push(self.form(
                "ricci_invariant_01",
                self.flat,
                &nx.apply(&ric)?,
                TENSOR_TOLERANCE,
            ));
            out.push(self.form(
                "ricci_invariant_10",
                self.flat,
                &nt.apply(&ric)?,
                TENSOR_TOLERANCE,
            ));
        }

        // The residual is the shortfall of the largest variation below the
        // threshold, so a check that cannot see a generic variation fails.
        let mut rng = self.rng(Suite::Susy);
        let w = random_homogeneous(&mut rng, &alg, &[1, 1], &PolySpec::new(self.dim()), 0.5);
        let name = "generic_variation_detected";
        out.push(
            match super::sampled_max(&nx.apply(&w)?, &self.points, self.params()) {
                Ok(m) if m.is_nan() => CheckRecord::pointwise(name, f64::NAN, 0.0),
                Ok(m) => {
                    let mut rec = CheckRecord::pointwise(name, (POWER_THRESHOLD - m).max(0.0), 0.0);
                    if !rec.pass {
                        rec.reason = Some(format!(
                            "largest variation {m:.3e} is below {POWER_THRESHOLD:.0e}"
                        ));
                    }
                    rec
                }
                Err(e) => {
                    CheckRecord::failed(name, super::CheckMode::Pointwise, 0.0, e.to_string())
                }
            },
        );
        Ok(out)
    }

    fn bundle(&self) -> Result<Vec<CheckRecord>, HarnessError> {
        let d = self.dim();
        let c = &self.cache;
        let tol = self.config.tol;
        let mut rng = self.rng(Suite::Bundle);
        let spec = self.small_spec();
        let sides = [BiSector::Xi, BiSector::Theta];

        let alg2 = Algebra::bundle(d, 2);
        let conn = sample_connection(d, 2);
        let trivial = BundleConnection::trivial(d, 2);
        let mut triv = Vec::new();
        let mut zterms = Vec::new();
        let mut curv = Vec::new();
        for side in sides {
            let plain = covariant_field(&alg2, c, side)?;
            let with_zero = bundle_covariant_field(&alg2, c, &trivial, side)?;
            let full = bundle_covariant_field(&alg2, c, &conn, side)?;
            for _ in 0..self.config.samples {
                let w = random_bundle_form(&mut rng, &alg2, &spec);
                triv.push(self.form("", true, &(&with_zero.apply(&w)? - &plain.apply(&w)?), 0.0));
            }
            for a in 0..2 {
                let za = Form::generator(&alg2, Z, a)?;
                let mut acc = Accumulator::new(&alg2);
                for m in 0..d {
                    for b in 0..2 {
                        acc.extend(Form::from_factors(
                            &alg2,
                            &[(side.id(), m), (Z, b)],
                            conn.component(m, a, b).clone(),
                        )?);
                    }
                }
                zterms.push(self.form("", true, &(&full.apply(&za)? - &acc.finish()), 0.0));

                let f = random_polynomial(&mut rng, &spec);
                let w = za.scale(&f);
                let lhs = full.apply(&full.apply(&w)?)?.scale_int(2);
                let mut acc = Accumulator::new(&alg2);
                for n in 0..d {
                    for m in 0..d {
                        for e in 0..2 {
                            let coeff = &f * &conn.curvature(n, m, a, e);
                            acc.extend(Form::from_factors(
                                &alg2,
                                &[(side.id(), n), (side.id(), m), (Z, e)],
                                coeff,
                            )?);
                        }
                    }
                }
                curv.push(self.form("", false, &(&lhs - &acc.finish()), tol));
            }
        }

        let alg1 = Algebra::bundle(d, 1);
        let phi = if d > 1 {
            Expr::coord(0) * Expr::coord(1) + Expr::coord(d - 1).sin()
        } else {
            Expr::coord(0).sin()
        };
        let gauge = BundleConnection::pure_gauge(d, &phi);
        let mut flat = Vec::new();
        for side in sides {
            let plain = covariant_field(&alg1, c, side)?;
            let full = bundle_covariant_field(&alg1, c, &gauge, side)?;
            for _ in 0..self.config.samples {
                let w = random_bundle_form(&mut rng, &alg1, &spec);
                let r = &full.apply(&full.apply(&w)?)?.scale_int(2)
                    - &plain.apply(&plain.apply(&w)?)?.scale_int(2);
                flat.push(self.form("", false, &r, tol));
            }
        }
        Ok(vec![
            CheckRecord::merge("trivial_connection", triv),
            CheckRecord::merge("z_terms", zterms),
            CheckRecord::merge("fiber_curvature_rank2", curv),
            CheckRecord::merge("pure_gauge_flat", flat),
        ])
    }
}

impl CheckRecord {
    fn into_exact(mut self) -> Self {
        self.mode = super::CheckMode::Exact;
        self
    }
}

/// `X(Y w) - (-1)^<|X|,|Y|> Y(X w)`.
fn graded_commutator(
    x: &VectorField<Expr>,
    y: &VectorField<Expr>,
    w: &Form,
) -> Result<Form, HarnessError> {
    let s = x
        .degree()
        .koszul_sign(y.degree())
        .map_err(crate::algebra::AlgebraError::from)?;
    let xy = x.apply(&y.apply(w)?)?;
    let yx = y.apply(&x.apply(w)?)?;
    Ok(&xy - &yx.scale_int(s as i64))
}

/// `1 + sum (i+1) x_i + x_0 x_{d-1}`: depends on every coordinate.
fn generic_coefficient(d: usize) -> Expr {
    let mut parts = vec![Expr::one()];
    parts.extend((0..d).map(|i| Expr::int(i as i64 + 1) * Expr::coord(i)));
    parts.push(Expr::coord(0) * Expr::coord(d - 1));
    Expr::sum(parts)
}

/// A non-flat rank-`rank` connection with polynomial components.
fn sample_connection(d: usize, rank: usize) -> BundleConnection {
    let a = (0..d)
        .map(|m| {
            (0..rank)
                .map(|i| {
                    (0..rank)
                        .map(|j| {
                            Expr::int((i as i64) - (j as i64) + 1)
                                * Expr::coord((m + i + j + 1) % d)
                                + Expr::rational(1, (m + 1) as i64)
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    BundleConnection::new(a).expect("square components")
}

/// A random element of fiber degree one.
fn random_bundle_form(rng: &mut ChaCha8Rng, alg: &Arc<Algebra>, spec: &PolySpec) -> Form {
    use rand::Rng;
    let mut out = Form::zero(alg);
    for _ in 0..2 {
        let p = rng.random_range(0..=2.min(alg.base_dim() as u32));
        let q = rng.random_range(0..=2.min(alg.base_dim() as u32));
        out = out + random_homogeneous(rng, alg, &[p, q, 1], spec, 0.3);
    }
    out
}

/// Christoffel symbols from central differences of the numeric metric.
fn fd_christoffel(chart: &Chart, p: &[f64]) -> Result<Vec<Vec<Vec<f64>>>, String> {
    let d = p.len();
    let g = chart.metric_at(p).map_err(|e| e.to_string())?;
    let inv = invert(&g).ok_or("metric is singular at a sample point")?;
    let mut dg = Vec::with_capacity(d);
    for l in 0..d {
        let h = 1e-5 * p[l].abs().max(1.0);
        let (mut up, mut down) = (p.to_vec(), p.to_vec());
        up[l] += h;
        down[l] -= h;
        let gu = chart.metric_at(&up).map_err(|e| e.to_string())?;
        let gd = chart.metric_at(&down).map_err(|e| e.to_string())?;
        dg.push(
            (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| (gu[i][j] - gd[i][j]) / (2.0 * h))
                        .collect::<Vec<f64>>()
                })
                .collect::<Vec<_>>(),
        );
    }
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
    Ok(out)
}

/// Gauss-Jordan inverse with partial pivoting.
fn invert(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut a = a.to_vec();
    let mut inv: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[pivot][col] == 0.0 {
            return None;
        }
        a.swap(pivot, col);
        inv.swap(pivot, col);
        let p = a[col][col];
        for c in 0..n {
            a[col][c] /= p;
            inv[col][c] /= p;
        }
        for r in 0..n {
            if r != col {
                let f = a[r][col];
                for c in 0..n {
                    a[r][c] -= f * a[col][c];
                    inv[r][c] -= f * inv[col][c];
                }
            }
        }
    }
    Some(inv)
}
