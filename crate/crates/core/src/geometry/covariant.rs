use std::sync::Arc;

use super::{GeometryCache, GeometryError};
use crate::algebra::{Accumulator, Algebra, GradedElement, SectorId};
use crate::expr::Expr;
use crate::grading::Degree;
use crate::multiform::{delta_op, from_components, THETA, XI};
use crate::operator::VectorField;
use crate::scalar::rational;

type Form = GradedElement<Expr>;

/// The two nilpotent sectors of a bi-form algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BiSector {
    /// Degree (0,1).
    Xi,
    /// Degree (1,0).
    Theta,
}

impl BiSector {
    pub fn id(self) -> SectorId {
        match self {
            BiSector::Xi => XI,
            BiSector::Theta => THETA,
        }
    }

    pub fn other(self) -> BiSector {
        match self {
            BiSector::Xi => BiSector::Theta,
            BiSector::Theta => BiSector::Xi,
        }
    }

    pub fn degree(self) -> Degree {
        match self {
            BiSector::Xi => Degree::unit(2, 1),
            BiSector::Theta => Degree::unit(2, 0),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BiSector::Xi => "(0,1)",
            BiSector::Theta => "(1,0)",
        }
    }
}

/// The three curvature operators: `R_(0,1) = 2 nabla_(0,1)^2`,
/// `R_(1,0) = 2 nabla_(1,0)^2` and `R_(1,1) = [nabla_(1,0), nabla_(0,1)]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Curvature {
    Xi,
    Theta,
    Mixed,
}

pub(crate) fn check_algebra(alg: &Algebra, cache: &GeometryCache) -> Result<(), GeometryError> {
    let d = cache.dim();
    if alg.n() != 2 || alg.base_dim() != d {
        return Err(GeometryError::Mismatch(format!(
            "expected a Z2^2 algebra over a {d}-dimensional chart"
        )));
    }
    for side in [BiSector::Xi, BiSector::Theta] {
        let s = alg.sector(side.id())?;
        if s.degree() != &side.degree() || s.dim() != d {
            return Err(GeometryError::Mismatch(format!(
                "sector {} must have degree {} and dimension {d}",
                side.id(),
                side.label()
            )));
        }
    }
    Ok(())
}

/// `nabla_s = s^m d_m - s^m t^n Gamma^r_{nm} d/dt^r`, where `t` is the other
/// sector.
pub fn covariant_field(
    alg: &Arc<Algebra>,
    cache: &GeometryCache,
    side: BiSector,
) -> Result<VectorField<Expr>, GeometryError> {
    check_algebra(alg, cache)?;
    let d = cache.dim();
    let (s, t) = (side.id(), side.other().id());
    let mut x = VectorField::zero(alg, side.degree());
    for m in 0..d {
        x.add_base(m, Form::generator(alg, s, m)?)?;
    }
    for r in 0..d {
        let mut acc = Accumulator::new(alg);
        for m in 0..d {
            for n in 0..d {
                let g = cache.christoffel(r, n, m);
                if !g.is_zero() {
                    acc.extend(Form::from_factors(alg, &[(s, m), (t, n)], -g)?);
                }
            }
        }
        let coeff = acc.finish();
        if !coeff.is_zero() {
            x.add_formal(t, r, coeff)?;
        }
    }
    Ok(x)
}

pub fn covariant_de_rham(
    side: BiSector,
    omega: &Form,
    cache: &GeometryCache,
) -> Result<Form, GeometryError> {
    Ok(covariant_field(omega.algebra(), cache, side)?.apply(omega)?)
}

/// `sum a^m b^l b^n R^r_{m n l}` for the sectors `a`, `b`.
fn curvature_coefficient(
    alg: &Arc<Algebra>,
    cache: &GeometryCache,
    a: SectorId,
    b: SectorId,
    r: usize,
) -> Result<Form, GeometryError> {
    let d = cache.dim();
    let mut acc = Accumulator::new(alg);
    for m in 0..d {
        for l in 0..d {
            for n in 0..d {
                let c = cache.riemann(r, m, n, l);
                if !c.is_zero() {
                    acc.extend(Form::from_factors(
                        alg,
                        &[(a, m), (b, l), (b, n)],
                        c.clone(),
                    )?);
                }
            }
        }
    }
    Ok(acc.finish())
}

/// The curvature operators as vector fields:
///
/// - `R_(0,1) = th^m xi^l xi^n R^r_{mnl} d/dth^r`
/// - `R_(1,0) = xi^m th^l th^n R^r_{mnl} d/dxi^r`
/// - `R_(1,1) = 1/2 (xi^m th^l th^n R^r_{mnl} d/dth^r - th^m xi^l xi^n R^r_{mnl} d/dxi^r)`
pub fn curvature_field(
    alg: &Arc<Algebra>,
    cache: &GeometryCache,
    tag: Curvature,
) -> Result<VectorField<Expr>, GeometryError> {
    check_algebra(alg, cache)?;
    let d = cache.dim();
    let degree = match tag {
        Curvature::Xi | Curvature::Theta => Degree::zero(2),
        Curvature::Mixed => Degree::new(&[1, 1]).expect("two bits"),
    };
    let mut x = VectorField::zero(alg, degree);
    let half = Expr::num(rational(1, 2));
    for r in 0..d {
        match tag {
            Curvature::Xi => {
                x.add_formal(THETA, r, curvature_coefficient(alg, cache, THETA, XI, r)?)?
            }
            Curvature::Theta => {
                x.add_formal(XI, r, curvature_coefficient(alg, cache, XI, THETA, r)?)?
            }
            Curvature::Mixed => {
                x.add_formal(
                    THETA,
                    r,
                    curvature_coefficient(alg, cache, XI, THETA, r)?.scale(&half),
                )?;
                x.add_formal(
                    XI,
                    r,
                    -curvature_coefficient(alg, cache, THETA, XI, r)?.scale(&half),
                )?;
            }
        }
    }
    Ok(x)
}

pub fn curvature_operator(
    tag: Curvature,
    omega: &Form,
    cache: &GeometryCache,
) -> Result<Form, GeometryError> {
    Ok(curvature_field(omega.algebra(), cache, tag)?.apply(omega)?)
}

/// First-order supersymmetry variation, `delta omega = nabla_s omega`.
pub fn susy_variation(
    side: BiSector,
    omega: &Form,
    cache: &GeometryCache,
) -> Result<Form, GeometryError> {
    covariant_de_rham(side, omega, cache)
}

/// `th^m xi^n S_{nm}` for a symmetric tensor `S`.
fn symmetric_form<F: Fn(usize, usize) -> Expr>(
    alg: &Arc<Algebra>,
    cache: &GeometryCache,
    s: F,
) -> Result<Form, GeometryError> {
    check_algebra(alg, cache)?;
    let d = cache.dim();
    let mut acc = Accumulator::new(alg);
    for m in 0..d {
        for n in 0..d {
            acc.extend(Form::from_factors(alg, &[(THETA, m), (XI, n)], s(n, m))?);
        }
    }
    Ok(acc.finish())
}

/// The metric as the (1,1)-form `th^m xi^n g_{nm}`.
pub fn metric_form(alg: &Arc<Algebra>, cache: &GeometryCache) -> Result<Form, GeometryError> {
    symmetric_form(alg, cache, |n, m| cache.metric()[n][m].clone())
}

/// The Ricci tensor as the (1,1)-form `th^m xi^n R_{nm}`.
pub fn ricci_form(alg: &Arc<Algebra>, cache: &GeometryCache) -> Result<Form, GeometryError> {
    symmetric_form(alg, cache, |n, m| cache.ricci(n, m).clone())
}

/// The covariant Riemann tensor as the (2,2)-form
/// `1/4 th^r th^s xi^m xi^n R_{rs|mn}`.
pub fn riemann_form(alg: &Arc<Algebra>, cache: &GeometryCache) -> Result<Form, GeometryError> {
    check_algebra(alg, cache)?;
    Ok(from_components(alg, &[2, 2], |b| {
        cache
            .riemann_lower(b[1][0], b[1][1], b[0][0], b[0][1])
            .clone()
    })?)
}

/// Residual forms of the Bianchi identities; each vanishes on a
/// Levi-Civita chart.
#[derive(Debug, Clone, PartialEq)]
pub struct BianchiForms {
    /// `Delta_(0,1) R`.
    pub first: Form,
    /// `nabla_(0,1) R`.
    pub second: Form,
    /// `nabla_(1,0) R`.
    pub second_theta: Form,
}

pub fn bianchi_checks(
    alg: &Arc<Algebra>,
    cache: &GeometryCache,
) -> Result<BianchiForms, GeometryError> {
    let r = riemann_form(alg, cache)?;
    Ok(BianchiForms {
        first: delta_op(XI, THETA, &r)?,
        second: covariant_de_rham(BiSector::Xi, &r, cache)?,
        second_theta: covariant_de_rham(BiSector::Theta, &r, cache)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{catalog_chart, Chart};
    use crate::multiform::de_rham;
    use crate::random::{random_element, PolySpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup(name: &str) -> (Chart, GeometryCache, Arc<Algebra>) {
        let chart = catalog_chart(name).unwrap();
        let cache = GeometryCache::new(&chart).unwrap();
        let alg = Algebra::bi_form(chart.dim());
        (chart, cache, alg)
    }

    fn max_residual(chart: &Chart, w: &Form) -> f64 {
        chart
            .sample_points(17, 8)
            .unwrap()
            .iter()
            .map(|p| w.max_abs_at(p, chart.params()).unwrap())
            .fold(0.0, f64::max)
    }

    #[test]
    fn flat_covariant_derivative_is_de_rham() {
        let (_, cache, alg) = setup("minkowski4");
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let w = random_element(&mut rng, &alg, 2, &PolySpec::new(4));
        assert_eq!(
            covariant_de_rham(BiSector::Xi, &w, &cache).unwrap(),
            de_rham(XI, &w).unwrap()
        );
        assert_eq!(
            covariant_de_rham(BiSector::Theta, &w, &cache).unwrap(),
            de_rham(THETA, &w).unwrap()
        );
    }

    #[test]
    fn metric_is_parallel() {
        let (chart, cache, alg) = setup("schwarzschild");
        let g = metric_form(&alg, &cache).unwrap();
        for side in [BiSector::Xi, BiSector::Theta] {
            let v = covariant_de_rham(side, &g, &cache).unwrap();
            assert!(max_residual(&chart, &v) < 1e-10);
        }
    }

    #[test]
    fn curvature_commutators() {
        let (chart, cache, alg) = setup("schwarzschild");
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let spec = PolySpec {
            dim: 4,
            max_degree: 1,
            max_terms: 2,
        };
        let nx = covariant_field(&alg, &cache, BiSector::Xi).unwrap();
        let nt = covariant_field(&alg, &cache, BiSector::Theta).unwrap();
        for _ in 0..2 {
            let w = random_element(&mut rng, &alg, 1, &spec);
            let xx = nx.apply(&nx.apply(&w).unwrap()).unwrap().scale_int(2);
            let rx = curvature_operator(Curvature::Xi, &w, &cache).unwrap();
            assert!(max_residual(&chart, &(&xx - &rx)) < 1e-9);
            let tt = nt.apply(&nt.apply(&w).unwrap()).unwrap().scale_int(2);
            let rt = curvature_operator(Curvature::Theta, &w, &cache).unwrap();
            assert!(max_residual(&chart, &(&tt - &rt)) < 1e-9);
            let tx = &nt.apply(&nx.apply(&w).unwrap()).unwrap()
                - &nx.apply(&nt.apply(&w).unwrap()).unwrap();
            let rm = curvature_operator(Curvature::Mixed, &w, &cache).unwrap();
            assert!(max_residual(&chart, &(&tx - &rm)) < 1e-9);
            assert!(
                max_residual(&chart, &rx) > 1e-6 || max_residual(&chart, &rm) > 1e-6 || w.is_zero()
            );
        }
    }

    #[test]
    fn one_form_example() {
        let (chart, cache, alg) = setup("two-sphere");
        let w0 = Expr::coord(0) * Expr::coord(1);
        let w1 = Expr::coord(0).sin();
        let omega = &Form::generator(&alg, THETA, 0).unwrap().scale(&w0)
            + &Form::generator(&alg, THETA, 1).unwrap().scale(&w1);
        let got = covariant_de_rham(BiSector::Xi, &omega, &cache).unwrap();
        let w = [w0, w1];
        let mut acc = Accumulator::new(&alg);
        for m in 0..2 {
            for n in 0..2 {
                let mut c = w[n].diff(m);
                for r in 0..2 {
                    c = c - cache.christoffel(r, m, n) * &w[r];
                }
                acc.extend(Form::from_factors(&alg, &[(THETA, n), (XI, m)], c).unwrap());
            }
        }
        assert!(max_residual(&chart, &(&got - &acc.finish())) < 1e-12);
    }

    #[test]
    fn bianchi_on_schwarzschild() {
        let (chart, cache, alg) = setup("schwarzschild");
        let b = bianchi_checks(&alg, &cache).unwrap();
        for w in [&b.first, &b.second, &b.second_theta] {
            assert!(max_residual(&chart, w) < 1e-9);
        }
        assert!(max_residual(&chart, &riemann_form(&alg, &cache).unwrap()) > 1e-3);
    }

    #[test]
    fn mismatched_algebra() {
        let (_, cache, _) = setup("two-sphere");
        assert!(matches!(
            covariant_field(&Algebra::bi_form(3), &cache, BiSector::Xi),
            Err(GeometryError::Mismatch(_))
        ));
    }
}
