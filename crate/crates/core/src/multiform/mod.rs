//! Flat-space multi-form calculus.
//!
//! A multi-form lives in an algebra whose sectors are nilpotent, mutually
//! commuting and each of the chart's dimension. For bi-forms sector [`XI`]
//! carries degree (0,1) and sector [`THETA`] degree (1,0).

mod components;
mod curtright;
mod metric;
mod pullback;

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, GradedElement, SectorId};
use crate::grading::Degree;
use crate::operator::VectorField;
use crate::scalar::{Coefficient, Differentiable};

pub use components::{
    component, export_components, from_components, import_components, ComponentArray,
    ComponentEntry,
};
pub use curtright::{curtright_pipeline, curtright_project, CurtrightFields};
pub use metric::{MinkowskiMetricForm, Signature};
pub use pullback::{determinant, is_lorentz, poincare_pullback};

/// Sector of degree (0,1) in a bi-form algebra.
pub const XI: SectorId = 0;
/// Sector of degree (1,0) in a bi-form algebra.
pub const THETA: SectorId = 1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("sector {sector} has dimension {dim} but the chart has dimension {base}")]
    SectorDimension {
        sector: SectorId,
        dim: usize,
        base: usize,
    },
    #[error("source and target sector must differ")]
    SameSector,
    #[error("expected {expected}")]
    Shape { expected: String },
    #[error("expected a form of multidegree {expected:?}, found {found:?}")]
    Multidegree { expected: Vec<u32>, found: Vec<u32> },
    #[error("transformation matrix is singular")]
    Singular,
    #[error("component data: {0}")]
    Components(String),
}

fn check_form_sector(alg: &Algebra, sector: SectorId) -> Result<Degree, FormError> {
    let s = alg.sector(sector)?;
    if s.dim() != alg.base_dim() {
        return Err(FormError::SectorDimension {
            sector,
            dim: s.dim(),
            base: alg.base_dim(),
        });
    }
    Ok(s.degree().clone())
}

/// The de Rham differential `q^mu d/dx^mu` of a sector as a vector field.
pub fn de_rham_field<C: Differentiable>(
    alg: &Arc<Algebra>,
    sector: SectorId,
) -> Result<VectorField<C>, FormError> {
    let degree = check_form_sector(alg, sector)?;
    let mut x = VectorField::zero(alg, degree);
    for mu in 0..alg.base_dim() {
        x.add_base(mu, GradedElement::generator(alg, sector, mu)?)?;
    }
    Ok(x)
}

/// `d_s omega`.
pub fn de_rham<C: Differentiable>(
    sector: SectorId,
    omega: &GradedElement<C>,
) -> Result<GradedElement<C>, FormError> {
    Ok(de_rham_field(omega.algebra(), sector)?.apply(omega)?)
}

/// `Delta = q_source^mu d/dq_target^mu`, moving one index from the target
/// sector to the source sector.
pub fn delta_field<C: Differentiable>(
    alg: &Arc<Algebra>,
    source: SectorId,
    target: SectorId,
) -> Result<VectorField<C>, FormError> {
    if source == target {
        return Err(FormError::SameSector);
    }
    let ds = check_form_sector(alg, source)?;
    let dt = check_form_sector(alg, target)?;
    let mut x = VectorField::zero(alg, ds.add(&dt).map_err(AlgebraError::from)?);
    for mu in 0..alg.base_dim() {
        x.add_formal(target, mu, GradedElement::generator(alg, source, mu)?)?;
    }
    Ok(x)
}

pub fn delta_op<C: Differentiable>(
    source: SectorId,
    target: SectorId,
    omega: &GradedElement<C>,
) -> Result<GradedElement<C>, FormError> {
    Ok(delta_field(omega.algebra(), source, target)?.apply(omega)?)
}

/// Interior product `X^mu d/dq^mu` in one sector as a vector field.
pub fn interior_field<C: Differentiable>(
    alg: &Arc<Algebra>,
    sector: SectorId,
    x: &[C],
) -> Result<VectorField<C>, FormError> {
    let degree = check_form_sector(alg, sector)?;
    if x.len() != alg.base_dim() {
        return Err(FormError::Shape {
            expected: format!("{} vector components", alg.base_dim()),
        });
    }
    let mut f = VectorField::zero(alg, degree);
    for (mu, c) in x.iter().enumerate() {
        f.add_formal(sector, mu, GradedElement::scalar(alg, c.clone()))?;
    }
    Ok(f)
}

pub fn interior_product<C: Differentiable>(
    sector: SectorId,
    x: &[C],
    omega: &GradedElement<C>,
) -> Result<GradedElement<C>, FormError> {
    Ok(interior_field(omega.algebra(), sector, x)?.apply(omega)?)
}

/// Lie derivative by the Cartan formula `i_X d + d i_X` within one sector.
pub fn lie_derivative<C: Differentiable>(
    sector: SectorId,
    x: &[C],
    omega: &GradedElement<C>,
) -> Result<GradedElement<C>, FormError> {
    let i = interior_field(omega.algebra(), sector, x)?;
    let d = de_rham_field(omega.algebra(), sector)?;
    Ok(&i.apply(&d.apply(omega)?)? + &d.apply(&i.apply(omega)?)?)
}

/// Sector totals of a homogeneous multi-form, or `None` for zero or mixed
/// elements.
pub fn multidegree<C: Coefficient>(omega: &GradedElement<C>) -> Option<Vec<u32>> {
    let alg = omega.algebra();
    let mut it = omega.terms().map(|(m, _)| m.sector_totals(alg));
    let first = it.next()?;
    it.all(|t| t == first).then_some(first)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_expr, Expr};
    use crate::random::{random_element, PolySpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type E = GradedElement<Expr>;

    fn x(src: &str) -> Expr {
        parse_expr(src, &["x0", "x1", "x2", "x3"], &[]).unwrap()
    }

    #[test]
    fn de_rham_of_a_function() {
        let alg = Algebra::bi_form(4);
        let w = E::scalar(&alg, x("x0*x1"));
        let expected = &E::generator(&alg, XI, 0).unwrap().scale(&x("x1"))
            + &E::generator(&alg, XI, 1).unwrap().scale(&x("x0"));
        assert_eq!(de_rham(XI, &w).unwrap(), expected);
    }

    #[test]
    fn bicomplex() {
        let alg = Algebra::bi_form(4);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let w = random_element(&mut rng, &alg, 2, &PolySpec::new(4));
            assert!(de_rham(XI, &de_rham(XI, &w).unwrap()).unwrap().is_zero());
            assert!(de_rham(THETA, &de_rham(THETA, &w).unwrap())
                .unwrap()
                .is_zero());
            let a = de_rham(THETA, &de_rham(XI, &w).unwrap()).unwrap();
            let b = de_rham(XI, &de_rham(THETA, &w).unwrap()).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn delta_substitutes_one_index() {
        let alg = Algebra::bi_form(3);
        let f = x("x2^2");
        let w = E::generator(&alg, THETA, 1).unwrap().scale(&f);
        assert_eq!(
            delta_op(XI, THETA, &w).unwrap(),
            E::generator(&alg, XI, 1).unwrap().scale(&f)
        );
        assert_eq!(delta_op::<Expr>(XI, XI, &w), Err(FormError::SameSector));
    }

    #[test]
    fn interior_and_lie() {
        let alg = Algebra::bi_form(2);
        let one = [Expr::zero(), Expr::one()];
        let xi1 = E::generator(&alg, XI, 1).unwrap();
        assert_eq!(
            interior_product(XI, &one, &xi1).unwrap(),
            E::scalar(&alg, Expr::one())
        );
        let translate = [Expr::one(), Expr::zero()];
        let w = xi1.scale(&Expr::coord(0));
        assert_eq!(lie_derivative(XI, &translate, &w).unwrap(), xi1);
    }

    #[test]
    fn sector_dimension_is_checked() {
        let alg = Algebra::bundle(3, 2);
        assert!(matches!(
            de_rham_field::<Expr>(&alg, 2),
            Err(FormError::SectorDimension { .. })
        ));
    }
}
