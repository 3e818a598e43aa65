//! The Curtright field: a (1,2)-form gauge field on five-dimensional
//! Minkowski space.

use super::{
    component, de_rham, delta_op, from_components, multidegree, FormError, MinkowskiMetricForm,
    THETA, XI,
};
use crate::algebra::GradedElement;
use crate::scalar::{rational, Coefficient, Differentiable};

/// Sector totals of `C`: two `xi`, one `th`.
const TOTALS: [u32; 2] = [2, 1];

/// Everything derived from a Curtright field `C`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurtrightFields<C> {
    /// `Delta_(0,1) C`; zero iff the cyclic constraint holds.
    pub constraint: GradedElement<C>,
    /// `F = d_(0,1) C`.
    pub field_strength: GradedElement<C>,
    /// `E = d_(1,0) F`.
    pub curvature: GradedElement<C>,
    /// `eta^-1(E)`.
    pub ricci: GradedElement<C>,
    /// `eta^-1(eta^-1(E))`.
    pub trace: GradedElement<C>,
}

fn check<C: Coefficient>(c: &GradedElement<C>, eta: &MinkowskiMetricForm) -> Result<(), FormError> {
    let alg = c.algebra();
    if alg.n() != 2 || alg.base_dim() != 5 || eta.dim() != 5 {
        return Err(FormError::Shape {
            expected: "a (1,2)-form on five-dimensional Minkowski space".into(),
        });
    }
    match multidegree(c) {
        Some(t) if t != TOTALS => Err(FormError::Multidegree {
            expected: vec![1, 2],
            found: t.into_iter().rev().collect(),
        }),
        None if !c.is_zero() => Err(FormError::Shape {
            expected: "a homogeneous (1,2)-form".into(),
        }),
        _ => Ok(()),
    }
}

pub fn curtright_pipeline<C: Differentiable>(
    c: &GradedElement<C>,
    eta: &MinkowskiMetricForm,
) -> Result<CurtrightFields<C>, FormError> {
    check(c, eta)?;
    let constraint = delta_op(XI, THETA, c)?;
    let field_strength = de_rham(XI, c)?;
    let curvature = de_rham(THETA, &field_strength)?;
    let ricci = eta.inverse_apply(&curvature)?;
    let trace = eta.inverse_apply(&ricci)?;
    Ok(CurtrightFields {
        constraint,
        field_strength,
        curvature,
        ricci,
        trace,
    })
}

/// Removes the totally antisymmetric part of a (1,2)-form,
/// `C_{mn|r} - (C_{mn|r} + C_{nr|m} + C_{rm|n}) / 3`, so that the result
/// satisfies the cyclic constraint.
pub fn curtright_project<C: Coefficient>(
    c: &GradedElement<C>,
) -> Result<GradedElement<C>, FormError> {
    let third = C::from_rational(&rational(1, 3));
    let mut err = None;
    let out = from_components(c.algebra(), &TOTALS, |b| {
        let (m, n, r) = (b[0][0], b[0][1], b[1][0]);
        let mut get = |x: usize, y: usize, z: usize| match component(c, &[vec![x, y], vec![z]]) {
            Ok(v) => v,
            Err(e) => {
                err.get_or_insert(e);
                C::zero()
            }
        };
        let own = get(m, n, r);
        let cyclic = own.clone() + get(n, r, m) + get(r, m, n);
        own - cyclic * third.clone()
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;
    use crate::expr::Expr;
    use crate::multiform::Signature;
    use crate::random::{random_homogeneous, PolySpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn eta() -> MinkowskiMetricForm {
        MinkowskiMetricForm::new(5, Signature::MostlyPlus)
    }

    #[test]
    fn projection_satisfies_the_constraint() {
        let alg = Algebra::bi_form(5);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let raw = random_homogeneous(&mut rng, &alg, &TOTALS, &PolySpec::new(5), 0.3);
        let c = curtright_project(&raw).unwrap();
        let out = curtright_pipeline(&c, &eta()).unwrap();
        assert!(out.constraint.is_zero());
        assert!(!delta_op(XI, THETA, &raw).unwrap().is_zero());
    }

    #[test]
    fn constant_fields_have_no_curvature() {
        let alg = Algebra::bi_form(5);
        let raw = from_components(&alg, &TOTALS, |b| {
            Expr::int((b[0][0] + 2 * b[0][1] + 3 * b[1][0]) as i64)
        })
        .unwrap();
        let out = curtright_pipeline(&curtright_project(&raw).unwrap(), &eta()).unwrap();
        assert!(out.field_strength.is_zero());
        assert!(out.curvature.is_zero());
    }

    #[test]
    fn shape_errors() {
        let alg = Algebra::bi_form(5);
        let one_form = GradedElement::<Expr>::generator(&alg, XI, 0).unwrap();
        assert!(matches!(
            curtright_pipeline(&one_form, &eta()),
            Err(FormError::Multidegree { .. })
        ));
        let alg4 = Algebra::bi_form(4);
        let z = GradedElement::<Expr>::zero(&alg4);
        assert!(matches!(
            curtright_pipeline(&z, &MinkowskiMetricForm::new(4, Signature::MostlyPlus)),
            Err(FormError::Shape { .. })
        ));
    }
}
