//! Seeded generators for random coefficients and elements.

use std::sync::Arc;

use rand::Rng;

use crate::algebra::{Algebra, GradedElement};
use crate::expr::Expr;
use crate::scalar::Rational;

/// Shape of random polynomial coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolySpec {
    /// Number of chart coordinates the polynomial may use.
    pub dim: usize,
    pub max_degree: u32,
    pub max_terms: usize,
}

impl PolySpec {
    pub fn new(dim: usize) -> Self {
        PolySpec {
            dim,
            max_degree: 2,
            max_terms: 3,
        }
    }
}

/// A small nonzero rational with numerator in `[-5, 5]` and denominator in
/// `[1, 3]`.
pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    loop {
        let n: i64 = rng.random_range(-5..=5);
        if n != 0 {
            let d: i64 = rng.random_range(1..=3);
            return Rational::new(n.into(), d.into());
        }
    }
}

/// A random polynomial with exact rational coefficients.
pub fn random_polynomial<R: Rng>(rng: &mut R, spec: &PolySpec) -> Expr {
    let terms = rng.random_range(1..=spec.max_terms.max(1));
    Expr::sum((0..terms).map(|_| {
        let degree = rng.random_range(0..=spec.max_degree);
        let mut factors = vec![Expr::num(random_rational(rng))];
        if spec.dim > 0 {
            for _ in 0..degree {
                factors.push(Expr::coord(rng.random_range(0..spec.dim)));
            }
        }
        Expr::product(factors)
    }))
}

/// A random element supported on the monomials with the given sector
/// totals; each admissible monomial is kept with probability `density`.
pub fn random_homogeneous<R: Rng>(
    rng: &mut R,
    alg: &Arc<Algebra>,
    totals: &[u32],
    spec: &PolySpec,
    density: f64,
) -> GradedElement<Expr> {
    let monomials = alg.monomials_with_totals(totals);
    let mut terms = Vec::new();
    for m in &monomials {
        if rng.random_bool(density) {
            terms.push((m.clone(), random_polynomial(rng, spec)));
        }
    }
    if terms.is_empty() && !monomials.is_empty() {
        let m = &monomials[rng.random_range(0..monomials.len())];
        terms.push((m.clone(), random_polynomial(rng, spec)));
    }
    GradedElement::from_terms(alg, terms)
}

/// A random, generally inhomogeneous element: a sum of homogeneous parts
/// with sector totals drawn up to `max_total` per sector.
pub fn random_element<R: Rng>(
    rng: &mut R,
    alg: &Arc<Algebra>,
    max_total: u32,
    spec: &PolySpec,
) -> GradedElement<Expr> {
    let parts = rng.random_range(1..=3);
    let mut out = GradedElement::zero(alg);
    for _ in 0..parts {
        let totals = random_totals(rng, alg, max_total);
        out = out + random_homogeneous(rng, alg, &totals, spec, 0.3);
    }
    out
}

/// Sector totals drawn uniformly, respecting dimensions and truncation.
pub fn random_totals<R: Rng>(rng: &mut R, alg: &Algebra, max_total: u32) -> Vec<u32> {
    alg.sectors()
        .iter()
        .map(|s| {
            let cap = if s.is_nilpotent() {
                s.dim() as u32
            } else {
                s.truncation()
            };
            rng.random_range(0..=max_total.min(cap))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn seeded_generation_is_reproducible() {
        let alg = Algebra::bi_form(3);
        let spec = PolySpec::new(3);
        let a = random_element(&mut ChaCha8Rng::seed_from_u64(5), &alg, 2, &spec);
        let b = random_element(&mut ChaCha8Rng::seed_from_u64(5), &alg, 2, &spec);
        assert_eq!(a, b);
        assert!(!a.is_zero());
    }

    #[test]
    fn homogeneous_parts_have_the_requested_totals() {
        let alg = Algebra::bi_form(4);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let w = random_homogeneous(&mut rng, &alg, &[2, 1], &PolySpec::new(4), 0.5);
        assert!(w.terms().all(|(m, _)| m.sector_totals(&alg) == [2, 1]));
        assert!(random_polynomial(&mut rng, &PolySpec::new(4)).is_polynomial());
    }
}
