use num_traits::{One, Zero};

use super::{check_form_sector, FormError, MinkowskiMetricForm};
use crate::algebra::{Accumulator, GradedElement};
use crate::expr::Expr;
use crate::scalar::Rational;

/// Exact determinant by fraction-free elimination over the rationals.
pub fn determinant(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            let f = &a[r][col] / &p;
            if f.is_zero() {
                continue;
            }
            for c in col..n {
                let sub = &f * &a[col][c];
                a[r][c] -= sub;
            }
        }
    }
    det
}

/// Whether `L eta L^T = eta` exactly, with `L[nu][mu] = Lambda_nu^mu`.
pub fn is_lorentz(lambda: &[Vec<Rational>], eta: &MinkowskiMetricForm) -> bool {
    let d = eta.dim();
    if lambda.len() != d || lambda.iter().any(|row| row.len() != d) {
        return false;
    }
    (0..d).all(|mu| {
        (0..d).all(|nu| {
            let s: Rational = (0..d)
                .map(|a| {
                    &lambda[mu][a]
                        * &lambda[nu][a]
                        * Rational::from_integer(eta.component(a, a).into())
                })
                .sum();
            s == Rational::from_integer(eta.component(mu, nu).into())
        })
    })
}

/// Pulls a multi-form back along `x^mu -> x^nu Lambda_nu^mu + a^mu`, with
/// every sector transforming as `q^mu -> q^nu Lambda_nu^mu`.
pub fn poincare_pullback(
    omega: &GradedElement<Expr>,
    lambda: &[Vec<Rational>],
    shift: &[Rational],
) -> Result<GradedElement<Expr>, FormError> {
    let alg = omega.algebra();
    let d = alg.base_dim();
    if lambda.len() != d || lambda.iter().any(|row| row.len() != d) || shift.len() != d {
        return Err(FormError::Shape {
            expected: format!("a {d}x{d} matrix and a {d}-vector"),
        });
    }
    for s in 0..alg.sectors().len() {
        check_form_sector(alg, s)?;
    }
    if determinant(lambda).is_zero() {
        return Err(FormError::Singular);
    }
    let images: Vec<Expr> = (0..d)
        .map(|mu| {
            let mut parts: Vec<Expr> = (0..d)
                .filter(|&nu| !lambda[nu][mu].is_zero())
                .map(|nu| Expr::coord(nu).scale(&lambda[nu][mu]))
                .collect();
            parts.push(Expr::num(shift[mu].clone()));
            Expr::sum(parts)
        })
        .collect();
    // image of each formal coordinate, by flattened position
    let formal: Vec<GradedElement<Expr>> = (0..alg.formal_dim())
        .map(|p| {
            let (s, mu) = alg.locate(p);
            let mut acc = Accumulator::new(alg);
            for (nu, row) in lambda.iter().enumerate() {
                if !row[mu].is_zero() {
                    acc.extend(
                        GradedElement::generator(alg, s, nu)
                            .expect("valid index")
                            .scale(&Expr::num(row[mu].clone())),
                    );
                }
            }
            acc.finish()
        })
        .collect();
    let mut acc = Accumulator::new(alg);
    for (m, c) in omega.terms() {
        let mut image = GradedElement::scalar(alg, c.substitute(&images));
        for p in m.factors() {
            image = &image * &formal[p];
        }
        acc.extend(image);
    }
    Ok(acc.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;
    use crate::multiform::{de_rham, Signature, THETA, XI};
    use crate::random::{random_element, PolySpec};
    use crate::scalar::rational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn identity(d: usize) -> Vec<Vec<Rational>> {
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        if i == j {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// A boost in the (0,1) plane with rational rapidity parameter `t`.
    fn boost(d: usize, t: Rational) -> Vec<Vec<Rational>> {
        let one = Rational::one();
        let den = &one - &t * &t;
        let ch = (&one + &t * &t) / &den;
        let sh = (&t + &t) / &den;
        let mut m = identity(d);
        m[0][0] = ch.clone();
        m[1][1] = ch;
        m[0][1] = sh.clone();
        m[1][0] = sh;
        m
    }

    #[test]
    fn identity_is_trivial() {
        let alg = Algebra::bi_form(3);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let w = random_element(&mut rng, &alg, 2, &PolySpec::new(3));
        let zero = vec![Rational::zero(); 3];
        assert_eq!(poincare_pullback(&w, &identity(3), &zero).unwrap(), w);
    }

    #[test]
    fn commutes_with_differentials() {
        let alg = Algebra::bi_form(4);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let lambda = boost(4, rational(1, 3));
        let shift = vec![
            rational(1, 2),
            rational(-2, 1),
            Rational::zero(),
            rational(3, 1),
        ];
        for _ in 0..5 {
            let w = random_element(&mut rng, &alg, 2, &PolySpec::new(4));
            for s in [XI, THETA] {
                let a = de_rham(s, &poincare_pullback(&w, &lambda, &shift).unwrap()).unwrap();
                let b = poincare_pullback(&de_rham(s, &w).unwrap(), &lambda, &shift).unwrap();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn lorentz_transformations_preserve_eta() {
        let eta = MinkowskiMetricForm::new(4, Signature::MostlyPlus);
        let lambda = boost(4, rational(2, 5));
        assert!(is_lorentz(&lambda, &eta));
        let alg = Algebra::bi_form(4);
        let form: GradedElement<Expr> = eta.form(&alg).unwrap();
        let zero = vec![Rational::zero(); 4];
        assert_eq!(poincare_pullback(&form, &lambda, &zero).unwrap(), form);
    }

    #[test]
    fn singular_matrices_are_rejected() {
        let alg = Algebra::bi_form(2);
        let w = GradedElement::scalar(&alg, Expr::coord(0));
        let m = vec![
            vec![rational(1, 1), rational(2, 1)],
            vec![rational(2, 1), rational(4, 1)],
        ];
        assert_eq!(determinant(&m), Rational::zero());
        let zero = vec![Rational::zero(); 2];
        assert_eq!(poincare_pullback(&w, &m, &zero), Err(FormError::Singular));
    }
}
