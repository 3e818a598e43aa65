use std::fmt;

use super::{Algebra, GradedElement, Monomial};
use crate::expr::Expr;
use crate::scalar::Coefficient;

impl Algebra {
    /// Sector order used for printing: nilpotent sectors from the highest
    /// degree down (so `th` before `xi` for bi-forms), then the others in
    /// canonical order.
    pub fn display_order(&self) -> Vec<usize> {
        let mut nil: Vec<usize> = (0..self.sectors.len())
            .filter(|&s| self.sectors[s].is_nilpotent())
            .collect();
        nil.reverse();
        nil.extend((0..self.sectors.len()).filter(|&s| !self.sectors[s].is_nilpotent()));
        nil
    }

    /// Factors of `m` rearranged into display order, with the sign of the
    /// rearrangement relative to the canonical product.
    pub fn display_factors(&self, m: &Monomial) -> (bool, Vec<usize>) {
        let mut factors = Vec::new();
        for s in self.display_order() {
            let start = self.offsets[s];
            for i in 0..self.sectors[s].dim() {
                for _ in 0..m.exponent(start + i) {
                    factors.push(start + i);
                }
            }
        }
        // the canonical form of the displayed product differs by this sign
        let mut negative = false;
        let mut acc = Monomial::one(self);
        for &p in &factors {
            let (neg, next) = self
                .mul_monomials(&acc, &Monomial::generator(self, p))
                .expect("factors of an admissible monomial");
            negative ^= neg;
            acc = next;
        }
        (negative, factors)
    }

    fn factor_text(&self, factors: &[usize]) -> String {
        let mut out: Vec<String> = Vec::new();
        let mut i = 0;
        while i < factors.len() {
            let mut j = i;
            while j < factors.len() && factors[j] == factors[i] {
                j += 1;
            }
            let name = self.coordinate_name(factors[i]);
            out.push(if j - i > 1 {
                format!("{name}^{}", j - i)
            } else {
                name
            });
            i = j;
        }
        out.join("*")
    }
}

fn is_sum(text: &str) -> bool {
    text.char_indices()
        .skip(1)
        .any(|(_, c)| c == '+' || c == '-')
}

impl<C: Coefficient> GradedElement<C> {
    /// Renders the element as a sum of `coeff*monomial` terms using `coeff`
    /// to print coefficients. With `theta_first` the monomials are written
    /// `th` before `xi` and the sign is adjusted accordingly.
    pub fn render<F: Fn(&C) -> String>(&self, coeff: F, theta_first: bool) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let alg = self.algebra();
        let mut out = String::new();
        for (k, (m, c)) in self.terms().enumerate() {
            let (negative, text) = if theta_first {
                let (neg, factors) = alg.display_factors(m);
                (neg, alg.factor_text(&factors))
            } else {
                (
                    false,
                    if m.is_one() {
                        String::new()
                    } else {
                        m.to_text(alg)
                    },
                )
            };
            let c = if negative { -c.clone() } else { c.clone() };
            let mut ct = coeff(&c);
            let minus = ct.starts_with('-') && !is_sum(&ct);
            if minus {
                ct.remove(0);
            }
            if k > 0 {
                out.push_str(if minus { " - " } else { " + " });
            } else if minus {
                out.push('-');
            }
            let body = match (text.is_empty(), ct.as_str()) {
                (true, _) => ct.clone(),
                (false, "1") => text,
                (false, _) if is_sum(&ct) => format!("({ct})*{text}"),
                (false, _) => format!("{ct}*{text}"),
            };
            out.push_str(&body);
        }
        out
    }
}

impl GradedElement<Expr> {
    /// Text form with chart coordinates named by `coord_names`.
    pub fn to_text(&self, coord_names: &[String]) -> String {
        self.render(|c| c.to_text(coord_names), false)
    }

    /// Text form in the `th`-before-`xi` convention.
    pub fn to_theta_first_text(&self, coord_names: &[String]) -> String {
        self.render(|c| c.to_text(coord_names), true)
    }
}

impl<C: Coefficient + fmt::Display> fmt::Display for GradedElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(|c| c.to_string(), false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;

    #[test]
    fn canonical_and_theta_first() {
        let alg = Algebra::bi_form(2);
        let names: Vec<String> = vec!["t".into(), "x".into()];
        let w = GradedElement::<Expr>::from_factors(
            &alg,
            &[(1, 0), (0, 1), (0, 0)],
            parse_expr("t + x", &["t", "x"], &[]).unwrap(),
        )
        .unwrap();
        assert_eq!(w.to_text(&names), "(-t - x)*xi0*xi1*th0");
        assert_eq!(w.to_theta_first_text(&names), "(-t - x)*th0*xi0*xi1");
        let v = GradedElement::<Expr>::generator(&alg, 0, 1)
            .unwrap()
            .scale(&Expr::int(-3));
        assert_eq!(v.to_text(&names), "-3*xi1");
    }
}
