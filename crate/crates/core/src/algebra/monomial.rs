use std::sync::Arc;

use super::{pairing_odd, Algebra};
use crate::grading::Degree;

/// A canonically ordered product of formal coordinates, stored as one
/// exponent per flattened coordinate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Arc<[u8]>);

impl Monomial {
    pub fn one(alg: &Algebra) -> Self {
        Monomial(vec![0; alg.formal_dim()].into())
    }

    pub fn generator(alg: &Algebra, position: usize) -> Self {
        let mut e = vec![0; alg.formal_dim()];
        e[position] = 1;
        Monomial(e.into())
    }

    /// Builds a monomial from raw exponents, checking nilpotency and
    /// truncation.
    pub fn from_exponents(alg: &Algebra, exponents: &[u8]) -> Option<Self> {
        if exponents.len() != alg.formal_dim() {
            return None;
        }
        let m = Monomial(exponents.into());
        alg.admissible(&m).then_some(m)
    }

    pub fn exponents(&self) -> &[u8] {
        &self.0
    }

    pub fn exponent(&self, position: usize) -> u8 {
        self.0[position]
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Flattened positions of the factors in canonical order, repeated by
    /// multiplicity.
    pub fn factors(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(p, &e)| std::iter::repeat_n(p, e as usize))
    }

    pub(crate) fn mask(&self, alg: &Algebra) -> u64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e % 2 == 1)
            .fold(0, |m, (p, _)| m ^ alg.mask(p))
    }

    pub fn degree(&self, alg: &Algebra) -> Degree {
        alg.degree_from_mask(self.mask(alg))
    }

    /// Total exponent in each sector.
    pub fn sector_totals(&self, alg: &Algebra) -> Vec<u32> {
        let mut out = vec![0u32; alg.sectors().len()];
        for (p, &e) in self.0.iter().enumerate() {
            out[alg.locate(p).0] += e as u32;
        }
        out
    }

    /// Indices used in one sector, ascending and repeated by multiplicity.
    pub fn sector_indices(&self, alg: &Algebra, sector: usize) -> Vec<usize> {
        let start = alg.offsets[sector];
        let dim = alg.sectors()[sector].dim();
        (0..dim)
            .flat_map(|i| std::iter::repeat_n(i, self.0[start + i] as usize))
            .collect()
    }

    pub fn to_text(&self, alg: &Algebra) -> String {
        let mut parts = Vec::new();
        for (p, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(alg.coordinate_name(p)),
                _ => parts.push(format!("{}^{e}", alg.coordinate_name(p))),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl Algebra {
    /// Every admissible monomial whose total exponent in each sector equals
    /// `totals`, in ascending order.
    pub fn monomials_with_totals(&self, totals: &[u32]) -> Vec<Monomial> {
        assert_eq!(totals.len(), self.sectors.len(), "one total per sector");
        let mut blocks: Vec<Vec<Vec<u8>>> = Vec::new();
        for (s, &t) in self.sectors.iter().zip(totals) {
            let cap = if s.is_nilpotent() {
                1
            } else {
                t.min(s.truncation()) as u8
            };
            let mut out = Vec::new();
            exponent_vectors(s.dim(), t, cap, &mut Vec::new(), &mut out);
            blocks.push(out);
        }
        let mut result = vec![Vec::new()];
        for block in blocks {
            let mut next = Vec::new();
            for prefix in &result {
                for b in &block {
                    let mut e: Vec<u8> = prefix.clone();
                    e.extend_from_slice(b);
                    next.push(e);
                }
            }
            result = next;
        }
        let mut out: Vec<Monomial> = result
            .into_iter()
            .filter_map(|e| Monomial::from_exponents(self, &e))
            .collect();
        out.sort();
        out
    }

    fn admissible(&self, m: &Monomial) -> bool {
        let mut totals = vec![0u32; self.sectors.len()];
        for (p, &e) in m.0.iter().enumerate() {
            if e > 1 && self.is_nilpotent_position(p) {
                return false;
            }
            totals[self.owner[p]] += e as u32;
        }
        self.sectors
            .iter()
            .zip(&totals)
            .all(|(s, &t)| s.is_nilpotent() || t <= s.truncation())
    }

    /// Canonical form of `a * b`: `(negative, monomial)`, or `None` when the
    /// product vanishes or is truncated away.
    pub(crate) fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(bool, Monomial)> {
        let len = self.formal_dim();
        let mut out = Vec::with_capacity(len);
        for p in 0..len {
            let e = a.0[p] + b.0[p];
            if e > 1 && self.is_nilpotent_position(p) {
                return None;
            }
            out.push(e);
        }
        let m = Monomial(out.into());
        if !self.admissible(&m) {
            return None;
        }
        // each factor of b moves left past the factors of a standing to its
        // right in canonical order
        let mut negative = false;
        let mut suffix = 0u64;
        for p in (0..len).rev() {
            if b.0[p] % 2 == 1 && pairing_odd(suffix, self.masks[p]) {
                negative = !negative;
            }
            if a.0[p] % 2 == 1 {
                suffix ^= self.masks[p];
            }
        }
        Some((negative, m))
    }

    /// Left derivative of a monomial with respect to the coordinate at
    /// `position`: `(negative, multiplicity, monomial)`.
    pub(crate) fn derive_monomial(
        &self,
        m: &Monomial,
        position: usize,
    ) -> Option<(bool, u8, Monomial)> {
        let e = m.0[position];
        if e == 0 {
            return None;
        }
        let prefix = m.0[..position]
            .iter()
            .enumerate()
            .filter(|(_, &k)| k % 2 == 1)
            .fold(0u64, |acc, (p, _)| acc ^ self.masks[p]);
        let negative = pairing_odd(prefix, self.masks[position]);
        let mut out = m.0.to_vec();
        out[position] -= 1;
        Some((negative, e, Monomial(out.into())))
    }
}

fn exponent_vectors(dim: usize, total: u32, cap: u8, prefix: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
    if prefix.len() == dim {
        if total == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    for e in 0..=cap.min(total.min(u8::MAX as u32) as u8) {
        prefix.push(e);
        exponent_vectors(dim, total - e as u32, cap, prefix, out);
        prefix.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_signs() {
        let alg = Algebra::bi_form(3);
        let xi = |i: usize| Monomial::generator(&alg, i);
        let th = |i: usize| Monomial::generator(&alg, 3 + i);
        let (neg, m) = alg.mul_monomials(&xi(2), &xi(1)).unwrap();
        assert!(neg);
        assert_eq!(m.to_text(&alg), "xi1*xi2");
        let (neg, _) = alg.mul_monomials(&th(0), &xi(0)).unwrap();
        assert!(!neg);
        assert!(alg.mul_monomials(&xi(1), &xi(1)).is_none());
    }

    #[test]
    fn truncation() {
        let alg = Algebra::bundle(2, 2);
        let z0 = Monomial::generator(&alg, 4);
        assert!(alg.mul_monomials(&z0, &z0).is_none());
        let sectors =
            vec![super::super::Sector::new(Degree::new(&[1, 1]).unwrap(), 2).with_truncation(2)];
        let alg = Algebra::new(2, 1, sectors).unwrap();
        let z0 = Monomial::generator(&alg, 0);
        let (neg, sq) = alg.mul_monomials(&z0, &z0).unwrap();
        assert!(!neg);
        assert_eq!(sq.to_text(&alg), "z0^2");
        let (_, mult, rest) = alg.derive_monomial(&sq, 0).unwrap();
        assert_eq!((mult, rest), (2, z0.clone()));
        assert!(alg.mul_monomials(&sq, &z0).is_none());
    }

    #[test]
    fn enumeration_counts() {
        let alg = Algebra::bi_form(4);
        assert_eq!(alg.monomials_with_totals(&[2, 1]).len(), 6 * 4);
        assert_eq!(
            alg.monomials_with_totals(&[0, 0]),
            vec![Monomial::one(&alg)]
        );
        assert!(alg.monomials_with_totals(&[5, 0]).is_empty());
        let alg = Algebra::bundle(2, 3);
        assert_eq!(alg.monomials_with_totals(&[0, 0, 1]).len(), 3);
        assert!(alg.monomials_with_totals(&[0, 0, 2]).is_empty());
    }

    #[test]
    fn derivative_sign_counts_passed_factors() {
        let alg = Algebra::bi_form(3);
        let (_, m) = alg
            .mul_monomials(&Monomial::generator(&alg, 1), &Monomial::generator(&alg, 2))
            .unwrap();
        let (neg, mult, rest) = alg.derive_monomial(&m, 2).unwrap();
        assert!(neg);
        assert_eq!(mult, 1);
        assert_eq!(rest, Monomial::generator(&alg, 1));
        assert!(alg.derive_monomial(&m, 0).is_none());
    }
}
