//! The free Z2^n-commutative algebra generated by formal coordinates over a
//! chart.
//!
//! Formal coordinates come in sectors. Every coordinate of a sector carries
//! the sector's degree; nilpotent sectors (odd self-pairing) anticommute with
//! themselves, the others commute and are truncated at a fixed total order.
//! Monomials are stored in canonical order: sectors by lexicographic degree,
//! indices ascending within a sector.

mod display;
mod element;
mod monomial;

use std::sync::Arc;

use thiserror::Error;

use crate::grading::{Degree, GradingError};

pub use element::{Accumulator, GradedElement};
pub use monomial::Monomial;

/// Position of a sector in an algebra's canonical sector order.
pub type SectorId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error("sector degree {0} is zero; formal coordinates must carry a nonzero degree")]
    ZeroDegree(Degree),
    #[error("two sectors share the degree {0}")]
    DuplicateSector(Degree),
    #[error("sector of degree {0} has dimension zero")]
    EmptySector(Degree),
    #[error("truncation order must be at least 1")]
    BadTruncation,
    #[error("at most 64 degree components are supported, got {0}")]
    TooManyComponents(usize),
    #[error("sector {sector} does not exist (the algebra has {count})")]
    NoSuchSector { sector: usize, count: usize },
    #[error("index {index} out of range for sector {sector} of dimension {dim}")]
    IndexOutOfRange {
        sector: usize,
        index: usize,
        dim: usize,
    },
    #[error("chart coordinate {index} out of range for a base of dimension {dim}")]
    CoordinateOutOfRange { index: usize, dim: usize },
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("degrees {0} and {1} differ")]
    DegreeMismatch(Degree, Degree),
}

/// One block of formal coordinates sharing a degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sector {
    degree: Degree,
    dim: usize,
    truncation: u32,
    prefix: Option<String>,
}

impl Sector {
    pub fn new(degree: Degree, dim: usize) -> Self {
        Sector {
            degree,
            dim,
            truncation: 1,
            prefix: None,
        }
    }

    /// Maximum total exponent kept in a non-nilpotent sector.
    pub fn with_truncation(mut self, order: u32) -> Self {
        self.truncation = order;
        self
    }

    /// Name prefix used when printing coordinates of this sector.
    pub fn with_prefix(mut self, prefix: &str) -> Self {
        self.prefix = Some(prefix.to_string());
        self
    }

    pub fn degree(&self) -> &Degree {
        &self.degree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn is_nilpotent(&self) -> bool {
        self.degree.is_nilpotent()
    }

    pub fn prefix(&self) -> &str {
        self.prefix.as_deref().unwrap_or("s")
    }
}

/// Sector layout of a graded algebra over a base of `base_dim` ordinary
/// coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Algebra {
    n: usize,
    base_dim: usize,
    sectors: Vec<Sector>,
    offsets: Vec<usize>,
    /// Degree bitmask of each flattened formal coordinate.
    masks: Vec<u64>,
    /// Sector of each flattened formal coordinate.
    owner: Vec<SectorId>,
}

fn mask_of(d: &Degree) -> u64 {
    d.bits()
        .enumerate()
        .fold(0, |m, (i, b)| m | ((b as u64) << i))
}

pub(crate) fn pairing_odd(a: u64, b: u64) -> bool {
    (a & b).count_ones() % 2 == 1
}

impl Algebra {
    pub fn new(
        n: usize,
        base_dim: usize,
        mut sectors: Vec<Sector>,
    ) -> Result<Arc<Self>, AlgebraError> {
        if n == 0 {
            return Err(GradingError::Empty.into());
        }
        if n > 64 {
            return Err(AlgebraError::TooManyComponents(n));
        }
        for s in &sectors {
            if s.degree.len() != n {
                return Err(GradingError::LengthMismatch {
                    left: n,
                    right: s.degree.len(),
                }
                .into());
            }
            if s.degree.is_zero() {
                return Err(AlgebraError::ZeroDegree(s.degree.clone()));
            }
            if s.dim == 0 {
                return Err(AlgebraError::EmptySector(s.degree.clone()));
            }
            if s.truncation == 0 {
                return Err(AlgebraError::BadTruncation);
            }
        }
        sectors.sort_by(|a, b| a.degree.cmp(&b.degree));
        for w in sectors.windows(2) {
            if w[0].degree == w[1].degree {
                return Err(AlgebraError::DuplicateSector(w[0].degree.clone()));
            }
        }
        let default_names = n == 2;
        for (k, s) in sectors.iter_mut().enumerate() {
            if s.prefix.is_none() {
                let bits: Vec<u8> = s.degree.bits().collect();
                s.prefix = Some(match (default_names, bits.as_slice()) {
                    (true, [0, 1]) => "xi".to_string(),
                    (true, [1, 0]) => "th".to_string(),
                    (true, [1, 1]) => "z".to_string(),
                    _ => format!("s{k}_"),
                });
            }
        }
        let mut offsets = Vec::with_capacity(sectors.len());
        let mut masks = Vec::new();
        let mut owner = Vec::new();
        for (k, s) in sectors.iter().enumerate() {
            offsets.push(masks.len());
            for _ in 0..s.dim {
                masks.push(mask_of(&s.degree));
                owner.push(k);
            }
        }
        Ok(Arc::new(Algebra {
            n,
            base_dim,
            sectors,
            offsets,
            masks,
            owner,
        }))
    }

    /// Bi-forms over a `dim`-dimensional chart: sectors `xi` of degree
    /// (0,1) and `th` of degree (1,0), each of dimension `dim`.
    pub fn bi_form(dim: usize) -> Arc<Self> {
        Self::multi_form(2, dim)
    }

    /// Multi-forms: one nilpotent sector per unit degree of Z2^n, each of
    /// dimension `dim`.
    pub fn multi_form(n: usize, dim: usize) -> Arc<Self> {
        let sectors = (0..n)
            .map(|k| Sector::new(Degree::unit(n, k), dim))
            .collect();
        Self::new(n, dim, sectors).expect("unit sectors are valid")
    }

    /// Bi-forms with values in a rank-`rank` bundle: adds a sector `z` of
    /// degree (1,1), truncated at linear order.
    pub fn bundle(dim: usize, rank: usize) -> Arc<Self> {
        let sectors = vec![
            Sector::new(Degree::unit(2, 1), dim),
            Sector::new(Degree::unit(2, 0), dim),
            Sector::new(Degree::new(&[1, 1]).unwrap(), rank),
        ];
        Self::new(2, dim, sectors).expect("bundle sectors are valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn sectors(&self) -> &[Sector] {
        &self.sectors
    }

    pub fn sector(&self, id: SectorId) -> Result<&Sector, AlgebraError> {
        self.sectors.get(id).ok_or(AlgebraError::NoSuchSector {
            sector: id,
            count: self.sectors.len(),
        })
    }

    pub fn sector_of(&self, degree: &Degree) -> Option<SectorId> {
        self.sectors.iter().position(|s| &s.degree == degree)
    }

    /// Total number of formal coordinates.
    pub fn formal_dim(&self) -> usize {
        self.masks.len()
    }

    /// Flattened position of coordinate `index` of sector `sector`.
    pub fn position(&self, sector: SectorId, index: usize) -> Result<usize, AlgebraError> {
        let s = self.sector(sector)?;
        if index >= s.dim {
            return Err(AlgebraError::IndexOutOfRange {
                sector,
                index,
                dim: s.dim,
            });
        }
        Ok(self.offsets[sector] + index)
    }

    /// Sector and in-sector index of a flattened position.
    pub fn locate(&self, position: usize) -> (SectorId, usize) {
        let s = self.owner[position];
        (s, position - self.offsets[s])
    }

    pub(crate) fn mask(&self, position: usize) -> u64 {
        self.masks[position]
    }

    pub(crate) fn degree_from_mask(&self, mask: u64) -> Degree {
        let bits: Vec<u8> = (0..self.n).map(|i| ((mask >> i) & 1) as u8).collect();
        Degree::new(&bits).expect("mask has n bits")
    }

    pub(crate) fn is_nilpotent_position(&self, position: usize) -> bool {
        pairing_odd(self.masks[position], self.masks[position])
    }

    /// Printed name of a formal coordinate.
    pub fn coordinate_name(&self, position: usize) -> String {
        let (s, i) = self.locate(position);
        format!("{}{}", self.sectors[s].prefix(), i)
    }

    pub(crate) fn check_base(&self, index: usize) -> Result<(), AlgebraError> {
        if index >= self.base_dim {
            return Err(AlgebraError::CoordinateOutOfRange {
                index,
                dim: self.base_dim,
            });
        }
        Ok(())
    }

    /// Sorts `factors` into canonical order, accumulating the Koszul sign.
    ///
    /// Returns sign 0 (and no monomial) when a nilpotent coordinate repeats or
    /// a truncated sector overflows.
    pub fn normalize_monomial(
        &self,
        factors: &[(SectorId, usize)],
    ) -> Result<(i32, Option<Monomial>), AlgebraError> {
        let mut acc = Monomial::one(self);
        let mut negative = false;
        for &(s, i) in factors {
            let pos = self.position(s, i)?;
            match self.mul_monomials(&acc, &Monomial::generator(self, pos)) {
                Some((neg, m)) => {
                    negative ^= neg;
                    acc = m;
                }
                None => return Ok((0, None)),
            }
        }
        Ok((if negative { -1 } else { 1 }, Some(acc)))
    }
}

/// Two algebras are compatible if they are the same instance or equal.
pub(crate) fn same_algebra(a: &Arc<Algebra>, b: &Arc<Algebra>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi() -> Arc<Algebra> {
        Algebra::bi_form(3)
    }

    #[test]
    fn sectors_are_sorted_by_degree() {
        let alg = Algebra::bundle(2, 1);
        let names: Vec<_> = alg
            .sectors()
            .iter()
            .map(|s| s.prefix().to_string())
            .collect();
        assert_eq!(names, ["xi", "th", "z"]);
        assert!(alg.sectors()[0].is_nilpotent());
        assert!(!alg.sectors()[2].is_nilpotent());
    }

    #[test]
    fn normalize_examples() {
        let alg = bi();
        let (xi, th) = (0, 1);
        let (sign, m) = alg.normalize_monomial(&[(xi, 2), (xi, 1)]).unwrap();
        assert_eq!(sign, -1);
        assert_eq!(m.unwrap().to_text(&alg), "xi1*xi2");
        let (sign, m) = alg.normalize_monomial(&[(th, 1), (xi, 1)]).unwrap();
        assert_eq!(sign, 1);
        assert_eq!(m.unwrap().to_text(&alg), "xi1*th1");
        assert_eq!(
            alg.normalize_monomial(&[(xi, 1), (xi, 1)]).unwrap(),
            (0, None)
        );
    }

    #[test]
    fn invalid_layouts() {
        let d = Degree::new(&[0, 1]).unwrap();
        assert_eq!(
            Algebra::new(
                2,
                2,
                vec![Sector::new(d.clone(), 2), Sector::new(d.clone(), 1)]
            ),
            Err(AlgebraError::DuplicateSector(d.clone()))
        );
        assert!(matches!(
            Algebra::new(2, 2, vec![Sector::new(Degree::zero(2), 2)]),
            Err(AlgebraError::ZeroDegree(_))
        ));
        assert!(matches!(
            Algebra::new(3, 2, vec![Sector::new(d, 2)]),
            Err(AlgebraError::Grading(GradingError::LengthMismatch { .. }))
        ));
        assert!(matches!(
            bi().position(0, 3),
            Err(AlgebraError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn general_prefixes() {
        let alg = Algebra::multi_form(3, 2);
        let names: Vec<_> = (0..alg.formal_dim())
            .map(|p| alg.coordinate_name(p))
            .collect();
        assert_eq!(names, ["s0_0", "s0_1", "s1_0", "s1_1", "s2_0", "s2_1"]);
        assert_eq!(alg.sectors()[0].degree().to_string(), "(0,0,1)");
    }
}
