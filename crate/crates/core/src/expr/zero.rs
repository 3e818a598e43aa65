use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Expr;

pub const ZERO_TEST_POINTS: usize = 16;
pub const ZERO_TEST_TOLERANCE: f64 = 1e-10;

/// Where sampled zero tests draw their points from.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleDomain {
    pub boxes: Vec<(f64, f64)>,
    pub params: BTreeMap<String, f64>,
    pub seed: u64,
}

impl SampleDomain {
    /// The box `[lo, hi]^dim` with no parameters.
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Self {
        SampleDomain {
            boxes: vec![(lo, hi); dim],
            params: BTreeMap::new(),
            seed: 0x5eed,
        }
    }

    pub fn with_params(mut self, params: BTreeMap<String, f64>) -> Self {
        self.params = params;
        self
    }

    pub fn points(&self, count: usize) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..count)
            .map(|_| {
                self.boxes
                    .iter()
                    .map(|&(lo, hi)| rng.random_range(lo..=hi))
                    .collect()
            })
            .collect()
    }
}

/// Which path decided a zero test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroVerdict {
    /// The canonical form is the literal zero.
    Structural,
    /// Every sample was below tolerance.
    Sampled,
    NonZero,
    /// No admissible sample point could be found.
    Inconclusive,
}

impl ZeroVerdict {
    pub fn is_zero(self) -> bool {
        matches!(self, ZeroVerdict::Structural | ZeroVerdict::Sampled)
    }
}

impl Expr {
    /// Structural test first, then pointwise sampling.
    pub fn zero_test(&self, domain: &SampleDomain) -> ZeroVerdict {
        if self.is_zero() {
            return ZeroVerdict::Structural;
        }
        if self.as_rational().is_some() {
            return ZeroVerdict::NonZero;
        }
        let mut accepted = 0;
        for p in domain.points(ZERO_TEST_POINTS * 4) {
            match self.eval(&p, &domain.params) {
                Ok(v) if v.is_finite() => {
                    if v.abs() >= ZERO_TEST_TOLERANCE {
                        return ZeroVerdict::NonZero;
                    }
                    accepted += 1;
                    if accepted == ZERO_TEST_POINTS {
                        return ZeroVerdict::Sampled;
                    }
                }
                _ => continue,
            }
        }
        ZeroVerdict::Inconclusive
    }
}
