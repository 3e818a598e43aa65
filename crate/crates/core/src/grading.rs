//! Degrees in Z2^n and the Koszul sign rule.
//!
//! Two homogeneous elements of degrees `a` and `b` commute up to the sign
//! `(-1)^<a,b>`, where `<a,b>` is the integer (not mod 2) dot product of the
//! bit vectors. Degrees are ordered lexicographically, so for `n = 2` the
//! order is `(0,0) < (0,1) < (1,0) < (1,1)`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradingError {
    #[error(
        "incompatible algebras: degree of length {left} combined with degree of length {right}"
    )]
    LengthMismatch { left: usize, right: usize },
    #[error("degree must have at least one component")]
    Empty,
    #[error("degree components must be 0 or 1, got {0}")]
    NotABit(u8),
}

/// An element of Z2^n, stored as `n` bits (leftmost first).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Degree {
    bits: Vec<bool>,
}

impl Degree {
    pub fn new(bits: &[u8]) -> Result<Self, GradingError> {
        if bits.is_empty() {
            return Err(GradingError::Empty);
        }
        let bits = bits
            .iter()
            .map(|&b| match b {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(GradingError::NotABit(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Degree { bits })
    }

    pub fn zero(n: usize) -> Self {
        assert!(n >= 1, "degree length must be positive");
        Degree {
            bits: vec![false; n],
        }
    }

    /// The unit vector with a single 1 in position `pos` (0 = leftmost).
    pub fn unit(n: usize, pos: usize) -> Self {
        let mut d = Self::zero(n);
        d.bits[pos] = true;
        d
    }

    /// Every degree of Z2^n in lexicographic order.
    pub fn all(n: usize) -> Vec<Degree> {
        (0..(1usize << n))
            .map(|k| Degree {
                bits: (0..n).map(|i| (k >> (n - 1 - i)) & 1 == 1).collect(),
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn bits(&self) -> impl Iterator<Item = u8> + '_ {
        self.bits.iter().map(|&b| b as u8)
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|b| !b)
    }

    /// Position of the single set bit, if this degree is a unit vector.
    pub fn unit_position(&self) -> Option<usize> {
        let mut ones = self.bits.iter().enumerate().filter(|(_, &b)| b);
        match (ones.next(), ones.next()) {
            (Some((i, _)), None) => Some(i),
            _ => None,
        }
    }

    fn check(&self, other: &Degree) -> Result<(), GradingError> {
        if self.len() != other.len() {
            return Err(GradingError::LengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(())
    }

    /// Componentwise sum mod 2.
    pub fn add(&self, other: &Degree) -> Result<Degree, GradingError> {
        self.check(other)?;
        Ok(Degree {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| a ^ b)
                .collect(),
        })
    }

    /// `sum_i a_i b_i` over the integers.
    pub fn scalar_product(&self, other: &Degree) -> Result<u32, GradingError> {
        self.check(other)?;
        Ok(self
            .bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| **a && **b)
            .count() as u32)
    }

    /// `(-1)^<a,b>` as `+1` or `-1`.
    pub fn koszul_sign(&self, other: &Degree) -> Result<i32, GradingError> {
        Ok(if self.scalar_product(other)? % 2 == 0 {
            1
        } else {
            -1
        })
    }

    /// Parity of `<a,b>`; `true` means the two degrees anticommute.
    pub(crate) fn anticommutes(&self, other: &Degree) -> bool {
        self.bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| **a && **b)
            .count()
            % 2
            == 1
    }

    /// A coordinate of this degree squares to zero iff `<a,a>` is odd.
    pub fn is_nilpotent(&self) -> bool {
        self.anticommutes(self)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, b) in self.bits().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, ")")
    }
}

pub fn degree_add(a: &Degree, b: &Degree) -> Result<Degree, GradingError> {
    a.add(b)
}

pub fn scalar_product(a: &Degree, b: &Degree) -> Result<u32, GradingError> {
    a.scalar_product(b)
}

pub fn koszul_sign(a: &Degree, b: &Degree) -> Result<i32, GradingError> {
    a.koszul_sign(b)
}

pub fn is_nilpotent_degree(a: &Degree) -> bool {
    a.is_nilpotent()
}
