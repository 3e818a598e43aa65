//! Graded vector fields: first-order differential operators
//! `X = X^mu d/dx^mu + X^A d/dq^A` with coefficients in the algebra.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{same_algebra, Accumulator, Algebra, AlgebraError, GradedElement, SectorId};
use crate::grading::Degree;
use crate::scalar::Differentiable;

/// A homogeneous derivation of the algebra, coefficients written on the
/// left of the partial derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField<C> {
    algebra: Arc<Algebra>,
    degree: Degree,
    /// Coefficients of the chart derivatives `d/dx^mu`.
    base: BTreeMap<usize, GradedElement<C>>,
    /// Coefficients of the formal derivatives, keyed by flattened position.
    formal: BTreeMap<usize, GradedElement<C>>,
}

impl<C: Differentiable> VectorField<C> {
    pub fn zero(algebra: &Arc<Algebra>, degree: Degree) -> Self {
        VectorField {
            algebra: algebra.clone(),
            degree,
            base: BTreeMap::new(),
            formal: BTreeMap::new(),
        }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn degree(&self) -> &Degree {
        &self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.base.is_empty() && self.formal.is_empty()
    }

    /// Adds `coeff * d/dx^mu`.
    pub fn add_base(&mut self, mu: usize, coeff: GradedElement<C>) -> Result<(), AlgebraError> {
        self.algebra.check_base(mu)?;
        insert(&mut self.base, mu, coeff);
        Ok(())
    }

    /// Adds `coeff * d/dq` for coordinate `index` of sector `sector`.
    pub fn add_formal(
        &mut self,
        sector: SectorId,
        index: usize,
        coeff: GradedElement<C>,
    ) -> Result<(), AlgebraError> {
        let p = self.algebra.position(sector, index)?;
        insert(&mut self.formal, p, coeff);
        Ok(())
    }

    pub fn base_coefficient(&self, mu: usize) -> Option<&GradedElement<C>> {
        self.base.get(&mu)
    }

    pub fn formal_coefficient(&self, sector: SectorId, index: usize) -> Option<&GradedElement<C>> {
        let p = self.algebra.position(sector, index).ok()?;
        self.formal.get(&p)
    }

    /// `X(omega)`.
    pub fn apply(&self, omega: &GradedElement<C>) -> Result<GradedElement<C>, AlgebraError> {
        if !same_algebra(&self.algebra, omega.algebra()) {
            return Err(AlgebraError::AlgebraMismatch);
        }
        let mut acc = Accumulator::new(&self.algebra);
        for (&mu, coeff) in &self.base {
            let d = omega.coordinate_derivative(mu)?;
            if !d.is_zero() {
                acc.extend(coeff.try_mul(&d)?);
            }
        }
        for (&p, coeff) in &self.formal {
            let d = omega.derivative_at(p);
            if !d.is_zero() {
                acc.extend(coeff.try_mul(&d)?);
            }
        }
        Ok(acc.finish())
    }

    /// The graded commutator `[X, Y] = X Y - (-1)^<x,y> Y X`, again a
    /// vector field.
    pub fn commutator(&self, other: &Self) -> Result<Self, AlgebraError> {
        if !same_algebra(&self.algebra, &other.algebra) {
            return Err(AlgebraError::AlgebraMismatch);
        }
        let degree = self.degree.add(&other.degree)?;
        let negative = self.degree.koszul_sign(&other.degree)? < 0;
        let mut out = VectorField::zero(&self.algebra, degree);
        let combine = |mine: &BTreeMap<usize, GradedElement<C>>,
                       theirs: &BTreeMap<usize, GradedElement<C>>|
         -> Result<BTreeMap<usize, GradedElement<C>>, AlgebraError> {
            let keys: std::collections::BTreeSet<usize> =
                mine.keys().chain(theirs.keys()).copied().collect();
            let mut res = BTreeMap::new();
            for k in keys {
                let mut acc = Accumulator::new(&self.algebra);
                if let Some(y) = theirs.get(&k) {
                    acc.extend(self.apply(y)?);
                }
                if let Some(x) = mine.get(&k) {
                    let yx = other.apply(x)?;
                    acc.extend(if negative { yx } else { -yx });
                }
                let c = acc.finish();
                if !c.is_zero() {
                    res.insert(k, c);
                }
            }
            Ok(res)
        };
        out.base = combine(&self.base, &other.base)?;
        out.formal = combine(&self.formal, &other.formal)?;
        Ok(out)
    }

    /// `X + Y` for fields of equal degree.
    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        if !same_algebra(&self.algebra, &other.algebra) {
            return Err(AlgebraError::AlgebraMismatch);
        }
        if self.degree != other.degree {
            return Err(AlgebraError::DegreeMismatch(
                self.degree.clone(),
                other.degree.clone(),
            ));
        }
        let mut out = self.clone();
        for (&k, c) in &other.base {
            insert(&mut out.base, k, c.clone());
        }
        for (&k, c) in &other.formal {
            insert(&mut out.formal, k, c.clone());
        }
        Ok(out)
    }

    /// Multiplies every coefficient by the scalar `c`.
    pub fn scale(&self, c: &C) -> Self {
        let scale = |m: &BTreeMap<usize, GradedElement<C>>| {
            m.iter()
                .map(|(&k, e)| (k, e.scale(c)))
                .filter(|(_, e)| !e.is_zero())
                .collect()
        };
        VectorField {
            algebra: self.algebra.clone(),
            degree: self.degree.clone(),
            base: scale(&self.base),
            formal: scale(&self.formal),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-C::one())
    }
}

fn insert<C: Differentiable>(
    map: &mut BTreeMap<usize, GradedElement<C>>,
    key: usize,
    coeff: GradedElement<C>,
) {
    let sum = match map.remove(&key) {
        Some(old) => &old + &coeff,
        None => coeff,
    };
    if !sum.is_zero() {
        map.insert(key, sum);
    }
}
