use std::collections::BTreeMap;
use std::ops;
use std::sync::Arc;

use super::{same_algebra, Algebra, AlgebraError, Monomial, SectorId};
use crate::expr::{EvalError, Expr, SampleDomain, ZeroVerdict};
use crate::grading::Degree;
use crate::scalar::{Coefficient, Differentiable, Real};

/// A finite sum of canonical monomials with coefficients in `C`.
///
/// Zero coefficients are never stored, so two elements are equal iff their
/// term maps are equal.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedElement<C> {
    algebra: Arc<Algebra>,
    terms: BTreeMap<Monomial, C>,
}

/// Collects coefficient contributions per monomial and sums each coefficient
/// once at the end.
pub struct Accumulator<C> {
    algebra: Arc<Algebra>,
    parts: BTreeMap<Monomial, Vec<C>>,
}

impl<C: Coefficient> Accumulator<C> {
    pub fn new(algebra: &Arc<Algebra>) -> Self {
        Accumulator {
            algebra: algebra.clone(),
            parts: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, m: Monomial, c: C) {
        if !c.is_zero() {
            self.parts.entry(m).or_default().push(c);
        }
    }

    pub fn push_signed(&mut self, negative: bool, m: Monomial, c: C) {
        self.push(m, if negative { -c } else { c });
    }

    pub fn extend(&mut self, e: GradedElement<C>) {
        for (m, c) in e.terms {
            self.push(m, c);
        }
    }

    pub fn finish(self) -> GradedElement<C> {
        let terms = self
            .parts
            .into_iter()
            .filter_map(|(m, cs)| {
                let c = if cs.len() == 1 {
                    cs.into_iter().next().unwrap()
                } else {
                    C::sum_all(cs)
                };
                (!c.is_zero()).then_some((m, c))
            })
            .collect();
        GradedElement {
            algebra: self.algebra,
            terms,
        }
    }
}

impl<C: Coefficient> GradedElement<C> {
    pub fn zero(algebra: &Arc<Algebra>) -> Self {
        GradedElement {
            algebra: algebra.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// The degree-zero element `c`.
    pub fn scalar(algebra: &Arc<Algebra>, c: C) -> Self {
        Self::term(algebra, Monomial::one(algebra), c)
    }

    pub fn term(algebra: &Arc<Algebra>, m: Monomial, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        GradedElement {
            algebra: algebra.clone(),
            terms,
        }
    }

    /// The formal coordinate `index` of sector `sector`.
    pub fn generator(
        algebra: &Arc<Algebra>,
        sector: SectorId,
        index: usize,
    ) -> Result<Self, AlgebraError> {
        let p = algebra.position(sector, index)?;
        Ok(Self::term(
            algebra,
            Monomial::generator(algebra, p),
            C::one(),
        ))
    }

    /// `c` times the product of `factors` taken in the given order.
    pub fn from_factors(
        algebra: &Arc<Algebra>,
        factors: &[(SectorId, usize)],
        c: C,
    ) -> Result<Self, AlgebraError> {
        Ok(match algebra.normalize_monomial(factors)? {
            (0, _) | (_, None) => Self::zero(algebra),
            (s, Some(m)) => Self::term(algebra, m, if s < 0 { -c } else { c }),
        })
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, C)>>(
        algebra: &Arc<Algebra>,
        terms: I,
    ) -> Self {
        let mut acc = Accumulator::new(algebra);
        for (m, c) in terms {
            acc.push(m, c);
        }
        acc.finish()
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, C)> {
        self.terms.into_iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&C> {
        self.terms.get(m)
    }

    /// The degree shared by every term, if there is one. The zero element
    /// has no degree.
    pub fn homogeneous_degree(&self) -> Option<Degree> {
        let mut masks = self.terms.keys().map(|m| m.mask(&self.algebra));
        let first = masks.next()?;
        masks
            .all(|m| m == first)
            .then(|| self.algebra.degree_from_mask(first))
    }

    /// Terms whose total exponent in each sector equals `totals`.
    pub fn part(&self, totals: &[u32]) -> Self {
        self.filter(|m| m.sector_totals(&self.algebra) == totals)
    }

    pub fn filter<F: Fn(&Monomial) -> bool>(&self, keep: F) -> Self {
        GradedElement {
            algebra: self.algebra.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if same_algebra(&self.algebra, &other.algebra) {
            Ok(())
        } else {
            Err(AlgebraError::AlgebraMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut acc = Accumulator::new(&self.algebra);
        acc.extend(self.clone());
        acc.extend(other.clone());
        Ok(acc.finish())
    }

    /// The graded product.
    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut acc = Accumulator::new(&self.algebra);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((neg, m)) = self.algebra.mul_monomials(ma, mb) {
                    acc.push_signed(neg, m, ca.clone() * cb.clone());
                }
            }
        }
        Ok(acc.finish())
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map_coeffs(|x| x.clone() * c.clone())
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&C::from_integer(k))
    }

    /// Left derivative with respect to a formal coordinate.
    pub fn sector_derivative(&self, sector: SectorId, index: usize) -> Result<Self, AlgebraError> {
        let p = self.algebra.position(sector, index)?;
        Ok(self.derivative_at(p))
    }

    /// Left derivative with respect to the formal coordinate at a flattened
    /// position.
    pub fn derivative_at(&self, position: usize) -> Self {
        let mut acc = Accumulator::new(&self.algebra);
        for (m, c) in &self.terms {
            if let Some((neg, mult, rest)) = self.algebra.derive_monomial(m, position) {
                let c = if mult == 1 {
                    c.clone()
                } else {
                    c.clone() * C::from_integer(mult as i64)
                };
                acc.push_signed(neg, rest, c);
            }
        }
        acc.finish()
    }

    pub fn map_coeffs<F: Fn(&C) -> C>(&self, f: F) -> Self {
        self.try_map_coeffs::<C, std::convert::Infallible, _>(|c| Ok(f(c)))
            .unwrap()
    }

    /// Applies `f` to every coefficient, pruning zeros.
    pub fn try_map_coeffs<D, E, F>(&self, f: F) -> Result<GradedElement<D>, E>
    where
        D: Coefficient,
        F: Fn(&C) -> Result<D, E>,
    {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let d = f(c)?;
            if !d.is_zero() {
                terms.insert(m.clone(), d);
            }
        }
        Ok(GradedElement {
            algebra: self.algebra.clone(),
            terms,
        })
    }
}

impl<C: Differentiable> GradedElement<C> {
    /// Differentiates every coefficient with respect to chart coordinate
    /// `index`; monomials are unchanged.
    pub fn coordinate_derivative(&self, index: usize) -> Result<Self, AlgebraError> {
        self.algebra.check_base(index)?;
        Ok(self.map_coeffs(|c| c.partial(index)))
    }
}

impl GradedElement<Expr> {
    /// Evaluates every coefficient at a point.
    pub fn eval<F: Real + Coefficient>(
        &self,
        point: &[F],
        params: &BTreeMap<String, F>,
    ) -> Result<GradedElement<F>, EvalError> {
        self.try_map_coeffs(|c| c.eval(point, params))
    }

    /// Largest coefficient magnitude at a point.
    pub fn max_abs_at(
        &self,
        point: &[f64],
        params: &BTreeMap<String, f64>,
    ) -> Result<f64, EvalError> {
        Ok(self.eval(point, params)?.max_abs())
    }

    /// Combined zero test of all coefficients; the weakest verdict wins.
    pub fn zero_test(&self, domain: &SampleDomain) -> ZeroVerdict {
        let mut verdict = ZeroVerdict::Structural;
        for c in self.terms.values() {
            match c.zero_test(domain) {
                ZeroVerdict::NonZero => return ZeroVerdict::NonZero,
                ZeroVerdict::Inconclusive => verdict = ZeroVerdict::Inconclusive,
                ZeroVerdict::Sampled if verdict == ZeroVerdict::Structural => {
                    verdict = ZeroVerdict::Sampled
                }
                _ => {}
            }
        }
        verdict
    }

    pub fn simplify(&self) -> Self {
        self.map_coeffs(Expr::simplify)
    }
}

impl<F: Real + Coefficient> GradedElement<F> {
    pub fn max_abs(&self) -> F {
        self.terms.values().fold(F::zero(), |m, c| m.max(c.abs()))
    }
}

impl<C: Coefficient> ops::Add for &GradedElement<C> {
    type Output = GradedElement<C>;

    fn add(self, rhs: Self) -> GradedElement<C> {
        self.try_add(rhs)
            .expect("elements belong to different algebras")
    }
}

impl<C: Coefficient> ops::Add for GradedElement<C> {
    type Output = GradedElement<C>;

    fn add(self, rhs: Self) -> GradedElement<C> {
        &self + &rhs
    }
}

impl<C: Coefficient> ops::Neg for &GradedElement<C> {
    type Output = GradedElement<C>;

    fn neg(self) -> GradedElement<C> {
        self.map_coeffs(|c| -c.clone())
    }
}

impl<C: Coefficient> ops::Neg for GradedElement<C> {
    type Output = GradedElement<C>;

    fn neg(self) -> GradedElement<C> {
        -&self
    }
}

impl<C: Coefficient> ops::Sub for &GradedElement<C> {
    type Output = GradedElement<C>;

    fn sub(self, rhs: Self) -> GradedElement<C> {
        self + &(-rhs)
    }
}

impl<C: Coefficient> ops::Sub for GradedElement<C> {
    type Output = GradedElement<C>;

    fn sub(self, rhs: Self) -> GradedElement<C> {
        &self - &rhs
    }
}

impl<C: Coefficient> ops::Mul for &GradedElement<C> {
    type Output = GradedElement<C>;

    fn mul(self, rhs: Self) -> GradedElement<C> {
        self.try_mul(rhs)
            .expect("elements belong to different algebras")
    }
}

impl<C: Coefficient> ops::Mul for GradedElement<C> {
    type Output = GradedElement<C>;

    fn mul(self, rhs: Self) -> GradedElement<C> {
        &self * &rhs
    }
}
