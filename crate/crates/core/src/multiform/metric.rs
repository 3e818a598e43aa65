use std::sync::Arc;

use super::{check_form_sector, FormError, THETA, XI};
use crate::algebra::{Accumulator, Algebra, GradedElement};
use crate::scalar::Coefficient;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Signature {
    /// `(-, +, +, ...)`
    #[default]
    MostlyPlus,
    /// `(+, -, -, ...)`
    MostlyMinus,
}

/// The flat metric as the (1,1)-form `eta = th^mu xi^nu eta_{nu mu}`
/// together with its inverse contraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinkowskiMetricForm {
    diag: Vec<i64>,
    signature: Signature,
}

impl MinkowskiMetricForm {
    pub fn new(dim: usize, signature: Signature) -> Self {
        let time = match signature {
            Signature::MostlyPlus => -1,
            Signature::MostlyMinus => 1,
        };
        let diag = (0..dim)
            .map(|mu| if mu == 0 { time } else { -time })
            .collect();
        MinkowskiMetricForm { diag, signature }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    /// `eta_{mu nu}`; diagonal, so it is also its own inverse.
    pub fn component(&self, mu: usize, nu: usize) -> i64 {
        if mu == nu {
            self.diag[mu]
        } else {
            0
        }
    }

    fn check(&self, alg: &Algebra) -> Result<(), FormError> {
        if alg.n() != 2 || alg.base_dim() != self.dim() {
            return Err(FormError::Shape {
                expected: format!("a bi-form algebra of dimension {}", self.dim()),
            });
        }
        check_form_sector(alg, XI)?;
        check_form_sector(alg, THETA)?;
        Ok(())
    }

    /// `th^mu xi^nu eta_{nu mu}`.
    pub fn form<C: Coefficient>(&self, alg: &Arc<Algebra>) -> Result<GradedElement<C>, FormError> {
        self.check(alg)?;
        let mut acc = Accumulator::new(alg);
        for mu in 0..self.dim() {
            let t = GradedElement::<C>::from_factors(
                alg,
                &[(THETA, mu), (XI, mu)],
                C::from_integer(self.diag[mu]),
            )?;
            acc.extend(t);
        }
        Ok(acc.finish())
    }

    /// `eta^{mu nu} d/dxi^nu d/dth^mu`, the th-derivative acting first.
    pub fn inverse_apply<C: Coefficient>(
        &self,
        omega: &GradedElement<C>,
    ) -> Result<GradedElement<C>, FormError> {
        let alg = omega.algebra();
        self.check(alg)?;
        let mut acc = Accumulator::new(alg);
        for mu in 0..self.dim() {
            let inner = omega.sector_derivative(THETA, mu)?;
            if inner.is_zero() {
                continue;
            }
            let outer = inner.sector_derivative(XI, mu)?;
            acc.extend(outer.scale_int(self.diag[mu]));
        }
        Ok(acc.finish())
    }
}
