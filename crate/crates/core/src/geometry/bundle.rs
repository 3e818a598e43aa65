use std::sync::Arc;

use super::covariant::check_algebra;
use super::{covariant_field, BiSector, GeometryCache, GeometryError};
use crate::algebra::{Accumulator, Algebra, GradedElement, SectorId};
use crate::expr::Expr;
use crate::grading::Degree;
use crate::operator::VectorField;

/// Sector of the fiber coordinates `z_a`, degree (1,1), in a bundle algebra.
pub const Z: SectorId = 2;

/// Local connection one-form `(A_m)_a^b` of a rank-`rank` bundle.
#[derive(Debug, Clone, PartialEq)]
pub struct BundleConnection {
    rank: usize,
    /// `a[m][a][b]` is `(A_m)_a^b`.
    a: Vec<Vec<Vec<Expr>>>,
}

impl BundleConnection {
    pub fn new(a: Vec<Vec<Vec<Expr>>>) -> Result<Self, GeometryError> {
        let rank = a.first().map_or(0, Vec::len);
        if rank == 0
            || a.iter()
                .any(|m| m.len() != rank || m.iter().any(|row| row.len() != rank))
        {
            return Err(GeometryError::Shape(
                "connection components must be dim x rank x rank".into(),
            ));
        }
        Ok(BundleConnection { rank, a })
    }

    /// The trivial connection `A = 0`.
    pub fn trivial(dim: usize, rank: usize) -> Self {
        BundleConnection {
            rank,
            a: vec![vec![vec![Expr::zero(); rank]; rank]; dim],
        }
    }

    /// The flat line-bundle connection `A_m = d_m phi`.
    pub fn pure_gauge(dim: usize, phi: &Expr) -> Self {
        BundleConnection {
            rank: 1,
            a: (0..dim).map(|m| vec![vec![phi.diff(m)]]).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    /// `(A_m)_a^b`.
    pub fn component(&self, m: usize, a: usize, b: usize) -> &Expr {
        &self.a[m][a][b]
    }

    /// `F_{nm, c}^b = d_n A_{m c}^b - d_m A_{n c}^b
    ///              + A_{m c}^a A_{n a}^b - A_{n c}^a A_{m a}^b`.
    pub fn curvature(&self, n: usize, m: usize, c: usize, b: usize) -> Expr {
        let mut parts = vec![self.a[m][c][b].diff(n), -self.a[n][c][b].diff(m)];
        for a in 0..self.rank {
            parts.push(&self.a[m][c][a] * &self.a[n][a][b]);
            parts.push(-(&self.a[n][c][a] * &self.a[m][a][b]));
        }
        Expr::sum(parts)
    }
}

/// `nabla_s + s^m (A_m)_a^b z_b d/dz_a`.
pub fn bundle_covariant_field(
    alg: &Arc<Algebra>,
    cache: &GeometryCache,
    conn: &BundleConnection,
    side: BiSector,
) -> Result<VectorField<Expr>, GeometryError> {
    check_algebra(alg, cache)?;
    let z = alg
        .sector(Z)
        .map_err(|_| GeometryError::Mismatch("bundle algebra needs a z sector".into()))?;
    if z.degree() != &Degree::new(&[1, 1]).expect("two bits") {
        return Err(GeometryError::Mismatch(
            "z sector must have degree (1,1)".into(),
        ));
    }
    if z.dim() != conn.rank() {
        return Err(GeometryError::RankMismatch {
            conn: conn.rank(),
            sector: z.dim(),
        });
    }
    if conn.dim() != cache.dim() {
        return Err(GeometryError::Mismatch(format!(
            "connection is over {} coordinates",
            conn.dim()
        )));
    }
    let mut x = covariant_field(alg, cache, side)?;
    for a in 0..conn.rank() {
        let mut acc = Accumulator::new(alg);
        for m in 0..cache.dim() {
            for b in 0..conn.rank() {
                let c = conn.component(m, a, b);
                if !c.is_zero() {
                    acc.extend(GradedElement::from_factors(
                        alg,
                        &[(side.id(), m), (Z, b)],
                        c.clone(),
                    )?);
                }
            }
        }
        let coeff = acc.finish();
        if !coeff.is_zero() {
            x.add_formal(Z, a, coeff)?;
        }
    }
    Ok(x)
}

pub fn bundle_covariant_de_rham(
    side: BiSector,
    omega: &GradedElement<Expr>,
    cache: &GeometryCache,
    conn: &BundleConnection,
) -> Result<GradedElement<Expr>, GeometryError> {
    Ok(bundle_covariant_field(omega.algebra(), cache, conn, side)?.apply(omega)?)
}
