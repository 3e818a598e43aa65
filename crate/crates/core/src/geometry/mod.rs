//! Curved charts: Levi-Civita data, covariant de Rham derivatives,
//! curvature operators and bundle-valued bi-forms.

mod bundle;
mod cache;
mod catalog;
mod chart;
mod covariant;

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::expr::EvalError;
use crate::multiform::FormError;

pub use bundle::{bundle_covariant_de_rham, bundle_covariant_field, BundleConnection, Z};
pub use cache::GeometryCache;
pub use catalog::{
    catalog, catalog_chart, de_sitter_flat_slicing, minkowski, schwarzschild, two_sphere,
};
pub use chart::{Chart, DET_THRESHOLD};
pub use covariant::{
    bianchi_checks, covariant_de_rham, covariant_field, curvature_field, curvature_operator,
    metric_form, ricci_form, riemann_form, susy_variation, BiSector, BianchiForms, Curvature,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("{0}")]
    Shape(String),
    #[error("metric is not symmetric in entries ({i},{j}) and ({j},{i})")]
    NotSymmetric { i: usize, j: usize },
    #[error("metric determinant vanishes identically")]
    SingularMetric,
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
    #[error("no admissible sample points found on chart `{0}`")]
    NoAdmissiblePoints(String),
    #[error("algebra does not match the chart: {0}")]
    Mismatch(String),
    #[error("connection has rank {conn} but the z sector has dimension {sector}")]
    RankMismatch { conn: usize, sector: usize },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Form(#[from] FormError),
}
