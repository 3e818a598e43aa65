//! Named check suites over charts, spacetime files and JSON reports.

mod report;
mod spacetime;
mod suites;

use std::path::Path;

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::geometry::{catalog_chart, Chart, GeometryError};
use crate::multiform::FormError;

pub use report::{sampled_max, CheckMode, CheckRecord, CheckReport};
pub use spacetime::{SpacetimeError, SpacetimeFile};
pub use suites::{run_suite, Suite, SuiteConfig};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarnessError {
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("`{0}` is neither a catalog chart nor a readable file")]
    UnknownChart(String),
    #[error("suite `{suite}` cannot run on `{chart}`: {why}")]
    NotApplicable {
        suite: String,
        chart: String,
        why: String,
    },
    #[error(transparent)]
    Spacetime(#[from] SpacetimeError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A catalog chart by name, or else a spacetime file by path.
pub fn resolve_spacetime(arg: &str) -> Result<Chart, HarnessError> {
    if let Some(chart) = catalog_chart(arg) {
        return Ok(chart);
    }
    let path = Path::new(arg);
    if !path.is_file() {
        return Err(HarnessError::UnknownChart(arg.to_string()));
    }
    Ok(SpacetimeFile::read(path)?.to_chart()?)
}
