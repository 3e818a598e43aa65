use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::GeometryError;
use crate::expr::{Expr, SampleDomain};

/// Points whose metric determinant is smaller than this are rejected.
pub const DET_THRESHOLD: f64 = 1e-10;

/// A single coordinate chart with a symbolic metric.
#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    name: String,
    coords: Vec<String>,
    params: BTreeMap<String, f64>,
    metric: Vec<Vec<Expr>>,
    validity: Option<Expr>,
    boxes: Vec<(f64, f64)>,
    einstein: Option<Expr>,
}

impl Chart {
    /// Validates shape and symmetry of `metric`. Every coordinate samples
    /// from `[-1, 1]` until a box is set.
    pub fn new(
        name: &str,
        coords: Vec<String>,
        params: BTreeMap<String, f64>,
        metric: Vec<Vec<Expr>>,
    ) -> Result<Self, GeometryError> {
        let d = coords.len();
        if d == 0 {
            return Err(GeometryError::Shape(
                "a chart needs at least one coordinate".into(),
            ));
        }
        if metric.len() != d || metric.iter().any(|row| row.len() != d) {
            return Err(GeometryError::Shape(format!("metric must be {d}x{d}")));
        }
        for i in 0..d {
            for j in i + 1..d {
                if metric[i][j] != metric[j][i] {
                    return Err(GeometryError::NotSymmetric { i, j });
                }
            }
        }
        for (i, row) in metric.iter().enumerate() {
            for (j, g) in row.iter().enumerate() {
                if g.max_coord().is_some_and(|c| c >= d) {
                    return Err(GeometryError::Shape(format!(
                        "metric entry ({i},{j}) uses an unknown coordinate"
                    )));
                }
                if let Some(p) = g.params().into_iter().find(|p| !params.contains_key(p)) {
                    return Err(GeometryError::UnknownParameter(p));
                }
            }
        }
        Ok(Chart {
            name: name.to_string(),
            boxes: vec![(-1.0, 1.0); d],
            coords,
            params,
            metric,
            validity: None,
            einstein: None,
        })
    }

    /// Points must make `predicate` positive.
    pub fn with_validity(mut self, predicate: Expr) -> Self {
        self.validity = Some(predicate);
        self
    }

    pub fn with_box(mut self, coord: usize, lo: f64, hi: f64) -> Self {
        self.boxes[coord] = (lo, hi);
        self
    }

    /// Declares the chart an Einstein manifold, `Ric = k g`.
    pub fn with_einstein_constant(mut self, k: Expr) -> Self {
        self.einstein = Some(k);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    pub fn param_names(&self) -> Vec<String> {
        self.params.keys().cloned().collect()
    }

    pub fn metric(&self) -> &[Vec<Expr>] {
        &self.metric
    }

    pub fn validity(&self) -> Option<&Expr> {
        self.validity.as_ref()
    }

    pub fn boxes(&self) -> &[(f64, f64)] {
        &self.boxes
    }

    pub fn einstein_constant(&self) -> Option<&Expr> {
        self.einstein.as_ref()
    }

    /// Whether every metric entry is a constant.
    pub fn is_flat_constant(&self) -> bool {
        self.metric
            .iter()
            .flatten()
            .all(|g| g.as_rational().is_some())
    }

    /// Numeric metric at a point.
    pub fn metric_at(&self, point: &[f64]) -> Result<Vec<Vec<f64>>, GeometryError> {
        self.metric
            .iter()
            .map(|row| {
                row.iter()
                    .map(|g| g.eval(point, &self.params).map_err(GeometryError::from))
                    .collect()
            })
            .collect()
    }

    fn admissible(&self, point: &[f64]) -> bool {
        if let Some(v) = &self.validity {
            match v.eval(point, &self.params) {
                Ok(x) if x > 0.0 => {}
                _ => return false,
            }
        }
        match self.metric_at(point) {
            Ok(g) => det_f64(g).abs() > DET_THRESHOLD,
            Err(_) => false,
        }
    }

    /// `count` deterministic admissible points drawn uniformly from the box.
    pub fn sample_points(&self, seed: u64, count: usize) -> Result<Vec<Vec<f64>>, GeometryError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(count);
        let mut attempts = 0;
        while out.len() < count {
            attempts += 1;
            if attempts > 200 * count.max(1) {
                return Err(GeometryError::NoAdmissiblePoints(self.name.clone()));
            }
            let p: Vec<f64> = self
                .boxes
                .iter()
                .map(|&(lo, hi)| rng.random_range(lo..=hi))
                .collect();
            if self.admissible(&p) {
                out.push(p);
            }
        }
        Ok(out)
    }

    /// Sampling domain for zero tests of expressions on this chart.
    pub fn sample_domain(&self, seed: u64) -> SampleDomain {
        SampleDomain {
            boxes: self.boxes.clone(),
            params: self.params.clone(),
            seed,
        }
    }
}

/// Determinant by Gaussian elimination with partial pivoting.
pub(crate) fn det_f64(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .expect("non-empty range");
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_with;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn asymmetric_metric_is_rejected() {
        let g = vec![
            vec![Expr::one(), Expr::coord(0)],
            vec![Expr::zero(), Expr::one()],
        ];
        assert_eq!(
            Chart::new("bad", names(&["a", "b"]), BTreeMap::new(), g),
            Err(GeometryError::NotSymmetric { i: 0, j: 1 })
        );
    }

    #[test]
    fn sampling_respects_validity() {
        let coords = names(&["t", "r"]);
        let params: BTreeMap<String, f64> = [("M".to_string(), 1.0)].into();
        let p = names(&["M"]);
        let g00 = parse_with("-(1 - 2*M/r)", &coords, &p).unwrap();
        let g11 = parse_with("1/(1 - 2*M/r)", &coords, &p).unwrap();
        let chart = Chart::new(
            "s",
            coords.clone(),
            params,
            vec![vec![g00, Expr::zero()], vec![Expr::zero(), g11]],
        )
        .unwrap()
        .with_box(1, 1.0, 4.0)
        .with_validity(parse_with("r - 2*M", &coords, &p).unwrap());
        let pts = chart.sample_points(1, 20).unwrap();
        assert!(pts.iter().all(|x| x[1] > 2.0));
        assert_eq!(pts, chart.sample_points(1, 20).unwrap());
    }

    #[test]
    fn determinant() {
        assert_eq!(det_f64(vec![vec![0.0, 2.0], vec![3.0, 0.0]]), -6.0);
    }
}
