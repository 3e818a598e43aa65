use std::collections::BTreeMap;

use super::Chart;
use crate::expr::{parse_with, Expr};

fn strings(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn diagonal(coords: &[String], params: &[String], entries: &[&str]) -> Vec<Vec<Expr>> {
    let d = entries.len();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    if i == j {
                        parse_with(entries[i], coords, params).expect("catalog entry parses")
                    } else {
                        Expr::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// Flat space-time of dimension `d` in mostly-plus signature.
pub fn minkowski(d: usize) -> Chart {
    let coords: Vec<String> = (0..d).map(|i| format!("x{i}")).collect();
    let mut entries = vec!["-1"];
    entries.extend(std::iter::repeat_n("1", d - 1));
    let g = diagonal(&coords, &[], &entries);
    let mut chart =
        Chart::new(&format!("minkowski{d}"), coords, BTreeMap::new(), g).expect("valid chart");
    for i in 0..d {
        chart = chart.with_box(i, -2.0, 2.0);
    }
    chart
}

/// Schwarzschild exterior with `M = 1`, sampled away from the horizon.
pub fn schwarzschild() -> Chart {
    let coords = strings(&["t", "r", "th", "ph"]);
    let params = strings(&["M"]);
    let g = diagonal(
        &coords,
        &params,
        &["-(1 - 2*M/r)", "1/(1 - 2*M/r)", "r^2", "r^2*sin(th)^2"],
    );
    Chart::new(
        "schwarzschild",
        coords.clone(),
        [("M".to_string(), 1.0)].into(),
        g,
    )
    .expect("valid chart")
    .with_validity(parse_with("r - 2*M", &coords, &params).unwrap())
    .with_box(0, -1.0, 1.0)
    .with_box(1, 3.0, 10.0)
    .with_box(2, 0.5, 2.6)
    .with_box(3, 0.0, 6.0)
}

/// de Sitter space in flat slicing, an Einstein manifold with `k = 3 H^2`.
pub fn de_sitter_flat_slicing() -> Chart {
    let coords = strings(&["t", "x", "y", "z"]);
    let params = strings(&["H"]);
    let a2 = "exp(2*H*t)";
    let g = diagonal(&coords, &params, &["-1", a2, a2, a2]);
    let mut chart = Chart::new(
        "de-sitter-flat-slicing",
        coords.clone(),
        [("H".to_string(), 0.7)].into(),
        g,
    )
    .expect("valid chart")
    .with_einstein_constant(parse_with("3*H^2", &coords, &params).unwrap());
    for i in 0..4 {
        chart = chart.with_box(i, -1.0, 1.0);
    }
    chart
}

/// The round two-sphere of radius `r`.
pub fn two_sphere() -> Chart {
    let coords = strings(&["th", "ph"]);
    let params = strings(&["r"]);
    let g = diagonal(&coords, &params, &["r^2", "r^2*sin(th)^2"]);
    Chart::new(
        "two-sphere",
        coords.clone(),
        [("r".to_string(), 2.0)].into(),
        g,
    )
    .expect("valid chart")
    .with_validity(parse_with("sin(th)", &coords, &params).unwrap())
    .with_box(0, 0.3, 2.8)
    .with_box(1, 0.0, 6.0)
    .with_einstein_constant(parse_with("1/r^2", &coords, &params).unwrap())
}

/// Every built-in chart.
pub fn catalog() -> Vec<Chart> {
    vec![
        minkowski(2),
        minkowski(4),
        minkowski(5),
        schwarzschild(),
        de_sitter_flat_slicing(),
        two_sphere(),
    ]
}

/// Looks up a built-in chart by name; `minkowski` means `minkowski4`.
pub fn catalog_chart(name: &str) -> Option<Chart> {
    let name = if name == "minkowski" {
        "minkowski4"
    } else {
        name
    };
    catalog().into_iter().find(|c| c.name() == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names() {
        let names: Vec<String> = catalog().iter().map(|c| c.name().to_string()).collect();
        assert!(names.contains(&"minkowski5".to_string()));
        assert!(names.contains(&"de-sitter-flat-slicing".to_string()));
        assert_eq!(catalog_chart("minkowski").unwrap().dim(), 4);
        assert!(catalog_chart("nowhere").is_none());
    }

    #[test]
    fn every_chart_samples() {
        for c in catalog() {
            assert_eq!(c.sample_points(3, 8).unwrap().len(), 8, "{}", c.name());
        }
    }
}
