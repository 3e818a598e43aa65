//! Line-oriented `key = value` spacetime definitions.
//!
//! ```text
//! # two-sphere of radius r
//! name = sphere
//! dim = 2
//! coords = th, ph
//! param.r = 2
//! g.0.0 = r^2
//! g.1.1 = r^2*sin(th)^2
//! valid = sin(th)
//! box.th = 0.3, 2.8
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::expr::{parse_with, Expr};
use crate::geometry::{Chart, GeometryError};

#[derive(Debug, Clone, PartialEq, Error)]
pub struct SpacetimeError {
    pub source_name: String,
    /// One-based; zero when the problem is not tied to a line.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for SpacetimeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}: {}", self.source_name, self.message)
        } else {
            write!(f, "{}:{}: {}", self.source_name, self.line, self.message)
        }
    }
}

/// A parsed spacetime file; expressions are kept as text with their line.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacetimeFile {
    pub name: String,
    pub dim: usize,
    pub coords: Vec<String>,
    pub params: BTreeMap<String, f64>,
    /// Upper-triangle metric entries `(i, j, text, line)` with `i <= j`.
    pub metric: Vec<(usize, usize, String, usize)>,
    pub validity: Option<(String, usize)>,
    pub boxes: BTreeMap<String, (f64, f64, usize)>,
}

struct Raw<'a> {
    line: usize,
    key: &'a str,
    value: &'a str,
}

impl SpacetimeFile {
    pub fn parse(text: &str, source_name: &str) -> Result<Self, SpacetimeError> {
        let err = |line: usize, message: String| SpacetimeError {
            source_name: source_name.to_string(),
            line,
            message,
        };

        let mut raw: Vec<Raw> = Vec::new();
        let mut seen: BTreeMap<String, usize> = BTreeMap::new();
        for (i, l) in text.lines().enumerate() {
            let line = i + 1;
            let l = l.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            let (key, value) = l
                .split_once('=')
                .ok_or_else(|| err(line, "expected `key = value`".into()))?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() {
                return Err(err(line, "empty key".into()));
            }
            if let Some(first) = seen.insert(key.to_string(), line) {
                return Err(err(
                    line,
                    format!("duplicate key `{key}` (first set on line {first})"),
                ));
            }
            raw.push(Raw { line, key, value });
        }

        let mut name = None;
        let mut dim = None;
        let mut coords: Option<(Vec<String>, usize)> = None;
        let mut params = BTreeMap::new();
        for r in &raw {
            match r.key {
                "name" => name = Some(r.value.to_string()),
                "dim" => {
                    let d: usize = r
                        .value
                        .parse()
                        .map_err(|_| err(r.line, format!("`{}` is not a dimension", r.value)))?;
                    dim = Some((d, r.line));
                }
                "coords" => {
                    let list: Vec<String> =
                        r.value.split(',').map(|s| s.trim().to_string()).collect();
                    if list.iter().any(|c| !is_identifier(c)) {
                        return Err(err(
                            r.line,
                            "coordinates must be a comma-separated list of identifiers".into(),
                        ));
                    }
                    coords = Some((list, r.line));
                }
                k => {
                    if let Some(p) = k.strip_prefix("param.") {
                        if !is_identifier(p) {
                            return Err(err(r.line, format!("`{p}` is not a parameter name")));
                        }
                        let v: f64 = r
                            .value
                            .parse()
                            .map_err(|_| err(r.line, format!("`{}` is not a number", r.value)))?;
                        params.insert(p.to_string(), v);
                    } else if !(k.starts_with("g.") || k.starts_with("box.") || k == "valid") {
                        return Err(err(r.line, format!("unknown key `{k}`")));
                    }
                }
            }
        }
        let name = name.ok_or_else(|| err(0, "missing `name`".into()))?;
        let (coords, coords_line) = coords.ok_or_else(|| err(0, "missing `coords`".into()))?;
        let mut unique = coords.clone();
        unique.sort();
        unique.dedup();
        if unique.len() != coords.len() {
            return Err(err(coords_line, "coordinate names must be distinct".into()));
        }
        if let Some(p) = params.keys().find(|p| coords.contains(p)) {
            return Err(err(
                coords_line,
                format!("`{p}` is both a coordinate and a parameter"),
            ));
        }
        let d = coords.len();
        if let Some((declared, line)) = dim {
            if declared != d {
                return Err(err(
                    line,
                    format!("dim = {declared} but {d} coordinates are listed"),
                ));
            }
        }

        let index = |s: &str, line: usize| -> Result<usize, SpacetimeError> {
            let i = s
                .parse::<usize>()
                .ok()
                .or_else(|| coords.iter().position(|c| c == s));
            match i {
                Some(i) if i < d => Ok(i),
                _ => Err(err(line, format!("metric index `{s}` is out of range"))),
            }
        };
        let mut metric: BTreeMap<(usize, usize), (String, usize)> = BTreeMap::new();
        let mut validity = None;
        let mut boxes = BTreeMap::new();
        for r in &raw {
            if let Some(rest) = r.key.strip_prefix("g.") {
                let (a, b) = rest
                    .split_once('.')
                    .ok_or_else(|| err(r.line, "metric keys look like `g.<i>.<j>`".into()))?;
                let (i, j) = (index(a, r.line)?, index(b, r.line)?);
                let key = (i.min(j), i.max(j));
                if let Some((other, first)) = metric.get(&key) {
                    if normalize(other) != normalize(r.value) {
                        return Err(err(
                            r.line,
                            format!("entry conflicts with its mirror on line {first}"),
                        ));
                    }
                    continue;
                }
                metric.insert(key, (r.value.to_string(), r.line));
            } else if let Some(c) = r.key.strip_prefix("box.") {
                if !coords.iter().any(|x| x == c) {
                    return Err(err(r.line, format!("box for unknown coordinate `{c}`")));
                }
                let bounds: Vec<f64> = r
                    .value
                    .split(',')
                    .map(|s| s.trim().parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| err(r.line, "a box is two numbers `lo, hi`".into()))?;
                match bounds[..] {
                    [lo, hi] if lo.is_finite() && hi.is_finite() && lo < hi => {
                        boxes.insert(c.to_string(), (lo, hi, r.line));
                    }
                    _ => {
                        return Err(err(
                            r.line,
                            "a box is two finite numbers `lo, hi` with lo < hi".into(),
                        ))
                    }
                }
            } else if r.key == "valid" {
                validity = Some((r.value.to_string(), r.line));
            }
        }
        let metric = metric
            .into_iter()
            .map(|((i, j), (text, line))| (i, j, text, line))
            .collect();
        let file = SpacetimeFile {
            name,
            dim: d,
            coords,
            params,
            metric,
            validity,
            boxes,
        };
        file.check_expressions(source_name)?;
        Ok(file)
    }

    pub fn read(path: &Path) -> Result<Self, SpacetimeError> {
        let source_name = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| SpacetimeError {
            source_name: source_name.clone(),
            line: 0,
            message: e.to_string(),
        })?;
        Self::parse(&text, &source_name)
    }

    fn param_names(&self) -> Vec<String> {
        self.params.keys().cloned().collect()
    }

    fn parse_expr(
        &self,
        text: &str,
        line: usize,
        source_name: &str,
    ) -> Result<Expr, SpacetimeError> {
        parse_with(text, &self.coords, &self.param_names()).map_err(|e| SpacetimeError {
            source_name: source_name.to_string(),
            line,
            message: format!("in `{text}`: {e}"),
        })
    }

    fn check_expressions(&self, source_name: &str) -> Result<(), SpacetimeError> {
        for (_, _, text, line) in &self.metric {
            self.parse_expr(text, *line, source_name)?;
        }
        if let Some((text, line)) = &self.validity {
            self.parse_expr(text, *line, source_name)?;
        }
        Ok(())
    }

    pub fn to_chart(&self) -> Result<Chart, GeometryError> {
        let d = self.dim;
        let mut g = vec![vec![Expr::zero(); d]; d];
        for (i, j, text, line) in &self.metric {
            let e = self
                .parse_expr(text, *line, &self.name)
                .map_err(|e| GeometryError::Shape(e.to_string()))?;
            g[*i][*j] = e.clone();
            g[*j][*i] = e;
        }
        let mut chart = Chart::new(&self.name, self.coords.clone(), self.params.clone(), g)?;
        if let Some((text, line)) = &self.validity {
            let e = self
                .parse_expr(text, *line, &self.name)
                .map_err(|e| GeometryError::Shape(e.to_string()))?;
            chart = chart.with_validity(e);
        }
        for (c, &(lo, hi, _)) in &self.boxes {
            let i = self
                .coords
                .iter()
                .position(|x| x == c)
                .expect("checked during parsing");
            chart = chart.with_box(i, lo, hi);
        }
        Ok(chart)
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn normalize(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::GeometryCache;

    const SPHERE: &str = "\
# round sphere
name = sphere
dim = 2
coords = th, ph
param.r = 2
g.0.0 = r^2
g.ph.ph = r^2*sin(th)^2
valid = sin(th)
box.th = 0.3, 2.8
box.ph = 0, 6
";

    #[test]
    fn sphere_round_trip() {
        let f = SpacetimeFile::parse(SPHERE, "sphere.st").unwrap();
        assert_eq!(f.coords, vec!["th", "ph"]);
        assert_eq!(f.params["r"], 2.0);
        let chart = f.to_chart().unwrap();
        assert_eq!(chart.boxes(), &[(0.3, 2.8), (0.0, 6.0)]);
        let cache = GeometryCache::new(&chart).unwrap();
        let s = cache
            .scalar_curvature()
            .eval(&[1.0, 0.5], chart.params())
            .unwrap();
        assert!((s - 0.5).abs() < 1e-12);
    }

    #[test]
    fn dim_mismatch_names_the_line() {
        let text = SPHERE.replace("dim = 2", "dim = 3");
        let e = SpacetimeFile::parse(&text, "bad.st").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.to_string().starts_with("bad.st:3: dim = 3"));
    }

    #[test]
    fn mirrored_entries() {
        let text = "name = m\ncoords = a, b\ng.0.1 = a\ng.1.0 = a\ng.0.0 = 1\ng.1.1 = 1\n";
        let f = SpacetimeFile::parse(text, "m").unwrap();
        let chart = f.to_chart().unwrap();
        assert_eq!(chart.metric()[1][0], Expr::coord(0));
        let bad = text.replace("g.1.0 = a", "g.1.0 = b");
        assert_eq!(SpacetimeFile::parse(&bad, "m").unwrap_err().line, 4);
    }

    #[test]
    fn errors() {
        let cases = [
            ("name = x\ncoords = a\ng.0.0 = q\n", 3),
            ("name = x\ncoords = a\ng.0.2 = 1\n", 3),
            ("name = x\ncoords = a\nfoo = 1\n", 3),
            ("name = x\ncoords = a\nbox.a = 2, 1\n", 3),
            ("name = x\ncoords = a\nparam.k = two\n", 3),
            ("name = x\nname = y\ncoords = a\n", 2),
            ("coords = a\n", 0),
            ("name = x\ncoords = a\njunk\n", 3),
        ];
        for (text, line) in cases {
            assert_eq!(
                SpacetimeFile::parse(text, "f").unwrap_err().line,
                line,
                "{text}"
            );
        }
    }
}
