mod common;

use std::collections::BTreeMap;

use common::max_over;
use zgraded::expr::Expr;
use zgraded::geometry::{catalog, covariant_de_rham, BiSector, Chart, GeometryCache};
use zgraded::harness::{run_suite, Suite, SuiteConfig};
use zgraded::multiform::{de_rham, THETA, XI};
use zgraded::{Algebra, BiForm};

fn polar_plane() -> Chart {
    let g = vec![
        vec![Expr::one(), Expr::zero()],
        vec![Expr::zero(), Expr::coord(0).pow(2)],
    ];
    Chart::new("polar", vec!["r".into(), "ph".into()], BTreeMap::new(), g)
        .unwrap()
        .with_validity(Expr::coord(0))
        .with_box(0, 0.5, 3.0)
        .with_box(1, 0.0, 6.0)
}

#[test]
fn parallel_one_forms_are_closed() {
    let chart = polar_plane();
    let cache = GeometryCache::new(&chart).unwrap();
    assert!(!cache.is_flat());
    let alg = Algebra::bi_form(2);
    let points = chart.sample_points(5, 32).unwrap();
    let (r, ph) = (Expr::coord(0), Expr::coord(1));
    // dx and dy written in polar coordinates
    let forms = [
        [ph.clone().cos(), -(r.clone() * ph.clone().sin())],
        [ph.clone().sin(), r.clone() * ph.clone().cos()],
    ];
    for [a, b] in forms {
        for sector in [THETA, XI] {
            let w = &BiForm::generator(&alg, sector, 0).unwrap().scale(&a)
                + &BiForm::generator(&alg, sector, 1).unwrap().scale(&b);
            let side = if sector == THETA {
                BiSector::Xi
            } else {
                BiSector::Theta
            };
            assert!(
                max_over(
                    &covariant_de_rham(side, &w, &cache).unwrap(),
                    &points,
                    chart.params()
                ) < 1e-12
            );
            let same_side = if sector == THETA {
                BiSector::Theta
            } else {
                BiSector::Xi
            };
            assert!(
                max_over(
                    &covariant_de_rham(same_side, &w, &cache).unwrap(),
                    &points,
                    chart.params()
                ) < 1e-12
            );
            assert!(max_over(&de_rham(sector, &w).unwrap(), &points, chart.params()) < 1e-12);
        }
    }
    // a closed form that is not parallel
    let w = BiForm::generator(&alg, THETA, 0).unwrap().scale(&r);
    assert!(max_over(&de_rham(THETA, &w).unwrap(), &points, chart.params()) < 1e-12);
    assert!(
        max_over(
            &covariant_de_rham(BiSector::Xi, &w, &cache).unwrap(),
            &points,
            chart.params()
        ) > 1e-3
    );
}

#[test]
fn every_catalog_chart_passes_every_suite() {
    let config = SuiteConfig {
        seed: 21,
        points: 16,
        tol: 1e-9,
        samples: 5,
    };
    for chart in catalog() {
        let report = run_suite(Suite::All, &chart, &config).unwrap();
        assert!(report.all_pass(), "{}", report.summary());
    }
}

#[test]
fn polar_plane_is_curved_chart_of_flat_space() {
    let chart = polar_plane();
    let cache = GeometryCache::new(&chart).unwrap();
    let points = chart.sample_points(9, 16).unwrap();
    for p in &points {
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    for d in 0..2 {
                        assert!(
                            cache
                                .riemann(a, b, c, d)
                                .eval(p, chart.params())
                                .unwrap()
                                .abs()
                                < 1e-12
                        );
                    }
                }
            }
        }
    }
    let report = run_suite(Suite::Geometry, &chart, &SuiteConfig::default()).unwrap();
    assert!(report.all_pass(), "{}", report.summary());
}
