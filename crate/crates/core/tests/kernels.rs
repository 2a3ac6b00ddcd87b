use std::f64::consts::{LN_2, PI, TAU};

use conevac_core::kernels::{
    tbar_cone, tbar_dowker, tbar_minkowski, tbar_modesum_4d, tbar_periodic_line, tbar_wedge_full,
    tbar_wedge_renormalized, ModeSumConfig,
};
use conevac_core::{tbar, u_formulas, u_of_pair, BoundaryCondition, Error, Geometry, KernelForm, PointPair};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn u_at_simple_points() {
    let p = PointPair::new(0.0, 2.0, 1.0, 0.0, 0.0, 0.0, 0.0).unwrap();
    assert!(rel(u_of_pair(&p).unwrap().u, LN_2) < 1e-15);
    let p = PointPair::split_in_time(1.0, 1.0, 0.0, 0.0).unwrap();
    assert!(rel(u_of_pair(&p).unwrap().cosh_u, 1.5) < 1e-15);
    for (t, r, rp) in [(0.0, 2.0, 1.0), (10.0, 1.0, 1.0)] {
        let f = u_formulas(&PointPair::new(t, r, rp, 0.0, 0.0, 0.0, 0.0).unwrap()).unwrap();
        assert!(f.max_discrepancy() <= 1e-12);
    }
    let f = u_formulas(&PointPair::new(0.0, 1.0, 1.0, 0.0, 0.0, 1e-6, 0.0).unwrap()).unwrap();
    assert!(rel(f.half_angle, f.sinh_form) <= 1e-9);
    assert!(f.ill_conditioned().contains(&"log_form"));
}

#[test]
fn minkowski_values() {
    let p = PointPair::split_in_time(1.0, 1.0, 0.0, 0.0).unwrap();
    assert!(rel(tbar_minkowski(&p).unwrap(), -1.0 / (2.0 * PI * PI)) < 1e-15);
    let p = PointPair::new(1.0, 1.0, 1.0, PI, 0.0, 0.0, 0.0).unwrap();
    assert!(rel(tbar_minkowski(&p).unwrap(), -1.0 / (10.0 * PI * PI)) < 1e-15);
}

#[test]
fn dowker_value_and_parity() {
    let p = PointPair::new(0.0, 2.0, 1.0, 0.0, 0.0, 0.0, 0.0).unwrap();
    let v = tbar_dowker(&p).unwrap();
    assert!(rel(v, -1.0 / (2.0 * PI * PI * 2.0 * 0.75 * LN_2)) < 1e-14);
    let a = PointPair::new(0.5, 1.0, 1.3, 0.7, 0.0, 0.0, 0.0).unwrap();
    let b = PointPair::new(0.5, 1.0, 1.3, -0.7, 0.0, 0.0, 0.0).unwrap();
    assert_eq!(tbar_dowker(&a).unwrap(), tbar_dowker(&b).unwrap());
}

#[test]
fn coincidence_is_an_error() {
    let p = PointPair::new(0.0, 1.0, 1.0, 0.3, 0.3, 0.0, 0.0).unwrap();
    assert!(matches!(tbar_minkowski(&p), Err(Error::Singular(_))));
    assert!(tbar_cone(&p, PI).is_err());
    assert!(tbar_dowker(&p).is_err());
    // an image of the source on the cone is a coincidence too
    let q = PointPair::new(0.0, 1.0, 1.0, 0.3 + PI, 0.3, 0.0, 0.0).unwrap();
    assert!(tbar_cone(&q, PI).is_err());
    // away from the image point the cone is finite even at u = 0
    let q = PointPair::new(0.0, 1.0, 1.0, 1.3, 0.3, 0.0, 0.0).unwrap();
    assert!(tbar_cone(&q, PI).unwrap().is_finite());
}

#[test]
fn invalid_inputs_are_domain_errors() {
    assert!(matches!(PointPair::new(1.0, 1.0, 1.0, f64::NAN, 0.0, 0.0, 0.0), Err(Error::Domain(_))));
    assert!(matches!(PointPair::new(1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0), Err(Error::Domain(_))));
    let p = PointPair::split_in_time(1.0, 1.0, 0.0, 0.0).unwrap();
    assert!(tbar_cone(&p, -1.0).is_err());
    assert!(tbar_periodic_line(&p, 0.0).is_err());
    let outside = PointPair::new(1.0, 1.0, 1.0, 2.0, 0.5, 0.0, 0.0).unwrap();
    assert!(tbar_wedge_renormalized(&outside, 1.0, BoundaryCondition::Dirichlet).is_err());
    let g = Geometry::Wedge {
        theta0: 1.0,
        bc: BoundaryCondition::Dirichlet,
    };
    assert!(tbar(&g, &outside, KernelForm::Renormalized).is_err());
}

#[test]
fn flat_cone_and_large_angle() {
    let p = PointPair::split_in_time(1.0, 1.0, 0.0, 0.0).unwrap();
    assert!(rel(tbar_cone(&p, TAU).unwrap(), tbar_minkowski(&p).unwrap()) < 1e-15);
    assert!(rel(tbar_cone(&p, 1e4 * PI).unwrap(), tbar_dowker(&p).unwrap()) < 1e-6);
}

#[test]
fn dirichlet_wedge_vanishes_on_plates() {
    let theta0 = 1.1;
    let interior = PointPair::new(0.3, 1.0, 1.2, 0.5, 0.4, 0.0, 0.1).unwrap();
    let scale = tbar_wedge_full(&interior, theta0, BoundaryCondition::Dirichlet).unwrap().abs();
    for edge in [0.0, theta0] {
        let p = PointPair { theta: edge, ..interior };
        let v = tbar_wedge_full(&p, theta0, BoundaryCondition::Dirichlet).unwrap();
        assert!(v.abs() <= 1e-10 * scale, "{v}");
    }
}

#[test]
fn long_period_is_flat() {
    let p = PointPair::new(0.5, 1.0, 1.4, 0.2, 0.0, 0.3, 0.0).unwrap();
    assert!(rel(tbar_periodic_line(&p, 1e6).unwrap(), tbar_minkowski(&p).unwrap()) < 1e-10);
}

#[test]
fn mode_sum_reproduces_flat_space() {
    let p = PointPair::split_in_time(1.0, 1.0, 0.0, 0.0).unwrap();
    let m = tbar_modesum_4d(&p, TAU, ModeSumConfig::default()).unwrap();
    assert!(rel(m.value, tbar_minkowski(&p).unwrap()) < 1e-6);
    assert_eq!(m.terms.len(), 41);
}
