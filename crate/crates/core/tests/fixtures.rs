//! Special functions and t -> 0 stresses against high-precision tables
//! produced by `fixtures/gen_fixtures.py`.

use std::f64::consts::PI;
use std::path::PathBuf;

use conevac_core::special::{bessel_j, bessel_k0, legendre_q_minus_half};
use conevac_core::{stress_t0, Coupling, FieldPoint, Geometry, Ladder};

fn table(name: &str) -> Vec<Vec<String>> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    text.lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap_or_else(|_| panic!("bad number {s}"))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn bessel_j_table() {
    let rows = table("bessel_j.csv");
    assert!(rows.len() > 100);
    for row in rows {
        let (nu, x, want) = (num(&row[0]), num(&row[1]), num(&row[2]));
        let got = bessel_j(nu, x).unwrap();
        // near a zero only accuracy relative to the oscillation amplitude is meaningful
        let err = (got - want).abs() / want.abs().max(0.1 * (2.0 / (PI * x)).sqrt().min(1.0));
        assert!(err < 1e-11, "J_{nu}({x}) = {got}, want {want}, err {err:e}");
    }
}

#[test]
fn bessel_k0_table() {
    for row in table("bessel_k0.csv") {
        let (x, want) = (num(&row[0]), num(&row[1]));
        let got = bessel_k0(x).unwrap();
        assert!(rel(got, want) < 1e-13, "K0({x}) = {got}, want {want}");
    }
}

#[test]
fn legendre_table() {
    for row in table("legendre_q_minus_half.csv") {
        let (u0, want) = (num(&row[0]), num(&row[1]));
        let got = legendre_q_minus_half(u0).unwrap();
        assert!(rel(got, want) < 1e-13, "Q(cosh {u0}) = {got}, want {want}");
    }
}

#[test]
fn cone_stress_table() {
    let rows = table("cone_stress_t0.csv");
    assert_eq!(rows.len(), 42);
    for row in rows {
        let (n, d) = row[0].split_once('/').unwrap();
        let theta1 = PI * num(n) / num(d);
        let (beta, r) = (num(&row[1]), num(&row[2]));
        let want: Vec<f64> = row[3..7].iter().map(|s| num(s)).collect();
        let got = stress_t0(
            &Geometry::Cone { theta1 },
            &FieldPoint::new(r, 0.0, 0.0).unwrap(),
            Coupling::new(beta),
            &Ladder::default(),
        )
        .unwrap()
        .stress
        .components();
        let scale = want.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for i in 0..4 {
            let err = (got[i] - want[i]).abs() / scale;
            assert!(err < 1e-6, "θ₁={theta1} β={beta} r={r} component {i}: {} vs {}", got[i], want[i]);
        }
    }
}
