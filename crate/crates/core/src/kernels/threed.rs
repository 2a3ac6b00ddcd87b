//! The 2+1-dimensional massless cone kernel and its consistency checks.

use std::f64::consts::{PI, TAU};

use crate::error::{domain, Result};
use crate::geometry::{Geometry, PointPair};
use crate::quadrature::{integrate, integrate_to_infinity, QuadConfig};

use super::{sinhc, tbar_cone, EXP_FORM_ABOVE};

const V_MAX: f64 = 14.0;

/// `u₀` from `cosh u₀ = (r² + r'² + t²) / (2 r r')`, via the half-angle form.
fn u0_of(p: &PointPair<f64>) -> f64 {
    let w = ((p.r - p.r_prime).powi(2) + p.t * p.t) / (4.0 * p.r * p.r_prime);
    2.0 * w.sqrt().asinh()
}

fn angular(u: f64, c: f64, k: f64) -> f64 {
    let ku = k * u;
    if ku > EXP_FORM_ABOVE {
        let e1 = (-ku).exp();
        let e2 = e1 * e1;
        (1.0 - e2) / (1.0 - 2.0 * e1 * (k * c).cos() + e2)
    } else {
        ku.sinh() / (2.0 * ((0.5 * ku).sinh().powi(2) + (0.5 * k * c).sin().powi(2)))
    }
}

/// The 3-D kernel
/// `-(1/(π θ₁ √(2rr'))) ∫_{u₀}^∞ du (cosh u - cosh u₀)^{-1/2}
///  sinh(2πu/θ₁) / (cosh(2πu/θ₁) - cos(2π(θ-θ')/θ₁))`.
///
/// `z` coordinates are ignored. The substitution `u = u₀ + v²` removes the
/// inverse square root at the lower endpoint.
pub fn tbar_3d(p: &PointPair<f64>, theta1: f64, quad: QuadConfig) -> Result<f64> {
    Geometry::Cone { theta1 }.validate()?;
    p.validate()?;
    let u0 = u0_of(p);
    if !(u0 > 0.0) {
        return Err(domain("3-D kernel needs u0 > 0"));
    }
    let k = TAU / theta1;
    let c = p.delta_theta();
    let res = integrate(
        |v| {
            let h = 0.5 * v * v;
            // sinh(v²/2)/v² = sinhc(v²/2)/2
            let root = (2.0 * (u0 + h).sinh() * 0.5 * sinhc(h)).sqrt();
            2.0 / root * angular(u0 + v * v, c, k)
        },
        0.0,
        V_MAX,
        quad,
    )?;
    Ok(-res.value / (PI * theta1 * (2.0 * p.r * p.r_prime).sqrt()))
}

/// Flat 3-D kernel `-1 / (2π R)`, `R² = t² + |x - x'|²` in the plane.
pub fn tbar_3d_flat(p: &PointPair<f64>) -> Result<f64> {
    p.validate()?;
    let s = (0.5 * p.delta_theta()).sin();
    let r2 = p.t * p.t + (p.r - p.r_prime).powi(2) + 4.0 * p.r * p.r_prime * s * s;
    if !(r2 > 0.0) {
        return Err(domain("3-D kernel at coincidence"));
    }
    Ok(-1.0 / (TAU * r2.sqrt()))
}

/// `∫ dz` of the 4-D cone kernel over the full `z - z'` line, which is
/// the dimensional reduction to the 3-D kernel.
pub fn tbar_3d_z_reduction(p: &PointPair<f64>, theta1: f64, quad: QuadConfig) -> Result<f64> {
    let base = PointPair {
        z: 0.0,
        z_prime: 0.0,
        ..*p
    };
    base.validate()?;
    let scale = p.r.max(p.r_prime).max(p.t);
    let mut failure = None;
    let res = integrate_to_infinity(
        |z| match tbar_cone(&PointPair { z, ..base }, theta1) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        0.0,
        scale,
        quad,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(2.0 * res?.value)
}

/// Average of [`tbar_3d`] over one period of `θ - θ'`.
pub fn tbar_3d_theta_average(p: &PointPair<f64>, theta1: f64, quad: QuadConfig) -> Result<f64> {
    let mut failure = None;
    let res = integrate(
        |phi| {
            let q = PointPair {
                theta: phi,
                theta_prime: 0.0,
                ..*p
            };
            match tbar_3d(&q, theta1, quad) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            }
        },
        -0.5 * theta1,
        0.5 * theta1,
        quad,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(res?.value / theta1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_case_is_elementary() {
        let p = PointPair::new(0.7, 1.0, 1.6, 0.9, 0.0, 0.0, 0.0).unwrap();
        let q = tbar_3d(&p, TAU, QuadConfig::with_rel(1e-12)).unwrap();
        let f = tbar_3d_flat(&p).unwrap();
        assert!(((q - f) / f).abs() < 1e-9, "{q} vs {f}");
    }
}
