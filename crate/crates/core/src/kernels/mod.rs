//! Cylinder kernels `T̄(x, x')` for every supported background.
//!
//! All closed forms are generic over [`Scalar`], so calling them with
//! [`crate::jets::Jet2`] coordinates yields exact derivatives. Branches
//! (series, direct quotient, exponential form) are picked from primal
//! values only; each branch is the same analytic function.
//!
//! With `k = 2π/θ₁`, `c = θ - θ'`,
//! `A = 2 sinh²(ku/2) + 2 sin²(kc/2) = cosh ku - cos kc` and `B` the same
//! with `k = 1`, the cone kernel is `-k S / (4π² r r' A)` where
//! `S = sinh(ku)/sinh u`, and Minkowski is `-1 / (4π² r r' B)`.

mod images;
mod modesum;
mod threed;

pub use images::{
    cone_images_tail, tbar_cone_via_images, tbar_periodic_line, tbar_periodic_line_renormalized,
    tbar_periodic_line_sum, tbar_wedge_full, tbar_wedge_renormalized, ImageSum,
};
pub use modesum::{mode_integral, tbar_cone_fourier, tbar_modesum_4d, ModeSum, ModeSumConfig};
pub use threed::{tbar_3d, tbar_3d_flat, tbar_3d_theta_average, tbar_3d_z_reduction};

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{is_flat_cone, u_of_pair, Geometry, PointPair};
use crate::jets::Scalar;

const FOUR_PI_SQ: f64 = 4.0 * PI * PI;

/// Above this `k u` the angular factor switches to its exponential form.
const EXP_FORM_ABOVE: f64 = 30.0;
/// Series are used while the effective argument stays below this.
const SERIES_BELOW: f64 = 1.5;

/// Whether a kernel includes the flat-space (Minkowski) part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelForm {
    Full,
    /// Flat-space kernel subtracted.
    Renormalized,
}

/// Evaluates the kernel of `geometry` at `p`.
pub fn tbar<S: Scalar>(geometry: &Geometry, p: &PointPair<S>, form: KernelForm) -> Result<S> {
    geometry.validate()?;
    p.validate()?;
    match (*geometry, form) {
        (Geometry::Minkowski, KernelForm::Full) => tbar_minkowski(p),
        (Geometry::Minkowski, KernelForm::Renormalized) => Ok(S::cst(0.0)),
        (Geometry::Cone { theta1 }, KernelForm::Full) => tbar_cone(p, theta1),
        (Geometry::Cone { theta1 }, KernelForm::Renormalized) => tbar_cone_renormalized(p, theta1),
        (Geometry::Dowker, KernelForm::Full) => tbar_dowker(p),
        (Geometry::Dowker, KernelForm::Renormalized) => tbar_dowker_renormalized(p),
        (Geometry::Wedge { theta0, bc }, KernelForm::Full) => tbar_wedge_full(p, theta0, bc),
        (Geometry::Wedge { theta0, bc }, KernelForm::Renormalized) => {
            tbar_wedge_renormalized(p, theta0, bc)
        }
        (Geometry::PeriodicLine { period }, KernelForm::Full) => tbar_periodic_line(p, period),
        (Geometry::PeriodicLine { period }, KernelForm::Renormalized) => {
            tbar_periodic_line_renormalized(p, period, images::PERIODIC_DEFAULT_TERMS)
        }
    }
}

fn singular(what: &str) -> Error {
    Error::Singular(format!("{what}: coincident points"))
}

/// `c - θ₁ round(c/θ₁)`, in `[-θ₁/2, θ₁/2]`.
pub(crate) fn reduce_angle<S: Scalar>(c: S, period: f64) -> S {
    let n = (c.value() / period).round();
    if n == 0.0 {
        c
    } else {
        c - n * period
    }
}

/// `Σ_{n >= first} coef(n) y^n` by Horner, with enough terms that the
/// neglected part is below 1e-18 of the leading term for `|x_eff| <=`
/// [`SERIES_BELOW`], where `coef(n) ~ x_eff^{2n} / (2n)!` in size.
fn even_series<S: Scalar>(y: S, first: usize, x_eff: f64, coef: impl Fn(usize) -> f64) -> S {
    let x2 = x_eff * x_eff;
    let mut last = first;
    let mut bound = 1.0;
    while last < first + 40 {
        let n = last + 1;
        bound *= x2 / ((2 * n - 1) * 2 * n) as f64;
        last = n;
        if bound < 1e-18 {
            break;
        }
    }
    let mut acc = S::cst(coef(last));
    for n in (first..last).rev() {
        acc = acc * y + coef(n);
    }
    acc * y.powi(first as i32)
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |a, k| a * k as f64)
}

/// `sinh(x)/x`, exact at 0.
pub(crate) fn sinhc<S: Scalar>(x: S) -> S {
    let a = x.value().abs();
    if a < SERIES_BELOW {
        even_series(x.sqr(), 0, a, |n| 1.0 / factorial(2 * n + 1))
    } else {
        x.sinh() / x
    }
}

/// `k^m - 1` without cancellation for `k` near 1.
fn pow_m1(k: f64, m: f64) -> f64 {
    (m * k.ln()).exp_m1()
}

/// `2 sinh²(ku/2) + 2 sin²(kc/2)`.
fn denominator<S: Scalar>(u: S, c: S, k: f64) -> S {
    let a = (u * (0.5 * k)).sinh();
    let b = (c * (0.5 * k)).sin();
    (a.sqr() + b.sqr()) * 2.0
}

/// `sinh(ku)/sinh(u) - k` as a series in `u²`, exact at `u = 0`.
fn ratio_minus_k<S: Scalar>(u: S, k: f64) -> S {
    let x_eff = k.max(1.0) * u.value().abs();
    let p = even_series(u.sqr(), 1, x_eff, |n| {
        k * pow_m1(k, 2.0 * n as f64) / factorial(2 * n + 1)
    });
    p / sinhc(u)
}

/// `sinh(ku)/sinh(u)` on all branches except the exponential one.
fn sinh_ratio<S: Scalar>(u: S, k: f64) -> S {
    if k.max(1.0) * u.value().abs() <= SERIES_BELOW {
        ratio_minus_k(u, k) + k
    } else {
        (u * k).sinh() / u.sinh()
    }
}

/// The Minkowski kernel
/// `-1 / (2π² [(r-r')² + 4rr' sin²((θ-θ')/2) + t² + (z-z')²])`.
pub fn tbar_minkowski<S: Scalar>(p: &PointPair<S>) -> Result<S> {
    p.validate()?;
    let s = (p.delta_theta() * 0.5).sin();
    let d = p.radial_gap_sq() + p.r * p.r_prime * s.sqr() * 4.0;
    if !(d.value() > 0.0) {
        return Err(singular("minkowski"));
    }
    Ok(d.recip() * (-0.5 / (PI * PI)))
}

/// The Minkowski kernel in its hyperbolic form
/// `-(1/(4π² r r' sinh u)) sinh u / (cosh u - cos(θ-θ'))`, as printed
/// alongside the cone formula. Used to cross-check [`tbar_minkowski`].
pub fn tbar_minkowski_hyperbolic(p: &PointPair<f64>) -> Result<f64> {
    let uv = u_of_pair(p)?;
    let c = p.delta_theta();
    let den = uv.cosh_u - c.cos();
    if !(den > 0.0) {
        return Err(singular("minkowski"));
    }
    Ok(-(1.0 / (FOUR_PI_SQ * p.r * p.r_prime * uv.sinh_u)) * uv.sinh_u / den)
}

/// The cone kernel of angular period `θ₁`:
/// `-(1/(2π θ₁ r r' sinh u)) sinh(2πu/θ₁) / (cosh(2πu/θ₁) - cos(2π(θ-θ')/θ₁))`.
pub fn tbar_cone<S: Scalar>(p: &PointPair<S>, theta1: f64) -> Result<S> {
    Geometry::Cone { theta1 }.validate()?;
    if is_flat_cone(theta1) {
        return tbar_minkowski(p);
    }
    let uv = u_of_pair(p)?;
    let u = uv.u;
    let k = TAU / theta1;
    let c = reduce_angle(p.delta_theta(), theta1);
    let pre = (p.r * p.r_prime).recip() * (-k / FOUR_PI_SQ);
    if k * u.value() > EXP_FORM_ABOVE {
        let e1 = (u * (-k)).exp();
        let e2 = e1.sqr();
        let ang = (-e2 + 1.0) / (e2 + 1.0 - e1 * (c * k).cos() * 2.0);
        return Ok(pre * ang / uv.sinh_u);
    }
    let a = denominator(u, c, k);
    if !(a.value() > 0.0) {
        return Err(singular("cone"));
    }
    Ok(pre * sinh_ratio(u, k) / a)
}

/// The Dowker kernel `-(1/(2π² r r' sinh u)) u / (u² + (θ-θ')²)`.
/// Angles are not reduced: the manifold has infinitely many sheets.
pub fn tbar_dowker<S: Scalar>(p: &PointPair<S>) -> Result<S> {
    let uv = u_of_pair(p)?;
    let u = uv.u;
    let c = p.delta_theta();
    let q = u.sqr() + c.sqr();
    if !(q.value() > 0.0) {
        return Err(singular("dowker"));
    }
    let pre = (p.r * p.r_prime).recip() * (-0.5 / (PI * PI));
    Ok(pre / (sinhc(u) * q))
}

/// `tbar_cone - tbar_minkowski`, evaluated without the near-coincidence
/// cancellation between the two. Near `u = c = 0` the numerator
/// `k S B - A` is expanded as
/// `k G B + Σ_{n>=2} (k² - k^{2n}) [u^{2n} - (-1)^n c^{2n}] / (2n)!`
/// with `G = S - k`, every piece of which is computed directly.
pub fn tbar_cone_renormalized<S: Scalar>(p: &PointPair<S>, theta1: f64) -> Result<S> {
    Geometry::Cone { theta1 }.validate()?;
    p.validate()?;
    if is_flat_cone(theta1) {
        return Ok(S::cst(0.0));
    }
    let uv = u_of_pair(p)?;
    let u = uv.u;
    let c = p.delta_theta();
    let k = TAU / theta1;
    let m = u.value().abs().max(c.value().abs());
    let x_eff = k.max(1.0) * m;
    if x_eff > SERIES_BELOW || m > SERIES_BELOW {
        return Ok(tbar_cone(p, theta1)? - tbar_minkowski(p)?);
    }
    let a = denominator(u, c, k);
    let b = denominator(u, c, 1.0);
    if !(a.value() > 0.0) {
        return Err(singular("cone"));
    }
    let g = ratio_minus_k(u, k);
    let k2 = k * k;
    let tail_u = even_series(u.sqr(), 2, x_eff, |n| {
        -k2 * pow_m1(k, (2 * n - 2) as f64) / factorial(2 * n)
    });
    let tail_c = even_series(c.sqr(), 2, x_eff, |n| {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        sign * k2 * pow_m1(k, (2 * n - 2) as f64) / factorial(2 * n)
    });
    let num = g * b * k + tail_u + tail_c;
    let pre = (p.r * p.r_prime).recip() * (-1.0 / FOUR_PI_SQ);
    Ok(pre * num / (a * b))
}

/// `tbar_dowker - tbar_minkowski` without cancellation. With
/// `E(u) = cosh u - 1 - u²/2`, `F(c) = cos c - 1 + c²/2` and
/// `R = u/sinh u - 1`, the difference is
/// `-(1/(4π² r r')) [2(E - F) + 2 R B] / ((u² + c²) B)`.
pub fn tbar_dowker_renormalized<S: Scalar>(p: &PointPair<S>) -> Result<S> {
    p.validate()?;
    let uv = u_of_pair(p)?;
    let u = uv.u;
    let c = p.delta_theta();
    let m = u.value().abs().max(c.value().abs());
    if m > SERIES_BELOW {
        return Ok(tbar_dowker(p)? - tbar_minkowski(p)?);
    }
    let q = u.sqr() + c.sqr();
    if !(q.value() > 0.0) {
        return Err(singular("dowker"));
    }
    let b = denominator(u, c, 1.0);
    let e = even_series(u.sqr(), 2, m, |n| 1.0 / factorial(2 * n));
    let f = even_series(c.sqr(), 2, m, |n| {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        sign / factorial(2 * n)
    });
    let sh = sinhc(u);
    let rr = -even_series(u.sqr(), 1, m, |n| 1.0 / factorial(2 * n + 1)) / sh;
    let num = (e - f) * 2.0 + rr * b * 2.0;
    let pre = (p.r * p.r_prime).recip() * (-1.0 / FOUR_PI_SQ);
    Ok(pre * num / (q * b))
}
