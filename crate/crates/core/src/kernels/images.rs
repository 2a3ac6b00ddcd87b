//! Image constructions: the cone as a periodic sum of Dowker kernels, the
//! wedge as a cone plus a reflected image, and flat space periodic in `z`.

use std::f64::consts::{PI, TAU};

use crate::error::{domain, Error, Result};
use crate::geometry::{u_of_pair, BoundaryCondition, Geometry, PointPair};
use crate::jets::Scalar;

use super::{reduce_angle, sinhc, tbar_cone, tbar_cone_renormalized, EXP_FORM_ABOVE};

pub(crate) const PERIODIC_DEFAULT_TERMS: usize = 256;

/// A truncated image sum and the tail correction already added to it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageSum {
    pub value: f64,
    pub tail: f64,
    pub terms: usize,
}

/// Euler–Maclaurin estimate of `Σ_{n>N} f(n)` for
/// `f(n) = -1 / (u² + (x0 + n h)²)` scaled by `amp`, from the midpoint
/// rule: `∫_{N+1/2}^∞ f + f'(N+1/2)/24`. Requires `x0 + (N+1/2) h > 0`.
fn lorentzian_tail<S: Scalar>(amp: S, u: S, x0: S, h: f64, n: usize) -> S {
    let x = x0 + (n as f64 + 0.5) * h;
    // ∫ du/(u²+x²) from x to ∞, divided by h
    let integral = if u.value().abs() < 1e-8 * x.value() {
        x.recip() / h
    } else {
        (u / x).atan() / (u * h)
    };
    let q = u.sqr() + x.sqr();
    let deriv = x * h * 2.0 / q.sqr();
    amp * (-integral + deriv / 24.0)
}

/// Tail of the Dowker image sum beyond `|n| = N`, both sides.
pub fn cone_images_tail(p: &PointPair<f64>, theta1: f64, n: usize) -> Result<f64> {
    let uv = u_of_pair(p)?;
    let c = reduce_angle(p.delta_theta(), theta1);
    let amp = 0.5 / (PI * PI * p.r * p.r_prime * sinhc(uv.u));
    Ok(lorentzian_tail(amp, uv.u, c, theta1, n) + lorentzian_tail(amp, uv.u, -c, theta1, n))
}

/// `Σ_{|n|<=N} T̄_Dowker(θ - θ' + n θ₁)` plus the Euler–Maclaurin tail.
/// With the tail the truncation error falls faster than `N^-2`.
pub fn tbar_cone_via_images(p: &PointPair<f64>, theta1: f64, n: usize) -> Result<ImageSum> {
    Geometry::Cone { theta1 }.validate()?;
    if n == 0 {
        return Err(domain("image sum needs N >= 1"));
    }
    let uv = u_of_pair(p)?;
    let u = uv.u;
    let c = reduce_angle(p.delta_theta(), theta1);
    let amp = 0.5 / (PI * PI * p.r * p.r_prime * sinhc(u));
    let term = |m: f64| -amp / (u * u + (c + m * theta1).powi(2));
    if u == 0.0 && c == 0.0 {
        return Err(Error::Singular("cone image sum: coincident points".into()));
    }
    let mut sum = 0.0;
    for m in (1..=n).rev() {
        let mf = m as f64;
        sum += term(mf) + term(-mf);
    }
    sum += term(0.0);
    let tail = cone_images_tail(p, theta1, n)?;
    Ok(ImageSum {
        value: sum + tail,
        tail,
        terms: 2 * n + 1,
    })
}

fn check_wedge_angles(theta: f64, theta_prime: f64, theta0: f64, closed: bool) -> Result<()> {
    let inside = |x: f64| {
        if closed {
            (0.0..=theta0).contains(&x)
        } else {
            x > 0.0 && x < theta0
        }
    };
    if !inside(theta) || !inside(theta_prime) {
        let (l, r) = if closed { ("[", "]") } else { ("(", ")") };
        return Err(domain(format!(
            "wedge angles ({theta}, {theta_prime}) outside {l}0, {theta0}{r}"
        )));
    }
    Ok(())
}

fn reflected<S: Scalar>(p: &PointPair<S>) -> PointPair<S> {
    PointPair {
        theta_prime: -p.theta_prime,
        ..*p
    }
}

/// Vacuum-subtracted wedge kernel of opening `θ₀`:
/// `T̄_cone(θ-θ'; 2θ₀) - T̄_Mink(θ-θ') + s T̄_cone(θ+θ'; 2θ₀)`, with
/// `s = -1` for Dirichlet and `+1` for Neumann.
pub fn tbar_wedge_renormalized<S: Scalar>(
    p: &PointPair<S>,
    theta0: f64,
    bc: BoundaryCondition,
) -> Result<S> {
    Geometry::Wedge { theta0, bc }.validate()?;
    check_wedge_angles(p.theta.value(), p.theta_prime.value(), theta0, false)?;
    let direct = tbar_cone_renormalized(p, 2.0 * theta0)?;
    let image = tbar_cone(&reflected(p), 2.0 * theta0)?;
    Ok(direct + image * bc.image_sign())
}

/// Full wedge kernel (flat part included). Defined on the closed wedge so
/// boundary values can be inspected.
pub fn tbar_wedge_full<S: Scalar>(p: &PointPair<S>, theta0: f64, bc: BoundaryCondition) -> Result<S> {
    Geometry::Wedge { theta0, bc }.validate()?;
    check_wedge_angles(p.theta.value(), p.theta_prime.value(), theta0, true)?;
    let direct = tbar_cone(p, 2.0 * theta0)?;
    let image = tbar_cone(&reflected(p), 2.0 * theta0)?;
    Ok(direct + image * bc.image_sign())
}

/// Squared distance transverse to `z`.
fn transverse_sq<S: Scalar>(p: &PointPair<S>) -> S {
    let s = (p.delta_theta() * 0.5).sin();
    (p.r - p.r_prime).sqr() + p.r * p.r_prime * s.sqr() * 4.0
}

fn check_period(period: f64) -> Result<()> {
    Geometry::PeriodicLine { period }.validate()
}

/// Closed form of flat space periodic in `z` with period `L`:
/// `-(1/(2π a L)) sinh(2πa/L) / (cosh(2πa/L) - cos(2π Δz/L))`,
/// `a² = t² + ρ²` with `ρ` the transverse separation.
pub fn tbar_periodic_line<S: Scalar>(p: &PointPair<S>, period: f64) -> Result<S> {
    check_period(period)?;
    p.validate()?;
    let a2 = p.t.sqr() + transverse_sq(p);
    let w = TAU / period;
    let x = reduce_angle(p.delta_z() * w, TAU);
    let q = a2.sqrt() * w;
    if q.value() > EXP_FORM_ABOVE {
        let e1 = (-q).exp();
        let e2 = e1.sqr();
        let ang = (-e2 + 1.0) / (e2 + 1.0 - e1 * x.cos() * 2.0);
        return Ok(ang / (a2.sqrt() * (-TAU * period)));
    }
    let den = ((q * 0.5).sinh().sqr() + (x * 0.5).sin().sqr()) * 2.0;
    if !(den.value() > 0.0) {
        return Err(Error::Singular("periodic line: coincident points".into()));
    }
    Ok(-sinhc(q) / (den * (period * period)))
}

fn periodic_terms<S: Scalar>(p: &PointPair<S>, period: f64, n: usize, with_direct: bool) -> S {
    let a2 = p.t.sqr() + transverse_sq(p);
    let x = p.delta_z();
    // images are summed around the nearest one; the direct term sits at `shift`
    let shift = (x.value() / period).round();
    let x = x - shift * period;
    let c = -0.5 / (PI * PI);
    let term = |m: f64| {
        if !with_direct && m == shift {
            S::cst(0.0)
        } else {
            (a2 + (x + m * period).sqr()).recip() * c
        }
    };
    let mut sum = S::cst(0.0);
    for m in (1..=n).rev() {
        let mf = m as f64;
        sum = sum + term(mf) + term(-mf);
    }
    sum = sum + term(0.0);
    let amp = S::cst(0.5 / (PI * PI));
    let a = a2.sqrt();
    sum + lorentzian_tail(amp, a, x, period, n) + lorentzian_tail(amp, a, -x, period, n)
}

/// `Σ_{|n|<=N} T̄_Mink(z - z' + nL)` plus the Euler–Maclaurin tail.
pub fn tbar_periodic_line_sum(p: &PointPair<f64>, period: f64, n: usize) -> Result<ImageSum> {
    check_period(period)?;
    p.validate()?;
    if n == 0 {
        return Err(domain("image sum needs N >= 1"));
    }
    let with = periodic_terms(p, period, n, true);
    let amp = 0.5 / (PI * PI);
    let a = (p.t * p.t + transverse_sq(p)).sqrt();
    let x = p.delta_z() - (p.delta_z() / period).round() * period;
    let tail = lorentzian_tail(amp, a, x, period, n) + lorentzian_tail(amp, a, -x, period, n);
    Ok(ImageSum {
        value: with,
        tail,
        terms: 2 * n + 1,
    })
}

/// The periodic-line kernel with the direct (`n = 0`) term removed,
/// summed over the remaining images so no cancellation occurs.
pub fn tbar_periodic_line_renormalized<S: Scalar>(p: &PointPair<S>, period: f64, n: usize) -> Result<S> {
    check_period(period)?;
    p.validate()?;
    if n == 0 {
        return Err(domain("image sum needs N >= 1"));
    }
    if (p.delta_z().value() / period).round().abs() > n as f64 {
        return Err(domain("z - z' lies beyond the summed images"));
    }
    Ok(periodic_terms(p, period, n, false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{tbar_dowker, tbar_minkowski};

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn single_image_is_dowker() {
        let p = PointPair::new(0.8, 1.0, 1.4, 0.3, 0.1, 0.0, 0.0).unwrap();
        let theta1 = PI;
        let u = u_of_pair(&p).unwrap().u;
        let amp = 0.5 / (PI * PI * p.r * p.r_prime * sinhc(u));
        let c = 0.2;
        assert!(rel(-amp / (u * u + c * c), tbar_dowker(&p).unwrap()) < 1e-14);
        let s = tbar_cone_via_images(&p, theta1, 1000).unwrap();
        assert!(rel(s.value, tbar_cone(&p, theta1).unwrap()) < 1e-10);
    }

    #[test]
    fn tail_makes_truncation_fast() {
        let p = PointPair::split_in_time(1.0, 1.0, 0.0, 0.0).unwrap();
        let exact = tbar_cone(&p, PI).unwrap();
        let e100 = (tbar_cone_via_images(&p, PI, 100).unwrap().value - exact).abs();
        let e200 = (tbar_cone_via_images(&p, PI, 200).unwrap().value - exact).abs();
        assert!(e100 / exact.abs() < 1e-9);
        assert!(e200 < e100 / 8.0 || e200 < 1e-15 * exact.abs());
    }

    #[test]
    fn free_image_sum_is_minkowski() {
        let p = PointPair::new(0.5, 1.0, 2.0, 1.0, 0.0, 0.3, 0.0).unwrap();
        let s = tbar_cone_via_images(&p, TAU, 1000).unwrap();
        assert!(rel(s.value, tbar_minkowski(&p).unwrap()) < 1e-10);
    }

    #[test]
    fn wedge_domain() {
        let p = PointPair::new(0.5, 1.0, 1.0, 0.0, 0.3, 0.0, 0.0).unwrap();
        let bc = BoundaryCondition::Dirichlet;
        assert!(tbar_wedge_renormalized(&p, 1.0, bc).is_err());
        let v = tbar_wedge_full(&p, 1.0, bc).unwrap();
        assert!(v.abs() < 1e-14);
    }

    #[test]
    fn periodic_line_closed_form_and_sum() {
        let p = PointPair::new(1.0, 1.0, 1.0, 0.0, 0.0, 0.3, 0.0).unwrap();
        let closed = tbar_periodic_line(&p, 2.0).unwrap();
        let sum = tbar_periodic_line_sum(&p, 2.0, 1000).unwrap();
        assert!(rel(sum.value, closed) < 1e-8);
        let shifted = PointPair::new(1.0, 1.0, 1.0, 0.0, 0.0, 2.3, 0.0).unwrap();
        assert!(rel(tbar_periodic_line(&shifted, 2.0).unwrap(), closed) < 1e-12);
        let ren = tbar_periodic_line_renormalized(&p, 2.0, 256).unwrap();
        assert!(rel(ren + tbar_minkowski(&p).unwrap(), closed) < 1e-12);
    }

    #[test]
    fn long_period_is_minkowski() {
        let p = PointPair::new(1.0, 1.0, 1.3, 0.2, 0.0, 0.1, 0.0).unwrap();
        let v = tbar_periodic_line(&p, 1e7).unwrap();
        assert!(rel(v, tbar_minkowski(&p).unwrap()) < 1e-10);
    }
}
