//! Special functions used by the oracle paths: Bessel `J_nu` of real
//! order, `K_0`, and the Legendre function `Q_{-1/2}`.

use std::f64::consts::{FRAC_PI_2, PI};

use statrs::function::gamma::ln_gamma;

use crate::error::{domain, Error, Result};

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;
const MAXIT: usize = 100_000;

/// Bessel function of the first kind `J_nu(x)` for real `nu >= 0`, `x >= 0`.
///
/// Small arguments (`x <= 2` or `x^2/4 <= nu + 1`) use the power series,
/// where every term after the first is smaller than its predecessor.
/// Otherwise Steed's method: a continued fraction for `J'/J` at order
/// `nu`, downward recurrence to a fractional order `mu`, and the complex
/// continued fraction for `(J'+iY')/(J+iY)` at `mu` to fix normalization.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    if !(nu >= 0.0) || !(x >= 0.0) || !nu.is_finite() || !x.is_finite() {
        return Err(domain(format!("bessel_j needs nu >= 0, x >= 0 (nu={nu}, x={x})")));
    }
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    if x <= 2.0 || 0.25 * x * x <= nu + 1.0 {
        Ok(j_series(nu, x))
    } else {
        j_steed(nu, x)
    }
}

fn j_series(nu: f64, x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..500 {
        let kf = k as f64;
        term *= -q / (kf * (kf + nu));
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    let log_pre = nu * (0.5 * x).ln() - ln_gamma(nu + 1.0);
    sum * log_pre.exp()
}

fn j_steed(nu: f64, x: f64) -> Result<f64> {
    let nl = ((nu - x + 1.5).floor()).max(0.0) as usize;
    let mu = nu - nl as f64;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI;

    // CF1: J'_nu / J_nu
    let mut isign = 1.0;
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    let mut converged = false;
    for _ in 0..MAXIT {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Quadrature {
            what: format!("bessel_j CF1 (nu={nu}, x={x})"),
            estimate: h,
            error: f64::NAN,
            tolerance: EPS,
        });
    }

    // downward recurrence from nu to mu, rescaling to stay in range
    let mut rjl = isign * 1e-30;
    let mut rjpl = h * rjl;
    let mut rjl1 = rjl;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
        if rjl.abs() > 1e250 {
            rjl *= 1e-250;
            rjpl *= 1e-250;
            rjl1 *= 1e-250;
        }
    }
    if rjl == 0.0 {
        rjl = EPS;
    }
    let f = rjpl / rjl;

    // CF2 at order mu
    let a0 = 0.25 - mu * mu;
    let mut a = a0;
    let mut p = -0.5 * xi;
    let mut q = 1.0;
    let br = 2.0 * x;
    let mut bi = 2.0;
    let mut fct = a * xi / (p * p + q * q);
    let mut cr = br + q * fct;
    let mut ci = bi + p * fct;
    let mut den = br * br + bi * bi;
    let mut dr = br / den;
    let mut di = -bi / den;
    let mut dlr = cr * dr - ci * di;
    let mut dli = cr * di + ci * dr;
    let mut temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    let mut converged = false;
    for i in 2..MAXIT {
        a += 2.0 * (i as f64 - 1.0);
        bi += 2.0;
        dr = a * dr + br;
        di = a * di + bi;
        if dr.abs() + di.abs() < FPMIN {
            dr = FPMIN;
        }
        fct = a / (cr * cr + ci * ci);
        cr = br + cr * fct;
        ci = bi - ci * fct;
        if cr.abs() + ci.abs() < FPMIN {
            cr = FPMIN;
        }
        den = dr * dr + di * di;
        dr /= den;
        di /= -den;
        dlr = cr * dr - ci * di;
        dli = cr * di + ci * dr;
        temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        if (dlr - 1.0).abs() + dli.abs() < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Quadrature {
            what: format!("bessel_j CF2 (nu={nu}, x={x})"),
            estimate: p,
            error: f64::NAN,
            tolerance: EPS,
        });
    }
    let gam = (p - f) / q;
    let rjmu = (w / ((p - f) * gam + q)).sqrt().copysign(rjl);
    Ok(rjl1 * (rjmu / rjl))
}

/// Modified Bessel function `K_0(x)`, `x > 0`, by the trapezoid rule on
/// `int_0^inf exp(-x cosh s) ds`. The integrand is entire and decays
/// doubly exponentially, so a fixed step of 0.1 is accurate to roundoff.
pub fn bessel_k0(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(format!("bessel_k0 needs x > 0, got {x}")));
    }
    if x > 740.0 {
        return Ok(0.0);
    }
    let h = 0.1;
    // scaled by e^x to keep the terms in range for moderate x
    let mut sum = 0.5;
    let mut j = 1;
    loop {
        let s = j as f64 * h;
        let e = -x * (s.cosh() - 1.0);
        let term = e.exp();
        sum += term;
        if e < -745.0 || term < 1e-18 * sum {
            break;
        }
        j += 1;
    }
    Ok(h * sum * (-x).exp())
}

/// Arithmetic-geometric mean.
pub fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if (a - b).abs() <= 1e-16 * a.abs() {
            break;
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
    }
    0.5 * (a + b)
}

/// Legendre function of the second kind `Q_{-1/2}(cosh u0)`, `u0 > 0`, via
/// `Q_{-1/2}(z) = k K(k)` with `k^2 = 2/(1+z)`; the complementary modulus
/// is `tanh(u0/2)`, so no cancellation near `z = 1`.
pub fn legendre_q_minus_half(u0: f64) -> Result<f64> {
    if !(u0 > 0.0) || !u0.is_finite() {
        return Err(domain(format!("Q_(-1/2)(cosh u0) needs u0 > 0, got {u0}")));
    }
    let kp = (0.5 * u0).tanh();
    let k = 1.0 / (0.5 * u0).cosh();
    Ok(k * FRAC_PI_2 / agm(1.0, kp))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn integer_order_values() {
        assert!(rel(bessel_j(0.0, 1.0).unwrap(), 0.765_197_686_557_966_6) < 1e-14);
        assert!(rel(bessel_j(1.0, 2.5).unwrap(), 0.497_094_102_464_274_4) < 1e-13);
        assert!(rel(bessel_j(0.0, 10.0).unwrap(), -0.245_935_764_451_348_3) < 1e-12);
    }

    #[test]
    fn half_integer_order_is_elementary() {
        for &x in &[0.3, 1.7, 4.0, 12.5, 40.0] {
            let exact = (2.0 / (PI * x)).sqrt() * x.sin();
            let got = bessel_j(0.5, x).unwrap();
            assert!((got - exact).abs() < 1e-13, "x={x}: {got} vs {exact}");
        }
    }

    #[test]
    fn recurrence_holds_across_branches() {
        for &nu in &[0.3, 2.7, 11.2] {
            for &x in &[1.5, 3.0, 8.0, 25.0] {
                let a = bessel_j(nu, x).unwrap();
                let b = bessel_j(nu + 1.0, x).unwrap();
                let c = bessel_j(nu + 2.0, x).unwrap();
                let resid = 2.0 * (nu + 1.0) / x * b - a - c;
                let scale = a.abs().max(b.abs()).max(c.abs());
                assert!(resid.abs() < 1e-12 * scale, "nu={nu} x={x} resid={resid:e}");
            }
        }
    }

    #[test]
    fn k0_known_values() {
        assert!(rel(bessel_k0(1.0).unwrap(), 0.421_024_438_240_708_3) < 1e-14);
        assert!(rel(bessel_k0(0.01).unwrap(), 4.721_244_730_161_08) < 1e-13);
        assert!(rel(bessel_k0(20.0).unwrap(), 5.741_237_815_336_524e-10) < 1e-13);
    }

    #[test]
    fn q_minus_half_matches_integral_limit() {
        // large u0: Q_{-1/2}(cosh u0) ~ pi e^{-u0/2}
        let u0 = 30.0;
        let q = legendre_q_minus_half(u0).unwrap();
        assert!(rel(q, PI * (-u0 / 2.0f64).exp()) < 1e-12);
    }

    #[test]
    fn domain_checks() {
        assert!(bessel_j(-1.0, 1.0).is_err());
        assert!(bessel_k0(0.0).is_err());
        assert!(legendre_q_minus_half(0.0).is_err());
    }
}
