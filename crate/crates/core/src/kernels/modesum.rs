//! Independent derivation paths for the cone kernel: the angular Fourier
//! series and the Fourier–Bessel mode sum.

use std::f64::consts::{PI, TAU};

use crate::error::{domain, Result};
use crate::geometry::{u_of_pair, Geometry, PointPair};
use crate::quadrature::{integrate_breaks, QuadConfig};
use crate::special::{bessel_j, bessel_k0};

/// `-(1/(2π θ₁ r r' sinh u)) Σ_n exp(-|λ|u + iλ(θ-θ'))`, `λ = 2πn/θ₁`,
/// summed until the terms drop below roundoff. Needs `u > 0`.
pub fn tbar_cone_fourier(p: &PointPair<f64>, theta1: f64) -> Result<f64> {
    Geometry::Cone { theta1 }.validate()?;
    let uv = u_of_pair(p)?;
    if !(uv.u > 0.0) {
        return Err(domain("Fourier series needs u > 0"));
    }
    let k = TAU / theta1;
    let c = p.delta_theta();
    let mut sum = 1.0;
    let mut n = 1usize;
    loop {
        let lam = k * n as f64;
        let decay = (-lam * uv.u).exp();
        sum += 2.0 * decay * (lam * c).cos();
        if decay < 1e-18 || n > 10_000_000 {
            break;
        }
        n += 1;
    }
    Ok(-sum / (2.0 * PI * theta1 * p.r * p.r_prime * uv.sinh_u))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSumConfig {
    pub n_max: usize,
    pub quad: QuadConfig,
}

impl Default for ModeSumConfig {
    fn default() -> Self {
        Self {
            n_max: 40,
            quad: QuadConfig {
                abs_tol: 0.0,
                rel_tol: 1e-11,
                max_intervals: 20_000,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeSum {
    pub value: f64,
    /// Contribution of each `|n|` (both signs combined for `n > 0`).
    pub terms: Vec<f64>,
    pub evaluations: usize,
}

/// `∫_0^∞ ω J_ν(ωr) J_ν(ωr') K_0(ωζ) dω`, with the range cut where the
/// `K_0` factor has decayed below `e^-50`.
pub fn mode_integral(nu: f64, r: f64, r_prime: f64, zeta: f64, quad: QuadConfig) -> Result<(f64, usize)> {
    if !(zeta > 0.0) {
        return Err(domain("mode integral needs t² + (z-z')² > 0"));
    }
    let upper = 50.0 / zeta;
    let width = (PI / (r + r_prime)).min(upper);
    let panels = ((upper / width).ceil() as usize).max(1);
    let breaks: Vec<f64> = (0..=panels).map(|i| upper * i as f64 / panels as f64).collect();
    let mut failure = None;
    let res = integrate_breaks(
        |w| {
            if w <= 0.0 {
                return 0.0;
            }
            let v = bessel_j(nu, w * r)
                .and_then(|a| Ok(a * bessel_j(nu, w * r_prime)?))
                .and_then(|jj| Ok(w * jj * bessel_k0(w * zeta)?));
            match v {
                Ok(x) => x,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            }
        },
        &breaks,
        quad,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let res = res?;
    Ok((res.value, res.evaluations))
}

/// `-(1/(π θ₁)) Σ_{|n|<=n_max} e^{iλ(θ-θ')} ∫ ω J_|λ|(ωr) J_|λ|(ωr') K_0(ωζ) dω`
/// with `ζ² = t² + (z-z')²`.
pub fn tbar_modesum_4d(p: &PointPair<f64>, theta1: f64, cfg: ModeSumConfig) -> Result<ModeSum> {
    Geometry::Cone { theta1 }.validate()?;
    p.validate()?;
    if cfg.n_max == 0 {
        return Err(domain("mode sum needs n_max >= 1"));
    }
    let zeta = (p.t * p.t + p.delta_z().powi(2)).sqrt();
    let k = TAU / theta1;
    let c = p.delta_theta();
    let (i0, mut evals) = mode_integral(0.0, p.r, p.r_prime, zeta, cfg.quad)?;
    // higher terms only need to be accurate relative to the n = 0 term
    let quad = QuadConfig {
        abs_tol: cfg.quad.rel_tol * i0.abs(),
        ..cfg.quad
    };
    let pre = -1.0 / (PI * theta1);
    let mut terms = vec![pre * i0];
    for n in 1..=cfg.n_max {
        let lam = k * n as f64;
        let (i_n, e) = mode_integral(lam, p.r, p.r_prime, zeta, quad)?;
        evals += e;
        terms.push(pre * 2.0 * (lam * c).cos() * i_n);
    }
    let value = terms.iter().rev().sum();
    Ok(ModeSum {
        value,
        terms,
        evaluations: evals,
    })
}
