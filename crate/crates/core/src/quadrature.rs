//! Globally adaptive Gauss–Kronrod (7/15) quadrature.

// node and weight tables are quoted to their published digits
#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{domain, Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Stopping rule and budget for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            abs_tol: 0.0,
            rel_tol: 1e-10,
            max_intervals: 4000,
        }
    }
}

impl QuadConfig {
    pub fn with_rel(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Segment {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    let value = k * h;
    let error = ((k - g) * h).abs();
    Segment { a, b, value, error }
}

/// Integrates `f` over `[a, b]`.
pub fn integrate<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, cfg: QuadConfig) -> Result<QuadResult> {
    integrate_breaks(f, &[a, b], cfg)
}

/// Integrates `f` over `[breaks[0], breaks[last]]`, starting from the
/// panels given by `breaks` (which must be increasing). Useful for
/// oscillatory integrands where a single starting panel would alias.
pub fn integrate_breaks<F: FnMut(f64) -> f64>(
    mut f: F,
    breaks: &[f64],
    cfg: QuadConfig,
) -> Result<QuadResult> {
    if breaks.len() < 2 || breaks.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(domain("quadrature breakpoints must be strictly increasing"));
    }
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut err = 0.0;
    for w in breaks.windows(2) {
        let s = gk15(&mut f, w[0], w[1]);
        total += s.value;
        err += s.error;
        heap.push(s);
    }
    let mut evals = 15 * (breaks.len() - 1);
    loop {
        let target = cfg.abs_tol.max(cfg.rel_tol * total.abs());
        if err <= target {
            break;
        }
        if !total.is_finite() {
            return Err(Error::Quadrature {
                what: "non-finite integrand".into(),
                estimate: total,
                error: err,
                tolerance: target,
            });
        }
        if heap.len() >= cfg.max_intervals {
            return Err(Error::Quadrature {
                what: format!("interval budget {} exhausted", cfg.max_intervals),
                estimate: total,
                error: err,
                tolerance: target,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // segment at roundoff width: accept what we have
            heap.push(worst);
            break;
        }
        let left = gk15(&mut f, worst.a, mid);
        let right = gk15(&mut f, mid, worst.b);
        evals += 30;
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // re-sum to shed accumulated update roundoff
    let mut segs: Vec<Segment> = heap.into_vec();
    segs.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value = segs.iter().map(|s| s.value).sum();
    let error = segs.iter().map(|s| s.error).sum();
    Ok(QuadResult {
        value,
        error,
        evaluations: evals,
    })
}

/// Integrates `f` over `[a, inf)` by mapping `[a + scale, inf)` onto a
/// finite interval with `x = a + scale / s`.
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    scale: f64,
    cfg: QuadConfig,
) -> Result<QuadResult> {
    if !(scale > 0.0) {
        return Err(domain("integrate_to_infinity needs a positive scale"));
    }
    let near = integrate(&mut f, a, a + scale, cfg)?;
    let far = integrate(
        |s: f64| {
            if s <= 0.0 {
                0.0
            } else {
                f(a + scale / s) * scale / (s * s)
            }
        },
        0.0,
        1.0,
        cfg,
    )?;
    Ok(QuadResult {
        value: near.value + far.value,
        error: near.error + far.error,
        evaluations: near.evaluations + far.evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| x.powi(7) - 3.0 * x * x, 0.0, 2.0, QuadConfig::default()).unwrap();
        assert!((r.value - (32.0 - 8.0)).abs() < 1e-13);
    }

    #[test]
    fn endpoint_singularity() {
        let r = integrate(|x| x.sqrt().recip(), 0.0, 1.0, QuadConfig::with_rel(1e-10)).unwrap();
        assert!((r.value - 2.0).abs() < 1e-8);
    }

    #[test]
    fn oscillatory_with_breaks() {
        let breaks: Vec<f64> = (0..=40).map(|i| i as f64).collect();
        let r = integrate_breaks(|x| (5.0 * x).cos() * (-0.1 * x).exp(), &breaks, QuadConfig::default())
            .unwrap();
        let exact = {
            let e = (-4.0f64).exp();
            (0.1 - e * (0.1 * (200.0f64).cos() - 5.0 * (200.0f64).sin())) / (0.01 + 25.0)
        };
        assert!((r.value - exact).abs() < 1e-11, "{} vs {}", r.value, exact);
    }

    #[test]
    fn semi_infinite() {
        let r = integrate_to_infinity(|x| 1.0 / (1.0 + x * x), 0.0, 1.0, QuadConfig::default()).unwrap();
        assert!((r.value - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let cfg = QuadConfig {
            abs_tol: 0.0,
            rel_tol: 1e-15,
            max_intervals: 3,
        };
        let r = integrate(|x| (1.0 / x).sin(), 1e-3, 1.0, cfg);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }
}
