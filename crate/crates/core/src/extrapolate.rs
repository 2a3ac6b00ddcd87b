//! Richardson extrapolation in an even variable, and the
//! finite-difference derivatives built on it.

use crate::error::{domain, Error, Result};

/// Outcome of extrapolating a sequence `f(h_k)` to `h = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Extrapolant {
    pub value: f64,
    /// `|P_{0..n} - P_{0..n-1}|`, the change from adding the last rung.
    pub error: f64,
    /// Successive diagonal extrapolants `P_{0..k}`.
    pub diagonal: Vec<f64>,
}

/// Neville–Aitken extrapolation of `f(h)` to `h = 0`, treating `f` as a
/// polynomial in `h`. For quantities even in a step `t`, pass `h = t^2`.
pub fn neville_to_zero(hs: &[f64], fs: &[f64]) -> Result<Extrapolant> {
    if hs.len() != fs.len() || hs.is_empty() {
        return Err(domain("extrapolation needs matching, non-empty ladders"));
    }
    let n = hs.len();
    let mut p = fs.to_vec();
    let mut diagonal = vec![fs[0]];
    // after pass m, p[i] holds the interpolant through rungs i-m..=i
    for m in 1..n {
        for i in (m..n).rev() {
            let (hi, hlo) = (hs[i], hs[i - m]);
            p[i] = (hlo * p[i] - hi * p[i - 1]) / (hlo - hi);
        }
        diagonal.push(p[m]);
    }
    let value = diagonal[n - 1];
    let error = if n > 1 {
        (diagonal[n - 1] - diagonal[n - 2]).abs()
    } else {
        f64::INFINITY
    };
    Ok(Extrapolant {
        value,
        error,
        diagonal,
    })
}

impl Extrapolant {
    /// Fails when the last correction is larger than the one before it
    /// and also above `floor`, which absorbs roundoff-level jitter.
    pub fn check_contraction(&self, floor: f64) -> Result<()> {
        let d = &self.diagonal;
        if d.len() < 3 {
            return Ok(());
        }
        let n = d.len();
        let last = (d[n - 1] - d[n - 2]).abs();
        let previous = (d[n - 2] - d[n - 3]).abs();
        if last > previous && last > floor {
            return Err(Error::Extrapolation { last, previous });
        }
        Ok(())
    }
}

/// First derivative by central differences with Richardson refinement.
pub fn diff1<F: FnMut(f64) -> f64>(mut f: F, x: f64, h0: f64, levels: usize) -> f64 {
    let mut hs = Vec::with_capacity(levels);
    let mut ds = Vec::with_capacity(levels);
    let mut h = h0;
    for _ in 0..levels {
        hs.push(h * h);
        ds.push((f(x + h) - f(x - h)) / (2.0 * h));
        h *= 0.5;
    }
    neville_to_zero(&hs, &ds).map(|e| e.value).unwrap_or(f64::NAN)
}

/// Second derivative by central differences with Richardson refinement.
pub fn diff2<F: FnMut(f64) -> f64>(mut f: F, x: f64, h0: f64, levels: usize) -> f64 {
    let f0 = f(x);
    let mut hs = Vec::with_capacity(levels);
    let mut ds = Vec::with_capacity(levels);
    let mut h = h0;
    for _ in 0..levels {
        hs.push(h * h);
        ds.push((f(x + h) - 2.0 * f0 + f(x - h)) / (h * h));
        h *= 0.5;
    }
    neville_to_zero(&hs, &ds).map(|e| e.value).unwrap_or(f64::NAN)
}

/// Mixed partial `d^2 f / dx dy` of a two-argument function.
pub fn diff_mixed<F: FnMut(f64, f64) -> f64>(
    mut f: F,
    x: f64,
    y: f64,
    hx0: f64,
    hy0: f64,
    levels: usize,
) -> f64 {
    let mut hs = Vec::with_capacity(levels);
    let mut ds = Vec::with_capacity(levels);
    let (mut hx, mut hy) = (hx0, hy0);
    for _ in 0..levels {
        hs.push(hx * hx);
        let d = f(x + hx, y + hy) - f(x + hx, y - hy) - f(x - hx, y + hy) + f(x - hx, y - hy);
        ds.push(d / (4.0 * hx * hy));
        hx *= 0.5;
        hy *= 0.5;
    }
    neville_to_zero(&hs, &ds).map(|e| e.value).unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn even_polynomial_is_recovered_exactly() {
        let f = |t: f64| 3.0 - 2.0 * t * t + 0.5 * t.powi(4);
        let ts = [0.4, 0.2, 0.1, 0.05];
        let hs: Vec<f64> = ts.iter().map(|t| t * t).collect();
        let fs: Vec<f64> = ts.iter().map(|&t| f(t)).collect();
        let e = neville_to_zero(&hs, &fs).unwrap();
        assert!((e.value - 3.0).abs() < 1e-13);
    }

    #[test]
    fn cosine_limit_contracts() {
        let ts: Vec<f64> = (0..6).map(|k| 0.5 * 0.5f64.powi(k)).collect();
        let hs: Vec<f64> = ts.iter().map(|t| t * t).collect();
        let fs: Vec<f64> = ts.iter().map(|&t| t.sin() / t).collect();
        let e = neville_to_zero(&hs, &fs).unwrap();
        assert!((e.value - 1.0).abs() < 1e-13);
        e.check_contraction(1e-14).unwrap();
    }

    #[test]
    fn diverging_ladder_is_rejected() {
        let hs = [1.0, 0.25, 0.0625, 0.015625];
        let fs = [0.0, 1.0, -3.0, 20.0];
        let e = neville_to_zero(&hs, &fs).unwrap();
        assert!(e.check_contraction(1e-12).is_err());
    }

    #[test]
    fn finite_differences() {
        let d1 = diff1(f64::exp, 0.3, 0.1, 5);
        let d2 = diff2(f64::exp, 0.3, 0.1, 5);
        let dm = diff_mixed(|x, y| (x * y).sin(), 0.4, 0.7, 0.05, 0.05, 5);
        let e = 0.3f64.exp();
        assert!((d1 - e).abs() < 1e-11 * e);
        assert!((d2 - e).abs() < 1e-9 * e);
        let exact = (0.28f64).cos() - 0.28 * (0.28f64).sin();
        assert!((dm - exact).abs() < 1e-9);
    }
}
