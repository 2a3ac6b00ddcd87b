//! Value parsers for command-line flags.

use std::f64::consts::PI;

/// Parses a real number, optionally written as a multiple of π:
/// `1.5`, `pi`, `2.5pi`, `pi/4`, `2pi/3`, `1e4pi`.
pub fn angle(s: &str) -> Result<f64, String> {
    let t = s.trim().to_ascii_lowercase();
    let bad = || format!("`{s}` is not a number or a multiple of pi (e.g. 0.8pi, pi/4, 2pi/3)");
    let Some(at) = t.find("pi") else {
        return t.parse::<f64>().map_err(|_| bad());
    };
    let (head, tail) = (&t[..at], &t[at + 2..]);
    let factor = match head.trim_end_matches('*') {
        "" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| bad())?,
    };
    let divisor = match tail {
        "" => 1.0,
        d => d
            .strip_prefix('/')
            .ok_or_else(bad)?
            .parse::<f64>()
            .map_err(|_| bad())?,
    };
    let v = factor * PI / divisor;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

/// Parses a finite real number.
pub fn real(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("`{s}` is not a finite number")),
    }
}

/// Cutoff `t`: a positive value, or `0` / `extrapolate` for the `t -> 0` limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cutoff {
    At(f64),
    Zero,
}

impl Cutoff {
    pub fn label(&self) -> String {
        match self {
            Cutoff::At(t) => format!("t={t}"),
            Cutoff::Zero => "t->0".into(),
        }
    }
}

pub fn cutoff(s: &str) -> Result<Cutoff, String> {
    let t = s.trim().to_ascii_lowercase();
    if t == "extrapolate" || t == "zero" {
        return Ok(Cutoff::Zero);
    }
    let v = real(&t)?;
    if v == 0.0 {
        Ok(Cutoff::Zero)
    } else if v > 0.0 {
        Ok(Cutoff::At(v))
    } else {
        Err(format!("cutoff must be positive, 0, or `extrapolate`; got {s}"))
    }
}
