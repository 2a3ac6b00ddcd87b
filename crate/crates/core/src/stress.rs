//! Renormalized vacuum stress tensor from second derivatives of `T̄`.
//!
//! At the split point (primed = unprimed spatial coordinates, Euclidean
//! time separation `t`), with all derivatives acting on `T̄`:
//!
//! ```text
//! T00  = -½ ∂t² + β [∂r∂r' + ∂r² + ∂r/r] + β P
//! Trr  = -¼ [∂r∂r' - ∂r²] - β ∂r/r - β P
//! T⊥⊥  = ∂r/(4r) + [∂θ² - ∂θ∂θ'] / (4r²) - β [∂r∂r' + ∂r²]
//! Tzz  = -¼ [∂z∂z' - ∂z²] - β [∂r∂r' + ∂r² + ∂r/r] - β P
//! ```
//!
//! where `P = [∂θ² + ∂θ∂θ'] / r²` is the angular curvature term of
//! `⟨φ²⟩`. `P` vanishes identically when the kernel depends on `θ - θ'`
//! only, and is needed in a wedge.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::extrapolate::{diff1, neville_to_zero};
use crate::geometry::{Coupling, Geometry, PointPair};
use crate::jets::{lift, ActiveSet, Coord, Jet2};
use crate::kernels::{tbar, KernelForm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RenormMode {
    /// Flat kernel subtracted before differentiating.
    KernelSubtraction,
    /// Zero-point stress subtracted after differentiating.
    ComponentSubtraction,
    Raw,
}

/// Diagonal orthonormal components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StressTensor {
    pub t00: f64,
    pub t_rr: f64,
    pub t_perp: f64,
    pub t_zz: f64,
    pub renorm_mode: RenormMode,
    /// Euclidean time split; 0 for extrapolated values.
    pub cutoff_t: f64,
}

pub const COMPONENT_NAMES: [&str; 4] = ["T00", "Trr", "Tperp", "Tzz"];

impl StressTensor {
    pub fn from_components(c: [f64; 4], renorm_mode: RenormMode, cutoff_t: f64) -> Self {
        Self {
            t00: c[0],
            t_rr: c[1],
            t_perp: c[2],
            t_zz: c[3],
            renorm_mode,
            cutoff_t,
        }
    }

    pub fn components(&self) -> [f64; 4] {
        [self.t00, self.t_rr, self.t_perp, self.t_zz]
    }

    pub fn max_abs(&self) -> f64 {
        self.components().iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Componentwise difference; metadata from `self`.
    pub fn minus(&self, other: &StressTensor) -> StressTensor {
        let (a, b) = (self.components(), other.components());
        Self::from_components(
            [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]],
            self.renorm_mode,
            self.cutoff_t,
        )
    }

    pub fn trace(&self) -> f64 {
        trace(self)
    }
}

/// `-T00 + Trr + T⊥⊥ + Tzz`.
pub fn trace(s: &StressTensor) -> f64 {
    -s.t00 + s.t_rr + s.t_perp + s.t_zz
}

/// Stress of the flat-space kernel split in time by `t`:
/// `T00 = 3/(2π²t⁴)`, all pressures `1/(2π²t⁴)`.
pub fn zero_point_stress(t: f64) -> Result<StressTensor> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(domain(format!("zero-point stress needs t > 0, got {t}")));
    }
    let p = 1.0 / (2.0 * PI * PI * t.powi(4));
    Ok(StressTensor::from_components([3.0 * p, p, p, p], RenormMode::Raw, t))
}

/// Spatial position at which the stress is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldPoint {
    pub r: f64,
    pub theta: f64,
    pub z: f64,
}

impl FieldPoint {
    pub fn new(r: f64, theta: f64, z: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() || !theta.is_finite() || !z.is_finite() {
            return Err(domain(format!("field point needs finite r > 0, got r = {r}")));
        }
        Ok(Self { r, theta, z })
    }

    pub fn split(&self, t: f64) -> PointPair<f64> {
        PointPair {
            t,
            r: self.r,
            r_prime: self.r,
            theta: self.theta,
            theta_prime: self.theta,
            z: self.z,
            z_prime: self.z,
        }
    }
}

/// Which printed form of the tangential component to use. They agree for
/// kernels depending on `θ - θ'` only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TangentialForm {
    /// `[∂θ² - ∂θ∂θ'] / (4r²)`
    General,
    /// `∂θ² / (2r²)`
    Symmetric,
}

/// The second derivatives of a kernel that enter the stress tensor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelDerivatives {
    pub value: f64,
    pub d_tt: f64,
    pub d_r: f64,
    pub d_rr: f64,
    pub d_rrp: f64,
    pub d_thth: f64,
    pub d_ththp: f64,
    pub d_zz: f64,
    pub d_zzp: f64,
}

/// Differentiates `kernel` at the split point by lifting all seven
/// coordinates into jets.
pub fn kernel_derivatives<K>(kernel: K, point: &FieldPoint, t: f64) -> Result<KernelDerivatives>
where
    K: Fn(&PointPair<Jet2>) -> Result<Jet2>,
{
    let active = ActiveSet::all();
    let jets = lift(&point.split(t), &active);
    let k = kernel(&jets)?;
    let d2 = |a, b| active.d2(&k, a, b).expect("all coordinates are active");
    Ok(KernelDerivatives {
        value: k.value(),
        d_tt: d2(Coord::T, Coord::T),
        d_r: active.d1(&k, Coord::R).expect("active"),
        d_rr: d2(Coord::R, Coord::R),
        d_rrp: d2(Coord::R, Coord::RPrime),
        d_thth: d2(Coord::Theta, Coord::Theta),
        d_ththp: d2(Coord::Theta, Coord::ThetaPrime),
        d_zz: d2(Coord::Z, Coord::Z),
        d_zzp: d2(Coord::Z, Coord::ZPrime),
    })
}

/// Assembles the four components from kernel derivatives.
pub fn assemble(d: &KernelDerivatives, r: f64, beta: f64, form: TangentialForm) -> [f64; 4] {
    let radial = d.d_rrp + d.d_rr + d.d_r / r;
    let angular = (d.d_thth + d.d_ththp) / (r * r);
    let t00 = -0.5 * d.d_tt + beta * radial + beta * angular;
    let t_rr = -0.25 * (d.d_rrp - d.d_rr) - beta * d.d_r / r - beta * angular;
    let tangential = match form {
        TangentialForm::General => (d.d_thth - d.d_ththp) / (4.0 * r * r),
        TangentialForm::Symmetric => d.d_thth / (2.0 * r * r),
    };
    let t_perp = d.d_r / (4.0 * r) + tangential - beta * (d.d_rrp + d.d_rr);
    let t_zz = -0.25 * (d.d_zzp - d.d_zz) - beta * radial - beta * angular;
    [t00, t_rr, t_perp, t_zz]
}

/// Stress of an arbitrary kernel at `point` with time split `t`. No
/// subtraction is made; the result is tagged [`RenormMode::Raw`].
pub fn stress_from_kernel<K>(
    kernel: K,
    point: &FieldPoint,
    coupling: Coupling,
    t: f64,
    form: TangentialForm,
) -> Result<StressTensor>
where
    K: Fn(&PointPair<Jet2>) -> Result<Jet2>,
{
    check_cutoff(t)?;
    let d = kernel_derivatives(kernel, point, t)?;
    Ok(StressTensor::from_components(
        assemble(&d, point.r, coupling.beta, form),
        RenormMode::Raw,
        t,
    ))
}

fn check_cutoff(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(domain(format!("cutoff t must be positive, got {t}")));
    }
    Ok(())
}

/// Printed tangential form used for each background.
pub fn tangential_form(geometry: &Geometry) -> TangentialForm {
    match geometry {
        Geometry::Minkowski | Geometry::Cone { .. } | Geometry::Dowker => TangentialForm::Symmetric,
        Geometry::Wedge { .. } | Geometry::PeriodicLine { .. } => TangentialForm::General,
    }
}

/// Renormalized (or raw) stress at `point` with Euclidean time split `t`.
pub fn stress_at(
    geometry: &Geometry,
    point: &FieldPoint,
    coupling: Coupling,
    t: f64,
    mode: RenormMode,
) -> Result<StressTensor> {
    geometry.validate()?;
    geometry.check_angle(point.theta)?;
    check_cutoff(t)?;
    let form = tangential_form(geometry);
    let kernel_form = match mode {
        RenormMode::KernelSubtraction => KernelForm::Renormalized,
        RenormMode::ComponentSubtraction => {
            if matches!(geometry, Geometry::Wedge { .. }) {
                return Err(domain(
                    "component subtraction is not available for the wedge: its kernel is \
                     defined with the flat part already removed",
                ));
            }
            KernelForm::Full
        }
        RenormMode::Raw => KernelForm::Full,
    };
    let s = stress_from_kernel(|p| tbar(geometry, p, kernel_form), point, coupling, t, form)?;
    let c = match mode {
        RenormMode::ComponentSubtraction => s.minus(&zero_point_stress(t)?).components(),
        _ => s.components(),
    };
    Ok(StressTensor::from_components(c, mode, t))
}

/// Geometric ladder `t_k = t0 2^-k` for the `t -> 0` limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ladder {
    /// Largest rung; `None` picks [`default_t0`].
    pub t0: Option<f64>,
    pub rungs: usize,
}

impl Default for Ladder {
    fn default() -> Self {
        Self { t0: None, rungs: 6 }
    }
}

/// Distance from `point` to the nearer wedge plate.
pub fn plate_distance(theta0: f64, point: &FieldPoint) -> f64 {
    let along = |a: f64| if a < FRAC_PI_2 { a.sin() } else { 1.0 };
    point.r * along(point.theta).min(along(theta0 - point.theta))
}

/// `r/8`, reduced for sharp cones (`2π/θ₁ > 2`) so that the largest rung
/// keeps `2πu/θ₁` small, and for wedges so it stays well inside the
/// distance to the nearer plate.
pub fn default_t0(geometry: &Geometry, point: &FieldPoint) -> f64 {
    let base = point.r / 8.0;
    let sharp = |k: f64| base / (0.5 * k).max(1.0);
    match *geometry {
        Geometry::Cone { theta1 } => sharp(2.0 * PI / theta1),
        Geometry::Wedge { theta0, .. } => sharp(PI / theta0).min(0.25 * plate_distance(theta0, point)),
        Geometry::PeriodicLine { period } => period / 8.0,
        Geometry::Minkowski | Geometry::Dowker => base,
    }
}

/// A `t -> 0` stress value with its error estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtrapolatedStress {
    pub stress: StressTensor,
    /// Per component, the change produced by the last rung.
    pub error: [f64; 4],
    pub ladder: Vec<f64>,
}

/// Richardson-extrapolates the kernel-subtracted stress to `t = 0` in the
/// variable `t²` (the renormalized components are even in `t`).
pub fn stress_t0(
    geometry: &Geometry,
    point: &FieldPoint,
    coupling: Coupling,
    ladder: &Ladder,
) -> Result<ExtrapolatedStress> {
    geometry.validate()?;
    geometry.check_angle(point.theta)?;
    if ladder.rungs < 2 {
        return Err(domain("t -> 0 extrapolation needs at least two rungs"));
    }
    if let Geometry::Wedge { theta0, .. } = *geometry {
        let conformal = (coupling.beta - Coupling::conformal().beta).abs() < 1e-12;
        if !conformal && plate_distance(theta0, point) < 1e-3 * point.r {
            return Err(domain(
                "t = 0 stress diverges at the wedge plates for non-conformal coupling; \
                 point is within 1e-3 r of a plate",
            ));
        }
    }
    let t0 = ladder.t0.unwrap_or_else(|| default_t0(geometry, point));
    check_cutoff(t0)?;
    let ts: Vec<f64> = (0..ladder.rungs).map(|k| t0 * 0.5f64.powi(k as i32)).collect();
    let hs: Vec<f64> = ts.iter().map(|t| t * t).collect();
    let mut rows = Vec::with_capacity(ts.len());
    for &t in &ts {
        rows.push(stress_at(geometry, point, coupling, t, RenormMode::KernelSubtraction)?.components());
    }
    let scale = rows
        .iter()
        .flat_map(|c| c.iter())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let mut value = [0.0; 4];
    let mut error = [0.0; 4];
    for i in 0..4 {
        let fs: Vec<f64> = rows.iter().map(|c| c[i]).collect();
        let e = neville_to_zero(&hs, &fs)?;
        e.check_contraction(1e-6 * scale)?;
        value[i] = e.value;
        error[i] = e.error;
    }
    Ok(ExtrapolatedStress {
        stress: StressTensor::from_components(value, RenormMode::KernelSubtraction, 0.0),
        error,
        ladder: ts,
    })
}

/// `|dTrr/dr + (Trr - T⊥⊥)/r|` at `t -> 0`, normalized by
/// `max_i |T_i| / r`. The tensor is static and independent of `θ` and
/// `z`, so this is the whole divergence. Returns 0 for an identically
/// vanishing tensor.
pub fn conservation_residual(geometry: &Geometry, r: f64, coupling: Coupling) -> Result<f64> {
    match geometry {
        Geometry::Minkowski | Geometry::Cone { .. } | Geometry::Dowker => {}
        _ => {
            return Err(domain(
                "conservation residual is defined for Minkowski, cone and Dowker backgrounds",
            ))
        }
    }
    let at = |radius: f64| -> Result<StressTensor> {
        Ok(stress_t0(geometry, &FieldPoint::new(radius, 0.0, 0.0)?, coupling, &Ladder::default())?.stress)
    };
    let s = at(r)?;
    let scale = s.max_abs() / r;
    if scale == 0.0 {
        return Ok(0.0);
    }
    let mut failure = None;
    let d_rr = diff1(
        |x| match at(x) {
            Ok(v) => v.t_rr,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        r,
        0.1 * r,
        4,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok((d_rr + (s.t_rr - s.t_perp) / r).abs() / scale)
}
