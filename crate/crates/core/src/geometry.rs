//! Point pairs, backgrounds, curvature coupling and the hyperbolic
//! separation variable `u`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::jets::Scalar;

/// Two spacetime points in cylindrical coordinates plus the Euclidean time
/// separation `t` between them.
///
/// Angles are kept unreduced; the kernels do any reduction themselves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointPair<S = f64> {
    pub t: S,
    pub r: S,
    pub r_prime: S,
    pub theta: S,
    pub theta_prime: S,
    pub z: S,
    pub z_prime: S,
}

impl PointPair<f64> {
    pub fn new(
        t: f64,
        r: f64,
        r_prime: f64,
        theta: f64,
        theta_prime: f64,
        z: f64,
        z_prime: f64,
    ) -> Result<Self> {
        let p = Self {
            t,
            r,
            r_prime,
            theta,
            theta_prime,
            z,
            z_prime,
        };
        p.validate()?;
        Ok(p)
    }

    /// Spatially coincident pair split only in Euclidean time.
    pub fn split_in_time(t: f64, r: f64, theta: f64, z: f64) -> Result<Self> {
        Self::new(t, r, r, theta, theta, z, z)
    }

    /// The same pair with primed and unprimed points exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            t: self.t,
            r: self.r_prime,
            r_prime: self.r,
            theta: self.theta_prime,
            theta_prime: self.theta,
            z: self.z_prime,
            z_prime: self.z,
        }
    }

    /// All lengths multiplied by `lambda`; angles untouched.
    pub fn scaled(&self, lambda: f64) -> Self {
        Self {
            t: lambda * self.t,
            r: lambda * self.r,
            r_prime: lambda * self.r_prime,
            theta: self.theta,
            theta_prime: self.theta_prime,
            z: lambda * self.z,
            z_prime: lambda * self.z_prime,
        }
    }
}

impl<S: Scalar> PointPair<S> {
    pub fn validate(&self) -> Result<()> {
        let vals = [
            self.t.value(),
            self.r.value(),
            self.r_prime.value(),
            self.theta.value(),
            self.theta_prime.value(),
            self.z.value(),
            self.z_prime.value(),
        ];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(domain("point pair has non-finite coordinates"));
        }
        if self.r.value() <= 0.0 || self.r_prime.value() <= 0.0 {
            return Err(domain(format!(
                "radii must be positive (r = {}, r' = {}); the axis is excluded",
                self.r.value(),
                self.r_prime.value()
            )));
        }
        Ok(())
    }

    pub fn delta_theta(&self) -> S {
        self.theta - self.theta_prime
    }

    pub fn sum_theta(&self) -> S {
        self.theta + self.theta_prime
    }

    pub fn delta_z(&self) -> S {
        self.z - self.z_prime
    }

    /// `(r - r')^2 + (z - z')^2 + t^2`.
    pub fn radial_gap_sq(&self) -> S {
        (self.r - self.r_prime).sqr() + self.delta_z().sqr() + self.t.sqr()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
}

impl BoundaryCondition {
    /// Sign of the reflected image.
    pub fn image_sign(self) -> f64 {
        match self {
            BoundaryCondition::Dirichlet => -1.0,
            BoundaryCondition::Neumann => 1.0,
        }
    }
}

/// Background on which the kernel is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Geometry {
    Minkowski,
    Cone { theta1: f64 },
    Dowker,
    Wedge { theta0: f64, bc: BoundaryCondition },
    /// Flat space periodic along `z` with period `period`.
    PeriodicLine { period: f64 },
}

impl Geometry {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Geometry::Cone { theta1 } if !(theta1 > 0.0 && theta1.is_finite()) => {
                Err(domain(format!("cone angle must be positive and finite, got {theta1}")))
            }
            Geometry::Wedge { theta0, .. } if !(theta0 > 0.0 && theta0.is_finite()) => {
                Err(domain(format!("wedge angle must be positive and finite, got {theta0}")))
            }
            Geometry::PeriodicLine { period } if !(period > 0.0 && period.is_finite()) => {
                Err(domain(format!("period must be positive and finite, got {period}")))
            }
            _ => Ok(()),
        }
    }

    /// Whether `theta` lies where the geometry is defined.
    pub fn check_angle(&self, theta: f64) -> Result<()> {
        if let Geometry::Wedge { theta0, .. } = *self {
            if !(theta > 0.0 && theta < theta0) {
                return Err(domain(format!(
                    "angle {theta} outside the open wedge (0, {theta0})"
                )));
            }
        }
        Ok(())
    }

    pub fn is_scale_free(&self) -> bool {
        !matches!(self, Geometry::PeriodicLine { .. })
    }

    pub fn label(&self) -> String {
        match *self {
            Geometry::Minkowski => "minkowski".into(),
            Geometry::Cone { theta1 } => format!("cone(theta1={theta1})"),
            Geometry::Dowker => "dowker".into(),
            Geometry::Wedge { theta0, bc } => format!("wedge(theta0={theta0},{bc:?})"),
            Geometry::PeriodicLine { period } => format!("periodic_line(L={period})"),
        }
    }
}

/// `true` when a cone angle is 2π to within a few ulps, in which case the
/// cone kernels route to the flat-space formula.
pub fn is_flat_cone(theta1: f64) -> bool {
    (theta1 - TAU).abs() <= 4.0 * f64::EPSILON * TAU
}

/// Curvature coupling, stored as `beta = xi - 1/4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coupling {
    pub beta: f64,
}

impl Coupling {
    pub fn new(beta: f64) -> Self {
        Self { beta }
    }

    pub fn from_xi(xi: f64) -> Self {
        Self { beta: xi - 0.25 }
    }

    pub fn minimal() -> Self {
        Self { beta: -0.25 }
    }

    pub fn conformal() -> Self {
        Self { beta: -1.0 / 12.0 }
    }

    /// `xi = 1/4`, the algebraically simplest case.
    pub fn quarter() -> Self {
        Self { beta: 0.0 }
    }

    pub fn xi(&self) -> f64 {
        self.beta + 0.25
    }
}

/// The hyperbolic separation `u` with cached `cosh u` and `sinh u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UVariable<S = f64> {
    pub u: S,
    pub cosh_u: S,
    pub sinh_u: S,
    /// `sinh(u/2)^2 = ((r-r')^2 + (z-z')^2 + t^2) / (4 r r')`.
    pub sinh_half_sq: S,
}

/// Computes `u` from the half-angle relation
/// `4 r r' sinh^2(u/2) = (r-r')^2 + (z-z')^2 + t^2`, which is exact at
/// coincidence and free of the `r2 - r1` cancellation.
pub fn u_of_pair<S: Scalar>(p: &PointPair<S>) -> Result<UVariable<S>> {
    p.validate()?;
    let w = p.radial_gap_sq() / (p.r * p.r_prime * 4.0);
    let s = w.sqrt();
    let u = s.asinh() * 2.0;
    // cosh u = 1 + 2 sinh^2(u/2), sinh u = 2 sinh(u/2) cosh(u/2)
    let cosh_u = w * 2.0 + 1.0;
    let sinh_u = s * (w + 1.0).sqrt() * 2.0;
    Ok(UVariable {
        u,
        cosh_u,
        sinh_u,
        sinh_half_sq: w,
    })
}

/// `u` recovered independently from each of the four equivalent defining
/// relations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UFormulas {
    /// `-ln((r2 - r1)/(r2 + r1))`
    pub log_form: f64,
    /// `acosh((r^2 + r'^2 + z^2 + t^2) / 2rr')`
    pub cosh_form: f64,
    /// `asinh(sqrt([...]^2 - 4 r^2 r'^2) / 2rr')`, radicand factored
    pub sinh_form: f64,
    /// `2 asinh(sqrt(((r-r')^2 + z^2 + t^2) / 4rr'))`
    pub half_angle: f64,
}

impl UFormulas {
    pub fn all(&self) -> [f64; 4] {
        [self.log_form, self.cosh_form, self.sinh_form, self.half_angle]
    }

    pub fn max_discrepancy(&self) -> f64 {
        let v = self.all();
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in (i + 1)..4 {
                let scale = v[i].abs().max(v[j].abs());
                if scale > 0.0 {
                    worst = worst.max((v[i] - v[j]).abs() / scale);
                }
            }
        }
        worst
    }

    /// Names of the forms whose condition number exceeds 1e4 at this `u`.
    /// The log form behaves like `1/u`, the acosh form like `1/u^2`.
    pub fn ill_conditioned(&self) -> Vec<&'static str> {
        let u = self.half_angle;
        let mut out = Vec::new();
        if u < 1e-4 {
            out.push("log_form");
        }
        if u < 1e-2 {
            out.push("cosh_form");
        }
        out
    }
}

pub fn u_formulas(p: &PointPair<f64>) -> Result<UFormulas> {
    p.validate()?;
    let (r, rp) = (p.r, p.r_prime);
    let dz = p.z - p.z_prime;
    let t2 = p.t * p.t;
    let r1 = ((r - rp).powi(2) + dz * dz + t2).sqrt();
    let r2 = ((r + rp).powi(2) + dz * dz + t2).sqrt();
    let log_form = -((r2 - r1) / (r2 + r1)).ln();

    let big = r * r + rp * rp + dz * dz + t2;
    let cosh_form = (big / (2.0 * r * rp)).acosh();

    let gap = (r - rp).powi(2) + dz * dz + t2;
    // [big]^2 - 4 r^2 r'^2 = (big - 2rr')(big + 2rr') with big - 2rr' = gap
    let sinh_form = ((gap * (big + 2.0 * r * rp)).sqrt() / (2.0 * r * rp)).asinh();

    let half_angle = 2.0 * (gap / (4.0 * r * rp)).sqrt().asinh();
    Ok(UFormulas {
        log_form,
        cosh_form,
        sinh_form,
        half_angle,
    })
}

/// Largest pairwise relative difference among the four `u` formulas.
pub fn u_consistency(p: &PointPair<f64>) -> Result<f64> {
    Ok(u_formulas(p)?.max_discrepancy())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(t: f64, r: f64, rp: f64, dz: f64) -> PointPair {
        PointPair::new(t, r, rp, 0.0, 0.0, dz, 0.0).unwrap()
    }

    #[test]
    fn coincidence_gives_zero() {
        let u = u_of_pair(&pp(0.0, 1.0, 1.0, 0.0)).unwrap();
        assert_eq!(u.u, 0.0);
        assert_eq!(u.cosh_u, 1.0);
        assert_eq!(u.sinh_u, 0.0);
    }

    #[test]
    fn radial_separation_gives_ln2() {
        let u = u_of_pair(&pp(0.0, 2.0, 1.0, 0.0)).unwrap();
        assert!((u.u - std::f64::consts::LN_2).abs() < 1e-15);
        assert!((u.cosh_u - 1.25).abs() < 1e-15);
        assert!((u.sinh_u - 0.75).abs() < 1e-15);
    }

    #[test]
    fn time_separation_cosh() {
        let u = u_of_pair(&pp(1.0, 1.0, 1.0, 0.0)).unwrap();
        assert!((u.cosh_u - 1.5).abs() < 1e-15);
        assert!((u.cosh_u * u.cosh_u - u.sinh_u * u.sinh_u - 1.0).abs() < 1e-12);
    }

    #[test]
    fn axis_is_rejected() {
        assert!(PointPair::new(1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0).is_err());
        assert!(PointPair::new(1.0, 1.0, -1.0, 0.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn four_formulas_agree_when_well_conditioned() {
        assert!(u_consistency(&pp(0.0, 2.0, 1.0, 0.0)).unwrap() <= 1e-12);
        assert!(u_consistency(&pp(10.0, 1.0, 1.0, 0.0)).unwrap() <= 1e-12);
    }

    #[test]
    fn small_separation_conditioning() {
        let f = u_formulas(&pp(0.0, 1.0, 1.0, 1e-6)).unwrap();
        let rel = (f.half_angle - f.sinh_form).abs() / f.half_angle;
        assert!(rel <= 1e-9, "half vs sinh: {rel:e}");
        assert!(f.ill_conditioned().contains(&"log_form"));
    }

    #[test]
    fn couplings() {
        assert_eq!(Coupling::minimal().beta, -0.25);
        assert!((Coupling::conformal().xi() - 1.0 / 6.0).abs() < 1e-16);
        assert_eq!(Coupling::from_xi(0.25).beta, 0.0);
    }

    #[test]
    fn geometry_validation() {
        assert!(Geometry::Cone { theta1: 0.0 }.validate().is_err());
        assert!(Geometry::PeriodicLine { period: -1.0 }.validate().is_err());
        let w = Geometry::Wedge {
            theta0: 1.0,
            bc: BoundaryCondition::Dirichlet,
        };
        assert!(w.check_angle(0.5).is_ok());
        assert!(w.check_angle(1.0).is_err());
        assert!(w.check_angle(0.0).is_err());
        assert!(is_flat_cone(TAU));
        assert!(!is_flat_cone(TAU * (1.0 + 1e-12)));
    }
}
