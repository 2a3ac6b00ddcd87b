//! Second-order forward-mode differentiation.
//!
//! A [`Jet2`] carries a value, its gradient and its (symmetric) Hessian with
//! respect to up to [`MAX_ACTIVE`] coordinates of a point pair. Every kernel
//! in [`crate::kernels`] is generic over [`Scalar`], so the same code path
//! produces plain values (`f64`) or exact first and second partials (`Jet2`).
//!
//! The Hessian is stored as a packed upper triangle, so `∂a∂b` and `∂b∂a`
//! are the same memory cell.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{domain, Error, Result};
use crate::geometry::PointPair;

/// Largest number of coordinates a jet can differentiate with respect to.
pub const MAX_ACTIVE: usize = 7;
const PACKED: usize = MAX_ACTIVE * (MAX_ACTIVE + 1) / 2;

/// Number type the kernels are written against.
pub trait Scalar:
    Copy
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    /// A constant (zero derivatives).
    fn cst(v: f64) -> Self;
    /// The primal value.
    fn value(&self) -> f64;

    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sqrt(self) -> Self;
    fn sinh(self) -> Self;
    fn cosh(self) -> Self;
    fn asinh(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn atan(self) -> Self;
    fn powi(self, n: i32) -> Self;
    fn powf(self, a: f64) -> Self;
    fn recip(self) -> Self;

    fn sqr(self) -> Self {
        self * self
    }
}

impl Scalar for f64 {
    fn cst(v: f64) -> Self {
        v
    }
    fn value(&self) -> f64 {
        *self
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn sinh(self) -> Self {
        f64::sinh(self)
    }
    fn cosh(self) -> Self {
        f64::cosh(self)
    }
    fn asinh(self) -> Self {
        f64::asinh(self)
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn atan(self) -> Self {
        f64::atan(self)
    }
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
    fn powf(self, a: f64) -> Self {
        f64::powf(self, a)
    }
    fn recip(self) -> Self {
        f64::recip(self)
    }
}

/// Coordinate labels of a point pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coord {
    T,
    R,
    RPrime,
    Theta,
    ThetaPrime,
    Z,
    ZPrime,
}

impl Coord {
    pub const ALL: [Coord; 7] = [
        Coord::T,
        Coord::R,
        Coord::RPrime,
        Coord::Theta,
        Coord::ThetaPrime,
        Coord::Z,
        Coord::ZPrime,
    ];
}

/// Ordered set of coordinates that carry derivative information.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActiveSet {
    coords: Vec<Coord>,
}

impl ActiveSet {
    pub fn new(coords: &[Coord]) -> Result<Self> {
        if coords.is_empty() {
            return Err(domain("active set must not be empty"));
        }
        if coords.len() > MAX_ACTIVE {
            return Err(domain(format!(
                "active set has {} coordinates, at most {MAX_ACTIVE} allowed",
                coords.len()
            )));
        }
        for (i, c) in coords.iter().enumerate() {
            if coords[..i].contains(c) {
                return Err(domain(format!("coordinate {c:?} listed twice in active set")));
            }
        }
        Ok(Self {
            coords: coords.to_vec(),
        })
    }

    /// All seven coordinates in canonical order.
    pub fn all() -> Self {
        Self {
            coords: Coord::ALL.to_vec(),
        }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[Coord] {
        &self.coords
    }

    pub fn slot(&self, c: Coord) -> Option<usize> {
        self.coords.iter().position(|&x| x == c)
    }

    /// `∂f/∂a`, or `None` when `a` is not active.
    pub fn d1(&self, f: &Jet2, a: Coord) -> Option<f64> {
        self.slot(a).map(|i| f.grad(i))
    }

    /// `∂²f/∂a∂b`, or `None` when either coordinate is not active.
    pub fn d2(&self, f: &Jet2, a: Coord, b: Coord) -> Option<f64> {
        Some(f.hess(self.slot(a)?, self.slot(b)?))
    }
}

/// Truncated second-order Taylor expansion: value, gradient, Hessian.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet2 {
    value: f64,
    dim: usize,
    grad: [f64; MAX_ACTIVE],
    hess: [f64; PACKED],
}

#[inline]
fn tri(i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * (2 * MAX_ACTIVE - i + 1) / 2 + (j - i)
}

impl Jet2 {
    pub fn constant(value: f64) -> Self {
        Self {
            value,
            dim: 0,
            grad: [0.0; MAX_ACTIVE],
            hess: [0.0; PACKED],
        }
    }

    /// Independent variable occupying `slot` of a `dim`-dimensional active set.
    pub fn variable(value: f64, slot: usize, dim: usize) -> Self {
        assert!(slot < dim && dim <= MAX_ACTIVE, "slot {slot} out of range for dim {dim}");
        let mut j = Self::constant(value);
        j.dim = dim;
        j.grad[slot] = 1.0;
        j
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    /// Number of active slots (0 for constants).
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grad(&self, i: usize) -> f64 {
        self.grad[i]
    }

    pub fn hess(&self, i: usize, j: usize) -> f64 {
        self.hess[tri(i, j)]
    }

    pub fn gradient(&self) -> &[f64] {
        &self.grad[..self.dim]
    }

    /// Apply a scalar function through its value and first two derivatives.
    #[inline]
    pub fn chain(&self, f0: f64, f1: f64, f2: f64) -> Self {
        let mut out = Self::constant(f0);
        out.dim = self.dim;
        let n = self.dim;
        for i in 0..n {
            out.grad[i] = f1 * self.grad[i];
        }
        for i in 0..n {
            for j in i..n {
                let k = tri(i, j);
                out.hess[k] = f1 * self.hess[k] + f2 * (self.grad[i] * self.grad[j]);
            }
        }
        out
    }

    fn scale(mut self, s: f64) -> Self {
        let n = self.dim;
        self.value *= s;
        for g in &mut self.grad[..n] {
            *g *= s;
        }
        for i in 0..n {
            for j in i..n {
                self.hess[tri(i, j)] *= s;
            }
        }
        self
    }

    pub fn try_ln(self) -> Result<Self> {
        if self.value > 0.0 {
            Ok(Scalar::ln(self))
        } else {
            Err(Error::Domain(format!("ln of non-positive value {}", self.value)))
        }
    }

    pub fn try_sqrt(self) -> Result<Self> {
        if self.value > 0.0 {
            Ok(Scalar::sqrt(self))
        } else {
            Err(Error::Domain(format!(
                "sqrt at {} (derivatives undefined at or below zero)",
                self.value
            )))
        }
    }

    pub fn try_recip(self) -> Result<Self> {
        if self.value != 0.0 {
            Ok(Scalar::recip(self))
        } else {
            Err(Error::Domain("division by a jet with zero value".into()))
        }
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, rhs: Jet2) -> Jet2 {
        let mut out = self;
        out.dim = self.dim.max(rhs.dim);
        out.value += rhs.value;
        let n = rhs.dim;
        for i in 0..n {
            out.grad[i] += rhs.grad[i];
        }
        for i in 0..n {
            for j in i..n {
                out.hess[tri(i, j)] += rhs.hess[tri(i, j)];
            }
        }
        out
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: Jet2) -> Jet2 {
        self + (-rhs)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(-1.0)
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: Jet2) -> Jet2 {
        let (a, b) = (&self, &rhs);
        let n = a.dim.max(b.dim);
        let mut out = Jet2::constant(a.value * b.value);
        out.dim = n;
        for i in 0..n {
            out.grad[i] = a.value * b.grad[i] + b.value * a.grad[i];
        }
        for i in 0..n {
            for j in i..n {
                let k = tri(i, j);
                // the cross term is symmetric in (i, j) bit for bit, so
                // results do not depend on slot order
                let cross = a.grad[i] * b.grad[j] + a.grad[j] * b.grad[i];
                out.hess[k] = a.value * b.hess[k] + b.value * a.hess[k] + cross;
            }
        }
        out
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Jet2) -> Jet2 {
        let mut out = self * Scalar::recip(rhs);
        // keep the primal bit-identical to plain f64 division
        out.value = self.value / rhs.value;
        out
    }
}

impl Add<f64> for Jet2 {
    type Output = Jet2;
    fn add(mut self, rhs: f64) -> Jet2 {
        self.value += rhs;
        self
    }
}

impl Sub<f64> for Jet2 {
    type Output = Jet2;
    fn sub(mut self, rhs: f64) -> Jet2 {
        self.value -= rhs;
        self
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: f64) -> Jet2 {
        self.scale(rhs)
    }
}

impl Div<f64> for Jet2 {
    type Output = Jet2;
    fn div(self, rhs: f64) -> Jet2 {
        let mut out = self.scale(1.0 / rhs);
        out.value = self.value / rhs;
        out
    }
}

impl Add<Jet2> for f64 {
    type Output = Jet2;
    fn add(self, rhs: Jet2) -> Jet2 {
        rhs + self
    }
}

impl Sub<Jet2> for f64 {
    type Output = Jet2;
    fn sub(self, rhs: Jet2) -> Jet2 {
        (-rhs) + self
    }
}

impl Mul<Jet2> for f64 {
    type Output = Jet2;
    fn mul(self, rhs: Jet2) -> Jet2 {
        rhs.scale(self)
    }
}

impl Div<Jet2> for f64 {
    type Output = Jet2;
    fn div(self, rhs: Jet2) -> Jet2 {
        let mut out = Scalar::recip(rhs).scale(self);
        out.value = self / rhs.value;
        out
    }
}

impl Scalar for Jet2 {
    fn cst(v: f64) -> Self {
        Jet2::constant(v)
    }
    fn value(&self) -> f64 {
        self.value
    }
    fn exp(self) -> Self {
        let e = self.value.exp();
        self.chain(e, e, e)
    }
    fn ln(self) -> Self {
        let x = self.value;
        self.chain(x.ln(), 1.0 / x, -1.0 / (x * x))
    }
    fn sqrt(self) -> Self {
        let x = self.value;
        let s = x.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * x))
    }
    fn sinh(self) -> Self {
        let (sh, ch) = (self.value.sinh(), self.value.cosh());
        self.chain(sh, ch, sh)
    }
    fn cosh(self) -> Self {
        let (sh, ch) = (self.value.sinh(), self.value.cosh());
        self.chain(ch, sh, ch)
    }
    fn asinh(self) -> Self {
        let x = self.value;
        let q = 1.0 + x * x;
        let rq = q.sqrt().recip();
        self.chain(x.asinh(), rq, -x * rq / q)
    }
    fn sin(self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.chain(s, c, -s)
    }
    fn cos(self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.chain(c, -s, -c)
    }
    fn atan(self) -> Self {
        let x = self.value;
        let q = 1.0 / (1.0 + x * x);
        self.chain(x.atan(), q, -2.0 * x * q * q)
    }
    fn powi(self, n: i32) -> Self {
        let x = self.value;
        let nf = n as f64;
        let f2 = if n == 0 || n == 1 {
            0.0
        } else {
            nf * (nf - 1.0) * x.powi(n - 2)
        };
        let f1 = if n == 0 { 0.0 } else { nf * x.powi(n - 1) };
        self.chain(x.powi(n), f1, f2)
    }
    fn powf(self, a: f64) -> Self {
        let x = self.value;
        self.chain(x.powf(a), a * x.powf(a - 1.0), a * (a - 1.0) * x.powf(a - 2.0))
    }
    fn recip(self) -> Self {
        let r = 1.0 / self.value;
        self.chain(r, -r * r, 2.0 * r * r * r)
    }
}

/// Lift a point pair to jets: active coordinates become seeded variables,
/// the rest become constants.
pub fn lift(p: &PointPair<f64>, active: &ActiveSet) -> PointPair<Jet2> {
    let n = active.len();
    let seed = |c: Coord, v: f64| match active.slot(c) {
        Some(i) => Jet2::variable(v, i, n),
        None => Jet2::constant(v),
    };
    PointPair {
        t: seed(Coord::T, p.t),
        r: seed(Coord::R, p.r),
        r_prime: seed(Coord::RPrime, p.r_prime),
        theta: seed(Coord::Theta, p.theta),
        theta_prime: seed(Coord::ThetaPrime, p.theta_prime),
        z: seed(Coord::Z, p.z),
        z_prime: seed(Coord::ZPrime, p.z_prime),
    }
}
