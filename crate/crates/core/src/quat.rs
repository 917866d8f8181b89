//! Quaternion arithmetic, the Cassini pseudo-metric and spherical powers.
//!
//! Components are stored as four `f64` in the order `w + x i + y j + z k`.
//! Nothing is ever normalized implicitly.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Absolute tolerance used when deciding whether two quaternions share a sphere.
pub const SAME_SPHERE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    #[inline]
    pub const fn real(r: f64) -> Self {
        Self::new(r, 0.0, 0.0, 0.0)
    }

    /// The point `r + s·unit` of the slice spanned by `unit`.
    #[inline]
    pub fn on_slice(r: f64, s: f64, unit: Quaternion) -> Self {
        Self::real(r) + unit * s
    }

    #[inline]
    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    #[inline]
    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    #[inline]
    pub fn re(self) -> f64 {
        self.w
    }

    #[inline]
    pub fn im(self) -> Quaternion {
        Self::new(0.0, self.x, self.y, self.z)
    }

    #[inline]
    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `|Im(q)|`, invariant under sign changes and permutations of the imaginary components.
    #[inline]
    pub fn im_norm(self) -> f64 {
        let mut c = [self.x.abs(), self.y.abs(), self.z.abs()];
        c.sort_by(f64::total_cmp);
        (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt()
    }

    #[inline]
    pub fn is_real(self) -> bool {
        self.x == 0.0 && self.y == 0.0 && self.z == 0.0
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Unit imaginary direction of `q`, i.e. the `J ∈ S` with `q ∈ C_J`.
    ///
    /// Real quaternions lie on every slice; `i` is returned for them.
    pub fn imag_unit(self) -> Quaternion {
        let s = self.im_norm();
        if s == 0.0 {
            Self::I
        } else {
            self.im() * (1.0 / s)
        }
    }

    /// Multiplicative inverse `q̄ / |q|²`.
    pub fn inv(self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            return Err(Error::Domain("inverse of the zero quaternion".into()));
        }
        Ok(self.conj() * (1.0 / n2))
    }

    /// Integer power by repeated squaring.
    pub fn powi(self, mut k: u32) -> Self {
        let mut base = self;
        let mut acc = Self::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }

    pub fn sphere(self) -> SpherePoint {
        SpherePoint::new(self.w, self.im_norm())
    }

    pub fn same_sphere(self, other: Quaternion) -> bool {
        self.sphere().matches(other.sphere(), SAME_SPHERE_TOL)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i{:+}j{:+}k", self.w, self.x, self.y, self.z)
    }
}

impl From<f64> for Quaternion {
    fn from(r: f64) -> Self {
        Self::real(r)
    }
}

impl Add for Quaternion {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Quaternion {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product with `ij = k`, `jk = i`, `ki = j`.
impl Mul for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, r: f64) -> Self {
        Self::new(self.w * r, self.x * r, self.y * r, self.z * r)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    #[inline]
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn div(self, r: f64) -> Self {
        Self::new(self.w / r, self.x / r, self.y / r, self.z / r)
    }
}

impl AddAssign for Quaternion {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl SubAssign for Quaternion {
    #[inline]
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl MulAssign for Quaternion {
    #[inline]
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}

impl Serialize for Quaternion {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_array().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Quaternion {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let a = <[f64; 4]>::deserialize(d)?;
        Ok(Self::from_array(a))
    }
}

/// The 2-sphere `r + s·S`; `s = 0` is the real point `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint {
    pub r: f64,
    pub s: f64,
}

impl SpherePoint {
    pub fn new(r: f64, s: f64) -> Self {
        Self { r, s: s.abs() }
    }

    pub fn matches(self, other: SpherePoint, tol: f64) -> bool {
        (self.r - other.r).abs() <= tol && (self.s - other.s).abs() <= tol
    }

    /// Representative `r + s i` of the sphere.
    pub fn representative(self) -> Quaternion {
        Quaternion::new(self.r, self.s, 0.0, 0.0)
    }

    pub fn point(self, unit: Quaternion) -> Quaternion {
        Quaternion::on_slice(self.r, self.s, unit)
    }
}

/// `△_q(p) = p² − 2Re(q)p + |q|²`.
///
/// Evaluated as `(a − r)² + (s_q − s_p)(s_q + s_p) + 2(a − r)Im(p)` with `p = a + Im(p)`,
/// `r = Re(q)`, `s = |Im|`, so it vanishes exactly when `p` and `q` have equal real
/// parts and equal `im_norm`.
#[inline]
pub fn triangle(q: Quaternion, p: Quaternion) -> Quaternion {
    let d = p.w - q.w;
    let (sp, sq) = (p.im_norm(), q.im_norm());
    Quaternion::real(d * d + (sq - sp) * (sq + sp)) + p.im() * (2.0 * d)
}

/// Cassini pseudo-metric `u(p, q) = sqrt(|△_q(p)|)`.
#[inline]
pub fn cassini_u(p: Quaternion, q: Quaternion) -> f64 {
    triangle(q, p).norm().sqrt()
}

/// Cassini ball `U(q0, R) = {p : u(p, q0) < R}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CassiniBall {
    pub center: Quaternion,
    pub radius: f64,
}

impl CassiniBall {
    pub fn new(center: Quaternion, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidInput(format!("Cassini radius must be positive, got {radius}")));
        }
        Ok(Self { center, radius })
    }

    pub fn contains(&self, p: Quaternion) -> bool {
        triangle(self.center, p).norm() < self.radius * self.radius
    }

    /// `u(p, q0) / R`; below one exactly inside the ball.
    pub fn relative_distance(&self, p: Quaternion) -> f64 {
        cassini_u(p, self.center) / self.radius
    }
}

/// Spherical power `p_{q0,n}(q)`: `△_{q0}(q)^k` for `n = 2k`, `(q − q0)△_{q0}(q)^k` for `n = 2k+1`.
pub fn spherical_power(q0: Quaternion, n: u32, q: Quaternion) -> Quaternion {
    let h = triangle(q0, q).powi(n / 2);
    if n % 2 == 0 {
        h
    } else {
        (q - q0) * h
    }
}

/// Spherical derivative of `p_{q0,n}` at `q`.
///
/// Uses the factorization `h^k − h̄^k = (h − h̄)·Σ h^m h̄^(k−1−m)` with `h = △_{q0}(q)`,
/// which agrees with `(p(q) − p(q̄))(q − q̄)^{-1}` off the real axis and with the
/// real-axis derivative on it, with no cancellation near the axis.
pub fn spherical_power_sderiv(q0: Quaternion, n: u32, q: Quaternion) -> Quaternion {
    let k = n / 2;
    let h = triangle(q0, q);
    let d_h = 2.0 * (q.re() - q0.re());
    let sderiv_hk = geometric_sum(h, h.conj(), k) * d_h;
    if n % 2 == 0 {
        sderiv_hk
    } else {
        h.powi(k) + (q.conj() - q0) * sderiv_hk
    }
}

/// `Σ_{m=0}^{k-1} a^m b^(k-1-m)` for commuting `a`, `b`.
fn geometric_sum(a: Quaternion, b: Quaternion, k: u32) -> Quaternion {
    let mut acc = Quaternion::ZERO;
    let mut bpow = Quaternion::ONE;
    for _ in 0..k {
        acc = acc * a + bpow;
        bpow = bpow * b;
    }
    // acc_{m+1} = acc_m·a + b^m gives Σ a^(k-1-m) b^m, the same sum since a, b commute
    acc
}
