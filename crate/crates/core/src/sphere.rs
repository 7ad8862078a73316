//! Points of the Riemann sphere and fractional linear transformations.
//!
//! A [`MoebiusMap`] is either a plain determinant-one matrix or a *frame
//! plus dilation*: `F^-1 . (w -> k w) . F` with a well conditioned frame
//! `F`. The second form is what strongly loxodromic maps are stored as. A
//! map with multiplier near `1e-17` has det-one entries of size `1e8`, so the
//! repelling fixed point and the multiplier cannot be read back from a
//! matrix in double precision, but they survive untouched in the factored
//! form.
//!
//! # Multiplier convention
//!
//! [`MoebiusMap::multiplier_at`] returns the derivative of the map at a
//! fixed point. For an ordered pair of fixed points `(f, f')` this is the
//! number `m` such that the map is conjugate to `w -> m w` by a map sending
//! `f -> 0` and `f' -> infinity`; `|m| > 1` therefore means the second point
//! `f'` is attracting. [`MoebiusMap::fixed_points`] orders loxodromic fixed
//! points as `(repelling, attracting)` and [`MoebiusMap::multiplier`] is the
//! derivative at the attracting point, so `|multiplier| < 1` for every
//! loxodromic map.

use core::ops::Mul;

use num_complex::Complex64;
// float methods are inherent when std is linked
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Default chordal tolerance for point comparisons.
pub const CHORDAL_TOL: f64 = 1e-9;

/// `|tr^2 - 4|` below this classifies a map as parabolic.
pub const PARABOLIC_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A point `(z0 : z1)` of the Riemann sphere, stored with the larger
/// coordinate at modulus one. Infinity is `(1 : 0)`.
#[derive(Clone, Copy, Debug)]
pub struct SpherePoint {
    z0: Complex64,
    z1: Complex64,
}

impl SpherePoint {
    pub const INFINITY: SpherePoint = SpherePoint { z0: ONE, z1: ZERO };
    pub const ZERO: SpherePoint = SpherePoint { z0: ZERO, z1: ONE };

    pub fn from_homogeneous(z0: Complex64, z1: Complex64) -> Result<Self> {
        let scale = z0.norm().max(z1.norm());
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::DegeneratePoint);
        }
        Ok(SpherePoint {
            z0: z0 / scale,
            z1: z1 / scale,
        })
    }

    /// The finite point `z`. Non-finite input maps to infinity.
    pub fn finite(z: Complex64) -> Self {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Self::INFINITY;
        }
        Self::from_homogeneous(z, ONE).unwrap_or(Self::INFINITY)
    }

    pub fn real(x: f64) -> Self {
        Self::finite(Complex64::new(x, 0.0))
    }

    pub fn coords(&self) -> (Complex64, Complex64) {
        (self.z0, self.z1)
    }

    pub fn is_infinity(&self) -> bool {
        self.z1 == ZERO
    }

    /// The affine coordinate, or `None` at infinity.
    pub fn to_complex(&self) -> Option<Complex64> {
        if self.z1 == ZERO {
            None
        } else {
            Some(self.z0 / self.z1)
        }
    }

    /// Chordal distance on the unit sphere, in `[0, 2]`.
    pub fn chordal_distance(&self, other: &SpherePoint) -> f64 {
        let cross = self.z0 * other.z1 - self.z1 * other.z0;
        let na = (self.z0.norm_sqr() + self.z1.norm_sqr()).sqrt();
        let nb = (other.z0.norm_sqr() + other.z1.norm_sqr()).sqrt();
        2.0 * cross.norm() / (na * nb)
    }

    pub fn approx_eq(&self, other: &SpherePoint, tol: f64) -> bool {
        self.chordal_distance(other) <= tol
    }

    /// Inverse stereographic projection; infinity is the north pole.
    pub fn to_unit_sphere(&self) -> [f64; 3] {
        let n0 = self.z0.norm_sqr();
        let n1 = self.z1.norm_sqr();
        let s = n0 + n1;
        let w = self.z0 * self.z1.conj() * 2.0 / s;
        [w.re, w.im, (n0 - n1) / s]
    }

    pub fn from_unit_sphere(x: [f64; 3]) -> Self {
        let w = Complex64::new(x[0], x[1]);
        let p = if x[2] <= 0.0 {
            (w, Complex64::new(1.0 - x[2], 0.0))
        } else {
            (Complex64::new(1.0 + x[2], 0.0), w.conj())
        };
        Self::from_homogeneous(p.0, p.1).unwrap_or(Self::INFINITY)
    }
}

impl From<Complex64> for SpherePoint {
    fn from(z: Complex64) -> Self {
        SpherePoint::finite(z)
    }
}

/// A 2x2 complex matrix `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2 {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 {
        a: ONE,
        b: ZERO,
        c: ZERO,
        d: ONE,
    };

    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn diagonal(a: Complex64, d: Complex64) -> Self {
        Mat2::new(a, ZERO, ZERO, d)
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    pub fn transpose(&self) -> Self {
        Mat2::new(self.a, self.c, self.b, self.d)
    }

    pub fn adjugate(&self) -> Self {
        Mat2::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Mat2::new(self.a * k, self.b * k, self.c * k, self.d * k)
    }

    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        if det == ZERO || !det.is_finite() {
            return Err(Error::SingularMatrix);
        }
        Ok(self.adjugate().scale(det.inv()))
    }

    /// Rescaled to determinant one (one of the two square roots).
    pub fn normalized(&self) -> Result<Self> {
        let det = self.det();
        if det == ZERO || !det.is_finite() {
            return Err(Error::SingularMatrix);
        }
        Ok(self.scale(det.sqrt().inv()))
    }

    pub fn max_abs(&self) -> f64 {
        self.a
            .norm()
            .max(self.b.norm())
            .max(self.c.norm())
            .max(self.d.norm())
    }

    pub fn apply_vec(&self, v: (Complex64, Complex64)) -> (Complex64, Complex64) {
        (self.a * v.0 + self.b * v.1, self.c * v.0 + self.d * v.1)
    }

    /// Relative distance between `self` and `+-other`, after both are
    /// brought to determinant one.
    pub fn projective_distance(&self, other: &Mat2) -> f64 {
        let (Ok(x), Ok(y)) = (self.normalized(), other.normalized()) else {
            return f64::INFINITY;
        };
        let diff = |s: f64| {
            let d = Mat2::new(x.a - y.a * s, x.b - y.b * s, x.c - y.c * s, x.d - y.d * s);
            d.max_abs()
        };
        diff(1.0).min(diff(-1.0)) / x.max_abs().max(y.max_abs())
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    Identity,
    Parabolic,
    Elliptic,
    Loxodromic,
}

#[derive(Clone, Copy, Debug)]
enum Repr {
    Matrix(Mat2),
    /// `frame^-1 . (w -> factor * w) . frame`, frame of determinant one.
    Dilation { frame: Mat2, factor: Complex64 },
}

/// A fractional linear transformation `z -> (a z + b) / (c z + d)`.
#[derive(Clone, Copy, Debug)]
pub struct MoebiusMap {
    repr: Repr,
}

impl MoebiusMap {
    pub fn identity() -> Self {
        MoebiusMap {
            repr: Repr::Matrix(Mat2::IDENTITY),
        }
    }

    /// The map `z -> (a z + b) / (c z + d)` of a matrix acting on column
    /// vectors `(z, 1)`.
    pub fn from_matrix(m: Mat2) -> Result<Self> {
        Ok(MoebiusMap {
            repr: Repr::Matrix(m.normalized()?),
        })
    }

    /// The map induced on `z = u1 / u2` by a matrix acting on the row
    /// vector `(u1, u2)` from the right:
    /// `(u1, u2) -> (u1 A + u2 C, u1 B + u2 D)` induces
    /// `z -> (A z + C) / (B z + D)`. This is the only place where that
    /// convention is encoded.
    pub fn from_right_action(m: Mat2) -> Result<Self> {
        Self::from_matrix(m.transpose())
    }

    /// `z -> k z`.
    pub fn dilation(k: Complex64) -> Result<Self> {
        Self::from_frame_dilation(Mat2::IDENTITY, k)
    }

    /// `frame^-1 . (w -> k w) . frame`.
    pub fn from_frame_dilation(frame: Mat2, k: Complex64) -> Result<Self> {
        if k == ZERO || !k.is_finite() {
            return Err(Error::InvalidMultiplier);
        }
        Ok(MoebiusMap {
            repr: Repr::Dilation {
                frame: frame.normalized()?,
                factor: k,
            },
        })
    }

    /// The map fixing `f` and `f2` whose derivative at `f` is `m`.
    /// `(0, infinity, m)` gives `z -> m z`.
    pub fn from_fixed_points_multiplier(f: SpherePoint, f2: SpherePoint, m: Complex64) -> Result<Self> {
        if f.chordal_distance(&f2) <= CHORDAL_TOL {
            return Err(Error::CoincidentFixedPoints);
        }
        let (f0, f1) = f.coords();
        let (g0, g1) = f2.coords();
        let frame = Mat2::new(f1, -f0, g1, -g0);
        Self::from_frame_dilation(frame, m)
    }

    /// A Moebius map sending `p` to infinity: `z -> 1 / (z - p)`, or the
    /// identity when `p` already is infinity.
    pub fn sending_to_infinity(p: SpherePoint) -> Self {
        let (p0, p1) = p.coords();
        if p.is_infinity() {
            return Self::identity();
        }
        // (z0, z1) -> (p1 z1, p1 z0 - p0 z1)
        Self::from_matrix(Mat2::new(ZERO, p1, p1, -p0)).unwrap_or_else(|_| Self::identity())
    }

    /// Determinant-one matrix of the map.
    pub fn matrix(&self) -> Mat2 {
        match self.repr {
            Repr::Matrix(m) => m,
            Repr::Dilation { frame, factor } => {
                let s = factor.sqrt();
                frame.adjugate() * Mat2::diagonal(s, s.inv()) * frame
            }
        }
    }

    /// Lower row `(c, d)` of the determinant-one matrix, evaluated without
    /// forming the full product in the factored case.
    pub fn lower_row(&self) -> (Complex64, Complex64) {
        match self.repr {
            Repr::Matrix(m) => (m.c, m.d),
            Repr::Dilation { frame, factor } => {
                let s = factor.sqrt();
                let (p, q, r, t) = (frame.a, frame.b, frame.c, frame.d);
                (p * r * (s.inv() - s), (p * t - q * r * factor) / s)
            }
        }
    }

    /// Frame and dilation factor when the map is stored in factored form.
    pub fn frame_dilation(&self) -> Option<(Mat2, Complex64)> {
        match self.repr {
            Repr::Dilation { frame, factor } => Some((frame, factor)),
            Repr::Matrix(_) => None,
        }
    }

    pub fn apply(&self, p: SpherePoint) -> SpherePoint {
        let v = p.coords();
        let w = match self.repr {
            Repr::Matrix(m) => m.apply_vec(v),
            Repr::Dilation { frame, factor } => {
                let (w0, w1) = frame.apply_vec(v);
                // scale whichever coordinate keeps the pair bounded
                let w = if factor.norm() <= 1.0 {
                    (w0 * factor, w1)
                } else {
                    (w0, w1 / factor)
                };
                frame.adjugate().apply_vec(w)
            }
        };
        SpherePoint::from_homogeneous(w.0, w.1).unwrap_or(SpherePoint::INFINITY)
    }

    pub fn apply_complex(&self, z: Complex64) -> SpherePoint {
        self.apply(SpherePoint::finite(z))
    }

    /// `self . other`, so `compose(m1, m2)` applies `m2` first.
    pub fn compose(&self, other: &MoebiusMap) -> MoebiusMap {
        if let (Repr::Dilation { frame: f1, factor: k1 }, Repr::Dilation { frame: f2, factor: k2 }) =
            (self.repr, other.repr)
        {
            if f1.projective_distance(&f2) <= 1e-14 {
                if let Ok(m) = Self::from_frame_dilation(f1, k1 * k2) {
                    return m;
                }
            }
        }
        MoebiusMap {
            repr: Repr::Matrix((self.matrix() * other.matrix()).normalized().unwrap_or(Mat2::IDENTITY)),
        }
    }

    pub fn inverse(&self) -> MoebiusMap {
        match self.repr {
            Repr::Matrix(m) => MoebiusMap {
                repr: Repr::Matrix(m.adjugate()),
            },
            Repr::Dilation { frame, factor } => MoebiusMap {
                repr: Repr::Dilation {
                    frame,
                    factor: factor.inv(),
                },
            },
        }
    }

    /// `t . self . t^-1`. The factored form is preserved when `t` is a
    /// plain matrix.
    pub fn conjugate_by(&self, t: &MoebiusMap) -> MoebiusMap {
        match (self.repr, t.repr) {
            (Repr::Dilation { frame, factor }, Repr::Matrix(tm)) => MoebiusMap {
                repr: Repr::Dilation {
                    frame: frame * tm.adjugate(),
                    factor,
                },
            },
            _ => t.compose(self).compose(&t.inverse()),
        }
    }

    /// `tr^2` of the determinant-one matrix (sign free).
    pub fn trace_squared(&self) -> Complex64 {
        match self.repr {
            Repr::Matrix(m) => m.trace() * m.trace(),
            Repr::Dilation { factor, .. } => factor + factor.inv() + 2.0,
        }
    }

    pub fn classification(&self) -> Classification {
        match self.repr {
            Repr::Dilation { factor, .. } => {
                if (factor - ONE).norm() <= PARABOLIC_TOL {
                    Classification::Identity
                } else if (factor.norm() - 1.0).abs() <= PARABOLIC_TOL {
                    Classification::Elliptic
                } else {
                    Classification::Loxodromic
                }
            }
            Repr::Matrix(m) => {
                let t2 = m.trace() * m.trace();
                if (t2 - 4.0).norm() < PARABOLIC_TOL {
                    let off = m.b.norm().max(m.c.norm()).max((m.a - m.d).norm());
                    if off <= 1e-12 * m.max_abs().max(1.0) {
                        Classification::Identity
                    } else {
                        Classification::Parabolic
                    }
                } else if t2.im.abs() <= PARABOLIC_TOL && t2.re >= 0.0 && t2.re <= 4.0 {
                    Classification::Elliptic
                } else {
                    Classification::Loxodromic
                }
            }
        }
    }

    pub fn is_loxodromic(&self) -> bool {
        self.classification() == Classification::Loxodromic
    }

    /// Both fixed points; `(repelling, attracting)` for loxodromic maps.
    /// A parabolic map reports its single fixed point twice.
    pub fn fixed_points(&self) -> Result<(SpherePoint, SpherePoint)> {
        let class = self.classification();
        if class == Classification::Identity {
            return Err(Error::IdentityMap);
        }
        match self.repr {
            Repr::Dilation { frame, factor } => {
                let inv = frame.adjugate();
                let zero = SpherePoint::from_homogeneous(inv.b, inv.d)?;
                let inf = SpherePoint::from_homogeneous(inv.a, inv.c)?;
                // derivative at frame^-1(0) is `factor`
                if factor.norm() >= 1.0 {
                    Ok((zero, inf))
                } else {
                    Ok((inf, zero))
                }
            }
            Repr::Matrix(m) => {
                let tr = m.trace();
                let disc = (tr * tr - 4.0).sqrt();
                let (p, q) = ((tr + disc) * 0.5, (tr - disc) * 0.5);
                let big = if p.norm() >= q.norm() { p } else { q };
                let small = big.inv();
                let att = eigvec_point(&m, big)?;
                if class == Classification::Parabolic {
                    return Ok((att, att));
                }
                let rep = eigvec_point(&m, small)?;
                Ok((rep, att))
            }
        }
    }

    /// Derivative of the map at its fixed point `p` (chart independent).
    pub fn multiplier_at(&self, p: SpherePoint) -> Result<Complex64> {
        let (f, f2) = self.fixed_points()?;
        let tol = 1e-6;
        match self.repr {
            Repr::Dilation { factor, .. } => {
                let (rep, att) = (f, f2);
                let k_rep = if factor.norm() >= 1.0 { factor } else { factor.inv() };
                if p.chordal_distance(&rep) <= tol && p.chordal_distance(&rep) <= p.chordal_distance(&att) {
                    Ok(k_rep)
                } else if p.chordal_distance(&att) <= tol {
                    Ok(k_rep.inv())
                } else {
                    Err(Error::NotFixedPoint)
                }
            }
            Repr::Matrix(m) => {
                if p.chordal_distance(&self.apply(p)) > tol {
                    return Err(Error::NotFixedPoint);
                }
                let (v0, v1) = p.coords();
                let (w0, w1) = m.apply_vec((v0, v1));
                let lambda = if v0.norm() >= v1.norm() { w0 / v0 } else { w1 / v1 };
                Ok(m.det() / (lambda * lambda))
            }
        }
    }

    /// Derivative at the attracting fixed point (`|m| <= 1`). For elliptic
    /// maps this is the derivative at the first reported fixed point;
    /// parabolic maps and the identity give 1.
    pub fn multiplier(&self) -> Complex64 {
        match self.repr {
            Repr::Dilation { factor, .. } => {
                if factor.norm() <= 1.0 {
                    factor
                } else {
                    factor.inv()
                }
            }
            Repr::Matrix(m) => match self.classification() {
                Classification::Identity | Classification::Parabolic => ONE,
                _ => {
                    let tr = m.trace();
                    let disc = (tr * tr - 4.0).sqrt();
                    let (p, q) = ((tr + disc) * 0.5, (tr - disc) * 0.5);
                    let big = if p.norm() >= q.norm() { p } else { q };
                    let small = big.inv();
                    small / big
                }
            }
        }
    }

    /// Projective equality. Loxodromic maps are compared through their
    /// fixed points (chordal) and multipliers (relative), which stays
    /// meaningful when the matrix entries are huge.
    pub fn approx_eq(&self, other: &MoebiusMap, tol: f64) -> bool {
        if self.is_loxodromic() && other.is_loxodromic() {
            let (Ok((r1, a1)), Ok((r2, a2))) = (self.fixed_points(), other.fixed_points()) else {
                return false;
            };
            let (m1, m2) = (self.multiplier(), other.multiplier());
            return r1.chordal_distance(&r2) <= tol
                && a1.chordal_distance(&a2) <= tol
                && (m1 - m2).norm() <= tol * m1.norm().max(m2.norm());
        }
        self.matrix().projective_distance(&other.matrix()) <= tol
    }
}

fn eigvec_point(m: &Mat2, lambda: Complex64) -> Result<SpherePoint> {
    let u = (m.b, lambda - m.a);
    let v = (lambda - m.d, m.c);
    let nu = u.0.norm_sqr() + u.1.norm_sqr();
    let nv = v.0.norm_sqr() + v.1.norm_sqr();
    if nu >= nv {
        SpherePoint::from_homogeneous(u.0, u.1)
    } else {
        SpherePoint::from_homogeneous(v.0, v.1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pt(re: f64, im: f64) -> SpherePoint {
        SpherePoint::finite(c(re, im))
    }

    #[test]
    fn identity_fixes_points() {
        let p = pt(3.0, 4.0);
        assert!(MoebiusMap::identity().apply(p).approx_eq(&p, 1e-15));
    }

    #[test]
    fn inversion_sends_infinity_to_zero() {
        let inv = MoebiusMap::from_matrix(Mat2::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0))).unwrap();
        assert!(inv.apply(SpherePoint::INFINITY).approx_eq(&SpherePoint::ZERO, 1e-15));
        assert!(inv.apply(SpherePoint::ZERO).is_infinity());
    }

    #[test]
    fn right_action_of_diagonal_circuit_expands() {
        // theta0 with eps^2 = 1/2, c = 1 - i theta0
        let theta0 = 2f64.ln() / (2.0 * PI);
        let cc = c(1.0, -theta0);
        let e = (Complex64::i() * 2.0 * PI * (c(1.0, 0.0) - cc)).exp();
        assert!((e - c(0.5, 0.0)).norm() < 1e-15);
        // (u1, u2) -> (u1, e u2) so z = u1/u2 -> z / e
        let g1 = MoebiusMap::from_right_action(Mat2::diagonal(c(1.0, 0.0), e)).unwrap();
        let img = g1.apply(pt(1.0, 0.0)).to_complex().unwrap();
        assert!((img - c(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn compose_order() {
        let double = MoebiusMap::dilation(c(2.0, 0.0)).unwrap();
        let shift = MoebiusMap::from_matrix(Mat2::new(c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0))).unwrap();
        let m = double.compose(&shift);
        let expect = MoebiusMap::from_matrix(Mat2::new(c(2.0, 0.0), c(2.0, 0.0), c(0.0, 0.0), c(1.0, 0.0))).unwrap();
        assert!(m.approx_eq(&expect, 1e-14));
        let z = pt(0.3, -0.7);
        assert!(m.apply(z).approx_eq(&double.apply(shift.apply(z)), 1e-14));
    }

    #[test]
    fn compose_with_inverse_is_identity() {
        let m = MoebiusMap::from_matrix(Mat2::new(c(1.0, 2.0), c(0.5, 0.0), c(-1.0, 0.3), c(2.0, -1.0))).unwrap();
        assert_eq!(m.compose(&m.inverse()).classification(), Classification::Identity);
        assert!(MoebiusMap::identity().compose(&m).approx_eq(&m, 1e-14));
    }

    #[test]
    fn dilation_inverse() {
        let m = MoebiusMap::dilation(c(3.0, 1.0)).unwrap();
        let inv = m.inverse();
        let z = inv.apply(pt(1.0, 0.0)).to_complex().unwrap();
        assert!((z - c(3.0, 1.0).inv()).norm() < 1e-15);
    }

    #[test]
    fn parabolic_translation() {
        let m = MoebiusMap::from_matrix(Mat2::new(c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0))).unwrap();
        assert_eq!(m.classification(), Classification::Parabolic);
        let (f, g) = m.fixed_points().unwrap();
        assert!(f.is_infinity() && g.is_infinity());
    }

    #[test]
    fn identity_has_no_fixed_points() {
        assert_eq!(MoebiusMap::identity().fixed_points().unwrap_err(), Error::IdentityMap);
    }

    #[test]
    fn normal_form_from_fixed_points() {
        let m = c(0.3, 0.2);
        let g = MoebiusMap::from_fixed_points_multiplier(SpherePoint::ZERO, SpherePoint::INFINITY, m).unwrap();
        let expect = MoebiusMap::from_matrix(Mat2::diagonal(m, c(1.0, 0.0))).unwrap();
        assert!(g.approx_eq(&expect, 1e-14));
        assert!(g.matrix().projective_distance(&expect.matrix()) < 1e-14);
        // 0 attracting, infinity repelling
        let (rep, att) = g.fixed_points().unwrap();
        assert!(rep.is_infinity());
        assert!(att.approx_eq(&SpherePoint::ZERO, 1e-15));
        assert!((g.multiplier() - m).norm() < 1e-15);
        assert!((g.multiplier_at(SpherePoint::INFINITY).unwrap() - m.inv()).norm() < 1e-13);
    }

    #[test]
    fn coincident_fixed_points_rejected() {
        let e = MoebiusMap::from_fixed_points_multiplier(pt(1.0, 0.0), pt(1.0, 0.0), c(2.0, 0.0));
        assert_eq!(e.unwrap_err(), Error::CoincidentFixedPoints);
    }

    #[test]
    fn matrix_multiplier_at_infinity() {
        // z -> 4 z + 1 fixes infinity with derivative 1/4 in the chart 1/z
        let m = MoebiusMap::from_matrix(Mat2::new(c(4.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0))).unwrap();
        let k = m.multiplier_at(SpherePoint::INFINITY).unwrap();
        assert!((k - c(0.25, 0.0)).norm() < 1e-14);
        assert!((m.multiplier() - c(0.25, 0.0)).norm() < 1e-14);
        let (rep, att) = m.fixed_points().unwrap();
        assert!(att.is_infinity());
        assert!(rep.approx_eq(&pt(-1.0 / 3.0, 0.0), 1e-14));
    }

    #[test]
    fn strong_loxodromic_keeps_structure() {
        let k = c((-12.0 * PI).exp(), 0.0) * Complex64::from_polar(1.0, 0.4);
        let g = MoebiusMap::from_fixed_points_multiplier(pt(0.45, 0.0), pt(1.0, 0.0), k).unwrap();
        let (rep, att) = g.fixed_points().unwrap();
        assert!(rep.approx_eq(&pt(1.0, 0.0), 1e-14));
        assert!(att.approx_eq(&pt(0.45, 0.0), 1e-14));
        assert!((g.multiplier() / k - 1.0).norm() < 1e-14);
        let z = g.apply(pt(1.0 + 1e-9, 0.0));
        assert!(z.to_complex().unwrap().norm() < 1.0);
    }

    #[test]
    fn sphere_roundtrip() {
        for p in [pt(0.0, 0.0), pt(3.0, -4.0), pt(1e-8, 1e-9), pt(1e9, 2e9), SpherePoint::INFINITY] {
            let q = SpherePoint::from_unit_sphere(p.to_unit_sphere());
            assert!(p.approx_eq(&q, 1e-14));
        }
    }

    #[test]
    fn chordal_distance_handles_infinity() {
        assert!((SpherePoint::ZERO.chordal_distance(&SpherePoint::INFINITY) - 2.0).abs() < 1e-15);
        assert!(pt(1e20, 0.0).approx_eq(&SpherePoint::INFINITY, 1e-15));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_c(r: f64) -> impl Strategy<Value = Complex64> {
            (-r..r, -r..r).prop_map(|(x, y)| Complex64::new(x, y))
        }

        fn arb_mat() -> impl Strategy<Value = Mat2> {
            (arb_c(2.0), arb_c(2.0), arb_c(2.0), arb_c(2.0))
                .prop_filter("regular", |(a, b, c, d)| (a * d - b * c).norm() > 0.2)
                .prop_map(|(a, b, c, d)| Mat2::new(a, b, c, d))
        }

        proptest! {
            #[test]
            fn projective_consistency(m in arb_mat(), k in arb_c(3.0), z in arb_c(3.0)) {
                prop_assume!(k.norm() > 0.1);
                let g = MoebiusMap::from_matrix(m).unwrap();
                let h = MoebiusMap::from_matrix(m.scale(k)).unwrap();
                let p = SpherePoint::finite(z);
                prop_assert!(g.apply(p).chordal_distance(&h.apply(p)) < 1e-10);
                prop_assert_eq!(g.classification(), h.classification());
                if g.is_loxodromic() {
                    prop_assert!((g.multiplier() - h.multiplier()).norm() < 1e-10);
                    let (r1, a1) = g.fixed_points().unwrap();
                    let (r2, a2) = h.fixed_points().unwrap();
                    prop_assert!(r1.chordal_distance(&r2) < 1e-10 && a1.chordal_distance(&a2) < 1e-10);
                }
            }

            #[test]
            fn multiplier_trace_identity(m in arb_mat()) {
                let g = MoebiusMap::from_matrix(m).unwrap();
                prop_assume!(g.is_loxodromic());
                let k = g.multiplier();
                let lhs = k + k.inv() + 2.0;
                let rhs = m.trace() * m.trace() / m.det();
                prop_assert!((lhs - rhs).norm() < 1e-10 * rhs.norm().max(1.0));
                let (rep, att) = g.fixed_points().unwrap();
                prop_assert!(g.apply(rep).chordal_distance(&rep) < 1e-9);
                prop_assert!(g.apply(att).chordal_distance(&att) < 1e-9);
                prop_assert!(k.norm() < 1.0);
            }

            #[test]
            fn conjugation_covariance(m in arb_mat(), t in arb_mat()) {
                let g = MoebiusMap::from_matrix(m).unwrap();
                prop_assume!(g.is_loxodromic() && (g.multiplier().norm() - 1.0).abs() > 1e-3);
                let tt = MoebiusMap::from_matrix(t).unwrap();
                let h = g.conjugate_by(&tt);
                let (r1, a1) = g.fixed_points().unwrap();
                let (r2, a2) = h.fixed_points().unwrap();
                prop_assert!(tt.apply(r1).chordal_distance(&r2) < 1e-9);
                prop_assert!(tt.apply(a1).chordal_distance(&a2) < 1e-9);
                prop_assert!((g.multiplier() - h.multiplier()).norm() < 1e-9);
            }

            #[test]
            fn fixed_point_roundtrip(f in arb_c(3.0), g in arb_c(3.0), k in arb_c(3.0)) {
                prop_assume!((f - g).norm() > 0.1 && (k.norm() - 1.0).abs() > 0.05);
                let (pf, pg) = (SpherePoint::finite(f), SpherePoint::finite(g));
                let m = MoebiusMap::from_fixed_points_multiplier(pf, pg, k).unwrap();
                prop_assert!((m.multiplier_at(pf).unwrap() - k).norm() < 1e-10 * k.norm());
                let (rep, att) = m.fixed_points().unwrap();
                let (er, ea) = if k.norm() > 1.0 { (pf, pg) } else { (pg, pf) };
                prop_assert!(rep.chordal_distance(&er) < 1e-10 && att.chordal_distance(&ea) < 1e-10);
                let rebuilt = MoebiusMap::from_matrix(m.matrix()).unwrap();
                prop_assert!(rebuilt.approx_eq(&m, 1e-9));
            }

            #[test]
            fn apply_stays_finite(m in arb_mat(), z0 in arb_c(0.7), z1 in arb_c(0.7)) {
                prop_assume!(z0.norm() + z1.norm() > 1e-3);
                let p = SpherePoint::from_homogeneous(z0, z1).unwrap();
                let (w0, w1) = MoebiusMap::from_matrix(m).unwrap().apply(p).coords();
                prop_assert!(w0.is_finite() && w1.is_finite());
            }
        }
    }
}
