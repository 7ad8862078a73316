//! Closed generalized disks on the Riemann sphere.
//!
//! A disk is the sublevel set
//! `{ z : A|z|^2 + B conj(z) + conj(B) z + D <= 0 }`
//! of the Hermitian matrix `H = [[A, B], [conj(B), D]]` evaluated at `(z, 1)`.
//! `A > 0` is a bounded disk, `A < 0` contains infinity and `A = 0` is a
//! half-plane. The complementary disk is `-H`.
//!
//! Besides the triple the discriminant `delta = |B|^2 - A D > 0` is stored
//! on its own. For a disk of radius `1e-8` centered near `1` the value of
//! `delta` lies below the rounding error of `|B|^2` and `A D`, yet it is
//! exactly what Moebius transport preserves (`delta` scales by `|det|^2`),
//! so carrying it keeps radii and membership tests accurate.

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::sphere::{Mat2, MoebiusMap, SpherePoint};
use crate::{Error, Result};

/// Disjointness requires a spherical gap larger than this (radians).
pub const DISJOINT_TOL: f64 = 1e-10;

/// Angular band treated as the boundary by [`GeneralizedDisk::contains`].
pub const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Containment {
    Inside,
    Boundary,
    Outside,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Disjointness {
    pub disjoint: bool,
    /// `arccosh` of the inversive distance when disjoint (Moebius
    /// invariant, positive); otherwise the non-positive spherical gap in
    /// radians.
    pub margin: f64,
}

/// A spherical cap `{ x : angle(x, center) <= radius }` on the unit sphere.
#[derive(Clone, Copy, Debug)]
pub struct Cap {
    pub center: [f64; 3],
    pub radius: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneralizedDisk {
    a: f64,
    b: Complex64,
    d: f64,
    delta: f64,
}

enum FormMode {
    Direct,
    AForm,
    DForm,
}

impl GeneralizedDisk {
    pub fn from_hermitian(a: f64, b: Complex64, d: f64) -> Result<Self> {
        Self::from_parts(a, b, d, b.norm_sqr() - a * d)
    }

    /// Triple plus an independently known discriminant `|B|^2 - A D`.
    pub fn from_parts(a: f64, b: Complex64, d: f64, delta: f64) -> Result<Self> {
        if !(delta > 0.0) || !a.is_finite() || !d.is_finite() || !b.is_finite() || !delta.is_finite() {
            return Err(Error::DegenerateDisk);
        }
        Ok(GeneralizedDisk { a, b, d, delta }.normalized())
    }

    pub fn from_center_radius(center: Complex64, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::NonpositiveRadius(radius));
        }
        Self::from_parts(1.0, -center, center.norm_sqr() - radius * radius, radius * radius)
    }

    /// `{ |z - center| >= radius }`, a disk containing infinity.
    pub fn exterior(center: Complex64, radius: f64) -> Result<Self> {
        Ok(Self::from_center_radius(center, radius)?.complement())
    }

    /// `{ z : Re(conj(normal) (z - point)) <= 0 }`.
    pub fn half_plane(point: Complex64, normal: Complex64) -> Result<Self> {
        let b = normal * 0.5;
        Self::from_parts(0.0, b, -(normal.conj() * point).re, b.norm_sqr())
    }

    /// The isometric disk `{ |c z + d| <= 1 }` of the determinant-one
    /// matrix of `m`, on which `|m'(z)| >= 1`. `None` when `m` fixes
    /// infinity.
    pub fn isometric(m: &MoebiusMap) -> Option<Self> {
        let (c, d) = m.lower_row();
        if c.norm() <= 1e-300 {
            return None;
        }
        Self::from_parts(c.norm_sqr(), c.conj() * d, d.norm_sqr() - 1.0, c.norm_sqr()).ok()
    }

    fn normalized(self) -> Self {
        // division keeps the largest entry at exactly one, so renormalizing is a no-op
        let s = self.a.abs().max(self.b.norm()).max(self.d.abs());
        GeneralizedDisk {
            a: self.a / s,
            b: self.b / s,
            d: self.d / s,
            delta: self.delta / s / s,
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> Complex64 {
        self.b
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn discriminant(&self) -> f64 {
        self.delta
    }

    /// `true` for `A > 0`.
    pub fn is_bounded(&self) -> bool {
        self.a > 0.0
    }

    pub fn contains_infinity(&self) -> bool {
        self.a < 0.0
    }

    /// Center of the boundary circle (undefined for half-planes).
    pub fn center(&self) -> Option<Complex64> {
        if self.a == 0.0 {
            None
        } else {
            Some(-self.b / self.a)
        }
    }

    /// Radius of the boundary circle (undefined for half-planes).
    pub fn radius(&self) -> Option<f64> {
        if self.a == 0.0 {
            None
        } else {
            Some(self.delta.sqrt() / self.a.abs())
        }
    }

    pub fn complement(&self) -> Self {
        GeneralizedDisk {
            a: -self.a,
            b: -self.b,
            d: -self.d,
            delta: self.delta,
        }
    }

    fn mode(&self) -> FormMode {
        if self.delta > 0.25 {
            FormMode::Direct
        } else if self.a.abs() >= self.d.abs() {
            FormMode::AForm
        } else {
            FormMode::DForm
        }
    }

    /// `u^* H w`, evaluated in a cancellation-free arrangement.
    fn sesquilinear(&self, u: (Complex64, Complex64), w: (Complex64, Complex64)) -> Complex64 {
        let (a, b, d, delta) = (self.a, self.b, self.d, self.delta);
        match self.mode() {
            FormMode::Direct => u.0.conj() * (w.0 * a + b * w.1) + u.1.conj() * (b.conj() * w.0 + w.1 * d),
            FormMode::AForm => {
                let lu = u.0 * a + b * u.1;
                let lw = w.0 * a + b * w.1;
                (lu.conj() * lw - u.1.conj() * w.1 * delta) / a
            }
            FormMode::DForm => {
                let lu = b.conj() * u.0 + u.1 * d;
                let lw = b.conj() * w.0 + w.1 * d;
                (lu.conj() * lw - u.0.conj() * w.0 * delta) / d
            }
        }
    }

    /// Value of the form at the normalized homogeneous coordinates of `p`.
    pub fn form_value(&self, p: SpherePoint) -> f64 {
        let v = p.coords();
        self.sesquilinear(v, v).re
    }

    /// Congruence `N^* H N` with `N` the inverse of the map's matrix.
    fn congruence(&self, n: &Mat2) -> Self {
        let c1 = (n.a, n.c);
        let c2 = (n.b, n.d);
        let a = self.sesquilinear(c1, c1).re;
        let d = self.sesquilinear(c2, c2).re;
        let b = self.sesquilinear(c1, c2);
        let delta = self.delta * n.det().norm_sqr();
        GeneralizedDisk { a, b, d, delta }.normalized()
    }

    /// Image of the disk under `z -> k z`: exact scaling of the form.
    fn dilate(&self, k: Complex64) -> Self {
        // N = diag(1, k) up to scale
        GeneralizedDisk {
            a: self.a,
            b: self.b * k,
            d: self.d * k.norm_sqr(),
            delta: self.delta * k.norm_sqr(),
        }
        .normalized()
    }

    /// Exact Moebius transport: `z` is in `self` iff `m(z)` is in the
    /// result.
    pub fn transform(&self, m: &MoebiusMap) -> Self {
        match m.frame_dilation() {
            Some((frame, k)) => self.congruence(&frame.adjugate()).dilate(k).congruence(&frame),
            None => self.congruence(&m.matrix().adjugate()),
        }
    }

    /// The disk as a cap on the unit sphere.
    pub fn cap(&self) -> Cap {
        let n = [2.0 * self.b.re, 2.0 * self.b.im, self.a - self.d];
        let s = self.a + self.d;
        let norm = (4.0 * self.delta + s * s).sqrt();
        Cap {
            center: [-n[0] / norm, -n[1] / norm, -n[2] / norm],
            radius: (2.0 * self.delta.sqrt()).atan2(s),
        }
    }

    /// Spherical center: the interior point farthest from the boundary.
    pub fn interior_point(&self) -> SpherePoint {
        SpherePoint::from_unit_sphere(self.cap().center)
    }

    /// Signed angular distance from `p` to the boundary, negative inside.
    pub fn angular_gap(&self, p: SpherePoint) -> f64 {
        let cap = self.cap();
        angle_between(&cap.center, &p.to_unit_sphere()) - cap.radius
    }

    pub fn contains(&self, p: SpherePoint) -> Containment {
        self.contains_with_tol(p, BOUNDARY_TOL)
    }

    pub fn contains_with_tol(&self, p: SpherePoint, tol: f64) -> Containment {
        let gap = self.angular_gap(p);
        if gap < -tol {
            Containment::Inside
        } else if gap > tol {
            Containment::Outside
        } else {
            Containment::Boundary
        }
    }

    /// Inversive distance of the two oriented boundary circles; greater
    /// than one for disjoint disks.
    pub fn inversive_distance(&self, other: &GeneralizedDisk) -> f64 {
        let (p, q) = (self.cap(), other.cap());
        let theta = angle_between(&p.center, &q.center);
        (p.radius.cos() * q.radius.cos() - theta.cos()) / (p.radius.sin() * q.radius.sin())
    }

    /// Closed disks are disjoint iff their caps are separated by more
    /// than [`DISJOINT_TOL`]; tangent disks are not disjoint.
    pub fn disjoint(&self, other: &GeneralizedDisk) -> Disjointness {
        let (mut p, mut q) = (self.cap(), other.cap());
        // fixed evaluation order, so the result is exactly symmetric
        let key = |c: &Cap| [c.radius, c.center[0], c.center[1], c.center[2]];
        if key(&q).partial_cmp(&key(&p)) == Some(core::cmp::Ordering::Less) {
            core::mem::swap(&mut p, &mut q);
        }
        let theta = angle_between(&p.center, &q.center);
        let gap = theta - (p.radius + q.radius);
        if gap > DISJOINT_TOL {
            // inversive distance minus one, free of cancellation
            let x = 2.0 * ((theta + p.radius + q.radius) * 0.5).sin() * (gap * 0.5).sin()
                / (p.radius.sin() * q.radius.sin());
            let margin = (x + (x * (x + 2.0)).sqrt()).ln_1p();
            Disjointness { disjoint: true, margin }
        } else {
            Disjointness {
                disjoint: false,
                margin: gap.min(0.0),
            }
        }
    }

    /// `other` lies in the interior of `self`, with the disjointness
    /// margin of `other` against the complement of `self`.
    pub fn contains_disk(&self, other: &GeneralizedDisk) -> Disjointness {
        self.complement().disjoint(other)
    }

    /// Largest coefficient difference between the normalized boundary
    /// circles (orientation ignored), including `sqrt(delta)`.
    pub fn circle_residual(&self, other: &GeneralizedDisk) -> f64 {
        let diff = |s: f64| {
            (self.a - s * other.a)
                .abs()
                .max((self.b - other.b * s).norm())
                .max((self.d - s * other.d).abs())
                .max((self.delta.sqrt() - other.delta.sqrt()).abs())
        };
        diff(1.0).min(diff(-1.0))
    }

    /// Same residual but orientation must agree as well.
    pub fn oriented_residual(&self, other: &GeneralizedDisk) -> f64 {
        (self.a - other.a)
            .abs()
            .max((self.b - other.b).norm())
            .max((self.d - other.d).abs())
            .max((self.delta.sqrt() - other.delta.sqrt()).abs())
    }

    pub fn same_circle(&self, other: &GeneralizedDisk, tol: f64) -> bool {
        self.circle_residual(other) <= tol
    }
}

pub(crate) fn angle_between(u: &[f64; 3], v: &[f64; 3]) -> f64 {
    let cross = [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ];
    let s = (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
    let c = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
    s.atan2(c)
}
