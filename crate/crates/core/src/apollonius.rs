//! Concentric centers of a pair of disjoint disks and the one-parameter
//! family of loxodromic maps pairing them.
//!
//! For disjoint closed disks `D`, `D'` there is a unique `F` in `D` and `F'`
//! in `D'` such that any Moebius map sending `F` to infinity makes both
//! boundary circles concentric (around the image of `F'`). With bounded
//! disks of centers `a`, `a'`, radii `r`, `r'` and `d = |a - a'|`, writing
//! `zeta = (a - a') eta + a'` reduces the condition to the real quadratic
//!
//! ```text
//! eta^2 + (-1 + (r^2 - r'^2) / d^2) eta + r'^2 / d^2 = 0
//! ```
//!
//! with one root in `(0, r'/d)` (giving `F'`) and one in `(1 - r/d, 1)`
//! (giving `F`).
//!
//! A loxodromic map `gamma` with `gamma(D) = complement(D')` and attracting
//! fixed point `f'` in `D'` has its other fixed point `f` on a circle `A`
//! inside `D` and a multiplier whose modulus only depends on `(D, D', f')`.
//! The argument of the multiplier parametrizes `A`. When `f' = F'` the
//! circle collapses to `F` and the family is parametrized by the phase
//! alone.

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::disk::{Containment, GeneralizedDisk};
use crate::sphere::{Mat2, MoebiusMap, SpherePoint};
use crate::{Error, Result};

/// `f'` closer than this (chordal) to `F'` selects the collapsed family.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// Relative tolerance for a point to count as lying on `A`.
pub const ON_CIRCLE_TOL: f64 = 1e-8;

/// Roots of the reduced quadratic and the intervals they must lie in.
#[derive(Clone, Copy, Debug)]
pub struct EtaRoots {
    pub eta_f: f64,
    pub eta_fp: f64,
    pub f_interval: (f64, f64),
    pub fp_interval: (f64, f64),
}

impl EtaRoots {
    pub fn localized(&self) -> bool {
        self.eta_f > self.f_interval.0
            && self.eta_f < self.f_interval.1
            && self.eta_fp > self.fp_interval.0
            && self.eta_fp < self.fp_interval.1
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ConcentricPair {
    pub f: SpherePoint,
    pub fp: SpherePoint,
    pub d: GeneralizedDisk,
    pub dp: GeneralizedDisk,
    /// Roots of the quadratic actually solved (after the general-position
    /// transport when one was needed).
    pub roots: EtaRoots,
}

impl ConcentricPair {
    /// Map sending `F'` to `0` and `F` to infinity; both circles become
    /// centered at `0`, `D'` inside and `D` outside.
    pub fn normalizing_map(&self) -> MoebiusMap {
        let (f0, f1) = self.fp.coords();
        let (g0, g1) = self.f.coords();
        MoebiusMap::from_matrix(Mat2::new(f1, -f0, g1, -g0)).unwrap_or_else(|_| MoebiusMap::identity())
    }

    /// Radii `(inner, outer)` of the two concentric circles after
    /// [`Self::normalizing_map`]. Their ratio is Moebius invariant.
    pub fn concentric_radii(&self) -> (f64, f64) {
        let t = self.normalizing_map();
        let inner = self.dp.transform(&t);
        let outer = self.d.transform(&t);
        (inner.radius().unwrap_or(f64::NAN), outer.radius().unwrap_or(f64::NAN))
    }
}

/// Either a phase `arg m` or an explicit point `f` on the Apollonius circle.
#[derive(Clone, Copy, Debug)]
pub enum PhaseOrPoint {
    Phase(f64),
    Point(SpherePoint),
}

#[derive(Clone, Copy, Debug)]
pub struct ApolloniusData {
    pub d: GeneralizedDisk,
    pub dp: GeneralizedDisk,
    /// The attracting fixed point; snapped to `F'` in the collapsed case.
    pub fp: SpherePoint,
    /// `|m|` (> 1), `m` the derivative at the repelling point `f`.
    pub modulus: f64,
    /// The circle `A` as the disk it bounds inside `D`; `None` when the
    /// circle collapses to the point `F`.
    pub circle: Option<GeneralizedDisk>,
    transport: MoebiusMap,
    c: Complex64,
    cp: Complex64,
}

fn gap_point(d: &GeneralizedDisk, dp: &GeneralizedDisk) -> SpherePoint {
    let (p, q) = (d.cap(), dp.cap());
    let u = p.center;
    let v = q.center;
    let dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
    let mut w = [v[0] - dot * u[0], v[1] - dot * u[1], v[2] - dot * u[2]];
    let mut n = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
    if n < 1e-9 {
        // antipodal caps: any great circle through u works
        let e = if u[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        let k = e[0] * u[0] + e[1] * u[1] + e[2] * u[2];
        w = [e[0] - k * u[0], e[1] - k * u[1], e[2] - k * u[2]];
        n = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
    }
    let theta = crate::disk::angle_between(&u, &v);
    let s = p.radius + 0.5 * (theta - p.radius - q.radius);
    let (cs, sn) = (s.cos(), s.sin());
    SpherePoint::from_unit_sphere([
        cs * u[0] + sn * w[0] / n,
        cs * u[1] + sn * w[1] / n,
        cs * u[2] + sn * w[2] / n,
    ])
}

fn solve_bounded(d: &GeneralizedDisk, dp: &GeneralizedDisk) -> Result<(Complex64, Complex64, EtaRoots)> {
    let (a, r) = (d.center().ok_or(Error::UnboundedDisk)?, d.radius().ok_or(Error::UnboundedDisk)?);
    let (ap, rp) = (dp.center().ok_or(Error::UnboundedDisk)?, dp.radius().ok_or(Error::UnboundedDisk)?);
    let dist = (a - ap).norm();
    let d2 = dist * dist;
    let beta = -1.0 + (r * r - rp * rp) / d2;
    let gamma = rp * rp / d2;
    let disc = beta * beta - 4.0 * gamma;
    if !(disc > 0.0) {
        return Err(Error::DisksNotDisjoint);
    }
    // beta < 0 for disjoint disks; q is the larger root
    let q = -0.5 * (beta - disc.sqrt());
    let (hi, lo) = (q, gamma / q);
    let roots = EtaRoots {
        eta_f: hi,
        eta_fp: lo,
        f_interval: (1.0 - r / dist, 1.0),
        fp_interval: (0.0, rp / dist),
    };
    if !(roots.eta_f > roots.f_interval.0 && roots.eta_f < roots.f_interval.1) {
        return Err(Error::NumericalRootOutsideInterval {
            root: roots.eta_f,
            lo: roots.f_interval.0,
            hi: roots.f_interval.1,
        });
    }
    if !(roots.eta_fp > roots.fp_interval.0 && roots.eta_fp < roots.fp_interval.1) {
        return Err(Error::NumericalRootOutsideInterval {
            root: roots.eta_fp,
            lo: roots.fp_interval.0,
            hi: roots.fp_interval.1,
        });
    }
    let f = (a - ap) * hi + ap;
    let fp = (a - ap) * lo + ap;
    Ok((f, fp, roots))
}

/// The points `F` in `D` and `F'` in `D'`.
pub fn concentric_centers(d: &GeneralizedDisk, dp: &GeneralizedDisk) -> Result<ConcentricPair> {
    if !d.disjoint(dp).disjoint {
        return Err(Error::DisksNotDisjoint);
    }
    let direct = d.is_bounded() && dp.is_bounded() && {
        let dist = (d.center().unwrap() - dp.center().unwrap()).norm();
        dist > 1e-6 * d.radius().unwrap().max(dp.radius().unwrap())
    };
    let (f, fp, roots) = if direct {
        let (f, fp, roots) = solve_bounded(d, dp)?;
        (SpherePoint::finite(f), SpherePoint::finite(fp), roots)
    } else {
        // general position: move a point of the gap to infinity
        let t = MoebiusMap::sending_to_infinity(gap_point(d, dp));
        let (td, tdp) = (d.transform(&t), dp.transform(&t));
        let (f, fp, roots) = solve_bounded(&td, &tdp)?;
        let back = t.inverse();
        (back.apply_complex(f), back.apply_complex(fp), roots)
    };
    Ok(ConcentricPair { f, fp, d: *d, dp: *dp, roots })
}

/// `|m|` read off after an arbitrary Moebius map `t` with `t(f') = infinity`.
pub fn modulus_via(d: &GeneralizedDisk, dp: &GeneralizedDisk, t: &MoebiusMap) -> Result<f64> {
    let td = d.transform(t);
    let tdp = dp.transform(t);
    if !td.is_bounded() || !tdp.contains_infinity() {
        return Err(Error::PointNotInterior);
    }
    Ok(tdp.radius().unwrap() / td.radius().unwrap())
}

/// The Apollonius data of `(D, D', f')`.
pub fn apollonius_family(d: &GeneralizedDisk, dp: &GeneralizedDisk, fp: SpherePoint) -> Result<ApolloniusData> {
    if !d.disjoint(dp).disjoint {
        return Err(Error::DisksNotDisjoint);
    }
    if dp.contains(fp) != Containment::Inside {
        return Err(Error::PointNotInterior);
    }
    let pair = concentric_centers(d, dp)?;
    let degenerate = fp.chordal_distance(&pair.fp) < DEGENERACY_TOL;
    let fp = if degenerate { pair.fp } else { fp };
    let t = MoebiusMap::sending_to_infinity(fp);
    let td = d.transform(&t);
    let tdp = dp.transform(&t);
    let (c, rho) = (td.center().ok_or(Error::PointNotInterior)?, td.radius().ok_or(Error::PointNotInterior)?);
    let (cp, rhop) = (tdp.center().ok_or(Error::PointNotInterior)?, tdp.radius().ok_or(Error::PointNotInterior)?);
    let modulus = rhop / rho;
    let circle = if degenerate {
        None
    } else {
        let k2 = modulus * modulus;
        let a = k2 - 1.0;
        let b = cp - c * k2;
        let dd = k2 * c.norm_sqr() - cp.norm_sqr();
        let delta = k2 * (cp - c).norm_sqr();
        let local = GeneralizedDisk::from_parts(a, b, dd, delta)?;
        Some(local.transform(&t.inverse()))
    };
    Ok(ApolloniusData {
        d: *d,
        dp: *dp,
        fp,
        modulus,
        circle,
        transport: t,
        c,
        cp,
    })
}

impl ApolloniusData {
    pub fn is_degenerate(&self) -> bool {
        self.circle.is_none()
    }

    /// The repelling fixed point `f` on `A` for multiplier phase `phase`.
    pub fn point_for_phase(&self, phase: f64) -> SpherePoint {
        let k = Complex64::from_polar(self.modulus, phase);
        self.transport.inverse().apply_complex(self.local_point(k))
    }

    fn local_point(&self, k: Complex64) -> Complex64 {
        if self.is_degenerate() {
            self.c
        } else {
            self.c + (self.cp - self.c) / (1.0 - k)
        }
    }

    /// The phase `arg m` belonging to a point `f` on `A`.
    pub fn phase_of_point(&self, f: SpherePoint) -> Result<f64> {
        if self.is_degenerate() {
            return Err(Error::PhaseRequired);
        }
        let w = self.transport.apply(f).to_complex().ok_or(Error::PointNotOnA {
            found: f64::INFINITY,
            expected: self.modulus,
        })?;
        let ratio = (w - self.cp).norm() / (w - self.c).norm();
        if !((ratio / self.modulus - 1.0).abs() <= ON_CIRCLE_TOL) {
            return Err(Error::PointNotOnA {
                found: ratio,
                expected: self.modulus,
            });
        }
        Ok(((self.cp - w) / (self.c - w)).arg())
    }
}

/// The loxodromic map of the family selected by a phase or a point on `A`:
/// it fixes `f` (repelling, derivative `m`) and `f'` and maps `D` onto the
/// complement of `D'`.
pub fn pairing_map(data: &ApolloniusData, sel: PhaseOrPoint) -> Result<MoebiusMap> {
    let phase = match sel {
        PhaseOrPoint::Phase(p) => p,
        PhaseOrPoint::Point(f) => data.phase_of_point(f)?,
    };
    let m = Complex64::from_polar(data.modulus, phase);
    let f = data.point_for_phase(phase);
    MoebiusMap::from_fixed_points_multiplier(f, data.fp, m)
}
