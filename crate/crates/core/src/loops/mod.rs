//! The four deformation loops.
//!
//! Each loop moves the real part of one parameter by one while the
//! imaginary parts are tuned so that the monodromy group stays Schottky.
//! A [`LoopProfile`] fixes the angles, [`audit_profile`] checks the
//! inequalities that make the loop work, and [`trace_loop`] samples it,
//! building and certifying a four-disk configuration at every sample.
//!
//! | kind | moving parameter | deformed generator |
//! |------|------------------|--------------------|
//! | [`LoopKind::AlphaAroundD0`] | `Re b`, with `Im a`, `Im b` tuned | `gamma2` |
//! | [`LoopKind::AlphaAroundD1`] | `Re b` | `gamma2` |
//! | [`LoopKind::MultiplierGamma2`] | `Re a` | `gamma2` |
//! | [`LoopKind::MultiplierGamma1`] | `Re a`, `Re c` | `gamma1` |

mod pairing;
mod phipsi;
mod trace;

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::disk::GeneralizedDisk;
use crate::schottky::{certify, SchottkyConfig, DEFAULT_MARGIN, DEFAULT_TOL};
use crate::special::{normalize_generators, normalized_alpha, AngleTriple, HGParams};
use crate::{Error, Result};

pub use pairing::{pair_disks, PairingMethod};
pub use phipsi::{phi_psi_table, psi_at, solve_phi_psi, PhiPsi};
pub use trace::{smallest_certified_theta1, trace_loop, LoopCheck, LoopReport, LoopSample};

/// Default number of samples along a loop.
pub const DEFAULT_SAMPLES: usize = 64;

/// Smallest accepted sample count.
pub const MIN_SAMPLES: usize = 16;

/// Grid used by the audit to bound `psi` from above.
const PSI_AUDIT_GRID: usize = 512;

/// Which loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LoopKind {
    /// `D_alpha` travels around `D_0`; the multiplier of `gamma2` turns once.
    AlphaAroundD0,
    /// `D_alpha` travels around `D_1`.
    AlphaAroundD1,
    /// The multiplier of `gamma2` turns once around `0`.
    MultiplierGamma2,
    /// The multiplier of `gamma1` turns once around `0`, obtained from
    /// [`LoopKind::MultiplierGamma2`] by `c <-> a + b + 1 - c`.
    MultiplierGamma1,
}

impl LoopKind {
    pub const ALL: [LoopKind; 4] = [
        LoopKind::AlphaAroundD0,
        LoopKind::AlphaAroundD1,
        LoopKind::MultiplierGamma2,
        LoopKind::MultiplierGamma1,
    ];

    /// Short stable name, used on the command line and in files.
    pub fn name(self) -> &'static str {
        match self {
            LoopKind::AlphaAroundD0 => "alpha-around-d0",
            LoopKind::AlphaAroundD1 => "alpha-around-d1",
            LoopKind::MultiplierGamma2 => "multiplier-gamma2",
            LoopKind::MultiplierGamma1 => "multiplier-gamma1",
        }
    }

    pub fn from_name(s: &str) -> Option<LoopKind> {
        LoopKind::ALL.into_iter().find(|k| k.name() == s)
    }
}

/// Angles and numerical settings of a loop.
///
/// For [`LoopKind::MultiplierGamma1`] the angles refer to the equation
/// itself: `theta0` is the angle at `0` (the deformed one) and `theta1`
/// the angle at `1`; the angle at infinity equals `theta0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LoopProfile {
    pub theta0: f64,
    pub theta1: f64,
    /// Negative angle of `b` in [`LoopKind::AlphaAroundD1`].
    pub theta_prime: Option<f64>,
    /// Ring thickness of [`LoopKind::AlphaAroundD1`]; `None` picks `0.9`
    /// times the admissible bound.
    pub s: Option<f64>,
    pub samples: usize,
    /// Tolerance handed to [`certify`].
    pub tol: f64,
    /// Disjointness margin every sample must reach.
    pub margin: f64,
}

impl LoopProfile {
    fn base(theta0: f64, theta1: f64) -> Self {
        LoopProfile {
            theta0,
            theta1,
            theta_prime: None,
            s: None,
            samples: DEFAULT_SAMPLES,
            tol: DEFAULT_TOL,
            margin: DEFAULT_MARGIN,
        }
    }

    pub fn alpha_around_d0(theta0: f64, theta1: f64) -> Self {
        Self::base(theta0, theta1)
    }

    /// `theta1` is set to the smallest value allowed by the `theta1`
    /// bound, plus one.
    pub fn alpha_around_d1(theta0: f64, theta_prime: f64) -> Self {
        let mut p = Self::base(theta0, 0.0);
        p.theta_prime = Some(theta_prime);
        p.theta1 = p.theta1_lower_bound().map_or(f64::NAN, |b| b.max(0.0) + 1.0);
        p
    }

    pub fn multiplier_gamma2(theta0: f64, theta1: f64) -> Self {
        Self::base(theta0, theta1)
    }

    pub fn multiplier_gamma1(theta0: f64, theta1: f64) -> Self {
        Self::base(theta0, theta1)
    }

    /// The shipped profile of each loop.
    pub fn default_for(kind: LoopKind) -> Self {
        match kind {
            LoopKind::AlphaAroundD0 => Self::alpha_around_d0(0.2, 6.0),
            LoopKind::AlphaAroundD1 => Self::alpha_around_d1(0.2, -0.3),
            LoopKind::MultiplierGamma2 => Self::multiplier_gamma2(0.3, 4.0),
            LoopKind::MultiplierGamma1 => Self::multiplier_gamma1(4.0, 0.3),
        }
    }

    pub fn with_samples(mut self, n: usize) -> Self {
        self.samples = n;
        self
    }

    /// `e^{-pi theta0}`.
    pub fn epsilon(&self) -> f64 {
        (-PI * self.theta0).exp()
    }

    /// Profile of [`LoopKind::MultiplierGamma2`] for the equation with `c`
    /// replaced by `a + b + 1 - c`, which exchanges `theta0` and `theta1`.
    pub fn swapped(&self) -> LoopProfile {
        LoopProfile {
            theta0: self.theta1,
            theta1: self.theta0,
            ..*self
        }
    }

    /// The inner radius `r` of the kind.
    pub fn r(&self, kind: LoopKind) -> f64 {
        let e = self.epsilon();
        match kind {
            LoopKind::AlphaAroundD0 => {
                let q = (2.0 * PI).exp();
                e * (q + e.recip()) / (q + e)
            }
            LoopKind::AlphaAroundD1 => {
                let tp = self.theta_prime.unwrap_or(f64::NAN);
                e + (e.recip() - e) / (1.0 + (PI * tp).exp())
            }
            LoopKind::MultiplierGamma2 => (e.recip() - e) / (PI * self.theta_total()).exp_m1(),
            LoopKind::MultiplierGamma1 => self.swapped().r(LoopKind::MultiplierGamma2),
        }
    }

    /// The outer radius `R` of the kind (`NaN` where there is none).
    pub fn big_r(&self, kind: LoopKind) -> f64 {
        let e = self.epsilon();
        match kind {
            LoopKind::AlphaAroundD0 => {
                let q = PI.exp();
                e * (q + e.recip()) / (q + e)
            }
            LoopKind::AlphaAroundD1 => {
                let tp = self.theta_prime.unwrap_or(f64::NAN);
                e + (e.recip() - e) / -(PI * tp).exp_m1()
            }
            _ => f64::NAN,
        }
    }

    /// `theta0 + theta1 + theta2` with `theta2 = theta1`, the quantity
    /// called `theta` in [`LoopKind::MultiplierGamma2`].
    fn theta_total(&self) -> f64 {
        self.theta0 + 2.0 * self.theta1
    }

    /// `theta2 = theta0 + theta1 - theta'` of [`LoopKind::AlphaAroundD1`].
    pub fn theta2_d1(&self) -> f64 {
        self.theta0 + self.theta1 - self.theta_prime.unwrap_or(f64::NAN)
    }

    /// Upper bound for `s` in [`LoopKind::AlphaAroundD1`].
    pub fn s_bound(&self) -> f64 {
        let kind = LoopKind::AlphaAroundD1;
        let (e, r, big_r) = (self.epsilon(), self.r(kind), self.big_r(kind));
        r.min((1.0 - e * r) / r).min((r / e - e * big_r) / (e.recip() + big_r))
    }

    /// `s` of [`LoopKind::AlphaAroundD1`].
    pub fn s_value(&self) -> f64 {
        self.s.unwrap_or_else(|| 0.9 * self.s_bound())
    }

    /// Infimum of `theta1` such that `g(a) < eps + s` holds in
    /// [`LoopKind::AlphaAroundD1`].
    pub fn theta1_lower_bound(&self) -> Option<f64> {
        let e = self.epsilon();
        let q = (e.recip() - e) / self.s_value() - 1.0;
        (q > 0.0 && q.is_finite()).then(|| q.ln() / PI - self.theta0)
    }

    /// The angle whose growth shrinks the deformed pairing: `theta1`, or
    /// `theta0` for [`LoopKind::MultiplierGamma1`].
    pub fn pairing_angle(&self, kind: LoopKind) -> f64 {
        match kind {
            LoopKind::MultiplierGamma1 => self.theta0,
            _ => self.theta1,
        }
    }

    pub fn with_pairing_angle(mut self, kind: LoopKind, x: f64) -> Self {
        match kind {
            LoopKind::MultiplierGamma1 => self.theta0 = x,
            _ => self.theta1 = x,
        }
        self
    }
}

/// One audited inequality; `slack > 0` means it holds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AuditEntry {
    pub name: &'static str,
    pub slack: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuditReport {
    pub kind: LoopKind,
    pub entries: Vec<AuditEntry>,
    pub pass: bool,
}

impl AuditReport {
    pub fn first_failure(&self) -> Option<&'static str> {
        self.entries.iter().find(|e| !e.pass).map(|e| e.name)
    }

    pub fn slack(&self, name: &str) -> Option<f64> {
        self.entries.iter().find(|e| e.name == name).map(|e| e.slack)
    }
}

struct Audit(Vec<AuditEntry>);

impl Audit {
    fn push(&mut self, name: &'static str, slack: f64) {
        self.0.push(AuditEntry {
            name,
            slack,
            pass: slack > 0.0,
        });
    }
}

/// Evaluates every inequality the loop relies on.
pub fn audit_profile(kind: LoopKind, profile: &LoopProfile) -> AuditReport {
    let mut a = Audit(Vec::new());
    a.push("samples >= 16", profile.samples as f64 - MIN_SAMPLES as f64 + 0.5);
    a.push("tol > 0", profile.tol);
    a.push("margin > 0", profile.margin);
    let e = profile.epsilon();
    match kind {
        LoopKind::AlphaAroundD0 => {
            let (r, big_r) = (profile.r(kind), profile.big_r(kind));
            a.push("theta0 > 0", profile.theta0);
            a.push("0 < eps", e);
            a.push("eps < r", r - e);
            a.push("r < R", big_r - r);
            a.push("R < 1", 1.0 - big_r);
            a.push("1 < r / eps", r / e - 1.0);
            let psi_max = (0..=PSI_AUDIT_GRID)
                .map(|i| psi_at(profile, i as f64 / PSI_AUDIT_GRID as f64))
                .fold(f64::NEG_INFINITY, f64::max);
            a.push("theta1 > max psi", profile.theta1 - psi_max);
        }
        LoopKind::AlphaAroundD1 => {
            let tp = profile.theta_prime.unwrap_or(f64::NAN);
            let (r, big_r, s) = (profile.r(kind), profile.big_r(kind), profile.s_value());
            let q = (PI * tp).exp();
            a.push("theta0 > 0", profile.theta0);
            a.push("theta' < 0", -tp);
            a.push("q (1 + q) / (1 - q) < eps^-2", e.powi(-2) - q * (1.0 + q) / (1.0 - q));
            a.push("s > 0", s);
            a.push("s < r", r - s);
            a.push("s < (1 - eps r) / r", (1.0 - e * r) / r - s);
            a.push("s < (r / eps - eps R) / (1 / eps + R)", (r / e - e * big_r) / (e.recip() + big_r) - s);
            a.push("(eps + s) r < 1", 1.0 - (e + s) * r);
            a.push("(eps + s) R < (r - s) / eps", (r - s) / e - (e + s) * big_r);
            let g_bound = e + (e.recip() - e) / (1.0 + (PI * (profile.theta0 + profile.theta1)).exp());
            a.push("eps + (1/eps - eps) / (1 + e^(pi (theta0 + theta1))) < eps + s", e + s - g_bound);
            a.push("theta1 > 0", profile.theta1);
            a.push("theta2 > 0", profile.theta2_d1());
        }
        LoopKind::MultiplierGamma2 => audit_gamma2(&mut a, profile),
        LoopKind::MultiplierGamma1 => audit_gamma2(&mut a, &profile.swapped()),
    }
    let pass = a.0.iter().all(|e| e.pass);
    AuditReport { kind, entries: a.0, pass }
}

fn audit_gamma2(a: &mut Audit, profile: &LoopProfile) {
    let e = profile.epsilon();
    let r = profile.r(LoopKind::MultiplierGamma2);
    a.push("theta0 > 0", profile.theta0);
    a.push("theta1 = theta2 > 0", profile.theta1);
    a.push("r < 1 - eps", 1.0 - e - r);
    a.push("r < 1 / (1 + 1 / eps)", 1.0 / (1.0 + e.recip()) - r);
    a.push("eps^2 (1 + r) < eps - r", e - r - e * e * (1.0 + r));
    a.push("eps + r < 1", 1.0 - e - r);
    a.push("eps^(3/2) < eps - r", e - r - e.powf(1.5));
}

fn require_audit(kind: LoopKind, profile: &LoopProfile) -> Result<()> {
    let report = audit_profile(kind, profile);
    match report.first_failure() {
        None => Ok(()),
        Some(name) => Err(Error::ProfileNotAudited(name)),
    }
}

/// `(a, b, c)` at `t` given the values `phi(t)`, `psi(t)` of the first
/// loop (ignored by the other kinds).
fn params_with(kind: LoopKind, profile: &LoopProfile, t: f64, phi: f64, psi: f64) -> HGParams {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let t0 = profile.theta0;
    let t1 = profile.theta1;
    match kind {
        LoopKind::AlphaAroundD0 => {
            let t2 = t1 - psi;
            HGParams::new(c(0.5, -0.5 * (t0 + t1 + t2)), c(0.5 + phi, -0.5 * (t0 + t1 - t2)), c(1.0, -t0))
        }
        LoopKind::AlphaAroundD1 => {
            let t2 = profile.theta2_d1();
            let tp = profile.theta_prime.unwrap_or(f64::NAN);
            HGParams::new(c(0.5, -0.5 * (t0 + t1 + t2)), c(0.5 + t, -0.5 * tp), c(1.0, -t0))
        }
        LoopKind::MultiplierGamma2 => {
            let theta = profile.theta_total();
            HGParams::new(c(0.5 + t, -0.5 * theta), c(0.5, -0.5 * t0), c(1.0, -t0))
        }
        LoopKind::MultiplierGamma1 => params_with(LoopKind::MultiplierGamma2, &profile.swapped(), t, phi, psi).swapped(),
    }
}

/// `(a(t), b(t), c(t))` along the loop. The first loop solves for
/// `phi(t)`, `psi(t)` by continuation from `t = 0`.
pub fn loop_params(kind: LoopKind, profile: &LoopProfile, t: f64) -> Result<HGParams> {
    require_audit(kind, profile)?;
    let (phi, psi) = match kind {
        LoopKind::AlphaAroundD0 => solve_phi_psi(profile, t)?,
        _ => (0.0, 0.0),
    };
    Ok(params_with(kind, profile, t, phi, psi))
}

/// `(D_0, D_infinity)`, the disks paired by `gamma1 : z -> eps^-2 z`.
fn outer_pair(kind: LoopKind, profile: &LoopProfile) -> Result<(GeneralizedDisk, GeneralizedDisk)> {
    let e = profile.epsilon();
    let rho = match kind {
        LoopKind::AlphaAroundD0 => e * profile.r(kind),
        LoopKind::AlphaAroundD1 => e * (profile.r(kind) - profile.s_value()),
        // geometric mean of eps^2 and eps
        LoopKind::MultiplierGamma2 => e.powf(1.5),
        LoopKind::MultiplierGamma1 => return outer_pair(LoopKind::MultiplierGamma2, &profile.swapped()),
    };
    let zero = Complex64::new(0.0, 0.0);
    Ok((
        GeneralizedDisk::from_center_radius(zero, rho)?,
        GeneralizedDisk::exterior(zero, rho / (e * e))?,
    ))
}

/// The certified-to-be configuration at one parameter triple, together
/// with how the `gamma2` pair was obtained.
fn build_config(
    kind: LoopKind,
    profile: &LoopProfile,
    t: f64,
    params: &HGParams,
) -> Result<(SchottkyConfig, PairingMethod)> {
    if kind == LoopKind::MultiplierGamma1 {
        let (cfg, method) = build_config(LoopKind::MultiplierGamma2, &profile.swapped(), t, &params.swapped())?;
        let swapped = SchottkyConfig::from_maps(cfg.gamma2, cfg.gamma1, [cfg.d2, cfg.d2p, cfg.d1, cfg.d1p])?;
        return Ok((swapped, method));
    }
    let (g1, g2) = normalize_generators(params)?;
    let (d0, dinf) = outer_pair(kind, profile)?;
    let (d1, dalpha, method) =
        pair_disks(&g2, &[d0, dinf], profile.margin).ok_or(Error::DiskConstructionFailed { t })?;
    Ok((SchottkyConfig::from_maps(g1, g2, [d0, dinf, d1, dalpha])?, method))
}

/// The four disks `(D1, D1', D2, D2')` at `t`, in the order used by
/// [`SchottkyConfig`]. For the first three kinds these are
/// `(D_0, D_infinity, D_1, D_alpha)`; for [`LoopKind::MultiplierGamma1`]
/// the two pairs trade places.
pub fn loop_disks(kind: LoopKind, profile: &LoopProfile, t: f64, params: &HGParams) -> Result<[GeneralizedDisk; 4]> {
    require_audit(kind, profile)?;
    Ok(build_config(kind, profile, t, params)?.0.disks())
}

/// A certified configuration for the pure-imaginary angles
/// `(theta0, theta1, theta2)`.
///
/// `gamma1` pairs `D_0 = disk(0, rho)` with the outside of
/// `disk(0, rho / eps^2)`. The first loop's radius `rho = eps r` is tried
/// first, then a log-spaced scan of `rho` between `eps^2` and `|alpha|`.
pub fn base_point(theta0: f64, theta1: f64, theta2: f64) -> Result<SchottkyConfig> {
    let angles = AngleTriple::new(theta0, theta1, theta2)?;
    let params = angles.params();
    let (g1, g2) = normalize_generators(&params)?;
    let e = angles.epsilon();
    let alpha = normalized_alpha(&params)?.norm();
    let zero = Complex64::new(0.0, 0.0);
    let first = e * LoopProfile::alpha_around_d0(theta0, theta1).r(LoopKind::AlphaAroundD0);
    let (lo, hi) = ((e * e).ln(), alpha.min(1.0).ln());
    const SCAN: usize = 48;
    let candidates = core::iter::once(first).chain((1..SCAN).map(|i| (lo + (hi - lo) * i as f64 / SCAN as f64).exp()));
    let mut best: Option<(f64, SchottkyConfig)> = None;
    for rho in candidates {
        let (Ok(d0), Ok(dinf)) = (
            GeneralizedDisk::from_center_radius(zero, rho),
            GeneralizedDisk::exterior(zero, rho / (e * e)),
        ) else {
            continue;
        };
        let Some((d1, dalpha, _)) = pair_disks(&g2, &[d0, dinf], DEFAULT_MARGIN) else {
            continue;
        };
        let cfg = SchottkyConfig::from_maps(g1, g2, [d0, dinf, d1, dalpha])?;
        let cert = certify(&cfg, DEFAULT_TOL)?;
        if !cert.passes_with_margin(DEFAULT_MARGIN) {
            continue;
        }
        if rho == first {
            return Ok(cfg);
        }
        if best.as_ref().map_or(true, |(m, _)| cert.min_margin > *m) {
            best = Some((cert.min_margin, cfg));
        }
    }
    best.map(|(_, cfg)| cfg).ok_or(Error::BasePointNotCertified)
}

#[cfg(test)]
mod tests;
