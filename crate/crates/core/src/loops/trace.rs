//! Sampling a loop and collecting its evidence.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::phipsi::{phi_mod_one, phi_psi_table, psi_at, PhiPsi};
use super::{audit_profile, build_config, params_with, AuditReport, LoopKind, LoopProfile, PairingMethod};
use crate::schottky::{certify, Certificate, SchottkyConfig};
use crate::special::{circuit_matrices, g_function, normalize_generators, normalized_alpha, HGParams};
use crate::sphere::SpherePoint;
use crate::winding::{as_winding, total_arg_change};
use crate::{Error, Result};

/// Endpoint configurations must agree this well.
pub const CLOSURE_TOL: f64 = 1e-8;

/// Tolerance for recognizing an integer winding number.
pub const WINDING_TOL: f64 = 1e-6;

/// Bisection depth of the winding computations.
const WINDING_DEPTH: u32 = 30;

/// Samples whose margin is below this multiple of the requirement get
/// extra neighbors.
const REFINE_FACTOR: f64 = 10.0;

/// Absolute slack granted to inequalities that hold with equality
/// somewhere on the loop.
const EQUALITY_SLACK: f64 = 1e-12;

/// Everything computed at one `t`.
#[derive(Clone, Debug)]
pub struct LoopSample {
    pub t: f64,
    pub params: HGParams,
    /// `phi(t)`, `psi(t)` of the first loop.
    pub phi_psi: Option<(f64, f64)>,
    /// `g(a) g(b)`.
    pub alpha: Complex64,
    /// Multipliers (derivative at the attracting fixed point) of the
    /// generators of `E(a, b, c)`.
    pub multiplier1: Complex64,
    pub multiplier2: Complex64,
    pub config: Option<SchottkyConfig>,
    pub pairing: Option<PairingMethod>,
    pub certificate: Option<Certificate>,
    /// Cross-ratio distance between the fixed points of the generators of
    /// `E(a, b, c)` and those of the certified configuration (only for the
    /// role-swapped loop).
    pub conjugacy_residual: Option<f64>,
    pub error: Option<Error>,
    pub pass: bool,
}

/// A named check on the whole loop.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LoopCheck {
    pub name: &'static str,
    pub value: f64,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct LoopReport {
    pub kind: LoopKind,
    pub profile: LoopProfile,
    pub audit: AuditReport,
    /// Sorted by `t`; includes refinement samples.
    pub samples: Vec<LoopSample>,
    pub phi_psi: Option<PhiPsi>,
    /// Point `alpha` is expected to wind around.
    pub winding_center: Complex64,
    pub alpha_arg_change: f64,
    pub alpha_winding: Option<i64>,
    /// Expected `|winding|`, when the loop makes a claim about it.
    pub expected_winding: Option<i64>,
    /// Argument change of the deformed generator's multiplier.
    pub multiplier_arg_change: f64,
    /// Largest discrepancy between the configurations at `t = 0` and `t = 1`.
    pub closure_residual: f64,
    pub checks: Vec<LoopCheck>,
    pub min_margin: f64,
    pub certified_samples: usize,
    /// Audit passed and every sample certified with the required margin.
    pub all_certified: bool,
    pub verdict: bool,
    pub notes: Vec<&'static str>,
}

impl LoopReport {
    pub fn check(&self, name: &str) -> Option<&LoopCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn winding_pass(&self) -> bool {
        match self.expected_winding {
            Some(w) => self.alpha_winding.map(i64::abs) == Some(w),
            None => true,
        }
    }

    pub fn multiplier_pass(&self) -> bool {
        (self.multiplier_arg_change + 2.0 * PI).abs() <= WINDING_TOL
    }

    pub fn closure_pass(&self) -> bool {
        self.closure_residual <= CLOSURE_TOL
    }
}

/// Parameters at `t` without branch continuation (`phi` taken modulo one).
fn raw_params(kind: LoopKind, profile: &LoopProfile, t: f64) -> HGParams {
    match kind {
        LoopKind::AlphaAroundD0 => params_with(kind, profile, t, phi_mod_one(profile, t), psi_at(profile, t)),
        _ => params_with(kind, profile, t, 0.0, 0.0),
    }
}

fn cross_ratio(p: [SpherePoint; 4]) -> Result<SpherePoint> {
    let br = |u: &SpherePoint, v: &SpherePoint| {
        let (u0, u1) = u.coords();
        let (v0, v1) = v.coords();
        u0 * v1 - u1 * v0
    };
    SpherePoint::from_homogeneous(br(&p[0], &p[2]) * br(&p[1], &p[3]), br(&p[0], &p[3]) * br(&p[1], &p[2]))
}

fn fixed_point_cross_ratio(cfg: &SchottkyConfig) -> Result<SpherePoint> {
    cross_ratio([cfg.f1, cfg.f1p, cfg.f2, cfg.f2p])
}

fn sample_at(kind: LoopKind, profile: &LoopProfile, t: f64, phi_psi: Option<(f64, f64)>) -> LoopSample {
    let (phi, psi) = phi_psi.unwrap_or((0.0, 0.0));
    let params = params_with(kind, profile, t, phi, psi);
    let mut s = LoopSample {
        t,
        params,
        phi_psi,
        alpha: Complex64::new(f64::NAN, f64::NAN),
        multiplier1: Complex64::new(f64::NAN, f64::NAN),
        multiplier2: Complex64::new(f64::NAN, f64::NAN),
        config: None,
        pairing: None,
        certificate: None,
        conjugacy_residual: None,
        error: None,
        pass: false,
    };
    if let Err(e) = fill_sample(kind, profile, &mut s) {
        s.error = Some(e);
    }
    s
}

fn fill_sample(kind: LoopKind, profile: &LoopProfile, s: &mut LoopSample) -> Result<()> {
    s.alpha = normalized_alpha(&s.params)?;
    let (g1, g2) = circuit_matrices(&s.params)?;
    s.multiplier1 = g1.multiplier();
    s.multiplier2 = g2.multiplier();
    let (cfg, method) = build_config(kind, profile, s.t, &s.params)?;
    if kind == LoopKind::MultiplierGamma1 {
        let (h1, h2) = normalize_generators(&s.params)?;
        let own = SchottkyConfig::from_maps(h1, h2, cfg.disks())?;
        let d = fixed_point_cross_ratio(&own)?.chordal_distance(&fixed_point_cross_ratio(&cfg)?);
        s.conjugacy_residual = Some(d);
    }
    let cert = certify(&cfg, profile.tol)?;
    s.pass = cert.passes_with_margin(profile.margin);
    s.config = Some(cfg);
    s.pairing = Some(method);
    s.certificate = Some(cert);
    Ok(())
}

fn config_distance(a: &SchottkyConfig, b: &SchottkyConfig) -> f64 {
    let mut worst: f64 = 0.0;
    for (p, q) in [(a.f1, b.f1), (a.f1p, b.f1p), (a.f2, b.f2), (a.f2p, b.f2p)] {
        worst = worst.max(p.chordal_distance(&q));
    }
    for (g, h) in [(&a.gamma1, &b.gamma1), (&a.gamma2, &b.gamma2)] {
        let (m, n) = (g.multiplier(), h.multiplier());
        worst = worst.max((m - n).norm() / m.norm().max(n.norm()));
    }
    for (d, e) in a.disks().iter().zip(b.disks().iter()) {
        worst = worst.max(d.circle_residual(e));
    }
    worst
}

fn grid(n: usize) -> Vec<f64> {
    (0..=n).map(|i| i as f64 / n as f64).collect()
}

/// Samples the loop at `t = i / N` (plus refinement points), certifies
/// every sample and evaluates the loop-level checks.
///
/// Fails only when the profile does not pass its audit; failures at
/// individual samples are recorded in the report.
pub fn trace_loop(kind: LoopKind, profile: &LoopProfile) -> Result<LoopReport> {
    let audit = audit_profile(kind, profile);
    if let Some(name) = audit.first_failure() {
        return Err(Error::ProfileNotAudited(name));
    }
    let n = profile.samples;
    let mut ts = grid(n);
    let table = |ts: &[f64]| -> Result<Option<PhiPsi>> {
        match kind {
            LoopKind::AlphaAroundD0 => Ok(Some(phi_psi_table(profile, ts)?)),
            _ => Ok(None),
        }
    };
    let pp = table(&ts)?;
    let lookup = |pp: &Option<PhiPsi>, t: f64| pp.as_ref().and_then(|p| p.at(t));
    let mut samples: Vec<LoopSample> = ts.iter().map(|&t| sample_at(kind, profile, t, lookup(&pp, t))).collect();

    // extra neighbors where the margin is thin
    let h = 0.5 / n as f64;
    let mut extra: Vec<f64> = Vec::new();
    for s in &samples {
        let thin = s.certificate.as_ref().map_or(false, |c| c.min_margin < REFINE_FACTOR * profile.margin);
        if thin {
            for u in [s.t - h, s.t + h] {
                if (0.0..=1.0).contains(&u) && !extra.contains(&u) {
                    extra.push(u);
                }
            }
        }
    }
    let pp = if extra.is_empty() {
        pp
    } else {
        ts.extend_from_slice(&extra);
        ts.sort_by(f64::total_cmp);
        let pp = table(&ts)?;
        samples.extend(extra.iter().map(|&t| sample_at(kind, profile, t, lookup(&pp, t))));
        samples.sort_by(|a, b| a.t.total_cmp(&b.t));
        pp
    };

    let center = match kind {
        LoopKind::AlphaAroundD1 => Complex64::new(1.0, 0.0),
        _ => Complex64::new(0.0, 0.0),
    };
    let mut alpha_fn = |t: f64| Ok(normalized_alpha(&raw_params(kind, profile, t))? - center);
    let alpha_arg_change = total_arg_change(&mut alpha_fn, 0.0, 1.0, n, WINDING_DEPTH)?;
    let mut mult_fn = |t: f64| {
        let (g1, g2) = circuit_matrices(&raw_params(kind, profile, t))?;
        Ok(match kind {
            LoopKind::MultiplierGamma1 => g1.multiplier(),
            _ => g2.multiplier(),
        })
    };
    let multiplier_arg_change = total_arg_change(&mut mult_fn, 0.0, 1.0, n, WINDING_DEPTH)?;
    let expected_winding = match kind {
        LoopKind::AlphaAroundD0 | LoopKind::AlphaAroundD1 => Some(1),
        LoopKind::MultiplierGamma2 => Some(0),
        LoopKind::MultiplierGamma1 => None,
    };

    let first = samples.first().and_then(|s| s.config.as_ref());
    let last = samples.last().and_then(|s| s.config.as_ref());
    let closure_residual = match (first, last) {
        (Some(a), Some(b)) => config_distance(a, b),
        _ => f64::INFINITY,
    };

    let checks = kind_checks(kind, profile, &samples, pp.as_ref())?;
    let min_margin = samples
        .iter()
        .filter_map(|s| s.certificate.as_ref().map(|c| c.min_margin))
        .fold(f64::INFINITY, f64::min);
    let certified_samples = samples.iter().filter(|s| s.pass).count();
    let all_certified = certified_samples == samples.len();
    let mut report = LoopReport {
        kind,
        profile: *profile,
        audit,
        samples,
        phi_psi: pp,
        winding_center: center,
        alpha_arg_change,
        alpha_winding: as_winding(alpha_arg_change, WINDING_TOL),
        expected_winding,
        multiplier_arg_change,
        closure_residual,
        checks,
        min_margin,
        certified_samples,
        all_certified,
        verdict: false,
        notes: alloc::vec!["paired disks are verified along the sampled path only"],
    };
    if kind == LoopKind::MultiplierGamma1 {
        report.notes.push("certified configuration is the role-swapped one of the equation with c <-> a + b + 1 - c");
    }
    report.verdict = report.all_certified
        && report.winding_pass()
        && report.multiplier_pass()
        && report.closure_pass()
        && report.checks.iter().all(|c| c.pass);
    Ok(report)
}

struct Checks(Vec<LoopCheck>);

impl Checks {
    /// Records `value`, passing when `value >= -slack`.
    fn nonneg(&mut self, name: &'static str, value: f64, slack: f64) {
        self.0.push(LoopCheck {
            name,
            value,
            pass: value >= -slack,
        });
    }

    /// Records `value`, passing when `value <= tol`.
    fn small(&mut self, name: &'static str, value: f64, tol: f64) {
        self.0.push(LoopCheck {
            name,
            value,
            pass: value <= tol,
        });
    }
}

fn min_over(samples: &[LoopSample], f: impl Fn(&LoopSample) -> Result<f64>) -> Result<f64> {
    samples.iter().try_fold(f64::INFINITY, |m, s| Ok(m.min(f(s)?)))
}

fn max_over(samples: &[LoopSample], f: impl Fn(&LoopSample) -> Result<f64>) -> Result<f64> {
    samples.iter().try_fold(f64::NEG_INFINITY, |m, s| Ok(m.max(f(s)?)))
}

fn kind_checks(
    kind: LoopKind,
    profile: &LoopProfile,
    samples: &[LoopSample],
    pp: Option<&PhiPsi>,
) -> Result<Vec<LoopCheck>> {
    let mut c = Checks(Vec::new());
    let e = profile.epsilon();
    let (r, big_r) = (profile.r(kind), profile.big_r(kind));
    let alpha_at = |t: f64| normalized_alpha(&raw_params(kind, profile, t));
    match kind {
        LoopKind::AlphaAroundD0 => {
            let pp = pp.ok_or(Error::BranchJump { t: 0.0 })?;
            let last = pp.t.len() - 1;
            c.small("phi(0) = 0", pp.phi[0].abs(), 1e-8);
            c.small("phi(1) = 1", (pp.phi[last] - 1.0).abs(), 1e-8);
            c.small("psi(0) = 1", (pp.psi[0] - 1.0).abs(), 1e-8);
            c.small("psi(1) = 1", (pp.psi[last] - 1.0).abs(), 1e-8);
            let step = pp.phi.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
            c.nonneg("phi monotone", step, 0.0);
            let forward = max_over(samples, |s| {
                let w = Complex64::from_polar(big_r, -2.0 * PI * s.t);
                Ok((g_function(s.params.b, s.params.c)? - w).norm())
            })?;
            c.small("g(b(t)) = R e^(-2 pi i t)", forward, 1e-9);
            let ring = min_over(samples, |s| {
                let m = s.alpha.norm();
                Ok((m - e * big_r).min(big_r - m))
            })?;
            // g(a) exceeds eps by roughly e^{-pi (theta0 + theta1 + theta2)}
            c.nonneg("eps R <= |alpha| <= R", ring, EQUALITY_SLACK);
            let t2 = min_over(samples, |s| Ok(profile.theta1 - s.phi_psi.map_or(f64::NAN, |p| p.1)))?;
            c.nonneg("theta2(t) > 0", t2, 0.0);
        }
        LoopKind::AlphaAroundD1 => {
            let s_val = profile.s_value();
            let gb = min_over(samples, |s| {
                let m = g_function(s.params.b, s.params.c)?.norm();
                Ok((m - r).min(big_r - m))
            })?;
            c.nonneg("r <= |g(b)| <= R", gb, EQUALITY_SLACK);
            let ga = g_function(samples[0].params.a, samples[0].params.c)?;
            c.nonneg("eps < g(a) < eps + s", (ga.re - e).min(e + s_val - ga.re), 0.0);
            c.small("g(a) real", ga.im.abs(), 1e-12);
            let ring = min_over(samples, |s| {
                let m = s.alpha.norm();
                Ok((m - e * r).min((e + s_val) * big_r - m))
            })?;
            c.nonneg("eps r <= |alpha| <= (eps + s) R", ring, EQUALITY_SLACK);
            let (a0, a1, ah) = (alpha_at(0.0)?, alpha_at(1.0)?, alpha_at(0.5)?);
            c.small("alpha(0) = alpha(1)", (a0 - a1).norm(), 1e-9);
            c.small("alpha(0), alpha(1/2) real", a0.im.abs().max(ah.im.abs()), 1e-12);
            c.nonneg("alpha(0) <= (eps + s) r", (e + s_val) * r - a0.re, EQUALITY_SLACK);
            c.nonneg("(eps + s) r < 1", 1.0 - (e + s_val) * r, 0.0);
            c.nonneg("1 < eps R", e * big_r - 1.0, 0.0);
            c.nonneg("eps R <= alpha(1/2)", ah.re - e * big_r, EQUALITY_SLACK);
        }
        LoopKind::MultiplierGamma2 => {
            // alpha - eps is a small difference of O(1) numbers
            let slack = 16.0 * f64::EPSILON;
            let dist = max_over(samples, |s| Ok((s.alpha - e).norm() - r))?;
            c.small("alpha in disk(eps, r)", dist, slack);
            c.nonneg("eps^2 (1 + r) < eps - r", e - r - e * e * (1.0 + r), 0.0);
            let lo = min_over(samples, |s| Ok(s.alpha.norm() - (e - r)))?;
            c.nonneg("eps - r <= |alpha|", lo, slack);
            let hi = min_over(samples, |s| Ok(e + r - s.alpha.norm()))?;
            c.nonneg("|alpha| <= eps + r", hi, slack);
            c.nonneg("eps + r < 1", 1.0 - e - r, 0.0);
        }
        LoopKind::MultiplierGamma1 => {
            let rel = |a: Complex64, b: Complex64| (a - b).norm() / a.norm().max(b.norm());
            let m1 = max_over(samples, |s| {
                let cfg = s.config.as_ref().ok_or(Error::DiskConstructionFailed { t: s.t })?;
                Ok(rel(s.multiplier1, cfg.gamma1.multiplier()))
            })?;
            c.small("gamma1 multiplier = swapped gamma2 multiplier", m1, 1e-9);
            let m2 = max_over(samples, |s| {
                let cfg = s.config.as_ref().ok_or(Error::DiskConstructionFailed { t: s.t })?;
                Ok(rel(s.multiplier2, cfg.gamma2.multiplier()))
            })?;
            c.small("gamma2 multiplier = swapped gamma1 multiplier", m2, 1e-9);
            let conj = max_over(samples, |s| Ok(s.conjugacy_residual.unwrap_or(f64::INFINITY)))?;
            c.small("fixed-point cross ratio preserved", conj, 1e-9);
        }
    }
    Ok(c.0)
}

/// Smallest value of the pairing angle (`theta1`, or `theta0` for the
/// role-swapped loop) in `[lo, hi]` at which every sample certifies,
/// found by bisection. `None` if `hi` itself fails.
pub fn smallest_certified_theta1(
    kind: LoopKind,
    profile: &LoopProfile,
    lo: f64,
    hi: f64,
    iterations: usize,
) -> Option<f64> {
    let ok = |x: f64| {
        let p = profile.with_pairing_angle(kind, x);
        trace_loop(kind, &p).map_or(false, |r| r.all_certified)
    };
    if !ok(hi) {
        return None;
    }
    let (mut lo, mut hi) = (lo, hi);
    if ok(lo) {
        return Some(lo);
    }
    for _ in 0..iterations {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}
