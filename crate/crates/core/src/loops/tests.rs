use super::*;
use crate::disk::Containment;
use crate::schottky::{check_nesting, certify};
use crate::special::g_function;
use crate::sphere::SpherePoint;

fn default(kind: LoopKind) -> LoopProfile {
    LoopProfile::default_for(kind)
}

#[test]
fn names_roundtrip() {
    for k in LoopKind::ALL {
        assert_eq!(LoopKind::from_name(k.name()), Some(k));
    }
    assert_eq!(LoopKind::from_name("nope"), None);
}

#[test]
fn first_loop_radii() {
    let p = default(LoopKind::AlphaAroundD0);
    let k = LoopKind::AlphaAroundD0;
    let e = p.epsilon();
    // r and R are values of g at 1/2 - i (theta0 + 2) / 2 and 1/2 - i (theta0 + 1) / 2
    let c = Complex64::new(1.0, -p.theta0);
    let gr = g_function(Complex64::new(0.5, -0.5 * (p.theta0 + 2.0)), c).unwrap();
    let g_big = g_function(Complex64::new(0.5, -0.5 * (p.theta0 + 1.0)), c).unwrap();
    assert!((gr.re - p.r(k)).abs() < 1e-14 && gr.im.abs() < 1e-14);
    assert!((g_big.re - p.big_r(k)).abs() < 1e-14 && g_big.im.abs() < 1e-14);
    assert!(0.0 < e && e < p.r(k) && p.r(k) < p.big_r(k) && p.big_r(k) < 1.0);
}

#[test]
fn default_profiles_pass_audit() {
    for k in LoopKind::ALL {
        let a = audit_profile(k, &default(k));
        assert!(a.pass, "{k:?}: {:?}", a.first_failure());
        assert!(a.entries.iter().all(|e| e.slack > 0.0));
    }
}

#[test]
fn second_loop_rejects_large_theta_prime() {
    // theta' = -0.1 is too close to zero for theta0 = 0.2
    let p = LoopProfile::alpha_around_d1(0.2, -0.1);
    let a = audit_profile(LoopKind::AlphaAroundD1, &p);
    assert!(a.slack("q (1 + q) / (1 - q) < eps^-2").unwrap() < 0.0);
    assert!(!a.pass);
    let q = default(LoopKind::AlphaAroundD1);
    assert!(audit_profile(LoopKind::AlphaAroundD1, &q).slack("q (1 + q) / (1 - q) < eps^-2").unwrap() > 0.0);
    // theta1 is one above the bound
    assert!((q.theta1 - q.theta1_lower_bound().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn third_loop_huge_angles() {
    let p = LoopProfile::multiplier_gamma2(0.3, 40.0);
    assert!(p.r(LoopKind::MultiplierGamma2) < 1e-100);
    assert!(audit_profile(LoopKind::MultiplierGamma2, &p).pass);
}

#[test]
fn audit_failure_blocks_params() {
    let mut p = default(LoopKind::AlphaAroundD0);
    p.theta1 = 0.5;
    assert!(matches!(
        loop_params(LoopKind::AlphaAroundD0, &p, 0.3),
        Err(Error::ProfileNotAudited("theta1 > max psi"))
    ));
    assert!(matches!(trace_loop(LoopKind::AlphaAroundD0, &p), Err(Error::ProfileNotAudited(_))));
}

#[test]
fn phi_psi_endpoints_and_forward() {
    let p = default(LoopKind::AlphaAroundD0);
    let (phi0, psi0) = solve_phi_psi(&p, 0.0).unwrap();
    let (phi1, psi1) = solve_phi_psi(&p, 1.0).unwrap();
    assert!(phi0.abs() < 1e-12 && (psi0 - 1.0).abs() < 1e-12);
    assert!((phi1 - 1.0).abs() < 1e-12 && (psi1 - 1.0).abs() < 1e-12);
    let big_r = p.big_r(LoopKind::AlphaAroundD0);
    let c = Complex64::new(1.0, -p.theta0);
    for t in [0.1, 0.37, 0.5, 0.81] {
        let (phi, psi) = solve_phi_psi(&p, t).unwrap();
        let x = Complex64::new(0.5 + phi, -0.5 * (p.theta0 + psi));
        let w = Complex64::from_polar(big_r, -2.0 * PI * t);
        assert!((g_function(x, c).unwrap() - w).norm() < 1e-9);
    }
    let (_, psi_half) = solve_phi_psi(&p, 0.5).unwrap();
    let x = Complex64::new(0.5 + solve_phi_psi(&p, 0.5).unwrap().0, -0.5 * (p.theta0 + psi_half));
    assert!((g_function(x, c).unwrap() + big_r).norm() < 1e-9);
}

#[test]
fn phi_table_monotone() {
    let p = default(LoopKind::AlphaAroundD0);
    let ts: Vec<f64> = (0..=200).map(|i| i as f64 / 200.0).collect();
    let table = phi_psi_table(&p, &ts).unwrap();
    assert!(table.is_monotone());
    assert!(table.max_psi() <= 1.0 + 1e-12);
}

#[test]
fn params_examples() {
    let k = LoopKind::AlphaAroundD0;
    let p = default(k);
    let q = loop_params(k, &p, 0.0).unwrap();
    // theta2(0) = theta1 - 1
    assert!((q.b - Complex64::new(0.5, -0.5 * (p.theta0 + 1.0))).norm() < 1e-12);
    assert!((q.a - Complex64::new(0.5, -0.5 * (p.theta0 + 2.0 * p.theta1 - 1.0))).norm() < 1e-12);

    let k = LoopKind::MultiplierGamma2;
    let p = default(k);
    let (q0, q1) = (loop_params(k, &p, 0.0).unwrap(), loop_params(k, &p, 1.0).unwrap());
    assert!((q0.a.re - 0.5).abs() < 1e-15 && (q1.a.re - 1.5).abs() < 1e-15);
    let (_, m0) = crate::special::circuit_matrices(&q0).unwrap();
    let (_, m1) = crate::special::circuit_matrices(&q1).unwrap();
    assert!((m0.multiplier() - m1.multiplier()).norm() <= 1e-9 * m0.multiplier().norm());

    let k = LoopKind::AlphaAroundD1;
    let p = default(k);
    let (q0, q1) = (loop_params(k, &p, 0.0).unwrap(), loop_params(k, &p, 0.7).unwrap());
    assert_eq!(q0.a, q1.a);
    assert_eq!(q0.c, q1.c);

    let k = LoopKind::MultiplierGamma1;
    let p = default(k);
    let (q0, q1) = (loop_params(k, &p, 0.0).unwrap(), loop_params(k, &p, 1.0).unwrap());
    assert!((q0.c.re - 1.0).abs() < 1e-15 && (q1.c.re - 2.0).abs() < 1e-15);
    assert!((q0.a.re - 0.5).abs() < 1e-15 && (q1.a.re - 1.5).abs() < 1e-15);
    let inv = |q: HGParams| q.a + q.b + 1.0 - q.c;
    assert!((inv(q0) - inv(q1)).norm() < 1e-14);
}

#[test]
fn first_loop_outer_disks_paired() {
    let k = LoopKind::AlphaAroundD0;
    let p = default(k);
    let q = loop_params(k, &p, 0.25).unwrap();
    let [d0, dinf, d1, dalpha] = loop_disks(k, &p, 0.25, &q).unwrap();
    let (g1, _) = normalize_generators(&q).unwrap();
    assert!(d0.transform(&g1).circle_residual(&dinf.complement()) < 1e-12);
    assert_eq!(d1.contains(SpherePoint::real(1.0)), Containment::Inside);
    let alpha = normalized_alpha(&q).unwrap();
    assert_eq!(dalpha.contains(SpherePoint::finite(alpha)), Containment::Inside);
}

#[test]
fn second_loop_ring_clear() {
    let k = LoopKind::AlphaAroundD1;
    let p = default(k);
    let q = loop_params(k, &p, 0.0).unwrap();
    let [d0, dinf, _, _] = loop_disks(k, &p, 0.0, &q).unwrap();
    let (e, r, big_r, s) = (p.epsilon(), p.r(k), p.big_r(k), p.s_value());
    // both circles bounding the ring lie outside D_0 and D_infinity
    let ring_in = GeneralizedDisk::from_center_radius(Complex64::new(0.0, 0.0), e * r).unwrap();
    let ring_out = GeneralizedDisk::exterior(Complex64::new(0.0, 0.0), (e + s) * big_r).unwrap();
    assert!(ring_in.contains_disk(&d0).disjoint);
    assert!(ring_out.contains_disk(&dinf).disjoint);
}

#[test]
fn literal_third_loop_disks_leave_no_room() {
    // with D_0 = disk(0, eps^2 (1 + r)) and D_infinity outside radius 1 + r
    // there is no pair around 1 and alpha(0)
    let k = LoopKind::MultiplierGamma2;
    let p = default(k);
    let (e, r) = (p.epsilon(), p.r(k));
    let q = loop_params(k, &p, 0.0).unwrap();
    let (_, g2) = normalize_generators(&q).unwrap();
    let zero = Complex64::new(0.0, 0.0);
    let d0 = GeneralizedDisk::from_center_radius(zero, e * e * (1.0 + r)).unwrap();
    let dinf = GeneralizedDisk::exterior(zero, 1.0 + r).unwrap();
    assert!(pair_disks(&g2, &[d0, dinf], 0.0).is_none());
    assert!(pair_disks(&g2, &[d0, dinf], 0.0).is_none());
    let d0 = GeneralizedDisk::from_center_radius(zero, e.powf(1.5)).unwrap();
    let dinf = GeneralizedDisk::exterior(zero, e.powf(-0.5)).unwrap();
    assert!(pair_disks(&g2, &[d0, dinf], 1e-6).is_some());
}

#[test]
fn base_point_certifies() {
    let cfg = base_point(0.2, 6.0, 5.0).unwrap();
    let cert = certify(&cfg, crate::schottky::DEFAULT_TOL).unwrap();
    assert!(cert.passes_with_margin(crate::schottky::DEFAULT_MARGIN));
    assert!(cfg.f1.approx_eq(&SpherePoint::ZERO, 1e-12));
    assert!(cfg.f1p.is_infinity());
    assert!(cfg.f2.approx_eq(&SpherePoint::real(1.0), 1e-9));
    let e = AngleTriple::new(0.2, 6.0, 5.0).unwrap().epsilon();
    assert!((cfg.gamma1.multiplier().norm() - e * e).abs() < 1e-12);
    assert!((cfg.gamma2.multiplier().norm() / (-2.0 * PI * 6.0).exp() - 1.0).abs() < 1e-9);
    let alpha = cfg.f2p.to_complex().unwrap();
    assert!(alpha.im.abs() < 1e-12 && e * e < alpha.re && alpha.re < 1.0);
}

#[test]
fn base_point_moderate_angles() {
    let cfg = base_point(0.5, 0.5, 0.5).unwrap();
    assert!(check_nesting(&cfg, 4).unwrap().pass());
}

#[test]
fn first_loop_traces() {
    let r = trace_loop(LoopKind::AlphaAroundD0, &default(LoopKind::AlphaAroundD0)).unwrap();
    assert!(r.all_certified, "{:?}", r.samples.iter().find(|s| !s.pass).map(|s| (s.t, &s.error)));
    assert!(r.min_margin >= 1e-6);
    assert!(r.closure_pass(), "{}", r.closure_residual);
    assert!(r.multiplier_pass(), "{}", r.multiplier_arg_change);
    for c in &r.checks {
        assert!(c.pass, "{c:?}");
    }
    // phi increases, so alpha = g(a) R e^{-2 pi i t} turns clockwise
    assert_eq!(r.alpha_winding, Some(-1));
    assert!(r.verdict);
}

#[test]
fn second_loop_traces() {
    let r = trace_loop(LoopKind::AlphaAroundD1, &default(LoopKind::AlphaAroundD1)).unwrap();
    assert!(r.all_certified);
    assert_eq!(r.alpha_winding.map(i64::abs), Some(1));
    assert!(r.multiplier_pass() && r.closure_pass());
    for c in &r.checks {
        assert!(c.pass, "{c:?}");
    }
    assert!(r.verdict);
}

#[test]
fn third_and_fourth_loops_agree() {
    let r3 = trace_loop(LoopKind::MultiplierGamma2, &default(LoopKind::MultiplierGamma2)).unwrap();
    let r4 = trace_loop(LoopKind::MultiplierGamma1, &default(LoopKind::MultiplierGamma1)).unwrap();
    for r in [&r3, &r4] {
        assert!(r.all_certified, "{:?}", r.kind);
        assert!(r.multiplier_pass() && r.closure_pass(), "{:?}", r.kind);
        for c in &r.checks {
            assert!(c.pass, "{c:?}");
        }
        assert!(r.verdict);
    }
    assert_eq!(r3.alpha_winding, Some(0));
    assert_eq!(r3.samples.len(), r4.samples.len());
    for (s3, s4) in r3.samples.iter().zip(&r4.samples) {
        let (m3, m4) = (s3.multiplier2, s4.multiplier1);
        assert!((m3 - m4).norm() <= 1e-9 * m3.norm());
    }
}

#[test]
fn small_theta1_fails_loudly() {
    let k = LoopKind::AlphaAroundD0;
    let p = default(k).with_pairing_angle(k, 1.05).with_samples(16);
    let r = trace_loop(k, &p).unwrap();
    assert!(!r.verdict);
    assert!(r
        .samples
        .iter()
        .any(|s| matches!(s.error, Some(Error::DiskConstructionFailed { .. })) || !s.pass));
}

#[test]
fn second_loop_certifies_down_to_theta1_lower_bound() {
    let k = LoopKind::AlphaAroundD1;
    let p = default(k).with_samples(32);
    let bound = p.theta1_lower_bound().unwrap();
    let smallest = smallest_certified_theta1(k, &p, 1e-3, p.theta1, 24).unwrap();
    assert!(smallest >= bound);
    assert!(smallest - bound < 1e-6, "{smallest} vs {bound}");
}
