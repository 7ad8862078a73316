use hgschottky::loops::{self, LoopKind, LoopProfile};
use hgschottky::schottky::{self, certify};
use hgschottky::special::{self, AngleTriple};
use hgschottky::{Complex64, Mat2, MoebiusMap, SpherePoint};

const TOL: f64 = 1e-9;

#[test]
fn base_point_certifies_from_angles() {
    let cfg = loops::base_point(0.2, 6.0, 5.0).unwrap();
    let cert = certify(&cfg, TOL).unwrap();
    assert!(cert.verdict, "{:?}", cert.first_failure());
    assert!(cert.min_margin > 0.0);
}

#[test]
fn normalized_generators_match_base_point_parameters() {
    let p = AngleTriple::new(0.2, 6.0, 5.0).unwrap().params();
    let (g1, g2) = special::normalize_generators(&p).unwrap();
    let alpha = special::normalized_alpha(&p).unwrap();
    assert!(alpha.im.abs() < 1e-12);
    let (r2, a2) = g2.fixed_points().unwrap();
    let (one, alpha) = (SpherePoint::real(1.0), SpherePoint::finite(alpha));
    assert!(
        (r2.approx_eq(&one, 1e-9) && a2.approx_eq(&alpha, 1e-9))
            || (a2.approx_eq(&one, 1e-9) && r2.approx_eq(&alpha, 1e-9))
    );
    let (r1, a1) = g1.fixed_points().unwrap();
    for f in [r1, a1] {
        assert!(f.approx_eq(&SpherePoint::ZERO, 1e-9) || f.is_infinity());
    }
}

#[test]
fn certificate_is_conjugation_invariant() {
    let cfg = loops::base_point(0.5, 0.5, 0.5).unwrap();
    let t = MoebiusMap::from_matrix(Mat2::new(
        Complex64::new(2.0, 1.0),
        Complex64::new(0.3, 0.0),
        Complex64::new(0.1, -0.2),
        Complex64::new(0.7, 0.0),
    ))
    .unwrap();
    let before = certify(&cfg, TOL).unwrap();
    let after = certify(&cfg.conjugate(&t), TOL).unwrap();
    assert_eq!(before.verdict, after.verdict);
    assert!((before.min_margin - after.min_margin).abs() < 1e-6);
}

#[test]
fn moderate_angles_nest_at_depth_four() {
    let cfg = loops::base_point(0.5, 0.5, 0.5).unwrap();
    assert!(schottky::check_nesting(&cfg, 4).unwrap().pass());
}

#[test]
fn every_loop_certifies_on_a_coarse_grid() {
    for kind in [
        LoopKind::AlphaAroundD0,
        LoopKind::AlphaAroundD1,
        LoopKind::MultiplierGamma2,
        LoopKind::MultiplierGamma1,
    ] {
        let profile = LoopProfile::default_for(kind).with_samples(24);
        let report = loops::trace_loop(kind, &profile).unwrap();
        assert!(report.all_certified, "{}", kind.name());
        assert!(report.closure_residual < 1e-8, "{}", kind.name());
    }
}
