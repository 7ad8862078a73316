//! Disks paired by a single loxodromic map, placed clear of given
//! obstacles.

#[allow(unused_imports)]
use num_traits::Float;

use crate::disk::{Containment, GeneralizedDisk};
use crate::sphere::{Mat2, MoebiusMap};

/// Steps of the scan over the concentric family.
const FAMILY_STEPS: usize = 121;

/// How the pair returned by [`pair_disks`] was chosen.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PairingMethod {
    /// Isometric disks of the determinant-one matrix.
    Isometric,
    /// `{|w| >= s / |k|}` and `{|w| <= s}` in the coordinate
    /// `w = (z - attracting) / (z - repelling)`.
    Concentric { s: f64 },
}

fn score(
    map_rep: &GeneralizedDisk,
    map_att: &GeneralizedDisk,
    rep: crate::SpherePoint,
    att: crate::SpherePoint,
    obstacles: &[GeneralizedDisk],
) -> f64 {
    if map_rep.contains(rep) != Containment::Inside || map_att.contains(att) != Containment::Inside {
        return f64::NEG_INFINITY;
    }
    let margin = |x: &GeneralizedDisk, y: &GeneralizedDisk| {
        let d = x.disjoint(y);
        if d.disjoint {
            d.margin
        } else {
            d.margin.min(0.0)
        }
    };
    let mut worst = margin(map_rep, map_att);
    for o in obstacles {
        worst = worst.min(margin(map_rep, o)).min(margin(map_att, o));
    }
    worst
}

/// Disks `(D, D')` with `g(D)` the closed complement of `D'`, the
/// repelling fixed point in `D`, the attracting one in `D'`, and both
/// disjoint from every obstacle with margin at least `margin`.
///
/// The isometric disks are used when they qualify; otherwise the best
/// member of the concentric family around the fixed points is taken.
pub fn pair_disks(
    g: &MoebiusMap,
    obstacles: &[GeneralizedDisk],
    margin: f64,
) -> Option<(GeneralizedDisk, GeneralizedDisk, PairingMethod)> {
    let (rep, att) = g.fixed_points().ok()?;
    if let (Some(d), Some(dp)) = (GeneralizedDisk::isometric(g), GeneralizedDisk::isometric(&g.inverse())) {
        if score(&d, &dp, rep, att, obstacles) >= margin {
            return Some((d, dp, PairingMethod::Isometric));
        }
    }
    let k = g.multiplier().norm();
    if !(k > 0.0 && k < 1.0) {
        return None;
    }
    let (a0, a1) = att.coords();
    let (r0, r1) = rep.coords();
    let back = MoebiusMap::from_matrix(Mat2::new(a1, -a0, r1, -r0)).ok()?.inverse();
    let lk = k.ln();
    let (lo, hi) = (1.5 * lk - 3.0, -0.5 * lk + 3.0);
    let zero = num_complex::Complex64::new(0.0, 0.0);
    let mut best: Option<(f64, GeneralizedDisk, GeneralizedDisk, f64)> = None;
    for i in 0..=FAMILY_STEPS {
        let s = (lo + (hi - lo) * i as f64 / FAMILY_STEPS as f64).exp();
        let (Ok(inner), Ok(outer)) = (
            GeneralizedDisk::from_center_radius(zero, s),
            GeneralizedDisk::exterior(zero, s / k),
        ) else {
            continue;
        };
        let (d, dp) = (outer.transform(&back), inner.transform(&back));
        let sc = score(&d, &dp, rep, att, obstacles);
        if best.as_ref().map_or(true, |b| sc > b.0) {
            best = Some((sc, d, dp, s));
        }
    }
    let (sc, d, dp, s) = best?;
    (sc >= margin).then_some((d, dp, PairingMethod::Concentric { s }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::SpherePoint;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn lox(m: Complex64) -> MoebiusMap {
        MoebiusMap::from_fixed_points_multiplier(SpherePoint::finite(c(0.3, 0.0)), SpherePoint::finite(c(1.0, 0.0)), m)
            .unwrap()
    }

    #[test]
    fn isometric_pair_when_room() {
        let g = lox(c(1e-6, 1e-6));
        let (d, dp, how) = pair_disks(&g, &[], 1e-6).unwrap();
        assert_eq!(how, PairingMethod::Isometric);
        assert!(d.transform(&g).circle_residual(&dp.complement()) < 1e-9);
    }

    #[test]
    fn family_when_isometric_blocked() {
        // obstacle hugging the repelling point 1 from the right
        let g = lox(c(0.002, 0.0));
        let obstacle = GeneralizedDisk::exterior(c(0.0, 0.0), 1.02).unwrap();
        let (d, dp, how) = pair_disks(&g, &[obstacle], 1e-6).unwrap();
        assert!(matches!(how, PairingMethod::Concentric { .. }));
        assert!(d.transform(&g).circle_residual(&dp.complement()) < 1e-9);
        assert!(d.disjoint(&obstacle).disjoint && dp.disjoint(&obstacle).disjoint);
        assert_eq!(d.contains(SpherePoint::finite(c(1.0, 0.0))), Containment::Inside);
    }

    #[test]
    fn impossible_placement_rejected() {
        let g = lox(c(0.5, 0.0));
        let block = GeneralizedDisk::from_center_radius(c(0.65, 0.0), 0.3).unwrap();
        assert!(pair_disks(&g, &[block], 1e-6).is_none());
    }
}
