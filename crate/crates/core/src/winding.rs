//! Argument tracking along sampled paths.

use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Increments larger than this trigger subdivision.
pub const MAX_STEP: f64 = PI / 2.0;

/// Principal argument of `b / a`.
pub fn arg_increment(a: Complex64, b: Complex64) -> f64 {
    (b * a.conj()).arg()
}

/// Total change of `arg f(t)` over `[t0, t1]`, sampled on `n` uniform steps
/// and bisected wherever a single step turns by more than [`MAX_STEP`].
pub fn total_arg_change<F>(f: &mut F, t0: f64, t1: f64, n: usize, max_depth: u32) -> Result<f64>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let mut total = 0.0;
    let mut prev_t = t0;
    let mut prev = f(t0)?;
    for i in 1..=n {
        let t = t0 + (t1 - t0) * i as f64 / n as f64;
        let cur = f(t)?;
        total += refine(f, prev_t, prev, t, cur, max_depth)?;
        prev_t = t;
        prev = cur;
    }
    Ok(total)
}

fn refine<F>(f: &mut F, ta: f64, a: Complex64, tb: f64, b: Complex64, depth: u32) -> Result<f64>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let step = arg_increment(a, b);
    if step.abs() <= MAX_STEP {
        return Ok(step);
    }
    if depth == 0 {
        return Err(Error::BranchJump { t: 0.5 * (ta + tb) });
    }
    let tm = 0.5 * (ta + tb);
    let m = f(tm)?;
    Ok(refine(f, ta, a, tm, m, depth - 1)? + refine(f, tm, m, tb, b, depth - 1)?)
}

/// Nearest integer to `total / 2 pi`, if within `tol` of it.
pub fn as_winding(total: f64, tol: f64) -> Option<i64> {
    let w = total / (2.0 * PI);
    let r = w.round();
    if (w - r).abs() <= tol {
        Some(r as i64)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_winds_once() {
        let mut f = |t: f64| Ok(Complex64::from_polar(2.0, 2.0 * PI * t));
        let total = total_arg_change(&mut f, 0.0, 1.0, 3, 20).unwrap();
        assert!((total - 2.0 * PI).abs() < 1e-12);
        assert_eq!(as_winding(total, 1e-6), Some(1));
    }

    #[test]
    fn clockwise_and_offset() {
        let mut f = |t: f64| Ok(Complex64::new(3.0, 0.0) + Complex64::from_polar(1.0, -4.0 * PI * t));
        let total = total_arg_change(&mut f, 0.0, 1.0, 16, 20).unwrap();
        assert_eq!(as_winding(total, 1e-6), Some(0));
        let mut g = |t: f64| Ok(Complex64::from_polar(1.0, -4.0 * PI * t));
        assert_eq!(as_winding(total_arg_change(&mut g, 0.0, 1.0, 16, 20).unwrap(), 1e-6), Some(-2));
    }

    #[test]
    fn jump_reported() {
        let mut f = |t: f64| Ok(if t < 0.5 { Complex64::new(1.0, 0.0) } else { Complex64::new(-1.0, 0.0) });
        assert!(matches!(total_arg_change(&mut f, 0.0, 1.0, 4, 5), Err(Error::BranchJump { .. })));
    }
}
