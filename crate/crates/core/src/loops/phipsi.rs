//! The functions `phi`, `psi` of the first loop.
//!
//! They are defined by `g(1/2 + phi - i (theta0 + psi) / 2) = w(t)` with
//! `w(t) = R e^{-2 pi i t}`, i.e.
//!
//! ```text
//! 2 pi i (1/2 + phi - i (theta0 + psi) / 2) = log(w - 1/eps) - log(w - eps)
//! ```
//!
//! `psi` only needs moduli. `phi` needs the two logarithms on continuous
//! branches, which are tracked by continuation from `t = 0` where
//! `arg(w - 1/eps) = pi` and `arg(w - eps) = 0`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::{LoopKind, LoopProfile};
use crate::winding::total_arg_change;
use crate::Result;

/// Bisection depth per grid step when continuing the branches.
const BRANCH_DEPTH: u32 = 40;

/// `phi`, `psi` sampled on an increasing grid.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiPsi {
    pub t: Vec<f64>,
    pub phi: Vec<f64>,
    pub psi: Vec<f64>,
}

impl PhiPsi {
    pub fn is_monotone(&self) -> bool {
        self.phi.windows(2).all(|w| w[1] >= w[0])
    }

    pub fn max_psi(&self) -> f64 {
        self.psi.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Value at a grid point.
    pub fn at(&self, t: f64) -> Option<(f64, f64)> {
        let i = self.t.iter().position(|&s| s == t)?;
        Some((self.phi[i], self.psi[i]))
    }
}

fn target(profile: &LoopProfile, t: f64) -> Complex64 {
    Complex64::from_polar(profile.big_r(LoopKind::AlphaAroundD0), -2.0 * PI * t)
}

/// `psi(t)`; needs no branch choice.
pub fn psi_at(profile: &LoopProfile, t: f64) -> f64 {
    let e = profile.epsilon();
    let w = target(profile, t);
    ((w - e.recip()).norm().ln() - (w - e).norm().ln()) / PI - profile.theta0
}

/// `phi(t)` modulo one, from principal arguments. Integer shifts of `phi`
/// do not change the monodromy data.
pub(crate) fn phi_mod_one(profile: &LoopProfile, t: f64) -> f64 {
    let e = profile.epsilon();
    let w = target(profile, t);
    ((w - e.recip()).arg() - (w - e).arg()) / (2.0 * PI) - 0.5
}

/// `phi`, `psi` on the grid `ts` (increasing, inside `[0, 1]`), continued
/// from `t = 0`.
pub fn phi_psi_table(profile: &LoopProfile, ts: &[f64]) -> Result<PhiPsi> {
    let e = profile.epsilon();
    let mut near = |t: f64| Ok(target(profile, t) - e);
    let mut far = |t: f64| Ok(target(profile, t) - e.recip());
    let (mut a_far, mut a_near) = (PI, 0.0);
    let mut prev = 0.0;
    let mut out = PhiPsi {
        t: Vec::with_capacity(ts.len()),
        phi: Vec::with_capacity(ts.len()),
        psi: Vec::with_capacity(ts.len()),
    };
    for &t in ts {
        if t != prev {
            a_far += total_arg_change(&mut far, prev, t, 1, BRANCH_DEPTH)?;
            a_near += total_arg_change(&mut near, prev, t, 1, BRANCH_DEPTH)?;
            prev = t;
        }
        out.t.push(t);
        out.phi.push((a_far - a_near) / (2.0 * PI) - 0.5);
        out.psi.push(psi_at(profile, t));
    }
    Ok(out)
}

/// `(phi(t), psi(t))` by continuation along `[0, t]`.
pub fn solve_phi_psi(profile: &LoopProfile, t: f64) -> Result<(f64, f64)> {
    let n = ((64.0 * t.abs()).ceil() as usize).max(16);
    let ts: Vec<f64> = (0..=n).map(|i| t * i as f64 / n as f64).collect();
    let table = phi_psi_table(profile, &ts)?;
    Ok((table.phi[n], table.psi[n]))
}
