//! Complex Gamma function.
//!
//! Lanczos approximation with `g = 7` and nine coefficients, evaluated in
//! the log domain so that `|Im z|` up to a few hundred neither overflows nor
//! loses the phase. The left half-plane goes through the reflection formula.

use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

const LANCZOS_G: f64 = 7.0;

const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln(2 pi) / 2`
const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

/// Distance to a non-positive integer below which `complex_gamma` reports a
/// pole.
pub const POLE_GUARD: f64 = 1e-8;

/// Log-Gamma on `Re z >= 1/2` (any branch of the imaginary part).
fn ln_gamma_right(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (i, &p) in LANCZOS_COEF.iter().enumerate().skip(1) {
        x += p / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (z + 0.5) * t.ln() - t + x.ln() + HALF_LN_TWO_PI
}

/// `ln sin(pi z)` on some branch; `None` when the sine vanishes exactly.
fn ln_sin_pi(z: Complex64) -> Option<Complex64> {
    // sin(pi z) = (-1)^n sin(pi (z - n))
    let n = z.re.round();
    let w = Complex64::new(z.re - n, z.im);
    let shift = Complex64::new(0.0, PI * n);
    let i = Complex64::i();
    let val = if w.im.abs() < 5.0 {
        let s = (w * PI).sin();
        if s.re == 0.0 && s.im == 0.0 {
            return None;
        }
        s.ln()
    } else if w.im > 0.0 {
        // e^{-i pi w} (e^{2 pi i w} - 1) / (2i)
        -i * PI * w + ((i * 2.0 * PI * w).exp() - 1.0).ln() - (2.0 * i).ln()
    } else {
        i * PI * w + ((1.0 - (-i * 2.0 * PI * w).exp()) / (2.0 * i)).ln()
    };
    Some(val + shift)
}

fn near_pole(z: Complex64) -> bool {
    if z.re > 0.5 {
        return false;
    }
    let n = z.re.round();
    Complex64::new(z.re - n, z.im).norm() < POLE_GUARD
}

/// `ln Gamma(z)` on some branch (the imaginary part is only defined modulo
/// `2 pi`).
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::PoleAtNonpositiveInteger { re: z.re, im: z.im });
    }
    if z.re >= 0.5 {
        return Ok(ln_gamma_right(z));
    }
    if near_pole(z) {
        return Err(Error::PoleAtNonpositiveInteger { re: z.re, im: z.im });
    }
    let ls = ln_sin_pi(z).ok_or(Error::PoleAtNonpositiveInteger { re: z.re, im: z.im })?;
    Ok(Complex64::new(PI.ln(), 0.0) - ls - ln_gamma_right(1.0 - z))
}

/// The Gamma function. Arguments within [`POLE_GUARD`] of a non-positive
/// integer are rejected.
pub fn complex_gamma(z: Complex64) -> Result<Complex64> {
    Ok(ln_gamma(z)?.exp())
}

/// `1 / Gamma(z)`, an entire function (zero at the poles of Gamma).
pub fn rgamma(z: Complex64) -> Complex64 {
    if z.re >= 0.5 {
        return (-ln_gamma_right(z)).exp();
    }
    match ln_sin_pi(z) {
        Some(ls) => (ls + ln_gamma_right(1.0 - z) - PI.ln()).exp(),
        None => Complex64::new(0.0, 0.0),
    }
}
