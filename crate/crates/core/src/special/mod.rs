//! Monodromy of the hypergeometric equation `E(a, b, c)`.
//!
//! With `u1` holomorphic at `x = 0` and `u2 = x^(1-c)` times a holomorphic
//! function, the circuit matrices act on the row vector `(u1, u2)` from the
//! right:
//!
//! ```text
//! gamma1 = diag(1, e^{2 pi i (1 - c)}),   gamma2 = P^-1 diag(1, e^{2 pi i (c - a - b)}) P
//! ```
//!
//! with the connection matrix `P` built from Gamma ratios. This module
//! turns them into [`MoebiusMap`]s of `z = u1 / u2`, computes the fixed
//! points `f2`, `f2'` of `gamma2`, and the normalization `z -> z / f2`
//! under which those fixed points become `1` and `alpha = g(a) g(b)`.

mod gamma;

use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

pub use gamma::{complex_gamma, ln_gamma, rgamma, POLE_GUARD};

use crate::sphere::{Mat2, MoebiusMap};
use crate::{Error, Result};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Hypergeometric parameters `(a, b, c)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HGParams {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
}

/// Positive angles `(theta0, theta1, theta2)` of pure-imaginary exponent
/// differences `lambda = i theta0`, `mu = i theta1`, `nu = i theta2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleTriple {
    pub theta0: f64,
    pub theta1: f64,
    pub theta2: f64,
}

fn is_pole(z: Complex64) -> bool {
    z.re < 0.5 && Complex64::new(z.re - z.re.round(), z.im).norm() < POLE_GUARD
}

impl HGParams {
    pub fn new(a: Complex64, b: Complex64, c: Complex64) -> Self {
        HGParams { a, b, c }
    }

    /// Exponent difference at `x = 0`: `1 - c`.
    pub fn lambda(&self) -> Complex64 {
        ONE - self.c
    }

    /// Exponent difference at `x = 1`: `c - a - b`.
    pub fn mu(&self) -> Complex64 {
        self.c - self.a - self.b
    }

    /// Exponent difference at `x = infinity`: `b - a`.
    pub fn nu(&self) -> Complex64 {
        self.b - self.a
    }

    /// `(a, b, a + b + 1 - c)`: the equation after `x -> 1 - x`.
    pub fn swapped(&self) -> HGParams {
        HGParams::new(self.a, self.b, self.a + self.b + 1.0 - self.c)
    }

    /// Rejects parameters for which the monodromy formulas hit a Gamma
    /// pole.
    pub fn check_nondegenerate(&self) -> Result<()> {
        let (a, b, c) = (self.a, self.b, self.c);
        let args: [(&'static str, Complex64); 6] = [
            ("a", a),
            ("b", b),
            ("c-a", c - a),
            ("c-b", c - b),
            ("c", c),
            ("2-c", 2.0 - c),
        ];
        for (name, z) in args {
            if is_pole(z) {
                return Err(Error::GammaPole { argument: name });
            }
        }
        Ok(())
    }

    /// The angle triple when all three exponent differences are
    /// pure imaginary with positive imaginary part.
    pub fn angles(&self, tol: f64) -> Result<AngleTriple> {
        let (l, m, n) = (self.lambda(), self.mu(), self.nu());
        if l.re.abs() > tol || m.re.abs() > tol || n.re.abs() > tol {
            return Err(Error::NotPureImaginary);
        }
        AngleTriple::new(l.im, m.im, n.im).map_err(|_| Error::NotPureImaginary)
    }
}

impl AngleTriple {
    pub fn new(theta0: f64, theta1: f64, theta2: f64) -> Result<Self> {
        for t in [theta0, theta1, theta2] {
            if !(t > 0.0) || !t.is_finite() {
                return Err(Error::NonpositiveAngle(t));
            }
        }
        Ok(AngleTriple { theta0, theta1, theta2 })
    }

    /// `e^{-pi theta0}`, in `(0, 1)`.
    pub fn epsilon(&self) -> f64 {
        (-PI * self.theta0).exp()
    }

    /// `a = 1/2 - i (t0 + t1 + t2) / 2`, `b = 1/2 - i (t0 + t1 - t2) / 2`,
    /// `c = 1 - i t0`.
    pub fn params(&self) -> HGParams {
        let (t0, t1, t2) = (self.theta0, self.theta1, self.theta2);
        HGParams::new(
            Complex64::new(0.5, -0.5 * (t0 + t1 + t2)),
            Complex64::new(0.5, -0.5 * (t0 + t1 - t2)),
            Complex64::new(1.0, -t0),
        )
    }
}

fn gamma_named(z: Complex64, name: &'static str) -> Result<Complex64> {
    if is_pole(z) {
        return Err(Error::GammaPole { argument: name });
    }
    complex_gamma(z).map_err(|_| Error::GammaPole { argument: name })
}

/// The connection matrix `P`.
pub fn connection_matrix(p: &HGParams) -> Result<Mat2> {
    let (a, b, c) = (p.a, p.b, p.c);
    let gc = gamma_named(c, "c")?;
    let g2c = gamma_named(2.0 - c, "2-c")?;
    let gmu = gamma_named(c - a - b, "c-a-b")?;
    let gnmu = gamma_named(a + b - c, "a+b-c")?;
    let m = Mat2::new(
        gc * gmu * rgamma(c - a) * rgamma(c - b),
        g2c * gmu * rgamma(1.0 - a) * rgamma(1.0 - b),
        gc * gnmu * rgamma(a) * rgamma(b),
        g2c * gnmu * rgamma(a - c + 1.0) * rgamma(b - c + 1.0),
    );
    let det = m.det();
    if !(det.norm() > 1e-300) || !det.is_finite() {
        return Err(Error::SingularConnection);
    }
    Ok(m)
}

/// The circuit matrices exactly as displayed: right actions on `(u1, u2)`.
pub fn raw_circuit_matrices(p: &HGParams) -> Result<(Mat2, Mat2)> {
    let pm = connection_matrix(p)?;
    let i2pi = Complex64::new(0.0, 2.0 * PI);
    let g1 = Mat2::diagonal(ONE, (i2pi * p.lambda()).exp());
    let g2 = pm.inverse()? * Mat2::diagonal(ONE, (i2pi * p.mu()).exp()) * pm;
    Ok((g1, g2))
}

/// The generators as maps of `z = u1 / u2`, stored in factored form.
///
/// `gamma1` is `z -> e^{-2 pi i (1 - c)} z`. `gamma2` has derivative
/// `e^{2 pi i mu}` at `f2'` and its reciprocal at `f2`.
pub fn circuit_matrices(p: &HGParams) -> Result<(MoebiusMap, MoebiusMap)> {
    let pm = connection_matrix(p)?;
    let i2pi = Complex64::new(0.0, 2.0 * PI);
    let g1 = MoebiusMap::dilation((-i2pi * p.lambda()).exp())?;
    // z -> P^T diag(1, kappa) P^-T z, i.e. frame P^-T and w -> w / kappa
    let frame = pm.transpose().inverse()?;
    let g2 = MoebiusMap::from_frame_dilation(frame, (-i2pi * p.mu()).exp())?;
    Ok((g1, g2))
}

/// The fixed points `(f2, f2')` of `gamma2` from the Gamma-ratio formulas.
pub fn gamma2_fixed_points(p: &HGParams) -> Result<(Complex64, Complex64)> {
    p.check_nondegenerate()?;
    let (a, b, c) = (p.a, p.b, p.c);
    let gc = gamma_named(c, "c")?;
    let r2c = rgamma(2.0 - c);
    let f2 = gc * gamma_named(a - c + 1.0, "a-c+1")? * gamma_named(b - c + 1.0, "b-c+1")? * r2c * rgamma(a) * rgamma(b);
    let f2p = gc * gamma_named(1.0 - a, "1-a")? * gamma_named(1.0 - b, "1-b")? * r2c * rgamma(c - a) * rgamma(c - b);
    Ok((f2, f2p))
}

/// `g(x) = sin(pi c - pi x) / sin(pi x)`.
pub fn g_function(x: Complex64, c: Complex64) -> Result<Complex64> {
    if Complex64::new(x.re - x.re.round(), x.im).norm() < POLE_GUARD {
        return Err(Error::SinePole);
    }
    let den = (x * PI).sin();
    let num = ((c - x) * PI).sin();
    let v = num / den;
    if !v.is_finite() {
        return Err(Error::SinePole);
    }
    Ok(v)
}

/// `alpha = g(a) g(b)`, the second fixed point of the normalized `gamma2`.
pub fn normalized_alpha(p: &HGParams) -> Result<Complex64> {
    Ok(g_function(p.a, p.c)? * g_function(p.b, p.c)?)
}

/// `(gamma1, gamma2)` conjugated by `z -> z / f2`: `gamma1` still fixes
/// `0` and `infinity`, `gamma2` now fixes `1` (repelling for
/// `|e^{2 pi i mu}| < 1`) and `alpha`.
pub fn normalize_generators(p: &HGParams) -> Result<(MoebiusMap, MoebiusMap)> {
    p.check_nondegenerate()?;
    let pm = connection_matrix(p)?;
    let (g1, g2) = circuit_matrices(p)?;
    // f2 = P21 / P22, read from the same matrix as the frame
    let (n, d) = (pm.c, pm.d);
    if n.norm() <= 1e-14 * d.norm() || !(n / d).is_finite() {
        return Err(Error::DegenerateNormalization);
    }
    let t = MoebiusMap::from_matrix(Mat2::diagonal(d, n))?;
    Ok((g1.conjugate_by(&t), g2.conjugate_by(&t)))
}

/// Everything the monodromy report shows for one parameter triple.
#[derive(Clone, Debug)]
pub struct Monodromy {
    pub params: HGParams,
    pub connection: Mat2,
    pub gamma1: Mat2,
    pub gamma2: Mat2,
    pub f2: Complex64,
    pub f2p: Complex64,
    pub alpha: Complex64,
    pub multiplier1: Complex64,
    pub multiplier2: Complex64,
}

impl Monodromy {
    pub fn compute(p: &HGParams) -> Result<Self> {
        p.check_nondegenerate()?;
        let connection = connection_matrix(p)?;
        let (gamma1, gamma2) = raw_circuit_matrices(p)?;
        let (f2, f2p) = gamma2_fixed_points(p)?;
        let alpha = normalized_alpha(p)?;
        let (m1, m2) = circuit_matrices(p)?;
        Ok(Monodromy {
            params: *p,
            connection,
            gamma1,
            gamma2,
            f2,
            f2p,
            alpha,
            multiplier1: m1.multiplier(),
            multiplier2: m2.multiplier(),
        })
    }
}
