//! Sine and cosine integrals, the auxiliary functions built from them, and
//! the elementary weights that appear in the closed-form forces.
//!
//! `Si` and `Ci` are evaluated from their Maclaurin series below
//! [`SERIES_CROSSOVER`] and from the continued fraction of
//! `exp(ix) E1(ix)` above it. The continued fraction yields the auxiliary
//! functions
//!
//! ```text
//! f(z) = ∫₀^∞ sin t / (t + z) dt = Ci(z) sin z − [Si(z) − π/2] cos z
//! g(z) = ∫₀^∞ cos t / (t + z) dt = −Ci(z) cos z − [Si(z) − π/2] sin z
//! ```
//!
//! directly, so large arguments never suffer the cancellation in `Si − π/2`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::constants::{BOLTZMANN, EULER_GAMMA, HBAR};
use crate::error::{Error, Result};

/// Switch point between the power series and the continued fraction.
pub const SERIES_CROSSOVER: f64 = 4.0;

/// Termination control for series and continued-fraction evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalTolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl EvalTolerance {
    pub fn new(abs_tol: f64, rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(abs_tol >= 0.0 && rel_tol >= 0.0) || !abs_tol.is_finite() || !rel_tol.is_finite() {
            return Err(Error::validation(
                "tolerance",
                "abs_tol and rel_tol must be finite and >= 0",
            ));
        }
        if abs_tol == 0.0 && rel_tol == 0.0 {
            return Err(Error::validation(
                "tolerance",
                "abs_tol and rel_tol cannot both be zero",
            ));
        }
        if max_terms == 0 {
            return Err(Error::validation("max_terms", "must be at least 1"));
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_terms,
        })
    }

    fn satisfied(&self, increment: f64, total: f64) -> bool {
        increment.abs() <= self.abs_tol.max(self.rel_tol * total.abs())
    }
}

impl Default for EvalTolerance {
    /// Machine precision.
    fn default() -> Self {
        Self {
            abs_tol: 1e-300,
            rel_tol: f64::EPSILON / 4.0,
            max_terms: 1000,
        }
    }
}

/// A value together with a bound on its truncation error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluated {
    pub value: f64,
    pub error_bound: f64,
}

/// Neumaier's compensated sum.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// `Si`, `Ci` and combined error bound from the Maclaurin series.
pub(crate) fn series_si_ci(x: f64, tol: &EvalTolerance) -> Result<(f64, f64, f64)> {
    let x2 = x * x;

    // Si = Σ (−1)^k x^{2k+1} / ((2k+1)(2k+1)!)
    let mut si = CompensatedSum::default();
    let mut abs_si = 0.0;
    let mut power = x;
    let mut si_bound = f64::INFINITY;
    for k in 0..tol.max_terms {
        let n = (2 * k + 1) as f64;
        let term = power / n;
        si.add(term);
        abs_si += term.abs();
        power *= -x2 / ((n + 1.0) * (n + 2.0));
        let next = power / (n + 2.0);
        if tol.satisfied(next, si.value()) {
            si_bound = next.abs();
            break;
        }
    }
    if !si_bound.is_finite() {
        return Err(Error::Convergence {
            what: "sine integral series",
            detail: format!("no convergence within {} terms at x = {x}", tol.max_terms),
        });
    }

    // Ci = γ + ln x + Σ_{k≥1} (−1)^k x^{2k} / (2k (2k)!)
    let mut ci = CompensatedSum::default();
    let mut abs_ci = 0.0;
    let mut power = -x2 / 2.0;
    let mut ci_bound = f64::INFINITY;
    for k in 1..=tol.max_terms {
        let n = (2 * k) as f64;
        let term = power / n;
        ci.add(term);
        abs_ci += term.abs();
        power *= -x2 / ((n + 1.0) * (n + 2.0));
        let next = power / (n + 2.0);
        if tol.satisfied(next, ci.value() + EULER_GAMMA + x.ln()) {
            ci_bound = next.abs();
            break;
        }
    }
    if !ci_bound.is_finite() {
        return Err(Error::Convergence {
            what: "cosine integral series",
            detail: format!("no convergence within {} terms at x = {x}", tol.max_terms),
        });
    }
    ci.add(x.ln());
    ci.add(EULER_GAMMA);

    let bound = si_bound.max(ci_bound) + 2.0 * f64::EPSILON * (abs_si + abs_ci + x.ln().abs());
    Ok((si.value(), ci.value(), bound))
}

/// `exp(ix) E1(ix)` by the modified Lentz algorithm; returns `(value, bound)`.
fn exp_e1_imaginary(x: f64, tol: &EvalTolerance) -> Result<(Complex64, f64)> {
    const TINY: f64 = 1e-300;
    let mut b = Complex64::new(1.0, x);
    let mut c = Complex64::new(1.0 / TINY, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 2..=tol.max_terms + 1 {
        let a = -(((i - 1) * (i - 1)) as f64);
        b += 2.0;
        d = (d * a + b).inv();
        c = b + c.inv() * a;
        let delta = c * d;
        h *= delta;
        let step = (delta - 1.0).norm();
        if step <= tol.rel_tol.max(tol.abs_tol / h.norm().max(TINY)) {
            return Ok((h, h.norm() * step + 2.0 * f64::EPSILON * h.norm()));
        }
    }
    Err(Error::Convergence {
        what: "E1 continued fraction",
        detail: format!("no convergence within {} terms at x = {x}", tol.max_terms),
    })
}

/// `Si`, `Ci` and error bound from the continued fraction.
pub(crate) fn fraction_si_ci(x: f64, tol: &EvalTolerance) -> Result<(f64, f64, f64)> {
    let (f, g, bound) = fraction_aux(x, tol)?;
    let (s, c) = x.sin_cos();
    Ok((FRAC_PI_2 - f * c - g * s, f * s - g * c, 2.0 * bound))
}

fn fraction_aux(z: f64, tol: &EvalTolerance) -> Result<(f64, f64, f64)> {
    let (h, bound) = exp_e1_imaginary(z, tol)?;
    Ok((-h.im, h.re, bound))
}

fn check_finite(function: &'static str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(function, "argument must be finite", x))
    }
}

/// `Si(x) = ∫₀ˣ sin u / u du` with its truncation bound.
pub fn sin_integral_bounded(x: f64, tol: &EvalTolerance) -> Result<Evaluated> {
    check_finite("sin_integral", x)?;
    if x < 0.0 {
        return Err(Error::domain("sin_integral", "argument must be >= 0", x));
    }
    if x == 0.0 {
        return Ok(Evaluated {
            value: 0.0,
            error_bound: 0.0,
        });
    }
    let (si, _, bound) = if x <= SERIES_CROSSOVER {
        series_si_ci(x, tol)?
    } else {
        fraction_si_ci(x, tol)?
    };
    Ok(Evaluated {
        value: si,
        error_bound: bound,
    })
}

pub fn sin_integral(x: f64, tol: &EvalTolerance) -> Result<f64> {
    sin_integral_bounded(x, tol).map(|e| e.value)
}

/// `Ci(x) = γ + ln x + ∫₀ˣ (cos u − 1)/u du` with its truncation bound.
pub fn cos_integral_bounded(x: f64, tol: &EvalTolerance) -> Result<Evaluated> {
    check_finite("cos_integral", x)?;
    if x <= 0.0 {
        return Err(Error::domain("cos_integral", "argument must be > 0", x));
    }
    let (_, ci, bound) = if x <= SERIES_CROSSOVER {
        series_si_ci(x, tol)?
    } else {
        fraction_si_ci(x, tol)?
    };
    Ok(Evaluated {
        value: ci,
        error_bound: bound,
    })
}

pub fn cos_integral(x: f64, tol: &EvalTolerance) -> Result<f64> {
    cos_integral_bounded(x, tol).map(|e| e.value)
}

/// `Si(x) − π/2`, accurate for large `x` where the difference is small.
pub fn shifted_sin_integral(x: f64) -> Result<f64> {
    check_finite("shifted_sin_integral", x)?;
    if x < 0.0 {
        return Err(Error::domain("shifted_sin_integral", "argument must be >= 0", x));
    }
    if x == 0.0 {
        return Ok(-FRAC_PI_2);
    }
    let tol = EvalTolerance::default();
    if x <= SERIES_CROSSOVER {
        Ok(series_si_ci(x, &tol)?.0 - FRAC_PI_2)
    } else {
        let (f, g, _) = fraction_aux(x, &tol)?;
        let (s, c) = x.sin_cos();
        Ok(-f * c - g * s)
    }
}

/// `Ci(x)` and `Si(x) − π/2` together.
pub(crate) fn ci_and_shifted_si(x: f64) -> Result<(f64, f64)> {
    Ok((cos_integral(x, &EvalTolerance::default())?, shifted_sin_integral(x)?))
}

/// The pair `(f(z), g(z))` of auxiliary functions at `z > 0`.
pub fn aux_pair(z: f64) -> Result<(f64, f64)> {
    check_finite("aux_pair", z)?;
    if z <= 0.0 {
        return Err(Error::domain("aux_pair", "argument must be > 0", z));
    }
    let tol = EvalTolerance::default();
    if z <= SERIES_CROSSOVER {
        let (si, ci, _) = series_si_ci(z, &tol)?;
        let shifted = si - FRAC_PI_2;
        let (s, c) = z.sin_cos();
        Ok((ci * s - shifted * c, -ci * c - shifted * s))
    } else {
        let (f, g, _) = fraction_aux(z, &tol)?;
        Ok((f, g))
    }
}

fn aux_args(function: &'static str, m: f64, y: f64) -> Result<f64> {
    check_finite(function, m)?;
    check_finite(function, y)?;
    if m <= 0.0 {
        return Err(Error::domain(function, "frequency scale m must be > 0", m));
    }
    if y <= 0.0 {
        return Err(Error::domain(function, "shift y must be > 0", y));
    }
    Ok(m * y)
}

/// `F(m, y) = ∫₀^∞ sin(mx)/(x + y) dx`.
pub fn aux_f(m: f64, y: f64) -> Result<f64> {
    let z = aux_args("aux_f", m, y)?;
    Ok(aux_pair(z)?.0)
}

/// `G(m, y) = ∫₀^∞ cos(mx)/(x + y) dx`.
pub fn aux_g(m: f64, y: f64) -> Result<f64> {
    let z = aux_args("aux_g", m, y)?;
    Ok(aux_pair(z)?.1)
}

/// Envelope weighting the cosine-integral terms of the chiral force:
/// `(3x/4) sin 2x + (3/8 − x²/2) cos 2x`.
pub fn envelope_f(x: f64) -> f64 {
    let (s, c) = (2.0 * x).sin_cos();
    0.75 * x * s + (0.375 - 0.5 * x * x) * c
}

/// Envelope weighting the sine-integral terms of the chiral force:
/// `(3x/4) cos 2x − (3/8 − x²/2) sin 2x`.
pub fn envelope_g(x: f64) -> f64 {
    let (s, c) = (2.0 * x).sin_cos();
    0.75 * x * c - (0.375 - 0.5 * x * x) * s
}

/// Bose–Einstein occupation `1/(exp(ħω/k_B T) − 1)`; exactly zero at `T = 0`.
pub fn bose_einstein(omega: f64, temperature: f64) -> Result<f64> {
    check_finite("bose_einstein", omega)?;
    if omega <= 0.0 {
        return Err(Error::domain("bose_einstein", "frequency must be > 0", omega));
    }
    if !temperature.is_finite() || temperature < 0.0 {
        return Err(Error::domain(
            "bose_einstein",
            "temperature must be finite and >= 0",
            temperature,
        ));
    }
    if temperature == 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 / (HBAR * omega / (BOLTZMANN * temperature)).exp_m1())
}

/// `Si(π)`, the maximum of `Si` on the positive axis.
pub const SI_AT_PI: f64 = 1.851_937_051_982_466_2;
