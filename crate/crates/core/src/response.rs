//! Time–frequency kernels that weight the Green-tensor traces in the
//! dynamical force.
//!
//! For a transition `n → k` with shifted frequency `ω̃_kn` and mean width
//! `γ = (Γ_n + Γ_k)/2`, switching the interaction on at `t = 0` produces
//!
//! ```text
//! ψ(ω, t) = Re{ [1 + n(ω)] (1 − e^{−i(ω + ω⁻)t}) / (ω + ω⁻)
//!               − n(ω) (1 − e^{−i(ω − ω⁺)t}) / (ω − ω⁺) },   ω^± = ω̃_kn ± iγ
//! ```
//!
//! [`psi`] returns the real part once, so the complex-conjugate completed
//! kernel is `2ψ`; with this normalisation `ψ` coincides with the
//! non-absorbing kernel [`psi_prime`] when `γ = 0`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::bose_einstein;

/// Below this `|u t|` the kernels switch to their Taylor expansions.
pub const SMALL_PHASE: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionKernelParams {
    /// Shifted transition frequency `ω̃_kn` (rad/s).
    pub omega_kn: f64,
    /// `(Γ_n + Γ_k)/2` (1/s).
    pub gamma_sum: f64,
    /// Kelvin.
    pub temperature: f64,
}

impl TransitionKernelParams {
    pub fn new(omega_kn: f64, gamma_sum: f64, temperature: f64) -> Result<Self> {
        if !omega_kn.is_finite() {
            return Err(Error::domain(
                "TransitionKernelParams",
                "omega_kn must be finite",
                omega_kn,
            ));
        }
        if !gamma_sum.is_finite() || gamma_sum < 0.0 {
            return Err(Error::domain(
                "TransitionKernelParams",
                "gamma_sum must be finite and >= 0",
                gamma_sum,
            ));
        }
        if !temperature.is_finite() || temperature < 0.0 {
            return Err(Error::domain(
                "TransitionKernelParams",
                "temperature must be finite and >= 0",
                temperature,
            ));
        }
        Ok(Self {
            omega_kn,
            gamma_sum,
            temperature,
        })
    }
}

/// `(1 − e^{−iut})/u`, continuous through `u = 0` where it equals `it`.
pub(crate) fn switched_pole(u: Complex64, t: f64) -> Complex64 {
    let z = Complex64::i() * u * t;
    if z.norm() < SMALL_PHASE {
        // t (1 − e^{−z})/z
        let series = 1.0 - z / 2.0 + z * z / 6.0 - z * z * z / 24.0 + z * z * z * z / 120.0;
        Complex64::i() * t * series
    } else {
        (1.0 - (-z).exp()) / u
    }
}

/// `(1 − cos(ut))/u`, continuous through `u = 0`.
fn switched_cosine(u: f64, t: f64) -> f64 {
    let w = u * t;
    if w.abs() < SMALL_PHASE {
        let w2 = w * w;
        t * w * (0.5 - w2 / 24.0 + w2 * w2 / 720.0)
    } else {
        (1.0 - w.cos()) / u
    }
}

fn check_point(function: &'static str, omega: f64, t: f64) -> Result<()> {
    if !omega.is_finite() || omega <= 0.0 {
        return Err(Error::domain(function, "frequency must be finite and > 0", omega));
    }
    if !t.is_finite() || t < 0.0 {
        return Err(Error::domain(function, "time must be finite and >= 0", t));
    }
    Ok(())
}

/// Absorbing, finite-temperature kernel (see the module docs for normalisation).
pub fn psi(params: &TransitionKernelParams, omega: f64, t: f64) -> Result<f64> {
    check_point("psi", omega, t)?;
    let n = bose_einstein(omega, params.temperature)?;
    let minus = Complex64::new(params.omega_kn, -params.gamma_sum);
    let plus = Complex64::new(params.omega_kn, params.gamma_sum);
    let vacuum = switched_pole(omega + minus, t) * (1.0 + n);
    let thermal = if n == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        switched_pole(omega - plus, t) * n
    };
    Ok((vacuum - thermal).re)
}

/// Non-absorbing kernel
/// `[1+n]/(ω_kn+ω)·(1 − cos[(ω_kn+ω)t]) + n/(ω_kn−ω)·(1 − cos[(ω_kn−ω)t])`.
pub fn psi_prime(omega_kn: f64, omega: f64, t: f64, temperature: f64) -> Result<f64> {
    check_point("psi_prime", omega, t)?;
    let n = bose_einstein(omega, temperature)?;
    let vacuum = (1.0 + n) * switched_cosine(omega_kn + omega, t);
    if n == 0.0 {
        return Ok(vacuum);
    }
    Ok(vacuum + n * switched_cosine(omega_kn - omega, t))
}

/// Long-time average of [`psi_prime`], `[1+n]/(ω_kn+ω) + n/(ω_kn−ω)`.
/// Singular on resonance when `T > 0`.
pub fn psi_prime_stationary(omega_kn: f64, omega: f64, temperature: f64) -> Result<f64> {
    check_point("psi_prime_stationary", omega, 0.0)?;
    let n = bose_einstein(omega, temperature)?;
    let vacuum = (1.0 + n) / (omega_kn + omega);
    if n == 0.0 {
        return Ok(vacuum);
    }
    Ok(vacuum + n / (omega_kn - omega))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{BOLTZMANN, HBAR};
    use crate::oracle::quadrature::{integrate_adaptive, AdaptiveConfig};

    /// Re{ i ∫₀ᵗ e^{−iωτ} [e^{−(iω̃+γ)τ}(1+n) − e^{(iω̃−γ)τ} n] dτ } by direct quadrature.
    fn time_integral_oracle(p: &TransitionKernelParams, omega: f64, t: f64) -> f64 {
        let n = bose_einstein(omega, p.temperature).unwrap();
        let integrand = |tau: f64| {
            let vac = Complex64::new(-p.gamma_sum * tau, -(omega + p.omega_kn) * tau).exp() * (1.0 + n);
            let th = Complex64::new(-p.gamma_sum * tau, (p.omega_kn - omega) * tau).exp() * n;
            (Complex64::i() * (vac - th)).re
        };
        let cfg = AdaptiveConfig {
            abs_tol: 1e-14,
            rel_tol: 1e-13,
            max_intervals: 5000,
        };
        integrate_adaptive(integrand, 0.0, t, &cfg).unwrap().value
    }

    #[test]
    fn vanishes_at_switch_on() {
        let p = TransitionKernelParams::new(2.0, 0.3, 1e-11).unwrap();
        assert_eq!(psi(&p, 1.5, 0.0).unwrap(), 0.0);
        for &omega in &[0.1, 1.0, 2.0, 7.0] {
            for &temp in &[0.0, 300.0] {
                assert_eq!(psi_prime(2.0, omega, 0.0, temp).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn zero_temperature_thermal_term_vanishes() {
        let (wk, w, t) = (3.0f64, 1.0f64, 2.5f64);
        let direct = (1.0 - ((wk + w) * t).cos()) / (wk + w);
        assert_eq!(psi_prime(wk, w, t, 0.0).unwrap(), direct);
    }

    #[test]
    fn reduces_to_non_absorbing_kernel() {
        for i in 1..=20 {
            for j in 0..=20 {
                let omega = 0.25 * i as f64;
                let t = 0.7 * j as f64;
                let p = TransitionKernelParams::new(1.7, 0.0, 0.0).unwrap();
                let a = psi(&p, omega, t).unwrap();
                let b = psi_prime(1.7, omega, t, 0.0).unwrap();
                assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "ω={omega} t={t}");
            }
        }
    }

    #[test]
    fn matches_time_integral_oracle() {
        // units with ħ/k_B folded in: choose T so that ħω/k_BT is O(1)
        let temp = HBAR * 1.0 / BOLTZMANN;
        for &(omega_kn, gamma, omega, t) in &[
            (2.0, 0.3, 1.0, 4.0),
            (2.0, 0.05, 2.0, 10.0),
            (1.0, 1.2, 3.5, 2.2),
            (5.0, 0.0, 4.9, 7.0),
        ] {
            for &tk in &[0.0, temp] {
                let p = TransitionKernelParams::new(omega_kn, gamma, tk).unwrap();
                let closed = psi(&p, omega, t).unwrap();
                let oracle = time_integral_oracle(&p, omega, t);
                assert!((closed - oracle).abs() < 1e-8, "{closed} vs {oracle}");
            }
        }
    }

    #[test]
    fn continuous_across_resonance() {
        let temp = HBAR * 2.0 / BOLTZMANN;
        let wk = 2.0;
        let t = 3.0;
        let at = psi_prime(wk, wk, t, temp).unwrap();
        for k in 1..=10 {
            let eps = 1e-9 * wk * k as f64;
            let above = psi_prime(wk, wk + eps, t, temp).unwrap();
            let below = psi_prime(wk, wk - eps, t, temp).unwrap();
            assert!(at.is_finite());
            assert!((above - at).abs() < 1e-7 && (below - at).abs() < 1e-7);
        }
        let p = TransitionKernelParams::new(wk, 0.0, temp).unwrap();
        assert!(psi(&p, wk, t).unwrap().is_finite());
        assert!((psi(&p, wk, t).unwrap() - at).abs() < 1e-12);
    }

    #[test]
    fn long_time_average_is_stationary_kernel() {
        let temp = HBAR / BOLTZMANN;
        let (wk, w) = (2.0, 0.7);
        // average over many periods of both cosines
        let samples = 200_000;
        let horizon = 2.0e4;
        let mean: f64 = (0..samples)
            .map(|i| psi_prime(wk, w, horizon * (i as f64 + 0.5) / samples as f64, temp).unwrap())
            .sum::<f64>()
            / samples as f64;
        let stationary = psi_prime_stationary(wk, w, temp).unwrap();
        assert!((mean - stationary).abs() < 1e-3 * stationary.abs());
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(TransitionKernelParams::new(1.0, -0.1, 0.0).is_err());
        assert!(TransitionKernelParams::new(1.0, 0.1, -3.0).is_err());
        let p = TransitionKernelParams::new(1.0, 0.1, 0.0).unwrap();
        assert!(psi(&p, 0.0, 1.0).is_err());
        assert!(psi(&p, 1.0, -1.0).is_err());
        assert!(psi_prime(1.0, -1.0, 1.0, 0.0).is_err());
    }
}
