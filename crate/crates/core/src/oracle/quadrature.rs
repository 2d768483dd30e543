//! Quadrature for finite intervals and for conditionally convergent
//! oscillatory integrals over `[0, ∞)`.
//!
//! [`oscillatory_quad`] runs two independent strategies on the same
//! integrand and refuses to answer when they disagree:
//!
//! * **accelerated** – integrate block by block between consecutive
//!   half-periods of the oscillation, then sum the partial sums with
//!   Wynn's epsilon algorithm;
//! * **damped** – multiply by `exp(−ηx)` for a decreasing sequence of `η`,
//!   integrate to where the exponential has died out, and extrapolate the
//!   results polynomially to `η = 0`.
//!
//! Both converge to the Abel-regularised value, so integrands whose
//! amplitude grows polynomially (as happens for Green-tensor traces of a
//! perfect mirror) are handled as well as `O(1/x)` ones.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::specfun::CompensatedSum;

const GAUSS_POINTS: usize = 20;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on `P_n`.
fn gauss_legendre() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GAUSS_POINTS;
        let mut rule = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut derivative = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                derivative = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let step = p1 / derivative;
                x -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            rule.push((x, 2.0 / ((1.0 - x * x) * derivative * derivative)));
        }
        rule
    })
}

/// Fixed Gauss–Legendre rule on `[a, b]`; returns `(∫f, ∫|f|)`.
fn gauss<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut sum = 0.0;
    let mut abs = 0.0;
    for &(x, w) in gauss_legendre() {
        let v = w * f(mid + half * x);
        sum += v;
        abs += v.abs();
    }
    (sum * half, abs * half.abs())
}

/// A value with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for AdaptiveConfig {
    fn default() -> Self {
        Self {
            abs_tol: 0.0,
            rel_tol: 1e-13,
            max_intervals: 4000,
        }
    }
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    abs: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn make_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let (whole, _) = gauss(f, a, b);
    let m = 0.5 * (a + b);
    let (left, left_abs) = gauss(f, a, m);
    let (right, right_abs) = gauss(f, m, b);
    let value = left + right;
    Panel {
        a,
        b,
        value,
        abs: left_abs + right_abs,
        error: (whole - value).abs(),
    }
}

/// Globally adaptive bisection on `[a, b]`, optionally starting from
/// `initial_panels` equal pieces.
pub fn integrate_partitioned<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    initial_panels: usize,
    cfg: &AdaptiveConfig,
) -> Result<Estimate> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain(
            "integrate_adaptive",
            "interval must be finite",
            if a.is_finite() { b } else { a },
        ));
    }
    if a == b {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let pieces = initial_panels.max(1);
    let width = (b - a) / pieces as f64;
    let mut heap: BinaryHeap<Panel> = (0..pieces)
        .map(|i| {
            let lo = a + width * i as f64;
            let hi = if i + 1 == pieces { b } else { a + width * (i + 1) as f64 };
            make_panel(&f, lo, hi)
        })
        .collect();
    let limit = cfg.max_intervals.max(pieces + 1);
    loop {
        let (mut value, mut error, mut abs) = (CompensatedSum::default(), 0.0, 0.0);
        for p in heap.iter() {
            value.add(p.value);
            error += p.error;
            abs += p.abs;
        }
        let total = value.value();
        let roundoff = 50.0 * f64::EPSILON * abs;
        let target = cfg.abs_tol.max(cfg.rel_tol * total.abs()).max(roundoff);
        if !error.is_finite() || !total.is_finite() {
            return Err(Error::Convergence {
                what: "adaptive quadrature",
                detail: format!("non-finite integrand on [{a:e}, {b:e}]"),
            });
        }
        if error <= target {
            return Ok(Estimate {
                value: total,
                error: error.max(roundoff),
            });
        }
        if heap.len() >= limit {
            return Err(Error::Convergence {
                what: "adaptive quadrature",
                detail: format!(
                    "{} intervals on [{a:e}, {b:e}], error {error:e} > {target:e}",
                    heap.len()
                ),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a || m >= worst.b {
            // interval can no longer be split; accept it as is
            return Ok(Estimate { value: total, error });
        }
        heap.push(make_panel(&f, worst.a, m));
        heap.push(make_panel(&f, m, worst.b));
    }
}

pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &AdaptiveConfig) -> Result<Estimate> {
    integrate_partitioned(f, a, b, 1, cfg)
}

/// Integral over `[a, ∞)` of a non-oscillating, integrably decaying function.
pub fn decaying_quad<F: Fn(f64) -> f64>(f: F, a: f64, scale: f64, cfg: &AdaptiveConfig) -> Result<Estimate> {
    // x = a + scale·s/(1 − s)
    let mapped = |s: f64| {
        let one_minus = 1.0 - s;
        scale * f(a + scale * s / one_minus) / (one_minus * one_minus)
    };
    integrate_partitioned(mapped, 0.0, 1.0, 8, cfg)
}

/// Wynn's epsilon algorithm on a sequence of partial sums. Returns the
/// highest-order even-column estimate and the change from the previous one.
pub fn wynn_epsilon(partial_sums: &[f64]) -> Option<Estimate> {
    let n = partial_sums.len();
    if n < 3 {
        return partial_sums.last().map(|&s| Estimate {
            value: s,
            error: if n == 2 {
                (partial_sums[1] - partial_sums[0]).abs()
            } else {
                f64::INFINITY
            },
        });
    }
    let mut previous = vec![0.0; n + 1];
    let mut current: Vec<f64> = partial_sums.to_vec();
    let mut estimates = vec![*partial_sums.last()?];
    for k in 1..n {
        let mut next = Vec::with_capacity(current.len() - 1);
        for i in 0..current.len() - 1 {
            let diff = current[i + 1] - current[i];
            if diff == 0.0 || !diff.is_finite() {
                // the column has converged exactly; the last even estimate stands
                return estimates.last().map(|&v| Estimate {
                    value: v,
                    error: if estimates.len() > 1 {
                        (v - estimates[estimates.len() - 2]).abs()
                    } else {
                        0.0
                    },
                });
            }
            next.push(previous[i + 1] + 1.0 / diff);
        }
        previous = current;
        current = next;
        if k % 2 == 0 {
            if let Some(&v) = current.last() {
                estimates.push(v);
            }
        }
        if current.len() < 2 {
            break;
        }
    }
    let m = estimates.len();
    let value = estimates[m - 1];
    let error = if m >= 3 {
        (value - estimates[m - 2]).abs().max((value - estimates[m - 3]).abs())
    } else if m == 2 {
        (value - estimates[0]).abs()
    } else {
        f64::INFINITY
    };
    Some(Estimate { value, error })
}

/// Neville extrapolation of `values[j] ≈ P(steps[j])` to `P(0)`.
pub fn extrapolate_to_zero(steps: &[f64], values: &[f64]) -> Estimate {
    assert_eq!(steps.len(), values.len());
    let k = steps.len();
    let mut table = values.to_vec();
    let mut diagonal = vec![values[k - 1]];
    for level in 1..k {
        for i in (level..k).rev() {
            let (h_far, h_near) = (steps[i - level], steps[i]);
            table[i] = (h_far * table[i] - h_near * table[i - 1]) / (h_far - h_near);
        }
        diagonal.push(table[k - 1]);
    }
    let m = diagonal.len();
    let error = if m >= 2 {
        (diagonal[m - 1] - diagonal[m - 2]).abs()
    } else {
        f64::INFINITY
    };
    Estimate {
        value: diagonal[m - 1],
        error,
    }
}

/// Controls for [`oscillatory_quad`].
#[derive(Debug, Clone, PartialEq)]
pub struct QuadConfig {
    /// Damping exponents in units of the angular frequency, strictly
    /// decreasing towards zero.
    pub damping_eta: Vec<f64>,
    /// Half-periods per block of the accelerated strategy.
    pub zeros_per_block: usize,
    /// Number of partial sums fed to the epsilon algorithm.
    pub acceleration_depth: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            damping_eta: (1..=8).map(|j| 0.5f64.powi(j)).collect(),
            zeros_per_block: 1,
            acceleration_depth: 32,
            abs_tol: 0.0,
            rel_tol: 1e-8,
        }
    }
}

impl QuadConfig {
    pub fn validate(&self) -> Result<()> {
        if self.damping_eta.len() < 2 {
            return Err(Error::validation(
                "damping_eta",
                "at least two damping values are required",
            ));
        }
        if self.damping_eta.iter().any(|&e| !e.is_finite() || e <= 0.0) {
            return Err(Error::validation("damping_eta", "values must be finite and > 0"));
        }
        if self.damping_eta.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::validation("damping_eta", "sequence must be strictly decreasing"));
        }
        if self.zeros_per_block == 0 {
            return Err(Error::validation("zeros_per_block", "must be at least 1"));
        }
        if self.acceleration_depth < 2 {
            return Err(Error::validation("acceleration_depth", "must be at least 2"));
        }
        if !(self.abs_tol >= 0.0 && self.rel_tol >= 0.0) {
            return Err(Error::validation("tolerance", "must be >= 0"));
        }
        Ok(())
    }
}

/// Both strategies' results and the reconciled value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatoryResult {
    pub value: f64,
    pub error: f64,
    pub accelerated: Estimate,
    pub damped: Estimate,
}

/// Blocks of the damped strategy that get adaptive treatment per `η`.
const HEAD_BLOCKS: usize = 4;
/// Integrate the damped integrand until `exp(−ηx)` drops below `e^{-40}`.
const DAMPING_HORIZON: f64 = 40.0;

fn block_config() -> AdaptiveConfig {
    AdaptiveConfig {
        abs_tol: 0.0,
        rel_tol: 1e-14,
        max_intervals: 2000,
    }
}

/// Block-wise integration plus epsilon acceleration.
pub fn accelerated_quad<F: Fn(f64) -> f64>(f: &F, period_hint: f64, cfg: &QuadConfig) -> Result<Estimate> {
    let block = 0.5 * period_hint * cfg.zeros_per_block as f64;
    let mut partial = Vec::with_capacity(cfg.acceleration_depth);
    let mut running = CompensatedSum::default();
    let mut magnitude = 0.0;
    for i in 0..cfg.acceleration_depth {
        let b = integrate_adaptive(f, block * i as f64, block * (i + 1) as f64, &block_config())?;
        running.add(b.value);
        magnitude += b.value.abs();
        partial.push(running.value());
    }
    let est = wynn_epsilon(&partial).ok_or(Error::Convergence {
        what: "epsilon acceleration",
        detail: "empty sequence".into(),
    })?;
    Ok(Estimate {
        value: est.value,
        error: est.error + 100.0 * f64::EPSILON * magnitude,
    })
}

/// Exponentially damped integration with extrapolation to zero damping.
pub fn damped_quad<F: Fn(f64) -> f64>(f: &F, period_hint: f64, cfg: &QuadConfig) -> Result<Estimate> {
    let frequency = 2.0 * PI / period_hint;
    let etas: Vec<f64> = cfg.damping_eta.iter().map(|e| e * frequency).collect();
    let block = 0.5 * period_hint;
    let eta_min = *etas.last().expect("validated non-empty");
    let n_blocks = ((DAMPING_HORIZON / eta_min) / block).ceil() as usize + 1;
    let head_end = block * HEAD_BLOCKS as f64;

    let mut sums: Vec<CompensatedSum> = Vec::with_capacity(etas.len());
    for &eta in &etas {
        let head = integrate_adaptive(|x| f(x) * (-eta * x).exp(), 0.0, head_end, &block_config())?;
        let mut s = CompensatedSum::default();
        s.add(head.value);
        sums.push(s);
    }
    let rule = gauss_legendre();
    let half = 0.5 * block;
    for i in HEAD_BLOCKS..n_blocks {
        let mid = block * (i as f64 + 0.5);
        for &(node, w) in rule {
            let x = mid + half * node;
            let fx = f(x) * w * half;
            for (s, &eta) in sums.iter_mut().zip(&etas) {
                let decay = eta * x;
                if decay < DAMPING_HORIZON + 5.0 {
                    s.add(fx * (-decay).exp());
                }
            }
        }
    }
    let values: Vec<f64> = sums.iter().map(CompensatedSum::value).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Convergence {
            what: "damped quadrature",
            detail: "non-finite partial result".into(),
        });
    }
    Ok(extrapolate_to_zero(&etas, &values))
}

/// `∫₀^∞ f(x) dx` for an integrand oscillating with period `period_hint`
/// (at large `x`) under an envelope that decays or grows at most
/// polynomially.
pub fn oscillatory_quad<F: Fn(f64) -> f64>(f: F, period_hint: f64, cfg: &QuadConfig) -> Result<OscillatoryResult> {
    cfg.validate()?;
    if !period_hint.is_finite() || period_hint <= 0.0 {
        return Err(Error::domain(
            "oscillatory_quad",
            "period hint must be finite and > 0",
            period_hint,
        ));
    }
    let accelerated = accelerated_quad(&f, period_hint, cfg)?;
    let damped = damped_quad(&f, period_hint, cfg)?;
    let floor = cfg.abs_tol.max(cfg.rel_tol * accelerated.value.abs());
    let estimate = accelerated.error + damped.error + floor;
    let gap = (accelerated.value - damped.value).abs();
    if gap.is_nan() || gap > 10.0 * estimate {
        return Err(Error::Convergence {
            what: "oscillatory quadrature",
            detail: format!(
                "strategies disagree: accelerated {:.16e} ± {:.2e}, damped {:.16e} ± {:.2e}",
                accelerated.value, accelerated.error, damped.value, damped.error
            ),
        });
    }
    Ok(OscillatoryResult {
        value: accelerated.value,
        error: (accelerated.error + damped.error).max(gap),
        accelerated,
        damped,
    })
}

/// Default cutoff of the raw truncated mode, in units of the integration variable.
pub const RAW_CUTOFF: f64 = 1e4;

/// Plain truncation at `x_max` without acceleration; the error bound is the
/// magnitude of the last half-period block (alternating-tail bound). Only
/// meaningful for `O(1/x)` envelopes.
pub fn truncated_quad<F: Fn(f64) -> f64>(f: F, period_hint: f64, x_max: f64) -> Result<Estimate> {
    let block = 0.5 * period_hint;
    let n = (x_max / block).ceil().max(1.0) as usize;
    let mut sum = CompensatedSum::default();
    let mut last = 0.0;
    for i in 0..n {
        let b = integrate_adaptive(&f, block * i as f64, block * (i + 1) as f64, &block_config())?;
        sum.add(b.value);
        last = b.value;
    }
    Ok(Estimate {
        value: sum.value(),
        error: last.abs(),
    })
}
