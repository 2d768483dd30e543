//! Chiral Casimir–Polder force on a molecule above a perfectly reflecting
//! chiral plate.
//!
//! Forces are projected on the surface normal pointing from the plate to
//! the molecule: a positive value is repulsive. With `x_k = 2dω_k/c` and
//! `a = ct/(2d)` the static force is
//!
//! ```text
//! F = ∓ 1/(3π²ε₀cd⁴) Σ_k R_0k [1 − 2 Ci(x_k) f(x_k/2) + (2 Si(x_k) − π) g(x_k/2)]
//! ```
//!
//! where the upper sign belongs to a plate of positive chirality and `f`,
//! `g` are [`envelope_f`] and [`envelope_g`]. The dynamical force has
//! separate closed forms before and after the back-reaction time `2d/c`
//! and diverges between them.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::constants::{EPSILON_0, SPEED_OF_LIGHT};
use crate::error::{Error, Result};
use crate::molecule::Molecule;
use crate::specfun::{ci_and_shifted_si, envelope_f, envelope_g};

/// Dynamical evaluation refuses points with `|ω_k t − 2k_k d|` below this.
pub const LIGHTCONE_GUARD: f64 = 1e-3;

/// Handedness of the perfect chiral plate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MirrorSpec {
    Positive,
    Negative,
}

impl MirrorSpec {
    pub fn from_sign(sign: i32) -> Result<Self> {
        match sign {
            1 => Ok(MirrorSpec::Positive),
            -1 => Ok(MirrorSpec::Negative),
            _ => Err(Error::validation("chirality", format!("must be +1 or -1, got {sign}"))),
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            MirrorSpec::Positive => 1.0,
            MirrorSpec::Negative => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            MirrorSpec::Positive => MirrorSpec::Negative,
            MirrorSpec::Negative => MirrorSpec::Positive,
        }
    }
}

impl FromStr for MirrorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+1" | "1" | "+" => Ok(MirrorSpec::Positive),
            "-1" | "-" => Ok(MirrorSpec::Negative),
            other => Err(Error::validation(
                "chirality",
                format!("expected +1 or -1, got {other:?}"),
            )),
        }
    }
}

impl fmt::Display for MirrorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MirrorSpec::Positive => "+1",
            MirrorSpec::Negative => "-1",
        })
    }
}

/// Molecule–plate distance and time since the interaction was switched on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryTime {
    d: f64,
    t: f64,
}

impl GeometryTime {
    pub fn new(d: f64, t: f64) -> Result<Self> {
        check_distance("GeometryTime", d)?;
        if !t.is_finite() || t < 0.0 {
            return Err(Error::domain("GeometryTime", "time must be finite and >= 0", t));
        }
        Ok(Self { d, t })
    }

    pub fn distance(&self) -> f64 {
        self.d
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    /// `2d/c`, the round trip of light to the plate and back.
    pub fn back_reaction_time(&self) -> f64 {
        2.0 * self.d / SPEED_OF_LIGHT
    }

    /// `a = ct/(2d)`.
    pub fn reduced_time(&self) -> f64 {
        SPEED_OF_LIGHT * self.t / (2.0 * self.d)
    }

    /// `k_k = ω_k/c`.
    pub fn wave_number(omega: f64) -> f64 {
        omega / SPEED_OF_LIGHT
    }

    /// `x_k = 2dω_k/c`.
    pub fn reduced_distance(&self, omega: f64) -> f64 {
        2.0 * self.d * omega / SPEED_OF_LIGHT
    }

    /// `|ω_k t − 2k_k d|`.
    pub fn lightcone_distance(&self, omega: f64) -> f64 {
        (omega * self.t - self.reduced_distance(omega)).abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Static,
    PreLightcone,
    PostLightcone,
    LimitNonretarded,
    LimitRetarded,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Static => "static",
            Regime::PreLightcone => "pre_lightcone",
            Regime::PostLightcone => "post_lightcone",
            Regime::LimitNonretarded => "limit_nonretarded",
            Regime::LimitRetarded => "limit_retarded",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceResult {
    /// Newtons along the outward normal; positive is repulsive.
    pub value: f64,
    pub regime: Regime,
    /// Smallest `|ω_k t − 2k_k d|` over transitions (dynamical results only).
    pub lightcone_distance: Option<f64>,
}

/// Value and first two derivatives of a function of `m` at `m = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondOrderJet {
    pub value: f64,
    pub first: f64,
    pub second: f64,
}

/// `[1 − ∂/∂m + (1/3) ∂²/∂m²] h(m)` at `m = 1`.
pub fn diff_operator_apply(h: SecondOrderJet) -> f64 {
    h.value - h.first + h.second / 3.0
}

fn check_distance(function: &'static str, d: f64) -> Result<()> {
    if !d.is_finite() || d <= 0.0 {
        return Err(Error::domain(function, "distance must be finite and > 0", d));
    }
    Ok(())
}

/// `∂_d{ω Tr[∇ × Im G]} = ±(3c/8πd⁴)[cos x + x sin x − x² cos x / 3]`, `x = 2dω/c`.
pub fn curl_green_trace_derivative(d: f64, omega: f64, spec: MirrorSpec) -> Result<f64> {
    check_distance("curl_green_trace_derivative", d)?;
    if !omega.is_finite() || omega < 0.0 {
        return Err(Error::domain(
            "curl_green_trace_derivative",
            "frequency must be finite and >= 0",
            omega,
        ));
    }
    let x = 2.0 * d * omega / SPEED_OF_LIGHT;
    let (s, c) = x.sin_cos();
    let bracket = c + x * s - x * x * c / 3.0;
    Ok(spec.sign() * 3.0 * SPEED_OF_LIGHT / (8.0 * PI * d.powi(4)) * bracket)
}

/// `1/(3π²ε₀cd⁴)`.
fn chiral_prefactor(d: f64) -> f64 {
    1.0 / (3.0 * PI * PI * EPSILON_0 * SPEED_OF_LIGHT * d.powi(4))
}

/// Static bracket `1 − 2Ci(x)f(x/2) + (2Si(x) − π)g(x/2)` at `x = x_k > 0`.
pub fn static_bracket(x_k: f64) -> Result<f64> {
    let (ci, shifted_si) = ci_and_shifted_si(x_k)?;
    let half = 0.5 * x_k;
    Ok(1.0 - 2.0 * ci * envelope_f(half) + 2.0 * shifted_si * envelope_g(half))
}

/// Dynamical bracket at `x = x_k` and `a = ct/2d`, `a ≠ 1`.
pub fn dynamic_bracket(x_k: f64, a: f64) -> Result<f64> {
    if !a.is_finite() || a < 0.0 {
        return Err(Error::domain(
            "dynamic_bracket",
            "reduced time must be finite and >= 0",
            a,
        ));
    }
    if a == 1.0 {
        return Err(Error::LightCone {
            distance: 0.0,
            guard: LIGHTCONE_GUARD,
        });
    }
    let wt = a * x_k;
    let (s, c) = wt.sin_cos();
    // c²t² − 4d² = 4d²(a − 1)(a + 1)
    let reduced = (a - 1.0) * (a + 1.0);
    let rational = 1.0 - c / (2.0 * reduced * reduced) + (2.0 * c + wt * s) / (4.0 * reduced);

    let (ci_x, si_x) = ci_and_shifted_si(x_k)?;
    let half = 0.5 * x_k;
    // Si combinations are written with Si − π/2; the constants cancel exactly.
    let (cos_terms, sin_terms) = if a < 1.0 {
        let (ci_minus, si_minus) = if wt == 0.0 {
            (ci_x, si_x)
        } else {
            ci_and_shifted_si(x_k - wt)?
        };
        let (ci_plus, si_plus) = if wt == 0.0 {
            (ci_x, si_x)
        } else {
            ci_and_shifted_si(x_k + wt)?
        };
        (2.0 * ci_x - ci_minus - ci_plus, 2.0 * si_x - si_minus - si_plus)
    } else {
        let (ci_minus, si_minus) = ci_and_shifted_si(wt - x_k)?;
        let (ci_plus, si_plus) = ci_and_shifted_si(wt + x_k)?;
        // 2Si(x) + Si(ωt − x) − Si(ωt + x) − π
        (2.0 * ci_x - ci_minus - ci_plus, 2.0 * si_x + si_minus - si_plus)
    };
    Ok(rational - cos_terms * envelope_f(half) + sin_terms * envelope_g(half))
}

fn signed_sum<F>(mol: &Molecule, mut per_transition: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut sum = 0.0;
    let mut orientation = 0.0;
    for t in mol.transitions() {
        if t.rotatory == 0.0 {
            continue;
        }
        if orientation == 0.0 {
            orientation = t.rotatory;
        }
        sum += t.rotatory * per_transition(t.omega)?;
    }
    // (+0) + (−0) is +0 for both enantiomers; tie the sign of an exact zero
    // to the molecule so that mirror images still give bitwise negatives
    if sum == 0.0 {
        sum = sum.copysign(orientation);
    }
    Ok(sum)
}

pub fn static_chiral_force(mol: &Molecule, d: f64, spec: MirrorSpec) -> Result<ForceResult> {
    check_distance("static_chiral_force", d)?;
    let sum = signed_sum(mol, |omega| static_bracket(2.0 * d * omega / SPEED_OF_LIGHT))?;
    Ok(ForceResult {
        value: -spec.sign() * (chiral_prefactor(d) * sum),
        regime: Regime::Static,
        lightcone_distance: None,
    })
}

pub fn dynamic_chiral_force(mol: &Molecule, geom: &GeometryTime, spec: MirrorSpec) -> Result<ForceResult> {
    let nearest = mol
        .transitions()
        .iter()
        .map(|t| geom.lightcone_distance(t.omega))
        .fold(f64::INFINITY, f64::min);
    if nearest < LIGHTCONE_GUARD {
        return Err(Error::LightCone {
            distance: nearest,
            guard: LIGHTCONE_GUARD,
        });
    }
    let a = geom.reduced_time();
    let regime = if geom.time() < geom.back_reaction_time() {
        Regime::PreLightcone
    } else {
        Regime::PostLightcone
    };
    let sum = signed_sum(mol, |omega| dynamic_bracket(geom.reduced_distance(omega), a))?;
    Ok(ForceResult {
        value: -spec.sign() * (chiral_prefactor(geom.distance()) * sum),
        regime,
        lightcone_distance: Some(nearest),
    })
}

/// `±(1/4π²ε₀cd⁴) Σ R ln(ω_k d/c)`, valid for `x_k ≪ 1`.
pub fn nonretarded_limit_force(mol: &Molecule, d: f64, spec: MirrorSpec) -> Result<ForceResult> {
    check_distance("nonretarded_limit_force", d)?;
    let sum = signed_sum(mol, |omega| Ok((omega * d / SPEED_OF_LIGHT).ln()))?;
    let prefactor = 1.0 / (4.0 * PI * PI * EPSILON_0 * SPEED_OF_LIGHT * d.powi(4));
    Ok(ForceResult {
        value: spec.sign() * (prefactor * sum),
        regime: Regime::LimitNonretarded,
        lightcone_distance: None,
    })
}

/// `∓(5c/16π²ε₀d⁶) Σ R/ω_k²`, valid for `x_k ≫ 1`.
pub fn retarded_limit_force(mol: &Molecule, d: f64, spec: MirrorSpec) -> Result<ForceResult> {
    check_distance("retarded_limit_force", d)?;
    let sum = signed_sum(mol, |omega| Ok(1.0 / (omega * omega)))?;
    let prefactor = 5.0 * SPEED_OF_LIGHT / (16.0 * PI * PI * EPSILON_0 * d.powi(6));
    Ok(ForceResult {
        value: -spec.sign() * (prefactor * sum),
        regime: Regime::LimitRetarded,
        lightcone_distance: None,
    })
}

/// Which asymptotic law applies at a given distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceRegime {
    NonRetarded,
    Intermediate,
    Retarded,
}

impl DistanceRegime {
    pub fn as_str(self) -> &'static str {
        match self {
            DistanceRegime::NonRetarded => "non-retarded",
            DistanceRegime::Intermediate => "intermediate",
            DistanceRegime::Retarded => "retarded",
        }
    }
}

/// Non-retarded if every `x_k < 10⁻²`, retarded if every `x_k > 10²`.
pub fn classify_distance(mol: &Molecule, d: f64) -> Result<DistanceRegime> {
    check_distance("classify_distance", d)?;
    let xs: Vec<f64> = mol
        .transitions()
        .iter()
        .map(|t| 2.0 * d * t.omega / SPEED_OF_LIGHT)
        .collect();
    Ok(if xs.iter().all(|&x| x < 1e-2) {
        DistanceRegime::NonRetarded
    } else if xs.iter().all(|&x| x > 1e2) {
        DistanceRegime::Retarded
    } else {
        DistanceRegime::Intermediate
    })
}

/// The same brackets obtained by applying the differential operator to the
/// auxiliary functions `F(m, x_k)` and `G(m, x_k)`, scaled by 3/4 so they
/// compare directly with [`static_bracket`] and [`dynamic_bracket`].
pub mod operator_form {
    use super::{diff_operator_apply, SecondOrderJet};
    use crate::error::{Error, Result};
    use crate::specfun::aux_pair;

    /// Jets of `G(s(m), y)` and `F(s(m), y)` where `s(m) = σm + b`, `z = s(1)·y`.
    fn jets(z: f64, y: f64, sigma: f64) -> Result<(SecondOrderJet, SecondOrderJet)> {
        let (f, g) = aux_pair(z)?;
        // f' = −g, g' = f − 1/z
        let g_jet = SecondOrderJet {
            value: g,
            first: sigma * y * (f - 1.0 / z),
            second: y * y * (1.0 / (z * z) - g),
        };
        let f_jet = SecondOrderJet {
            value: f,
            first: -sigma * y * g,
            second: y * y * (1.0 / z - f),
        };
        Ok((g_jet, f_jet))
    }

    pub fn static_bracket(x_k: f64) -> Result<f64> {
        let (g, _) = jets(x_k, x_k, 1.0)?;
        Ok(0.75 * diff_operator_apply(g))
    }

    pub fn dynamic_bracket(x_k: f64, a: f64) -> Result<f64> {
        if a == 1.0 {
            return Err(Error::LightCone {
                distance: 0.0,
                guard: super::LIGHTCONE_GUARD,
            });
        }
        let y = x_k;
        let (s, c) = (a * y).sin_cos();
        let (g0, _) = jets(y, y, 1.0)?;
        let mut total = diff_operator_apply(g0);
        if a == 0.0 {
            return Ok(0.0);
        }
        let (g_sum, f_sum) = jets((1.0 + a) * y, y, 1.0)?;
        if a < 1.0 {
            // G(m) − cos(ay)/2 [G(m+a) + G(m−a)] + sin(ay)/2 [F(m+a) − F(m−a)]
            let (g_diff, f_diff) = jets((1.0 - a) * y, y, 1.0)?;
            total -= 0.5 * c * (diff_operator_apply(g_sum) + diff_operator_apply(g_diff));
            total += 0.5 * s * (diff_operator_apply(f_sum) - diff_operator_apply(f_diff));
        } else {
            // G(m) − cos(ay)/2 [G(a+m) + G(a−m)] + sin(ay)/2 [F(a+m) + F(a−m)]
            let (g_diff, f_diff) = jets((a - 1.0) * y, y, -1.0)?;
            total -= 0.5 * c * (diff_operator_apply(g_sum) + diff_operator_apply(g_diff));
            total += 0.5 * s * (diff_operator_apply(f_sum) + diff_operator_apply(f_diff));
        }
        Ok(0.75 * total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::molecule::{dimethyl_disulphide, Transition};

    const D: f64 = 1e-7;

    #[test]
    fn operator_on_elementary_functions() {
        // m⁻²: 1, −2, 6
        let inv_sq = SecondOrderJet {
            value: 1.0,
            first: -2.0,
            second: 6.0,
        };
        assert_eq!(diff_operator_apply(inv_sq), 5.0);
        // −ln m: 0, −1, 1
        let neg_log = SecondOrderJet {
            value: 0.0,
            first: -1.0,
            second: 1.0,
        };
        assert!((diff_operator_apply(neg_log) - 4.0 / 3.0).abs() < 1e-15);
        // cos(mx): cos x, −x sin x, −x² cos x
        for &x in &[0.0, 0.5, 2.0, 6.115] {
            let jet = SecondOrderJet {
                value: f64::cos(x),
                first: -x * x.sin(),
                second: -x * x * x.cos(),
            };
            let expected = x.cos() + x * x.sin() - x * x * x.cos() / 3.0;
            assert!((diff_operator_apply(jet) - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn trace_derivative_values() {
        let v = curl_green_trace_derivative(D, 0.0, MirrorSpec::Positive).unwrap();
        assert_eq!(v, 3.0 * SPEED_OF_LIGHT / (8.0 * PI * D.powi(4)));
        let w = 6.115 * SPEED_OF_LIGHT / (2.0 * D);
        let plus = curl_green_trace_derivative(D, w, MirrorSpec::Positive).unwrap();
        let minus = curl_green_trace_derivative(D, w, MirrorSpec::Negative).unwrap();
        assert_eq!(plus, -minus);
        let x = 2.0 * D * w / SPEED_OF_LIGHT;
        let bracket = x.cos() + x * x.sin() - x * x * x.cos() / 3.0;
        let direct = 3.0 * SPEED_OF_LIGHT / (8.0 * PI * D.powi(4)) * bracket;
        assert!((plus - direct).abs() <= 1e-12 * direct.abs());
        assert!(curl_green_trace_derivative(0.0, w, MirrorSpec::Positive).is_err());
    }

    #[test]
    fn brackets_agree_with_operator_form() {
        for &y in &[1e-4, 0.01, 0.5, 3.0, 6.115, 40.0, 300.0] {
            let a = static_bracket(y).unwrap();
            let b = operator_form::static_bracket(y).unwrap();
            assert!((a - b).abs() <= 1e-9 * a.abs().max(1e-3), "y={y}: {a} vs {b}");
            for &r in &[0.0, 0.1, 0.6, 0.95, 1.05, 1.7, 4.0, 30.0] {
                let a = dynamic_bracket(y, r).unwrap();
                let b = operator_form::dynamic_bracket(y, r).unwrap();
                assert!((a - b).abs() <= 1e-8 * a.abs().max(1.0), "y={y} a={r}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn repulsive_against_negative_plate() {
        let m = dimethyl_disulphide();
        let f = static_chiral_force(&m, D, MirrorSpec::Negative).unwrap();
        assert!(f.value > 0.0);
        assert_eq!(f.regime, Regime::Static);
        let g = static_chiral_force(&m, D, MirrorSpec::Positive).unwrap();
        assert_eq!(f.value, -g.value);
    }

    #[test]
    fn switch_on_gives_zero_force() {
        let m = dimethyl_disulphide();
        let g = GeometryTime::new(D, 0.0).unwrap();
        let f = dynamic_chiral_force(&m, &g, MirrorSpec::Negative).unwrap();
        assert_eq!(f.value, 0.0);
        assert_eq!(f.regime, Regime::PreLightcone);
    }

    #[test]
    fn lightcone_guard() {
        let m = dimethyl_disulphide();
        let tc = 2.0 * D / SPEED_OF_LIGHT;
        let g = GeometryTime::new(D, tc).unwrap();
        match dynamic_chiral_force(&m, &g, MirrorSpec::Negative) {
            Err(Error::LightCone { distance, .. }) => assert!(distance < LIGHTCONE_GUARD),
            other => panic!("expected light-cone error, got {other:?}"),
        }
        let omega = m.transitions()[0].omega;
        let just_outside = tc + 2.0 * LIGHTCONE_GUARD / omega;
        let g = GeometryTime::new(D, just_outside).unwrap();
        let f = dynamic_chiral_force(&m, &g, MirrorSpec::Negative).unwrap();
        assert_eq!(f.regime, Regime::PostLightcone);
        assert!(f.value.is_finite());
    }

    #[test]
    fn limits_scale() {
        let m = dimethyl_disulphide();
        let r1 = retarded_limit_force(&m, 1e-5, MirrorSpec::Negative).unwrap().value;
        let r2 = retarded_limit_force(&m, 2e-5, MirrorSpec::Negative).unwrap().value;
        assert!((r2 / r1 - 2f64.powi(-6)).abs() < 1e-15);
        let omega = m.transitions()[0].omega;
        let ratio = |d: f64| {
            let f = nonretarded_limit_force(&m, d, MirrorSpec::Negative).unwrap().value;
            f * d.powi(4) / (omega * d / SPEED_OF_LIGHT).ln()
        };
        assert!((ratio(1e-12) / ratio(1e-10) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn multi_transition_sums_linearly() {
        let t1 = Transition::new(9e15, 1e-59, 3e-64).unwrap();
        let t2 = Transition::new(3e15, 2e-59, -1e-64).unwrap();
        let m1 = Molecule::new("a", vec![t1]).unwrap();
        let m2 = Molecule::new("b", vec![t2]).unwrap();
        let both = Molecule::new("ab", vec![t1, t2]).unwrap();
        let g = GeometryTime::new(D, 3e-15).unwrap();
        let f = |m: &Molecule| dynamic_chiral_force(m, &g, MirrorSpec::Positive).unwrap().value;
        let s = f(&m1) + f(&m2);
        assert!((f(&both) - s).abs() <= 1e-14 * s.abs());
    }

    #[test]
    fn classify() {
        let m = dimethyl_disulphide();
        assert_eq!(classify_distance(&m, 1e-10).unwrap(), DistanceRegime::NonRetarded);
        assert_eq!(classify_distance(&m, 1e-7).unwrap(), DistanceRegime::Intermediate);
        assert_eq!(classify_distance(&m, 1e-5).unwrap(), DistanceRegime::Retarded);
    }

    #[test]
    fn chirality_parsing() {
        assert_eq!("+1".parse::<MirrorSpec>().unwrap(), MirrorSpec::Positive);
        assert_eq!("-1".parse::<MirrorSpec>().unwrap(), MirrorSpec::Negative);
        assert!("0".parse::<MirrorSpec>().is_err());
        assert!(MirrorSpec::from_sign(2).is_err());
    }
}
