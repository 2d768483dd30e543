//! Molecular transition data, the built-in dimethyl disulphide example and
//! JSON configuration files.
//!
//! A molecule is described by its ground-state transitions `0 → k`. Each
//! transition carries an angular frequency, the squared electric dipole
//! matrix element, the rotatory strength `R = Im(d·m)` and an optional
//! squared magnetic dipole matrix element.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One ground-state transition `0 → k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    /// Transition angular frequency (rad/s).
    pub omega: f64,
    /// `|d_0k|²` in C²·m².
    pub dipole_sq: f64,
    /// Rotatory strength `R_0k` in C²·m³·s⁻¹.
    pub rotatory: f64,
    /// Decay rate `Γ_k` (1/s).
    pub gamma: f64,
    /// `|m_0k|²` in A²·m⁴, when known.
    pub mag_sq: Option<f64>,
}

impl Transition {
    /// Non-absorbing transition without magnetic strength.
    pub fn new(omega: f64, dipole_sq: f64, rotatory: f64) -> Result<Self> {
        let t = Self {
            omega,
            dipole_sq,
            rotatory,
            gamma: 0.0,
            mag_sq: None,
        };
        t.validate("transition")?;
        Ok(t)
    }

    pub fn with_gamma(mut self, gamma: f64) -> Result<Self> {
        self.gamma = gamma;
        self.validate("transition")?;
        Ok(self)
    }

    pub fn with_mag_sq(mut self, mag_sq: f64) -> Result<Self> {
        self.mag_sq = Some(mag_sq);
        self.validate("transition")?;
        Ok(self)
    }

    fn validate(&self, prefix: &str) -> Result<()> {
        let field = |name: &str| format!("{prefix}.{name}");
        if !self.omega.is_finite() || self.omega <= 0.0 {
            return Err(Error::validation(
                field("omega_rad_s"),
                format!("must be finite and > 0, got {}", self.omega),
            ));
        }
        if !self.dipole_sq.is_finite() || self.dipole_sq < 0.0 {
            return Err(Error::validation(
                field("dipole_sq_C2m2"),
                format!("must be finite and >= 0, got {}", self.dipole_sq),
            ));
        }
        if !self.rotatory.is_finite() {
            return Err(Error::validation(field("rotatory_C2m3_per_s"), "must be finite"));
        }
        if !self.gamma.is_finite() || self.gamma < 0.0 {
            return Err(Error::validation(
                field("gamma_per_s"),
                format!("must be finite and >= 0, got {}", self.gamma),
            ));
        }
        if let Some(mag_sq) = self.mag_sq {
            if !mag_sq.is_finite() || mag_sq < 0.0 {
                return Err(Error::validation(
                    field("mag_sq"),
                    format!("must be finite and >= 0, got {mag_sq}"),
                ));
            }
            // Cauchy–Schwarz on Im(d·m)
            let limit = (self.dipole_sq * mag_sq).sqrt();
            if self.rotatory.abs() > limit * (1.0 + 4.0 * f64::EPSILON) {
                return Err(Error::validation(
                    field("rotatory_C2m3_per_s"),
                    format!(
                        "|R| = {:e} exceeds sqrt(dipole_sq * mag_sq) = {limit:e}",
                        self.rotatory.abs()
                    ),
                ));
            }
        }
        Ok(())
    }
}

/// An ordered, non-empty list of transitions from the ground state.
#[derive(Debug, Clone, PartialEq)]
pub struct Molecule {
    label: String,
    transitions: Vec<Transition>,
}

impl Molecule {
    pub fn new(label: impl Into<String>, transitions: Vec<Transition>) -> Result<Self> {
        if transitions.is_empty() {
            return Err(Error::validation("transitions", "at least one transition is required"));
        }
        for (i, t) in transitions.iter().enumerate() {
            t.validate(&format!("transitions[{i}]"))?;
        }
        Ok(Self {
            label: label.into(),
            transitions,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }

    /// True when every rotatory strength vanishes.
    pub fn is_achiral(&self) -> bool {
        self.transitions.iter().all(|t| t.rotatory == 0.0)
    }

    /// Mirror image: rotatory strengths change sign, everything else is kept.
    pub fn enantiomer(&self) -> Molecule {
        Molecule {
            label: self.label.clone(),
            transitions: self
                .transitions
                .iter()
                .map(|t| Transition {
                    rotatory: -t.rotatory,
                    ..*t
                })
                .collect(),
        }
    }
}

/// Free-function form of [`Molecule::enantiomer`].
pub fn enantiomer(m: &Molecule) -> Molecule {
    m.enantiomer()
}

/// First transition of dimethyl disulphide at a 90° dihedral angle between
/// the two CH₃–S–S planes.
pub fn dimethyl_disulphide() -> Molecule {
    Molecule {
        label: "dimethyl disulphide".to_owned(),
        transitions: vec![Transition {
            omega: 9.17e15,
            dipole_sq: 8.264e-60,
            rotatory: 3.328e-64,
            gamma: 0.0,
            mag_sq: None,
        }],
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MoleculeFile {
    label: String,
    transitions: Vec<TransitionRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
struct TransitionRecord {
    omega_rad_s: f64,
    dipole_sq_C2m2: f64,
    rotatory_C2m3_per_s: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    gamma_per_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mag_sq: Option<f64>,
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

/// Parse a molecule from JSON text.
pub fn parse_molecule(text: &str, origin: &Path) -> Result<Molecule> {
    let file: MoleculeFile = serde_json::from_str(text).map_err(|source| Error::Parse {
        path: origin.to_path_buf(),
        source,
    })?;
    let transitions = file
        .transitions
        .into_iter()
        .map(|r| Transition {
            omega: r.omega_rad_s,
            dipole_sq: r.dipole_sq_C2m2,
            rotatory: r.rotatory_C2m3_per_s,
            gamma: r.gamma_per_s,
            mag_sq: r.mag_sq,
        })
        .collect();
    Molecule::new(file.label, transitions)
}

pub fn load_molecule(path: impl AsRef<Path>) -> Result<Molecule> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_molecule(&text, path)
}

pub fn molecule_to_json(m: &Molecule) -> String {
    let file = MoleculeFile {
        label: m.label.clone(),
        transitions: m
            .transitions
            .iter()
            .map(|t| TransitionRecord {
                omega_rad_s: t.omega,
                dipole_sq_C2m2: t.dipole_sq,
                rotatory_C2m3_per_s: t.rotatory,
                gamma_per_s: t.gamma,
                mag_sq: t.mag_sq,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("molecule records always serialize")
}

pub fn save_molecule(m: &Molecule, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, molecule_to_json(m) + "\n").map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
