//! Declarative config file: one TOML table per command, every key optional.
//!
//! ```toml
//! seed = 42
//!
//! [frame_bounds]
//! lengths = [0.05, 1.0, 2.0]
//! truncation = 400
//! grid = 64
//!
//! [match]
//! interval = [-1.0, 1.0]
//! terms = [{ coeff = [1.0, 0.0], shift = [0.0, 0.0], power = 1 }]
//! ```

use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

use crate::CliError;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub frame_bounds: FrameBoundsSection,
    #[serde(rename = "match")]
    pub matching: MatchSection,
    pub extremal: ExtremalSection,
    pub sampling: SamplingSection,
    pub carleson: CarlesonSection,
    pub mv_fuzz: MvFuzzSection,
    pub verify_identity: IdentitySection,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FrameBoundsSection {
    pub lengths: Vec<f64>,
    pub truncation: usize,
    pub grid: usize,
    pub alpha: f64,
    /// Optional CSV dump of the estimated spectra (length, index, eigenvalue).
    pub spectrum_out: Option<PathBuf>,
}

impl Default for FrameBoundsSection {
    fn default() -> Self {
        Self {
            lengths: vec![0.05, 0.5, 1.0, 2.0, 5.0, 10.0],
            truncation: 400,
            grid: 64,
            alpha: 0.0,
            spectrum_out: None,
        }
    }
}

/// `coeff * (s + shift)^{-power}`, complex numbers as `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub coeff: [f64; 2],
    pub shift: [f64; 2],
    pub power: u32,
}

impl std::str::FromStr for TermSpec {
    type Err = String;

    /// `re,im,shift_re,shift_im,power`.
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [cr, ci, sr, si, k] = parts.as_slice() else {
            return Err(format!(
                "term '{s}' needs 5 fields: re,im,shift_re,shift_im,power"
            ));
        };
        let num = |x: &str| x.parse::<f64>().map_err(|e| format!("term '{s}': {e}"));
        Ok(Self {
            coeff: [num(cr)?, num(ci)?],
            shift: [num(sr)?, num(si)?],
            power: k.parse().map_err(|e| format!("term '{s}': {e}"))?,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MatchSection {
    pub interval: [f64; 2],
    pub truncation: usize,
    pub grid: usize,
    pub cutoff: f64,
    pub terms: Vec<TermSpec>,
    /// Frame estimate used for the norm bounds.
    pub bound_truncation: usize,
    pub bound_grid: usize,
    pub phi_points: Vec<[f64; 2]>,
    pub tail_cut: f64,
    pub gamma_top: usize,
}

impl Default for MatchSection {
    fn default() -> Self {
        Self {
            interval: [-1.0, 1.0],
            truncation: 2000,
            grid: 256,
            cutoff: 1e-8,
            terms: Vec::new(),
            bound_truncation: 400,
            bound_grid: 64,
            phi_points: vec![[2.0, 0.0], [1.5, 3.0], [-0.5, 2.0], [0.75, -4.0]],
            tail_cut: 200.0,
            gamma_top: 100,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExtremalSection {
    pub lengths: Vec<f64>,
    pub epsilon: f64,
}

impl Default for ExtremalSection {
    fn default() -> Self {
        Self {
            lengths: vec![12.0, 20.0, 30.0],
            epsilon: 0.3,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplingSection {
    pub length: f64,
    pub eta: f64,
    /// Defaults to `4 k0`.
    pub k_max: Option<usize>,
    /// Pulse half-width as a fraction of `T`.
    pub tau_fraction: f64,
    pub beta: f64,
    pub shifts: Vec<f64>,
    pub coeffs: Vec<[f64; 2]>,
    /// Defaults to twice the largest selected `n`.
    pub easy_n_max: Option<u64>,
}

impl Default for SamplingSection {
    fn default() -> Self {
        Self {
            length: 5.0,
            eta: 0.2,
            k_max: None,
            tau_fraction: 0.7,
            beta: 25.0,
            shifts: vec![0.3, -0.8, 0.95],
            coeffs: vec![[1.0, 0.5], [-0.7, 0.2], [0.4, -1.1]],
            easy_n_max: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CarlesonSection {
    /// CSV with columns sigma, t, mass; when absent the lattice measure is built.
    pub measure: Option<PathBuf>,
    pub length: f64,
    pub epsilon: f64,
    /// Defaults to `epsilon / 2`.
    pub shift: Option<f64>,
    /// Random boxes for the oracle cross-check; needs a seed when nonzero.
    pub oracle_samples: usize,
}

impl Default for CarlesonSection {
    fn default() -> Self {
        Self {
            measure: None,
            length: 1.0,
            epsilon: 0.25,
            shift: None,
            oracle_samples: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MvFuzzSection {
    pub instances: u64,
    pub max_len: usize,
}

impl Default for MvFuzzSection {
    fn default() -> Self {
        Self {
            instances: 100_000,
            max_len: 50,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IdentitySection {
    pub interval: [f64; 2],
    pub truncation: usize,
    pub grid: usize,
    pub threshold: f64,
}

impl Default for IdentitySection {
    fn default() -> Self {
        Self {
            interval: [-1.0, 1.0],
            truncation: 10_000,
            grid: 2048,
            threshold: 5e-2,
        }
    }
}
