//! A separated frequency set mixing `+-log n` selections with a Kadec-perturbed
//! harmonic lattice, its generating products, and Boas-Bernstein reconstruction of
//! band-limited functions from samples on the set.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SamplingError {
    #[error("eta must lie in (0, 1), got {0}")]
    BadEta(f64),
    #[error("W = (1+eta) T must exceed 1, got {0}")]
    WidthTooSmall(f64),
    #[error("k_max = {k_max} must exceed k0 = {k0}")]
    WingRangeTooSmall { k_max: usize, k0: usize },
    #[error("no +-log n within reach of window k = {k} (centre {centre})")]
    EmptyWindow { k: i64, centre: f64 },
    #[error("product truncation {given} below the required {required}")]
    ProductTooShort { given: usize, required: usize },
    #[error("transform does not reproduce the selections this set was built from")]
    SelectionMismatch,
    #[error("expected {expected} samples, got {got}")]
    SampleCount { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingConfig {
    #[serde(rename = "T")]
    length: f64,
    eta: f64,
    #[serde(rename = "W")]
    width: f64,
    k0: usize,
    order: u32,
}

impl SamplingConfig {
    /// `W = (1+eta) T`, `k0 = floor(W log(2W) / pi)`, convergence-factor order 2.
    pub fn new(length: f64, eta: f64) -> Result<Self, SamplingError> {
        if !(eta > 0.0 && eta < 1.0) {
            return Err(SamplingError::BadEta(eta));
        }
        let width = (1.0 + eta) * length;
        if !(width > 1.0) || !width.is_finite() {
            return Err(SamplingError::WidthTooSmall(width));
        }
        Ok(Self {
            length,
            eta,
            width,
            k0: (width * (2.0 * width).ln() / PI).floor() as usize,
            order: 2,
        })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn k0(&self) -> usize {
        self.k0
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Radius `1/(4W)` of every selection window.
    pub fn window_radius(&self) -> f64 {
        0.25 / self.width
    }

    /// Centre and sign of window `k`: `pi k/W` on the wings, half-integer shifted
    /// lattice points `pi (k +- (k0 + 1/2))/W` for `|k| <= k0`.
    pub fn window_centre(&self, k: i64) -> f64 {
        let k0 = self.k0 as f64;
        let kf = k as f64;
        if k.unsigned_abs() as usize > self.k0 {
            PI * kf / self.width
        } else if k >= 0 {
            PI * (kf + k0 + 0.5) / self.width
        } else {
            PI * (kf - k0 - 0.5) / self.width
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Zone {
    Center,
    Wing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyEntry {
    pub k: i64,
    pub lambda: f64,
    /// `lambda = +-log n_k`.
    pub n_k: u64,
    pub zone: Zone,
    /// Set when the window held no candidate and the nearest one was taken.
    pub fallback: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencySet {
    pub config: SamplingConfig,
    pub k_max: usize,
    /// Ordered by `k` from `-k_max` to `k_max`.
    pub entries: Vec<FrequencyEntry>,
    selection_digest: u64,
}

impl FrequencySet {
    pub fn lambdas(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.lambda).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, k: i64) -> Option<&FrequencyEntry> {
        let offset = k + self.k_max as i64;
        usize::try_from(offset)
            .ok()
            .and_then(|i| self.entries.get(i))
    }

    pub fn min_separation(&self) -> f64 {
        let mut sorted = self.lambdas();
        sorted.sort_by(f64::total_cmp);
        sorted
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }

    /// `max W |lambda_k - pi k/W|` over the wings.
    pub fn max_kadec_offset(&self) -> f64 {
        let w = self.config.width;
        self.entries
            .iter()
            .filter(|e| e.zone == Zone::Wing)
            .map(|e| w * (e.lambda - PI * e.k as f64 / w).abs())
            .fold(0.0, f64::max)
    }

    /// Largest `n` whose `log n` reaches any window.
    pub fn max_index(&self) -> u64 {
        self.entries.iter().map(|e| e.n_k).max().unwrap_or(1)
    }

    /// Unperturbed wings `lambda_k = pi k/W` and centre entries at the window centres;
    /// `n_k = 0` marks entries that are not logarithms.
    pub fn harmonic(cfg: SamplingConfig, k_max: usize) -> Self {
        let entries: Vec<FrequencyEntry> = (-(k_max as i64)..=(k_max as i64))
            .map(|k| {
                let wing = k.unsigned_abs() as usize > cfg.k0;
                FrequencyEntry {
                    k,
                    lambda: cfg.window_centre(k),
                    n_k: 0,
                    zone: if wing { Zone::Wing } else { Zone::Center },
                    fallback: false,
                }
            })
            .collect();
        Self {
            config: cfg,
            k_max,
            entries,
            selection_digest: 0,
        }
    }

    pub fn selection_digest(&self) -> u64 {
        self.selection_digest
    }

    fn lambda_by_k(&self, k: i64) -> f64 {
        self.get(k)
            .map_or(PI * k as f64 / self.config.width, |e| e.lambda)
    }
}

/// FNV-1a over the bit patterns of the selected magnitudes.
fn digest(magnitudes: impl Iterator<Item = f64>) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for m in magnitudes {
        for byte in m.to_bits().to_le_bytes() {
            hash ^= byte as u64;
            hash = hash.wrapping_mul(0x0100_0000_01b3);
        }
    }
    hash
}

/// Choose one `+-log n` per window, minimizing `magnitude`; ties go to the smaller `n`.
pub fn construct_lambda(
    magnitude: impl Fn(f64) -> f64,
    cfg: SamplingConfig,
    k_max: usize,
) -> Result<FrequencySet, SamplingError> {
    if k_max <= cfg.k0 {
        return Err(SamplingError::WingRangeTooSmall { k_max, k0: cfg.k0 });
    }
    let radius = cfg.window_radius();
    let fallback_reach = (PI - 1.0) / (2.0 * cfg.width);
    let mut entries = Vec::with_capacity(2 * k_max + 1);
    let mut selected = Vec::with_capacity(2 * k_max + 1);
    for k in -(k_max as i64)..=(k_max as i64) {
        let centre = cfg.window_centre(k);
        let sign = if centre >= 0.0 { 1.0 } else { -1.0 };
        let reach = centre.abs() + fallback_reach;
        let first = ((centre.abs() - fallback_reach).exp().floor() as u64).max(1);
        let last = reach.exp().ceil() as u64 + 1;
        let candidates: Vec<(u64, f64)> = (first..=last)
            .map(|n| (n, sign * (n as f64).ln()))
            .collect();
        let inside: Vec<(u64, f64)> = candidates
            .iter()
            .copied()
            .filter(|&(_, l)| (l - centre).abs() < radius)
            .collect();
        let (pick, fallback) = if inside.is_empty() {
            let nearest = candidates
                .iter()
                .copied()
                .filter(|&(_, l)| (l - centre).abs() <= fallback_reach)
                .min_by(|a, b| (a.1 - centre).abs().total_cmp(&(b.1 - centre).abs()));
            match nearest {
                Some(p) => (p, true),
                None => return Err(SamplingError::EmptyWindow { k, centre }),
            }
        } else {
            let mut best = inside[0];
            let mut best_mag = magnitude(best.1);
            for &cand in &inside[1..] {
                let mag = magnitude(cand.1);
                if mag < best_mag {
                    best = cand;
                    best_mag = mag;
                }
            }
            (best, false)
        };
        selected.push(magnitude(pick.1));
        entries.push(FrequencyEntry {
            k,
            lambda: pick.1,
            n_k: pick.0,
            zone: if k.unsigned_abs() as usize > cfg.k0 {
                Zone::Wing
            } else {
                Zone::Center
            },
            fallback,
        });
    }
    Ok(FrequencySet {
        config: cfg,
        k_max,
        entries,
        selection_digest: digest(selected.into_iter()),
    })
}

/// `sum_{k > K} 1/k^2`.
fn inverse_square_tail(k: usize) -> f64 {
    let k = k as f64;
    1.0 / k - 0.5 / (k * k) + 1.0 / (6.0 * k * k * k) - 1.0 / (30.0 * k.powi(5))
}

/// Smallest admissible product length at `z`.
pub fn required_product_len(cfg: &SamplingConfig, z: Complex64) -> usize {
    (4.0 * (z.norm() * cfg.width / PI + cfg.k0 as f64)).ceil() as usize
}

/// `prod_{k=from}^{to} (1 - (z W / pi k)^2)` times the folded remainder.
fn harmonic_tail(width: f64, z: Complex64, from: usize, to: usize) -> Complex64 {
    let x = z * width / PI;
    let x2 = x * x;
    let mut acc = Complex64::new(1.0, 0.0);
    for k in from..=to {
        acc *= 1.0 - x2 / (k * k) as f64;
    }
    acc * (-x2 * inverse_square_tail(to.max(from.saturating_sub(1)))).exp()
}

fn check_len(freq: &FrequencySet, z: Complex64, k_prod: usize) -> Result<(), SamplingError> {
    let required = required_product_len(&freq.config, z).max(freq.k_max + 1);
    if k_prod < required {
        return Err(SamplingError::ProductTooShort {
            given: k_prod,
            required,
        });
    }
    Ok(())
}

/// `S(z) = z prod_{k<=k0} (1 - (zW/pi k)^2) prod_{k0<|k|} (1 - z/lambda_k)`, with
/// harmonic zeros past `k_max`, truncated at `k_prod` and the rest folded.
pub fn eval_s(
    freq: &FrequencySet,
    z: Complex64,
    k_prod: usize,
) -> Result<Complex64, SamplingError> {
    check_len(freq, z, k_prod)?;
    let w = freq.config.width;
    let mut acc = z;
    for k in 1..=freq.config.k0 {
        let x = z * w / (PI * k as f64);
        acc *= 1.0 - x * x;
    }
    for e in freq.entries.iter().filter(|e| e.zone == Zone::Wing) {
        acc *= 1.0 - z / e.lambda;
    }
    Ok(acc * harmonic_tail(w, z, freq.k_max + 1, k_prod))
}

/// `G(z) = prod_{lambda in Lambda} (1 - z/lambda)` with the same harmonic tail as `S`;
/// equal to `S` with its `2 k0 + 1` centre zeros moved onto the centre selections.
pub fn eval_g_sampling(
    freq: &FrequencySet,
    z: Complex64,
    k_prod: usize,
) -> Result<Complex64, SamplingError> {
    check_len(freq, z, k_prod)?;
    Ok(g_omitting(freq, z, None, k_prod))
}

fn g_omitting(freq: &FrequencySet, z: Complex64, skip: Option<usize>, k_prod: usize) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for (i, e) in freq.entries.iter().enumerate() {
        if Some(i) != skip {
            acc *= 1.0 - z / e.lambda;
        }
    }
    acc * harmonic_tail(freq.config.width, z, freq.k_max + 1, k_prod)
}

/// `G'(lambda_j) = -G_j(lambda_j)/lambda_j` with `G_j` omitting the `j`-th factor.
pub fn g_derivative_at_node(freq: &FrequencySet, j: usize, k_prod: usize) -> Complex64 {
    let lambda = freq.entries[j].lambda;
    -g_omitting(freq, Complex64::new(lambda, 0.0), Some(j), k_prod) / lambda
}

/// Convergence factor `h_2(y) = (sin(eta y/2) / (eta y/2))^2`.
pub fn convergence_factor(eta: f64, y: f64) -> f64 {
    let u = 0.5 * eta * y;
    if u == 0.0 {
        1.0
    } else {
        let s = u.sin() / u;
        s * s
    }
}

/// Precomputed Boas-Bernstein kernels `h_2(x - lambda_j) G_j(x) / G_j(lambda_j)`.
#[derive(Debug, Clone)]
pub struct Reconstructor {
    freq: FrequencySet,
    k_prod: usize,
    node_values: Vec<Complex64>,
}

impl Reconstructor {
    /// `reach` is the largest `|x|` that will be evaluated.
    pub fn new(freq: FrequencySet, reach: f64) -> Self {
        let k_prod = required_product_len(&freq.config, Complex64::new(reach, 0.0))
            .max(freq.k_max + 1)
            .max(4096);
        let node_values = (0..freq.len())
            .into_par_iter()
            .map(|j| {
                let z = Complex64::new(freq.entries[j].lambda, 0.0);
                g_omitting(&freq, z, Some(j), k_prod)
            })
            .collect();
        Self {
            freq,
            k_prod,
            node_values,
        }
    }

    pub fn frequencies(&self) -> &FrequencySet {
        &self.freq
    }

    pub fn product_len(&self) -> usize {
        self.k_prod
    }

    /// Kernel of node `j` at `x`; equals 1 at `lambda_j` and 0 at every other node.
    pub fn kernel(&self, j: usize, x: f64) -> Complex64 {
        let lambda = self.freq.entries[j].lambda;
        let z = Complex64::new(x, 0.0);
        convergence_factor(self.freq.config.eta, x - lambda)
            * g_omitting(&self.freq, z, Some(j), self.k_prod)
            / self.node_values[j]
    }

    /// `1 / |G'(lambda_j)|`, the amplification of sample `j`.
    pub fn amplification(&self, j: usize) -> f64 {
        (self.freq.entries[j].lambda / self.node_values[j]).norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleValue {
    pub value: Complex64,
    /// Rough size of the terms beyond the wing cutoff: the largest edge sample times
    /// the `h_2` decay summed over the omitted harmonic nodes.
    pub tail_estimate: f64,
}

/// Boas-Bernstein partial sum at `x` from samples aligned with `freq.entries`.
pub fn biorthogonal_sample(
    rec: &Reconstructor,
    samples: &[Complex64],
    x: f64,
) -> Result<SampleValue, SamplingError> {
    let freq = &rec.freq;
    if samples.len() != freq.len() {
        return Err(SamplingError::SampleCount {
            expected: freq.len(),
            got: samples.len(),
        });
    }
    let value = samples
        .iter()
        .enumerate()
        .map(|(j, s)| s * rec.kernel(j, x))
        .sum();
    let edge = samples[0].norm().max(samples[samples.len() - 1].norm());
    let eta = freq.config.eta;
    let w = freq.config.width;
    let omitted: f64 = ((freq.k_max + 1)..(freq.k_max + 1 + 10_000))
        .flat_map(|k| [1.0, -1.0].map(|sign| sign * PI * k as f64 / w))
        .map(|node| {
            (2.0 / (eta * (x - node).abs().max(1e-300)))
                .powi(2)
                .min(1.0)
        })
        .sum();
    Ok(SampleValue {
        value,
        tail_estimate: edge * omitted,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EasyInequality {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// `sum_{n <= n_max} (|f^(log n)|^2 + |f^(-log n)|^2)/n` (n = 1 once) against
/// `(1/4T) sum_Lambda |f^(lambda)|^2`.
pub fn check_easy_inequality(
    transform: impl Fn(f64) -> Complex64 + Sync,
    freq: &FrequencySet,
    n_max: u64,
) -> Result<EasyInequality, SamplingError> {
    let at_nodes: Vec<f64> = freq
        .entries
        .iter()
        .map(|e| transform(e.lambda).norm())
        .collect();
    if digest(at_nodes.iter().copied()) != freq.selection_digest {
        return Err(SamplingError::SelectionMismatch);
    }
    let lhs = transform(0.0).norm_sqr()
        + (2..=n_max)
            .into_par_iter()
            .map(|n| {
                let l = (n as f64).ln();
                (transform(l).norm_sqr() + transform(-l).norm_sqr()) / n as f64
            })
            .collect::<Vec<f64>>()
            .iter()
            .sum::<f64>();
    let rhs = at_nodes.iter().map(|m| m * m).sum::<f64>() / (4.0 * freq.config.length);
    Ok(EasyInequality {
        lhs,
        rhs,
        holds: lhs >= rhs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AvdoninReport {
    /// `min |Phi(x+i)| (1+|x|)^{1/pi}`.
    pub lower: f64,
    /// `max |Phi(x+i)| (1+|x|)^{-1/pi}`.
    pub upper: f64,
    /// `max(1/lower, upper)`.
    pub kappa: f64,
    /// `max |S(x)| / (1+|W x|)^{1/pi}` on the real grid.
    pub real_line_kappa: f64,
    /// Bracket constant for `|S'(lambda_k)|` over the wing nodes.
    pub derivative_kappa: f64,
}

/// Growth of `Phi(z) = S(pi z/W) W / sinh(pi)` one unit above the real axis.
pub fn check_avdonin_growth(freq: &FrequencySet, x_grid: &[f64]) -> AvdoninReport {
    let w = freq.config.width;
    let reach = x_grid.iter().fold(0.0f64, |m, x| m.max(x.abs())) + 2.0;
    let k_prod = required_product_len(&freq.config, Complex64::new(PI * reach / w, PI / w))
        .max(freq.k_max + 1)
        .max(4096);
    let expo = 1.0 / PI;
    let norm = w / PI.sinh();
    let (lower, upper, real_line) = x_grid
        .par_iter()
        .map(|&x| {
            let z = Complex64::new(PI * x / w, PI / w);
            let phi = eval_s(freq, z, k_prod).map_or(f64::NAN, |v| v.norm() * norm);
            let weight = (1.0 + x.abs()).powf(expo);
            let real = eval_s(freq, Complex64::new(x, 0.0), k_prod).map_or(f64::NAN, |v| v.norm())
                / (1.0 + (w * x).abs()).powf(expo);
            (phi * weight, phi / weight, real)
        })
        .reduce(
            || (f64::INFINITY, 0.0, 0.0),
            |a, b| (a.0.min(b.0), a.1.max(b.1), a.2.max(b.2)),
        );
    let derivative_kappa = freq
        .entries
        .iter()
        .filter(|e| e.zone == Zone::Wing)
        .map(|e| {
            let d = s_derivative_at_wing(freq, e.k, k_prod).norm();
            let scale = (e.lambda.abs() + 1.0).powf(expo);
            let low = w.powf(1.0 - expo) / scale;
            let high = w.powf(1.0 + expo) * scale;
            (low / d).max(d / high)
        })
        .fold(0.0, f64::max);
    AvdoninReport {
        lower,
        upper,
        kappa: (1.0 / lower).max(upper),
        real_line_kappa: real_line,
        derivative_kappa,
    }
}

/// `S'(lambda_k)` for a wing zero, by omitting its factor.
fn s_derivative_at_wing(freq: &FrequencySet, k: i64, k_prod: usize) -> Complex64 {
    let lambda = freq.lambda_by_k(k);
    let z = Complex64::new(lambda, 0.0);
    let w = freq.config.width;
    let mut acc = z;
    for j in 1..=freq.config.k0 {
        let x = z * w / (PI * j as f64);
        acc *= 1.0 - x * x;
    }
    for e in freq
        .entries
        .iter()
        .filter(|e| e.zone == Zone::Wing && e.k != k)
    {
        acc *= 1.0 - z / e.lambda;
    }
    -acc * harmonic_tail(w, z, freq.k_max + 1, k_prod) / lambda
}

/// `||f||^2 <= T^{(1+eps)(12T/pi) log 2} sum_Lambda |f^(lambda)|^2`, as a literal check.
pub fn check_hard_inequality(norm_sq: f64, node_energy: f64, length: f64, epsilon: f64) -> bool {
    let log_constant = (1.0 + epsilon) * (12.0 * length / PI) * 2f64.ln() * length.ln();
    norm_sq.ln() <= log_constant + node_energy.ln()
}

/// Sum of shifted Kaiser-Bessel pulses `c_j e^{-i s_j x} K(x)` with
/// `K(x) = 2 tau sinh(sqrt(beta^2 - tau^2 x^2)) / sqrt(beta^2 - tau^2 x^2)`, the
/// transform of `I_0(beta sqrt(1 - (t/tau)^2))` on `|t| <= tau`. Supported in
/// `|t| <= tau + max |s_j|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseTrain {
    pub tau: f64,
    pub beta: f64,
    pub shifts: Vec<f64>,
    pub coeffs: Vec<Complex64>,
}

impl PulseTrain {
    pub fn support_radius(&self) -> f64 {
        self.tau + self.shifts.iter().fold(0.0f64, |m, s| m.max(s.abs()))
    }

    fn kernel(&self, x: f64) -> f64 {
        let q2 = self.beta * self.beta - self.tau * self.tau * x * x;
        if q2 > 1e-20 {
            let q = q2.sqrt();
            2.0 * self.tau * q.sinh() / q
        } else if q2 < -1e-20 {
            let q = (-q2).sqrt();
            2.0 * self.tau * q.sin() / q
        } else {
            2.0 * self.tau
        }
    }

    pub fn transform(&self, x: f64) -> Complex64 {
        let k = self.kernel(x);
        self.shifts
            .iter()
            .zip(&self.coeffs)
            .map(|(s, c)| c * Complex64::from_polar(k, -s * x))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k0_formula() {
        let cfg = SamplingConfig::new(10.0 / 1.25, 0.25).unwrap();
        assert!((cfg.width() - 10.0).abs() < 1e-15);
        assert_eq!(cfg.k0(), 9);
    }

    #[test]
    fn construction_invariants() {
        let cfg = SamplingConfig::new(5.0, 0.2).unwrap();
        let freq = construct_lambda(|_| 1.0, cfg, 4 * cfg.k0()).unwrap();
        assert_eq!(freq.len(), 2 * 4 * cfg.k0() + 1);
        assert!(freq.min_separation() >= 0.25 / cfg.width());
        assert!(freq.max_kadec_offset() <= 0.25);
        assert_eq!(freq.entries.iter().filter(|e| e.fallback).count(), 1);
        assert_eq!(freq.get(0).unwrap().n_k, 11);
    }

    #[test]
    fn constant_magnitude_ties_pick_smallest_n() {
        let cfg = SamplingConfig::new(5.0, 0.2).unwrap();
        let freq = construct_lambda(|_| 1.0, cfg, 20).unwrap();
        let radius = cfg.window_radius();
        for e in freq.entries.iter().filter(|e| !e.fallback) {
            let smaller = e.n_k - 1;
            let l = (smaller as f64).ln() * e.lambda.signum();
            assert!(smaller == 0 || (l - cfg.window_centre(e.k)).abs() >= radius);
        }
    }

    #[test]
    fn product_vanishes_at_nodes() {
        let cfg = SamplingConfig::new(5.0, 0.2).unwrap();
        let freq = construct_lambda(|x| (x * 1.7).cos().abs(), cfg, 16).unwrap();
        for e in &freq.entries {
            let z = Complex64::new(e.lambda, 0.0);
            let g = eval_g_sampling(&freq, z, 4096).unwrap();
            assert!(g.norm() < 1e-12);
        }
        assert_eq!(
            eval_s(&freq, Complex64::new(0.0, 0.0), 4096)
                .unwrap()
                .norm(),
            0.0
        );
    }

    #[test]
    fn convergence_factor_properties() {
        assert_eq!(convergence_factor(0.2, 0.0), 1.0);
        for i in 1..200 {
            let y = 0.37 * i as f64;
            let h = convergence_factor(0.2, y);
            assert_eq!(h, convergence_factor(0.2, -y));
            assert!(h <= (2.0 / (0.2 * y)).powi(2).min(1.0) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn rejects_short_product() {
        let cfg = SamplingConfig::new(5.0, 0.2).unwrap();
        let freq = construct_lambda(|_| 1.0, cfg, 16).unwrap();
        assert!(matches!(
            eval_s(&freq, Complex64::new(100.0, 0.0), 20),
            Err(SamplingError::ProductTooShort { .. })
        ));
    }
}
