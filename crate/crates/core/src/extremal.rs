//! The product `G(x) = sin(pi x) prod_{k=2}^K sinc(pi x / log k)` vanishing at
//! `x = log n` for `n <= K`, whose samples at `+-log n` are small compared to its
//! `L^2` norm. It witnesses the decay of the lower frame bound in `|I|`.

use crate::quadrature::gauss_legendre_nodes;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{E, PI};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExtremalError {
    #[error("T = {length} must exceed (1+eps) pi e = {minimum}")]
    LengthTooSmall { length: f64, minimum: f64 },
    #[error("epsilon must lie in (0, 1), got {0}")]
    BadEpsilon(f64),
    #[error("support sum pi sum_(k=2..{factors}) 1/log k = {support_sum} exceeds T = {length}")]
    SupportViolated {
        support_sum: f64,
        length: f64,
        factors: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalConfig {
    length: f64,
    epsilon: f64,
    mu: f64,
    factors: usize,
}

impl ExtremalConfig {
    /// `T = (1+eps) pi e^mu / mu` solved for `mu`, `K = floor(e^mu)`.
    pub fn new(length: f64, epsilon: f64) -> Result<Self, ExtremalError> {
        let mu = solve_mu(length, epsilon)?;
        Ok(Self {
            length,
            epsilon,
            mu,
            factors: mu.exp().floor() as usize,
        })
    }

    /// Config with an explicit product length, for small oracle cases.
    pub fn with_factors(factors: usize) -> Self {
        let mu = (factors as f64).ln();
        Self {
            length: PI * factors as f64 / mu,
            epsilon: 0.0,
            mu,
            factors: factors.max(1),
        }
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// `K`: the product runs over `k = 2..=K`.
    pub fn factors(&self) -> usize {
        self.factors
    }

    /// `pi sum_{k=2}^K 1/log k`.
    pub fn support_sum(&self) -> f64 {
        PI * (2..=self.factors)
            .map(|k| 1.0 / (k as f64).ln())
            .sum::<f64>()
    }

    /// Exact Paley-Wiener radius, which also counts the `sin(pi x)` factor.
    pub fn support_radius(&self) -> f64 {
        PI + self.support_sum()
    }

    pub fn decay_bound(&self) -> f64 {
        self.length
            .powf(-(1.0 - self.epsilon) * (2.0 * self.length / PI) * PI.ln())
    }

    pub fn tail_target(&self) -> f64 {
        (-2.0 * PI.ln() * self.mu.exp()).exp()
    }
}

/// Unique `mu > 1` with `(1+eps) pi e^mu / mu = T`, by bisection.
pub fn solve_mu(length: f64, epsilon: f64) -> Result<f64, ExtremalError> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(ExtremalError::BadEpsilon(epsilon));
    }
    let scale = (1.0 + epsilon) * PI;
    let minimum = scale * E;
    if !(length > minimum) {
        return Err(ExtremalError::LengthTooSmall { length, minimum });
    }
    let excess = |mu: f64| scale * mu.exp() / mu - length;
    let (mut lo, mut hi) = (1.0, length.ln() + length.ln().ln() + 10.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if excess(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `G(x)`, accumulated as log-magnitude and sign.
pub fn eval_g(cfg: &ExtremalConfig, x: f64) -> f64 {
    let lead = (PI * x).sin();
    if lead == 0.0 {
        return 0.0;
    }
    let mut log_mag = lead.abs().ln();
    let mut negative = lead < 0.0;
    for k in 2..=cfg.factors {
        let y = PI * x / (k as f64).ln();
        if y == 0.0 {
            continue;
        }
        let factor = y.sin() / y;
        if factor == 0.0 {
            return 0.0;
        }
        log_mag += factor.abs().ln();
        negative ^= factor < 0.0;
    }
    let mag = log_mag.exp();
    if negative {
        -mag
    } else {
        mag
    }
}

/// `prod_{k=2}^K min(1, log k/(pi x))`, a bound for `|G(x)|`, `x > 0`.
pub fn envelope(cfg: &ExtremalConfig, x: f64) -> f64 {
    (2..=cfg.factors)
        .map(|k| ((k as f64).ln() / (PI * x)).min(1.0))
        .product()
}

fn ordered_sum(parts: Vec<f64>) -> f64 {
    parts.iter().sum()
}

/// `int_X^inf envelope^2`, valid once `X >= log K / pi` so every factor is active.
fn envelope_tail_integral(cfg: &ExtremalConfig, from: f64) -> f64 {
    let active = cfg.factors.saturating_sub(1) as i32;
    if active == 0 {
        return f64::INFINITY;
    }
    let from = from.max((cfg.factors as f64).ln() / PI);
    let log_c: f64 = (2..=cfg.factors).map(|k| ((k as f64).ln() / PI).ln()).sum();
    let power = 2 * active - 1;
    if power <= 0 {
        return f64::INFINITY;
    }
    (2.0 * log_c - power as f64 * from.ln()).exp() / power as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub value: f64,
    /// Envelope bound on the neglected `|x| > cut` part.
    pub tail_bound: f64,
    pub cut: f64,
}

/// `int_R G^2`: Gauss panels of width 1/2 on `[0, X]`, doubled until the envelope
/// tail is below `1e-6` of the computed part.
pub fn norm_g_squared(cfg: &ExtremalConfig) -> NormEstimate {
    let (x, w) = gauss_legendre_nodes(16);
    let panel = |p: usize| -> f64 {
        let lo = 0.5 * p as f64;
        x.iter()
            .zip(&w)
            .map(|(xi, wi)| {
                let g = eval_g(cfg, lo + 0.25 * (1.0 + xi));
                0.25 * wi * g * g
            })
            .sum()
    };
    let mut panels = 64;
    let mut half: f64 = ordered_sum((0..panels).into_par_iter().map(panel).collect());
    loop {
        let cut = 0.5 * panels as f64;
        let tail = 2.0 * envelope_tail_integral(cfg, cut);
        if tail <= 1e-6 * 2.0 * half || panels >= 1 << 22 {
            return NormEstimate {
                value: 2.0 * half,
                tail_bound: tail,
                cut,
            };
        }
        half += ordered_sum((panels..2 * panels).into_par_iter().map(panel).collect());
        panels *= 2;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailWeight {
    /// `sum_{K < n <= cutoff} G(log n)^2 / n`.
    pub sum: f64,
    pub tail_bound: f64,
    pub cutoff: u64,
}

impl TailWeight {
    pub fn total_upper(&self) -> f64 {
        self.sum + self.tail_bound
    }
}

/// `sum_{log n > mu} G(log n)^2 / n` up to a cutoff, plus the envelope bound past it.
/// `G(log n)^2/n <= int_{log(n-1)}^{log n} envelope^2` for decreasing envelope.
pub fn tail_weight_to(cfg: &ExtremalConfig, cutoff: u64) -> TailWeight {
    let first = cfg.factors as u64 + 1;
    let sum = if cutoff < first {
        0.0
    } else {
        (first..=cutoff)
            .into_par_iter()
            .map(|n| {
                let g = eval_g(cfg, (n as f64).ln());
                g * g / n as f64
            })
            .collect::<Vec<f64>>()
            .iter()
            .sum()
    };
    TailWeight {
        sum,
        tail_bound: envelope_tail_integral(cfg, (cutoff.max(first) as f64).ln()),
        cutoff,
    }
}

/// Cutoff chosen so the tail bound is below 1% of `exp(-2 log(pi) e^mu)`, at least 10^4.
pub fn tail_weight(cfg: &ExtremalConfig) -> TailWeight {
    let target = 0.01 * cfg.tail_target();
    let mut cutoff: u64 = 10_000;
    while envelope_tail_integral(cfg, (cutoff as f64).ln()) > target && cutoff < 1 << 30 {
        cutoff *= 2;
    }
    tail_weight_to(cfg, cutoff)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayRatio {
    pub ratio: f64,
    pub decay_bound: f64,
    /// `|G(0)|^2 + sum_{n>=2} (G(log n)^2 + G(-log n)^2)/n`.
    pub numerator: f64,
    pub norm_sq: f64,
    pub support_sum: f64,
    pub support_radius: f64,
}

impl DecayRatio {
    pub fn within_bound(&self) -> bool {
        self.ratio <= self.decay_bound
    }
}

/// `||S* g||^2 / ||g||^2` with `g^ = G`, so `||g||^2 = ||G||^2 / (2 pi)`.
pub fn frame_decay_ratio(cfg: &ExtremalConfig) -> Result<DecayRatio, ExtremalError> {
    let support_sum = cfg.support_sum();
    if support_sum > cfg.length {
        return Err(ExtremalError::SupportViolated {
            support_sum,
            length: cfg.length,
            factors: cfg.factors,
        });
    }
    Ok(frame_decay_ratio_unchecked(cfg))
}

/// As `frame_decay_ratio` without the support precondition.
pub fn frame_decay_ratio_unchecked(cfg: &ExtremalConfig) -> DecayRatio {
    let at_zero = eval_g(cfg, 0.0);
    let numerator = at_zero * at_zero + 2.0 * tail_weight(cfg).sum;
    let norm_sq = norm_g_squared(cfg).value;
    DecayRatio {
        ratio: 2.0 * PI * numerator / norm_sq,
        decay_bound: cfg.decay_bound(),
        numerator,
        norm_sq,
        support_sum: cfg.support_sum(),
        support_radius: cfg.support_radius(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mu_fixed_point() {
        let length = PI * E * E / 2.0;
        assert!((solve_mu(length, 0.0).unwrap() - 2.0).abs() < 1e-10);
        let mu = solve_mu(100.0, 0.1).unwrap();
        assert!(((1.1 * PI * mu.exp() / mu - 100.0) / 100.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_small_length() {
        assert!(matches!(
            solve_mu(5.0, 0.3),
            Err(ExtremalError::LengthTooSmall { .. })
        ));
        assert!(solve_mu(50.0, 1.0).is_err());
    }

    #[test]
    fn three_factor_value() {
        let cfg = ExtremalConfig::with_factors(3);
        let sinc = |y: f64| y.sin() / y;
        let want = sinc(PI / (2.0 * 2f64.ln())) * sinc(PI / (2.0 * 3f64.ln()));
        assert!((eval_g(&cfg, 0.5) - want).abs() < 1e-15);
    }

    #[test]
    fn zeros() {
        let cfg = ExtremalConfig::new(20.0, 0.3).unwrap();
        assert_eq!(eval_g(&cfg, 0.0), 0.0);
        for k in 2..=cfg.factors() {
            let x = (k as f64).ln();
            assert!(eval_g(&cfg, x).abs() <= 1e-12 * envelope(&cfg, x).max(1e-300));
        }
    }

    #[test]
    fn envelope_dominates() {
        let cfg = ExtremalConfig::new(30.0, 0.3).unwrap();
        for i in 1..2000 {
            let x = 0.013 * i as f64;
            assert!(eval_g(&cfg, x).abs() <= envelope(&cfg, x) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn two_factor_norm_matches_fixed_grid() {
        let cfg = ExtremalConfig::with_factors(2);
        let got = norm_g_squared(&cfg);
        // midpoint rule on [-50, 50] with h = 1e-3, plus the envelope tail
        let h = 1e-3;
        let brute: f64 = (0..100_000)
            .map(|j| {
                let g = eval_g(&cfg, -50.0 + (j as f64 + 0.5) * h);
                g * g * h
            })
            .sum();
        let tail = 2.0 * envelope_tail_integral(&cfg, 50.0);
        assert!((got.value - brute).abs() <= 1e-3 * got.value + tail);
    }
}
