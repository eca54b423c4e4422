//! Intervals on the boundary line and quadrature grids discretizing `L^2(I)`.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("interval endpoints must be finite with a < b, got ({a}, {b})")]
    BadInterval { a: f64, b: f64 },
    #[error("grid needs at least {min} nodes, got {got}")]
    TooFewNodes { min: usize, got: usize },
    #[error("nodes and weights differ in length ({nodes} vs {weights})")]
    LengthMismatch { nodes: usize, weights: usize },
    #[error("nodes must be strictly increasing and lie in the interval")]
    NodesOutOfOrder,
    #[error("weights must be positive and sum to |I| (sum {sum}, |I| {length})")]
    BadWeights { sum: f64, length: f64 },
    #[error("grid is not uniform (spacing varies by {deviation:e})")]
    NonUniform { deviation: f64 },
}

/// Bounded interval `(a, b)` of ordinates `t` on the line `sigma = 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self, GridError> {
        if a.is_finite() && b.is_finite() && a < b {
            Ok(Self { a, b })
        } else {
            Err(GridError::BadInterval { a, b })
        }
    }

    /// Interval of the given length centred at 0.
    pub fn centered(length: f64) -> Result<Self, GridError> {
        Self::new(-0.5 * length, 0.5 * length)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    pub fn contains(&self, t: f64) -> bool {
        self.a <= t && t <= self.b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureRule {
    GaussLegendre,
    Trapezoid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureGrid {
    interval: Interval,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    rule: QuadratureRule,
}

/// Panel order for the composite Gauss-Legendre rule.
pub const PANEL_ORDER: usize = 16;

impl QuadratureGrid {
    /// Composite Gauss-Legendre with `ceil(m/16)` equal panels and `m` nodes in total.
    pub fn gauss_legendre(interval: Interval, m: usize) -> Result<Self, GridError> {
        if m < 1 {
            return Err(GridError::TooFewNodes { min: 1, got: m });
        }
        let panels = m.div_ceil(PANEL_ORDER);
        let base = m / panels;
        let extra = m % panels;
        let width = interval.length() / panels as f64;
        let mut nodes = Vec::with_capacity(m);
        let mut weights = Vec::with_capacity(m);
        for p in 0..panels {
            let order = base + usize::from(p < extra);
            let (x, w) = gauss_legendre_nodes(order);
            let lo = interval.a + p as f64 * width;
            let mid = lo + 0.5 * width;
            for (xi, wi) in x.iter().zip(&w) {
                nodes.push(mid + 0.5 * width * xi);
                weights.push(0.5 * width * wi);
            }
        }
        Ok(Self {
            interval,
            nodes,
            weights,
            rule: QuadratureRule::GaussLegendre,
        })
    }

    /// Trapezoid rule on `m` equispaced nodes including both endpoints.
    pub fn trapezoid(interval: Interval, m: usize) -> Result<Self, GridError> {
        if m < 2 {
            return Err(GridError::TooFewNodes { min: 2, got: m });
        }
        let h = interval.length() / (m - 1) as f64;
        let nodes: Vec<f64> = (0..m)
            .map(|j| {
                if j == m - 1 {
                    interval.b
                } else {
                    interval.a + j as f64 * h
                }
            })
            .collect();
        let mut weights = vec![h; m];
        weights[0] = 0.5 * h;
        weights[m - 1] = 0.5 * h;
        Ok(Self {
            interval,
            nodes,
            weights,
            rule: QuadratureRule::Trapezoid,
        })
    }

    /// Grid from explicit nodes and weights, validated against the grid invariants.
    pub fn from_parts(
        interval: Interval,
        nodes: Vec<f64>,
        weights: Vec<f64>,
        rule: QuadratureRule,
    ) -> Result<Self, GridError> {
        if nodes.len() != weights.len() {
            return Err(GridError::LengthMismatch {
                nodes: nodes.len(),
                weights: weights.len(),
            });
        }
        if nodes.is_empty() {
            return Err(GridError::TooFewNodes { min: 1, got: 0 });
        }
        let ordered = nodes.windows(2).all(|w| w[0] < w[1]);
        if !ordered || !nodes.iter().all(|&t| interval.contains(t)) {
            return Err(GridError::NodesOutOfOrder);
        }
        let sum: f64 = weights.iter().sum();
        let length = interval.length();
        if weights.iter().any(|&w| !(w > 0.0)) || (sum - length).abs() > 1e-12 * length {
            return Err(GridError::BadWeights { sum, length });
        }
        Ok(Self {
            interval,
            nodes,
            weights,
            rule,
        })
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn rule(&self) -> QuadratureRule {
        self.rule
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Weighted `L^2(I)` norm of grid samples.
    pub fn l2_norm<T: Copy + Into<num_complex::Complex64>>(&self, values: &[T]) -> f64 {
        self.weights
            .iter()
            .zip(values)
            .map(|(w, &v)| w * v.into().norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1], nodes increasing.
pub fn gauss_legendre_nodes(order: usize) -> (Vec<f64>, Vec<f64>) {
    let n = order.max(1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let step = p / d;
            z -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        dp = if d.is_finite() { d } else { dp };
        let weight = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = weight;
        w[n - 1 - i] = weight;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    let d = n * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Equispaced grid description used by the Fourier-multiplier code.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    start: f64,
    spacing: f64,
    len: usize,
}

impl UniformGrid {
    pub fn new(start: f64, spacing: f64, len: usize) -> Result<Self, GridError> {
        if len < 2 {
            return Err(GridError::TooFewNodes { min: 2, got: len });
        }
        if !(spacing > 0.0) || !start.is_finite() || !spacing.is_finite() {
            return Err(GridError::NonUniform {
                deviation: f64::NAN,
            });
        }
        Ok(Self {
            start,
            spacing,
            len,
        })
    }

    /// Check that `nodes` are equispaced to 1e-9 relative.
    pub fn from_nodes(nodes: &[f64]) -> Result<Self, GridError> {
        if nodes.len() < 2 {
            return Err(GridError::TooFewNodes {
                min: 2,
                got: nodes.len(),
            });
        }
        let spacing = (nodes[nodes.len() - 1] - nodes[0]) / (nodes.len() - 1) as f64;
        let deviation = nodes
            .windows(2)
            .map(|w| ((w[1] - w[0]) - spacing).abs())
            .fold(0.0, f64::max);
        if !(spacing > 0.0) || deviation > 1e-9 * spacing {
            return Err(GridError::NonUniform { deviation });
        }
        Self::new(nodes[0], spacing, nodes.len())
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn node(&self, j: usize) -> f64 {
        self.start + j as f64 * self.spacing
    }
}
