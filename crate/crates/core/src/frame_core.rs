//! Exponentials `n^{-1/2} e^{-i t log n}` on a bounded interval: the synthesis map,
//! its adjoint, frame operators, frame-bound estimates and the zeta-kernel identities.
//!
//! Fourier convention: `g^(xi) = int g(t) e^{-i t xi} dt`. The column of index `n > 0`
//! is `n^{-1/2} e^{-i t log n}` and pairs with `g^(-log n)/sqrt(n)` under the adjoint;
//! the column of `-n` is `n^{-1/2} e^{+i t log n}` and pairs with `g^(log n)/sqrt(n)`.

use crate::chebyshev::Chebyshev;
use crate::quadrature::{GridError, Interval, QuadratureGrid, UniformGrid};
use crate::special_functions::{phi_kernel, psi_one};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FrameError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("truncation N must be at least 1, got {0}")]
    TruncationTooSmall(usize),
    #[error("grid size M must be at least 8, got {0}")]
    GridTooSmall(usize),
    #[error("expected {expected} values, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("coefficient vector convention or truncation does not match the system")]
    IncompatibleCoefficients,
}

/// Which indices carry a column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Convention {
    /// All `n` in `{-N..N} \ {0}`; the constant function is counted twice.
    R,
    /// As `R` with `n = -1` dropped, so the constant column appears once.
    S,
    /// Positive indices only (the embedding operator).
    OneSided,
}

impl Convention {
    pub fn indices(self, truncation: usize) -> Vec<i64> {
        let n = truncation as i64;
        let mut idx: Vec<i64> = (1..=n).collect();
        match self {
            Convention::R => idx.extend((1..=n).map(|k| -k)),
            Convention::S => idx.extend((2..=n).map(|k| -k)),
            Convention::OneSided => {}
        }
        idx
    }
}

/// Coefficients indexed by `n in Z*`, truncated at `|n| <= N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffVector {
    truncation: usize,
    convention: Convention,
    indices: Vec<i64>,
    values: Vec<Complex64>,
}

impl CoeffVector {
    pub fn zeros(truncation: usize, convention: Convention) -> Self {
        let indices = convention.indices(truncation);
        let values = vec![Complex64::new(0.0, 0.0); indices.len()];
        Self {
            truncation,
            convention,
            indices,
            values,
        }
    }

    /// Values ordered as `[1, 2, .., N, -1 (R only), -2, .., -N]`.
    pub fn from_values(
        truncation: usize,
        convention: Convention,
        values: Vec<Complex64>,
    ) -> Result<Self, FrameError> {
        let indices = convention.indices(truncation);
        if values.len() != indices.len() {
            return Err(FrameError::DimensionMismatch {
                expected: indices.len(),
                got: values.len(),
            });
        }
        Ok(Self {
            truncation,
            convention,
            indices,
            values,
        })
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn indices(&self) -> &[i64] {
        &self.indices
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    fn position(&self, n: i64) -> Option<usize> {
        let big_n = self.truncation as i64;
        if n == 0 || n.abs() > big_n {
            return None;
        }
        if n > 0 {
            return Some((n - 1) as usize);
        }
        match self.convention {
            Convention::R => Some((big_n + (-n) - 1) as usize),
            Convention::S if n <= -2 => Some((big_n + (-n) - 2) as usize),
            _ => None,
        }
    }

    pub fn get(&self, n: i64) -> Option<Complex64> {
        self.position(n).map(|p| self.values[p])
    }

    pub fn set(&mut self, n: i64, value: Complex64) -> bool {
        match self.position(n) {
            Some(p) => {
                self.values[p] = value;
                true
            }
            None => false,
        }
    }

    /// `gamma_n` for `n = 1..=N`.
    pub fn positive(&self) -> &[Complex64] {
        &self.values[..self.truncation]
    }

    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    /// Largest `|gamma_{-n} - conj(gamma_n)|` over indices present on both sides.
    pub fn conjugate_asymmetry(&self) -> f64 {
        (1..=self.truncation as i64)
            .filter_map(|n| Some((self.get(n)?, self.get(-n)?)))
            .map(|(p, m)| (m - p.conj()).norm())
            .fold(0.0, f64::max)
    }
}

/// `w_alpha(xi)^{-1/2}` with `w_alpha(xi) = (1 + xi^2)^{alpha/2}`.
pub fn inverse_sqrt_weight(alpha: f64, xi: f64) -> f64 {
    (1.0 + xi * xi).powf(-alpha / 4.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Column {
    index: i64,
    /// Entry is `scale * e^{i freq t}`.
    freq: f64,
    scale: f64,
}

/// The synthesis map `gamma -> sum gamma_n e_n(t)` sampled on a quadrature grid.
/// Entries are generated on demand; `N = 10^4` with `M = 2048` would need 650 MB dense.
#[derive(Debug, Clone)]
pub struct SystemMatrix {
    grid: QuadratureGrid,
    truncation: usize,
    convention: Convention,
    alpha: f64,
    columns: Vec<Column>,
}

pub fn build_system(
    interval: Interval,
    truncation: usize,
    m: usize,
    convention: Convention,
    alpha: f64,
) -> Result<SystemMatrix, FrameError> {
    if m < 8 {
        return Err(FrameError::GridTooSmall(m));
    }
    let grid = QuadratureGrid::gauss_legendre(interval, m)?;
    SystemMatrix::on_grid(grid, truncation, convention, alpha)
}

impl SystemMatrix {
    pub fn on_grid(
        grid: QuadratureGrid,
        truncation: usize,
        convention: Convention,
        alpha: f64,
    ) -> Result<Self, FrameError> {
        if truncation < 1 {
            return Err(FrameError::TruncationTooSmall(truncation));
        }
        let columns = convention
            .indices(truncation)
            .into_iter()
            .map(|index| {
                let n = index.unsigned_abs() as f64;
                let log_n = n.ln();
                Column {
                    index,
                    freq: -(index.signum() as f64) * log_n,
                    scale: n.powf(-0.5) * inverse_sqrt_weight(alpha, log_n),
                }
            })
            .collect();
        Ok(Self {
            grid,
            truncation,
            convention,
            alpha,
            columns,
        })
    }

    pub fn grid(&self) -> &QuadratureGrid {
        &self.grid
    }

    pub fn interval(&self) -> Interval {
        self.grid.interval()
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn rows(&self) -> usize {
        self.grid.len()
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column_indices(&self) -> Vec<i64> {
        self.columns.iter().map(|c| c.index).collect()
    }

    /// Entry at grid node `row` and column `col`.
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        let c = self.columns[col];
        Complex64::from_polar(c.scale, c.freq * self.grid.nodes()[row])
    }

    /// `E gamma` on the grid.
    pub fn apply(&self, gamma: &CoeffVector) -> Result<Vec<Complex64>, FrameError> {
        if gamma.convention() != self.convention || gamma.truncation() != self.truncation {
            return Err(FrameError::IncompatibleCoefficients);
        }
        let coeffs = gamma.values();
        Ok(self
            .grid
            .nodes()
            .par_iter()
            .map(|&t| {
                self.columns
                    .iter()
                    .zip(coeffs)
                    .map(|(c, g)| g * Complex64::from_polar(c.scale, c.freq * t))
                    .sum()
            })
            .collect())
    }

    /// `E* g` with the grid quadrature: component `n` approximates
    /// `w(log|n|)^{-1/2} g^(-sign(n) log|n|)/sqrt|n|`.
    pub fn apply_adjoint(&self, g: &[Complex64]) -> Result<CoeffVector, FrameError> {
        if g.len() != self.rows() {
            return Err(FrameError::DimensionMismatch {
                expected: self.rows(),
                got: g.len(),
            });
        }
        let weighted: Vec<(f64, Complex64)> = self
            .grid
            .nodes()
            .iter()
            .zip(self.grid.weights())
            .zip(g)
            .map(|((&t, &w), &v)| (t, v * w))
            .collect();
        let values = self
            .columns
            .par_iter()
            .map(|c| {
                let acc: Complex64 = weighted
                    .iter()
                    .map(|&(t, wv)| wv * Complex64::from_polar(1.0, -c.freq * t))
                    .sum();
                acc * c.scale
            })
            .collect();
        CoeffVector::from_values(self.truncation, self.convention, values)
    }

    /// Dense `W^{1/2} E` (rows scaled by the square roots of the quadrature weights).
    pub fn weighted_dense(&self) -> DMatrix<Complex64> {
        let nodes = self.grid.nodes();
        let sqrt_w: Vec<f64> = self.grid.weights().iter().map(|w| w.sqrt()).collect();
        let cols: Vec<Vec<Complex64>> = self
            .columns
            .par_iter()
            .map(|c| {
                nodes
                    .iter()
                    .zip(&sqrt_w)
                    .map(|(&t, &sw)| Complex64::from_polar(c.scale * sw, c.freq * t))
                    .collect()
            })
            .collect();
        DMatrix::from_fn(self.rows(), self.cols(), |i, j| cols[j][i])
    }

    /// `k(u) = sum_cols scale^2 e^{i freq u}`, the kernel of `E E*`.
    fn kernel(&self, u: f64) -> Complex64 {
        self.columns
            .iter()
            .map(|c| Complex64::from_polar(c.scale * c.scale, c.freq * u))
            .sum()
    }
}

/// Grid-discretized `E E*` with weights folded in: `K_ij = sqrt(w_i w_j) k(t_i - t_j)`.
/// Exactly Hermitian (upper triangle mirrored).
pub fn frame_operator_matrix(mat: &SystemMatrix) -> DMatrix<Complex64> {
    let nodes = mat.grid.nodes();
    let weights = mat.grid.weights();
    let m = nodes.len();
    hermitian_from_kernel(m, |i, j| {
        (weights[i] * weights[j]).sqrt() * mat.kernel(nodes[i] - nodes[j])
    })
}

fn hermitian_from_kernel(
    m: usize,
    entry: impl Fn(usize, usize) -> Complex64 + Sync,
) -> DMatrix<Complex64> {
    let upper: Vec<Vec<Complex64>> = (0..m)
        .into_par_iter()
        .map(|i| (i..m).map(|j| entry(i, j)).collect())
        .collect();
    let mut k = DMatrix::zeros(m, m);
    for (i, row) in upper.iter().enumerate() {
        for (offset, &v) in row.iter().enumerate() {
            let j = i + offset;
            if i == j {
                k[(i, i)] = Complex64::new(v.re, 0.0);
            } else {
                k[(i, j)] = v;
                k[(j, i)] = v.conj();
            }
        }
    }
    k
}

fn symmetric_from_kernel(m: usize, entry: impl Fn(usize, usize) -> f64 + Sync) -> DMatrix<f64> {
    let upper: Vec<Vec<f64>> = (0..m)
        .into_par_iter()
        .map(|i| (i..m).map(|j| entry(i, j)).collect())
        .collect();
    let mut k = DMatrix::zeros(m, m);
    for (i, row) in upper.iter().enumerate() {
        for (offset, &v) in row.iter().enumerate() {
            k[(i, i + offset)] = v;
            k[(i + offset, i)] = v;
        }
    }
    k
}

/// `B_{2k}/(2k)!`, k = 1..=10, for the Dirichlet-tail expansion.
const TAIL_BERNOULLI: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
    43867.0 / 5109094217170944000.0,
    -174611.0 / 802857662698291200000.0,
];

/// Smallest head length used before switching to the Euler-Maclaurin tail.
pub fn tail_start(truncation: usize, length: f64) -> usize {
    truncation.max((2.0 * length).ceil() as usize + 24)
}

/// Smooth part of `2 Re sum_{n > cut} n^{-1-iu}`; the full tail is this plus `2 pi delta(u)`.
pub fn dirichlet_tail_kernel(u: f64, cut: usize) -> f64 {
    let cut = cut as f64;
    let log_cut = cut.ln();
    let oscillation = if u.abs() < 1e-12 {
        -2.0 * log_cut
    } else {
        -2.0 * (u * log_cut).sin() / u
    };
    let s = Complex64::new(1.0, u);
    let cut_pow = (-s * log_cut).exp();
    let mut value = -cut_pow * 0.5;
    let mut factor = s * cut_pow / cut;
    for (k, coeff) in TAIL_BERNOULLI.iter().enumerate() {
        value += factor * *coeff;
        let j = 2.0 * (k as f64 + 1.0);
        factor *= (s + (j - 1.0)) * (s + j) / (cut * cut);
    }
    oscillation + 2.0 * value.re
}

/// `sum_{n=1}^{cut} 2 cos(u log n)/n` minus one if the constant is counted once.
fn two_sided_head_kernel(u: f64, cut: usize, convention: Convention) -> f64 {
    let sum: f64 = (1..=cut)
        .map(|n| {
            let n = n as f64;
            2.0 * (u * n.ln()).cos() / n
        })
        .sum();
    match convention {
        Convention::S => sum - 1.0,
        _ => sum,
    }
}

/// Smooth part of the full (`N = infinity`) two-sided frame operator kernel computed
/// as a head of `tail_start` exact terms plus the Euler-Maclaurin tail.
pub fn full_kernel_head_tail(
    u: f64,
    truncation: usize,
    length: f64,
    convention: Convention,
) -> f64 {
    let cut = tail_start(truncation, length);
    two_sided_head_kernel(u, cut, convention) + dirichlet_tail_kernel(u, cut)
}

/// Closed form of the same kernel: `2 phi(u)` (R) or `2 phi(u) - 1` (S).
pub fn full_kernel_closed_form(u: f64, convention: Convention) -> f64 {
    let k = 2.0 * phi_kernel(u);
    match convention {
        Convention::S => k - 1.0,
        _ => k,
    }
}

/// `2 pi I + W^{1/2} k W^{1/2}` for the untruncated two-sided system on `grid`.
pub fn full_frame_operator_matrix(
    grid: &QuadratureGrid,
    truncation: usize,
    convention: Convention,
) -> DMatrix<f64> {
    let nodes = grid.nodes();
    let weights = grid.weights();
    let length = grid.interval().length();
    let mut k = symmetric_from_kernel(nodes.len(), |i, j| {
        (weights[i] * weights[j]).sqrt()
            * full_kernel_head_tail(nodes[i] - nodes[j], truncation, length, convention)
    });
    for i in 0..nodes.len() {
        k[(i, i)] += 2.0 * PI;
    }
    k
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncatedSpectrum {
    /// Smallest squared singular value of `W^{1/2} E` above the rank cutoff.
    pub a_est: f64,
    pub b_est: f64,
    pub rank: usize,
    pub relative_cutoff: f64,
    /// Squared singular values, descending.
    pub spectrum: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameBoundEstimate {
    pub interval: Interval,
    pub alpha: f64,
    pub a_est: f64,
    pub b_est: f64,
    pub truncation: usize,
    pub grid_size: usize,
    /// Whether the n > N tail is included (always for alpha = 0).
    pub tail_corrected: bool,
    pub converged: bool,
    /// Largest relative change of A or B under doubling M and N.
    pub last_doubling_change: f64,
    /// Eigenvalues of the estimated operator, ascending.
    pub spectrum: Vec<f64>,
    pub truncated: TruncatedSpectrum,
}

/// Singular values of `W^{1/2} E` are cut at this fraction of the largest.
pub const RANK_CUTOFF: f64 = 1e-10;

pub fn truncated_spectrum(mat: &SystemMatrix) -> TruncatedSpectrum {
    let dense = mat.weighted_dense();
    let mut sv: Vec<f64> = dense.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let top = sv.first().copied().unwrap_or(0.0);
    let kept: Vec<f64> = sv
        .iter()
        .copied()
        .filter(|&s| s > RANK_CUTOFF * top)
        .collect();
    TruncatedSpectrum {
        a_est: kept.last().map_or(0.0, |s| s * s),
        b_est: top * top,
        rank: kept.len(),
        relative_cutoff: RANK_CUTOFF,
        spectrum: sv.iter().map(|s| s * s).collect(),
    }
}

fn full_extremes(interval: Interval, truncation: usize, m: usize) -> Result<Vec<f64>, FrameError> {
    let grid = QuadratureGrid::gauss_legendre(interval, m)?;
    let k = full_frame_operator_matrix(&grid, truncation, Convention::S);
    let mut eig: Vec<f64> = SymmetricEigen::new(k).eigenvalues.iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

fn relative_change(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

/// Frame bounds of the S-convention system on `interval`.
///
/// For `alpha = 0` the operator is the Nystrom discretization of the full frame
/// operator (exact head up to N plus Dirichlet tail); for other `alpha` only the
/// truncated system is available and the estimate is its rank-cutoff spectrum.
pub fn estimate_frame_bounds(
    interval: Interval,
    truncation: usize,
    m: usize,
    alpha: f64,
) -> Result<FrameBoundEstimate, FrameError> {
    let mat = build_system(interval, truncation, m, Convention::S, alpha)?;
    let truncated = truncated_spectrum(&mat);
    if alpha != 0.0 {
        let doubled_n = truncated_spectrum(&build_system(
            interval,
            2 * truncation,
            m,
            Convention::S,
            alpha,
        )?);
        let doubled_m = truncated_spectrum(&build_system(
            interval,
            truncation,
            2 * m,
            Convention::S,
            alpha,
        )?);
        let change = [doubled_n.b_est, doubled_m.b_est]
            .iter()
            .map(|&b| relative_change(truncated.b_est, b))
            .fold(0.0, f64::max);
        let mut spectrum = truncated.spectrum.clone();
        spectrum.reverse();
        return Ok(FrameBoundEstimate {
            interval,
            alpha,
            a_est: truncated.a_est,
            b_est: truncated.b_est,
            truncation,
            grid_size: m,
            tail_corrected: false,
            converged: change < 0.01,
            last_doubling_change: change,
            spectrum,
            truncated,
        });
    }
    let spectrum = full_extremes(interval, truncation, m)?;
    let (a, b) = (spectrum[0], spectrum[spectrum.len() - 1]);
    let mut change: f64 = 0.0;
    for (n2, m2) in [(2 * truncation, m), (truncation, 2 * m)] {
        let other = full_extremes(interval, n2, m2)?;
        change = change
            .max(relative_change(a, other[0]))
            .max(relative_change(b, other[other.len() - 1]));
    }
    Ok(FrameBoundEstimate {
        interval,
        alpha,
        a_est: a,
        b_est: b,
        truncation,
        grid_size: m,
        tail_corrected: true,
        converged: change < 0.01,
        last_doubling_change: change,
        spectrum,
        truncated,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    /// `numerator / denominator`, zero when `g` vanishes on the grid.
    pub residual: f64,
    pub numerator: f64,
    pub denominator: f64,
    pub truncation: usize,
    pub grid_size: usize,
}

impl IdentityReport {
    fn new(numerator: f64, denominator: f64, truncation: usize, grid_size: usize) -> Self {
        let residual = if denominator > 0.0 {
            numerator / denominator
        } else {
            0.0
        };
        Self {
            residual,
            numerator,
            denominator,
            truncation,
            grid_size,
        }
    }
}

/// `(g * k)(t_i) = sum_j w_j g_j k(t_i - t_j)` with a tabulated kernel.
fn grid_convolution(
    grid: &QuadratureGrid,
    g: &[Complex64],
    kernel: &(impl Fn(f64) -> Complex64 + Sync),
) -> Vec<Complex64> {
    let nodes = grid.nodes();
    let weights = grid.weights();
    nodes
        .par_iter()
        .map(|&t| {
            nodes
                .iter()
                .zip(weights)
                .zip(g)
                .map(|((&tau, &w), &v)| v * w * kernel(t - tau))
                .sum()
        })
        .collect()
}

fn sample(grid: &QuadratureGrid, g: &(impl Fn(f64) -> Complex64 + Sync)) -> Vec<Complex64> {
    grid.nodes().iter().map(|&t| g(t)).collect()
}

/// Relative `L^2(I)` residual of `R R* g = 2 pi g + chi_I (g * 2 phi)` for the
/// R-convention system truncated at `N`.
pub fn verify_frame_operator_identity(
    interval: Interval,
    g: impl Fn(f64) -> Complex64 + Sync,
    truncation: usize,
    m: usize,
) -> Result<IdentityReport, FrameError> {
    let mat = build_system(interval, truncation, m, Convention::R, 0.0)?;
    let values = sample(mat.grid(), &g);
    let synthesized = mat.apply(&mat.apply_adjoint(&values)?)?;
    let length = interval.length();
    let phi = Chebyshev::fit_adaptive(0.0, length, 1e-15, |u| Complex64::new(phi_kernel(u), 0.0));
    let conv = grid_convolution(mat.grid(), &values, &|u: f64| phi.eval(u.abs()) * 2.0);
    let diff: Vec<Complex64> = synthesized
        .iter()
        .zip(&values)
        .zip(&conv)
        .map(|((y, v), c)| y - v * (2.0 * PI) - c)
        .collect();
    Ok(IdentityReport::new(
        mat.grid().l2_norm(&diff),
        mat.grid().l2_norm(&values),
        truncation,
        m,
    ))
}

/// Riesz projection of samples on a uniform grid (already zero-padded by the caller):
/// keeps the `xi < 0` half-line of `g^`, half of the zero and Nyquist bins.
pub fn riesz_projection(
    grid: &UniformGrid,
    values: &[Complex64],
) -> Result<Vec<Complex64>, FrameError> {
    let len = grid.len();
    if values.len() != len {
        return Err(FrameError::DimensionMismatch {
            expected: len,
            got: values.len(),
        });
    }
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(len);
    let inverse = planner.plan_fft_inverse(len);
    let mut buf = values.to_vec();
    forward.process(&mut buf);
    // Bin k carries e^{+2 pi i k j / L}, i.e. frequency 2 pi k/(L h) for k < L/2.
    for (k, v) in buf.iter_mut().enumerate() {
        let twice = 2 * k;
        let factor = if k == 0 || twice == len {
            0.5
        } else if twice < len {
            0.0
        } else {
            1.0
        };
        *v *= factor / len as f64;
    }
    inverse.process(&mut buf);
    Ok(buf)
}

/// Relative residual of `E E* g = 2 pi chi_I P+ g + chi_I (g * psi_1)` for the
/// one-sided system on an `m`-node trapezoid grid.
pub fn verify_embedding_identity(
    interval: Interval,
    g: impl Fn(f64) -> Complex64 + Sync,
    truncation: usize,
    m: usize,
) -> Result<IdentityReport, FrameError> {
    if m < 8 {
        return Err(FrameError::GridTooSmall(m));
    }
    let grid = QuadratureGrid::trapezoid(interval, m)?;
    let mat = SystemMatrix::on_grid(grid, truncation, Convention::OneSided, 0.0)?;
    let values = sample(mat.grid(), &g);
    let synthesized = mat.apply(&mat.apply_adjoint(&values)?)?;

    let projected = riesz_on_interval(mat.grid(), &values)?;
    let length = interval.length();
    let psi1 = Chebyshev::fit_adaptive(-length, length, 1e-15, psi_one);
    let conv = grid_convolution(mat.grid(), &values, &|u: f64| psi1.eval(u));
    let diff: Vec<Complex64> = synthesized
        .iter()
        .zip(&projected)
        .zip(&conv)
        .map(|((y, p), c)| y - p * (2.0 * PI) - c)
        .collect();
    Ok(IdentityReport::new(
        mat.grid().l2_norm(&diff),
        mat.grid().l2_norm(&values),
        truncation,
        m,
    ))
}

/// `P+ g` restricted to the nodes of a uniform grid on `I`, zero padding to 16x.
pub fn riesz_on_interval(
    grid: &QuadratureGrid,
    values: &[Complex64],
) -> Result<Vec<Complex64>, FrameError> {
    let uniform = UniformGrid::from_nodes(grid.nodes())?;
    let m = values.len();
    let len = (16 * m).next_power_of_two();
    let offset = (len - m) / 2;
    let mut padded = vec![Complex64::new(0.0, 0.0); len];
    padded[offset..offset + m].copy_from_slice(values);
    let start = uniform.start() - offset as f64 * uniform.spacing();
    let padded_grid = UniformGrid::new(start, uniform.spacing(), len)?;
    let projected = riesz_projection(&padded_grid, &padded)?;
    Ok(projected[offset..offset + m].to_vec())
}

/// Rayleigh quotient `g^H K g / g^H g` of a symmetric operator matrix.
pub fn rayleigh_quotient(k: &DMatrix<f64>, g: &DVector<f64>) -> f64 {
    (g.transpose() * k * g)[(0, 0)] / g.norm_squared()
}
