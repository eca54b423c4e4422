//! Minimal-norm matching of `Re f` on an interval by a Dirichlet polynomial, and the
//! reflection representation of the analytic remainder `f - F`.

use crate::frame_core::{
    estimate_frame_bounds, full_frame_operator_matrix, CoeffVector, Convention, FrameError,
    SystemMatrix,
};
use crate::quadrature::{gauss_legendre_nodes, Interval, QuadratureGrid};
use crate::special_functions::ComplexPoint;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatchError {
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error("SVD cutoff must lie in (0, 1), got {0}")]
    BadCutoff(f64),
    #[error("matching needs N >= 1, got {0}")]
    TruncationTooSmall(usize),
    #[error("boundary data has {got} samples but the grid has {expected}")]
    SampleMismatch { expected: usize, got: usize },
    #[error("frame bounds did not converge (doubling change {change:.3e})")]
    NotConverged { change: f64 },
    #[error("point is {distance:.3e} from the removed rays (minimum 1e-3)")]
    TooCloseToRays { distance: f64 },
    #[error("rational term needs Re a > -1/2 and k >= 1 (a = {re}+{im}i, k = {power})")]
    NotInHardySpace { re: f64, im: f64, power: u32 },
    #[error("SVD failed to converge")]
    SvdFailed,
    #[error("full frame operator is not positive definite on this grid")]
    NotPositiveDefinite,
    #[error("tail cut {0} must be finite and exceed the interval endpoints")]
    BadTailCut(f64),
}

/// `coeff * (s + shift)^{-power}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RationalTerm {
    pub coeff: Complex64,
    pub shift: Complex64,
    pub power: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// A single simple pole `c/(s + a)`.
    Atom,
    Rational,
}

/// Finite sums of `(s + a)^{-k}` with `Re a > -1/2`; each lies in `H^2` of the half
/// plane `Re s > 1/2` with norm `int |f(1/2 + it)|^2 dt`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardyFunction {
    terms: Vec<RationalTerm>,
}

impl HardyFunction {
    pub fn rational(coeff: Complex64, shift: Complex64, power: u32) -> Result<Self, MatchError> {
        if power < 1 || !(shift.re > -0.5) || !shift.im.is_finite() || !coeff.is_finite() {
            return Err(MatchError::NotInHardySpace {
                re: shift.re,
                im: shift.im,
                power,
            });
        }
        Ok(Self {
            terms: vec![RationalTerm {
                coeff,
                shift,
                power,
            }],
        })
    }

    /// `f(s) = 1/s`.
    pub fn reciprocal() -> Self {
        Self {
            terms: vec![RationalTerm {
                coeff: Complex64::new(1.0, 0.0),
                shift: Complex64::new(0.0, 0.0),
                power: 1,
            }],
        }
    }

    pub fn plus(mut self, other: HardyFunction) -> Self {
        self.terms.extend(other.terms);
        self
    }

    pub fn terms(&self) -> &[RationalTerm] {
        &self.terms
    }

    pub fn family(&self) -> Family {
        match self.terms.as_slice() {
            [single] if single.power == 1 => Family::Atom,
            _ => Family::Rational,
        }
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|t| t.coeff * (s + t.shift).powi(-(t.power as i32)))
            .sum()
    }

    /// Closed-form `H^2` norm squared, available for a single term.
    pub fn norm_hint(&self) -> Option<f64> {
        let [term] = self.terms.as_slice() else {
            return None;
        };
        // int dt / (b^2 + t^2)^k = pi (2k-2)! / ((k-1)!^2 4^{k-1}) b^{1-2k}
        let k = term.power as i32;
        let b = 0.5 + term.shift.re;
        let mut central = 1.0;
        for j in 1..k {
            central *= (2 * j - 1) as f64 / (2 * j) as f64;
        }
        Some(term.coeff.norm_sqr() * PI * central * b.powi(1 - 2 * k))
    }

    /// `sup |f|` on the line `Re s = 1/2`, bounded termwise.
    pub fn boundary_sup_bound(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coeff.norm() * (0.5 + t.shift.re).powi(-(t.power as i32)))
            .sum()
    }
}

/// `v_j = Re f(1/2 + i t_j)`.
pub fn sample_real_boundary(f: &HardyFunction, grid: &QuadratureGrid) -> Vec<f64> {
    grid.nodes()
        .iter()
        .map(|&t| f.eval(Complex64::new(0.5, t)).re)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundConstants {
    #[serde(rename = "c_bound")]
    pub lower: f64,
    #[serde(rename = "C_bound")]
    pub upper: f64,
    pub a_est: f64,
    pub b_est: f64,
}

impl BoundConstants {
    /// `lower = 1/(2B)`, `upper = 2/A`.
    pub fn from_frame_bounds(a_est: f64, b_est: f64) -> Self {
        Self {
            lower: 0.5 / b_est,
            upper: 2.0 / a_est,
            a_est,
            b_est,
        }
    }

    pub fn brackets(&self, norm_sq: f64, data_norm_sq: f64) -> bool {
        self.lower * data_norm_sq <= norm_sq && norm_sq <= self.upper * data_norm_sq
    }
}

pub fn bound_constants(
    interval: Interval,
    truncation: usize,
    m: usize,
) -> Result<BoundConstants, MatchError> {
    let est = estimate_frame_bounds(interval, truncation, m, 0.0)?;
    if !est.converged {
        return Err(MatchError::NotConverged {
            change: est.last_doubling_change,
        });
    }
    Ok(BoundConstants::from_frame_bounds(est.a_est, est.b_est))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchResult {
    pub gamma: CoeffVector,
    /// `||F||^2 = 4 sum_{n>=1} |gamma_n|^2`.
    #[serde(rename = "F_norm_sq")]
    pub polynomial_norm_sq: f64,
    pub residual: f64,
    pub data_norm_sq: f64,
    pub rank: usize,
    pub bounds: BoundConstants,
    pub svd_cutoff_used: f64,
}

impl MatchResult {
    pub fn sandwich_holds(&self) -> bool {
        self.bounds
            .brackets(self.polynomial_norm_sq, self.data_norm_sq)
    }
}

/// Truncated-SVD pseudoinverse of the R-convention system applied to `v`, then
/// `gamma_{-n}` and `conj(gamma_n)` averaged.
pub fn match_minimal_norm(
    v: &[f64],
    grid: &QuadratureGrid,
    truncation: usize,
    cutoff: f64,
    bounds: BoundConstants,
) -> Result<MatchResult, MatchError> {
    if !(cutoff > 0.0 && cutoff < 1.0) {
        return Err(MatchError::BadCutoff(cutoff));
    }
    if truncation < 1 {
        return Err(MatchError::TruncationTooSmall(truncation));
    }
    if v.len() != grid.len() {
        return Err(MatchError::SampleMismatch {
            expected: grid.len(),
            got: v.len(),
        });
    }
    let data_norm_sq = grid.l2_norm(v).powi(2);
    if data_norm_sq == 0.0 {
        return Ok(MatchResult {
            gamma: CoeffVector::zeros(truncation, Convention::R),
            polynomial_norm_sq: 0.0,
            residual: 0.0,
            data_norm_sq,
            rank: 0,
            bounds,
            svd_cutoff_used: cutoff,
        });
    }
    let mat = SystemMatrix::on_grid(grid.clone(), truncation, Convention::R, 0.0)?;
    let solution = PseudoInverse::new(&mat, cutoff)?;
    let raw = solution.solve(&weighted_rhs(grid, v));
    let gamma = symmetrize(truncation, raw.as_slice())?;
    let residual = weighted_residual(&mat, &gamma, v)?;
    Ok(MatchResult {
        polynomial_norm_sq: 4.0 * gamma.positive().iter().map(|g| g.norm_sqr()).sum::<f64>(),
        gamma,
        residual,
        data_norm_sq,
        rank: solution.rank,
        bounds,
        svd_cutoff_used: cutoff,
    })
}

fn weighted_rhs(grid: &QuadratureGrid, v: &[f64]) -> DVector<Complex64> {
    DVector::from_iterator(
        v.len(),
        grid.weights()
            .iter()
            .zip(v)
            .map(|(w, x)| Complex64::new(w.sqrt() * x, 0.0)),
    )
}

fn symmetrize(truncation: usize, raw: &[Complex64]) -> Result<CoeffVector, MatchError> {
    let mut out = raw.to_vec();
    for n in 0..truncation {
        let avg = (raw[n] + raw[truncation + n].conj()) * 0.5;
        out[n] = avg;
        out[truncation + n] = avg.conj();
    }
    Ok(CoeffVector::from_values(truncation, Convention::R, out)?)
}

/// `||E gamma - v|| / ||v||` in `L^2(I)`.
pub fn weighted_residual(
    mat: &SystemMatrix,
    gamma: &CoeffVector,
    v: &[f64],
) -> Result<f64, MatchError> {
    let synthesized = mat.apply(gamma)?;
    let diff: Vec<Complex64> = synthesized.iter().zip(v).map(|(y, &x)| y - x).collect();
    let norm = mat.grid().l2_norm(v);
    Ok(if norm > 0.0 {
        mat.grid().l2_norm(&diff) / norm
    } else {
        0.0
    })
}

/// Thin SVD of `W^{1/2} E` with the discarded directions kept for null-space probes.
pub struct PseudoInverse {
    left: DMatrix<Complex64>,
    singular: Vec<f64>,
    right_adjoint: DMatrix<Complex64>,
    pub rank: usize,
}

impl PseudoInverse {
    pub fn new(mat: &SystemMatrix, cutoff: f64) -> Result<Self, MatchError> {
        let svd = mat.weighted_dense().svd(true, true);
        let left = svd.u.ok_or(MatchError::SvdFailed)?;
        let right_adjoint = svd.v_t.ok_or(MatchError::SvdFailed)?;
        let singular: Vec<f64> = svd.singular_values.iter().copied().collect();
        let top = singular.iter().copied().fold(0.0, f64::max);
        let rank = singular.iter().filter(|&&s| s > cutoff * top).count();
        Ok(Self {
            left,
            singular,
            right_adjoint,
            rank,
        })
    }

    /// Minimal-norm solution restricted to singular values above the cutoff.
    pub fn solve(&self, rhs: &DVector<Complex64>) -> DVector<Complex64> {
        let top = self.singular.iter().copied().fold(0.0, f64::max);
        let threshold = self.sorted_threshold(top);
        let mut out = DVector::zeros(self.right_adjoint.ncols());
        for (k, &s) in self.singular.iter().enumerate() {
            if s < threshold || s == 0.0 {
                continue;
            }
            let coeff = self.left.column(k).dotc(rhs) / s;
            out += self.right_adjoint.row(k).adjoint() * coeff;
        }
        out
    }

    fn sorted_threshold(&self, top: f64) -> f64 {
        let mut sorted = self.singular.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        sorted
            .get(self.rank.saturating_sub(1))
            .copied()
            .unwrap_or(top)
    }

    /// Right singular vectors with singular value below the cutoff (the numerical
    /// null space within the computed thin factorization).
    pub fn null_directions(&self) -> Vec<DVector<Complex64>> {
        let top = self.singular.iter().copied().fold(0.0, f64::max);
        let threshold = self.sorted_threshold(top);
        self.singular
            .iter()
            .enumerate()
            .filter(|(_, &s)| s < threshold)
            .map(|(k, _)| self.right_adjoint.row(k).adjoint())
            .collect()
    }
}

/// `2 <b, K^{-1} b>` with `K` the untruncated R-convention frame operator on the grid:
/// the squared norm of the canonical-dual Dirichlet series.
pub fn dual_frame_norm_sq(v: &[f64], grid: &QuadratureGrid) -> Result<f64, MatchError> {
    let k = full_frame_operator_matrix(grid, 1, Convention::R);
    let rhs = DVector::from_iterator(
        v.len(),
        grid.weights().iter().zip(v).map(|(w, x)| w.sqrt() * x),
    );
    let chol = k.cholesky().ok_or(MatchError::NotPositiveDefinite)?;
    let x = chol.solve(&rhs);
    Ok(2.0 * rhs.dot(&x))
}

/// `F(s) = 2 sum_{n=1}^N gamma_n n^{-s}`.
pub fn evaluate_dirichlet(gamma: &CoeffVector, s: Complex64) -> Complex64 {
    gamma
        .positive()
        .iter()
        .enumerate()
        .map(|(i, g)| g * (-s * ((i + 1) as f64).ln()).exp())
        .sum::<Complex64>()
        * 2.0
}

/// Point of `C` minus the rays `{1/2 + i tau : tau outside I}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionDomainPoint {
    point: ComplexPoint,
    distance_to_rays: f64,
}

impl ReflectionDomainPoint {
    pub fn new(point: ComplexPoint, interval: Interval) -> Result<Self, MatchError> {
        let dx = point.re() - 0.5;
        let tau = point.im();
        let distance = if tau <= interval.a() || tau >= interval.b() {
            dx.abs()
        } else {
            let dy = (tau - interval.a()).min(interval.b() - tau);
            dx.hypot(dy)
        };
        if !(distance >= 1e-3) {
            return Err(MatchError::TooCloseToRays { distance });
        }
        Ok(Self {
            point,
            distance_to_rays: distance,
        })
    }

    pub fn point(&self) -> ComplexPoint {
        self.point
    }

    pub fn distance_to_rays(&self) -> f64 {
        self.distance_to_rays
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiValue {
    pub value: Complex64,
    /// Bound on the `|tau| > tail_cut` part of the integral.
    pub tail_bound: f64,
}

/// Reflection representation of a function `h`, analytic off the rays, with
/// `h(s) = -conj h(1 - conj s)`:
/// `h(s) = s(1-s)/pi int_{tau notin I} Re h(w)/(|w|^2 (s-w)) dtau + c - 2(1-s) Re c`,
/// `w = 1/2 + i tau`, `c = h(1)`. `boundary_sup` bounds `|h|` on the rays.
pub fn reflection_integral(
    h: impl Fn(Complex64) -> Complex64 + Sync,
    interval: Interval,
    point: ReflectionDomainPoint,
    tail_cut: f64,
    boundary_sup: f64,
) -> Result<PhiValue, MatchError> {
    if !(tail_cut.is_finite() && tail_cut > interval.b().max(-interval.a())) {
        return Err(MatchError::BadTailCut(tail_cut));
    }
    let s = point.point.to_complex();
    let (nodes, weights) = ray_quadrature(interval, tail_cut, s.im, point.distance_to_rays);
    let integral: Complex64 = nodes
        .par_iter()
        .zip(&weights)
        .map(|(&tau, &w)| {
            let z = Complex64::new(0.5, tau);
            h(z).re * w / (z.norm_sqr() * (s - z))
        })
        .collect::<Vec<Complex64>>()
        .iter()
        .sum();
    let prefactor = s * (1.0 - s) / PI;
    let c = h(Complex64::new(1.0, 0.0));
    let value = prefactor * integral + c - (1.0 - s) * (2.0 * c.re);
    // |tau| > T: |Re h| / (|w|^2 |s - w|) <= sup |h| / tau^2 * 1/(tau - |Im s|) per side.
    let gap = tail_cut - s.im.abs();
    let tail_bound = if gap > 0.0 {
        prefactor.norm() * boundary_sup * 2.0 / (tail_cut * gap)
    } else {
        f64::INFINITY
    };
    Ok(PhiValue { value, tail_bound })
}

/// Gauss panels on `[-T, a] u [b, T]`, refined geometrically towards `Im s`.
fn ray_quadrature(
    interval: Interval,
    tail_cut: f64,
    focus: f64,
    distance: f64,
) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre_nodes(16);
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for (lo, hi) in [(-tail_cut, interval.a()), (interval.b(), tail_cut)] {
        let mut left = lo;
        while left < hi {
            let near = (left - focus).abs().min((left + 0.5 - focus).abs());
            let width = (0.5f64)
                .min(0.5 * near.max(distance))
                .max(1e-6)
                .min(hi - left);
            let mid = left + 0.5 * width;
            for (xi, wi) in x.iter().zip(&w) {
                nodes.push(mid + 0.5 * width * xi);
                weights.push(0.5 * width * wi);
            }
            left += width;
        }
    }
    (nodes, weights)
}

/// `phi = f - F` through its reflection representation.
pub fn evaluate_phi(
    f: &HardyFunction,
    gamma: &CoeffVector,
    interval: Interval,
    point: ReflectionDomainPoint,
    tail_cut: f64,
) -> Result<PhiValue, MatchError> {
    let terms: Vec<(f64, Complex64)> = gamma
        .positive()
        .iter()
        .enumerate()
        .filter(|(_, g)| g.norm_sqr() > 0.0)
        .map(|(i, g)| (((i + 1) as f64).ln(), *g))
        .collect();
    let dirichlet_sup: f64 = 2.0
        * terms
            .iter()
            .map(|(l, g)| g.norm() * (-0.5 * l).exp())
            .sum::<f64>();
    let dirichlet = |s: Complex64| -> Complex64 {
        terms
            .iter()
            .map(|&(l, g)| g * Complex64::from_polar((-s.re * l).exp(), -s.im * l))
            .sum::<Complex64>()
            * 2.0
    };
    reflection_integral(
        |s| f.eval(s) - dirichlet(s),
        interval,
        point,
        tail_cut,
        f.boundary_sup_bound() + dirichlet_sup,
    )
}

/// Largest `|phi|^2 / ||f||^2` over sample points, the observed stand-in for the
/// constant controlling `phi` on a compact set.
pub fn observed_phi_ratio(
    f: &HardyFunction,
    gamma: &CoeffVector,
    interval: Interval,
    points: &[ReflectionDomainPoint],
    tail_cut: f64,
) -> Result<Option<f64>, MatchError> {
    let Some(norm_sq) = f.norm_hint() else {
        return Ok(None);
    };
    let mut sup: f64 = 0.0;
    for &p in points {
        let phi = evaluate_phi(f, gamma, interval, p, tail_cut)?;
        sup = sup.max(phi.value.norm_sqr());
    }
    Ok(Some(sup / norm_sq))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_values() {
        let iv = Interval::new(-1.0, 1.0).unwrap();
        let grid = QuadratureGrid::from_parts(
            iv,
            vec![0.0, 1.0],
            vec![1.0, 1.0],
            crate::quadrature::QuadratureRule::Trapezoid,
        )
        .unwrap();
        let v = sample_real_boundary(&HardyFunction::reciprocal(), &grid);
        assert!((v[0] - 2.0).abs() < 1e-15);
        let f =
            HardyFunction::rational(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), 2).unwrap();
        let v = sample_real_boundary(&f, &grid);
        assert!((v[1] - 20.0 / 169.0).abs() < 1e-15);
    }

    #[test]
    fn norm_hint_reciprocal() {
        assert!((HardyFunction::reciprocal().norm_hint().unwrap() - 2.0 * PI).abs() < 1e-14);
        let sq = HardyFunction::rational(Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0), 2)
            .unwrap()
            .norm_hint()
            .unwrap();
        // int dt/(1+t^2)^2 = pi/2
        assert!((sq - PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_outside_hardy_space() {
        assert!(
            HardyFunction::rational(Complex64::new(1.0, 0.0), Complex64::new(-0.5, 0.0), 1)
                .is_err()
        );
        assert!(
            HardyFunction::rational(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), 0).is_err()
        );
    }

    #[test]
    fn dirichlet_constant() {
        let mut g = CoeffVector::zeros(3, Convention::R);
        g.set(1, Complex64::new(0.5, 0.0));
        let v = evaluate_dirichlet(&g, Complex64::new(0.7, 3.0));
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn reflection_reproduces_bounded_function() {
        // Re 2^{-s} does not vanish on I, so shrink I until its omitted share is negligible.
        let iv = Interval::new(-1e-7, 1e-7).unwrap();
        let h = |s: Complex64| (-s * 2f64.ln()).exp();
        let s = ComplexPoint::new(2.0, 0.3).unwrap();
        let p = ReflectionDomainPoint::new(s, iv).unwrap();
        let got = reflection_integral(h, iv, p, 2000.0, 0.5f64.sqrt()).unwrap();
        let want = h(s.to_complex());
        assert!(
            (got.value - want).norm() < 1e-6 + got.tail_bound,
            "{:?} {want}",
            got
        );
    }

    #[test]
    fn reflection_antisymmetry_is_exact() {
        let iv = Interval::new(-1.0, 1.0).unwrap();
        let h = |s: Complex64| 1.0 / (s + 1.0);
        for (x, y) in [(2.0, 0.5), (0.2, 3.0), (0.5, 0.3), (1.3, -4.0)] {
            let s = ComplexPoint::new(x, y).unwrap();
            let r = ComplexPoint::new(1.0 - x, y).unwrap();
            let a = reflection_integral(
                h,
                iv,
                ReflectionDomainPoint::new(s, iv).unwrap(),
                300.0,
                2.0,
            )
            .unwrap();
            let b = reflection_integral(
                h,
                iv,
                ReflectionDomainPoint::new(r, iv).unwrap(),
                300.0,
                2.0,
            )
            .unwrap();
            assert!((a.value + b.value.conj()).norm() < 1e-12 * a.value.norm().max(1.0));
        }
    }

    #[test]
    fn rays_are_excluded() {
        let iv = Interval::new(-1.0, 1.0).unwrap();
        assert!(ReflectionDomainPoint::new(ComplexPoint::new(0.5, 2.0).unwrap(), iv).is_err());
        assert!(ReflectionDomainPoint::new(ComplexPoint::new(0.5, 0.0).unwrap(), iv).is_ok());
    }
}
