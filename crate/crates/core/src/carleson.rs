//! Carleson-box constants of discrete measures on the half plane `Re s > 1/2`, the
//! zeta test-function norms, Riemann-sum measures along vertical segments, and the
//! Montgomery-Vaughan bilinear inequality.

use crate::dirichlet::DirichletPolynomial;
use crate::quadrature::gauss_legendre_nodes;
use crate::special_functions::{first_primes, psi_complex, zeta, ComplexPoint, ZetaError};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CarlesonError {
    #[error("measure has no atoms")]
    EmptyMeasure,
    #[error("atom at sigma = {sigma} is not inside the half plane sigma > 1/2")]
    AtomOutsideHalfPlane { sigma: f64 },
    #[error("atom mass must be positive and finite, got {0}")]
    BadMass(f64),
    #[error("box side must be positive and finite, got {0}")]
    BadSide(f64),
    #[error("sigma0 must exceed 1/2, got {0}")]
    SigmaTooSmall(f64),
    #[error("p must be at least 1, got {0}")]
    BadExponent(f64),
    #[error(transparent)]
    Zeta(#[from] ZetaError),
    #[error("measure parameters invalid: T = {length}, eps = {eps}, t_shift = {shift}")]
    BadMeasureParameters { length: f64, eps: f64, shift: f64 },
    #[error("frequencies must be distinct (index {first} and {second})")]
    DuplicateFrequency { first: usize, second: usize },
    #[error("vectors must match the number of frequencies ({expected}), got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("need at least two frequencies")]
    TooFewFrequencies,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub sigma: f64,
    pub t: f64,
    pub mass: f64,
}

impl Atom {
    pub fn new(sigma: f64, t: f64, mass: f64) -> Result<Self, CarlesonError> {
        if !(sigma > 0.5) || !sigma.is_finite() || !t.is_finite() {
            return Err(CarlesonError::AtomOutsideHalfPlane { sigma });
        }
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(CarlesonError::BadMass(mass));
        }
        Ok(Self { sigma, t, mass })
    }

    pub fn point(&self) -> ComplexPoint {
        ComplexPoint::new(self.sigma, self.t).expect("validated atom is finite")
    }

    fn height(&self) -> f64 {
        self.sigma - 0.5
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxMeasure {
    atoms: Vec<Atom>,
}

impl BoxMeasure {
    pub fn new(atoms: Vec<Atom>) -> Self {
        Self { atoms }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }
}

/// Closed square `[t_low, t_low + side] x (1/2, 1/2 + side]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CarlesonBox {
    pub t_low: f64,
    pub side: f64,
}

/// Relative membership slack, so boxes built from atom coordinates contain those atoms.
const SLACK: f64 = 1e-12;

impl CarlesonBox {
    pub fn new(t_low: f64, side: f64) -> Result<Self, CarlesonError> {
        if !(side > 0.0) || !side.is_finite() || !t_low.is_finite() {
            return Err(CarlesonError::BadSide(side));
        }
        Ok(Self { t_low, side })
    }

    pub fn contains(&self, atom: &Atom) -> bool {
        let tol = SLACK * self.side.max(self.t_low.abs());
        atom.height() <= self.side * (1.0 + SLACK)
            && atom.t >= self.t_low - tol
            && atom.t <= self.t_low + self.side + tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CarlesonMaximum {
    /// `sup_Q mu(Q) / side(Q)`.
    pub constant: f64,
    pub argmax: CarlesonBox,
}

/// Exact supremum of `mu(Q)/side` over Carleson squares. A maximizing square can be
/// slid up until its bottom meets an atom and shrunk until an atom sits on its top
/// or right edge, so `t_low` ranges over atom ordinates and the side over atom
/// heights and pairwise ordinate gaps.
pub fn carleson_constant(mu: &BoxMeasure) -> Result<CarlesonMaximum, CarlesonError> {
    if mu.atoms.is_empty() {
        return Err(CarlesonError::EmptyMeasure);
    }
    let mut atoms = mu.atoms.clone();
    atoms.sort_by(|a, b| a.t.total_cmp(&b.t));
    let mut sides: Vec<f64> = atoms.iter().map(Atom::height).collect();
    for (i, a) in atoms.iter().enumerate() {
        for b in &atoms[i + 1..] {
            if b.t > a.t {
                sides.push(b.t - a.t);
            }
        }
    }
    sides.sort_by(f64::total_cmp);
    sides.dedup();
    let best = (0..atoms.len())
        .into_par_iter()
        .map(|i| {
            let t_low = atoms[i].t;
            let mut best = (0.0, CarlesonBox { t_low, side: 1.0 });
            for &side in &sides {
                let candidate = CarlesonBox { t_low, side };
                let mass: f64 = atoms[i..]
                    .iter()
                    .take_while(|a| a.t <= t_low + side + SLACK * side.max(t_low.abs()))
                    .filter(|a| candidate.contains(a))
                    .map(|a| a.mass)
                    .sum();
                let ratio = mass / side;
                if ratio > best.0 {
                    best = (ratio, candidate);
                }
            }
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(
            (
                0.0,
                CarlesonBox {
                    t_low: 0.0,
                    side: 1.0,
                },
            ),
            |a, b| {
                if b.0 > a.0 {
                    b
                } else {
                    a
                }
            },
        );
    Ok(CarlesonMaximum {
        constant: best.0,
        argmax: best.1,
    })
}

/// `mu(Q)/side` by a plain scan over all atoms.
pub fn box_ratio(mu: &BoxMeasure, q: &CarlesonBox) -> f64 {
    mu.atoms
        .iter()
        .filter(|a| q.contains(a))
        .map(|a| a.mass)
        .sum::<f64>()
        / q.side
}

/// Best of `samples` random boxes, a lower bound for the constant.
pub fn random_box_oracle(mu: &BoxMeasure, samples: usize, seed: u64) -> Option<CarlesonMaximum> {
    let atoms = &mu.atoms;
    if atoms.is_empty() {
        return None;
    }
    let t_min = atoms.iter().map(|a| a.t).fold(f64::INFINITY, f64::min);
    let t_max = atoms.iter().map(|a| a.t).fold(f64::NEG_INFINITY, f64::max);
    let h_min = atoms.iter().map(Atom::height).fold(f64::INFINITY, f64::min);
    let h_max = atoms.iter().map(Atom::height).fold(0.0, f64::max);
    let lo = (0.5 * h_min).ln();
    let hi = (2.0 * (t_max - t_min + h_max)).max(h_min).ln();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<CarlesonMaximum> = None;
    for _ in 0..samples {
        let side = rng.random_range(lo..=hi).exp();
        let t_low = rng.random_range((t_min - side)..=t_max);
        let q = CarlesonBox { t_low, side };
        let ratio = box_ratio(mu, &q);
        if best.is_none_or(|b| ratio > b.constant) {
            best = Some(CarlesonMaximum {
                constant: ratio,
                argmax: q,
            });
        }
    }
    best
}

/// `||zeta_{s0}^{2/p}||_p^p = zeta(2 sigma0)`, the same for every `p`.
pub fn zeta_test_norm(s0: ComplexPoint, p: f64) -> Result<f64, CarlesonError> {
    if !(s0.re() > 0.5) {
        return Err(CarlesonError::SigmaTooSmall(s0.re()));
    }
    if !(p >= 1.0) {
        return Err(CarlesonError::BadExponent(p));
    }
    Ok(zeta(ComplexPoint::real(2.0 * s0.re()).expect("finite"))?.re)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZetaNormCheck {
    pub sigma0: f64,
    pub zeta_value: f64,
    /// `sum_{n<=N} n^{-2 sigma0}` plus the integral tail `N^{1-2 sigma0}/(2 sigma0 - 1)`
    /// and the half end-term correction.
    pub coefficient_sum: f64,
    pub euler_product: f64,
    /// `prod (1 + p_P^{1-2 sigma0}/(2 sigma0 - 1))`, an upper bound for `zeta`.
    pub euler_upper: f64,
    pub primes: usize,
}

impl ZetaNormCheck {
    pub fn bracketed(&self) -> bool {
        self.euler_product <= self.zeta_value * (1.0 + 1e-14)
            && self.zeta_value <= self.euler_upper * (1.0 + 1e-14)
    }
}

pub fn zeta_norm_cross_check(
    sigma0: f64,
    terms: usize,
    primes: usize,
) -> Result<ZetaNormCheck, CarlesonError> {
    if !(sigma0 > 0.5) {
        return Err(CarlesonError::SigmaTooSmall(sigma0));
    }
    let exponent = 2.0 * sigma0;
    let zeta_value = zeta_test_norm(ComplexPoint::real(sigma0).expect("finite"), 2.0)?;
    let n = terms.max(1) as f64;
    let head: f64 = (1..terms.max(1))
        .rev()
        .map(|k| (k as f64).powf(-exponent))
        .sum();
    // Euler-Maclaurin from N: N^{-s}/2 + N^{1-s}/(s-1) + s N^{-s-1}/12
    let coefficient_sum = head
        + 0.5 * n.powf(-exponent)
        + n.powf(1.0 - exponent) / (exponent - 1.0)
        + exponent * n.powf(-exponent - 1.0) / 12.0;
    let ps = first_primes(primes.max(1));
    let euler_product: f64 = ps
        .iter()
        .map(|&p| 1.0 / (1.0 - (p as f64).powf(-exponent)))
        .product();
    let largest = *ps.last().expect("at least one prime") as f64;
    let euler_upper = euler_product * (1.0 + largest.powf(1.0 - exponent) / (exponent - 1.0));
    Ok(ZetaNormCheck {
        sigma0,
        zeta_value,
        coefficient_sum,
        euler_product,
        euler_upper,
        primes: ps.len(),
    })
}

/// `(2 sigma0 - 1) zeta(2 sigma0)` and the exact deviation `(2 sigma0 - 1) psi(2 sigma0)`.
pub fn pole_dominance(sigma0: f64) -> Result<(f64, f64), CarlesonError> {
    if !(sigma0 > 0.5) {
        return Err(CarlesonError::SigmaTooSmall(sigma0));
    }
    let gap = 2.0 * sigma0 - 1.0;
    let z = zeta_test_norm(ComplexPoint::real(sigma0).expect("finite"), 2.0)?;
    let psi = psi_complex(Complex64::new(2.0 * sigma0, 0.0)).re;
    Ok((gap * z, gap * psi))
}

/// `eps sum_{n=0}^{floor(T floor(1/eps))} delta_{1/2 + eps + i(t_shift + n eps)}`.
pub fn build_mu_eps(length: f64, eps: f64, t_shift: f64) -> Result<BoxMeasure, CarlesonError> {
    if !(length > 0.0 && eps > 0.0 && eps < 1.0 && t_shift > 0.0 && t_shift < eps) {
        return Err(CarlesonError::BadMeasureParameters {
            length,
            eps,
            shift: t_shift,
        });
    }
    let last = (length * (1.0 / eps).floor()).floor() as usize;
    let atoms = (0..=last)
        .map(|n| Atom::new(0.5 + eps, t_shift + n as f64 * eps, eps))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BoxMeasure::new(atoms))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingRow {
    pub eps: f64,
    /// `int_0^T |F(1/2 + eps + it)|^2 dt`.
    pub integral: f64,
    /// `sum_atoms mass |F|^2`, averaged over eight shifts in `(0, eps)`.
    pub measure_sum: f64,
    pub norm_sq: f64,
    /// `(2T + 13.32) ||F||^2`.
    pub bound: f64,
    pub holds: bool,
}

/// Upper frame-bound slack used by the embedding bound.
pub const EMBEDDING_SLACK: f64 = 13.32;

pub fn embedding_via_measures(
    poly: &DirichletPolynomial,
    length: f64,
    eps_list: &[f64],
) -> Result<Vec<EmbeddingRow>, CarlesonError> {
    let norm_sq = poly.norm_sq();
    let bound = (2.0 * length + EMBEDDING_SLACK) * norm_sq;
    let (x, w) = gauss_legendre_nodes(16);
    eps_list
        .iter()
        .map(|&eps| {
            let sigma = 0.5 + eps;
            let panels = (length / 0.25).ceil().max(1.0) as usize;
            let width = length / panels as f64;
            let integral: f64 = (0..panels)
                .into_par_iter()
                .map(|p| {
                    let mid = (p as f64 + 0.5) * width;
                    x.iter()
                        .zip(&w)
                        .map(|(xi, wi)| {
                            let t = mid + 0.5 * width * xi;
                            0.5 * width * wi * poly.eval(Complex64::new(sigma, t)).norm_sqr()
                        })
                        .sum::<f64>()
                })
                .collect::<Vec<f64>>()
                .iter()
                .sum();
            let shifts = 8;
            let mut measure_sum = 0.0;
            for j in 0..shifts {
                let shift = (j as f64 + 0.5) * eps / shifts as f64;
                let mu = build_mu_eps(length, eps, shift)?;
                measure_sum += mu
                    .atoms()
                    .par_iter()
                    .map(|a| a.mass * poly.eval(Complex64::new(a.sigma, a.t)).norm_sqr())
                    .collect::<Vec<f64>>()
                    .iter()
                    .sum::<f64>();
            }
            measure_sum /= shifts as f64;
            Ok(EmbeddingRow {
                eps,
                integral,
                measure_sum,
                norm_sq,
                bound,
                holds: integral <= bound,
            })
        })
        .collect()
}

/// Constant of the bilinear inequality.
pub const MV_CONSTANT: f64 = 3.2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MvCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl MvCheck {
    pub fn ratio(&self) -> f64 {
        if self.rhs > 0.0 {
            self.lhs / self.rhs
        } else {
            0.0
        }
    }
}

/// `|sum_{n != m} x_n y_m / (lambda_n - lambda_m)|` against
/// `3.2 (sum |x_n|^2/delta_n)^{1/2} (sum |y_n|^2/delta_n)^{1/2}`.
pub fn mv_check(
    lambdas: &[f64],
    x: &[Complex64],
    y: &[Complex64],
) -> Result<MvCheck, CarlesonError> {
    let len = lambdas.len();
    if len < 2 {
        return Err(CarlesonError::TooFewFrequencies);
    }
    for v in [x, y] {
        if v.len() != len {
            return Err(CarlesonError::LengthMismatch {
                expected: len,
                got: v.len(),
            });
        }
    }
    let mut delta = vec![f64::INFINITY; len];
    for n in 0..len {
        for m in 0..len {
            if n != m {
                let gap = (lambdas[n] - lambdas[m]).abs();
                if gap == 0.0 {
                    return Err(CarlesonError::DuplicateFrequency {
                        first: n.min(m),
                        second: n.max(m),
                    });
                }
                delta[n] = delta[n].min(gap);
            }
        }
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for n in 0..len {
        for m in 0..len {
            if n != m {
                sum += x[n] * y[m] / (lambdas[n] - lambdas[m]);
            }
        }
    }
    let weighted = |v: &[Complex64]| -> f64 {
        v.iter()
            .zip(&delta)
            .map(|(a, d)| a.norm_sqr() / d)
            .sum::<f64>()
            .sqrt()
    };
    let lhs = sum.norm();
    let rhs = MV_CONSTANT * weighted(x) * weighted(y);
    Ok(MvCheck {
        lhs,
        rhs,
        holds: lhs <= rhs,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MvInstance {
    pub lambdas: Vec<f64>,
    pub x: Vec<Complex64>,
    pub y: Vec<Complex64>,
}

/// Instance `index` of the campaign: its own ChaCha8 stream of the shared seed.
pub fn mv_instance(seed: u64, index: u64, max_len: usize) -> MvInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let len = rng.random_range(2..=max_len.max(2));
    let lambdas = (0..len)
        .map(|n| n as f64 + rng.random_range(-0.45..0.45))
        .collect();
    let mut gaussian = || {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    };
    let x = (0..len).map(|_| gaussian()).collect();
    let y = (0..len).map(|_| gaussian()).collect();
    MvInstance { lambdas, x, y }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub seed: u64,
    pub instances: u64,
    pub violations: u64,
    pub max_ratio: f64,
    pub argmax_instance: u64,
}

pub fn mv_fuzz(seed: u64, instances: u64, max_len: usize) -> FuzzReport {
    let (violations, max_ratio, argmax_instance) = (0..instances)
        .into_par_iter()
        .map(|i| {
            let inst = mv_instance(seed, i, max_len);
            match mv_check(&inst.lambdas, &inst.x, &inst.y) {
                Ok(check) => (u64::from(!check.holds), check.ratio(), i),
                Err(_) => (0, 0.0, i),
            }
        })
        .reduce(
            || (0, 0.0, 0),
            |a, b| {
                let (ratio, arg) = if b.1 > a.1 || (b.1 == a.1 && b.2 < a.2) {
                    (b.1, b.2)
                } else {
                    (a.1, a.2)
                };
                (a.0 + b.0, ratio, arg)
            },
        );
    FuzzReport {
        seed,
        instances,
        violations,
        max_ratio,
        argmax_instance,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_atom() {
        let mu = BoxMeasure::new(vec![Atom::new(0.8, 3.0, 2.0).unwrap()]);
        let c = carleson_constant(&mu).unwrap();
        assert!((c.constant - 2.0 / 0.3).abs() < 1e-12);
    }

    #[test]
    fn empty_measure_rejected() {
        assert_eq!(
            carleson_constant(&BoxMeasure::new(vec![])),
            Err(CarlesonError::EmptyMeasure)
        );
    }

    #[test]
    fn mu_eps_small_case() {
        let mu = build_mu_eps(1.0, 0.5, 0.1).unwrap();
        assert_eq!(mu.atoms().len(), 3);
        assert!(mu.atoms().iter().all(|a| a.mass == 0.5 && a.sigma == 1.0));
    }

    #[test]
    fn mv_hand_case() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let c = mv_check(&[0.0, 1.0], &[one, zero], &[zero, one]).unwrap();
        assert!((c.lhs - 1.0).abs() < 1e-15);
        assert!((c.rhs - 3.2).abs() < 1e-15);
        assert!(c.holds);
        assert!(mv_check(&[0.0, 0.0], &[one, one], &[one, one]).is_err());
    }

    #[test]
    fn zeta_norm_p_independent() {
        let s0 = ComplexPoint::new(0.8, 1.0).unwrap();
        assert_eq!(
            zeta_test_norm(s0, 2.0).unwrap(),
            zeta_test_norm(s0, 4.0).unwrap()
        );
        let z1 = zeta_test_norm(ComplexPoint::real(1.0).unwrap(), 2.0).unwrap();
        assert!((z1 - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-14);
        assert!(zeta_test_norm(ComplexPoint::real(0.5).unwrap(), 2.0).is_err());
    }
}
