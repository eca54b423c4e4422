//! Riemann zeta, the entire part `psi(s) = zeta(s) - 1/(s-1)`, the frame kernel
//! `phi(t) = Re psi(1+it)`, primes and the prime-exponent indexing of integers.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;
use thiserror::Error;

/// Number of Bernoulli correction terms in the Euler-Maclaurin tail.
const EM_TERMS: usize = 12;

/// `B_{2k} / (2k)!` for k = 1..=12.
const BERNOULLI_OVER_FACTORIAL: [f64; EM_TERMS] = [
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
    7.0 / 6.0 / 87178291200.0,
    -3617.0 / 510.0 / 20922789888000.0,
    43867.0 / 798.0 / 6402373705728000.0,
    -174611.0 / 330.0 / 2432902008176640000.0,
    854513.0 / 138.0 / 1124000727777607680000.0,
    -236364091.0 / 2730.0 / 620448401733239439360000.0,
];

/// Largest direct-summation length we are willing to run.
const MAX_TERMS: f64 = 1.0e7;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZetaError {
    #[error("zeta has a pole at s = 1")]
    Pole,
    #[error(
        "Euler-Maclaurin remainder {remainder:e} exceeds the accuracy target at s = {re} + {im}i"
    )]
    AccuracyNotReached { re: f64, im: f64, remainder: f64 },
    #[error("|s| = {modulus} is outside the supported range")]
    OutOfRange { modulus: f64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("complex point has a non-finite component ({re}, {im})")]
pub struct NonFinitePoint {
    pub re: f64,
    pub im: f64,
}

/// A finite point `s = sigma + i t` of the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexPoint {
    re: f64,
    im: f64,
}

impl ComplexPoint {
    pub fn new(re: f64, im: f64) -> Result<Self, NonFinitePoint> {
        if re.is_finite() && im.is_finite() {
            Ok(Self { re, im })
        } else {
            Err(NonFinitePoint { re, im })
        }
    }

    pub fn real(re: f64) -> Result<Self, NonFinitePoint> {
        Self::new(re, 0.0)
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

impl TryFrom<Complex64> for ComplexPoint {
    type Error = NonFinitePoint;

    fn try_from(z: Complex64) -> Result<Self, Self::Error> {
        Self::new(z.re, z.im)
    }
}

impl From<ComplexPoint> for Complex64 {
    fn from(p: ComplexPoint) -> Self {
        p.to_complex()
    }
}

/// Riemann zeta function.
pub fn zeta(s: ComplexPoint) -> Result<Complex64, ZetaError> {
    zeta_complex(s.to_complex())
}

/// `psi(s) = zeta(s) - 1/(s-1)`, entire; `psi(1)` is Euler's constant.
pub fn psi(s: ComplexPoint) -> Complex64 {
    psi_complex(s.to_complex())
}

/// `Re psi(1 + it)`.
pub fn phi_kernel(t: f64) -> f64 {
    psi_complex(Complex64::new(1.0, t)).re
}

/// `psi(1 + it)`, the kernel of the one-sided embedding identity.
pub fn psi_one(t: f64) -> Complex64 {
    psi_complex(Complex64::new(1.0, t))
}

struct EulerMaclaurin {
    head: Complex64,
    bernoulli: Complex64,
    last_term: f64,
    cut: f64,
}

/// Shared pieces of the Euler-Maclaurin formula at cut N:
/// sum_{n<N} n^{-s} + N^{-s}/2 + sum_k B_2k/(2k)! (s)_{2k-1} N^{1-s-2k}.
fn euler_maclaurin(s: Complex64) -> Result<EulerMaclaurin, ZetaError> {
    let modulus = s.norm();
    let cut = modulus.ceil() + (2 * EM_TERMS) as f64 + 1.0;
    if cut > MAX_TERMS {
        return Err(ZetaError::OutOfRange { modulus });
    }
    let n_cut = cut as u64;
    let mut head = Complex64::new(0.0, 0.0);
    for n in 1..n_cut {
        head += (-s * (n as f64).ln()).exp();
    }
    let log_cut = cut.ln();
    let cut_pow = (-s * log_cut).exp();
    head += cut_pow * 0.5;

    // (s)_{2k-1} N^{1-s-2k}, updated by (s+2k-1)(s+2k)/N^2 per step.
    let mut factor = s * cut_pow / cut;
    let mut bernoulli = Complex64::new(0.0, 0.0);
    let mut last_term = 0.0;
    for (k, coeff) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let term = factor * *coeff;
        bernoulli += term;
        last_term = term.norm();
        let j = 2.0 * (k as f64 + 1.0);
        factor *= (s + (j - 1.0)) * (s + j) / (cut * cut);
    }
    Ok(EulerMaclaurin {
        head,
        bernoulli,
        last_term,
        cut,
    })
}

pub(crate) fn zeta_complex(s: Complex64) -> Result<Complex64, ZetaError> {
    if s.re == 1.0 && s.im == 0.0 {
        return Err(ZetaError::Pole);
    }
    let em = euler_maclaurin(s)?;
    let pole_part = (-(s - 1.0) * em.cut.ln()).exp() / (s - 1.0);
    let value = em.head + pole_part + em.bernoulli;
    if em.last_term > 1e-12 * value.norm().max(1e-300) {
        return Err(ZetaError::AccuracyNotReached {
            re: s.re,
            im: s.im,
            remainder: em.last_term,
        });
    }
    Ok(value)
}

pub(crate) fn psi_complex(s: Complex64) -> Complex64 {
    let em = match euler_maclaurin(s) {
        Ok(em) => em,
        Err(_) => return Complex64::new(f64::NAN, f64::NAN),
    };
    // N^{1-s}/(s-1) - 1/(s-1) = -log N (1 - e^{-z})/z with z = (s-1) log N.
    let log_cut = em.cut.ln();
    let z = (s - 1.0) * log_cut;
    em.head - one_minus_exp_neg_over(z) * log_cut + em.bernoulli
}

/// (1 - e^{-z})/z without cancellation near z = 0.
fn one_minus_exp_neg_over(z: Complex64) -> Complex64 {
    if z.norm() < 0.5 {
        // sum_{k>=0} (-z)^k/(k+1)!
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for k in 1..30 {
            term *= -z / (k as f64 + 1.0);
            sum += term;
            if term.norm() < 1e-18 {
                break;
            }
        }
        sum
    } else {
        (1.0 - (-z).exp()) / z
    }
}

/// Primes `p <= limit` in increasing order.
pub fn primes_up_to(limit: usize) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i.saturating_mul(i);
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<u64> {
    if count == 0 {
        return Vec::new();
    }
    // p_n < n (ln n + ln ln n) for n >= 6
    let n = count.max(6) as f64;
    let mut limit = (n * (n.ln() + n.ln().ln())).ceil() as usize + 1;
    loop {
        let mut primes = primes_up_to(limit);
        if primes.len() >= count {
            primes.truncate(count);
            return primes;
        }
        limit *= 2;
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MultiIndexError {
    #[error("prime indices must be strictly increasing and positive")]
    Ordering,
    #[error("exponents must be at least 1")]
    ZeroExponent,
}

/// Prime-exponent multi-index: `n = prod p_{i}^{nu_i}` with `p_1 = 2`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MultiIndex {
    exponents: Vec<(usize, u32)>,
}

impl MultiIndex {
    pub fn new(exponents: Vec<(usize, u32)>) -> Result<Self, MultiIndexError> {
        if exponents.iter().any(|&(_, e)| e == 0) {
            return Err(MultiIndexError::ZeroExponent);
        }
        let increasing = exponents.windows(2).all(|w| w[0].0 < w[1].0);
        if !increasing || exponents.first().is_some_and(|&(i, _)| i == 0) {
            return Err(MultiIndexError::Ordering);
        }
        Ok(Self { exponents })
    }

    /// Pairs of (1-based prime index, exponent).
    pub fn exponents(&self) -> &[(usize, u32)] {
        &self.exponents
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    /// The integer this index encodes, `None` on overflow.
    pub fn value(&self) -> Option<u64> {
        let largest = self.exponents.last().map_or(0, |&(i, _)| i);
        let primes = first_primes(largest);
        self.exponents.iter().try_fold(1u64, |acc, &(i, e)| {
            acc.checked_mul(primes[i - 1].checked_pow(e)?)
        })
    }
}

/// Prime factorization of `n >= 1` as a multi-index; `bohr_index(1)` is empty.
pub fn bohr_index(n: u64) -> MultiIndex {
    let mut exponents = Vec::new();
    let mut rest = n.max(1);
    let mut prime_index = 0usize;
    let mut p = 2u64;
    while p.saturating_mul(p) <= rest {
        if is_small_prime(p) {
            prime_index += 1;
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            if e > 0 {
                exponents.push((prime_index, e));
            }
        }
        p += 1;
    }
    if rest > 1 {
        // rest is a prime larger than every trial divisor; locate its index.
        let index = prime_index + count_primes_between(p, rest);
        exponents.push((index, 1));
    }
    MultiIndex { exponents }
}

fn is_small_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Number of primes in `[from, to]`, `to` itself prime.
fn count_primes_between(from: u64, to: u64) -> usize {
    static TABLE: OnceLock<Vec<u64>> = OnceLock::new();
    const TABLE_LIMIT: u64 = 1 << 20;
    if to <= TABLE_LIMIT {
        let table = TABLE.get_or_init(|| primes_up_to(TABLE_LIMIT as usize));
        table.partition_point(|&p| p <= to) - table.partition_point(|&p| p < from)
    } else {
        let primes = primes_up_to(to as usize);
        primes.len() - primes.partition_point(|&p| p < from)
    }
}
