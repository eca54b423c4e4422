//! Chebyshev interpolation of smooth kernels, used to tabulate `phi` and `psi(1+it)`
//! once per interval instead of calling the zeta sum for every node pair.

use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Debug, Clone)]
pub struct Chebyshev {
    lo: f64,
    hi: f64,
    coeffs: Vec<Complex64>,
}

impl Chebyshev {
    /// Fit on `[lo, hi]`, doubling the degree until the trailing coefficients drop
    /// below `tol` relative to the largest one. `tol` is floored at 64 ulp since the
    /// coefficients themselves carry rounding noise of that size.
    pub fn fit_adaptive(lo: f64, hi: f64, tol: f64, f: impl Fn(f64) -> Complex64) -> Self {
        let mut degree = 32;
        loop {
            let fit = Self::fit(lo, hi, degree, &f);
            let scale = fit.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
            let tail = fit.coeffs[degree - 4..]
                .iter()
                .map(|c| c.norm())
                .fold(0.0, f64::max);
            if tail <= tol.max(64.0 * f64::EPSILON) * scale.max(1e-300) || degree >= 4096 {
                return fit;
            }
            degree *= 2;
        }
    }

    /// Interpolate at the `degree` Chebyshev points of the first kind.
    pub fn fit(lo: f64, hi: f64, degree: usize, f: impl Fn(f64) -> Complex64) -> Self {
        let n = degree.max(2);
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let values: Vec<Complex64> = (0..n)
            .map(|j| {
                let theta = PI * (j as f64 + 0.5) / n as f64;
                f(mid + half * theta.cos())
            })
            .collect();
        let coeffs = (0..n)
            .map(|k| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, v) in values.iter().enumerate() {
                    let theta = PI * (j as f64 + 0.5) / n as f64;
                    acc += v * (k as f64 * theta).cos();
                }
                let norm = if k == 0 { 1.0 } else { 2.0 };
                acc * (norm / n as f64)
            })
            .collect();
        Self { lo, hi, coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// Clenshaw evaluation; `x` is clamped to the fitted interval.
    pub fn eval(&self, x: f64) -> Complex64 {
        let u = ((2.0 * x - self.lo - self.hi) / (self.hi - self.lo)).clamp(-1.0, 1.0);
        let mut b1 = Complex64::new(0.0, 0.0);
        let mut b2 = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().skip(1).rev() {
            let b0 = c + b1 * (2.0 * u) - b2;
            b2 = b1;
            b1 = b0;
        }
        self.coeffs[0] + b1 * u - b2
    }
}
