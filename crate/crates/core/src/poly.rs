//! Least-squares polynomial fitting and root extraction.

use crate::eigen::eigenvalues;
use crate::error::{Error, Result};
use crate::linalg::{c64, CMatrix, Complex64, ONE, ZERO};

/// Coefficients below this fraction of the largest are treated as zero.
pub const TRUNCATION_TOL: f64 = 1e-8;

const NEWTON_TOL: f64 = 1e-12;
const NEWTON_MAX_ITER: usize = 50;
const NEWTON_DAMPING: f64 = 0.5;

/// A fitted polynomial `c · z^{zeros} · ∏ (z − r)`.
#[derive(Debug, Clone)]
pub struct PolyFit {
    /// Ascending coefficients after truncation.
    pub coeffs: Vec<Complex64>,
    pub degree: usize,
    /// Leading coefficient.
    pub constant: Complex64,
    /// All roots, exact zeros included.
    pub roots: Vec<Complex64>,
    /// Max `|p(z) − v|` over samples, relative to the largest `|v|` (or 1).
    pub residual: f64,
}

impl PolyFit {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        horner(&self.coeffs, z)
    }

    /// Evaluates the factored form `c ∏ (z − r)`.
    pub fn eval_factored(&self, z: Complex64) -> Complex64 {
        self.roots.iter().fold(self.constant, |acc, &r| acc * (z - r))
    }

    pub fn zero_root_count(&self) -> usize {
        self.roots.iter().filter(|r| r.norm() == 0.0).count()
    }
}

pub fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
}

fn horner_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = ZERO;
    let mut dp = ZERO;
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Fits a polynomial of degree at most `max_degree` to `(point, value)`
/// samples, detects the true degree and factors it.
pub fn poly_fit_roots(samples: &[(Complex64, Complex64)], max_degree: usize) -> Result<PolyFit> {
    let ncoef = max_degree + 1;
    if samples.len() < max_degree + 2 {
        return Err(Error::InsufficientSamples(format!(
            "{} samples for degree {max_degree}; need at least {}",
            samples.len(),
            max_degree + 2
        )));
    }
    for (i, a) in samples.iter().enumerate() {
        if samples[i + 1..].iter().any(|b| (a.0 - b.0).norm() < 1e-14) {
            return Err(Error::InsufficientSamples("repeated sample point".into()));
        }
    }

    // column scaling keeps the Vandermonde system balanced off the unit circle
    let rho = samples.iter().map(|s| s.0.norm()).fold(0.0, f64::max).max(1e-300);
    let vander = CMatrix::from_fn(samples.len(), ncoef, |r, c| (samples[r].0 / rho).powu(c as u32));
    let rhs = CMatrix::from_fn(samples.len(), 1, |r, _| samples[r].1);
    let svd = vander.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smax == 0.0 || smin / smax < 1e-13 {
        return Err(Error::InsufficientSamples(format!(
            "sample set is rank deficient (condition {:.1e})",
            smax / smin.max(f64::MIN_POSITIVE)
        )));
    }
    let scaled = svd
        .solve(&rhs, 0.0)
        .map_err(|e| Error::InsufficientSamples(e.to_string()))?;
    let mut coeffs: Vec<Complex64> = (0..ncoef)
        .map(|k| scaled[(k, 0)] / c64(rho.powi(k as i32), 0.0))
        .collect();

    let vmax = samples.iter().map(|s| s.1.norm()).fold(0.0, f64::max);
    // relative size of each term over the sampled disc
    let weight = |k: usize, c: Complex64| c.norm() * rho.powi(k as i32);
    let wmax = coeffs.iter().enumerate().map(|(k, &c)| weight(k, c)).fold(0.0, f64::max);
    if wmax == 0.0 {
        return Ok(PolyFit {
            coeffs: vec![ZERO],
            degree: 0,
            constant: ZERO,
            roots: vec![],
            residual: 0.0,
        });
    }
    let degree = (0..ncoef)
        .rev()
        .find(|&k| weight(k, coeffs[k]) > TRUNCATION_TOL * wmax)
        .unwrap_or(0);
    coeffs.truncate(degree + 1);
    let zeros = (0..=degree)
        .find(|&k| weight(k, coeffs[k]) > TRUNCATION_TOL * wmax)
        .unwrap_or(0);
    for c in coeffs.iter_mut().take(zeros) {
        *c = ZERO;
    }

    let constant = coeffs[degree];
    let mut roots = vec![ZERO; zeros];
    let reduced: Vec<Complex64> = coeffs[zeros..].to_vec();
    roots.extend(polish_roots(&reduced, companion_roots(&reduced)));

    let residual = samples
        .iter()
        .map(|&(z, v)| (horner(&coeffs, z) - v).norm())
        .fold(0.0, f64::max)
        / vmax.max(1.0);
    Ok(PolyFit {
        coeffs,
        degree,
        constant,
        roots,
        residual,
    })
}

/// Roots of the polynomial with ascending `coeffs` via its companion matrix.
pub fn companion_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let deg = coeffs.len().saturating_sub(1);
    if deg == 0 {
        return vec![];
    }
    let lead = coeffs[deg];
    let mut comp = CMatrix::zeros(deg, deg);
    for i in 1..deg {
        comp[(i, i - 1)] = ONE;
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -coeffs[i] / lead;
    }
    eigenvalues(&comp)
}

/// Damped Newton refinement of each root against the full polynomial.
pub fn polish_roots(coeffs: &[Complex64], roots: Vec<Complex64>) -> Vec<Complex64> {
    roots
        .into_iter()
        .map(|mut z| {
            let (mut p, _) = horner_with_derivative(coeffs, z);
            for _ in 0..NEWTON_MAX_ITER {
                let (_, dp) = horner_with_derivative(coeffs, z);
                if dp.norm() == 0.0 {
                    break;
                }
                let mut step = p / dp;
                let mut accepted = false;
                for _ in 0..8 {
                    let cand = z - step;
                    let (pc, _) = horner_with_derivative(coeffs, cand);
                    if pc.norm() <= p.norm() {
                        z = cand;
                        p = pc;
                        accepted = true;
                        break;
                    }
                    step *= NEWTON_DAMPING;
                }
                if !accepted || step.norm() <= NEWTON_TOL * z.norm().max(1.0) {
                    break;
                }
            }
            z
        })
        .collect()
}
