use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Arithmetic ground for a given odd `n`: the primitive roots
/// `w = exp(2πi/n)` and `λ = −w⁻²` (a primitive `2n`-th root).
///
/// Integer powers are served from tables built from exact angles, so
/// `w.pow(k)` never accumulates rounding from repeated multiplication.
#[derive(Debug, Clone, PartialEq)]
pub struct RootContext {
    n: usize,
    w_table: Vec<Complex64>,
    lambda_table: Vec<Complex64>,
}

impl RootContext {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 || n % 2 == 0 {
            return Err(Error::InvalidContext(format!(
                "n must be odd and at least 3, got {n}"
            )));
        }
        let w_table = (0..n)
            .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64))
            .collect();
        // λ^k = (−1)^k w^{−2k} = exp(iπk(1 − 4/n)) = exp(iπ k (n − 4) / n)
        let lambda_table = (0..2 * n)
            .map(|k| {
                let num = (k * (n + 4 * n - 4)) % (2 * n);
                Complex64::from_polar(1.0, PI * num as f64 / n as f64)
            })
            .collect();
        let ctx = RootContext {
            n,
            w_table,
            lambda_table,
        };
        ctx.check_primitivity()?;
        Ok(ctx)
    }

    fn check_primitivity(&self) -> Result<()> {
        let tol = 1e-14 * self.n as f64;
        let w = self.w();
        let lam = self.lambda();
        let close = |a: Complex64, b: Complex64| (a - b).norm() <= tol;
        let one = Complex64::new(1.0, 0.0);
        if !close(w.powu(self.n as u32), one) || !close(lam.powu(2 * self.n as u32), one) {
            return Err(Error::InvalidContext("root tables are inconsistent".into()));
        }
        if (1..self.n).any(|k| close(self.w_pow(k as i64), one))
            || (1..2 * self.n).any(|k| close(self.lambda_pow(k as i64), one))
        {
            return Err(Error::InvalidContext("roots are not primitive".into()));
        }
        if !close(lam, -self.w_pow(-2)) {
            return Err(Error::InvalidContext("λ ≠ −w⁻²".into()));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `(n − 1) / 2`, the half-range that recurs throughout.
    pub fn half(&self) -> usize {
        (self.n - 1) / 2
    }

    pub fn w(&self) -> Complex64 {
        self.w_table[1]
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda_table[1]
    }

    pub fn w_pow(&self, k: i64) -> Complex64 {
        self.w_table[k.rem_euclid(self.n as i64) as usize]
    }

    pub fn lambda_pow(&self, k: i64) -> Complex64 {
        self.lambda_table[k.rem_euclid(2 * self.n as i64) as usize]
    }

    /// Canonical 0-based residue of `i` modulo `n`.
    pub fn idx(&self, i: i64) -> usize {
        i.rem_euclid(self.n as i64) as usize
    }
}
