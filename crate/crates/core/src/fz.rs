//! Fateev–Zamolodchikov weights, the checkerboard R-matrix, its
//! two-parameter limit in the D(D_n)-adapted basis, the polynomial
//! normalization, and the spectral projectors.

use serde::{Deserialize, Serialize};

use crate::context::RootContext;
use crate::error::{Error, Result};
use crate::linalg::{c64, elementary, kron, permutation_op, CMatrix, Complex64, TensorSpace, ONE, ZERO};

/// Denominators closer to zero than this are rejected.
pub const POLE_GUARD: f64 = 1e-12;

/// Multiplicative spectral parameter `(z₁, z₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralPoint {
    pub z1: Complex64,
    pub z2: Complex64,
}

impl SpectralPoint {
    pub fn new(z1: Complex64, z2: Complex64) -> Result<Self> {
        if z1 == ZERO || z2 == ZERO {
            return Err(Error::SingularParameter("spectral components must be nonzero".into()));
        }
        Ok(SpectralPoint { z1, z2 })
    }

    pub fn one() -> Self {
        SpectralPoint { z1: ONE, z2: ONE }
    }

    pub fn inverse(&self) -> Self {
        SpectralPoint {
            z1: self.z1.inv(),
            z2: self.z2.inv(),
        }
    }

    /// Componentwise product.
    pub fn mul(&self, other: &Self) -> Self {
        SpectralPoint {
            z1: self.z1 * other.z1,
            z2: self.z2 * other.z2,
        }
    }

    /// `(z₂*, z₁*)`.
    pub fn conj_swap(&self) -> Self {
        SpectralPoint {
            z1: self.z2.conj(),
            z2: self.z1.conj(),
        }
    }
}

/// `l mod n` folded to `min(l, n − l)`.
fn fold(n: usize, l: i64) -> usize {
    let r = l.rem_euclid(n as i64) as usize;
    r.min(n - r)
}

fn guarded(num: Complex64, den: Complex64, what: &str) -> Result<Complex64> {
    if den.norm() <= POLE_GUARD {
        return Err(Error::SingularParameter(format!("{what}: denominator {den:.3e} at a pole")));
    }
    Ok(num / den)
}

/// `W(z|l) = ∏_{j=1}^{l} (λ^{2j−1}z − 1)/(λ^{2j−1} − z)`, extended to all `l`.
pub fn weight_w(ctx: &RootContext, z: Complex64, l: i64) -> Result<Complex64> {
    let mut p = ONE;
    for j in 1..=fold(ctx.n(), l) as i64 {
        let lam = ctx.lambda_pow(2 * j - 1);
        p *= guarded(lam * z - 1.0, lam - z, "W")?;
    }
    Ok(p)
}

/// `W̄(z|l) = ∏_{j=1}^{l} (λ^{2j−1} − λz)/(λ^{2j}z − 1)`, extended to all `l`.
pub fn weight_wbar(ctx: &RootContext, z: Complex64, l: i64) -> Result<Complex64> {
    let mut p = ONE;
    let lam = ctx.lambda();
    for j in 1..=fold(ctx.n(), l) as i64 {
        p *= guarded(ctx.lambda_pow(2 * j - 1) - lam * z, ctx.lambda_pow(2 * j) * z - 1.0, "W̄")?;
    }
    Ok(p)
}

/// `W(z|l)` and `W̄(z|l)` for `l = 0..n−1` at one argument.
#[derive(Debug, Clone)]
pub struct WeightTable {
    pub z: Complex64,
    w: Vec<Complex64>,
    wbar: Vec<Complex64>,
}

impl WeightTable {
    pub fn new(ctx: &RootContext, z: Complex64) -> Result<Self> {
        let n = ctx.n() as i64;
        Ok(WeightTable {
            z,
            w: (0..n).map(|l| weight_w(ctx, z, l)).collect::<Result<_>>()?,
            wbar: (0..n).map(|l| weight_wbar(ctx, z, l)).collect::<Result<_>>()?,
        })
    }

    pub fn w(&self, l: i64) -> Complex64 {
        self.w[l.rem_euclid(self.w.len() as i64) as usize]
    }

    pub fn wbar(&self, l: i64) -> Complex64 {
        self.wbar[l.rem_euclid(self.wbar.len() as i64) as usize]
    }
}

/// Checkerboard R-matrix
/// `Σ W̄(x₁/y₁|b−c) W(x₂/y₁|b−d) W̄(x₂/y₂|a−d) W(x₁/y₂|a−c) e_{a,b} ⊗ e_{c,d}`.
pub fn fz_rmatrix(
    ctx: &RootContext,
    x1: Complex64,
    x2: Complex64,
    y1: Complex64,
    y2: Complex64,
) -> Result<CMatrix> {
    if [x1, x2, y1, y2].contains(&ZERO) {
        return Err(Error::SingularParameter("rapidities must be nonzero".into()));
    }
    let n = ctx.n();
    let t11 = WeightTable::new(ctx, x1 / y1)?;
    let t21 = WeightTable::new(ctx, x2 / y1)?;
    let t22 = WeightTable::new(ctx, x2 / y2)?;
    let t12 = WeightTable::new(ctx, x1 / y2)?;
    let mut r = CMatrix::zeros(n * n, n * n);
    for a in 0..n as i64 {
        for b in 0..n as i64 {
            for c in 0..n as i64 {
                for d in 0..n as i64 {
                    r[(a as usize * n + c as usize, b as usize * n + d as usize)] =
                        t11.wbar(b - c) * t21.w(b - d) * t22.wbar(a - d) * t12.w(a - c);
                }
            }
        }
    }
    Ok(r)
}

/// The limit form
/// `Σ (−1)^{a+b+c+d} λ^{(a−c)²−(b−d)²} W̄(z₁|b−c) W̄(z₂⁻¹|a−d) e_{a,b} ⊗ e_{c,d}`
/// with labels `a, b, c, d ∈ 1..n`.
pub fn limit_rmatrix_raw(ctx: &RootContext, p: SpectralPoint) -> Result<CMatrix> {
    let n = ctx.n();
    let t1 = WeightTable::new(ctx, p.z1)?;
    let t2 = WeightTable::new(ctx, p.z2.inv())?;
    let mut r = CMatrix::zeros(n * n, n * n);
    let labels = 1..=n as i64;
    for a in labels.clone() {
        for b in labels.clone() {
            for c in labels.clone() {
                for d in labels.clone() {
                    let sign = if (a + b + c + d) % 2 == 0 { 1.0 } else { -1.0 };
                    let e = (a - c).pow(2) - (b - d).pow(2);
                    let v = ctx.lambda_pow(e) * sign * t1.wbar(b - c) * t2.wbar(a - d);
                    r[(ctx.idx(a) * n + ctx.idx(c), ctx.idx(b) * n + ctx.idx(d))] += v;
                }
            }
        }
    }
    Ok(r)
}

/// `S = n^{−1/2} Σ λ^{2j(1−j)} e_{2(i+j),i}` and its inverse
/// `n^{−1/2} Σ λ^{2j(j−1)} e_{i,2(i+j)}`.
pub fn basis_s(ctx: &RootContext) -> (CMatrix, CMatrix) {
    let n = ctx.n();
    let scale = c64(1.0 / (n as f64).sqrt(), 0.0);
    let mut s = CMatrix::zeros(n, n);
    let mut s_inv = CMatrix::zeros(n, n);
    for i in 1..=n as i64 {
        for j in 1..=n as i64 {
            s[(ctx.idx(2 * (i + j)), ctx.idx(i))] += ctx.lambda_pow(2 * j * (1 - j)) * scale;
            s_inv[(ctx.idx(i), ctx.idx(2 * (i + j)))] += ctx.lambda_pow(2 * j * (j - 1)) * scale;
        }
    }
    (s, s_inv)
}

/// `(S⊗S)·R_raw·(S⊗S)⁻¹`, which reproduces [`rmatrix_dd`].
pub fn conjugate_raw(ctx: &RootContext, raw: &CMatrix) -> CMatrix {
    let (s, s_inv) = basis_s(ctx);
    kron(&s, &s) * raw * kron(&s_inv, &s_inv)
}

/// Places the `(a, j)` coefficient table on `e_{i+j,i+a} ⊗ e_{i+a+j,i}`.
fn assemble_dd(n: usize, coef: impl Fn(usize, usize) -> Complex64) -> CMatrix {
    let mut r = CMatrix::zeros(n * n, n * n);
    for a in 0..n {
        for j in 0..n {
            let c = coef(a, j);
            if c == ZERO {
                continue;
            }
            for i in 0..n {
                let row = ((i + j) % n) * n + (i + a + j) % n;
                let col = ((i + a) % n) * n + i;
                r[(row, col)] += c;
            }
        }
    }
    r
}

/// The R-matrix in the D(D_n)-adapted basis,
/// `Σ [Σ_b w^{−2a(2b−j)} W̄(z₁|b) W̄(z₂⁻¹|b−j)] e_{i+j,i+a} ⊗ e_{i+a+j,i}`.
pub fn rmatrix_dd(ctx: &RootContext, p: SpectralPoint) -> Result<CMatrix> {
    let n = ctx.n();
    let t1 = WeightTable::new(ctx, p.z1)?;
    let t2 = WeightTable::new(ctx, p.z2.inv())?;
    Ok(assemble_dd(n, |a, j| {
        let (a, j) = (a as i64, j as i64);
        (1..=n as i64)
            .map(|b| ctx.w_pow(-2 * a * (2 * b - j)) * t1.wbar(b) * t2.wbar(b - j))
            .sum()
    }))
}

/// `N(z₁,z₂) = (1/n) ∏_{k=1}^{(n−1)/2} (z₁ − w^{4k})(z₂ − w^{−4k})`.
pub fn normalization_n(ctx: &RootContext, p: SpectralPoint) -> Complex64 {
    let mut acc = c64(1.0 / ctx.n() as f64, 0.0);
    for k in 1..=ctx.half() as i64 {
        acc *= (p.z1 - ctx.w_pow(4 * k)) * (p.z2 - ctx.w_pow(-4 * k));
    }
    acc
}

/// An argument of the normalized R-matrix: a finite value or the point at
/// infinity, where entries are replaced by their leading coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Arg {
    Finite(Complex64),
    Infinity,
}

impl From<Complex64> for Arg {
    fn from(z: Complex64) -> Self {
        Arg::Finite(z)
    }
}

/// `∏_k (z₁ − w^{4k}) · W̄(z₁|l)` as a polynomial of degree `(n−1)/2`.
fn wbar_normalized_1(ctx: &RootContext, z: Arg, l: i64) -> Complex64 {
    let l = fold(ctx.n(), l) as i64;
    let lam = ctx.lambda();
    let mut p = ONE;
    for j in 1..=l {
        p *= ctx.w_pow(4 * j)
            * match z {
                Arg::Finite(z) => ctx.lambda_pow(2 * j - 1) - lam * z,
                Arg::Infinity => -lam,
            };
    }
    if let Arg::Finite(z) = z {
        for k in l + 1..=ctx.half() as i64 {
            p *= z - ctx.w_pow(4 * k);
        }
    }
    p
}

/// `∏_k (z₂ − w^{−4k}) · W̄(z₂⁻¹|l)` as a polynomial of degree `(n−1)/2`.
fn wbar_normalized_2(ctx: &RootContext, z: Arg, l: i64) -> Complex64 {
    let l = fold(ctx.n(), l) as i64;
    let lam = ctx.lambda();
    let mut p = ONE;
    for j in 1..=l {
        p *= match z {
            Arg::Finite(z) => lam - ctx.lambda_pow(2 * j - 1) * z,
            Arg::Infinity => -ctx.lambda_pow(2 * j - 1),
        };
    }
    if let Arg::Finite(z) = z {
        for k in l + 1..=ctx.half() as i64 {
            p *= z - ctx.w_pow(-4 * k);
        }
    }
    p
}

/// `N·R_dd` with the poles cancelled analytically; entries are polynomials
/// of degree `(n−1)/2` in each variable. `Arg::Infinity` selects the
/// leading coefficient in that variable.
pub fn rmatrix_normalized_at(ctx: &RootContext, z1: Arg, z2: Arg) -> CMatrix {
    let n = ctx.n();
    let inv_n = c64(1.0 / n as f64, 0.0);
    let u1: Vec<Complex64> = (0..n as i64).map(|l| wbar_normalized_1(ctx, z1, l)).collect();
    let u2: Vec<Complex64> = (0..n as i64).map(|l| wbar_normalized_2(ctx, z2, l)).collect();
    let at = |v: &[Complex64], l: i64| v[l.rem_euclid(n as i64) as usize];
    assemble_dd(n, |a, j| {
        let (a, j) = (a as i64, j as i64);
        inv_n
            * (1..=n as i64)
                .map(|b| ctx.w_pow(-2 * a * (2 * b - j)) * at(&u1, b) * at(&u2, b - j))
                .sum::<Complex64>()
    })
}

pub fn rmatrix_normalized(ctx: &RootContext, p: SpectralPoint) -> CMatrix {
    rmatrix_normalized_at(ctx, Arg::Finite(p.z1), Arg::Finite(p.z2))
}

/// Admissible projector labels: `(0, b)` for `b ≤ (n−1)/2` and `(a, b)` for
/// `1 ≤ a ≤ (n−1)/2`, `0 ≤ b < n`.
pub fn admissible_pairs(n: usize) -> Vec<(i64, i64)> {
    let m = (n as i64 - 1) / 2;
    let mut out: Vec<(i64, i64)> = (0..=m).map(|b| (0, b)).collect();
    for a in 1..=m {
        for b in 0..n as i64 {
            out.push((a, b));
        }
    }
    out
}

fn check_pair(n: usize, a: i64, b: i64) -> Result<()> {
    if admissible_pairs(n).contains(&(a, b)) {
        Ok(())
    } else {
        Err(Error::InvalidPair { n, a, b })
    }
}

/// `p^{(a,b)} = (c/n) Σ [w^{2bj} e_{i+a+j,i+a} ⊗ e_{i+j,i} + w^{−2bj} e_{i−a+j,i−a} ⊗ e_{i+j,i}]`
/// with `c = 1/2` at `(0,0)` and `1` otherwise.
pub fn projector(ctx: &RootContext, a: i64, b: i64) -> Result<CMatrix> {
    let n = ctx.n();
    check_pair(n, a, b)?;
    let c = if (a, b) == (0, 0) { 0.5 } else { 1.0 };
    let mut p = CMatrix::zeros(n * n, n * n);
    for i in 0..n as i64 {
        for j in 0..n as i64 {
            let plus = ctx.w_pow(2 * b * j);
            let minus = ctx.w_pow(-2 * b * j);
            p[(ctx.idx(i + a + j) * n + ctx.idx(i + j), ctx.idx(i + a) * n + ctx.idx(i))] += plus;
            p[(ctx.idx(i - a + j) * n + ctx.idx(i + j), ctx.idx(i - a) * n + ctx.idx(i))] += minus;
        }
    }
    Ok(p * c64(c / n as f64, 0.0))
}

/// The two factors of `f_{(a,b)}`: `Σ_c w^{2(a+b)c} W̄(z₁|c)` and
/// `Σ_d w^{2(a−b)d} W̄(z₂⁻¹|d)`.
pub fn eigenfunction_factors(ctx: &RootContext, a: i64, b: i64, p: SpectralPoint) -> Result<(Complex64, Complex64)> {
    check_pair(ctx.n(), a, b)?;
    let n = ctx.n() as i64;
    let t1 = WeightTable::new(ctx, p.z1)?;
    let t2 = WeightTable::new(ctx, p.z2.inv())?;
    let f1 = (1..=n).map(|c| ctx.w_pow(2 * (a + b) * c) * t1.wbar(c)).sum();
    let f2 = (1..=n).map(|d| ctx.w_pow(2 * (a - b) * d) * t2.wbar(d)).sum();
    Ok((f1, f2))
}

/// Eigenvalue of `P·R_dd(p)` on the range of `p^{(a,b)}`.
pub fn eigenfunction_f(ctx: &RootContext, a: i64, b: i64, p: SpectralPoint) -> Result<Complex64> {
    let (f1, f2) = eigenfunction_factors(ctx, a, b, p)?;
    Ok(f1 * f2)
}

/// `Σ f_{(a,b)}(p) p^{(a,b)}`.
pub fn spectral_decomposition(ctx: &RootContext, p: SpectralPoint) -> Result<CMatrix> {
    let n = ctx.n();
    let mut acc = CMatrix::zeros(n * n, n * n);
    for (a, b) in admissible_pairs(n) {
        acc += projector(ctx, a, b)? * eigenfunction_f(ctx, a, b, p)?;
    }
    Ok(acc)
}

/// Relative residual of the difference-form Yang–Baxter equation
/// `R₁₂(x)R₁₃(xy)R₂₃(y) = R₂₃(y)R₁₃(xy)R₁₂(x)` for any two-parameter family.
pub fn ybe_residual_with<F>(n: usize, r: F, x: SpectralPoint, y: SpectralPoint) -> Result<f64>
where
    F: Fn(SpectralPoint) -> Result<CMatrix>,
{
    let space = TensorSpace::uniform(n, 3);
    let rx = r(x)?;
    let rxy = r(x.mul(&y))?;
    let ry = r(y)?;
    let mut lhs = CMatrix::identity(n * n * n, n * n * n);
    space.apply_left(&ry, &[1, 2], &mut lhs)?;
    space.apply_left(&rxy, &[0, 2], &mut lhs)?;
    space.apply_left(&rx, &[0, 1], &mut lhs)?;
    let mut rhs = CMatrix::identity(n * n * n, n * n * n);
    space.apply_left(&rx, &[0, 1], &mut rhs)?;
    space.apply_left(&rxy, &[0, 2], &mut rhs)?;
    space.apply_left(&ry, &[1, 2], &mut rhs)?;
    Ok(crate::linalg::scaled_residual(&lhs, &rhs))
}

pub fn ybe_residual(ctx: &RootContext, x: SpectralPoint, y: SpectralPoint) -> Result<f64> {
    ybe_residual_with(ctx.n(), |p| rmatrix_dd(ctx, p), x, y)
}

/// `R₁₂(z̃)·R₂₁(z̃⁻¹)` and its best scalar fit `(k, residual)`.
pub fn unitarity_defect(ctx: &RootContext, p: SpectralPoint) -> Result<(Complex64, f64)> {
    let n = ctx.n();
    let perm = permutation_op(n);
    let r = rmatrix_dd(ctx, p)?;
    let r21 = &perm * rmatrix_dd(ctx, p.inverse())? * &perm;
    Ok(crate::linalg::scalar_defect(&(r * r21)))
}

/// Entries of `R_dd` violating `i + j ≡ k + l`, where `R^{kl}_{ij}` is the
/// coefficient of `e_{i,j} ⊗ e_{k,l}`.
pub fn conservation_violations(ctx: &RootContext, r: &CMatrix, tol: f64) -> usize {
    let n = ctx.n();
    let mut count = 0;
    for row in 0..n * n {
        for col in 0..n * n {
            let (i, k) = (row / n, row % n);
            let (j, l) = (col / n, col % n);
            if (i + j) % n != (k + l) % n && r[(row, col)].norm() > tol {
                count += 1;
            }
        }
    }
    count
}

/// `e_{i,j}` shortcut for tests and callers working in labels.
pub fn e(ctx: &RootContext, i: i64, j: i64) -> CMatrix {
    elementary(ctx.n(), i, j).expect("context dimension is positive")
}
