//! Eigenvalue curves of `t⁽³⁾`, the product ansatz and the Bethe equations.

use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

use crate::chain::{Boundary, ChainSpec};
use crate::context::RootContext;
use crate::eigen::{simultaneous_eigenbasis_seeded, CommonEigenbasis};
use crate::error::{Error, Result};
use crate::fz::SpectralPoint;
use crate::linalg::{CMatrix, Complex64, I, ONE};
use crate::poly::{poly_fit_roots, PolyFit};
use crate::sampling::PointSampler;
use crate::transfer::{
    braided_constants, relation_coefficients, relation_points, t2_argument, transfer_t2, transfer_t3, T2Family,
};

/// Bethe-equation acceptance tolerance.
pub const BETHE_TOL: f64 = 1e-6;
/// Fits worse than this are reported as unresolved.
pub const FIT_TOL: f64 = 1e-6;
/// Reconstruction and factorization tolerance.
pub const RECONSTRUCTION_TOL: f64 = 1e-7;
/// Roots smaller than this are exact zeros and carry no equation.
pub const ZERO_ROOT: f64 = 1e-7;
/// Minimum distance from a Bethe-equation pole.
pub const POLE_TOL: f64 = 1e-10;
/// Radius of the residue contour.
pub const CONTOUR_RADIUS: f64 = 1e-4;
const CONTOUR_POINTS: usize = 16;

/// Fixed complementary variables for the fits.
const ANCHORS: [Complex64; 2] = [Complex64::new(0.8, 0.5), Complex64::new(1.1, -0.4)];

/// Per-variable polynomial degree bound of `Λ`.
pub fn degree_bound(spec: &ChainSpec) -> usize {
    let per_site = spec.ctx.half() * spec.sites;
    match spec.boundary {
        Boundary::Open => 2 * per_site,
        _ => per_site,
    }
}

/// A common eigenbasis of the transfer family, read as eigenvalue curves.
#[derive(Debug, Clone)]
pub struct EigenCurves {
    pub spec: ChainSpec,
    pub basis: CommonEigenbasis,
    pub seed: u64,
}

impl EigenCurves {
    pub fn len(&self) -> usize {
        self.basis.vectors.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Rayleigh quotients of `m` on every basis vector.
    pub fn quotients(&self, m: &CMatrix) -> Vec<Complex64> {
        let v = &self.basis.vectors;
        let mv = m * v;
        (0..v.ncols()).map(|k| v.column(k).dotc(&mv.column(k))).collect()
    }

    /// `Λ_k(p)` for every curve.
    pub fn values(&self, p: SpectralPoint) -> Result<Vec<Complex64>> {
        Ok(self.quotients(&transfer_t3(&self.spec, p)?))
    }

    /// Eigenvalues of `t⁽²⁾(z)` on the same vectors.
    pub fn t2_values(&self, z: Complex64, family: T2Family) -> Result<Vec<Complex64>> {
        Ok(self.quotients(&transfer_t2(&self.spec, z, family)?))
    }

    /// Curves at many points; row `i` holds the values at `points[i]`.
    pub fn grid(&self, points: &[SpectralPoint]) -> Result<Vec<Vec<Complex64>>> {
        points.par_iter().map(|&p| self.values(p)).collect()
    }
}

fn has_t2(spec: &ChainSpec) -> bool {
    !matches!(spec.boundary, Boundary::Twisted(_))
}

/// Common eigenvectors of `t⁽³⁾` at seeded points, refined by `t⁽²⁾` where the
/// class has one.
pub fn eigenvalue_curves(spec: &ChainSpec, seed: u64) -> Result<EigenCurves> {
    let mut sampler = PointSampler::new(&spec.ctx, seed);
    let mut family = Vec::new();
    for _ in 0..4 {
        family.push(transfer_t3(spec, sampler.point())?);
    }
    if has_t2(spec) {
        family.push(transfer_t2(spec, sampler.unit(), T2Family::Primary)?);
        family.push(transfer_t2(spec, sampler.unit(), T2Family::Conjugate)?);
    }
    let basis = simultaneous_eigenbasis_seeded(&family, seed)?;
    Ok(EigenCurves {
        spec: spec.clone(),
        basis,
        seed,
    })
}

/// Roots of one factor of the ansatz.
#[derive(Debug, Clone, Serialize)]
pub struct BetheRoots {
    pub family: u8,
    pub degree: usize,
    pub roots: Vec<Complex64>,
    pub constant: Complex64,
    pub fit_residual: f64,
}

impl BetheRoots {
    fn from_fit(family: u8, fit: &PolyFit, ctx: &RootContext) -> Self {
        let iw = I * ctx.w();
        let roots = fit
            .roots
            .iter()
            .map(|&r| match family {
                1 => r / iw,
                _ => (iw * r).conj(),
            })
            .collect();
        BetheRoots {
            family,
            degree: fit.roots.len(),
            roots,
            constant: fit.constant,
            fit_residual: fit.residual,
        }
    }

    /// Zeros of `Λ` in the fitted variable.
    pub fn zeros(&self, ctx: &RootContext) -> Vec<Complex64> {
        let iw = I * ctx.w();
        self.roots
            .iter()
            .map(|&y| match self.family {
                1 => iw * y,
                _ => -I * y.conj() / ctx.w(),
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Constant,
    Ansatz,
    Unresolved,
}

/// Ansatz data of one curve.
#[derive(Debug, Clone, Serialize)]
pub struct CurveFit {
    pub family1: BetheRoots,
    pub family2: BetheRoots,
    pub constant: Complex64,
    /// Largest relative mismatch of the factored form at fresh points.
    pub reconstruction: f64,
    /// Root-set distance between z₁-fits at two fixed z₂.
    pub factorization: f64,
}

impl CurveFit {
    pub fn eval(&self, ctx: &RootContext, p: SpectralPoint) -> Complex64 {
        let a = self.family1.zeros(ctx).iter().fold(ONE, |acc, &r| acc * (p.z1 - r));
        let b = self.family2.zeros(ctx).iter().fold(ONE, |acc, &r| acc * (p.z2 - r));
        self.constant * a * b
    }

    pub fn classify(&self) -> Classification {
        let fit = self.family1.fit_residual.max(self.family2.fit_residual);
        if fit > FIT_TOL || self.reconstruction > RECONSTRUCTION_TOL {
            Classification::Unresolved
        } else if self.family1.degree == 0 && self.family2.degree == 0 {
            Classification::Constant
        } else {
            Classification::Ansatz
        }
    }
}

/// Fit nodes: `K` points on the unit circle, rotated off the real axis.
pub fn fit_nodes(degree: usize) -> Vec<Complex64> {
    let k = degree + 6;
    (0..k)
        .map(|j| Complex64::from_polar(1.0, 2.0 * PI * (j as f64 + 0.3) / k as f64))
        .collect()
}

/// Sample layout shared by every curve of a chain.
#[derive(Debug, Clone)]
pub struct FitPlan {
    pub max_degree: usize,
    pub nodes: Vec<Complex64>,
    pub checks: Vec<SpectralPoint>,
}

impl FitPlan {
    pub fn new(spec: &ChainSpec, seed: u64) -> Self {
        let max_degree = degree_bound(spec) + 2;
        let mut sampler = PointSampler::new(&spec.ctx, seed ^ 0x5eed);
        FitPlan {
            max_degree,
            nodes: fit_nodes(max_degree),
            checks: (0..5).map(|_| sampler.point()).collect(),
        }
    }

    /// z₁ sweep at anchor 0, z₁ sweep at anchor 1, z₂ sweep at anchor 0,
    /// then the check points.
    pub fn points(&self) -> Vec<SpectralPoint> {
        let mut pts = Vec::new();
        for anchor in ANCHORS {
            pts.extend(self.nodes.iter().map(|&z| SpectralPoint { z1: z, z2: anchor }));
        }
        pts.extend(self.nodes.iter().map(|&z| SpectralPoint { z1: ANCHORS[0], z2: z }));
        pts.extend(self.checks.iter().copied());
        pts
    }
}

/// Fits the ansatz to one curve given its values on [`FitPlan::points`].
pub fn fit_ansatz(ctx: &RootContext, plan: &FitPlan, values: &[Complex64]) -> Result<CurveFit> {
    let k = plan.nodes.len();
    if values.len() != 3 * k + plan.checks.len() {
        return Err(Error::InsufficientSamples("value count does not match the fit plan".into()));
    }
    let sweep = |offset: usize| -> Vec<(Complex64, Complex64)> {
        plan.nodes.iter().copied().zip(values[offset..offset + k].iter().copied()).collect()
    };
    let fit1 = poly_fit_roots(&sweep(0), plan.max_degree)?;
    let fit1b = poly_fit_roots(&sweep(k), plan.max_degree)?;
    let fit2 = poly_fit_roots(&sweep(2 * k), plan.max_degree)?;

    let family1 = BetheRoots::from_fit(1, &fit1, ctx);
    let family2 = BetheRoots::from_fit(2, &fit2, ctx);
    // Λ(z₁, a) = c ∏(z₁ − r₁) ∏(a − r₂)
    let at_anchor = family2.zeros(ctx).iter().fold(ONE, |acc, &r| acc * (ANCHORS[0] - r));
    let constant = if at_anchor.norm() > 0.0 { fit1.constant / at_anchor } else { fit1.constant };
    let mut fit = CurveFit {
        family1,
        family2,
        constant,
        reconstruction: 0.0,
        factorization: root_set_distance(&fit1.roots, &fit1b.roots),
    };
    let scale = values.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1.0);
    fit.reconstruction = plan
        .checks
        .iter()
        .zip(&values[3 * k..])
        .map(|(&p, &v)| (fit.eval(ctx, p) - v).norm() / scale)
        .fold(0.0, f64::max);
    Ok(fit)
}

/// Greedy matching distance between two root multisets, relative to the
/// root size; infinite if the counts differ.
pub fn root_set_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut free: Vec<Complex64> = b.to_vec();
    let mut worst: f64 = 0.0;
    for &r in a {
        let (idx, d) = free
            .iter()
            .enumerate()
            .map(|(i, &s)| (i, (r - s).norm() / r.norm().max(1.0)))
            .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
        worst = worst.max(d);
        free.swap_remove(idx);
    }
    worst
}

/// Left side of the Bethe equation for root `y` in the given class and family.
pub fn bethe_lhs(ctx: &RootContext, sites: usize, boundary: &Boundary, family: u8, y: Complex64) -> Result<Complex64> {
    let w = ctx.w();
    let den = ONE - I * w * y;
    if den.norm() < POLE_TOL {
        return Err(Error::SingularRoots(format!("root {y} sits on the left-side pole")));
    }
    let base = (ONE + I * y / w) / den;
    let sign = if sites % 2 == 0 { -1.0 } else { 1.0 };
    let l = sites as u32;
    Ok(match boundary {
        Boundary::Periodic | Boundary::Twisted(_) => base.powu(l) * sign,
        Boundary::Open => {
            let y2 = y * y;
            let (w2, wm2) = (ctx.w_pow(2), ctx.w_pow(-2));
            let d1 = ONE - wm2 * y2;
            let d2 = ONE + w2 * y2;
            if d1.norm() < POLE_TOL || d2.norm() < POLE_TOL {
                return Err(Error::SingularRoots(format!("root {y} sits on an open-chain pole")));
            }
            (ONE - w2 * y2) / d1 * (ONE + wm2 * y2) / d2 * base.powu(2 * l) * sign
        }
        Boundary::Braided(z0) => {
            let (inf1, inf2) = z0.at_infinity();
            let (b, c) = braided_constants(ctx, if family == 1 { inf1 } else { inf2 });
            (b / c).powu(l) * base.powu(l) * sign
        }
    })
}

/// Right side `∏_k (y_k − w²y_j)/(y_k − w⁻²y_j)`, `k` running over all roots.
pub fn bethe_rhs(ctx: &RootContext, roots: &[Complex64], j: usize) -> Result<Complex64> {
    let (w2, wm2) = (ctx.w_pow(2), ctx.w_pow(-2));
    let yj = roots[j];
    let mut out = ONE;
    for &yk in roots {
        let den = yk - wm2 * yj;
        if den.norm() < POLE_TOL {
            return Err(Error::SingularRoots(format!("roots {yk} and {yj} collide with a pole")));
        }
        out *= (yk - w2 * yj) / den;
    }
    Ok(out)
}

/// `max_j |LHS_j − RHS_j| / (|LHS_j| + |RHS_j| + 1)` over nonzero roots.
pub fn bethe_residual(ctx: &RootContext, sites: usize, roots: &BetheRoots, boundary: &Boundary) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (j, &y) in roots.roots.iter().enumerate() {
        if y.norm() < ZERO_ROOT {
            continue;
        }
        let lhs = bethe_lhs(ctx, sites, boundary, roots.family, y)?;
        let rhs = bethe_rhs(ctx, &roots.roots, j)?;
        worst = worst.max((lhs - rhs).norm() / (lhs.norm() + rhs.norm() + 1.0));
    }
    Ok(worst)
}

/// Family-2 residual in the periodic form.
pub fn second_family_periodic(ctx: &RootContext, sites: usize, roots: &BetheRoots) -> Result<f64> {
    if roots.family != 2 {
        return Err(Error::PreconditionViolation("expected family-2 roots".into()));
    }
    bethe_residual(ctx, sites, roots, &Boundary::Periodic)
}

/// Residue form of the z₁ relation around each nonzero zero of `Λ`: the
/// two residues of `A(z)Λ(w⁻²z)/Λ(z)` and `B(z)Λ(w²z)/Λ(z)` must cancel.
pub fn residue_self_check(curves: &EigenCurves, k: usize, fit: &CurveFit) -> Result<f64> {
    let spec = &curves.spec;
    let ctx = &spec.ctx;
    let mut worst: f64 = 0.0;
    for (zero, y) in fit.family1.zeros(ctx).into_iter().zip(&fit.family1.roots) {
        if y.norm() < ZERO_ROOT {
            continue;
        }
        let mut res_a = Complex64::new(0.0, 0.0);
        let mut res_b = Complex64::new(0.0, 0.0);
        for t in 0..CONTOUR_POINTS {
            let offset = Complex64::from_polar(CONTOUR_RADIUS, 2.0 * PI * (t as f64 + 0.5) / CONTOUR_POINTS as f64);
            let p = SpectralPoint::new(zero + offset, ANCHORS[0])?;
            let (a, b) = relation_coefficients(spec, p, T2Family::Primary)?;
            let (pa, pb) = relation_points(ctx, p, T2Family::Primary)?;
            let lam = curves.values(p)?[k];
            res_a += a * curves.values(pa)?[k] / lam * offset;
            res_b += b * curves.values(pb)?[k] / lam * offset;
        }
        let scale = res_a.norm() + res_b.norm();
        if scale > 1e-300 {
            worst = worst.max((res_a + res_b).norm() / scale);
        }
    }
    Ok(worst)
}

/// Functional relations evaluated on one curve with the `t⁽²⁾` eigenvalue
/// from the same vector.
pub fn curve_functional_residual(curves: &EigenCurves, points: &[SpectralPoint]) -> Result<Vec<f64>> {
    let spec = &curves.spec;
    let mut worst = vec![0.0f64; curves.len()];
    if !has_t2(spec) {
        return Ok(worst);
    }
    for &p in points {
        let lam = curves.values(p)?;
        for family in [T2Family::Primary, T2Family::Conjugate] {
            let small = curves.t2_values(t2_argument(p, family), family)?;
            let (a, b) = relation_coefficients(spec, p, family)?;
            let (pa, pb) = relation_points(&spec.ctx, p, family)?;
            let (la, lb) = (curves.values(pa)?, curves.values(pb)?);
            for k in 0..curves.len() {
                let lhs = small[k] * lam[k];
                let rhs = a * la[k] + b * lb[k];
                let r = (lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(1.0);
                worst[k] = worst[k].max(r);
            }
        }
    }
    Ok(worst)
}

/// One row of the Bethe report.
#[derive(Debug, Clone, Serialize)]
pub struct CurveReport {
    pub index: usize,
    /// `Λ` at the reference point `(1, 1)`.
    pub eigenvalue: Complex64,
    pub classification: Classification,
    pub d1: usize,
    pub d2: usize,
    pub fit: CurveFit,
    pub bethe1: Option<f64>,
    pub bethe2: Option<f64>,
    pub functional: f64,
    pub residue: Option<f64>,
    pub unresolved_cluster: bool,
    pub note: Option<String>,
}

impl CurveReport {
    pub fn pass(&self, tol: f64) -> bool {
        match self.classification {
            Classification::Unresolved => true,
            _ => self.bethe1.is_some_and(|r| r < tol) && self.bethe2.is_some_and(|r| r < tol),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BetheSummary {
    pub curves: usize,
    pub constant: usize,
    pub ansatz_pass: usize,
    pub ansatz_fail: usize,
    pub unresolved: usize,
    pub degree_bound: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BetheReport {
    pub class: String,
    pub n: usize,
    pub sites: usize,
    pub seed: u64,
    pub tol: f64,
    pub summary: BetheSummary,
    pub curves: Vec<CurveReport>,
    pub pass: bool,
}

/// Full sweep: diagonalize, fit every curve, evaluate both Bethe families,
/// the functional relations and (periodic only) the residue self-check.
pub fn bethe_sweep(spec: &ChainSpec, seed: u64, tol: f64) -> Result<BetheReport> {
    let curves = eigenvalue_curves(spec, seed)?;
    let plan = FitPlan::new(spec, seed);
    let grid = curves.grid(&plan.points())?;
    let reference = curves.values(SpectralPoint::one())?;
    let functional = curve_functional_residual(&curves, &plan.checks[..2])?;
    let ctx = &spec.ctx;

    let rows: Vec<Result<CurveReport>> = (0..curves.len())
        .into_par_iter()
        .map(|k| {
            let values: Vec<Complex64> = grid.iter().map(|row| row[k]).collect();
            let fit = fit_ansatz(ctx, &plan, &values)?;
            let classification = fit.classify();
            let mut note = None;
            let residual = |roots: &BetheRoots, note: &mut Option<String>| match bethe_residual(
                ctx,
                spec.sites,
                roots,
                &spec.boundary,
            ) {
                Ok(r) => Some(r),
                Err(e) => {
                    *note = Some(e.to_string());
                    None
                }
            };
            let (bethe1, bethe2) = match classification {
                Classification::Unresolved => (None, None),
                _ => (residual(&fit.family1, &mut note), residual(&fit.family2, &mut note)),
            };
            let residue = match (spec.boundary, classification) {
                (Boundary::Periodic, Classification::Ansatz) => Some(residue_self_check(&curves, k, &fit)?),
                _ => None,
            };
            Ok(CurveReport {
                index: k,
                eigenvalue: reference[k],
                classification,
                d1: fit.family1.degree,
                d2: fit.family2.degree,
                bethe1,
                bethe2,
                functional: functional[k],
                residue,
                unresolved_cluster: curves.basis.unresolved.contains(&k),
                note,
                fit,
            })
        })
        .collect();
    let curves_out = rows.into_iter().collect::<Result<Vec<_>>>()?;

    let count = |c: Classification| curves_out.iter().filter(|r| r.classification == c).count();
    let ansatz_pass = curves_out
        .iter()
        .filter(|r| r.classification == Classification::Ansatz && r.pass(tol))
        .count();
    let summary = BetheSummary {
        curves: curves_out.len(),
        constant: count(Classification::Constant),
        ansatz_pass,
        ansatz_fail: count(Classification::Ansatz) - ansatz_pass,
        unresolved: count(Classification::Unresolved),
        degree_bound: degree_bound(spec),
    };
    let pass = curves_out.iter().all(|r| r.pass(tol));
    Ok(BetheReport {
        class: crate::transfer::class_label(spec),
        n: spec.n(),
        sites: spec.sites,
        seed,
        tol,
        summary,
        curves: curves_out,
        pass,
    })
}

/// `(w⁻²z₁+1)^L + (z₁−1)^L`: the `t⁽²⁾(iz₁)` eigenvalue forced by a constant
/// `t⁽³⁾` curve in the periodic relation.
pub fn constant_curve_t2_value(ctx: &RootContext, sites: usize, z1: Complex64) -> Complex64 {
    let l = sites as u32;
    (ctx.w_pow(-2) * z1 + 1.0).powu(l) + (z1 - 1.0).powu(l)
}
