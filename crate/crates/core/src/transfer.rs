//! Six-vertex r-matrix, L-operators, fusion vectors, transfer matrices for
//! every boundary class, and the fusion (functional) relations.

use serde::Serialize;

use crate::chain::{rbar, Boundary, ChainSpec};
use crate::dihedral::rep_g;
use crate::context::RootContext;
use crate::error::{Error, Result};
use crate::fz::{rmatrix_normalized, SpectralPoint};
use crate::linalg::{
    c64, identity, kron, relative_residual, trace_first, CMatrix, Complex64, TensorSpace, I,
    ONE, ZERO,
};

/// Acceptance tolerance for the functional relations.
pub const FUSION_TOL: f64 = 1e-7;

/// Zero-field six-vertex r-matrix on `C² ⊗ C²`.
pub fn sixvertex_r(ctx: &RootContext, z: Complex64) -> Result<CMatrix> {
    if z == ZERO {
        return Err(Error::SingularParameter("six-vertex r needs z ≠ 0".into()));
    }
    let (w2, wm2) = (ctx.w_pow(2), ctx.w_pow(-2));
    let a = w2 / z - wm2 * z;
    let b = z.inv() - z;
    let c = w2 - wm2;
    let mut r = CMatrix::zeros(4, 4);
    r[(0, 0)] = a;
    r[(3, 3)] = a;
    r[(1, 1)] = b;
    r[(2, 2)] = b;
    r[(1, 2)] = c;
    r[(2, 1)] = c;
    Ok(r)
}

/// `lim_{z→0} z·r(z) = diag(w², 1, 1, w²)`.
pub fn sixvertex_r_limit(ctx: &RootContext) -> CMatrix {
    let mut r = CMatrix::zeros(4, 4);
    r[(0, 0)] = ctx.w_pow(2);
    r[(1, 1)] = ONE;
    r[(2, 2)] = ONE;
    r[(3, 3)] = ctx.w_pow(2);
    r
}

/// An operator on `C^{aux} ⊗ Cⁿ`, auxiliary factor first.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxOperator {
    pub aux_dim: usize,
    pub matrix: CMatrix,
}

impl AuxOperator {
    pub fn new(aux_dim: usize, matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() % aux_dim != 0 || !matrix.is_square() {
            return Err(Error::InvalidDimension("operator does not factor over the auxiliary space".into()));
        }
        Ok(AuxOperator { aux_dim, matrix })
    }

    /// Coefficient-wise conjugate.
    pub fn conj(&self) -> Self {
        AuxOperator {
            aux_dim: self.aux_dim,
            matrix: self.matrix.map(|z| z.conj()),
        }
    }
}

fn e2(i: usize, j: usize) -> CMatrix {
    let mut m = CMatrix::zeros(2, 2);
    m[(i, j)] = ONE;
    m
}

fn en(ctx: &RootContext, i: i64, j: i64) -> CMatrix {
    let mut m = CMatrix::zeros(ctx.n(), ctx.n());
    m[(ctx.idx(i), ctx.idx(j))] = ONE;
    m
}

/// The two pieces of `L(z) = A + z·B`.
fn l_parts(ctx: &RootContext) -> (CMatrix, CMatrix) {
    let n = ctx.n();
    let mut a = CMatrix::zeros(2 * n, 2 * n);
    let mut b = CMatrix::zeros(2 * n, 2 * n);
    let coef = -I * ctx.w_pow(-1);
    for k in 0..n as i64 {
        let off = e2(0, 1) * ctx.w_pow(2 * k) + e2(1, 0) * ctx.w_pow(-2 * k);
        a += kron(&off, &en(ctx, k, k));
        b += (kron(&e2(0, 0), &en(ctx, k - 1, k)) + kron(&e2(1, 1), &en(ctx, k + 1, k))) * coef;
    }
    (a, b)
}

/// The two pieces of `L′(z) = A′ + z·B′`.
fn l_prime_parts(ctx: &RootContext) -> (CMatrix, CMatrix) {
    let n = ctx.n();
    let mut a = CMatrix::zeros(2 * n, 2 * n);
    let mut b = CMatrix::zeros(2 * n, 2 * n);
    let coef = -I * ctx.w_pow(-1);
    for k in 0..n as i64 {
        a += kron(&e2(0, 0), &en(ctx, k + 1, k)) + kron(&e2(1, 1), &en(ctx, k - 1, k));
        let off = e2(0, 1) * ctx.w_pow(2 * k) + e2(1, 0) * ctx.w_pow(-2 * k);
        b += kron(&off, &en(ctx, k, k)) * coef;
    }
    (a, b)
}

pub fn l_op(ctx: &RootContext, z: Complex64) -> AuxOperator {
    let (a, b) = l_parts(ctx);
    AuxOperator {
        aux_dim: 2,
        matrix: a + b * z,
    }
}

pub fn l_op_prime(ctx: &RootContext, z: Complex64) -> AuxOperator {
    let (a, b) = l_prime_parts(ctx);
    AuxOperator {
        aux_dim: 2,
        matrix: a + b * z,
    }
}

/// `L*(z)`: the L-operator with conjugated coefficients, still linear in `z`.
pub fn l_op_conj(ctx: &RootContext, z: Complex64) -> AuxOperator {
    l_op(ctx, z.conj()).conj()
}

/// `L′*(z)`.
pub fn l_op_prime_conj(ctx: &RootContext, z: Complex64) -> AuxOperator {
    l_op_prime(ctx, z.conj()).conj()
}

/// `L̄(z₀) = lim_{x→z₀} L′(x)/(1 + x)`: `L′(0)` at zero, the linear
/// coefficient of `L′` at infinity.
pub fn l_bar(ctx: &RootContext, at_infinity: bool) -> AuxOperator {
    let (a, b) = l_prime_parts(ctx);
    AuxOperator {
        aux_dim: 2,
        matrix: if at_infinity { b } else { a },
    }
}

/// Fusion bases on `C² ⊗ Cⁿ`: columns `v⁺` then `v⁻` (for `V`) and `u⁺` then
/// `u⁻` (for `U`), with `v^±_k` in slot `(k + (n−1)/2) mod n` of its half.
pub fn fusion_vectors(ctx: &RootContext) -> (CMatrix, CMatrix) {
    let n = ctx.n();
    let m = ctx.half() as i64;
    let s = c64(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut v = CMatrix::zeros(2 * n, 2 * n);
    let mut u = CMatrix::zeros(2 * n, 2 * n);
    for k in 1..=n as i64 {
        let slot = ctx.idx(k + m);
        let up = ctx.w_pow(k + m) * s;
        let down = ctx.w_pow(-k - m) * s;
        for (half, sign) in [(0usize, 1.0), (1usize, -1.0)] {
            let col = half * n + slot;
            v[(ctx.idx(k), col)] += up;
            v[(n + ctx.idx(k - 1), col)] += down * sign;
            u[(ctx.idx(k - 1), col)] += up;
            u[(n + ctx.idx(k), col)] += down * sign;
        }
    }
    (v, u)
}

/// Residual of one matrix identity at one point.
#[derive(Debug, Clone, Serialize)]
pub struct FusionCheck {
    pub relation: String,
    pub point: SpectralPoint,
    pub residual: f64,
    pub pass: bool,
}

/// Residuals `‖LHS − RHS‖_F / max(‖LHS‖_F, 1)` collected per relation.
#[derive(Debug, Clone, Serialize)]
pub struct FusionReport {
    pub relation: String,
    pub tol: f64,
    pub checks: Vec<FusionCheck>,
    pub pass: bool,
}

impl FusionReport {
    pub fn new(relation: impl Into<String>, tol: f64) -> Self {
        FusionReport {
            relation: relation.into(),
            tol,
            checks: vec![],
            pass: true,
        }
    }

    pub fn push(&mut self, relation: impl Into<String>, point: SpectralPoint, residual: f64) {
        let pass = residual < self.tol;
        self.pass &= pass;
        self.checks.push(FusionCheck {
            relation: relation.into(),
            point,
            residual,
            pass,
        });
    }

    pub fn merge(&mut self, other: FusionReport) {
        self.pass &= other.pass;
        self.checks.extend(other.checks);
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }
}

/// `V₁₂⁻¹ L₁₃(iz₁) R₂₃(z̃) V₁₂` split into its 2×2 block form; checks the
/// vanishing upper-right block and both diagonal blocks.
pub fn block_triangular_check(ctx: &RootContext, p: SpectralPoint, tol: f64) -> Result<FusionReport> {
    let n = ctx.n();
    let n2 = n * n;
    let (v, _) = fusion_vectors(ctx);
    let v_inv = v.adjoint();
    let space = TensorSpace::new(vec![2, n, n]);
    let mut m = kron(&v, &identity(n));
    space.apply_left(&rmatrix_normalized(ctx, p), &[1, 2], &mut m)?;
    space.apply_left(&l_op(ctx, I * p.z1).matrix, &[0, 2], &mut m)?;
    let m = kron(&v_inv, &identity(n)) * m;

    let upper_right = m.view((0, n2), (n2, n2)).into_owned();
    let top_left = m.view((0, 0), (n2, n2)).into_owned();
    let bottom_right = m.view((n2, n2), (n2, n2)).into_owned();
    let (wm2, w2) = (ctx.w_pow(-2), ctx.w_pow(2));
    let expect_tl = rmatrix_normalized(ctx, SpectralPoint::new(wm2 * p.z1, p.z2)?) * (wm2 * p.z1 + 1.0);
    let expect_br = rmatrix_normalized(ctx, SpectralPoint::new(w2 * p.z1, p.z2)?) * (p.z1 - 1.0);

    let mut report = FusionReport::new("block-triangular", tol);
    report.push("upper-right block", p, upper_right.norm() / m.norm().max(1.0));
    report.push("top-left block", p, relative_residual(&top_left, &expect_tl));
    report.push("bottom-right block", p, relative_residual(&bottom_right, &expect_br));
    Ok(report)
}

/// Which factor slot an operator occupies in a monodromy product.
#[derive(Debug, Clone, Copy)]
enum Slot {
    /// `X_{0j}`: auxiliary first.
    AuxSite(usize),
    /// `X_{j0}`: site first.
    SiteAux(usize),
}

/// `tr₀[X₁ X₂ ⋯]` on `C^{aux} ⊗ (Cⁿ)^{⊗L}` for factors listed left to right.
fn traced_product(aux_dim: usize, n: usize, sites: usize, factors: &[(&CMatrix, Slot)]) -> Result<CMatrix> {
    let mut dims = vec![aux_dim];
    dims.extend(std::iter::repeat_n(n, sites));
    let space = TensorSpace::new(dims);
    let mut m = identity(space.dim());
    for (op, slot) in factors.iter().rev() {
        match *slot {
            Slot::AuxSite(j) => space.apply_left(op, &[0, j + 1], &mut m)?,
            Slot::SiteAux(j) => space.apply_left(op, &[j + 1, 0], &mut m)?,
        }
    }
    Ok(trace_first(&m, aux_dim))
}

/// `t⁽³⁾(z̃)` for the chain's boundary class, built from the normalized
/// R-matrix.
pub fn transfer_t3(spec: &ChainSpec, p: SpectralPoint) -> Result<CMatrix> {
    let r = rmatrix_normalized(&spec.ctx, p);
    transfer_t3_with(spec, &r)
}

/// As [`transfer_t3`] with an explicit two-site R-matrix.
pub fn transfer_t3_with(spec: &ChainSpec, r: &CMatrix) -> Result<CMatrix> {
    let n = spec.n();
    let l = spec.sites;
    // R_{0L} ⋯ R_{01}
    let mut factors: Vec<(&CMatrix, Slot)> = (0..l).rev().map(|j| (r, Slot::AuxSite(j))).collect();
    let k;
    let rb;
    match spec.boundary {
        Boundary::Periodic => {}
        Boundary::Twisted(g) => {
            k = kron(&rep_g(&spec.ctx, &g), &identity(n));
            // K₀ acts on the auxiliary space only; pair it with site 1 as K⊗I
            factors.insert(0, (&k, Slot::AuxSite(0)));
        }
        Boundary::Open => {
            // R_{10} ⋯ R_{L0}
            factors.extend((0..l).map(|j| (r, Slot::SiteAux(j))));
        }
        Boundary::Braided(z0) => {
            rb = rbar(&spec.ctx, z0);
            factors.extend((0..l).map(|j| (&rb, Slot::SiteAux(j))));
        }
    }
    traced_product(n, n, l, &factors)
}

/// The auxiliary 2-dimensional transfer family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum T2Family {
    /// Built from `L` (and `L′`, `L̄(z₀₁)`).
    Primary,
    /// Built from the conjugate operators (and `L̄*(z₀₂)`).
    Conjugate,
}

/// `t⁽²⁾(z)` for the chain's boundary class.
pub fn transfer_t2(spec: &ChainSpec, z: Complex64, family: T2Family) -> Result<CMatrix> {
    let ctx = &spec.ctx;
    let n = spec.n();
    let l = spec.sites;
    let conj = family == T2Family::Conjugate;
    let lz = if conj { l_op_conj(ctx, z) } else { l_op(ctx, z) }.matrix;
    let mut factors: Vec<(&CMatrix, Slot)> = (0..l).rev().map(|j| (&lz, Slot::AuxSite(j))).collect();
    let tail;
    match spec.boundary {
        Boundary::Periodic => {}
        Boundary::Twisted(_) => {
            return Err(Error::NotApplicable(
                "the two-dimensional auxiliary family is not defined for twisted chains".into(),
            ))
        }
        Boundary::Open => {
            tail = if conj { l_op_prime_conj(ctx, z) } else { l_op_prime(ctx, z) }.matrix;
            factors.extend((0..l).map(|j| (&tail, Slot::AuxSite(j))));
        }
        Boundary::Braided(z0) => {
            let (inf1, inf2) = z0.at_infinity();
            tail = if conj {
                l_bar(ctx, inf2).conj()
            } else {
                l_bar(ctx, inf1)
            }
            .matrix;
            factors.extend((0..l).map(|j| (&tail, Slot::AuxSite(j))));
        }
    }
    traced_product(2, n, l, &factors)
}

/// Constants `(b, c)` of the braided relations at one side of `z̃₀`.
pub fn braided_constants(ctx: &RootContext, at_infinity: bool) -> (Complex64, Complex64) {
    if at_infinity {
        (-I * ctx.w_pow(-1), I * ctx.w_pow(-1))
    } else {
        (ONE, ONE)
    }
}

fn open_f(ctx: &RootContext, z: Complex64, l: usize) -> Result<Complex64> {
    let (w2, wm2) = (ctx.w_pow(2), ctx.w_pow(-2));
    let z2 = z * z;
    let den = ONE - z2 * z2;
    if den.norm() < 1e-9 {
        return Err(Error::SingularParameter("open coefficient at z⁴ = 1".into()));
    }
    Ok((ONE + w2 * z2) * (ONE - wm2 * z2) / den * (ctx.w_pow(-1) * z + 1.0).powu(2 * l as u32))
}

fn open_g(ctx: &RootContext, z: Complex64, l: usize) -> Result<Complex64> {
    let (w2, wm2) = (ctx.w_pow(2), ctx.w_pow(-2));
    let z2 = z * z;
    let den = ONE - z2 * z2;
    if den.norm() < 1e-9 {
        return Err(Error::SingularParameter("open coefficient at z⁴ = 1".into()));
    }
    let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
    Ok((ONE - w2 * z2) * (ONE + wm2 * z2) / den * (ctx.w_pow(1) * z - 1.0).powu(2 * l as u32) * sign)
}

/// Coefficients `(A, B)` of a functional relation in the shifted variable.
pub fn relation_coefficients(spec: &ChainSpec, p: SpectralPoint, family: T2Family) -> Result<(Complex64, Complex64)> {
    let ctx = &spec.ctx;
    let l = spec.sites as u32;
    let (wm1, wm2, w2) = (ctx.w_pow(-1), ctx.w_pow(-2), ctx.w_pow(2));
    Ok(match (spec.boundary, family) {
        (Boundary::Periodic, T2Family::Primary) => ((wm2 * p.z1 + 1.0).powu(l), (p.z1 - 1.0).powu(l)),
        (Boundary::Periodic, T2Family::Conjugate) => ((w2 * p.z2 + 1.0).powu(l), (p.z2 - 1.0).powu(l)),
        (Boundary::Open, T2Family::Primary) => (
            open_f(ctx, wm1 * p.z1, spec.sites)?,
            open_g(ctx, wm1 * p.z1, spec.sites)?,
        ),
        (Boundary::Open, T2Family::Conjugate) => {
            // conjugate of the primary relation with z₁ ↦ z₂*
            let arg = (ctx.w_pow(1) * p.z2).conj();
            (
                open_f(ctx, arg, spec.sites)?.conj(),
                open_g(ctx, arg, spec.sites)?.conj(),
            )
        }
        (Boundary::Braided(z0), T2Family::Primary) => {
            let (b, c) = braided_constants(ctx, z0.at_infinity().0);
            ((b * (wm2 * p.z1 + 1.0)).powu(l), (c * (p.z1 - 1.0)).powu(l))
        }
        (Boundary::Braided(z0), T2Family::Conjugate) => {
            let (b, c) = braided_constants(ctx, z0.at_infinity().1);
            ((b.conj() * (w2 * p.z2 + 1.0)).powu(l), (c.conj() * (p.z2 - 1.0)).powu(l))
        }
        (Boundary::Twisted(_), _) => {
            return Err(Error::NotApplicable("no functional relation for twisted chains".into()))
        }
    })
}

/// Shifted points `(p_A, p_B)` paired with the coefficients.
pub fn relation_points(ctx: &RootContext, p: SpectralPoint, family: T2Family) -> Result<(SpectralPoint, SpectralPoint)> {
    let (w2, wm2) = (ctx.w_pow(2), ctx.w_pow(-2));
    Ok(match family {
        T2Family::Primary => (
            SpectralPoint::new(wm2 * p.z1, p.z2)?,
            SpectralPoint::new(w2 * p.z1, p.z2)?,
        ),
        T2Family::Conjugate => (
            SpectralPoint::new(p.z1, w2 * p.z2)?,
            SpectralPoint::new(p.z1, wm2 * p.z2)?,
        ),
    })
}

/// Argument of `t⁽²⁾` in each relation: `iz₁` or `−iz₂`.
pub fn t2_argument(p: SpectralPoint, family: T2Family) -> Complex64 {
    match family {
        T2Family::Primary => I * p.z1,
        T2Family::Conjugate => -I * p.z2,
    }
}

/// The two sides of one functional relation at `p`.
pub fn functional_relation_sides(spec: &ChainSpec, p: SpectralPoint, family: T2Family) -> Result<(CMatrix, CMatrix)> {
    let (a, b) = relation_coefficients(spec, p, family)?;
    let (pa, pb) = relation_points(&spec.ctx, p, family)?;
    let lhs = transfer_t2(spec, t2_argument(p, family), family)? * transfer_t3(spec, p)?;
    let rhs = transfer_t3(spec, pa)? * a + transfer_t3(spec, pb)? * b;
    Ok((lhs, rhs))
}

/// Scalar form `λ(arg)Λ(p) − A·Λ(p_A) − B·Λ(p_B)` for eigenvalue curves.
pub fn functional_relation_scalar(
    spec: &ChainSpec,
    p: SpectralPoint,
    family: T2Family,
    small: Complex64,
    big: impl Fn(SpectralPoint) -> Complex64,
) -> Result<(Complex64, Complex64)> {
    let (a, b) = relation_coefficients(spec, p, family)?;
    let (pa, pb) = relation_points(&spec.ctx, p, family)?;
    Ok((small * big(p), a * big(pa) + b * big(pb)))
}

/// Both functional relations of the chain's class at `p`.
pub fn fusion_residual(spec: &ChainSpec, p: SpectralPoint, tol: f64) -> Result<FusionReport> {
    let mut report = FusionReport::new(format!("fusion/{}", class_label(spec)), tol);
    for family in [T2Family::Primary, T2Family::Conjugate] {
        let (lhs, rhs) = functional_relation_sides(spec, p, family)?;
        let name = match family {
            T2Family::Primary => "z1 relation",
            T2Family::Conjugate => "z2 relation",
        };
        report.push(name, p, relative_residual(&lhs, &rhs));
    }
    Ok(report)
}

/// Residual of the periodic-form relation for a twisted `t⁽³⁾` with an
/// undressed `t⁽²⁾`; informational only.
pub fn twisted_fusion_exploratory(spec: &ChainSpec, p: SpectralPoint) -> Result<f64> {
    let periodic = ChainSpec {
        boundary: Boundary::Periodic,
        ..spec.clone()
    };
    let (a, b) = relation_coefficients(&periodic, p, T2Family::Primary)?;
    let (pa, pb) = relation_points(&spec.ctx, p, T2Family::Primary)?;
    let lhs = transfer_t2(&periodic, I * p.z1, T2Family::Primary)? * transfer_t3(spec, p)?;
    let rhs = transfer_t3(spec, pa)? * a + transfer_t3(spec, pb)? * b;
    Ok(relative_residual(&lhs, &rhs))
}

pub fn class_label(spec: &ChainSpec) -> String {
    match spec.boundary {
        Boundary::Twisted(g) => format!("twisted({g})"),
        Boundary::Braided(z) => format!("braided({z})"),
        b => b.name().to_string(),
    }
}

/// Residuals of the four Yang–Baxter-like relations between r, L, L* and
/// R at the points `x`, `y`.
pub fn yang_baxter_like_residuals(ctx: &RootContext, x: SpectralPoint, y: SpectralPoint) -> Result<[f64; 4]> {
    let n = ctx.n();
    // 1: r₁₂(x)L₁₃(xy)L₂₃(y) on C²⊗C²⊗Cⁿ
    let s1 = TensorSpace::new(vec![2, 2, n]);
    let rel1 = {
        let r = sixvertex_r(ctx, x.z1)?;
        let lxy = l_op(ctx, x.z1 * y.z1).matrix;
        let ly = l_op(ctx, y.z1).matrix;
        sandwich(&s1, &[(&r, &[0, 1]), (&lxy, &[0, 2]), (&ly, &[1, 2])])?
    };
    // 2: [lim z r₁₂(z)] L₁₃(x) L*₂₃(y)
    let rel2 = {
        let r0 = sixvertex_r_limit(ctx);
        let lx = l_op(ctx, x.z1).matrix;
        let ly = l_op_conj(ctx, y.z2).matrix;
        sandwich(&s1, &[(&r0, &[0, 1]), (&lx, &[0, 2]), (&ly, &[1, 2])])?
    };
    // 3, 4: L₁₂(x₁)L₁₃(x₁y₁)R₂₃(ỹ) on C²⊗Cⁿ⊗Cⁿ
    let s3 = TensorSpace::new(vec![2, n, n]);
    let ry = rmatrix_normalized(ctx, y);
    let rel3 = {
        let lx = l_op(ctx, x.z1).matrix;
        let lxy = l_op(ctx, x.z1 * y.z1).matrix;
        sandwich(&s3, &[(&lx, &[0, 1]), (&lxy, &[0, 2]), (&ry, &[1, 2])])?
    };
    let rel4 = {
        let lx = l_op_conj(ctx, x.z2).matrix;
        let lxy = l_op_conj(ctx, x.z2 * y.z2).matrix;
        sandwich(&s3, &[(&lx, &[0, 1]), (&lxy, &[0, 2]), (&ry, &[1, 2])])?
    };
    Ok([rel1, rel2, rel3, rel4])
}

/// `A B C` against `C B A` for three embedded operators.
fn sandwich(space: &TensorSpace, ops: &[(&CMatrix, &[usize]); 3]) -> Result<f64> {
    let d = space.dim();
    let mut lhs = identity(d);
    for (op, sites) in ops.iter().rev() {
        space.apply_left(op, sites, &mut lhs)?;
    }
    let mut rhs = identity(d);
    for (op, sites) in ops.iter() {
        space.apply_left(op, sites, &mut rhs)?;
    }
    Ok(crate::linalg::scaled_residual(&lhs, &rhs))
}

/// `L′(z)·L(z⁻¹)` against the identity: `(scalar, residual)`.
pub fn l_prime_inverse_defect(ctx: &RootContext, z: Complex64) -> (Complex64, f64) {
    let prod = l_op_prime(ctx, z).matrix * l_op(ctx, z.inv()).matrix;
    crate::linalg::scalar_defect(&prod)
}

/// The open-chain `t(1̃)` and its closest scalar: `(scalar, residual)`.
pub fn open_identity_point_defect(spec: &ChainSpec) -> Result<(Complex64, f64)> {
    let t = transfer_t3(spec, SpectralPoint::one())?;
    Ok(crate::linalg::scalar_defect(&t))
}

/// `K⁻ = π(g)` commutes with `R(x̃)` as `R(K⊗K) = (K⊗K)R`.
pub fn twist_intertwining_residual(spec: &ChainSpec, p: SpectralPoint) -> Result<f64> {
    let g = spec
        .boundary
        .twist(spec.n())
        .ok_or_else(|| Error::NotApplicable("no twist element".into()))?;
    let k = rep_g(&spec.ctx, &g);
    let kk = kron(&k, &k);
    let r = rmatrix_normalized(&spec.ctx, p);
    Ok(relative_residual(&(&r * &kk), &(&kk * &r)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{translation_op, BraidPoint};
    use crate::dihedral::DihedralElement;
    use crate::linalg::{commutator_residual, proportionality};
    use crate::sampling::PointSampler;

    fn ctx(n: usize) -> RootContext {
        RootContext::new(n).unwrap()
    }

    fn chain(n: usize, l: usize, b: Boundary) -> ChainSpec {
        ChainSpec::new(ctx(n), l, b, 1.0, -1.0).unwrap()
    }

    fn all_classes() -> Vec<Boundary> {
        let mut v = vec![Boundary::Periodic, Boundary::Open];
        v.extend(BraidPoint::ALL.iter().map(|&z| Boundary::Braided(z)));
        v
    }

    #[test]
    fn sixvertex_limit_matches_scaled_r() {
        let c = ctx(3);
        let z = c64(1e-7, 0.0);
        let r = sixvertex_r(&c, z).unwrap() * z;
        assert!(relative_residual(&r, &sixvertex_r_limit(&c)) < 1e-6);
        assert!(sixvertex_r(&c, ZERO).is_err());
    }

    #[test]
    fn fusion_vectors_are_orthonormal() {
        for n in [3, 5] {
            let (v, u) = fusion_vectors(&ctx(n));
            assert!(relative_residual(&(v.adjoint() * &v), &identity(2 * n)) < 1e-13);
            assert!(relative_residual(&(u.adjoint() * &u), &identity(2 * n)) < 1e-13);
        }
    }

    #[test]
    fn fusion_vectors_diagonalize_l_and_l_prime() {
        for n in [3, 5] {
            let c = ctx(n);
            let (v, u) = fusion_vectors(&c);
            let z = c64(0.37, -1.2);
            let pre = -I * c.w_pow(-1);
            let mut d = CMatrix::zeros(2 * n, 2 * n);
            let mut dp = CMatrix::zeros(2 * n, 2 * n);
            for k in 0..n {
                d[(k, k)] = pre * (z + I);
                d[(n + k, n + k)] = pre * (z - I);
                dp[(k, k)] = -I * (z + I);
                dp[(n + k, n + k)] = I * (z - I);
            }
            let got = u.adjoint() * l_op(&c, z).matrix * &v;
            assert!(relative_residual(&got, &d) < 1e-12, "n={n}");
            let got = v.adjoint() * l_op_prime(&c, z).matrix * &u;
            assert!(relative_residual(&got, &dp) < 1e-12, "n={n}");
        }
    }

    #[test]
    fn l_prime_inverts_l_up_to_scalar() {
        let c = ctx(5);
        let (_, resid) = l_prime_inverse_defect(&c, c64(0.4, 0.9));
        assert!(resid < 1e-12);
    }

    #[test]
    fn l_bar_is_the_limit() {
        let c = ctx(3);
        let small = c64(1e-8, 0.0);
        let approx = l_op_prime(&c, small).matrix / (ONE + small);
        assert!(relative_residual(&approx, &l_bar(&c, false).matrix) < 1e-7);
        let big = c64(1e8, 0.0);
        let approx = l_op_prime(&c, big).matrix / (ONE + big);
        assert!(relative_residual(&approx, &l_bar(&c, true).matrix) < 1e-7);
    }

    #[test]
    fn block_triangular_structure() {
        for n in [3, 5] {
            let c = ctx(n);
            let mut s = PointSampler::new(&c, 11);
            for _ in 0..4 {
                let r = block_triangular_check(&c, s.point(), 1e-10).unwrap();
                assert!(r.pass, "n={n}: {:?}", r.checks);
            }
        }
    }

    #[test]
    fn yang_baxter_like_relations() {
        for n in [3, 5] {
            let c = ctx(n);
            let mut s = PointSampler::new(&c, 5);
            for _ in 0..3 {
                let res = yang_baxter_like_residuals(&c, s.point(), s.point()).unwrap();
                for (k, r) in res.iter().enumerate() {
                    assert!(*r < 1e-10, "n={n} relation {k}: {r}");
                }
            }
        }
    }

    #[test]
    fn transfer_matrices_commute_within_class() {
        let c = ctx(3);
        let mut classes = all_classes();
        classes.push(Boundary::Twisted(DihedralElement::parse(3, "s^1 t^1").unwrap()));
        classes.push(Boundary::Twisted(DihedralElement::parse(3, "s^1").unwrap()));
        for b in classes {
            let spec = chain(3, 3, b);
            let mut s = PointSampler::new(&c, 2);
            let ts: Vec<_> = (0..3).map(|_| transfer_t3(&spec, s.point()).unwrap()).collect();
            for i in 0..3 {
                for j in i + 1..3 {
                    let r = commutator_residual(&ts[i], &ts[j]);
                    assert!(r < 1e-10, "{b:?}: {r}");
                }
            }
        }
    }

    #[test]
    fn t2_commutes_with_t3() {
        let c = ctx(3);
        for b in all_classes() {
            let spec = chain(3, 3, b);
            let mut s = PointSampler::new(&c, 8);
            let t3 = transfer_t3(&spec, s.point()).unwrap();
            for fam in [T2Family::Primary, T2Family::Conjugate] {
                let t2 = transfer_t2(&spec, s.unit(), fam).unwrap();
                let r = commutator_residual(&t2, &t3);
                assert!(r < 1e-10, "{b:?} {fam:?}: {r}");
            }
        }
    }

    #[test]
    fn twisted_t2_not_applicable() {
        let g = DihedralElement::parse(3, "t").unwrap();
        let spec = chain(3, 2, Boundary::Twisted(g));
        assert!(matches!(
            transfer_t2(&spec, ONE, T2Family::Primary),
            Err(Error::NotApplicable(_))
        ));
        assert!(fusion_residual(&spec, SpectralPoint::one(), FUSION_TOL).is_err());
    }

    #[test]
    fn functional_relations_every_class() {
        for (n, l) in [(3, 2), (3, 3), (5, 2)] {
            let c = ctx(n);
            for b in all_classes() {
                let spec = chain(n, l, b);
                let mut s = PointSampler::new(&c, 21);
                for _ in 0..3 {
                    let r = fusion_residual(&spec, s.point(), FUSION_TOL).unwrap();
                    assert!(r.pass, "n={n} L={l} {b:?}: {:?}", r.checks);
                }
            }
        }
    }

    #[test]
    fn open_identity_point_is_scalar() {
        for (n, l) in [(3, 2), (3, 3), (5, 2)] {
            let (_, r) = open_identity_point_defect(&chain(n, l, Boundary::Open)).unwrap();
            assert!(r < 1e-10);
        }
    }

    #[test]
    fn identity_point_gives_translation() {
        let mut classes = vec![Boundary::Periodic];
        classes.push(Boundary::Twisted(DihedralElement::parse(3, "s^2 t^1").unwrap()));
        classes.extend(BraidPoint::ALL.iter().map(|&z| Boundary::Braided(z)));
        for b in classes {
            let spec = chain(3, 3, b);
            let t = transfer_t3(&spec, SpectralPoint::one()).unwrap();
            let (k, r) = proportionality(&t, &translation_op(&spec).unwrap());
            assert!(r < 1e-10 && k.norm() > 1e-8, "{b:?}: {r}");
        }
    }

    #[test]
    fn periodic_conjugation_symmetry() {
        let c = ctx(3);
        let spec = chain(3, 3, Boundary::Periodic);
        let mut s = PointSampler::new(&c, 4);
        for _ in 0..3 {
            let p = s.point();
            let lhs = transfer_t3(&spec, p).unwrap().map(|z| z.conj());
            let rhs = transfer_t3(&spec, p.conj_swap()).unwrap();
            assert!(relative_residual(&lhs, &rhs) < 1e-10);
        }
    }

    #[test]
    fn twist_commutes_with_r() {
        let c = ctx(5);
        let mut s = PointSampler::new(&c, 1);
        for g in DihedralElement::all(5) {
            let spec = chain(5, 2, Boundary::Twisted(g));
            assert!(twist_intertwining_residual(&spec, s.point()).unwrap() < 1e-12);
        }
    }

    #[test]
    fn twisted_exploratory_residual_is_finite() {
        let g = DihedralElement::parse(3, "s^1").unwrap();
        let spec = chain(3, 2, Boundary::Twisted(g));
        let r = twisted_fusion_exploratory(&spec, SpectralPoint::new(c64(0.6, 0.3), c64(1.3, -0.2)).unwrap()).unwrap();
        assert!(r.is_finite());
    }
}
