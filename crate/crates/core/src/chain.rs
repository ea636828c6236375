//! Local and global Hamiltonians, braid operators and generalized
//! translations for the four boundary classes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::context::RootContext;
use crate::dihedral::{rep_g, DihedralElement};
use crate::eigen::eig_hermitian;
use crate::error::{Error, Result};
use crate::fz::{rmatrix_normalized_at, Arg};
use crate::linalg::{c64, identity, kron, permutation_op, scalar_defect, CMatrix, Complex64, TensorSpace, I, ZERO};

/// One of the four degenerate points `z̃₀ ∈ {0, ∞}²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BraidPoint {
    ZeroZero,
    ZeroInf,
    InfZero,
    InfInf,
}

impl BraidPoint {
    pub const ALL: [BraidPoint; 4] = [
        BraidPoint::ZeroZero,
        BraidPoint::ZeroInf,
        BraidPoint::InfZero,
        BraidPoint::InfInf,
    ];

    /// `(z₁ is ∞, z₂ is ∞)`.
    pub fn at_infinity(&self) -> (bool, bool) {
        match self {
            BraidPoint::ZeroZero => (false, false),
            BraidPoint::ZeroInf => (false, true),
            BraidPoint::InfZero => (true, false),
            BraidPoint::InfInf => (true, true),
        }
    }

    pub fn args(&self) -> (Arg, Arg) {
        let pick = |inf: bool| if inf { Arg::Infinity } else { Arg::Finite(ZERO) };
        let (a, b) = self.at_infinity();
        (pick(a), pick(b))
    }

    /// The point whose braid operator is the inverse of this one.
    pub fn partner(&self) -> BraidPoint {
        match self {
            BraidPoint::ZeroZero => BraidPoint::InfInf,
            BraidPoint::InfInf => BraidPoint::ZeroZero,
            BraidPoint::ZeroInf => BraidPoint::InfZero,
            BraidPoint::InfZero => BraidPoint::ZeroInf,
        }
    }
}

impl fmt::Display for BraidPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |inf: bool| if inf { "inf" } else { "0" };
        let (a, b) = self.at_infinity();
        write!(f, "{},{}", s(a), s(b))
    }
}

impl FromStr for BraidPoint {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text
            .trim_matches(|c| c == '(' || c == ')')
            .split(',')
            .map(str::trim)
            .collect();
        let side = |s: &str| match s {
            "0" => Ok(false),
            "inf" | "∞" | "infinity" => Ok(true),
            _ => Err(Error::InvalidPoint(format!("{text:?} is not one of 0/inf pairs"))),
        };
        if parts.len() != 2 {
            return Err(Error::InvalidPoint(format!("{text:?} must have two components")));
        }
        Ok(match (side(parts[0])?, side(parts[1])?) {
            (false, false) => BraidPoint::ZeroZero,
            (false, true) => BraidPoint::ZeroInf,
            (true, false) => BraidPoint::InfZero,
            (true, true) => BraidPoint::InfInf,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Periodic,
    Twisted(DihedralElement),
    Open,
    Braided(BraidPoint),
}

impl Boundary {
    pub fn name(&self) -> &'static str {
        match self {
            Boundary::Periodic => "periodic",
            Boundary::Twisted(_) => "twisted",
            Boundary::Open => "open",
            Boundary::Braided(_) => "braided",
        }
    }

    /// The closing group element for periodic/twisted chains.
    pub fn twist(&self, n: usize) -> Option<DihedralElement> {
        match self {
            Boundary::Periodic => Some(DihedralElement::identity(n)),
            Boundary::Twisted(g) => Some(*g),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ChainSpec {
    pub ctx: RootContext,
    pub sites: usize,
    pub boundary: Boundary,
    pub alpha1: f64,
    pub alpha2: f64,
}

impl ChainSpec {
    pub fn new(ctx: RootContext, sites: usize, boundary: Boundary, alpha1: f64, alpha2: f64) -> Result<Self> {
        if sites < 2 {
            return Err(Error::InvalidSpec(format!("chain length {sites} < 2")));
        }
        if let Boundary::Twisted(g) = boundary {
            if g.order_n() != ctx.n() {
                return Err(Error::InvalidSpec("twist element from a different dihedral group".into()));
            }
        }
        if !alpha1.is_finite() || !alpha2.is_finite() {
            return Err(Error::InvalidSpec("couplings must be finite".into()));
        }
        Ok(ChainSpec {
            ctx,
            sites,
            boundary,
            alpha1,
            alpha2,
        })
    }

    pub fn n(&self) -> usize {
        self.ctx.n()
    }

    /// `n^L`, saturating.
    pub fn dim(&self) -> usize {
        (self.n() as u64)
            .checked_pow(self.sites as u32)
            .map_or(usize::MAX, |d| d as usize)
    }

    pub fn check_cap(&self, cap: usize) -> Result<()> {
        if self.dim() > cap {
            return Err(Error::Resource(format!(
                "n^L = {}^{} exceeds the cap of {cap}",
                self.n(),
                self.sites
            )));
        }
        Ok(())
    }

    pub fn space(&self) -> TensorSpace {
        TensorSpace::uniform(self.n(), self.sites)
    }
}

/// Closed forms of the two local Hamiltonian pieces: `which = 1` gives
/// `i Σ (−1)^l w^{−2l(i−j)}/(w^{2l} − w^{−2l}) e_{i+l,i} ⊗ e_{j+l,j}`,
/// `which = 2` its swap conjugate.
pub fn h_component(ctx: &RootContext, which: u8) -> Result<CMatrix> {
    let n = ctx.n();
    let mut h = CMatrix::zeros(n * n, n * n);
    for l in 1..n as i64 {
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        let den = ctx.w_pow(2 * l) - ctx.w_pow(-2 * l);
        for i in 0..n as i64 {
            for j in 0..n as i64 {
                let v = I * sign * ctx.w_pow(-2 * l * (i - j)) / den;
                h[(ctx.idx(i + l) * n + ctx.idx(j + l), ctx.idx(i) * n + ctx.idx(j))] += v;
            }
        }
    }
    match which {
        1 => Ok(h),
        2 => {
            let p = permutation_op(n);
            Ok(&p * h * &p)
        }
        _ => Err(Error::PreconditionViolation(format!("component {which} is not 1 or 2"))),
    }
}

/// The coupled local Hamiltonian from its group-averaged form
/// `i Σ_{a,b} (−1)^a (α₁w^{2ab} + α₂w^{−2ab})/(w^{2a} − w^{−2a}) Σ_γ e_{γ(a−b),γ(n−b)} ⊗ e_{γ(a),γ(n)}`.
pub fn local_h(ctx: &RootContext, alpha1: f64, alpha2: f64) -> CMatrix {
    let n = ctx.n();
    let group = DihedralElement::all(n);
    let mut h = CMatrix::zeros(n * n, n * n);
    for a in 1..=ctx.half() as i64 {
        let sign = if a % 2 == 0 { 1.0 } else { -1.0 };
        let den = ctx.w_pow(2 * a) - ctx.w_pow(-2 * a);
        for b in 0..n as i64 {
            let coef = I * sign * (ctx.w_pow(2 * a * b) * alpha1 + ctx.w_pow(-2 * a * b) * alpha2) / den;
            for g in &group {
                let row = g.act(a - b) * n + g.act(a);
                let col = g.act(n as i64 - b) * n + g.act(n as i64);
                h[(row, col)] += coef;
            }
        }
    }
    h
}

/// `α₁H⁽¹⁾ + α₂H⁽²⁾`.
pub fn local_h_from_components(ctx: &RootContext, alpha1: f64, alpha2: f64) -> CMatrix {
    let h1 = h_component(ctx, 1).expect("component 1");
    let h2 = h_component(ctx, 2).expect("component 2");
    h1 * c64(alpha1, 0.0) + h2 * c64(alpha2, 0.0)
}

/// `H^g = (π(g)⁻¹ ⊗ I) H (π(g) ⊗ I)`.
pub fn twisted_local_h(ctx: &RootContext, g: &DihedralElement, alpha1: f64, alpha2: f64) -> CMatrix {
    let n = ctx.n();
    let pg = rep_g(ctx, g);
    // π(g) is a permutation, so its inverse is its transpose
    let left = kron(&pg.transpose(), &identity(n));
    let right = kron(&pg, &identity(n));
    left * local_h(ctx, alpha1, alpha2) * right
}

/// Two-site braid operator `b = P·R̄(z̃₀)`, with `R̄` the limit of the
/// normalized R-matrix at `z̃₀`.
pub fn braid_b(ctx: &RootContext, z0: BraidPoint) -> CMatrix {
    let (a1, a2) = z0.args();
    permutation_op(ctx.n()) * rmatrix_normalized_at(ctx, a1, a2)
}

/// The limit matrix `R̄(z̃₀)` itself.
pub fn rbar(ctx: &RootContext, z0: BraidPoint) -> CMatrix {
    let (a1, a2) = z0.args();
    rmatrix_normalized_at(ctx, a1, a2)
}

/// `tr₀[P₀_L R̄₀_L]` as a multiple of the identity: `(scalar, residual)`.
pub fn braid_closure_scalar(ctx: &RootContext, z0: BraidPoint) -> (Complex64, f64) {
    let n = ctx.n();
    // on (aux, site): R̄₀_L acts as the limit matrix with the site first
    let p = permutation_op(n);
    let rb = &p * rbar(ctx, z0) * &p;
    let prod = &p * rb;
    let traced = crate::linalg::trace_first(&prod, n);
    scalar_defect(&traced)
}

/// `G = b₁ b₂ ⋯ b_{L−1}` on the chain.
pub fn braid_product(ctx: &RootContext, sites: usize, z0: BraidPoint) -> Result<CMatrix> {
    let space = TensorSpace::uniform(ctx.n(), sites);
    let b = braid_b(ctx, z0);
    let mut g = identity(space.dim());
    for i in (0..sites - 1).rev() {
        space.apply_left(&b, &[i, i + 1], &mut g)?;
    }
    Ok(g)
}

/// The global Hamiltonian of the chain.
pub fn global_hamiltonian(spec: &ChainSpec) -> Result<CMatrix> {
    let ctx = &spec.ctx;
    let l = spec.sites;
    let space = spec.space();
    let h = local_h(ctx, spec.alpha1, spec.alpha2);
    let mut total = CMatrix::zeros(space.dim(), space.dim());
    for i in 0..l - 1 {
        total += space.embed(&h, &[i, i + 1])?;
    }
    match spec.boundary {
        Boundary::Periodic => total += space.embed(&h, &[l - 1, 0])?,
        Boundary::Twisted(g) => {
            let hg = twisted_local_h(ctx, &g, spec.alpha1, spec.alpha2);
            total += space.embed(&hg, &[l - 1, 0])?;
        }
        Boundary::Open => {}
        Boundary::Braided(z0) => {
            let g = braid_product(ctx, l, z0)?;
            let last = space.embed(&h, &[l - 2, l - 1])?;
            total += &g * last * g.adjoint();
        }
    }
    Ok(total)
}

/// Generalized translation `t(1̃)` up to the normalization of the R-matrix:
/// `π(g)₁ P₁₂P₂₃⋯P_{(L−1)L}` for periodic/twisted and
/// `b₁⋯b_{L−1}·tr₀[P₀_L R̄₀_L]` for braided chains.
pub fn translation_op(spec: &ChainSpec) -> Result<CMatrix> {
    let ctx = &spec.ctx;
    let n = ctx.n();
    let l = spec.sites;
    let space = spec.space();
    match spec.boundary {
        Boundary::Periodic | Boundary::Twisted(_) => {
            let g = spec.boundary.twist(n).expect("closed boundary");
            let p = permutation_op(n);
            let mut t = identity(space.dim());
            for i in (0..l - 1).rev() {
                space.apply_left(&p, &[i, i + 1], &mut t)?;
            }
            space.apply_left(&rep_g(ctx, &g), &[0], &mut t)?;
            Ok(t)
        }
        Boundary::Braided(z0) => {
            let (scalar, _) = braid_closure_scalar(ctx, z0);
            Ok(braid_product(ctx, l, z0)? * scalar)
        }
        Boundary::Open => Err(Error::NotApplicable(
            "the open-chain transfer matrix at the identity point is a scalar".into(),
        )),
    }
}

/// Spectra of twisted chains closed by `g` and by `h`.
#[derive(Debug, Clone, Serialize)]
pub struct ConjugacyComparison {
    pub same_class: bool,
    pub max_deviation: f64,
    pub equivalent: bool,
}

pub const CONJUGACY_TOL: f64 = 1e-8;

pub fn conjugacy_equivalence_check(
    ctx: &RootContext,
    sites: usize,
    g: &DihedralElement,
    h: &DihedralElement,
    alpha1: f64,
    alpha2: f64,
) -> Result<ConjugacyComparison> {
    let spectrum = |x: &DihedralElement| -> Result<Vec<f64>> {
        let spec = ChainSpec::new(ctx.clone(), sites, Boundary::Twisted(*x), alpha1, alpha2)?;
        Ok(eig_hermitian(&global_hamiltonian(&spec)?)?.0)
    };
    let (a, b) = (spectrum(g)?, spectrum(h)?);
    let max_deviation = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    Ok(ConjugacyComparison {
        same_class: g.conjugacy_class().contains(h),
        max_deviation,
        equivalent: max_deviation <= CONJUGACY_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dihedral::{canonical_r, coproduct_power, DoubleElement};
    use crate::fz::{rmatrix_dd, SpectralPoint};
    use crate::linalg::{commutator_residual, elementary, hermiticity_defect, relative_residual};

    fn ctx(n: usize) -> RootContext {
        RootContext::new(n).unwrap()
    }

    fn generators(n: usize) -> Vec<DoubleElement> {
        vec![
            DoubleElement::group(&DihedralElement::sigma(n)),
            DoubleElement::group(&DihedralElement::tau(n)),
            DoubleElement::dual(&DihedralElement::tau(n)),
            DoubleElement::dual(&DihedralElement::sigma(n).compose(&DihedralElement::tau(n)).unwrap()),
        ]
    }

    #[test]
    fn braid_point_parsing() {
        for z in BraidPoint::ALL {
            assert_eq!(z.to_string().parse::<BraidPoint>().unwrap(), z);
            assert_eq!(z.partner().partner(), z);
        }
        assert_eq!("(0,∞)".parse::<BraidPoint>().unwrap(), BraidPoint::ZeroInf);
        assert!(matches!("1,0".parse::<BraidPoint>(), Err(Error::InvalidPoint(_))));
    }

    #[test]
    fn chain_spec_validation() {
        assert!(ChainSpec::new(ctx(3), 1, Boundary::Open, 1.0, -1.0).is_err());
        let bad = Boundary::Twisted(DihedralElement::tau(5));
        assert!(ChainSpec::new(ctx(3), 3, bad, 1.0, -1.0).is_err());
        let spec = ChainSpec::new(ctx(5), 6, Boundary::Open, 1.0, -1.0).unwrap();
        assert!(matches!(spec.check_cap(4096), Err(Error::Resource(_))));
    }

    #[test]
    fn components_are_hermitian_conjugate_pair() {
        for n in [3, 5] {
            let c = ctx(n);
            let h1 = h_component(&c, 1).unwrap();
            let h2 = h_component(&c, 2).unwrap();
            assert!(hermiticity_defect(&h1) < 1e-12);
            assert!(hermiticity_defect(&h2) < 1e-12);
            assert!(h1.trace().norm() < 1e-12);
            assert!((h2.map(|z| z.conj()) - &h1).norm() < 1e-12);
        }
        assert!(h_component(&ctx(3), 3).is_err());
    }

    #[test]
    fn components_match_finite_differences() {
        // H⁽¹⁾ = i R⁻¹∂₁R and H⁽²⁾ = −i R⁻¹∂₂R at the identity point, with R(1̃) = P
        let c = ctx(3);
        let step = 1e-5;
        let r = |z1: f64, z2: f64| rmatrix_dd(&c, SpectralPoint::new(c64(z1, 0.0), c64(z2, 0.0)).unwrap()).unwrap();
        let p = permutation_op(3);
        let d1 = (r(1.0 + step, 1.0) - r(1.0 - step, 1.0)) / c64(2.0 * step, 0.0);
        let d2 = (r(1.0, 1.0 + step) - r(1.0, 1.0 - step)) / c64(2.0 * step, 0.0);
        let fd1 = &p * d1 * I;
        let fd2 = &p * d2 * (-I);
        assert!((fd1 - h_component(&c, 1).unwrap()).norm() < 1e-6);
        assert!((fd2 - h_component(&c, 2).unwrap()).norm() < 1e-6);
    }

    #[test]
    fn group_sum_form_matches_components() {
        for n in [3, 5, 7] {
            let c = ctx(n);
            for (a1, a2) in [(1.0, 0.0), (0.0, 1.0), (1.0, -1.0), (0.3, 2.1)] {
                let lhs = local_h(&c, a1, a2);
                assert!((&lhs - local_h_from_components(&c, a1, a2)).norm() < 1e-12);
                assert!(hermiticity_defect(&lhs) < 1e-12);
            }
        }
    }

    #[test]
    fn local_h_commutes_with_coproduct_and_twisted_coproduct() {
        let c = ctx(3);
        let h = local_h(&c, 1.0, -1.0);
        let p = permutation_op(3);
        let h21 = &p * &h * &p;
        for x in generators(3) {
            let d = coproduct_power(&c, &x, 2).unwrap();
            assert!(commutator_residual(&h, &d) < 1e-12);
            assert!(commutator_residual(&h21, &d) < 1e-12);
        }
    }

    #[test]
    fn twisted_local_h_properties() {
        let c = ctx(3);
        let e = DihedralElement::identity(3);
        assert_eq!(twisted_local_h(&c, &e, 1.0, -1.0), local_h(&c, 1.0, -1.0));
        let st = DihedralElement::sigma(3).compose(&DihedralElement::tau(3)).unwrap();
        let hg = twisted_local_h(&c, &st, 1.0, -1.0);
        assert!(hermiticity_defect(&hg) < 1e-12);
        let (a, _) = eig_hermitian(&hg).unwrap();
        let (b, _) = eig_hermitian(&local_h(&c, 1.0, -1.0)).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn braid_operators() {
        for n in [3, 5] {
            let c = ctx(n);
            let space = TensorSpace::uniform(n, 3);
            for z in BraidPoint::ALL {
                let b = braid_b(&c, z);
                let b1 = space.embed(&b, &[0, 1]).unwrap();
                let b2 = space.embed(&b, &[1, 2]).unwrap();
                assert!(relative_residual(&(&b1 * &b2 * &b1), &(&b2 * &b1 * &b2)) < 1e-12);
                let inv = &b * braid_b(&c, z.partner());
                assert!((inv - identity(n * n)).norm() < 1e-12);
                assert!((b.adjoint() * &b - identity(n * n)).norm() < 1e-12);
            }
            let canon = permutation_op(n) * canonical_r(&c);
            assert!((braid_b(&c, BraidPoint::ZeroZero) - canon).norm() < 1e-12);
        }
    }

    #[test]
    fn explicit_zero_infinity_braid_is_proportional() {
        // Σ w^{4k(j−a−k)+2j(a−j)} e_{i+a+j,i+a} ⊗ e_{i+j,i}
        for n in [3, 5] {
            let c = ctx(n);
            let mut m = CMatrix::zeros(n * n, n * n);
            for i in 0..n as i64 {
                for j in 0..n as i64 {
                    for a in 0..n as i64 {
                        for k in 0..n as i64 {
                            let phase = c.w_pow(4 * k * (j - a - k) + 2 * j * (a - j));
                            m += kron(&elementary(n, i + a + j, i + a).unwrap(), &elementary(n, i + j, i).unwrap()) * phase;
                        }
                    }
                }
            }
            let (k, res) = crate::linalg::proportionality(&m, &braid_b(&c, BraidPoint::ZeroInf));
            assert!(res < 1e-12);
            assert!((k.norm() - n as f64).abs() < 1e-10);
        }
    }

    #[test]
    fn closure_trace_is_scalar() {
        for n in [3, 5] {
            let c = ctx(n);
            for z in BraidPoint::ALL {
                let (s, res) = braid_closure_scalar(&c, z);
                assert!(res < 1e-12);
                assert!(s.norm() > 1e-6);
            }
        }
    }

    #[test]
    fn global_hamiltonians_are_hermitian_and_traceless() {
        let c = ctx(3);
        let st = DihedralElement::sigma(3).compose(&DihedralElement::tau(3)).unwrap();
        let boundaries = [
            Boundary::Periodic,
            Boundary::Twisted(st),
            Boundary::Open,
            Boundary::Braided(BraidPoint::ZeroZero),
            Boundary::Braided(BraidPoint::ZeroInf),
            Boundary::Braided(BraidPoint::InfZero),
            Boundary::Braided(BraidPoint::InfInf),
        ];
        for b in boundaries {
            let spec = ChainSpec::new(c.clone(), 3, b, 1.0, -1.0).unwrap();
            let h = global_hamiltonian(&spec).unwrap();
            assert!(hermiticity_defect(&h) < 1e-10);
            assert!(h.trace().norm() < 1e-10);
        }
    }

    #[test]
    fn swapped_couplings_give_conjugate_hamiltonian() {
        let c = ctx(3);
        let a = global_hamiltonian(&ChainSpec::new(c.clone(), 3, Boundary::Periodic, 0.4, 1.7).unwrap()).unwrap();
        let b = global_hamiltonian(&ChainSpec::new(c, 3, Boundary::Periodic, 1.7, 0.4).unwrap()).unwrap();
        assert!((a.map(|z| z.conj()) - b).norm() < 1e-12);
    }

    #[test]
    fn open_and_braided_chains_have_full_symmetry() {
        let c = ctx(3);
        for b in [Boundary::Open, Boundary::Braided(BraidPoint::ZeroZero)] {
            let spec = ChainSpec::new(c.clone(), 3, b, 1.0, -1.0).unwrap();
            let h = global_hamiltonian(&spec).unwrap();
            for x in generators(3) {
                let d = coproduct_power(&c, &x, 3).unwrap();
                assert!(commutator_residual(&h, &d) < 1e-10);
            }
        }
    }

    #[test]
    fn translations_commute_with_hamiltonians() {
        let c = ctx(3);
        let st = DihedralElement::sigma(3).compose(&DihedralElement::tau(3)).unwrap();
        for b in [
            Boundary::Periodic,
            Boundary::Twisted(st),
            Boundary::Braided(BraidPoint::ZeroZero),
            Boundary::Braided(BraidPoint::ZeroInf),
        ] {
            let spec = ChainSpec::new(c.clone(), 3, b, 1.0, -1.0).unwrap();
            let t = translation_op(&spec).unwrap();
            let h = global_hamiltonian(&spec).unwrap();
            assert!(commutator_residual(&t, &h) < 1e-10);
        }
        let open = ChainSpec::new(c, 3, Boundary::Open, 1.0, -1.0).unwrap();
        assert!(matches!(translation_op(&open), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn periodic_translation_has_both_orderings() {
        // P_{1L}⋯P₁₃P₁₂ equals P₁₂P₂₃⋯P_{(L−1)L}
        let c = ctx(3);
        let spec = ChainSpec::new(c, 4, Boundary::Periodic, 1.0, -1.0).unwrap();
        let space = spec.space();
        let p = permutation_op(3);
        let mut alt = identity(81);
        for j in 1..4 {
            space.apply_left(&p, &[0, j], &mut alt).unwrap();
        }
        assert_eq!(translation_op(&spec).unwrap(), alt);
    }

    #[test]
    fn conjugate_twists_are_isospectral() {
        let c = ctx(3);
        let tau = DihedralElement::tau(3);
        let s = DihedralElement::sigma(3);
        let h = s.compose(&tau).unwrap().compose(&s.inverse()).unwrap();
        let cmp = conjugacy_equivalence_check(&c, 3, &tau, &h, 1.0, -1.0).unwrap();
        assert!(cmp.same_class && cmp.equivalent);
        let same = conjugacy_equivalence_check(&c, 3, &tau, &tau, 1.0, -1.0).unwrap();
        assert!(same.equivalent && same.max_deviation == 0.0);
        let other = conjugacy_equivalence_check(&c, 3, &DihedralElement::identity(3), &tau, 1.0, -1.0).unwrap();
        assert!(!other.same_class);
        assert!(other.max_deviation.is_finite());
    }
}
