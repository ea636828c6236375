//! Named verification suites producing machine-readable reports.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::bethe::{bethe_sweep, Classification, BETHE_TOL};
use crate::chain::{
    braid_b, braid_closure_scalar, conjugacy_equivalence_check, global_hamiltonian, h_component, local_h,
    translation_op, Boundary, BraidPoint, ChainSpec,
};
use crate::context::RootContext;
use crate::dihedral::{canonical_r, cocommutative_subspace, coproduct_power, DihedralElement, DoubleElement};
use crate::eigen::eig_hermitian;
use crate::error::{Error, Result};
use crate::fz::{
    admissible_pairs, conservation_violations, eigenfunction_f, projector, rmatrix_dd, spectral_decomposition,
    unitarity_defect, ybe_residual, SpectralPoint,
};
use crate::linalg::{
    c64, commutator_residual, hermiticity_defect, Complex64, identity, permutation_op, relative_residual, TensorSpace, I,
};
use crate::sampling::PointSampler;
use crate::transfer::{
    block_triangular_check, class_label, fusion_residual, transfer_t3, yang_baxter_like_residuals, FUSION_TOL,
};

/// One named residual against its tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Parameters echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteParams {
    pub n: usize,
    pub sites: usize,
    pub boundary: String,
    pub alpha1: f64,
    pub alpha2: f64,
    pub samples: usize,
    pub seed: u64,
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub params: SuiteParams,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Ybe,
    Unitarity,
    Projectors,
    Symmetry,
    Braid,
    Hamiltonian,
    Transfer,
    Fusion,
    Bethe,
    Conjugacy,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Ybe,
        Suite::Unitarity,
        Suite::Projectors,
        Suite::Symmetry,
        Suite::Braid,
        Suite::Hamiltonian,
        Suite::Transfer,
        Suite::Fusion,
        Suite::Bethe,
        Suite::Conjugacy,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Ybe => "ybe",
            Suite::Unitarity => "unitarity",
            Suite::Projectors => "projectors",
            Suite::Symmetry => "symmetry",
            Suite::Braid => "braid",
            Suite::Hamiltonian => "hamiltonian",
            Suite::Transfer => "transfer",
            Suite::Fusion => "fusion",
            Suite::Bethe => "bethe",
            Suite::Conjugacy => "conjugacy",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown suite '{s}'")))
    }
}

/// Everything a suite may need; unused fields are ignored.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub chain: ChainSpec,
    /// Whether the boundary was chosen explicitly; otherwise class-wide
    /// suites sweep every class.
    pub boundary_given: bool,
    pub samples: usize,
    pub seed: u64,
    /// Overrides every check tolerance when set.
    pub tol: Option<f64>,
}

impl SuiteConfig {
    pub fn new(n: usize, sites: usize) -> Result<Self> {
        let ctx = RootContext::new(n)?;
        Ok(SuiteConfig {
            chain: ChainSpec::new(ctx, sites, Boundary::Periodic, 1.0, -1.0)?,
            boundary_given: false,
            samples: 10,
            seed: 0,
            tol: None,
        })
    }

    fn params(&self) -> SuiteParams {
        SuiteParams {
            n: self.chain.n(),
            sites: self.chain.sites,
            boundary: class_label(&self.chain),
            alpha1: self.chain.alpha1,
            alpha2: self.chain.alpha2,
            samples: self.samples,
            seed: self.seed,
            tol: self.tol,
        }
    }

    fn ctx(&self) -> &RootContext {
        &self.chain.ctx
    }

    fn with_boundary(&self, b: Boundary) -> ChainSpec {
        ChainSpec {
            boundary: b,
            ..self.chain.clone()
        }
    }

    /// The chosen boundary, or every class that has a transfer family.
    fn classes(&self, include_twisted: bool) -> Vec<ChainSpec> {
        if self.boundary_given {
            return vec![self.chain.clone()];
        }
        let mut out = vec![self.with_boundary(Boundary::Periodic)];
        if include_twisted {
            let st = DihedralElement::sigma(self.chain.n()).compose(&DihedralElement::tau(self.chain.n()));
            out.push(self.with_boundary(Boundary::Twisted(st.expect("same group"))));
        }
        out.push(self.with_boundary(Boundary::Open));
        out.extend(BraidPoint::ALL.iter().map(|&z| self.with_boundary(Boundary::Braided(z))));
        out
    }
}

struct Collector {
    tol: Option<f64>,
    checks: Vec<Check>,
}

impl Collector {
    fn new(tol: Option<f64>) -> Self {
        Collector { tol, checks: vec![] }
    }

    /// Passes when `residual < tol`.
    fn below(&mut self, name: impl Into<String>, residual: f64, tol: f64) {
        let tol = self.tol.unwrap_or(tol);
        self.checks.push(Check {
            name: name.into(),
            residual,
            tol,
            pass: residual < tol,
        });
    }

    /// Passes when `residual > tol` (a witness that something fails).
    fn above(&mut self, name: impl Into<String>, residual: f64, tol: f64) {
        self.checks.push(Check {
            name: name.into(),
            residual,
            tol,
            pass: residual > tol,
        });
    }

    fn max_below<I: IntoIterator<Item = f64>>(&mut self, name: impl Into<String>, residuals: I, tol: f64) {
        let worst = residuals
            .into_iter()
            .fold(0.0, |a: f64, b| if a.is_nan() || b.is_nan() { f64::NAN } else { a.max(b) });
        self.below(name, worst, tol);
    }

    fn finish(self, name: &str, cfg: &SuiteConfig) -> SuiteReport {
        let pass = self.checks.iter().all(|c| c.pass);
        SuiteReport {
            suite: name.into(),
            params: cfg.params(),
            checks: self.checks,
            pass,
        }
    }
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut c = Collector::new(cfg.tol);
    match suite {
        Suite::Ybe => ybe(cfg, &mut c)?,
        Suite::Unitarity => unitarity(cfg, &mut c)?,
        Suite::Projectors => projectors(cfg, &mut c)?,
        Suite::Symmetry => symmetry(cfg, &mut c)?,
        Suite::Braid => braid(cfg, &mut c)?,
        Suite::Hamiltonian => hamiltonian(cfg, &mut c)?,
        Suite::Transfer => transfer(cfg, &mut c)?,
        Suite::Fusion => fusion(cfg, &mut c)?,
        Suite::Bethe => bethe(cfg, &mut c)?,
        Suite::Conjugacy => conjugacy(cfg, &mut c)?,
    }
    Ok(c.finish(suite.name(), cfg))
}

fn ybe(cfg: &SuiteConfig, c: &mut Collector) -> Result<()> {
    let ctx = cfg.ctx();
    let mut s = PointSampler::new(ctx, cfg.seed);
    let mut res = Vec::with_capacity(cfg.samples);
    let mut zeros = 0;
    for _ in 0..cfg.samples {
        let (x, y) = (s.unit_point(), s.unit_point());
        res.push(ybe_residual(ctx, x, y)?);
        zeros += conservation_violations(ctx, &rmatrix_dd(ctx, x)?, 1e-12);
    }
    c.max_below("two-parameter YBE", res, 1e-9);
    c.below("conservation rule violations", zeros as f64, 0.5);
    Ok(())
}

fn unitarity(cfg: &SuiteConfig, c: &mut Collector) -> Result<()> {
    let ctx = cfg.ctx();
    let n = ctx.n();
    let r1 = rmatrix_dd(ctx, SpectralPoint::one())?;
    c.below("regularity R(1,1) = P", (r1 - permutation_op(n)).norm(), 1e-12);
    let mut s = PointSampler::new(ctx, cfg.seed);
    let mut res = Vec::new();
    let mut scalars_ok = true;
    for _ in 0..cfg.samples {
        let (k, r) = unitarity_defect(ctx, s.unit_point())?;
        scalars_ok &= k.is_finite() && k.norm() > 1e-12;
        res.push(r);
    }
    c.max_below("unitarity R12(z)R21(1/z) ∝ I", res, 1e-9);
    c.below("unitarity scalar finite and nonzero", if scalars_ok { 0.0 } else { 1.0 }, 0.5);
    Ok(())
}

fn projectors(cfg: &SuiteConfig, c: &mut Collector) -> Result<()> {
    let ctx = cfg.ctx();
    let n = ctx.n();
    let pairs = admissible_pairs(n);
    let ps: Vec<_> = pairs.iter().map(|&(a, b)| projector(ctx, a, b)).collect::<Result<_>>()?;
    c.max_below("idempotence", ps.iter().map(|p| (p * p - p).norm()), 1e-12);
    let mut orth: f64 = 0.0;
    for (i, p) in ps.iter().enumerate() {
        for q in &ps[i + 1..] {
            orth = orth.max((p * q).norm());
        }
    }
    c.below("mutual orthogonality", orth, 1e-12);
    let sum = ps.iter().fold(crate::linalg::CMatrix::zeros(n * n, n * n), |acc, p| acc + p);
    c.below("completeness", (sum - identity(n * n)).norm(), 1e-12);

    let mut s = PointSampler::new(ctx, cfg.seed);
    let mut res = Vec::new();
    for _ in 0..cfg.samples {
        let p = s.unit_point();
        let lhs = permutation_op(n) * rmatrix_dd(ctx, p)?;
        res.push(relative_residual(&lhs, &spectral_decomposition(ctx, p)?));
    }
    c.max_below("decomposition PR = Σ f p", res, 1e-9);
    let ones = pairs
        .iter()
        .map(|&(a, b)| eigenfunction_f(ctx, a, b, SpectralPoint::one()).map(|f| (f - 1.0).norm()))
        .collect::<Result<Vec<_>>>()?;
    c.max_below("f(1,1) = 1", ones, 1e-10);
    Ok(())
}

fn generators(n: usize) -> Vec<(&'static str, DoubleElement)> {
    let s = DihedralElement::sigma(n);
    let t = DihedralElement::tau(n);
    vec![
        ("sigma", DoubleElement::group(&s)),
        ("tau", DoubleElement::group(&t)),
        ("tau*", DoubleElement::dual(&t)),
        ("(sigma tau)*", DoubleElement::dual(&s.compose(&t).expect("same group"))),
    ]
}

fn symmetry(cfg: &SuiteConfig, c: &mut Collector) -> Result<()> {
    let ctx = cfg.ctx();
    let n = ctx.n();
    let p = permutation_op(n);
    let mut s = PointSampler::new(ctx, cfg.seed);
    let points: Vec<_> = (0..cfg.samples).map(|_| s.unit_point()).collect();
    let prs = points
        .iter()
        .map(|&q| rmatrix_dd(ctx, q).map(|r| &p * r))
        .collect::<Result<Vec<_>>>()?;
    for (name, x) in generators(n) {
        let d = coproduct_power(ctx, &x, 2)?;
        c.max_below(
            format!("[PR, Δ({name})]"),
            prs.iter().map(|pr| commutator_residual(pr, &d)),
            1e-10,
        );
    }

    let sites = cfg.chain.sites;
    let open = global_hamiltonian(&cfg.with_boundary(Boundary::Open))?;
    for (name, x) in generators(n) {
        let d = coproduct_power(ctx, &x, sites)?;
        c.below(format!("open H vs Δ^L({name})"), commutator_residual(&open, &d), 1e-10);
    }
    let periodic = global_hamiltonian(&cfg.with_boundary(Boundary::Periodic))?;
    let basis = cocommutative_subspace(ctx);
    let mut worst: f64 = 0.0;
    for x in &basis {
        worst = worst.max(commutator_residual(&periodic, &coproduct_power(ctx, x, sites)?));
    }
    c.below(format!("periodic H vs cocommutative basis ({} elements)", basis.len()), worst, 1e-10);
    // first basis element g h* outside the subspace that breaks the symmetry
    let outside = |x: &DoubleElement| {
        let proj = basis.iter().fold(DoubleElement::zero(n), |acc, b| {
            let overlap: Complex64 = b.coeffs().iter().zip(x.coeffs()).map(|(u, v)| u.conj() * v).sum();
            acc.add(&b.scale(overlap))
        });
        x.add(&proj.scale(c64(-1.0, 0.0))).coeffs().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    };
    let mut found = None;
    'search: for g in DihedralElement::all(n) {
        for h in DihedralElement::all(n) {
            let x = DoubleElement::basis(&g, &h);
            let r = commutator_residual(&periodic, &coproduct_power(ctx, &x, sites)?);
            if r > 1e-6 {
                found = Some((format!("{g} ({h})*"), r, outside(&x)));
                break 'search;
            }
        }
    }
    match found {
        Some((name, r, dist)) => {
            c.above(format!("periodic H fails against {name} (witness)"), r, 1e-6);
            c.above(format!("witness {name} lies outside the cocommutative subspace"), dist, 1e-6);
        }
        None => c.above("periodic H fails against some basis element (none found)", 0.0, 1e-6),
    }
    Ok(())
}

fn braid(cfg: &SuiteConfig, c: &mut Collector) -> Result<()> {
    let ctx = cfg.ctx();
    let n = ctx.n();
    let sites = cfg.chain.sites.max(3);
    let space = TensorSpace::uniform(n, sites);
    for z in BraidPoint::ALL {
        let b = braid_b(ctx, z);
        let mut worst: f64 = 0.0;
        for i in 0..sites - 2 {
            let b1 = space.embed(&b, &[i, i + 1])?;
            let b2 = space.embed(&b, &[i + 1, i + 2])?;
            worst = worst.max(relative_residual(&(&b1 * &b2 * &b1), &(&b2 * &b1 * &b2)));
        }
        c.below(format!("braid relation ({z})"), worst, 1e-12);
        let inv = &b * braid_b(ctx, z.partner());
        c.below(format!("inverse pairing ({z})·({})", z.partner()), (inv - identity(n * n)).norm(), 1e-12);
        c.below(format!("unitary ({z})"), (b.adjoint() * &b - identity(n * n)).norm(), 1e-12);
        let (_, closure) = braid_closure_scalar(ctx, z);
        c.below(format!("closure trace scalar ({z})"), closure, 1e-12);
    }
    let canon = permutation_op(n) * canonical_r(ctx);
    c.below(
        "b(0,0) = P·(π⊗π)(canonical element)",
        (braid_b(ctx, BraidPoint::ZeroZero) - canon).norm(),
        1e-12,
    );
    Ok(())
}

fn hamiltonian(cfg: &SuiteConfig, c: &mut Collector) -> Result<()> {
    let ctx = cfg.ctx();
    let n = ctx.n();
    let p = permutation_op(n);
    let h1 = h_component(ctx, 1)?;
    let h2 = h_component(ctx, 2)?;
    let step = 1e-5;
    let r = |z1: f64, z2: f64| rmatrix_dd(ctx, SpectralPoint::new(c64(z1, 0.0), c64(z2, 0.0))?);
    let d1 = (r(1.0 + step, 1.0)? - r(1.0 - step, 1.0)?) / c64(2.0 * step, 0.0);
    let d2 = (r(1.0, 1.0 + step)? - r(1.0, 1.0 - step)?) / c64(2.0 * step, 0.0);
    c.below("H1 = i P ∂1R (finite difference)", (&p * d1 * I - &h1).norm(), 1e-6);
    c.below("H2 = -i P ∂2R (finite difference)", (&p * d2 * (-I) - &h2).norm(), 1e-6);
    c.below("H2 = P H1 P", (&p * &h1 * &p - &h2).norm(), 1e-12);
    c.below("conj(H2) = H1", (h2.map(|z| z.conj()) - &h1).norm(), 1e-12);
    let local = local_h(ctx, cfg.chain.alpha1, cfg.chain.alpha2);
    c.below("local H self-adjoint", hermiticity_defect(&local), 1e-12);
    for spec in cfg.classes(true) {
        let h = global_hamiltonian(&spec)?;
        let label = class_label(&spec);
        c.below(format!("global H self-adjoint ({label})"), hermiticity_defect(&h), 1e-10);
        c.below(format!("global H traceless ({label})"), h.trace().norm(), 1e-10);
    }
    Ok(())
}

fn transfer(cfg: &SuiteConfig, c: &mut Collector) -> Result<()> {
    let ctx = cfg.ctx();
    for spec in cfg.classes(true) {
        let label = class_label(&spec);
        let mut s = PointSampler::new(ctx, cfg.seed);
        let pairs: Vec<_> = (0..cfg.samples).map(|_| (s.point(), s.point())).collect();
        let res = pairs
            .iter()
            .map(|&(p, q)| Ok(commutator_residual(&transfer_t3(&spec, p)?, &transfer_t3(&spec, q)?)))
            .collect::<Result<Vec<_>>>()?;
        c.max_below(format!("[t(p), t(q)] ({label})"), res, 1e-8);
        let t1 = transfer_t3(&spec, SpectralPoint::one())?;
        let h = global_hamiltonian(&spec)?;
        c.below(format!("[t(1), H] ({label})"), commutator_residual(&t1, &h), 1e-10);
        match translation_op(&spec) {
            Ok(t) => {
                let (_, r) = crate::linalg::proportionality(&t1, &t);
                c.below(format!("t(1) ∝ translation ({label})"), r, 1e-10);
            }
            Err(Error::NotApplicable(_)) => {
                let (_, r) = crate::linalg::scalar_defect(&t1);
                c.below(format!("t(1) ∝ I ({label})"), r, 1e-10);
            }
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

fn fusion(cfg: &SuiteConfig, c: &mut Collector) -> Result<()> {
    let ctx = cfg.ctx();
    let mut s = PointSampler::new(ctx, cfg.seed);
    let bt = (0..cfg.samples)
        .map(|_| block_triangular_check(ctx, s.point(), 1e-9))
        .collect::<Result<Vec<_>>>()?;
    for (i, name) in ["upper-right block", "top-left block", "bottom-right block"].iter().enumerate() {
        c.max_below(
            format!("block triangularization: {name}"),
            bt.iter().map(|r| r.checks[i].residual),
            1e-9,
        );
    }
    let mut ybl = [0.0f64; 4];
    for _ in 0..cfg.samples {
        let r = yang_baxter_like_residuals(ctx, s.point(), s.point())?;
        for k in 0..4 {
            ybl[k] = ybl[k].max(r[k]);
        }
    }
    for (k, name) in ["r L L", "lim z r · L L*", "L L R", "L* L* R"].iter().enumerate() {
        c.below(format!("Yang-Baxter-like relation {name}"), ybl[k], 1e-9);
    }
    for spec in cfg.classes(false) {
        if matches!(spec.boundary, Boundary::Twisted(_)) {
            return Err(Error::NotApplicable(
                "functional relations are not defined for twisted chains".into(),
            ));
        }
        let label = class_label(&spec);
        let mut s = PointSampler::new(ctx, cfg.seed);
        let mut z1 = Vec::new();
        let mut z2 = Vec::new();
        for _ in 0..cfg.samples {
            let r = fusion_residual(&spec, s.point(), FUSION_TOL)?;
            z1.push(r.checks[0].residual);
            z2.push(r.checks[1].residual);
        }
        c.max_below(format!("functional relation z1 ({label})"), z1, FUSION_TOL);
        c.max_below(format!("functional relation z2 ({label})"), z2, FUSION_TOL);
    }
    Ok(())
}

fn bethe(cfg: &SuiteConfig, c: &mut Collector) -> Result<()> {
    for spec in cfg.classes(false) {
        let label = class_label(&spec);
        let report = bethe_sweep(&spec, cfg.seed, BETHE_TOL)?;
        let classified = report
            .curves
            .iter()
            .filter(|r| r.classification != Classification::Unresolved);
        let (mut b1, mut b2) = (0.0f64, 0.0f64);
        let mut missing = 0usize;
        for r in classified {
            match (r.bethe1, r.bethe2) {
                (Some(x), Some(y)) => {
                    b1 = b1.max(x);
                    b2 = b2.max(y);
                }
                _ => missing += 1,
            }
        }
        c.below(format!("Bethe family 1 ({label})"), b1, BETHE_TOL);
        c.below(format!("Bethe family 2 ({label})"), b2, BETHE_TOL);
        c.below(format!("singular root sets ({label})"), missing as f64, 0.5);
        c.below(
            format!("unresolved curves ({label}, {} total)", report.summary.curves),
            report.summary.unresolved as f64,
            0.5,
        );
        c.max_below(
            format!("curve functional relation ({label})"),
            report.curves.iter().map(|r| r.functional),
            1e-6,
        );
        if let Some(worst) = report.curves.iter().filter_map(|r| r.residue).reduce(f64::max) {
            c.below(format!("residue self-check ({label})"), worst, 1e-5);
        }
    }
    Ok(())
}

fn conjugacy(cfg: &SuiteConfig, c: &mut Collector) -> Result<()> {
    let ctx = cfg.ctx();
    let n = ctx.n();
    let g = match cfg.chain.boundary {
        Boundary::Twisted(g) => g,
        _ => DihedralElement::tau(n),
    };
    for h in DihedralElement::all(n) {
        let conj = h.compose(&g)?.compose(&h.inverse())?;
        let cmp = conjugacy_equivalence_check(ctx, cfg.chain.sites, &g, &conj, cfg.chain.alpha1, cfg.chain.alpha2)?;
        c.below(format!("spectrum {g} vs {conj} (via {h})"), cmp.max_deviation, 1e-8);
    }
    Ok(())
}

/// Sorted spectrum of the chain's global Hamiltonian plus the embedded
/// hermiticity and symmetry checks.
pub fn spectrum(cfg: &SuiteConfig, cap: usize) -> Result<(Vec<f64>, SuiteReport)> {
    let spec = &cfg.chain;
    spec.check_cap(cap)?;
    let h = global_hamiltonian(spec)?;
    let mut c = Collector::new(cfg.tol);
    c.below("self-adjoint", hermiticity_defect(&h), 1e-10);
    c.below("traceless", h.trace().norm(), 1e-9);
    let (values, _) = eig_hermitian(&h)?;
    c.below("trace equals eigenvalue sum", (values.iter().sum::<f64>() - h.trace().re).abs(), 1e-9);
    let ctx = &spec.ctx;
    let symmetric: Vec<(&str, DoubleElement)> = match spec.boundary {
        Boundary::Open | Boundary::Braided(_) => generators(ctx.n()),
        Boundary::Periodic => vec![
            ("sigma", DoubleElement::group(&DihedralElement::sigma(ctx.n()))),
            ("tau", DoubleElement::group(&DihedralElement::tau(ctx.n()))),
        ],
        Boundary::Twisted(_) => vec![],
    };
    for (name, x) in symmetric {
        let d = coproduct_power(ctx, &x, spec.sites)?;
        c.below(format!("[H, Δ^L({name})]"), commutator_residual(&h, &d), 1e-10);
    }
    Ok((values, c.finish("spectrum", cfg)))
}

/// Groups sorted eigenvalues into degenerate multiplets.
pub fn degeneracy_pattern(values: &[f64], tol: f64) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    let mut last: Option<f64> = None;
    for &v in values {
        match last {
            Some(l) if (v - l).abs() <= tol => *out.last_mut().expect("nonempty") += 1,
            _ => out.push(1),
        }
        last = Some(v);
    }
    out
}
