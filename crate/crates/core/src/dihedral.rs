//! The dihedral group D_n, the Drinfeld double D(D_n) as coefficient arrays
//! over the basis `g h*`, and the n-dimensional representation.

use std::fmt;

use nalgebra::DMatrix;

use crate::context::RootContext;
use crate::error::{Error, Result};
use crate::linalg::{c64, kron, CMatrix, Complex64, ONE, ZERO};

/// The element `σ^k τ^s` of D_n, acting on Z_n by `i ↦ (−1)^s i + k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DihedralElement {
    n: usize,
    k: usize,
    s: u8,
}

impl DihedralElement {
    pub fn new(n: usize, k: i64, s: u8) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidContext("dihedral order must be positive".into()));
        }
        if s > 1 {
            return Err(Error::InvalidContext(format!("reflection exponent {s} not in {{0,1}}")));
        }
        Ok(DihedralElement {
            n,
            k: k.rem_euclid(n as i64) as usize,
            s,
        })
    }

    pub fn identity(n: usize) -> Self {
        DihedralElement { n, k: 0, s: 0 }
    }

    pub fn sigma(n: usize) -> Self {
        DihedralElement { n, k: 1 % n, s: 0 }
    }

    pub fn tau(n: usize) -> Self {
        DihedralElement { n, k: 0, s: 1 }
    }

    /// The reflection `σ^{2j} τ`, which fixes `j`.
    pub fn reflection_fixing(n: usize, j: i64) -> Self {
        DihedralElement {
            n,
            k: (2 * j).rem_euclid(n as i64) as usize,
            s: 1,
        }
    }

    /// All 2n elements, rotations first.
    pub fn all(n: usize) -> Vec<Self> {
        (0..2u8)
            .flat_map(|s| (0..n).map(move |k| DihedralElement { n, k, s }))
            .collect()
    }

    pub fn order_n(&self) -> usize {
        self.n
    }

    pub fn rotation(&self) -> usize {
        self.k
    }

    pub fn reflection(&self) -> u8 {
        self.s
    }

    pub fn is_reflection(&self) -> bool {
        self.s == 1
    }

    /// Position in [`DihedralElement::all`].
    pub fn index(&self) -> usize {
        self.k + self.n * self.s as usize
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::InvalidContext(format!(
                "cannot compose elements of D_{} and D_{}",
                self.n, other.n
            )));
        }
        Ok(self.mul(other))
    }

    fn mul(&self, other: &Self) -> Self {
        let k2 = if self.s == 0 {
            other.k
        } else {
            (self.n - other.k) % self.n
        };
        DihedralElement {
            n: self.n,
            k: (self.k + k2) % self.n,
            s: self.s ^ other.s,
        }
    }

    pub fn inverse(&self) -> Self {
        if self.s == 1 {
            *self
        } else {
            DihedralElement {
                n: self.n,
                k: (self.n - self.k) % self.n,
                s: 0,
            }
        }
    }

    /// Image of `i` (any integer) as a residue in `0..n`.
    pub fn act(&self, i: i64) -> usize {
        let sign = if self.s == 1 { -1 } else { 1 };
        (sign * i + self.k as i64).rem_euclid(self.n as i64) as usize
    }

    /// `{g a g⁻¹ : g ∈ D_n}`, sorted.
    pub fn conjugacy_class(&self) -> Vec<Self> {
        let mut class: Vec<Self> = Self::all(self.n)
            .iter()
            .map(|g| g.mul(self).mul(&g.inverse()))
            .collect();
        class.sort();
        class.dedup();
        class
    }

    /// Parses `"s^k t^s"`; either factor may be omitted, `"e"` is the identity.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "e" || text.is_empty() {
            return Ok(Self::identity(n));
        }
        let mut k: i64 = 0;
        let mut s: u8 = 0;
        for token in text.split_whitespace() {
            let (base, exp) = match token.split_once('^') {
                Some((b, e)) => (
                    b,
                    e.parse::<i64>()
                        .map_err(|_| Error::InvalidSpec(format!("bad exponent in {token:?}")))?,
                ),
                None => (token, 1),
            };
            match base {
                "s" if s == 0 => k += exp,
                "t" => {
                    if exp.rem_euclid(2) == 1 {
                        s ^= 1;
                    }
                }
                _ => {
                    return Err(Error::InvalidSpec(format!(
                        "twist {text:?} is not of the form \"s^k t^s\""
                    )))
                }
            }
        }
        Self::new(n, k, s)
    }
}

impl fmt::Display for DihedralElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s^{} t^{}", self.k, self.s)
    }
}

/// `π(g) = Σ e_{g(i),i}`.
pub fn rep_g(ctx: &RootContext, g: &DihedralElement) -> CMatrix {
    let n = ctx.n();
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        m[(g.act(i as i64), i)] = ONE;
    }
    m
}

/// `j` with `σ^{2j}τ = h`, when `h` is a reflection.
pub fn fixed_point(h: &DihedralElement) -> Option<usize> {
    if !h.is_reflection() {
        return None;
    }
    let n = h.order_n();
    // 2 is invertible mod odd n with inverse (n + 1)/2
    Some(h.rotation() * n.div_ceil(2) % n)
}

/// `π(g*) = e_{j,j}` for `g = σ^{2j}τ`, zero for rotations.
pub fn rep_gstar(ctx: &RootContext, g: &DihedralElement) -> CMatrix {
    let n = ctx.n();
    let mut m = CMatrix::zeros(n, n);
    if let Some(j) = fixed_point(g) {
        m[(j, j)] = ONE;
    }
    m
}

/// `Σ c_{g,h} g h*` over the 4n² basis pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct DoubleElement {
    n: usize,
    coeffs: Vec<Complex64>,
}

impl DoubleElement {
    pub fn zero(n: usize) -> Self {
        DoubleElement {
            n,
            coeffs: vec![ZERO; 4 * n * n],
        }
    }

    fn slot(n: usize, g: &DihedralElement, h: &DihedralElement) -> usize {
        g.index() * 2 * n + h.index()
    }

    pub fn basis(g: &DihedralElement, h: &DihedralElement) -> Self {
        let mut x = Self::zero(g.order_n());
        x.coeffs[Self::slot(g.order_n(), g, h)] = ONE;
        x
    }

    /// The group element `g = Σ_h g h*`.
    pub fn group(g: &DihedralElement) -> Self {
        let n = g.order_n();
        let mut x = Self::zero(n);
        for h in DihedralElement::all(n) {
            x.coeffs[Self::slot(n, g, &h)] = ONE;
        }
        x
    }

    /// The dual element `e·h*`.
    pub fn dual(h: &DihedralElement) -> Self {
        Self::basis(&DihedralElement::identity(h.order_n()), h)
    }

    pub fn unit(n: usize) -> Self {
        Self::group(&DihedralElement::identity(n))
    }

    pub fn from_coeffs(n: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != 4 * n * n {
            return Err(Error::InvalidDimension(format!(
                "expected {} coefficients, got {}",
                4 * n * n,
                coeffs.len()
            )));
        }
        Ok(DoubleElement { n, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, g: &DihedralElement, h: &DihedralElement) -> Complex64 {
        self.coeffs[Self::slot(self.n, g, h)]
    }

    /// Nonzero terms as `(g, h, c)`.
    pub fn terms(&self) -> Vec<(DihedralElement, DihedralElement, Complex64)> {
        let all = DihedralElement::all(self.n);
        let mut out = vec![];
        for g in &all {
            for h in &all {
                let c = self.coeff(g, h);
                if c != ZERO {
                    out.push((*g, *h, c));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        DoubleElement {
            n: self.n,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        DoubleElement {
            n: self.n,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Product from `g₁h₁* · g₂h₂* = δ(g₂h₂, h₁g₂) (g₁g₂) h₂*`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::InvalidContext("operands from different doubles".into()));
        }
        let mut out = Self::zero(self.n);
        for (g1, h1, c1) in self.terms() {
            for (g2, h2, c2) in other.terms() {
                if g2.mul(&h2) == h1.mul(&g2) {
                    let slot = Self::slot(self.n, &g1.mul(&g2), &h2);
                    out.coeffs[slot] += c1 * c2;
                }
            }
        }
        Ok(out)
    }
}

/// `π(x) = Σ c_{g,h} π(g) π(h*)` on Cⁿ.
pub fn rep_double(ctx: &RootContext, x: &DoubleElement) -> CMatrix {
    let n = ctx.n();
    let mut m = CMatrix::zeros(n, n);
    for (g, h, c) in x.terms() {
        if let Some(j) = fixed_point(&h) {
            m[(g.act(j as i64), j)] += c;
        }
    }
    m
}

/// Dual labels of the terms of `Δ^{(l)}(g h*)`; every term carries `g` in
/// each factor and unit coefficient.
pub fn coproduct_terms(h: &DihedralElement, l: usize) -> Vec<Vec<DihedralElement>> {
    let n = h.order_n();
    let mut terms = vec![vec![*h]];
    for _ in 1..l {
        let mut next = Vec::with_capacity(terms.len() * 2 * n);
        for term in &terms {
            // Δ(g h₁*) = Σ_k g (k⁻¹h₁)* ⊗ g k*, applied to the first factor
            for k in DihedralElement::all(n) {
                let mut t = Vec::with_capacity(term.len() + 1);
                t.push(k.inverse().mul(&term[0]));
                t.push(k);
                t.extend_from_slice(&term[1..]);
                next.push(t);
            }
        }
        terms = next;
    }
    terms
}

/// `π^{⊗l}(Δ^{(l)}(x))`, expanded by the recursive coproduct.
pub fn coproduct_power(ctx: &RootContext, x: &DoubleElement, l: usize) -> Result<CMatrix> {
    if l == 0 {
        return Err(Error::InvalidDimension("coproduct power needs l ≥ 1".into()));
    }
    if x.n() != ctx.n() {
        return Err(Error::InvalidContext("element and context disagree on n".into()));
    }
    let n = ctx.n();
    let dim = n.pow(l as u32);
    let mut m = CMatrix::zeros(dim, dim);
    let all = DihedralElement::all(n);
    // terms depend on h only; cache per h
    let mut cache: Vec<Option<Vec<usize>>> = vec![None; 2 * n];
    for (g, h, c) in x.terms() {
        let cols = cache[h.index()].get_or_insert_with(|| {
            coproduct_terms(&all[h.index()], l)
                .into_iter()
                .filter_map(|t| {
                    t.iter()
                        .try_fold(0usize, |acc, f| fixed_point(f).map(|j| acc * n + j))
                })
                .collect()
        });
        for &col in cols.iter() {
            let mut row = 0usize;
            let mut rest = col;
            let mut place = dim / n;
            for _ in 0..l {
                let j = rest / place;
                rest %= place;
                row += g.act(j as i64) * place;
                place = (place / n).max(1);
            }
            m[(row, col)] += c;
        }
    }
    Ok(m)
}

/// `(π⊗π)(ℜ) = Σ_g π(g) ⊗ π(g*)`.
pub fn canonical_r(ctx: &RootContext) -> CMatrix {
    let n = ctx.n();
    let mut m = CMatrix::zeros(n * n, n * n);
    for g in DihedralElement::all(n) {
        m += kron(&rep_g(ctx, &g), &rep_gstar(ctx, &g));
    }
    m
}

/// Basis of `{x : Δ(x) = Δᵀ(x)}` from the structure constants.
pub fn cocommutative_subspace(ctx: &RootContext) -> Vec<DoubleElement> {
    let n = ctx.n();
    let m = 2 * n;
    let pairs = 4 * n * n;
    let all = DihedralElement::all(n);
    // rows index (g a*) ⊗ (g' b*); Δ and Δᵀ keep the same g in both factors
    let row = |g: usize, a: usize, b: usize| (g * m + a) * m + b;
    let mut map = DMatrix::<f64>::zeros(m * m * m, pairs);
    for g in &all {
        for h in &all {
            let col = DoubleElement::slot(n, g, h);
            for k in &all {
                let a = k.inverse().mul(h).index();
                map[(row(g.index(), a, k.index()), col)] += 1.0;
                map[(row(g.index(), k.index(), a), col)] -= 1.0;
            }
        }
    }
    let gram = map.transpose() * &map;
    let eig = gram.symmetric_eigen();
    let mut out = vec![];
    for (idx, &val) in eig.eigenvalues.iter().enumerate() {
        if val.abs() < 1e-9 {
            let v = eig.eigenvectors.column(idx);
            let coeffs = v.iter().map(|&x| c64(x, 0.0)).collect();
            out.push(DoubleElement { n, coeffs });
        }
    }
    out
}

/// Sum of a conjugacy class of group elements, as a double element.
pub fn class_sum(class: &[DihedralElement]) -> DoubleElement {
    let n = class[0].order_n();
    class
        .iter()
        .fold(DoubleElement::zero(n), |acc, g| acc.add(&DoubleElement::group(g)))
}
