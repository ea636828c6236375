//! Dense complex matrices and the tensor-product plumbing shared by every
//! other module: modular elementary matrices, Kronecker products, the swap
//! operator and embeddings of local operators into multi-site spaces.

pub use nalgebra::DMatrix;
pub use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// An index considered modulo `d`, with canonical representative in `1..=d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModIndex {
    value: i64,
    modulus: usize,
}

impl ModIndex {
    pub fn new(value: i64, modulus: usize) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidDimension("modulus must be positive".into()));
        }
        Ok(ModIndex { value, modulus })
    }

    /// Representative in `1..=d`.
    pub fn canonical(&self) -> usize {
        let r = self.value.rem_euclid(self.modulus as i64) as usize;
        if r == 0 {
            self.modulus
        } else {
            r
        }
    }

    /// Zero-based storage offset (`d` maps to 0).
    pub fn offset(&self) -> usize {
        self.value.rem_euclid(self.modulus as i64) as usize
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }
}

/// `d × d` elementary matrix `e_{i,j}` with indices read modulo `d`.
pub fn elementary(d: usize, i: i64, j: i64) -> Result<CMatrix> {
    if d == 0 {
        return Err(Error::InvalidDimension("elementary matrix needs d ≥ 1".into()));
    }
    let r = ModIndex::new(i, d)?.offset();
    let c = ModIndex::new(j, d)?.offset();
    let mut m = CMatrix::zeros(d, d);
    m[(r, c)] = ONE;
    Ok(m)
}

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

/// Kronecker product with the row-major block convention
/// `(A⊗B)[i·r_B + k, j·c_B + l] = A[i,j]·B[k,l]`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Swap operator on `Cⁿ ⊗ Cⁿ`.
pub fn permutation_op(n: usize) -> CMatrix {
    let mut p = CMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            p[(i * n + j, j * n + i)] = ONE;
        }
    }
    p
}

/// Conjugation by the swap: `P·A·P` for an operator on `Cⁿ ⊗ Cⁿ`.
pub fn swap_factors(a: &CMatrix, n: usize) -> CMatrix {
    let p = permutation_op(n);
    &p * a * &p
}

/// Tensor product space `C^{d_0} ⊗ … ⊗ C^{d_{k-1}}` with the first factor
/// most significant in the flattened index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorSpace {
    dims: Vec<usize>,
    strides: Vec<usize>,
}

impl TensorSpace {
    pub fn new(dims: Vec<usize>) -> Self {
        let mut strides = vec![1; dims.len()];
        for k in (0..dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * dims[k + 1];
        }
        TensorSpace { dims, strides }
    }

    /// `count` copies of `Cⁿ`.
    pub fn uniform(n: usize, count: usize) -> Self {
        Self::new(vec![n; count])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().product()
    }

    fn check_sites(&self, op: &CMatrix, sites: &[usize]) -> Result<usize> {
        let mut local = 1;
        for (k, &s) in sites.iter().enumerate() {
            if s >= self.dims.len() {
                return Err(Error::InvalidSites(format!(
                    "factor {s} out of range for {} factors",
                    self.dims.len()
                )));
            }
            if sites[..k].contains(&s) {
                return Err(Error::InvalidSites(format!("factor {s} repeated")));
            }
            local *= self.dims[s];
        }
        if op.nrows() != local || op.ncols() != local {
            return Err(Error::InvalidDimension(format!(
                "operator is {}×{}, local space has dimension {local}",
                op.nrows(),
                op.ncols()
            )));
        }
        Ok(local)
    }

    /// Offsets of the local basis states of `sites` (in the given order)
    /// relative to a base index where those factors are zero.
    fn local_offsets(&self, sites: &[usize]) -> Vec<usize> {
        let mut offsets = vec![0usize];
        for &s in sites {
            let mut next = Vec::with_capacity(offsets.len() * self.dims[s]);
            for &o in &offsets {
                for v in 0..self.dims[s] {
                    next.push(o + v * self.strides[s]);
                }
            }
            offsets = next;
        }
        offsets
    }

    /// Flat indices with every factor in `sites` set to zero.
    fn base_indices(&self, sites: &[usize]) -> Vec<usize> {
        let mut bases = vec![0usize];
        for (k, &d) in self.dims.iter().enumerate() {
            if sites.contains(&k) {
                continue;
            }
            let mut next = Vec::with_capacity(bases.len() * d);
            for &b in &bases {
                for v in 0..d {
                    next.push(b + v * self.strides[k]);
                }
            }
            bases = next;
        }
        bases
    }

    /// In-place `M ← op_{sites} · M`, where `op` acts on the listed factors
    /// in that order and as the identity elsewhere.
    pub fn apply_left(&self, op: &CMatrix, sites: &[usize], m: &mut CMatrix) -> Result<()> {
        let local = self.check_sites(op, sites)?;
        if m.nrows() != self.dim() {
            return Err(Error::InvalidDimension(format!(
                "matrix has {} rows, space has dimension {}",
                m.nrows(),
                self.dim()
            )));
        }
        let offsets = self.local_offsets(sites);
        let bases = self.base_indices(sites);
        let mut buf = vec![ZERO; local];
        for col in 0..m.ncols() {
            for &base in &bases {
                for (a, slot) in buf.iter_mut().enumerate() {
                    *slot = m[(base + offsets[a], col)];
                }
                for r in 0..local {
                    let mut acc = ZERO;
                    for (a, &x) in buf.iter().enumerate() {
                        acc += op[(r, a)] * x;
                    }
                    m[(base + offsets[r], col)] = acc;
                }
            }
        }
        Ok(())
    }

    /// In-place `M ← M · op_{sites}`.
    pub fn apply_right(&self, op: &CMatrix, sites: &[usize], m: &mut CMatrix) -> Result<()> {
        let local = self.check_sites(op, sites)?;
        if m.ncols() != self.dim() {
            return Err(Error::InvalidDimension(format!(
                "matrix has {} columns, space has dimension {}",
                m.ncols(),
                self.dim()
            )));
        }
        let offsets = self.local_offsets(sites);
        let bases = self.base_indices(sites);
        let mut buf = vec![ZERO; local];
        for row in 0..m.nrows() {
            for &base in &bases {
                for (a, slot) in buf.iter_mut().enumerate() {
                    *slot = m[(row, base + offsets[a])];
                }
                for c in 0..local {
                    let mut acc = ZERO;
                    for (a, &x) in buf.iter().enumerate() {
                        acc += x * op[(a, c)];
                    }
                    m[(row, base + offsets[c])] = acc;
                }
            }
        }
        Ok(())
    }

    /// Dense embedding of `op` acting on `sites`.
    pub fn embed(&self, op: &CMatrix, sites: &[usize]) -> Result<CMatrix> {
        let mut m = identity(self.dim());
        self.apply_left(op, sites, &mut m)?;
        Ok(m)
    }

    /// `op^{⊗k}` over all factors (which must share one dimension).
    pub fn tensor_power(op: &CMatrix, k: usize) -> CMatrix {
        let mut acc = identity(1);
        for _ in 0..k {
            acc = kron(&acc, op);
        }
        acc
    }
}

/// A site on a chain of `chain_length` copies of `C^{local_dim}`, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SiteEmbedding {
    pub local_dim: usize,
    pub chain_length: usize,
    pub site: usize,
}

impl SiteEmbedding {
    pub fn new(local_dim: usize, chain_length: usize, site: usize) -> Result<Self> {
        if site == 0 || site > chain_length {
            return Err(Error::InvalidSites(format!(
                "site {site} outside 1..={chain_length}"
            )));
        }
        Ok(SiteEmbedding {
            local_dim,
            chain_length,
            site,
        })
    }

    pub fn embedded_dim(&self) -> usize {
        self.local_dim.pow(self.chain_length as u32)
    }
}

/// Embeds a two-site operator on chain sites `(i, j)` (1-based, in that
/// order) of an `n`-state chain of length `len`.
pub fn embed_two_site(op: &CMatrix, i: usize, j: usize, n: usize, len: usize) -> Result<CMatrix> {
    if i == j {
        return Err(Error::InvalidSites(format!("sites coincide ({i})")));
    }
    let si = SiteEmbedding::new(n, len, i)?;
    let sj = SiteEmbedding::new(n, len, j)?;
    TensorSpace::uniform(n, len).embed(op, &[si.site - 1, sj.site - 1])
}

/// Partial trace over the first factor of `C^{d_aux} ⊗ C^{d_rest}`.
pub fn trace_first(m: &CMatrix, d_aux: usize) -> CMatrix {
    let d_rest = m.nrows() / d_aux;
    CMatrix::from_fn(d_rest, d_rest, |r, c| {
        (0..d_aux).map(|a| m[(a * d_rest + r, a * d_rest + c)]).sum()
    })
}

pub fn fro(m: &CMatrix) -> f64 {
    m.norm()
}

/// `‖lhs − rhs‖_F / max(‖lhs‖_F, 1)`.
pub fn relative_residual(lhs: &CMatrix, rhs: &CMatrix) -> f64 {
    (lhs - rhs).norm() / lhs.norm().max(1.0)
}

/// `‖lhs − rhs‖_F / max(‖lhs‖_F, ‖rhs‖_F)`, scale-free; zero when both vanish.
pub fn scaled_residual(lhs: &CMatrix, rhs: &CMatrix) -> f64 {
    let scale = lhs.norm().max(rhs.norm());
    if scale == 0.0 {
        0.0
    } else {
        (lhs - rhs).norm() / scale
    }
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// `‖[A,B]‖_F / (‖A‖_F‖B‖_F)`, zero if either operand vanishes.
pub fn commutator_residual(a: &CMatrix, b: &CMatrix) -> f64 {
    let scale = a.norm() * b.norm();
    if scale == 0.0 {
        0.0
    } else {
        commutator(a, b).norm() / scale
    }
}

pub fn hermiticity_defect(a: &CMatrix) -> f64 {
    (a - a.adjoint()).norm()
}

/// Best scalar `k` with `a ≈ k·b`, plus `‖a − k·b‖ / ‖a‖`.
pub fn proportionality(a: &CMatrix, b: &CMatrix) -> (Complex64, f64) {
    let bb = b.dotc(b);
    if bb.norm() == 0.0 {
        return (ZERO, if a.norm() == 0.0 { 0.0 } else { 1.0 });
    }
    let k = b.dotc(a) / bb;
    let resid = (a - b * k).norm() / a.norm().max(f64::MIN_POSITIVE);
    (k, resid)
}

/// Residual of `a` against the closest multiple of the identity.
pub fn scalar_defect(a: &CMatrix) -> (Complex64, f64) {
    proportionality(a, &identity(a.nrows()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_matrix(seed: u64, r: usize, c: usize) -> CMatrix {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        CMatrix::from_fn(r, c, |_, _| c64(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
    }

    #[test]
    fn elementary_products() {
        let e12 = elementary(3, 1, 2).unwrap();
        let e23 = elementary(3, 2, 3).unwrap();
        let e31 = elementary(3, 3, 1).unwrap();
        assert_eq!(&e12 * &e23, elementary(3, 1, 3).unwrap());
        assert_eq!(&e12 * &e31, CMatrix::zeros(3, 3));
        assert_eq!(elementary(3, 4, 5).unwrap(), e12);
        assert_eq!(elementary(3, 0, 3).unwrap(), elementary(3, 3, 3).unwrap());
        assert!(matches!(elementary(0, 1, 1), Err(Error::InvalidDimension(_))));
    }

    #[test]
    fn elementary_delta_rule_exhaustive() {
        let d = 4usize;
        for (i, j, k, l) in itertools_quad(d as i64) {
            let prod = &elementary(d, i, j).unwrap() * &elementary(d, k, l).unwrap();
            let expected = if (j - k).rem_euclid(d as i64) == 0 {
                elementary(d, i, l).unwrap()
            } else {
                CMatrix::zeros(d, d)
            };
            assert_eq!(prod, expected);
        }
    }

    fn itertools_quad(d: i64) -> Vec<(i64, i64, i64, i64)> {
        let mut out = vec![];
        for i in -1..=d {
            for j in 0..=d {
                for k in 0..=d + 1 {
                    for l in 1..=d {
                        out.push((i, j, k, l));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn mod_index_canonical() {
        assert_eq!(ModIndex::new(0, 3).unwrap().canonical(), 3);
        assert_eq!(ModIndex::new(-1, 3).unwrap().canonical(), 2);
        assert_eq!(ModIndex::new(7, 3).unwrap().canonical(), 1);
        assert_eq!(ModIndex::new(3, 3).unwrap().offset(), 0);
    }

    #[test]
    fn kron_identities() {
        assert_eq!(kron(&identity(2), &identity(3)), identity(6));
        let k = kron(&elementary(2, 1, 2).unwrap(), &elementary(2, 2, 1).unwrap());
        assert_eq!(k.iter().filter(|z| z.norm() > 0.0).count(), 1);
        // labels reduce mod d, so label 2 ≡ offset 0
        assert_eq!(k[(2, 1)], ONE);
    }

    #[test]
    fn permutation_op_matches_expansion() {
        for n in 1..5usize {
            let p = permutation_op(n);
            let mut expanded = CMatrix::zeros(n * n, n * n);
            for i in 1..=n as i64 {
                for j in 1..=n as i64 {
                    expanded += kron(&elementary(n, i, j).unwrap(), &elementary(n, j, i).unwrap());
                }
            }
            assert_eq!(p, expanded);
            assert_eq!(&p * &p, identity(n * n));
        }
        let p2 = permutation_op(2);
        assert_eq!(p2[(1, 2)], ONE);
        assert_eq!(p2[(2, 1)], ONE);
        assert_eq!(p2[(0, 0)], ONE);
        assert_eq!(p2[(3, 3)], ONE);
    }

    #[test]
    fn swap_conjugation_exchanges_factors() {
        let a = random_matrix(1, 3, 3);
        let b = random_matrix(2, 3, 3);
        let p = permutation_op(3);
        let lhs = &p * kron(&a, &b) * &p;
        assert!((lhs - kron(&b, &a)).norm() < 1e-14);
    }

    #[test]
    fn embed_two_site_basic_cases() {
        let n = 3;
        let p = permutation_op(n);
        assert_eq!(embed_two_site(&p, 1, 2, n, 2).unwrap(), p);
        let a = random_matrix(3, n, n);
        let b = random_matrix(4, n, n);
        let swapped = embed_two_site(&kron(&a, &b), 2, 1, n, 2).unwrap();
        assert!((swapped - kron(&b, &a)).norm() < 1e-14);
        assert!(matches!(
            embed_two_site(&p, 2, 2, n, 3),
            Err(Error::InvalidSites(_))
        ));
        assert!(embed_two_site(&p, 0, 1, n, 3).is_err());
        assert!(embed_two_site(&p, 1, 4, n, 3).is_err());
    }

    #[test]
    fn embed_two_site_trace_multiplicativity() {
        let n = 3;
        let h = random_matrix(5, n * n, n * n);
        for len in 2..=4usize {
            for (i, j) in [(1usize, 2usize), (len, 1), (1, len), (2, len)] {
                if i == j {
                    continue;
                }
                let e = embed_two_site(&h, i, j, n, len).unwrap();
                let expected = h.trace() * (n.pow(len as u32 - 2) as f64);
                assert!((e.trace() - expected).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn wrapped_pair_equals_permutation_conjugation() {
        // H_{L1} on three sites equals the cyclic relabelling of H_{12}.
        let n = 2;
        let h = random_matrix(6, n * n, n * n);
        let direct = embed_two_site(&h, 3, 1, n, 3).unwrap();
        let p12 = embed_two_site(&permutation_op(n), 1, 2, n, 3).unwrap();
        let p23 = embed_two_site(&permutation_op(n), 2, 3, n, 3).unwrap();
        // move site 3 → 1 and 1 → 2 via P12 P23
        let shift = &p12 * &p23;
        let h12 = embed_two_site(&h, 1, 2, n, 3).unwrap();
        let via = shift.adjoint() * h12 * &shift;
        assert!((direct - via).norm() < 1e-13);
    }

    #[test]
    fn apply_right_matches_dense_product() {
        let space = TensorSpace::new(vec![2, 3, 3]);
        let op = random_matrix(7, 6, 6);
        let m = random_matrix(8, 18, 18);
        let dense = space.embed(&op, &[2, 0]).unwrap();
        let mut left = m.clone();
        space.apply_left(&op, &[2, 0], &mut left).unwrap();
        assert!((left - &dense * &m).norm() < 1e-12);
        let mut right = m.clone();
        space.apply_right(&op, &[2, 0], &mut right).unwrap();
        assert!((right - &m * &dense).norm() < 1e-12);
    }

    #[test]
    fn trace_first_of_product_state() {
        let a = random_matrix(9, 2, 2);
        let b = random_matrix(10, 3, 3);
        let t = trace_first(&kron(&a, &b), 2);
        assert!((t - &b * a.trace()).norm() < 1e-14);
    }

    proptest! {
        #[test]
        fn kron_norm_is_multiplicative(s1 in 0u64..500, s2 in 0u64..500, r in 1usize..4, c in 1usize..4) {
            let a = random_matrix(s1, r, c);
            let b = random_matrix(s2 + 1000, c, r);
            let k = kron(&a, &b);
            prop_assert!((k.norm() - a.norm() * b.norm()).abs() < 1e-12);
        }

        #[test]
        fn kron_is_associative(s in 0u64..200) {
            let a = random_matrix(s, 2, 2);
            let b = random_matrix(s + 1, 3, 2);
            let c = random_matrix(s + 2, 2, 3);
            let l = kron(&kron(&a, &b), &c);
            let r = kron(&a, &kron(&b, &c));
            prop_assert!((l - r).norm() < 1e-13);
        }
    }
}
