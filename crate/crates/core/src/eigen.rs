//! Hermitian and simultaneous eigendecompositions.

use nalgebra::SymmetricEigen;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{c64, commutator_residual, CMatrix, Complex64};

/// Relative hermiticity tolerance accepted by [`eig_hermitian`].
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Relative commutator tolerance accepted by [`simultaneous_eigenbasis`].
pub const COMMUTING_TOL: f64 = 1e-8;
/// Cluster width, relative to the spectral radius of the combination.
pub const CLUSTER_TOL: f64 = 1e-7;

const MAX_REFINE_DEPTH: usize = 4;

/// Eigenvalues (ascending) and unitary eigenvectors of a Hermitian matrix.
pub fn eig_hermitian(a: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    if !a.is_square() {
        return Err(Error::InvalidDimension(format!(
            "eig_hermitian needs a square matrix, got {}×{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let scale = a.norm().max(f64::MIN_POSITIVE);
    let defect = (a - a.adjoint()).norm();
    if defect > HERMITIAN_TOL * scale {
        return Err(Error::PreconditionViolation(format!(
            "matrix is not hermitian (‖A − A†‖ = {defect:.3e})"
        )));
    }
    let sym = (a + a.adjoint()) * c64(0.5, 0.0);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..a.nrows()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(a.nrows(), a.ncols());
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok((values, vectors))
}

/// Eigenvalues of a general complex matrix from its Schur form.
pub fn eigenvalues(a: &CMatrix) -> Vec<Complex64> {
    let (_, t) = a.clone().schur().unpack();
    (0..t.nrows()).map(|i| t[(i, i)]).collect()
}

/// A basis in which every member of a commuting family is diagonal.
#[derive(Debug, Clone)]
pub struct CommonEigenbasis {
    /// Columns are the common eigenvectors (unit norm).
    pub vectors: CMatrix,
    /// Groups of columns on which every member acts as the same scalar.
    pub clusters: Vec<Vec<usize>>,
    /// Columns whose cluster could not be fully diagonalized.
    pub unresolved: Vec<usize>,
}

impl CommonEigenbasis {
    /// Rayleigh quotient of `m` on column `k`.
    pub fn eigenvalue(&self, m: &CMatrix, k: usize) -> Complex64 {
        let v = self.vectors.column(k);
        v.dotc(&(m * v)) / v.dotc(&v)
    }

    /// Largest `‖M v − μ v‖ / ‖M‖` over columns, for each member.
    pub fn residual(&self, m: &CMatrix) -> f64 {
        let scale = m.norm().max(f64::MIN_POSITIVE);
        (0..self.vectors.ncols())
            .map(|k| {
                let v = self.vectors.column(k).into_owned();
                let mu = self.eigenvalue(m, k);
                (m * &v - &v * mu).norm() / scale
            })
            .fold(0.0, f64::max)
    }
}

/// Common eigenbasis of a commuting family, with a fixed seed for the
/// random combination.
pub fn simultaneous_eigenbasis(family: &[CMatrix]) -> Result<CommonEigenbasis> {
    simultaneous_eigenbasis_seeded(family, 0)
}

pub fn simultaneous_eigenbasis_seeded(family: &[CMatrix], seed: u64) -> Result<CommonEigenbasis> {
    let dim = match family.first() {
        Some(m) => m.nrows(),
        None => return Err(Error::PreconditionViolation("empty family".into())),
    };
    if family.iter().any(|m| m.nrows() != dim || m.ncols() != dim) {
        return Err(Error::InvalidDimension("family members differ in shape".into()));
    }
    for (i, a) in family.iter().enumerate() {
        for b in &family[i + 1..] {
            let r = commutator_residual(a, b);
            if r > COMMUTING_TOL {
                return Err(Error::PreconditionViolation(format!(
                    "family does not commute (relative commutator {r:.3e})"
                )));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = CMatrix::identity(dim, dim);
    let mut out = Refinement::default();
    refine(family, &basis, &mut rng, 0, &mut out);

    let mut vectors = CMatrix::zeros(dim, out.columns.len());
    for (k, col) in out.columns.iter().enumerate() {
        let nrm = col.norm();
        vectors.set_column(k, &(col / c64(nrm, 0.0)));
    }
    Ok(CommonEigenbasis {
        vectors,
        clusters: out.clusters,
        unresolved: out.unresolved,
    })
}

#[derive(Default)]
struct Refinement {
    columns: Vec<nalgebra::DVector<Complex64>>,
    clusters: Vec<Vec<usize>>,
    unresolved: Vec<usize>,
}

fn is_scalar(m: &CMatrix) -> bool {
    let k = m.nrows();
    let mu = m.trace() / c64(k as f64, 0.0);
    let scale = m.norm().max(1e-300);
    (m - CMatrix::identity(k, k) * mu).norm() <= 1e-9 * scale.max(1.0)
}

/// Diagonalize `family` restricted to the columns of `basis`, which span a
/// joint invariant subspace; pushes resulting vectors (in the ambient space).
fn refine(
    family: &[CMatrix],
    basis: &CMatrix,
    rng: &mut ChaCha8Rng,
    depth: usize,
    out: &mut Refinement,
) {
    let k = basis.ncols();
    if k == 1 || family.iter().all(is_scalar) {
        let start = out.columns.len();
        for c in 0..k {
            out.columns.push(basis.column(c).into_owned());
        }
        out.clusters.push((start..start + k).collect());
        return;
    }
    if depth >= MAX_REFINE_DEPTH {
        let start = out.columns.len();
        for c in 0..k {
            out.columns.push(basis.column(c).into_owned());
        }
        out.clusters.push((start..start + k).collect());
        out.unresolved.extend(start..start + k);
        return;
    }

    let mut combo = CMatrix::zeros(k, k);
    for m in family {
        let scale = m.norm().max(f64::MIN_POSITIVE);
        let coef = rng.random_range(0.5..1.5) / scale;
        combo += m * c64(coef, 0.0);
    }
    let eig = eigenvalues(&combo);
    let radius = eig.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let groups = cluster_values(&eig, CLUSTER_TOL * radius);

    for group in groups {
        let mult = group.len();
        let mu: Complex64 = group.iter().map(|&i| eig[i]).sum::<Complex64>() / c64(mult as f64, 0.0);
        let shifted = &combo - CMatrix::identity(k, k) * mu;
        let (null, ok) = null_space(&shifted, mult, 1e-6 * radius);
        let sub = basis * &null;
        if !ok {
            let start = out.columns.len();
            for c in 0..sub.ncols() {
                out.columns.push(sub.column(c).into_owned());
            }
            out.clusters.push((start..start + sub.ncols()).collect());
            out.unresolved.extend(start..start + sub.ncols());
            continue;
        }
        if mult == 1 {
            let start = out.columns.len();
            out.columns.push(sub.column(0).into_owned());
            out.clusters.push(vec![start]);
            continue;
        }
        // restrict the family to the (orthonormal) cluster subspace
        let restricted: Vec<CMatrix> = family.iter().map(|m| null.adjoint() * m * &null).collect();
        let mut inner = Refinement::default();
        refine(&restricted, &CMatrix::identity(mult, mult), rng, depth + 1, &mut inner);
        let offset = out.columns.len();
        for col in inner.columns {
            out.columns.push(&sub * col);
        }
        out.clusters
            .extend(inner.clusters.into_iter().map(|g| g.into_iter().map(|i| i + offset).collect()));
        out.unresolved.extend(inner.unresolved.into_iter().map(|i| i + offset));
    }
}

/// Single-linkage grouping of complex values within `tol`.
pub fn cluster_values(values: &[Complex64], tol: f64) -> Vec<Vec<usize>> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() <= tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b.max(a)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if root_slot[r] == usize::MAX {
            root_slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[root_slot[r]].push(i);
    }
    groups
}

/// Orthonormal basis of the `k` right singular vectors with the smallest
/// singular values; the flag is false if the `k`-th exceeds `tol`.
fn null_space(m: &CMatrix, k: usize, tol: f64) -> (CMatrix, bool) {
    let dim = m.ncols();
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    let mut basis = CMatrix::zeros(dim, k);
    for (c, &idx) in order.iter().take(k).enumerate() {
        let row = v_t.row(idx).adjoint();
        basis.set_column(c, &row);
    }
    let ok = svd.singular_values[order[k - 1]] <= tol;
    (basis, ok)
}

/// Off-diagonal mass of `V⁻¹ M V` relative to `‖M‖`.
pub fn off_diagonal_residual(vectors: &CMatrix, m: &CMatrix) -> Option<f64> {
    let inv = vectors.clone().try_inverse()?;
    let d = inv * m * vectors;
    let mut off = 0.0;
    for r in 0..d.nrows() {
        for c in 0..d.ncols() {
            if r != c {
                off += d[(r, c)].norm_sqr();
            }
        }
    }
    Some(off.sqrt() / m.norm().max(f64::MIN_POSITIVE))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{permutation_op, ONE};
    use proptest::prelude::{prop_assert, proptest, ProptestConfig};

    fn random_hermitian(seed: u64, d: usize) -> CMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = CMatrix::from_fn(d, d, |_, _| c64(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        &a + a.adjoint()
    }

    fn reconstruct(vals: &[f64], v: &CMatrix) -> CMatrix {
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            vals.len(),
            vals.iter().map(|&x| c64(x, 0.0)),
        ));
        v * d * v.adjoint()
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let (vals, _) = eig_hermitian(&CMatrix::identity(4, 4)).unwrap();
        assert!(vals.iter().all(|&x| (x - 1.0).abs() < 1e-14));
    }

    #[test]
    fn swap_spectrum_n2() {
        let (vals, v) = eig_hermitian(&permutation_op(2)).unwrap();
        let expected = [-1.0, 1.0, 1.0, 1.0];
        for (a, b) in vals.iter().zip(expected) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!((v.adjoint() * &v - CMatrix::identity(4, 4)).norm() < 1e-13);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = CMatrix::identity(3, 3);
        m[(0, 1)] = ONE;
        assert!(matches!(eig_hermitian(&m), Err(Error::PreconditionViolation(_))));
    }

    #[test]
    fn reconstruction_at_dimension_729() {
        let a = random_hermitian(11, 729);
        let (vals, v) = eig_hermitian(&a).unwrap();
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        assert!((reconstruct(&vals, &v) - &a).norm() <= 1e-9 * a.norm());
    }

    #[test]
    fn identity_and_swap_family() {
        let p = permutation_op(3);
        let fam = vec![CMatrix::identity(9, 9), p.clone()];
        let basis = simultaneous_eigenbasis(&fam).unwrap();
        assert!(basis.unresolved.is_empty());
        assert!(basis.residual(&p) < 1e-12);
        for k in 0..9 {
            let mu = basis.eigenvalue(&p, k);
            assert!((mu.norm() - 1.0).abs() < 1e-12 && mu.im.abs() < 1e-12);
        }
    }

    #[test]
    fn non_commuting_family_is_rejected() {
        let mut a = CMatrix::zeros(2, 2);
        a[(0, 1)] = ONE;
        let b = a.transpose();
        assert!(matches!(
            simultaneous_eigenbasis(&[a, b]),
            Err(Error::PreconditionViolation(_))
        ));
    }

    #[test]
    fn degenerate_blocks_are_split_by_later_members() {
        // A is degenerate on a 3-dim block that B splits.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let q = {
            let m = CMatrix::from_fn(6, 6, |_, _| c64(rng.random::<f64>(), rng.random::<f64>()));
            m.qr().q()
        };
        let da = [1.0, 1.0, 1.0, 2.0, 3.0, 3.0];
        let db = [5.0, 6.0, 7.0, 8.0, 9.0, 9.0];
        let mk = |d: &[f64]| {
            let diag = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                6,
                d.iter().map(|&x| c64(x, 0.0)),
            ));
            &q * diag * q.adjoint()
        };
        let (a, b) = (mk(&da), mk(&db));
        let basis = simultaneous_eigenbasis(&[a.clone(), b.clone()]).unwrap();
        assert!(basis.unresolved.is_empty());
        assert!(basis.residual(&a) < 1e-10);
        assert!(basis.residual(&b) < 1e-10);
        // the final pair stays jointly degenerate
        assert_eq!(basis.clusters.iter().filter(|c| c.len() == 2).count(), 1);
    }

    #[test]
    fn non_normal_commuting_pair() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let s = CMatrix::from_fn(5, 5, |_, _| c64(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        let si = s.clone().try_inverse().unwrap();
        let d1 = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(
            [1.0, 1.0, 2.0, 3.0, 4.0].iter().map(|&x| c64(x, 0.0)).collect(),
        ));
        let d2 = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(
            [0.0, 1.0, 0.0, 0.0, 0.0].iter().map(|&x| c64(x, 0.0)).collect(),
        ));
        let a = &s * d1 * &si;
        let b = &s * d2 * &si;
        let basis = simultaneous_eigenbasis(&[a.clone(), b.clone()]).unwrap();
        assert!(basis.unresolved.is_empty());
        assert!(basis.residual(&a) < 1e-9);
        assert!(basis.residual(&b) < 1e-9);
        assert!(off_diagonal_residual(&basis.vectors, &b).unwrap() < 1e-8);
    }

    #[test]
    fn jordan_block_is_flagged() {
        let mut j = CMatrix::identity(2, 2);
        j[(0, 1)] = ONE;
        let basis = simultaneous_eigenbasis(&[j]).unwrap();
        assert_eq!(basis.unresolved.len(), 2);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn hermitian_reconstruction(seed in 0u64..10_000, d in 1usize..40) {
            let a = random_hermitian(seed, d);
            let (vals, v) = eig_hermitian(&a).unwrap();
            prop_assert!((reconstruct(&vals, &v) - &a).norm() <= 1e-9 * a.norm().max(1e-300));
        }
    }
}
