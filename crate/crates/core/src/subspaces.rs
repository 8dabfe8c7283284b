//! Orthogonal projectors, the gap and semigap metrics between subspaces,
//! kernel semigap bound, and a restricted Hausdorff distance between
//! invariant-subspace families.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numcore::{self, c64, CMatrix, CVector, Tolerance};

/// A subspace of `C^n` carried by an orthonormal (possibly empty) column
/// basis.
#[derive(Debug, Clone)]
pub struct SubspaceBasis {
    ambient: usize,
    basis: CMatrix,
}

impl SubspaceBasis {
    /// Wrap columns that are already orthonormal (validated to 1e-12).
    pub fn from_orthonormal(ambient: usize, basis: CMatrix) -> Result<Self> {
        if basis.nrows() != ambient {
            return Err(Error::InvalidInput(format!(
                "basis rows {} do not match ambient dimension {ambient}",
                basis.nrows()
            )));
        }
        if basis.ncols() > ambient {
            return Err(Error::InvalidInput(
                "more basis vectors than the ambient dimension".into(),
            ));
        }
        let k = basis.ncols();
        if k > 0 {
            let gram = basis.adjoint() * &basis;
            if (gram - CMatrix::identity(k, k)).norm() > 1e-12 * (k as f64).sqrt().max(1.0) {
                return Err(Error::InvalidInput(
                    "basis columns are not orthonormal".into(),
                ));
            }
        }
        Ok(SubspaceBasis { ambient, basis })
    }

    /// Orthonormalize an arbitrary spanning set (SVD based; numerically
    /// dependent columns are dropped at `rank_rel`).
    pub fn from_spanning(ambient: usize, span: &CMatrix, rank_rel: f64) -> Result<Self> {
        if span.nrows() != ambient {
            return Err(Error::InvalidInput("spanning set has wrong row count".into()));
        }
        if span.ncols() == 0 {
            return Ok(SubspaceBasis::empty(ambient));
        }
        numcore::ensure_finite(span)?;
        let svd = span.clone().svd(true, true);
        let u = svd.u.as_ref().expect("svd requested u");
        let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
        let mut cols: Vec<usize> = Vec::new();
        for i in 0..svd.singular_values.len() {
            if smax > 0.0 && svd.singular_values[i] > rank_rel * smax {
                cols.push(i);
            }
        }
        let mut basis = CMatrix::zeros(ambient, cols.len());
        for (j, &i) in cols.iter().enumerate() {
            basis.set_column(j, &u.column(i));
        }
        SubspaceBasis::from_orthonormal(ambient, basis)
    }

    pub fn empty(ambient: usize) -> Self {
        SubspaceBasis {
            ambient,
            basis: CMatrix::zeros(ambient, 0),
        }
    }

    pub fn full(ambient: usize) -> Self {
        SubspaceBasis {
            ambient,
            basis: CMatrix::identity(ambient, ambient),
        }
    }

    pub fn span_of(ambient: usize, vectors: &[CVector]) -> Result<Self> {
        let mut m = CMatrix::zeros(ambient, vectors.len());
        for (j, v) in vectors.iter().enumerate() {
            m.set_column(j, v);
        }
        SubspaceBasis::from_spanning(ambient, &m, 1e-10)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn projector(&self) -> Projector {
        let p = if self.dim() == 0 {
            CMatrix::zeros(self.ambient, self.ambient)
        } else {
            &self.basis * self.basis.adjoint()
        };
        Projector { matrix: p }
    }

    /// Orthogonal complement.
    pub fn complement(&self) -> Result<SubspaceBasis> {
        // kernel of B* (rows span the subspace's coordinates)
        if self.dim() == 0 {
            return Ok(SubspaceBasis::full(self.ambient));
        }
        if self.dim() == self.ambient {
            return Ok(SubspaceBasis::empty(self.ambient));
        }
        let tol = Tolerance {
            rank_rel: 1e-12,
            ..Tolerance::default()
        };
        numcore::kernel_basis(&self.basis.adjoint(), &tol)
    }
}

/// Orthogonal projector: Hermitian, idempotent.
#[derive(Debug, Clone)]
pub struct Projector {
    matrix: CMatrix,
}

impl Projector {
    /// Validating constructor for externally supplied projectors.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let n = numcore::ensure_square(&matrix)?;
        let _ = n;
        if (&matrix * &matrix - &matrix).norm() > 1e-12 * matrix.norm().max(1.0) {
            return Err(Error::InvalidInput("matrix is not idempotent".into()));
        }
        if (matrix.adjoint() - &matrix).norm() > 1e-12 * matrix.norm().max(1.0) {
            return Err(Error::InvalidInput("matrix is not Hermitian".into()));
        }
        Ok(Projector { matrix })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }
}

/// `P = sum v_i v_i*`; the zero matrix for the empty basis.
pub fn projector(m: &SubspaceBasis) -> Projector {
    m.projector()
}

fn ensure_same_ambient(m: &SubspaceBasis, n: &SubspaceBasis) -> Result<usize> {
    if m.ambient_dim() != n.ambient_dim() {
        return Err(Error::InvalidInput(format!(
            "ambient dimensions differ: {} vs {}",
            m.ambient_dim(),
            n.ambient_dim()
        )));
    }
    Ok(m.ambient_dim())
}

/// Gap `theta(M, N) = || P_M - P_N ||`, always in `[0, 1]`.
pub fn gap(m: &SubspaceBasis, n: &SubspaceBasis) -> Result<f64> {
    ensure_same_ambient(m, n)?;
    let d = m.projector().matrix - n.projector().matrix;
    numcore::spectral_norm(&d)
}

/// Semigap `theta_0(M, N) = sup_{x in M, |x|=1} || x - P_N x ||`, computed
/// as the largest singular value of `(I - P_N) B_M`; 0 for the trivial `M`.
pub fn semigap(m: &SubspaceBasis, n: &SubspaceBasis) -> Result<f64> {
    let dim = ensure_same_ambient(m, n)?;
    if m.dim() == 0 {
        return Ok(0.0);
    }
    let pn = n.projector();
    let rest = m.basis() - pn.matrix() * m.basis();
    let _ = dim;
    numcore::spectral_norm(&rest)
}

/// `theta_0(ker A, ker A0)` under the given tolerance.
pub fn kernel_semigap(a: &CMatrix, a0: &CMatrix, tol: &Tolerance) -> Result<f64> {
    let na = numcore::ensure_square(a)?;
    let n0 = numcore::ensure_square(a0)?;
    if na != n0 {
        return Err(Error::InvalidInput("matrices must have equal size".into()));
    }
    let ka = numcore::kernel_basis(a, tol)?;
    let k0 = numcore::kernel_basis(a0, tol)?;
    semigap(&ka, &k0)
}

/// Restricted Hausdorff-distance estimate between invariant-subspace
/// families. `restricted` is always true: the family is only the lattice
/// generated by Jordan-chain prefixes and sums of generalized eigenspaces,
/// so the value is an estimate of the true distance, not the distance.
#[derive(Debug, Clone, serde::Serialize)]
pub struct HausdorffEstimate {
    pub value: f64,
    pub restricted: bool,
}

/// Enumerable invariant subspaces of `a`: Jordan-chain prefixes and sums of
/// generalized eigenspaces, up to `max_dim`, plus the trivial ones.
fn invariant_family(a: &CMatrix, tol: &Tolerance, max_dim: usize) -> Result<Vec<SubspaceBasis>> {
    let n = numcore::ensure_square(a)?;
    let omega = crate::structure::jordan_structure(a, tol)?;
    let chains = crate::matching::jordan_chains(a, &omega, tol)?;
    let mut family: Vec<SubspaceBasis> = vec![SubspaceBasis::empty(n)];
    if n <= max_dim {
        family.push(SubspaceBasis::full(n));
    }
    for chain in &chains.chains {
        for j in 1..=chain.vectors.len().min(max_dim) {
            family.push(SubspaceBasis::span_of(n, &chain.vectors[..j])?);
        }
    }
    // generalized eigenspaces per eigenvalue, then sums over subsets
    let mut gen_spaces: Vec<CMatrix> = Vec::new();
    for entry in &omega.entries {
        let top = entry.sizes.first().copied().unwrap_or(1);
        let shifted = a - CMatrix::identity(n, n) * entry.value;
        let mut pw = CMatrix::identity(n, n);
        for _ in 0..top {
            pw = &pw * &shifted;
        }
        let kb = numcore::kernel_basis(&pw, tol)?;
        gen_spaces.push(kb.basis().clone());
    }
    let q = gen_spaces.len().min(12);
    for mask in 1u32..(1u32 << q) {
        let mut cols: Vec<CVector> = Vec::new();
        for (i, gs) in gen_spaces.iter().enumerate().take(q) {
            if mask & (1 << i) != 0 {
                for c in gs.column_iter() {
                    cols.push(c.clone_owned());
                }
            }
        }
        if cols.is_empty() {
            continue;
        }
        let sub = SubspaceBasis::span_of(n, &cols)?;
        if sub.dim() <= max_dim {
            family.push(sub);
        }
    }
    // dedup by gap
    let mut dedup: Vec<SubspaceBasis> = Vec::new();
    for s in family {
        let mut seen = false;
        for t in &dedup {
            if s.dim() == t.dim() && gap(&s, t)? < 1e-8 {
                seen = true;
                break;
            }
        }
        if !seen {
            dedup.push(s);
        }
    }
    Ok(dedup)
}

/// Hausdorff distance between the (restricted) invariant-subspace families
/// of `a` and `b`.
pub fn hausdorff_inv_distance(
    a: &CMatrix,
    b: &CMatrix,
    tol: &Tolerance,
    max_dim: usize,
) -> Result<HausdorffEstimate> {
    let na = numcore::ensure_square(a)?;
    let nb = numcore::ensure_square(b)?;
    if na != nb {
        return Err(Error::InvalidInput("matrices must have equal size".into()));
    }
    if max_dim > na {
        return Err(Error::InvalidInput("max_dim exceeds the dimension".into()));
    }
    let fam_a = invariant_family(a, tol, max_dim)?;
    let fam_b = invariant_family(b, tol, max_dim)?;
    let directed = |from: &[SubspaceBasis], to: &[SubspaceBasis]| -> Result<f64> {
        let mut worst = 0.0f64;
        for m in from {
            let mut best = f64::INFINITY;
            for t in to {
                best = best.min(gap(m, t)?);
            }
            worst = worst.max(best);
        }
        Ok(worst)
    };
    let value = directed(&fam_a, &fam_b)?.max(directed(&fam_b, &fam_a)?);
    Ok(HausdorffEstimate {
        value,
        restricted: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::random::random_subspace;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn re(data: &[f64], n: usize, m: usize) -> CMatrix {
        CMatrix::from_row_slice(n, m, &data.iter().map(|&x| c64(x, 0.0)).collect::<Vec<_>>())
    }

    fn line(n: usize, entries: &[(usize, f64)]) -> SubspaceBasis {
        let mut v = CVector::zeros(n);
        for &(i, x) in entries {
            v[i] = c64(x, 0.0);
        }
        let v = &v / c64(v.norm(), 0.0);
        SubspaceBasis::span_of(n, &[v]).unwrap()
    }

    #[test]
    fn projector_examples() {
        let empty = SubspaceBasis::empty(3);
        assert_eq!(projector(&empty).matrix(), &CMatrix::zeros(3, 3));
        let full = SubspaceBasis::full(3);
        assert!((projector(&full).matrix() - CMatrix::identity(3, 3)).norm() < 1e-14);
        // outer product by hand for span{(e1+e3)/sqrt2}
        let m = line(3, &[(0, 1.0), (2, 1.0)]);
        let expected = re(&[0.5, 0.0, 0.5, 0.0, 0.0, 0.0, 0.5, 0.0, 0.5], 3, 3);
        assert!((projector(&m).matrix() - expected).norm() < 1e-13);
    }

    #[test]
    fn projector_rejects_non_orthonormal() {
        let bad = re(&[1.0, 1.0, 0.0, 0.0, 0.0, 0.0], 3, 2);
        assert!(SubspaceBasis::from_orthonormal(3, bad).is_err());
    }

    #[test]
    fn gap_examples() {
        let e1 = line(3, &[(0, 1.0)]);
        let e2 = line(3, &[(1, 1.0)]);
        assert!(gap(&e1, &e1).unwrap() < 1e-14);
        assert!((gap(&e1, &e2).unwrap() - 1.0).abs() < 1e-12);
        // eigenvalues of the explicit 3x3 projector difference: +-1/sqrt2
        let diag = line(3, &[(0, 1.0), (2, 1.0)]);
        assert!((gap(&e1, &diag).unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn semigap_examples() {
        let n = 3;
        let e1 = line(n, &[(0, 1.0)]);
        let full = SubspaceBasis::full(n);
        assert_eq!(semigap(&e1, &full).unwrap(), 0.0);
        // dim M > dim N forces semigap 1
        let plane = SubspaceBasis::span_of(
            n,
            &[
                CVector::from_vec(vec![c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)]),
                CVector::from_vec(vec![c64(0.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0)]),
            ],
        )
        .unwrap();
        assert!((semigap(&plane, &e1).unwrap() - 1.0).abs() < 1e-12);
        // singular value of (I - P_N) e1
        let diag = line(n, &[(0, 1.0), (2, 1.0)]);
        assert!(
            (semigap(&e1, &diag).unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12
        );
        // trivial M
        assert_eq!(semigap(&SubspaceBasis::empty(n), &e1).unwrap(), 0.0);
    }

    #[test]
    fn gap_mismatched_ambient_rejected() {
        let a = line(3, &[(0, 1.0)]);
        let b = line(4, &[(0, 1.0)]);
        assert!(gap(&a, &b).is_err());
        assert!(semigap(&a, &b).is_err());
    }

    #[test]
    fn kernel_semigap_examples() {
        let tol = Tolerance::default();
        let a0 = re(&[0.0, 1.0, 0.0, 0.0], 2, 2);
        assert_eq!(kernel_semigap(&a0, &a0, &tol).unwrap(), 0.0);
        // ker A trivial: semigap from the zero subspace is 0
        let a = re(&[0.0, 1.0, 1e-6, 0.0], 2, 2);
        assert_eq!(kernel_semigap(&a, &a0, &tol).unwrap(), 0.0);
        // brute-force null spaces at delta = 1e-4, 1e-6
        let a0 = re(&[0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0], 3, 3);
        for delta in [1e-4, 1e-6] {
            let mut a = a0.clone();
            a[(2, 1)] = c64(delta, 0.0);
            let v = kernel_semigap(&a, &a0, &tol).unwrap();
            assert!(v <= 10.0 * delta, "semigap {v} not O(delta) at {delta}");
        }
    }

    #[test]
    fn orthocomplement_identity() {
        // theta(M, N) = theta(N_perp, M_perp)
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let m = random_subspace(6, 2, &mut rng);
            let n = random_subspace(6, 4, &mut rng);
            let lhs = gap(&m, &n).unwrap();
            let rhs = gap(&n.complement().unwrap(), &m.complement().unwrap()).unwrap();
            assert!((lhs - rhs).abs() < 1e-10);
        }
    }

    #[test]
    fn hausdorff_examples() {
        let tol = Tolerance::default();
        let a = re(&[1.0, 0.0, 0.0, 2.0], 2, 2);
        let same = hausdorff_inv_distance(&a, &a, &tol, 2).unwrap();
        assert!(same.value < 1e-10);
        assert!(same.restricted);
        // diag(1,2) vs diag(2,1): same subspace families
        let b = re(&[2.0, 0.0, 0.0, 1.0], 2, 2);
        assert!(hausdorff_inv_distance(&a, &b, &tol, 2).unwrap().value < 1e-10);
        // J2(0) vs diag(0, delta): span{e2} is invariant only for the second
        let j2 = re(&[0.0, 1.0, 0.0, 0.0], 2, 2);
        let d = re(&[0.0, 0.0, 0.0, 1e-3], 2, 2);
        let est = hausdorff_inv_distance(&j2, &d, &tol, 2).unwrap();
        assert!((est.value - 1.0).abs() < 1e-8, "value {}", est.value);
    }
}
