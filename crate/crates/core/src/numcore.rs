//! Dense complex matrix primitives.
//!
//! Everything downstream works on [`CMatrix`] (a dense `Complex64` matrix).
//! This module supplies the spectral norm, tolerance-controlled rank and
//! kernel extraction, QR with a positive-real-diagonal uniqueness convention,
//! a rotation-style unitary completion, and a baseline Schur decomposition
//! with eigenvalue reordering by adjacent swaps.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::subspaces::SubspaceBasis;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Shorthand complex constructor.
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Tolerances threaded through every rank/cluster/residual decision.
///
/// `cluster_radius = None` asks each operation to derive a radius from its
/// input: `norm * rank_rel^(1/n)` by default, which lumps the eigenvalue
/// cloud a backward-stable solver produces for a defective eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct Tolerance {
    /// Relative singular-value cutoff for rank decisions, in (0, 1).
    pub rank_rel: f64,
    /// Relative residual accepted from factorizations, in (0, 1).
    pub residual_rel: f64,
    /// Eigenvalue clustering radius; `None` means derive per call.
    pub cluster_radius: Option<f64>,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rank_rel: 1e-8,
            residual_rel: 1e-10,
            cluster_radius: None,
        }
    }
}

impl Tolerance {
    pub fn with_cluster_radius(mut self, radius: f64) -> Self {
        self.cluster_radius = Some(radius);
        self
    }

    pub fn check(&self) -> Result<()> {
        let ok_unit = |x: f64| x.is_finite() && x > 0.0 && x < 1.0;
        if !ok_unit(self.rank_rel) || !ok_unit(self.residual_rel) {
            return Err(Error::InvalidInput(format!(
                "tolerance fields must lie in (0,1): rank_rel={}, residual_rel={}",
                self.rank_rel, self.residual_rel
            )));
        }
        if let Some(r) = self.cluster_radius {
            if !r.is_finite() || r < 0.0 {
                return Err(Error::InvalidInput(format!(
                    "cluster_radius must be finite and >= 0, got {r}"
                )));
            }
        }
        Ok(())
    }

    /// Clustering radius for an `n x n` matrix of the given norm when none
    /// was fixed explicitly.
    pub fn effective_cluster_radius(&self, norm: f64, n: usize) -> f64 {
        match self.cluster_radius {
            Some(r) => r,
            None => norm * self.rank_rel.powf(1.0 / n.max(1) as f64),
        }
    }
}

/// One Schur factorization `A = U T U*`.
#[derive(Debug, Clone)]
pub struct SchurPair {
    /// Unitary factor.
    pub u: CMatrix,
    /// Upper-triangular factor; its diagonal carries the eigenvalues.
    pub t: CMatrix,
}

/// Requested ordering of the Schur diagonal.
#[derive(Debug, Clone)]
pub enum DiagOrder {
    /// Whatever the iteration produced.
    AsIs,
    /// Descending real part, ties broken by descending imaginary part.
    RealDescending,
    /// Greedy nearest-match against a target sequence.
    Target(Vec<Complex64>),
}

pub fn ensure_finite(m: &CMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidInput(
            "matrix contains non-finite entries".into(),
        ))
    }
}

pub fn ensure_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::InvalidInput(format!(
            "expected a nonempty square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m.nrows())
}

/// Frobenius norm of the strict lower triangle.
pub fn strict_lower_norm(m: &CMatrix) -> f64 {
    let mut s = 0.0;
    for i in 0..m.nrows() {
        for j in 0..i.min(m.ncols()) {
            s += m[(i, j)].norm_sqr();
        }
    }
    s.sqrt()
}

pub fn is_upper_triangular(m: &CMatrix, rel: f64) -> bool {
    let scale = m.norm().max(1e-300);
    strict_lower_norm(m) <= rel * scale
}

fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}

/// Largest singular value; 0 for the zero (or empty) matrix.
pub fn spectral_norm(m: &CMatrix) -> Result<f64> {
    ensure_finite(m)?;
    Ok(singular_values(m).first().copied().unwrap_or(0.0))
}

/// Rank decision together with a flag for cutoff ambiguity: true when some
/// singular value sits within one decade of the cutoff.
pub(crate) fn rank_with_margin(m: &CMatrix, tol: &Tolerance) -> Result<(usize, bool)> {
    ensure_finite(m)?;
    tol.check()?;
    let sv = singular_values(m);
    let smax = sv.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return Ok((0, false));
    }
    let cutoff = tol.rank_rel * smax;
    let rank = sv.iter().filter(|&&s| s > cutoff).count();
    let ambiguous = sv
        .iter()
        .any(|&s| s > cutoff / 10.0 && s <= cutoff * 10.0 && s != smax);
    Ok((rank, ambiguous))
}

/// Count of singular values above `rank_rel * sigma_max`.
pub fn numerical_rank(m: &CMatrix, tol: &Tolerance) -> Result<usize> {
    rank_with_margin(m, tol).map(|(r, _)| r)
}

/// Orthonormal basis of the numerical null space (right singular vectors
/// whose singular value falls at or below the cutoff). May be empty.
pub fn kernel_basis(m: &CMatrix, tol: &Tolerance) -> Result<SubspaceBasis> {
    ensure_finite(m)?;
    tol.check()?;
    let n = m.ncols();
    let svd = m.clone().svd(true, true);
    let v_t = svd.v_t.as_ref().expect("svd requested v_t");
    let mut sv: Vec<(usize, f64)> = svd.singular_values.iter().copied().enumerate().collect();
    sv.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    let smax = sv.first().map(|&(_, s)| s).unwrap_or(0.0);
    let cutoff = tol.rank_rel * smax;
    // v_t has min(nrows, ncols) rows; directions with no singular value at
    // all (wide kernels of flat matrices) cannot occur here since callers
    // pass square matrices, but keep the count honest anyway.
    let mut cols: Vec<CVector> = Vec::new();
    for &(idx, s) in &sv {
        if smax == 0.0 || s <= cutoff {
            let row = v_t.row(idx);
            cols.push(CVector::from_iterator(n, row.iter().map(|z| z.conj())));
        }
    }
    let k = cols.len();
    let mut basis = CMatrix::zeros(n, k);
    for (j, v) in cols.iter().enumerate() {
        basis.set_column(j, v);
    }
    SubspaceBasis::from_orthonormal(n, basis)
}

/// Minimal-norm least-squares solve via the SVD pseudo-inverse.
/// Returns the solution and the residual norm `|| M x - b ||`.
pub fn lstsq_min_norm(m: &CMatrix, b: &CVector, rank_rel: f64) -> Result<(CVector, f64)> {
    ensure_finite(m)?;
    let svd = m.clone().svd(true, true);
    let u = svd.u.as_ref().expect("svd requested u");
    let v_t = svd.v_t.as_ref().expect("svd requested v_t");
    let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    let cutoff = rank_rel * smax;
    let ub = u.adjoint() * b;
    let mut y = CVector::zeros(v_t.nrows());
    for i in 0..svd.singular_values.len() {
        let s = svd.singular_values[i];
        if smax > 0.0 && s > cutoff {
            y[i] = ub[i] / c64(s, 0.0);
        }
    }
    let x = v_t.adjoint() * y;
    let residual = (m * &x - b).norm();
    Ok((x, residual))
}

/// Unitary `V` whose first column is parallel to `v`, chosen as the plane
/// rotation carrying `e1` to `v/||v||` (identity on the orthogonal
/// complement of `span{e1, v}`), with the phase fixed so the `(1,1)` entry
/// is real nonnegative. Satisfies `||V - I|| <= || v/||v|| - e1 ||`.
pub fn unitary_completion(v: &CVector, n: usize) -> Result<CMatrix> {
    if v.len() != n {
        return Err(Error::InvalidInput(format!(
            "vector length {} does not match requested dimension {n}",
            v.len()
        )));
    }
    if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidInput("non-finite vector".into()));
    }
    let norm = v.norm();
    if norm == 0.0 {
        return Err(Error::InvalidInput(
            "cannot complete the zero vector to a unitary".into(),
        ));
    }
    let mut u = v / c64(norm, 0.0);
    // rotate the global phase so u[0] is real nonnegative
    if u[0].norm() > 0.0 {
        let phase = u[0].conj() / c64(u[0].norm(), 0.0);
        u *= phase;
    }
    let t = u[0].re;
    let mut w = u.clone();
    w[0] = c64(0.0, 0.0);
    let s = w.norm();
    let mut out = CMatrix::identity(n, n);
    if s <= f64::EPSILON {
        return Ok(out);
    }
    let p = w / c64(s, 0.0);
    let e1 = CVector::from_fn(n, |i, _| if i == 0 { c64(1.0, 0.0) } else { c64(0.0, 0.0) });
    // V = I + (t-1)(e1 e1* + p p*) + s (p e1* - e1 p*)
    out += (&e1 * e1.adjoint() + &p * p.adjoint()) * c64(t - 1.0, 0.0);
    out += (&p * e1.adjoint() - &e1 * p.adjoint()) * c64(s, 0.0);
    Ok(out)
}

/// QR with the uniqueness convention: `R` has strictly positive real
/// diagonal. Requires a square, numerically invertible input.
pub fn qr_decompose(m: &CMatrix, tol: &Tolerance) -> Result<(CMatrix, CMatrix)> {
    let n = ensure_square(m)?;
    ensure_finite(m)?;
    tol.check()?;
    if numerical_rank(m, tol)? < n {
        return Err(Error::RankDeficient(
            "qr_decompose requires a numerically invertible matrix".into(),
        ));
    }
    let qr = m.clone().qr();
    let mut q = qr.q();
    let mut r = qr.r();
    for k in 0..n {
        let d = r[(k, k)];
        let mag = d.norm();
        if mag == 0.0 {
            return Err(Error::RankDeficient(format!(
                "zero diagonal in R at position {k}"
            )));
        }
        let phase = d.conj() / c64(mag, 0.0);
        // scale row k of R by phase and column k of Q by its conjugate
        for j in k..n {
            r[(k, j)] *= phase;
        }
        r[(k, k)] = c64(mag, 0.0);
        let scaled = q.column(k) * phase.conj();
        q.set_column(k, &scaled);
    }
    Ok((q, r))
}

/// Solve `R X = B` with `R` upper triangular.
pub fn solve_upper(r: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let n = ensure_square(r)?;
    if b.nrows() != n {
        return Err(Error::InvalidInput("shape mismatch in triangular solve".into()));
    }
    let scale = r.norm().max(1e-300);
    let mut x = b.clone();
    for col in 0..b.ncols() {
        for i in (0..n).rev() {
            let mut acc = x[(i, col)];
            for t in i + 1..n {
                acc -= r[(i, t)] * x[(t, col)];
            }
            let d = r[(i, i)];
            if d.norm() <= 1e-300 * scale {
                return Err(Error::RankDeficient("singular triangular factor".into()));
            }
            x[(i, col)] = acc / d;
        }
    }
    Ok(x)
}

/// Solve `X R = C` with `R` upper triangular. When `C` is upper triangular
/// the zero pattern propagates, so `X` comes out exactly upper triangular.
pub fn right_divide_upper(cmat: &CMatrix, r: &CMatrix) -> Result<CMatrix> {
    let n = ensure_square(r)?;
    if cmat.ncols() != n {
        return Err(Error::InvalidInput("shape mismatch in triangular solve".into()));
    }
    let scale = r.norm().max(1e-300);
    let mut x = cmat.clone();
    for row in 0..cmat.nrows() {
        for j in 0..n {
            let mut acc = x[(row, j)];
            for t in 0..j {
                acc -= x[(row, t)] * r[(t, j)];
            }
            let d = r[(j, j)];
            if d.norm() <= 1e-300 * scale {
                return Err(Error::RankDeficient("singular triangular factor".into()));
            }
            x[(row, j)] = acc / d;
        }
    }
    Ok(x)
}

/// Upper Jordan block `J_k(lambda)`.
pub fn jordan_block(lambda: Complex64, k: usize) -> CMatrix {
    CMatrix::from_fn(k, k, |i, j| {
        if i == j {
            lambda
        } else if j == i + 1 {
            c64(1.0, 0.0)
        } else {
            c64(0.0, 0.0)
        }
    })
}

/// Block-diagonal direct sum.
pub fn direct_sum(blocks: &[CMatrix]) -> CMatrix {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = CMatrix::zeros(n, n);
    let mut off = 0;
    for b in blocks {
        let k = b.nrows();
        out.view_mut((off, off), (k, k)).copy_from(b);
        off += k;
    }
    out
}

const SCHUR_MAX_ITER: usize = 50_000;

/// Baseline Schur decomposition `M = U T U*`.
///
/// Upper-triangular inputs short-circuit to `(I, M)` so exact diagonals
/// survive untouched; everything else goes through the QR iteration. The
/// requested diagonal ordering is installed by adjacent swaps.
pub fn schur_decompose(m: &CMatrix, order: &DiagOrder) -> Result<SchurPair> {
    let n = ensure_square(m)?;
    ensure_finite(m)?;
    let mut pair = if is_upper_triangular(m, 1e-15) {
        SchurPair {
            u: CMatrix::identity(n, n),
            t: m.clone(),
        }
    } else {
        match m.clone().try_schur(f64::EPSILON, SCHUR_MAX_ITER) {
            Some(s) => {
                let (u, t) = s.unpack();
                SchurPair { u, t }
            }
            None => {
                return Err(Error::NumericalFailure {
                    iterations: SCHUR_MAX_ITER,
                    message: "Schur QR iteration did not converge".into(),
                })
            }
        }
    };
    apply_diag_order(&mut pair, order);
    Ok(pair)
}

fn apply_diag_order(pair: &mut SchurPair, order: &DiagOrder) {
    let n = pair.t.nrows();
    let diag: Vec<Complex64> = (0..n).map(|i| pair.t[(i, i)]).collect();
    let perm: Vec<usize> = match order {
        DiagOrder::AsIs => return,
        DiagOrder::RealDescending => {
            let mut idx: Vec<usize> = (0..n).collect();
            idx.sort_by(|&a, &b| {
                (diag[b].re, diag[b].im)
                    .partial_cmp(&(diag[a].re, diag[a].im))
                    .unwrap()
            });
            idx
        }
        DiagOrder::Target(target) => {
            let mut used = vec![false; n];
            let mut idx = Vec::with_capacity(n);
            for t in target.iter().take(n) {
                let best = (0..n)
                    .filter(|&j| !used[j])
                    .min_by(|&a, &b| {
                        (diag[a] - t)
                            .norm()
                            .partial_cmp(&(diag[b] - t).norm())
                            .unwrap()
                    })
                    .unwrap();
                used[best] = true;
                idx.push(best);
            }
            for j in 0..n {
                if !used[j] {
                    idx.push(j);
                }
            }
            idx
        }
    };
    reorder_schur(pair, &perm);
}

/// Reorder the Schur diagonal so position `i` carries the eigenvalue that
/// originally sat at position `perm[i]`, using adjacent swaps.
pub fn reorder_schur(pair: &mut SchurPair, perm: &[usize]) {
    let n = pair.t.nrows();
    // current[k] = original index of the eigenvalue now at position k
    let mut current: Vec<usize> = (0..n).collect();
    for i in 0..n {
        let mut pos = current.iter().position(|&o| o == perm[i]).unwrap();
        while pos > i {
            swap_adjacent(&mut pair.t, Some(&mut pair.u), pos - 1);
            current.swap(pos - 1, pos);
            pos -= 1;
        }
    }
}

/// Swap the diagonal entries at positions `k, k+1` of an upper-triangular
/// `t` by a unitary similarity, accumulating the rotation into `u`.
pub fn swap_adjacent(t: &mut CMatrix, u: Option<&mut CMatrix>, k: usize) {
    let a = t[(k, k)];
    let d = t[(k + 1, k + 1)];
    let b = t[(k, k + 1)];
    let scale = t.norm().max(1e-300);
    let x0 = b;
    let x1 = d - a;
    let r = (x0.norm_sqr() + x1.norm_sqr()).sqrt();
    if r <= 1e-14 * scale {
        // the 2x2 block is (numerically) a repeated scalar; swapping is a no-op
        return;
    }
    let g00 = x0 / c64(r, 0.0);
    let g10 = x1 / c64(r, 0.0);
    let g01 = -g10.conj();
    let g11 = g00.conj();
    let n = t.nrows();
    // rows k, k+1 <- G* x rows
    for j in 0..n {
        let tk = t[(k, j)];
        let tk1 = t[(k + 1, j)];
        t[(k, j)] = g00.conj() * tk + g10.conj() * tk1;
        t[(k + 1, j)] = g01.conj() * tk + g11.conj() * tk1;
    }
    // cols k, k+1 <- cols x G
    for i in 0..n {
        let tk = t[(i, k)];
        let tk1 = t[(i, k + 1)];
        t[(i, k)] = tk * g00 + tk1 * g10;
        t[(i, k + 1)] = tk * g01 + tk1 * g11;
    }
    // standardize: the eigenvalues are exactly {a, d}, now in swapped order
    t[(k + 1, k)] = c64(0.0, 0.0);
    t[(k, k)] = d;
    t[(k + 1, k + 1)] = a;
    if let Some(u) = u {
        for i in 0..u.nrows() {
            let uk = u[(i, k)];
            let uk1 = u[(i, k + 1)];
            u[(i, k)] = uk * g00 + uk1 * g10;
            u[(i, k + 1)] = uk * g01 + uk1 * g11;
        }
    }
}
