//! Jordan structure extraction under tolerances, Gohberg-Kaashoek numbers,
//! dual vectors, and the single-vector truncation rule.
//!
//! Per-eigenvalue block sizes are detected through the Weyr characteristic:
//! `w_i = dim ker (A - lambda)^i - dim ker (A - lambda)^(i-1)`, computed with
//! tolerance-controlled ranks of successive powers and then conjugated into
//! block sizes. All partitions are stored non-increasing.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matching::Pairing;
use crate::numcore::{self, CMatrix, DiagOrder, Tolerance};

/// One eigenvalue together with its Jordan block sizes (non-increasing).
#[derive(Debug, Clone, Serialize)]
pub struct EigenvalueBlocks {
    pub value: Complex64,
    pub sizes: Vec<usize>,
}

/// The per-eigenvalue Jordan block structure of a matrix.
#[derive(Debug, Clone, Serialize)]
pub struct JordanStructure {
    /// Distinct eigenvalues with their block-size partitions, sorted by
    /// (re, im) of the eigenvalue.
    pub entries: Vec<EigenvalueBlocks>,
    pub ambient_dim: usize,
    /// Tolerance-indecision notes collected during detection.
    pub warnings: Vec<String>,
}

impl JordanStructure {
    /// Build from explicit (eigenvalue, sizes) data; validates the
    /// partition invariants.
    pub fn from_parts(ambient_dim: usize, parts: Vec<(Complex64, Vec<usize>)>) -> Result<Self> {
        let mut entries: Vec<EigenvalueBlocks> = parts
            .into_iter()
            .map(|(value, sizes)| EigenvalueBlocks { value, sizes })
            .collect();
        entries.sort_by(|a, b| {
            (a.value.re, a.value.im)
                .partial_cmp(&(b.value.re, b.value.im))
                .unwrap()
        });
        let s = JordanStructure {
            entries,
            ambient_dim,
            warnings: Vec::new(),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let mut total = 0usize;
        for e in &self.entries {
            if e.sizes.is_empty() || e.sizes.iter().any(|&s| s == 0) {
                return Err(Error::InvalidInput("empty or zero block size".into()));
            }
            if e.sizes.windows(2).any(|w| w[0] < w[1]) {
                return Err(Error::InvalidInput("sizes must be non-increasing".into()));
            }
            total += e.sizes.iter().sum::<usize>();
        }
        if total != self.ambient_dim {
            return Err(Error::InvalidInput(format!(
                "block sizes sum to {total}, ambient dimension is {}",
                self.ambient_dim
            )));
        }
        Ok(())
    }

    /// Number of distinct eigenvalues.
    pub fn num_eigenvalues(&self) -> usize {
        self.entries.len()
    }

    /// Largest number of blocks carried by any single eigenvalue.
    pub fn max_chains_per_eigenvalue(&self) -> usize {
        self.entries.iter().map(|e| e.sizes.len()).max().unwrap_or(0)
    }

    /// True when the size lists agree entry-by-entry (eigenvalue values may
    /// differ). Entries are compared in stored order.
    pub fn same_shape(&self, other: &JordanStructure) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.entries.len() == other.entries.len()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a.sizes == b.sizes)
    }
}

/// The merged partition `m` and its dual `k`, both zero-padded to the
/// ambient dimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GKVector {
    pub m: Vec<usize>,
    pub k: Vec<usize>,
}

impl GKVector {
    pub fn ambient_dim(&self) -> usize {
        self.m.len()
    }
}

/// Conjugate (dual) partition, zero-padded to the input length:
/// `k_i = max { l : m_l >= i }` with 0 for an empty set.
pub fn dual_partition(m: &[usize]) -> Vec<usize> {
    let n = m.len();
    (1..=n)
        .map(|i| {
            m.iter()
                .enumerate()
                .filter(|&(_, &ml)| ml >= i)
                .map(|(l, _)| l + 1)
                .max()
                .unwrap_or(0)
        })
        .collect()
}

/// One eigenvalue cluster.
#[derive(Debug, Clone)]
pub struct EigenCluster {
    /// Arithmetic mean of the members.
    pub center: Complex64,
    pub multiplicity: usize,
    /// Indices into the input list.
    pub members: Vec<usize>,
}

/// Single-linkage clustering with linkage distance `radius`. Cluster
/// centers are arithmetic means; output is sorted by (re, im) of center.
pub fn cluster_eigenvalues(values: &[Complex64], radius: f64) -> Vec<EigenCluster> {
    let n = values.len();
    // union-find over pairs within the linkage radius
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() <= radius {
                let ri = find(&mut parent, i);
                let rj = find(&mut parent, j);
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        match root_of[r] {
            Some(g) => groups[g].push(i),
            None => {
                root_of[r] = Some(groups.len());
                groups.push(vec![i]);
            }
        }
    }
    let mut clusters: Vec<EigenCluster> = groups
        .into_iter()
        .map(|members| {
            let sum: Complex64 = members.iter().map(|&i| values[i]).sum();
            EigenCluster {
                center: sum / Complex64::new(members.len() as f64, 0.0),
                multiplicity: members.len(),
                members,
            }
        })
        .collect();
    clusters.sort_by(|a, b| {
        (a.center.re, a.center.im)
            .partial_cmp(&(b.center.re, b.center.im))
            .unwrap()
    });
    clusters
}

/// Smallest positive pairwise gap of a value list, if any.
pub fn min_positive_gap(values: &[Complex64], floor: f64) -> Option<f64> {
    let mut best: Option<f64> = None;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            let d = (values[i] - values[j]).norm();
            if d > floor {
                best = Some(best.map_or(d, |b: f64| b.min(d)));
            }
        }
    }
    best
}

/// Detect the Jordan structure of `a` under the tolerance.
pub fn jordan_structure(a: &CMatrix, tol: &Tolerance) -> Result<JordanStructure> {
    let n = numcore::ensure_square(a)?;
    numcore::ensure_finite(a)?;
    tol.check()?;
    let norm = numcore::spectral_norm(a)?;
    let schur = numcore::schur_decompose(a, &DiagOrder::AsIs)?;
    let eigs: Vec<Complex64> = (0..n).map(|i| schur.t[(i, i)]).collect();
    let radius = tol.effective_cluster_radius(norm, n);
    let clusters = cluster_eigenvalues(&eigs, radius);
    structure_from_clusters(a, &clusters, tol)
}

/// Weyr-characteristic detection with the eigenvalue clusters already fixed.
pub fn structure_from_clusters(
    a: &CMatrix,
    clusters: &[EigenCluster],
    tol: &Tolerance,
) -> Result<JordanStructure> {
    let n = numcore::ensure_square(a)?;
    let id = CMatrix::identity(n, n);
    let mut warnings = Vec::new();
    let mut entries = Vec::new();
    for cl in clusters {
        let q = cl.multiplicity;
        let shifted = a - &id * cl.center;
        let mut weyr: Vec<usize> = Vec::new();
        let mut power = id.clone();
        let mut rank_prev = n;
        while weyr.iter().sum::<usize>() < q {
            if weyr.len() == q {
                break;
            }
            power = &power * &shifted;
            let (rank, ambiguous) = numcore::rank_with_margin(&power, tol)?;
            if ambiguous {
                warnings.push(format!(
                    "rank decision within a decade of the cutoff at eigenvalue {:.6e}{:+.6e}i, power {}",
                    cl.center.re,
                    cl.center.im,
                    weyr.len() + 1
                ));
            }
            let mut w = rank_prev.saturating_sub(rank);
            if let Some(&prev) = weyr.last() {
                if w > prev {
                    warnings.push(format!(
                        "non-monotone Weyr step clipped at eigenvalue {:.6e}{:+.6e}i",
                        cl.center.re, cl.center.im
                    ));
                    w = prev;
                }
            }
            if w == 0 {
                break;
            }
            weyr.push(w);
            rank_prev = rank;
        }
        let total: usize = weyr.iter().sum();
        if total != q {
            return Err(Error::IllConditioned(format!(
                "kernel growth at eigenvalue {:.6e}{:+.6e}i reaches {total}, cluster multiplicity is {q}; \
                 the cluster radius and rank cutoff are inconsistent",
                cl.center.re, cl.center.im
            )));
        }
        // conjugate the Weyr characteristic into block sizes
        let w1 = weyr[0];
        let sizes: Vec<usize> = (1..=w1)
            .map(|l| weyr.iter().filter(|&&w| w >= l).count())
            .collect();
        entries.push((cl.center, sizes));
    }
    let mut s = JordanStructure::from_parts(n, entries)?;
    s.warnings = warnings;
    Ok(s)
}

/// Merge per-eigenvalue partitions into the GK vector `m` and its dual `k`.
pub fn gk_numbers(omega: &JordanStructure) -> GKVector {
    let n = omega.ambient_dim;
    let mut m = vec![0usize; n];
    for e in &omega.entries {
        for (i, &s) in e.sizes.iter().enumerate() {
            m[i] += s;
        }
    }
    let k = dual_partition(&m);
    GKVector { m, k }
}

/// True iff paired eigenvalues carry identical size lists.
pub fn same_jordan_structure(
    o1: &JordanStructure,
    o2: &JordanStructure,
    pairing: &Pairing,
) -> Result<bool> {
    let q = o1.entries.len();
    if o2.entries.len() != q {
        return Err(Error::InvalidInput(
            "structures have different numbers of eigenvalues".into(),
        ));
    }
    let is_perm = |p: &[usize]| {
        let mut seen = vec![false; q];
        p.len() == q
            && p.iter().all(|&i| {
                if i < q && !seen[i] {
                    seen[i] = true;
                    true
                } else {
                    false
                }
            })
    };
    if !is_perm(&pairing.order0) || !is_perm(&pairing.order1) {
        return Err(Error::InvalidInput(
            "pairing is not a bijection of the eigenvalue lists".into(),
        ));
    }
    Ok(pairing
        .order0
        .iter()
        .zip(&pairing.order1)
        .all(|(&i, &j)| o1.entries[i].sizes == o2.entries[j].sizes))
}

/// Componentwise equality of the `m` vectors.
pub fn same_gk(g1: &GKVector, g2: &GKVector) -> bool {
    g1.m == g2.m
}

/// Remove one vector from chain `l` (0-based) of eigenvalue `t` (0-based):
/// the decrement lands at the bottom of the tied run of equal sizes, other
/// eigenvalues are untouched, and the ambient dimension drops by one.
pub fn truncate_structure(omega: &JordanStructure, t: usize, l: usize) -> Result<JordanStructure> {
    let entry = omega
        .entries
        .get(t)
        .ok_or_else(|| Error::InvalidInput(format!("eigenvalue index {t} out of range")))?;
    if l >= entry.sizes.len() {
        return Err(Error::InvalidInput(format!(
            "chain index {l} out of range for eigenvalue {t} with {} blocks",
            entry.sizes.len()
        )));
    }
    let m_l = entry.sizes[l];
    // sizes are non-increasing, so the tied run is contiguous
    let j_star = (l..entry.sizes.len())
        .take_while(|&j| entry.sizes[j] == m_l)
        .last()
        .unwrap();
    let mut parts: Vec<(Complex64, Vec<usize>)> = Vec::new();
    for (i, e) in omega.entries.iter().enumerate() {
        let mut sizes = e.sizes.clone();
        if i == t {
            sizes[j_star] -= 1;
            if sizes[j_star] == 0 {
                sizes.remove(j_star);
            }
        }
        if !sizes.is_empty() {
            parts.push((e.value, sizes));
        }
    }
    JordanStructure::from_parts(omega.ambient_dim - 1, parts)
}
