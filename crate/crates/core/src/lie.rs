//! Lie algebra data given by structure constants: validation (antisymmetry,
//! Jacobi), bracket evaluation, reductive decompositions g = h ⊕ m, and the
//! adjoint action restricted to m.

use nalgebra::{DMatrix, DVector};
use std::collections::BTreeMap;
use thiserror::Error;

/// Dimension up to which the dense bracket tensor is materialized. Above this
/// limit brackets are evaluated straight from the sparse entries.
pub const DENSE_LIMIT: usize = 32;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("bracket entry ({i},{j},{k}): index out of range for dimension {dim}")]
    IndexOutOfRange {
        i: usize,
        j: usize,
        k: usize,
        dim: usize,
    },
    #[error("bracket entries for ({i},{j},{k}) conflict under antisymmetry: {a} vs {b}")]
    AntisymmetryViolation {
        i: usize,
        j: usize,
        k: usize,
        a: f64,
        b: f64,
    },
    #[error("Jacobi identity fails at basis triple ({i},{j},{k}): residual {residual:.3e}")]
    JacobiViolation {
        i: usize,
        j: usize,
        k: usize,
        residual: f64,
    },
    #[error("h is not a subalgebra: [e{a},e{b}] has an m-component of size {residual:.3e}")]
    NotSubalgebra { a: usize, b: usize, residual: f64 },
    #[error("[h,m] is not contained in m: [e{a},e{j}] has an h-component of size {residual:.3e}")]
    NotInvariant { a: usize, j: usize, residual: f64 },
    #[error("h index {index} out of range for dimension {dim}")]
    SubspaceIndexOutOfRange { index: usize, dim: usize },
    #[error("h index {index} listed more than once")]
    DuplicateSubspaceIndex { index: usize },
    #[error("h covers the whole algebra, leaving m empty")]
    EmptyComplement,
}

/// Sparse structure constants c_ij^k for [e_i, e_j] = Σ_k c_ij^k e_k.
/// Entries are stored with i < j; the antisymmetric completion is implied.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    dim: usize,
    entries: Vec<(usize, usize, usize, f64)>,
}

impl StructureConstants {
    /// Normalize raw quadruples to i < j form. Entries with i > j are flipped
    /// with a sign; a nonzero diagonal entry or two entries that disagree after
    /// normalization are antisymmetry violations.
    pub fn new(dim: usize, raw: &[(usize, usize, usize, f64)]) -> Result<Self, AlgebraError> {
        let mut map: BTreeMap<(usize, usize, usize), f64> = BTreeMap::new();
        for &(i, j, k, v) in raw {
            if i >= dim || j >= dim || k >= dim {
                return Err(AlgebraError::IndexOutOfRange { i, j, k, dim });
            }
            if i == j {
                if v != 0.0 {
                    return Err(AlgebraError::AntisymmetryViolation { i, j, k, a: v, b: -v });
                }
                continue;
            }
            let (key, val) = if i < j { ((i, j, k), v) } else { ((j, i, k), -v) };
            if let Some(&prev) = map.get(&key) {
                if prev != val {
                    return Err(AlgebraError::AntisymmetryViolation {
                        i: key.0,
                        j: key.1,
                        k: key.2,
                        a: prev,
                        b: val,
                    });
                }
            } else if val != 0.0 {
                map.insert(key, val);
            }
        }
        Ok(Self {
            dim,
            entries: map.into_iter().map(|((i, j, k), v)| (i, j, k, v)).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Normalized entries, sorted, with i < j.
    pub fn entries(&self) -> &[(usize, usize, usize, f64)] {
        &self.entries
    }
}

/// Structure constants that passed the Jacobi test. Owns the dense bracket
/// tensor for small dimensions.
#[derive(Debug, Clone)]
pub struct ValidatedAlgebra {
    constants: StructureConstants,
    dense: Option<Vec<f64>>,
    max_jacobi_residual: f64,
}

impl ValidatedAlgebra {
    /// Check the Jacobi identity over all basis triples i < j < k and report
    /// the worst residual. Triples with a repeated index cancel exactly and are
    /// skipped.
    pub fn validate(
        constants: StructureConstants,
        jacobi_tol: f64,
    ) -> Result<Self, AlgebraError> {
        let dim = constants.dim();
        let dense = (dim <= DENSE_LIMIT).then(|| {
            let mut c = vec![0.0; dim * dim * dim];
            for &(i, j, k, v) in constants.entries() {
                c[(i * dim + j) * dim + k] = v;
                c[(j * dim + i) * dim + k] = -v;
            }
            c
        });
        let alg = Self {
            constants,
            dense,
            max_jacobi_residual: 0.0,
        };

        let basis: Vec<DVector<f64>> = (0..dim)
            .map(|i| DVector::from_fn(dim, |r, _| if r == i { 1.0 } else { 0.0 }))
            .collect();
        let mut max_residual = 0.0f64;
        let mut witness = None;
        for i in 0..dim {
            for j in (i + 1)..dim {
                for k in (j + 1)..dim {
                    let mut cyc = alg.bracket(&basis[i], &alg.bracket_basis(j, k));
                    cyc += alg.bracket(&basis[j], &alg.bracket_basis(k, i));
                    cyc += alg.bracket(&basis[k], &alg.bracket_basis(i, j));
                    let residual = cyc.amax();
                    if residual > max_residual {
                        max_residual = residual;
                        witness = Some((i, j, k));
                    }
                }
            }
        }
        if max_residual > jacobi_tol {
            let (i, j, k) = witness.expect("residual above zero implies a witness");
            return Err(AlgebraError::JacobiViolation {
                i,
                j,
                k,
                residual: max_residual,
            });
        }
        Ok(Self {
            max_jacobi_residual: max_residual,
            ..alg
        })
    }

    pub fn dim(&self) -> usize {
        self.constants.dim()
    }

    pub fn constants(&self) -> &StructureConstants {
        &self.constants
    }

    /// Worst Jacobi residual observed during validation.
    pub fn max_jacobi_residual(&self) -> f64 {
        self.max_jacobi_residual
    }

    /// [x, y] in full coordinates. Runs over the i < j entries with the
    /// products antisymmetrized, so bracket(x,y) == -bracket(y,x) holds
    /// bit-exactly and bracket(x,x) is exactly zero.
    pub fn bracket(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.dim());
        for &(i, j, k, v) in self.constants.entries() {
            out[k] += (x[i] * y[j] - x[j] * y[i]) * v;
        }
        out
    }

    /// [e_i, e_j] as a coordinate vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> DVector<f64> {
        let dim = self.dim();
        let mut out = DVector::zeros(dim);
        if i == j {
            return out;
        }
        if let Some(c) = &self.dense {
            for k in 0..dim {
                out[k] = c[(i * dim + j) * dim + k];
            }
        } else {
            let (a, b, sign) = if i < j { (i, j, 1.0) } else { (j, i, -1.0) };
            for &(p, q, k, v) in self.constants.entries() {
                if p == a && q == b {
                    out[k] = sign * v;
                }
            }
        }
        out
    }
}

/// Basis-index split g = h ⊕ m with [h,h] ⊆ h and [h,m] ⊆ m verified.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductiveDecomposition {
    dim: usize,
    h: Vec<usize>,
    m: Vec<usize>,
}

/// Split the algebra along basis indices and verify the subalgebra and
/// invariance conditions to within `tol` (inf-norm of the offending component).
pub fn decompose(
    alg: &ValidatedAlgebra,
    h_indices: &[usize],
    tol: f64,
) -> Result<ReductiveDecomposition, AlgebraError> {
    let dim = alg.dim();
    let mut h: Vec<usize> = h_indices.to_vec();
    h.sort_unstable();
    for w in h.windows(2) {
        if w[0] == w[1] {
            return Err(AlgebraError::DuplicateSubspaceIndex { index: w[0] });
        }
    }
    if let Some(&index) = h.iter().find(|&&i| i >= dim) {
        return Err(AlgebraError::SubspaceIndexOutOfRange { index, dim });
    }
    let m: Vec<usize> = (0..dim).filter(|i| !h.contains(i)).collect();
    if m.is_empty() {
        return Err(AlgebraError::EmptyComplement);
    }
    let dec = ReductiveDecomposition { dim, h, m };

    for (ai, &a) in dec.h.iter().enumerate() {
        for &b in dec.h.iter().skip(ai + 1) {
            let w = alg.bracket_basis(a, b);
            let residual = dec.m.iter().map(|&i| w[i].abs()).fold(0.0, f64::max);
            if residual > tol {
                return Err(AlgebraError::NotSubalgebra { a, b, residual });
            }
        }
    }
    for &a in &dec.h {
        for &j in &dec.m {
            let w = alg.bracket_basis(a, j);
            let residual = dec.h.iter().map(|&i| w[i].abs()).fold(0.0, f64::max);
            if residual > tol {
                return Err(AlgebraError::NotInvariant { a, j, residual });
            }
        }
    }
    Ok(dec)
}

impl ReductiveDecomposition {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn h(&self) -> &[usize] {
        &self.h
    }

    pub fn m(&self) -> &[usize] {
        &self.m
    }

    pub fn m_dim(&self) -> usize {
        self.m.len()
    }

    /// m-coordinates into full coordinates, h components zero.
    pub fn embed(&self, vm: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.dim);
        for (slot, &i) in self.m.iter().enumerate() {
            out[i] = vm[slot];
        }
        out
    }

    /// m-components of a full-coordinate vector, as m-coordinates.
    pub fn restrict_m(&self, v: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(self.m.len(), self.m.iter().map(|&i| v[i]))
    }

    /// h-components of a full-coordinate vector, as h-coordinates.
    pub fn restrict_h(&self, v: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(self.h.len(), self.h.iter().map(|&i| v[i]))
    }

    /// Projection onto m in full coordinates (h components zeroed).
    pub fn project_m(&self, v: &DVector<f64>) -> DVector<f64> {
        let mut out = v.clone();
        for &i in &self.h {
            out[i] = 0.0;
        }
        out
    }

    /// Projection onto h in full coordinates (m components zeroed).
    pub fn project_h(&self, v: &DVector<f64>) -> DVector<f64> {
        let mut out = v.clone();
        for &i in &self.m {
            out[i] = 0.0;
        }
        out
    }
}

/// Matrix of the m-projected adjoint action of x (full coordinates) on m:
/// column j holds the m-coordinates of proj_m [x, e_{m_j}].
pub fn ad_matrix_on_m(
    alg: &ValidatedAlgebra,
    dec: &ReductiveDecomposition,
    x: &DVector<f64>,
) -> DMatrix<f64> {
    let md = dec.m_dim();
    let mut out = DMatrix::zeros(md, md);
    for (col, &j) in dec.m().iter().enumerate() {
        let ej = DVector::from_fn(dec.dim(), |r, _| if r == j { 1.0 } else { 0.0 });
        let w = dec.restrict_m(&alg.bracket(x, &ej));
        out.set_column(col, &w);
    }
    out
}
