use faer::{Mat, MatRef, Side};

use super::PencilError;

/// Dense real symmetric matrix.
///
/// Every mutation writes both `(i, j)` and `(j, i)`, so the stored matrix is
/// exactly symmetric at all times.
#[derive(Clone, Debug)]
pub struct SymmetricMatrix {
    data: Mat<f64>,
}

impl PartialEq for SymmetricMatrix {
    fn eq(&self, other: &Self) -> bool {
        let n = self.dim();
        n == other.dim()
            && (0..n).all(|j| (0..n).all(|i| self.data[(i, j)] == other.data[(i, j)]))
    }
}

impl SymmetricMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { data: Mat::zeros(n, n) }
    }

    pub fn identity(n: usize) -> Self {
        Self { data: Mat::identity(n, n) }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self { data: Mat::from_fn(n, n, |i, j| if i == j { diag[i] } else { 0.0 }) }
    }

    /// Builds the matrix from its upper triangle: `f(i, j)` is only called for `i <= j`.
    pub fn from_upper_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Mat::zeros(n, n);
        for j in 0..n {
            for i in 0..=j {
                let v = f(i, j);
                data[(i, j)] = v;
                data[(j, i)] = v;
            }
        }
        Self { data }
    }

    /// Takes ownership of a dense matrix, rejecting it unless it is square and
    /// bitwise symmetric.
    pub fn from_mat(data: Mat<f64>) -> Result<Self, PencilError> {
        if data.nrows() != data.ncols() {
            return Err(PencilError::DimensionMismatch { expected: data.nrows(), found: data.ncols() });
        }
        let n = data.nrows();
        for j in 0..n {
            for i in 0..j {
                if data[(i, j)] != data[(j, i)] {
                    return Err(PencilError::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(Self { data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, PencilError> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(PencilError::DimensionMismatch { expected: n, found: bad.len() });
        }
        Self::from_mat(Mat::from_fn(n, n, |i, j| rows[i][j]))
    }

    /// Symmetrizes `m` as `(m + mᵀ)/2`.
    pub(crate) fn symmetrized(m: MatRef<'_, f64>) -> Self {
        let n = m.nrows();
        Self::from_upper_fn(n, |i, j| if i == j { m[(i, i)] } else { 0.5 * (m[(i, j)] + m[(j, i)]) })
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[(i, j)]
    }

    /// Adds `v` to entry `(i, j)` and its mirror.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        self.data[(i, j)] += v;
        if i != j {
            self.data[(j, i)] += v;
        }
    }

    pub fn as_mat(&self) -> MatRef<'_, f64> {
        self.data.as_ref()
    }

    pub fn into_mat(self) -> Mat<f64> {
        self.data
    }

    /// Returns `self + s * other`.
    pub fn combine(&self, s: f64, other: &SymmetricMatrix) -> Result<SymmetricMatrix, PencilError> {
        same_dim(self, other)?;
        let n = self.dim();
        Ok(Self { data: Mat::from_fn(n, n, |i, j| self.data[(i, j)] + s * other.data[(i, j)]) })
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|j| (0..n).all(|i| i == j || self.data[(i, j)] == 0.0))
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.data[(i, i)]).collect()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        assert_eq!(x.len(), n, "vector length must match matrix dimension");
        let mut y = vec![0.0; n];
        for j in 0..n {
            let xj = x[j];
            if xj == 0.0 {
                continue;
            }
            let col = self.data.col(j);
            for (yi, aij) in y.iter_mut().zip(col.iter()) {
                *yi += aij * xj;
            }
        }
        y
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Result<Vec<f64>, PencilError> {
        eigenvalues_of(self.data.as_ref())
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        let n = self.dim();
        let mut m = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                m = m.max(self.data[(i, j)].abs());
            }
        }
        m
    }

    /// Number of eigenvalues at or below `tol * max(1, λ_max)`.
    pub fn kernel_dim(&self, tol: f64) -> Result<usize, PencilError> {
        let eigs = self.eigenvalues()?;
        let thr = relative_threshold(&eigs, tol);
        Ok(eigs.iter().filter(|&&l| l <= thr).count())
    }
}

pub(crate) fn same_dim(a: &SymmetricMatrix, b: &SymmetricMatrix) -> Result<(), PencilError> {
    if a.dim() != b.dim() {
        return Err(PencilError::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    Ok(())
}

pub(crate) fn eigenvalues_of(m: MatRef<'_, f64>) -> Result<Vec<f64>, PencilError> {
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    m.self_adjoint_eigenvalues(Side::Lower).map_err(|e| PencilError::Numerical(format!("{e:?}")))
}

/// `tol` times the spectral radius of an ascending eigenvalue list.
pub(crate) fn relative_threshold(ascending: &[f64], tol: f64) -> f64 {
    let radius = match (ascending.first(), ascending.last()) {
        (Some(lo), Some(hi)) => lo.abs().max(hi.abs()),
        _ => 0.0,
    };
    tol * radius
}

/// Definiteness test shared by every solver path.
pub(crate) fn is_definite(ascending: &[f64], tol: f64) -> bool {
    match ascending.first() {
        Some(&lo) => lo > relative_threshold(ascending, tol),
        None => true,
    }
}
