use std::cmp::Ordering;

use faer::{Mat, MatRef, Side};

use super::matrix::{eigenvalues_of, is_definite, relative_threshold, same_dim};
use super::{PencilError, SymmetricMatrix};

/// Spectrum of a (possibly singular) symmetric pencil `A x = λ B x`.
#[derive(Clone, Debug)]
pub struct Spectrum {
    /// Finite eigenvalues, ascending.
    pub finite: Vec<f64>,
    /// Number of eigenvalues conventionally set to infinity (kernel of `B`).
    pub infinite_count: usize,
    /// Eigenvectors, column `i` belonging to `finite[i]`.
    pub vectors: Option<Mat<f64>>,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.finite.len() + self.infinite_count
    }

    /// Drops the eigenvectors.
    pub fn values_only(mut self) -> Self {
        self.vectors = None;
        self
    }

    /// Builds a spectrum from unordered values, `+∞` entries counted as infinite.
    pub fn from_values(values: impl IntoIterator<Item = f64>) -> Self {
        let mut finite = Vec::new();
        let mut infinite_count = 0;
        for v in values {
            if v.is_infinite() && v > 0.0 {
                infinite_count += 1;
            } else {
                finite.push(v);
            }
        }
        finite.sort_by(f64::total_cmp);
        Self { finite, infinite_count, vectors: None }
    }
}

/// Cholesky factor `L` of a positive definite matrix, used to reduce a
/// generalized problem to a standard one: `L⁻¹ M L⁻ᵀ`.
pub(crate) struct CholeskyReduction {
    l: Mat<f64>,
}

impl CholeskyReduction {
    pub(crate) fn new(m: &SymmetricMatrix) -> Result<Self, PencilError> {
        let llt = m
            .as_mat()
            .llt(Side::Lower)
            .map_err(|e| PencilError::Numerical(format!("cholesky failed: {e:?}")))?;
        Ok(Self { l: llt.L().to_owned() })
    }

    /// `L⁻¹ m L⁻ᵀ`, symmetrized.
    pub(crate) fn congruence(&self, m: &SymmetricMatrix) -> SymmetricMatrix {
        let mut x = m.as_mat().to_owned();
        self.l.solve_lower_triangular_in_place(x.as_mut());
        let mut y = x.transpose().to_owned();
        drop(x);
        self.l.solve_lower_triangular_in_place(y.as_mut());
        SymmetricMatrix::symmetrized(y.as_ref())
    }

    /// `L⁻ᵀ y`.
    pub(crate) fn back_transform(&self, mut y: Mat<f64>) -> Mat<f64> {
        self.l.transpose().solve_upper_triangular_in_place(y.as_mut());
        y
    }
}

/// Solves `a x = λ b x` with eigenvectors.
///
/// When `b` is definite the pencil is reduced through the Cholesky factor of
/// `b`. Otherwise, if `a` is definite, the reciprocal pencil `b x = μ a x` is
/// solved and `λ = 1/μ`; as many eigenvalues as the numerical nullity of `b`
/// are reported as infinite. Eigenvectors are `b`-orthonormal (resp. `a`-orthonormal).
pub fn solve_gep(a: &SymmetricMatrix, b: &SymmetricMatrix, tol: f64) -> Result<Spectrum, PencilError> {
    solve(a, b, tol, true)
}

/// Same as [`solve_gep`] without computing eigenvectors.
pub fn solve_gep_values(a: &SymmetricMatrix, b: &SymmetricMatrix, tol: f64) -> Result<Spectrum, PencilError> {
    solve(a, b, tol, false)
}

fn solve(a: &SymmetricMatrix, b: &SymmetricMatrix, tol: f64, vectors: bool) -> Result<Spectrum, PencilError> {
    same_dim(a, b)?;
    let b_eigs = b.eigenvalues()?;
    if is_definite(&b_eigs, tol) {
        let red = CholeskyReduction::new(b)?;
        let c = red.congruence(a);
        return Ok(if vectors {
            let (vals, y) = eigen_with_vectors(c.as_mat())?;
            let x = red.back_transform(y);
            sorted_with_vectors(vals, x, 0)
        } else {
            Spectrum { finite: eigenvalues_of(c.as_mat())?, infinite_count: 0, vectors: None }
        });
    }
    if is_definite(&a.eigenvalues()?, tol) {
        let nullity = kernel_count(&b_eigs, tol);
        let red = CholeskyReduction::new(a)?;
        let c = red.congruence(b);
        return if vectors {
            let (mu, y) = eigen_with_vectors(c.as_mat())?;
            let x = red.back_transform(y);
            Ok(reciprocal_with_vectors(&mu, x, nullity))
        } else {
            Ok(reciprocal(&eigenvalues_of(c.as_mat())?, nullity))
        };
    }
    let common = a.combine(1.0, b)?.kernel_dim(tol)?;
    Err(PencilError::BothSingular { common_kernel_dim: common })
}

pub(crate) fn eigen_with_vectors(m: MatRef<'_, f64>) -> Result<(Vec<f64>, Mat<f64>), PencilError> {
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| PencilError::Numerical(format!("{e:?}")))?;
    let vals = evd.S().column_vector().iter().copied().collect();
    Ok((vals, evd.U().to_owned()))
}

/// Number of eigenvalues at or below the relative kernel threshold.
pub(crate) fn kernel_count(ascending: &[f64], tol: f64) -> usize {
    let thr = relative_threshold(ascending, tol);
    ascending.iter().filter(|&&l| l <= thr).count()
}

/// How many of the ascending reciprocal eigenvalues `μ` are finite: all but
/// the `nullity` smallest, and never a nonpositive one.
pub(crate) fn finite_reciprocal_count(mu: &[f64], nullity: usize) -> usize {
    mu.iter().skip(nullity.min(mu.len())).filter(|&&m| m > 0.0).count()
}

/// Maps ascending reciprocal eigenvalues `μ` to `λ = 1/μ`, the `nullity`
/// smallest ones becoming infinite.
pub(crate) fn reciprocal(mu: &[f64], nullity: usize) -> Spectrum {
    let keep = finite_reciprocal_count(mu, nullity);
    let finite = mu.iter().rev().take(keep).map(|m| 1.0 / m).collect();
    Spectrum { finite, infinite_count: mu.len() - keep, vectors: None }
}

fn reciprocal_with_vectors(mu: &[f64], x: Mat<f64>, nullity: usize) -> Spectrum {
    let keep: Vec<usize> = (mu.len() - finite_reciprocal_count(mu, nullity)..mu.len()).collect();
    let vals = keep.iter().map(|&i| 1.0 / mu[i]).collect();
    let xs = Mat::from_fn(x.nrows(), keep.len(), |r, c| x[(r, keep[c])]);
    sorted_with_vectors(vals, xs, mu.len() - keep.len())
}

/// Sorts eigenpairs ascending. Each vector is sign-normalized so that its
/// first largest-magnitude component is positive; exact ties in the value are
/// ordered by the normalized vectors lexicographically.
fn sorted_with_vectors(vals: Vec<f64>, mut x: Mat<f64>, infinite_count: usize) -> Spectrum {
    let n = x.nrows();
    for c in 0..x.ncols() {
        let mut best = 0usize;
        for r in 0..n {
            if x[(r, c)].abs() > x[(best, c)].abs() {
                best = r;
            }
        }
        if n > 0 && x[(best, c)] < 0.0 {
            for r in 0..n {
                x[(r, c)] = -x[(r, c)];
            }
        }
    }
    let mut order: Vec<usize> = (0..vals.len()).collect();
    order.sort_by(|&i, &j| {
        vals[i].total_cmp(&vals[j]).then_with(|| {
            (0..n)
                .map(|r| x[(r, i)].total_cmp(&x[(r, j)]))
                .find(|o| *o != Ordering::Equal)
                .unwrap_or(Ordering::Equal)
        })
    });
    let finite = order.iter().map(|&i| vals[i]).collect();
    let vectors = Mat::from_fn(n, order.len(), |r, c| x[(r, order[c])]);
    Spectrum { finite, infinite_count, vectors: Some(vectors) }
}

/// Outcome of testing the splitting `C = C₁ + γ C₂` for the kernel conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssumptionReport {
    /// Dimension of the kernel of `C₁`.
    pub kernel_dim_c1: usize,
    /// `C₂` restricted to that kernel is positive definite.
    pub c2_pd_on_kernel: bool,
    /// `C₂` annihilates the orthogonal complement of the kernel.
    pub c2_vanishes_on_complement: bool,
    /// Dimension of `ker C₁ ∩ ker C₂`.
    pub intersection_dim: usize,
}

impl AssumptionReport {
    pub fn holds(&self) -> bool {
        self.c2_pd_on_kernel && self.c2_vanishes_on_complement
    }
}

pub fn check_assumption(c1: &SymmetricMatrix, c2: &SymmetricMatrix, tol: f64) -> Result<AssumptionReport, PencilError> {
    same_dim(c1, c2)?;
    let n = c1.dim();
    let (vals, q) = eigen_with_vectors(c1.as_mat())?;
    let thr = relative_threshold(&vals, tol);
    let kernel: Vec<usize> = (0..n).filter(|&i| vals[i] <= thr).collect();
    let complement: Vec<usize> = (0..n).filter(|&i| vals[i] > thr).collect();

    let c2_eigs = c2.eigenvalues()?;
    let c2_scale = relative_threshold(&c2_eigs, tol);

    let basis = |cols: &[usize]| Mat::from_fn(n, cols.len(), |r, c| q[(r, cols[c])]);
    let kb = basis(&kernel);
    let restricted = kb.transpose() * c2.as_mat() * &kb;
    let restricted = SymmetricMatrix::symmetrized(restricted.as_ref());
    let r_eigs = restricted.eigenvalues()?;
    let intersection_dim = r_eigs.iter().filter(|&&l| l <= c2_scale).count();
    let c2_pd_on_kernel = intersection_dim == 0;

    let cb = basis(&complement);
    let image = c2.as_mat() * &cb;
    let c2_vanishes_on_complement = (0..image.ncols()).all(|c| {
        let norm = image.col(c).iter().map(|v| v * v).sum::<f64>().sqrt();
        norm <= c2_scale
    });

    Ok(AssumptionReport { kernel_dim_c1: kernel.len(), c2_pd_on_kernel, c2_vanishes_on_complement, intersection_dim })
}
