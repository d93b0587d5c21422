use faer::Mat;
use rayon::prelude::*;

use super::gep::{eigen_with_vectors, finite_reciprocal_count, kernel_count, reciprocal, CholeskyReduction};
use super::matrix::{eigenvalues_of, is_definite};
use super::{solve_gep, solve_gep_values, ParametricPencil, PencilError, Spectrum, SymmetricMatrix};

/// Which stabilization parameter a sweep varies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepAxis {
    Alpha,
    Beta,
}

impl SweepAxis {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepAxis::Alpha => "alpha",
            SweepAxis::Beta => "beta",
        }
    }
}

enum Reduction {
    /// `B` fixed and definite: `L_B⁻¹ A₁ L_B⁻ᵀ`, `L_B⁻¹ A₂ L_B⁻ᵀ`.
    Direct { c1: SymmetricMatrix, c2: SymmetricMatrix },
    /// `A` fixed and definite: `L_A⁻¹ B₁ L_A⁻ᵀ`, `L_A⁻¹ B₂ L_A⁻ᵀ`, solved as `B x = μ A x`.
    Reciprocal { d1: SymmetricMatrix, d2: SymmetricMatrix },
    /// Fixed matrix is singular: every grid point is solved from scratch.
    None,
}

/// Eigenvalue sweep along one parameter with the other one held fixed.
///
/// The congruence with the fixed matrix is computed once, so each grid point
/// costs a single symmetric eigenvalue solve. Grid points are independent of
/// each other and of the grid they belong to: a value appearing in two grids
/// yields bitwise identical spectra.
pub struct AxisSweep<'a> {
    pencil: &'a ParametricPencil,
    axis: SweepAxis,
    fixed: f64,
    tol: f64,
    reduction: Reduction,
}

impl<'a> AxisSweep<'a> {
    pub fn new(pencil: &'a ParametricPencil, axis: SweepAxis, fixed: f64, tol: f64) -> Result<Self, PencilError> {
        if !(fixed >= 0.0) || !fixed.is_finite() {
            return Err(PencilError::InvalidParameter(format!("fixed parameter must be nonnegative, got {fixed}")));
        }
        let reduction = match axis {
            SweepAxis::Alpha => {
                let b = pencil.b_at(fixed);
                if is_definite(&b.eigenvalues()?, tol) {
                    let red = CholeskyReduction::new(&b)?;
                    Reduction::Direct { c1: red.congruence(&pencil.a1), c2: red.congruence(&pencil.a2) }
                } else {
                    Reduction::None
                }
            }
            SweepAxis::Beta => {
                let a = pencil.a_at(fixed);
                if is_definite(&a.eigenvalues()?, tol) {
                    let red = CholeskyReduction::new(&a)?;
                    Reduction::Reciprocal { d1: red.congruence(&pencil.b1), d2: red.congruence(&pencil.b2) }
                } else {
                    Reduction::None
                }
            }
        };
        Ok(Self { pencil, axis, fixed, tol, reduction })
    }

    pub fn axis(&self) -> SweepAxis {
        self.axis
    }

    /// `(α, β)` for a value of the swept parameter.
    pub fn params(&self, value: f64) -> (f64, f64) {
        match self.axis {
            SweepAxis::Alpha => (value, self.fixed),
            SweepAxis::Beta => (self.fixed, value),
        }
    }

    pub fn spectrum_at(&self, value: f64) -> Result<Spectrum, PencilError> {
        if !(value >= 0.0) || !value.is_finite() {
            return Err(PencilError::InvalidParameter(format!("grid value must be nonnegative, got {value}")));
        }
        match &self.reduction {
            Reduction::Direct { c1, c2 } => {
                let c = c1.combine(value, c2)?;
                Ok(Spectrum { finite: eigenvalues_of(c.as_mat())?, infinite_count: 0, vectors: None })
            }
            Reduction::Reciprocal { d1, d2 } => {
                let d = d1.combine(value, d2)?;
                Ok(reciprocal(&eigenvalues_of(d.as_mat())?, self.nullity_at(value)?))
            }
            Reduction::None => {
                let (alpha, beta) = self.params(value);
                solve_gep_values(&self.pencil.a_at(alpha), &self.pencil.b_at(beta), self.tol)
            }
        }
    }

    /// Eigenvalues at one grid point together with the modes of the lowest
    /// `count` finite ones, leaving out eigenvalues above `max_value`.
    ///
    /// Modes are eigenvectors of the reduced standard problem, so along one
    /// sweep they are orthonormal in a single inner product and overlaps
    /// between grid points are meaningful. When no reduction is cached the
    /// generalized eigenvectors are normalized to unit length instead.
    pub fn modes_at(&self, value: f64, count: usize, max_value: f64) -> Result<SweepModes, PencilError> {
        if !(value >= 0.0) || !value.is_finite() {
            return Err(PencilError::InvalidParameter(format!("grid value must be nonnegative, got {value}")));
        }
        match &self.reduction {
            Reduction::Direct { c1, c2 } => {
                let c = c1.combine(value, c2)?;
                let (finite, y) = eigen_with_vectors(c.as_mat())?;
                let keep = selected(&finite, count, max_value);
                let modes = Mat::from_fn(y.nrows(), keep, |r, j| y[(r, j)]);
                Ok(SweepModes { spectrum: Spectrum { finite, infinite_count: 0, vectors: None }, modes })
            }
            Reduction::Reciprocal { d1, d2 } => {
                let d = d1.combine(value, d2)?;
                let (mu, y) = eigen_with_vectors(d.as_mat())?;
                let n = mu.len();
                let spectrum = reciprocal(&mu, self.nullity_at(value)?);
                let keep = selected(&spectrum.finite, count, max_value);
                debug_assert_eq!(spectrum.finite.len(), finite_reciprocal_count(&mu, n - spectrum.finite.len()));
                // λ ascending is μ descending
                let modes = Mat::from_fn(y.nrows(), keep, |r, j| y[(r, n - 1 - j)]);
                Ok(SweepModes { spectrum, modes })
            }
            Reduction::None => {
                let (alpha, beta) = self.params(value);
                let mut spectrum = solve_gep(&self.pencil.a_at(alpha), &self.pencil.b_at(beta), self.tol)?;
                let x = spectrum.vectors.take().unwrap_or_else(|| Mat::zeros(self.pencil.dim(), 0));
                let keep = selected(&spectrum.finite, count, max_value);
                let norms: Vec<f64> =
                    (0..keep).map(|j| x.col(j).iter().map(|v| v * v).sum::<f64>().sqrt()).collect();
                let modes = Mat::from_fn(x.nrows(), keep, |r, j| x[(r, j)] / norms[j]);
                Ok(SweepModes { spectrum, modes })
            }
        }
    }

    fn nullity_at(&self, value: f64) -> Result<usize, PencilError> {
        let (_, beta) = self.params(value);
        Ok(kernel_count(&self.pencil.b_at(beta).eigenvalues()?, self.tol))
    }

    /// Solves every grid point; results are stored in grid order regardless
    /// of how the work is scheduled.
    pub fn run(&self, grid: &[f64]) -> Vec<Result<Spectrum, PencilError>> {
        grid.par_iter().map(|&v| self.spectrum_at(v)).collect()
    }
}

fn selected(ascending: &[f64], count: usize, max_value: f64) -> usize {
    ascending.iter().take(count).take_while(|&&v| v <= max_value).count()
}

/// Eigenvalues at one grid point with unit modes for the lowest of them.
#[derive(Clone, Debug)]
pub struct SweepModes {
    pub spectrum: Spectrum,
    /// Column `j` belongs to `spectrum.finite[j]`.
    pub modes: Mat<f64>,
}

/// Spectra on the tensor grid `alphas × betas`.
#[derive(Clone, Debug)]
pub struct SweepResult {
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    /// Alpha-major: entry `ia * betas.len() + ib`.
    pub spectra: Vec<Spectrum>,
}

impl SweepResult {
    pub fn at(&self, ia: usize, ib: usize) -> &Spectrum {
        &self.spectra[ia * self.betas.len() + ib]
    }

    /// `k`-th smallest finite eigenvalue (0-based) against `α` at `betas[ib]`.
    pub fn curve_over_alpha(&self, k: usize, ib: usize) -> Vec<(f64, f64)> {
        (0..self.alphas.len())
            .filter_map(|ia| self.at(ia, ib).finite.get(k).map(|&v| (self.alphas[ia], v)))
            .collect()
    }

    /// `k`-th smallest finite eigenvalue (0-based) against `β` at `alphas[ia]`.
    pub fn curve_over_beta(&self, k: usize, ia: usize) -> Vec<(f64, f64)> {
        (0..self.betas.len())
            .filter_map(|ib| self.at(ia, ib).finite.get(k).map(|&v| (self.betas[ib], v)))
            .collect()
    }
}

pub(crate) fn validate_grid(name: &str, grid: &[f64]) -> Result<(), PencilError> {
    if grid.is_empty() {
        return Err(PencilError::InvalidGrid(format!("{name} grid is empty")));
    }
    if grid.iter().any(|v| !(v >= &0.0) || !v.is_finite()) {
        return Err(PencilError::InvalidGrid(format!("{name} grid has negative or non-finite values")));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(PencilError::InvalidGrid(format!("{name} grid is not strictly ascending")));
    }
    Ok(())
}

/// Solves the pencil at every `(α, β)` of the tensor grid.
pub fn sweep(p: &ParametricPencil, alpha_grid: &[f64], beta_grid: &[f64], tol: f64) -> Result<SweepResult, PencilError> {
    validate_grid("alpha", alpha_grid)?;
    validate_grid("beta", beta_grid)?;
    let mut columns = Vec::with_capacity(beta_grid.len());
    for &beta in beta_grid {
        let axis = AxisSweep::new(p, SweepAxis::Alpha, beta, tol)
            .map_err(|e| PencilError::AtGridPoint { alpha: alpha_grid[0], beta, source: Box::new(e) })?;
        let col = axis.run(alpha_grid);
        let mut spectra = Vec::with_capacity(col.len());
        for (r, &alpha) in col.into_iter().zip(alpha_grid) {
            spectra.push(r.map_err(|e| PencilError::AtGridPoint { alpha, beta, source: Box::new(e) })?);
        }
        columns.push(spectra);
    }
    let mut spectra = Vec::with_capacity(alpha_grid.len() * beta_grid.len());
    for ia in 0..alpha_grid.len() {
        for col in &columns {
            spectra.push(col[ia].clone());
        }
    }
    Ok(SweepResult { alphas: alpha_grid.to_vec(), betas: beta_grid.to_vec(), spectra })
}
