//! Global degrees of freedom, Dirichlet elimination and the four global
//! pencil matrices.
//!
//! Local element matrices are computed in parallel and scattered in
//! ascending cell order, so the floating-point sums do not depend on the
//! thread count.

mod sparse;

use rayon::prelude::*;
use thiserror::Error;

use crate::mesh::PolygonalMesh;
use crate::pencil::{solve_gep_values, ParametricPencil, PencilError, SymmetricMatrix, DEFAULT_TOL};
use crate::vem::{dim, local_matrices, DofKind, DofLayout, ElementGeometry, LocalElement, StabilizationMode, VemError};

pub use sparse::SparseSymmetric;

#[derive(Debug, Error)]
pub enum AssemblyError {
    #[error("cell {cell}: {source}")]
    Element { cell: usize, source: VemError },
    #[error(transparent)]
    Pencil(#[from] PencilError),
    #[error("unsupported polynomial degree {0}; expected 1, 2 or 3")]
    UnsupportedDegree(usize),
}

/// Global numbering: vertex DoFs in vertex order, edge moments in edge order
/// (moments innermost), then internal moments in cell order.
#[derive(Clone, Debug, PartialEq)]
pub struct DofMap {
    pub k: usize,
    pub n_total: usize,
    pub n_interior: usize,
    /// `true` for DoFs on ∂Ω.
    pub boundary: Vec<bool>,
    /// Position among the interior DoFs, `None` on the boundary.
    pub interior_index: Vec<Option<usize>>,
    n_vertices: usize,
    n_edges: usize,
}

impl DofMap {
    pub fn vertex(&self, v: usize) -> usize {
        v
    }

    pub fn edge_moment(&self, edge: usize, order: usize) -> usize {
        self.n_vertices + edge * (self.k - 1) + order
    }

    pub fn internal(&self, cell: usize, index: usize) -> usize {
        let per_cell = if self.k >= 2 { dim(self.k - 2) } else { 0 };
        self.n_vertices + self.n_edges * (self.k - 1) + cell * per_cell + index
    }

    /// Global index of every local DoF of `cell`, in local layout order.
    pub fn cell_dofs(&self, mesh: &PolygonalMesh, cell: usize, local: &[DofKind]) -> Vec<usize> {
        local
            .iter()
            .map(|d| match *d {
                DofKind::Vertex { vertex } => self.vertex(mesh.cells()[cell][vertex]),
                DofKind::EdgeMoment { edge, order } => {
                    self.edge_moment(mesh.cell_edges(cell)[edge].edge, order)
                }
                DofKind::InternalMoment { index } => self.internal(cell, index),
            })
            .collect()
    }

    /// Values of every global DoF for the function `f`, boundary included.
    pub fn interpolate(&self, mesh: &PolygonalMesh, f: impl Fn([f64; 2]) -> f64 + Copy) -> Result<Vec<f64>, AssemblyError> {
        let mut values = vec![0.0; self.n_total];
        for cell in 0..mesh.n_cells() {
            let element = |source| AssemblyError::Element { cell, source };
            let geom = ElementGeometry::from_mesh(mesh, cell).map_err(element)?;
            let local = geom.sample_dofs(self.k, f).map_err(element)?;
            let layout = DofLayout::new(self.k, geom.n_vertices());
            for (v, g) in local.into_iter().zip(self.cell_dofs(mesh, cell, &layout.descriptors)) {
                values[g] = v;
            }
        }
        Ok(values)
    }

    /// Restriction of a full DoF vector to the interior DoFs.
    pub fn restrict(&self, full: &[f64]) -> Vec<f64> {
        full.iter().zip(&self.boundary).filter(|(_, &b)| !b).map(|(v, _)| *v).collect()
    }
}

pub fn build_dof_map(mesh: &PolygonalMesh, k: usize) -> Result<DofMap, AssemblyError> {
    if !(1..=3).contains(&k) {
        return Err(AssemblyError::UnsupportedDegree(k));
    }
    let (nv, ne, nc) = (mesh.n_vertices(), mesh.n_edges(), mesh.n_cells());
    let per_cell = if k >= 2 { dim(k - 2) } else { 0 };
    let n_total = nv + ne * (k - 1) + nc * per_cell;
    let mut boundary = vec![false; n_total];
    boundary[..nv].copy_from_slice(&mesh.boundary_vertices());
    for (e, edge) in mesh.edges().iter().enumerate() {
        if edge.is_boundary() {
            for j in 0..k - 1 {
                boundary[nv + e * (k - 1) + j] = true;
            }
        }
    }
    let mut next = 0;
    let interior_index = boundary
        .iter()
        .map(|&b| {
            (!b).then(|| {
                next += 1;
                next - 1
            })
        })
        .collect();
    Ok(DofMap { k, n_total, n_interior: next, boundary, interior_index, n_vertices: nv, n_edges: ne })
}

/// `A = a1 + α·a2`, `B = b1 + β·b2` over the interior DoFs.
#[derive(Clone, Debug)]
pub struct GlobalPencilVEM {
    pub dofs: DofMap,
    pub stabilization: StabilizationMode,
    pub a1: SparseSymmetric,
    pub a2: SparseSymmetric,
    pub b1: SparseSymmetric,
    pub b2: SparseSymmetric,
}

impl GlobalPencilVEM {
    pub fn dim(&self) -> usize {
        self.a1.dim()
    }

    /// Dense pencil at parameters `(α, β)`.
    pub fn pencil(&self, alpha: f64, beta: f64) -> Result<ParametricPencil, PencilError> {
        ParametricPencil::new(
            self.a1.to_dense(),
            self.a2.to_dense(),
            self.b1.to_dense(),
            self.b2.to_dense(),
            alpha,
            beta,
        )
    }
}

/// Local elements of every cell, computed in parallel and returned in cell order.
pub fn local_elements(mesh: &PolygonalMesh, k: usize) -> Result<Vec<LocalElement>, AssemblyError> {
    (0..mesh.n_cells())
        .into_par_iter()
        .map(|cell| {
            ElementGeometry::from_mesh(mesh, cell)
                .and_then(|g| local_matrices(&g, k))
                .map_err(|source| AssemblyError::Element { cell, source })
        })
        .collect()
}

/// Global matrices with boundary DoFs eliminated.
pub fn assemble(
    mesh: &PolygonalMesh,
    k: usize,
    mode: StabilizationMode,
) -> Result<GlobalPencilVEM, AssemblyError> {
    scatter(mesh, k, mode, true)
}

/// Global matrices over every DoF, boundary included.
pub fn assemble_full(
    mesh: &PolygonalMesh,
    k: usize,
    mode: StabilizationMode,
) -> Result<GlobalPencilVEM, AssemblyError> {
    scatter(mesh, k, mode, false)
}

fn scatter(
    mesh: &PolygonalMesh,
    k: usize,
    mode: StabilizationMode,
    eliminate: bool,
) -> Result<GlobalPencilVEM, AssemblyError> {
    let dofs = build_dof_map(mesh, k)?;
    let elements = local_elements(mesh, k)?;
    let n = if eliminate { dofs.n_interior } else { dofs.n_total };
    let mut mats = [(); 4].map(|_| SparseSymmetric::new(n));
    for (cell, el) in elements.iter().enumerate() {
        let global = dofs.cell_dofs(mesh, cell, &el.layout.descriptors);
        let target: Vec<Option<usize>> = global
            .iter()
            .map(|&g| if eliminate { dofs.interior_index[g] } else { Some(g) })
            .collect();
        let (a2, b2) = el.stabilization(mode);
        for (m, local) in mats.iter_mut().zip([&el.a1_local, &a2, &el.b1_local, &b2]) {
            for (i, ti) in target.iter().enumerate() {
                let Some(ti) = *ti else { continue };
                for (j, tj) in target.iter().enumerate().skip(i) {
                    let Some(tj) = *tj else { continue };
                    m.add(ti, tj, local.get(i, j));
                }
            }
        }
    }
    let [a1, a2, b1, b2] = mats;
    Ok(GlobalPencilVEM { dofs, stabilization: mode, a1, a2, b1, b2 })
}

/// Number of eigenvalues `≤ tol·λ_max` of a symmetric PSD matrix.
pub fn kernel_dim(m: &SymmetricMatrix, tol: f64) -> Result<usize, PencilError> {
    m.kernel_dim(tol)
}

/// Smallest finite eigenvalue of `(A₁, B₁)`.
pub fn infsup_probe(g: &GlobalPencilVEM) -> Result<f64, PencilError> {
    let spectrum = solve_gep_values(&g.a1.to_dense(), &g.b1.to_dense(), DEFAULT_TOL)?;
    spectrum
        .finite
        .first()
        .copied()
        .ok_or_else(|| PencilError::Numerical("pencil has no finite eigenvalues".into()))
}
