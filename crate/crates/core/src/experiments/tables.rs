use std::f64::consts::PI;
use std::io::Write;

use super::ExperimentError;
use crate::assembly::{assemble, infsup_probe, kernel_dim};
use crate::format::fmt_g17;
use crate::mesh::PolygonalMesh;
use crate::vem::StabilizationMode;

#[derive(Clone, Debug, PartialEq)]
pub struct KernelRow {
    pub k: usize,
    pub n_cells: usize,
    pub n_dofs: usize,
    pub kernel_a1: usize,
    pub kernel_b1: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InfSupRow {
    pub n_cells: usize,
    pub value: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TablesReport {
    pub kernels: Vec<KernelRow>,
    /// Smallest eigenvalue of `(A₁, B₁)` for `k = 1`.
    pub infsup: Vec<InfSupRow>,
}

impl TablesReport {
    /// Kernel counts as integers; inf-sup values divided by `π²` unless `raw`.
    pub fn write_csv<W: Write>(&self, raw: bool, mut out: W) -> std::io::Result<()> {
        let scale = if raw { 1.0 } else { 1.0 / (PI * PI) };
        writeln!(out, "table,k,cells,dofs,value")?;
        for r in &self.kernels {
            writeln!(out, "kernel_a1,{},{},{},{}", r.k, r.n_cells, r.n_dofs, r.kernel_a1)?;
        }
        for r in &self.kernels {
            writeln!(out, "kernel_b1,{},{},{},{}", r.k, r.n_cells, r.n_dofs, r.kernel_b1)?;
        }
        for r in &self.infsup {
            let dofs = self.kernels.iter().find(|k| k.k == 1 && k.n_cells == r.n_cells).map(|k| k.n_dofs);
            let dofs = dofs.map(|d| d.to_string()).unwrap_or_default();
            writeln!(out, "infsup,1,{},{dofs},{}", r.n_cells, fmt_g17(r.value * scale))?;
        }
        out.flush()
    }
}

/// Kernel dimensions of `A₁` and `B₁` for every `(mesh, k)` and the
/// `k = 1` inf-sup probe on every mesh. Matrices are densified one at a time.
pub fn run_tables(
    meshes: &[PolygonalMesh],
    ks: &[usize],
    mode: StabilizationMode,
    tol: f64,
) -> Result<TablesReport, ExperimentError> {
    let mut report = TablesReport::default();
    for &k in ks {
        for mesh in meshes {
            let g = assemble(mesh, k, mode)?;
            let kernel_a1 = kernel_dim(&g.a1.to_dense(), tol)?;
            let kernel_b1 = kernel_dim(&g.b1.to_dense(), tol)?;
            report.kernels.push(KernelRow { k, n_cells: mesh.n_cells(), n_dofs: g.dim(), kernel_a1, kernel_b1 });
            if k == 1 {
                report.infsup.push(InfSupRow { n_cells: mesh.n_cells(), value: infsup_probe(&g)? });
            }
        }
    }
    Ok(report)
}
