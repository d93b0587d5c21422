use std::f64::consts::PI;
use std::io::Write;

use super::sweep::scaled_exact;
use super::{exact_laplace_eigs, ExperimentError};
use crate::assembly::assemble;
use crate::format::fmt_g17;
use crate::mesh::generate_square_grid;
use crate::pencil::{solve_gep_values, DEFAULT_TOL};
use crate::vem::StabilizationMode;

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    /// Cells per side of the square grid.
    pub grid: usize,
    pub h: f64,
    pub index: usize,
    pub computed: f64,
    pub exact: f64,
    /// `|computed − exact| / exact`.
    pub rel_error: f64,
    /// `ln(e_H / e_h) / ln(H / h)` against the previous grid.
    pub rate: Option<f64>,
}

/// Relative errors of the `m` smallest eigenvalues on square grids of
/// increasing resolution, with observed rates between consecutive grids.
pub fn run_convergence(
    k: usize,
    grids: &[usize],
    alpha: f64,
    beta: f64,
    m: usize,
    mode: StabilizationMode,
) -> Result<Vec<ConvergenceRow>, ExperimentError> {
    if grids.is_empty() || grids.contains(&0) || grids.windows(2).any(|w| w[1] <= w[0]) {
        return Err(ExperimentError::Config("grids must be positive and strictly increasing".into()));
    }
    if m == 0 {
        return Err(ExperimentError::Config("number of eigenvalues must be at least 1".into()));
    }
    let exact = exact_laplace_eigs(m);
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    for &n in grids {
        let mesh = generate_square_grid(n)?;
        let h = mesh.mesh_size();
        let g = assemble(&mesh, k, mode)?;
        let p = g.pencil(alpha, beta)?;
        let spectrum = solve_gep_values(&p.a(), &p.b(), DEFAULT_TOL)?;
        let previous: Vec<ConvergenceRow> = rows.iter().filter(|r| Some(r.grid) == rows.last().map(|l| l.grid)).cloned().collect();
        for (index, (&computed, &reference)) in spectrum.finite.iter().zip(&exact).enumerate() {
            let rel_error = (computed - reference).abs() / reference;
            let rate = previous
                .iter()
                .find(|r| r.index == index)
                .map(|r| (r.rel_error / rel_error).ln() / (r.h / h).ln());
            rows.push(ConvergenceRow { grid: n, h, index, computed, exact: reference, rel_error, rate });
        }
    }
    Ok(rows)
}

/// Writes convergence rows; eigenvalues are divided by `π²` unless `raw`.
pub fn write_convergence_csv<W: Write>(rows: &[ConvergenceRow], raw: bool, mut out: W) -> std::io::Result<()> {
    let scale = if raw { 1.0 } else { 1.0 / (PI * PI) };
    writeln!(out, "grid,h,index,computed,exact,rel_error,rate")?;
    for r in rows {
        let rate = r.rate.map(fmt_g17).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{rate}",
            r.grid,
            fmt_g17(r.h),
            r.index,
            fmt_g17(r.computed * scale),
            fmt_g17(scaled_exact(r.exact, raw)),
            fmt_g17(r.rel_error)
        )?;
    }
    out.flush()
}
