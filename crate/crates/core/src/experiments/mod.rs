//! Drivers behind the command-line tool. Every driver returns a report that
//! can be written as CSV; output depends only on the inputs, never on the
//! number of worker threads.

mod convergence;
mod sweep;
mod tables;
mod toy;

use std::f64::consts::PI;

use thiserror::Error;

use crate::assembly::AssemblyError;
use crate::mesh::MeshError;
use crate::pencil::PencilError;

pub use convergence::{run_convergence, write_convergence_csv, ConvergenceRow};
pub use sweep::{run_sweep, sweep_pencil, CurveLabel, SweepConfig, SweepPoint, SweepReport};
pub use tables::{run_tables, InfSupRow, KernelRow, TablesReport};
pub use toy::{run_toy, toy_pencil, toy_points, KernelLayout, ToyCase, ToyPoint, ToyReport};

/// Discrepancy above which a toy run counts as a verification failure.
pub const TOY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Assembly(#[from] AssemblyError),
    #[error(transparent)]
    Pencil(#[from] PencilError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// First `m` Dirichlet Laplace eigenvalues of the unit square,
/// `(i² + j²)π²`, ascending with multiplicity.
pub fn exact_laplace_eigs(m: usize) -> Vec<f64> {
    exact_laplace_eigs_over_pi2(m).into_iter().map(|v| v as f64 * PI * PI).collect()
}

/// The integers `i² + j²` behind [`exact_laplace_eigs`].
pub fn exact_laplace_eigs_over_pi2(m: usize) -> Vec<u64> {
    // (1, j) for j ≤ m already gives m values ≤ 1 + m², and any i > m exceeds it
    let bound = m as u64;
    let mut values: Vec<u64> =
        (1..=bound).flat_map(|i| (1..=bound).map(move |j| i * i + j * j)).collect();
    values.sort_unstable();
    values.truncate(m);
    values
}

/// Inclusive grid `start, start + step, …, stop`.
pub fn linear_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>, ExperimentError> {
    if !(step > 0.0) || !start.is_finite() || !stop.is_finite() || stop < start {
        return Err(ExperimentError::Config(format!("invalid grid {start}:{stop}:{step}")));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|i| start + i as f64 * step).collect())
}

/// `n ≥ 2` points spaced evenly in `ln` between `start > 0` and `stop`.
pub fn log_grid(start: f64, stop: f64, n: usize) -> Result<Vec<f64>, ExperimentError> {
    if !(start > 0.0) || !(stop > start) || n < 2 {
        return Err(ExperimentError::Config(format!("invalid log grid {start}:{stop}:{n}")));
    }
    let (a, b) = (start.ln(), stop.ln());
    let mut grid: Vec<f64> = (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect();
    grid[0] = start;
    grid[n - 1] = stop;
    Ok(grid)
}

/// Parses `a:b:step` (linear) or `log:a:b:n` (logarithmic).
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, ExperimentError> {
    let bad = || ExperimentError::Config(format!("cannot parse grid `{spec}`"));
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    match parts.as_slice() {
        ["log", a, b, n] => log_grid(num(a)?, num(b)?, n.trim().parse().map_err(|_| bad())?),
        [a, b, step] => linear_grid(num(a)?, num(b)?, num(step)?),
        [a] => Ok(vec![num(a)?]),
        _ => Err(bad()),
    }
}
