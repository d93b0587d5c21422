use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;

use super::{exact_laplace_eigs, ExperimentError};
use crate::assembly::assemble;
use crate::format::fmt_g17;
use crate::mesh::PolygonalMesh;
use crate::pencil::{
    classify_branch, track_modes, validate_grid, AxisSweep, CurveShape, ParametricPencil, SweepAxis, TrackedCurve,
    DEFAULT_CLASSIFY_TOL, DEFAULT_MIN_OVERLAP, DEFAULT_TOL,
};
use crate::vem::StabilizationMode;

/// Parameters of a one-axis sweep.
#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub k: usize,
    pub axis: SweepAxis,
    /// Value of the parameter that is not swept.
    pub fixed: f64,
    pub grid: Vec<f64>,
    /// Eigenvalues kept per grid point, smallest first.
    pub m: usize,
    /// Largest eigenvalue kept, in reported units.
    pub max_value: Option<f64>,
    /// Report eigenvalues as computed instead of divided by `π²`.
    pub raw: bool,
    pub stabilization: StabilizationMode,
    pub tol: f64,
}

impl SweepConfig {
    pub fn new(k: usize, axis: SweepAxis, fixed: f64, grid: Vec<f64>) -> Self {
        Self {
            k,
            axis,
            fixed,
            grid,
            m: 30,
            max_value: None,
            raw: false,
            stabilization: StabilizationMode::default(),
            tol: DEFAULT_TOL,
        }
    }

    fn scale(&self) -> f64 {
        if self.raw {
            1.0
        } else {
            1.0 / (PI * PI)
        }
    }
}

/// Tag attached to a tracked branch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveLabel {
    Constant,
    Linear(SweepAxis),
    Hyperbolic(SweepAxis),
    Mixed,
    /// Fewer than four points with a positive parameter.
    Unclassified,
}

impl CurveLabel {
    pub fn name(self) -> String {
        match self {
            CurveLabel::Constant => "constant".into(),
            CurveLabel::Linear(axis) => format!("linear_{}", axis.as_str()),
            CurveLabel::Hyperbolic(axis) => format!("hyperbolic_{}", axis.as_str()),
            CurveLabel::Mixed => "mixed".into(),
            CurveLabel::Unclassified => "unclassified".into(),
        }
    }
}

/// Outcome at one grid point.
#[derive(Clone, Debug)]
pub struct SweepPoint {
    pub param: f64,
    /// Smallest finite eigenvalues as computed (unscaled), ascending.
    pub values: Vec<f64>,
    pub infinite_count: usize,
    /// Solver failure at this point; `values` is empty when set.
    pub error: Option<String>,
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub points: Vec<SweepPoint>,
    /// Branches followed through the grid by mode overlap.
    pub curves: Vec<TrackedCurve>,
    pub labels: Vec<CurveLabel>,
    /// Reference eigenvalues (unscaled) matched by position, if known.
    pub exact: Vec<f64>,
}

impl SweepReport {
    /// `(param, value)` pairs of a branch, value unscaled.
    pub fn curve_values(&self, curve: usize) -> Vec<(f64, f64)> {
        self.curves[curve]
            .points()
            .map(|(p, e)| (self.points[p].param, self.points[p].values[e]))
            .collect()
    }

    /// Branch through each `(point, eigenvalue)` pair.
    pub fn membership(&self) -> Vec<Vec<usize>> {
        let mut map: Vec<Vec<usize>> = self.points.iter().map(|p| vec![usize::MAX; p.values.len()]).collect();
        for (id, c) in self.curves.iter().enumerate() {
            for (p, e) in c.points() {
                map[p][e] = id;
            }
        }
        map
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let scale = self.config.scale();
        let membership = self.membership();
        writeln!(out, "param,index,value,classification,exact,branch")?;
        for (p, point) in self.points.iter().enumerate() {
            let param = fmt_g17(point.param);
            if point.error.is_some() {
                writeln!(out, "{param},,nan,failed,,")?;
                continue;
            }
            for (i, v) in point.values.iter().enumerate() {
                let branch = membership[p][i];
                let exact = self.exact.get(i).map(|&e| fmt_g17(scaled_exact(e, self.config.raw))).unwrap_or_default();
                writeln!(
                    out,
                    "{param},{i},{},{},{exact},{branch}",
                    fmt_g17(v * scale),
                    self.labels[branch].name()
                )?;
            }
        }
        out.flush()
    }
}

/// Exact eigenvalues are integer multiples of `π²`; rounding keeps the
/// scaled column free of representation noise.
pub(crate) fn scaled_exact(value: f64, raw: bool) -> f64 {
    if raw {
        value
    } else {
        (value / (PI * PI)).round()
    }
}

/// Sweeps an arbitrary pencil along one axis and tracks its branches.
///
/// Grid points are solved concurrently and collected in grid order; a
/// failure at one point is recorded in its [`SweepPoint`] and ends the
/// branches passing through it.
pub fn sweep_pencil(pencil: &ParametricPencil, config: &SweepConfig) -> Result<SweepReport, ExperimentError> {
    validate_grid(config.axis.as_str(), &config.grid)?;
    if config.m == 0 {
        return Err(ExperimentError::Config("number of eigenvalues must be at least 1".into()));
    }
    let axis = AxisSweep::new(pencil, config.axis, config.fixed, config.tol)?;
    let max_value = config.max_value.map_or(f64::INFINITY, |v| v / config.scale());
    let solved: Vec<_> = config.grid.par_iter().map(|&v| axis.modes_at(v, config.m, max_value)).collect();

    let mut points = Vec::with_capacity(solved.len());
    let mut modes = Vec::with_capacity(solved.len());
    for (r, &param) in solved.into_iter().zip(&config.grid) {
        match r {
            Ok(s) => {
                let n = s.modes.ncols();
                points.push(SweepPoint {
                    param,
                    values: s.spectrum.finite[..n].to_vec(),
                    infinite_count: s.spectrum.infinite_count,
                    error: None,
                });
                modes.push(s.modes);
            }
            Err(e) => {
                points.push(SweepPoint { param, values: Vec::new(), infinite_count: 0, error: Some(e.to_string()) });
                modes.push(faer::Mat::zeros(pencil.dim(), 0));
            }
        }
    }
    let curves = track_modes(&modes, DEFAULT_MIN_OVERLAP);
    drop(modes);
    let mut report = SweepReport { config: config.clone(), points, curves, labels: Vec::new(), exact: Vec::new() };
    report.labels = (0..report.curves.len()).map(|c| label(&report.curve_values(c), config.axis)).collect();
    Ok(report)
}

fn label(curve: &[(f64, f64)], axis: SweepAxis) -> CurveLabel {
    let positive: Vec<(f64, f64)> = curve.iter().copied().filter(|&(p, _)| p > 0.0).collect();
    match classify_branch(&positive, DEFAULT_CLASSIFY_TOL) {
        Ok(fit) => match fit.shape {
            CurveShape::Constant => CurveLabel::Constant,
            CurveShape::Linear => CurveLabel::Linear(axis),
            CurveShape::Hyperbolic => CurveLabel::Hyperbolic(axis),
            CurveShape::Mixed => CurveLabel::Mixed,
        },
        Err(_) => CurveLabel::Unclassified,
    }
}

/// Sweeps the Laplace eigenproblem on `mesh` with degree `config.k`.
pub fn run_sweep(mesh: &PolygonalMesh, config: &SweepConfig) -> Result<SweepReport, ExperimentError> {
    let g = assemble(mesh, config.k, config.stabilization)?;
    let pencil = g.pencil(1.0, 1.0)?;
    drop(g);
    let mut report = sweep_pencil(&pencil, config)?;
    let longest = report.points.iter().map(|p| p.values.len()).max().unwrap_or(0);
    report.exact = exact_laplace_eigs(longest);
    Ok(report)
}
