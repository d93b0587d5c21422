use std::io::Write;

use super::{ExperimentError, TOY_TOLERANCE};
use crate::format::fmt_g17;
use crate::pencil::{
    predict_diagonal_spectrum, solve_gep_values, BranchKind, ParametricPencil, Spectrum, DEFAULT_TOL,
};

/// How the kernels of `A₁` and `B₁` overlap in the two-parameter toy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelLayout {
    Disjoint,
    Intersecting,
}

/// Built-in diagonal pencils.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ToyCase {
    /// `A₁ + αA₂` against `B = I`.
    AlphaOnly,
    /// `A = I` against `B₁ + βB₂`.
    BetaOnly,
    /// Both parameters active.
    TwoParameter(KernelLayout),
}

impl ToyCase {
    pub fn number(self) -> u8 {
        match self {
            ToyCase::AlphaOnly => 1,
            ToyCase::BetaOnly => 2,
            ToyCase::TwoParameter(_) => 3,
        }
    }
}

pub fn toy_pencil(case: ToyCase) -> ParametricPencil {
    let ones = [1.0; 6];
    let zeros = [0.0; 6];
    let (a1, a2, b1, b2): ([f64; 6], [f64; 6], [f64; 6], [f64; 6]) = match case {
        ToyCase::AlphaOnly => ([3., 4., 5., 6., 0., 0.], [0., 0., 0., 0., 1., 2.], ones, zeros),
        ToyCase::BetaOnly => (ones, zeros, [3., 4., 5., 6., 0., 0.], [0., 0., 0., 0., 1., 2.]),
        ToyCase::TwoParameter(KernelLayout::Disjoint) => (
            [0., 0., 3., 4., 5., 6.],
            [1., 2., 0., 0., 0., 0.],
            [7., 8., 9., 10., 0., 0.],
            [0., 0., 0., 0., 0.8, 1.],
        ),
        ToyCase::TwoParameter(KernelLayout::Intersecting) => (
            [3., 0., 0., 4., 5., 6.],
            [0., 1., 2., 0., 0., 0.],
            [7., 8., 0., 0., 9., 10.],
            [0., 0., 0.8, 1., 0., 0.],
        ),
    };
    ParametricPencil::diagonal(&a1, &a2, &b1, &b2, 1.0, 1.0).expect("built-in toy pencils are valid")
}

/// `(α, β)` pairs for a sweep: case 2 sweeps β with α fixed, the others
/// sweep α with β fixed.
pub fn toy_points(case: ToyCase, grid: &[f64], fixed: f64) -> Vec<(f64, f64)> {
    grid.iter()
        .map(|&t| match case {
            ToyCase::BetaOnly => (fixed, t),
            _ => (t, fixed),
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct ToyPoint {
    pub alpha: f64,
    pub beta: f64,
    pub computed: Spectrum,
    /// Predicted eigenvalues ascending, infinite ones last.
    pub predicted: Vec<(f64, BranchKind)>,
    /// Largest absolute difference between computed and predicted values.
    pub discrepancy: f64,
}

#[derive(Clone, Debug)]
pub struct ToyReport {
    pub case: ToyCase,
    pub points: Vec<ToyPoint>,
    pub max_discrepancy: f64,
}

impl ToyReport {
    pub fn passed(&self) -> bool {
        self.max_discrepancy <= TOY_TOLERANCE
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "alpha,beta,index,computed,predicted,branch,discrepancy")?;
        for p in &self.points {
            let computed = p.computed.finite.iter().copied().chain(std::iter::repeat(f64::INFINITY));
            for (i, (c, (v, kind))) in computed.zip(&p.predicted).enumerate() {
                writeln!(
                    out,
                    "{},{},{i},{},{},{},{}",
                    fmt_g17(p.alpha),
                    fmt_g17(p.beta),
                    fmt_g17(c),
                    fmt_g17(*v),
                    kind.as_str(),
                    fmt_g17(p.discrepancy)
                )?;
            }
        }
        out.flush()
    }
}

/// Solves the toy pencil at each point and compares with the closed-form branches.
pub fn run_toy(case: ToyCase, points: &[(f64, f64)]) -> Result<ToyReport, ExperimentError> {
    let base = toy_pencil(case);
    let prediction = predict_diagonal_spectrum(&base)?;
    let mut out = Vec::with_capacity(points.len());
    let mut max_discrepancy = 0.0f64;
    for &(alpha, beta) in points {
        let p = base.with_params(alpha, beta)?;
        let computed = solve_gep_values(&p.a(), &p.b(), DEFAULT_TOL)?;
        let mut predicted: Vec<(f64, BranchKind)> =
            prediction.branches.iter().map(|b| (b.value(alpha, beta), b.kind)).collect();
        predicted.sort_by(|x, y| x.0.total_cmp(&y.0));
        let finite_predicted: Vec<f64> =
            predicted.iter().map(|x| x.0).filter(|v| v.is_finite()).collect();
        let discrepancy = if finite_predicted.len() != computed.finite.len() {
            f64::INFINITY
        } else {
            finite_predicted.iter().zip(&computed.finite).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
        };
        max_discrepancy = max_discrepancy.max(discrepancy);
        out.push(ToyPoint { alpha, beta, computed, predicted, discrepancy });
    }
    Ok(ToyReport { case, points: out, max_discrepancy })
}
