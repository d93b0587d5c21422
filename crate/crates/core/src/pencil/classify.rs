use super::PencilError;

/// Shape of an eigenvalue curve on log–log axes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CurveShape {
    /// slope ≈ 0
    Constant,
    /// slope ≈ +1
    Linear,
    /// slope ≈ −1
    Hyperbolic,
    Mixed,
}

impl CurveShape {
    pub fn as_str(self) -> &'static str {
        match self {
            CurveShape::Constant => "constant",
            CurveShape::Linear => "linear",
            CurveShape::Hyperbolic => "hyperbolic",
            CurveShape::Mixed => "mixed",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchFit {
    pub shape: CurveShape,
    /// Least-squares slope of `ln(value)` against `ln(parameter)`.
    pub slope: f64,
    /// `c` in `value ≈ c · parameter^s`, `s` the rounded slope (the fitted
    /// slope for [`CurveShape::Mixed`]).
    pub coefficient: f64,
}

pub const DEFAULT_CLASSIFY_TOL: f64 = 0.1;

/// Fits `value ≈ c · parameter^s` and buckets `s` into 0, +1 or −1.
pub fn classify_branch(curve: &[(f64, f64)], rel_tol: f64) -> Result<BranchFit, PencilError> {
    if curve.len() < 4 {
        return Err(PencilError::TooFewPoints { found: curve.len() });
    }
    if let Some(i) = curve.iter().position(|&(p, v)| !(p > 0.0 && v > 0.0) || !p.is_finite() || !v.is_finite()) {
        return Err(PencilError::NonPositiveValue { index: i });
    }
    let n = curve.len() as f64;
    let xs: Vec<f64> = curve.iter().map(|c| c.0.ln()).collect();
    let ys: Vec<f64> = curve.iter().map(|c| c.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx <= 0.0 {
        return Err(PencilError::InvalidParameter("curve parameters must not all coincide".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;

    let shape = if slope.abs() < rel_tol {
        CurveShape::Constant
    } else if (slope - 1.0).abs() < rel_tol {
        CurveShape::Linear
    } else if (slope + 1.0).abs() < rel_tol {
        CurveShape::Hyperbolic
    } else {
        CurveShape::Mixed
    };
    let s = match shape {
        CurveShape::Constant => 0.0,
        CurveShape::Linear => 1.0,
        CurveShape::Hyperbolic => -1.0,
        CurveShape::Mixed => slope,
    };
    let log_c = xs.iter().zip(&ys).map(|(x, y)| y - s * x).sum::<f64>() / n;
    Ok(BranchFit { shape, slope, coefficient: log_c.exp() })
}
