use super::{PencilError, Spectrum, SymmetricMatrix};

/// The pencil `(A₁ + αA₂, B₁ + βB₂)`.
#[derive(Clone, Debug)]
pub struct ParametricPencil {
    pub a1: SymmetricMatrix,
    pub a2: SymmetricMatrix,
    pub b1: SymmetricMatrix,
    pub b2: SymmetricMatrix,
    pub alpha: f64,
    pub beta: f64,
}

impl ParametricPencil {
    pub fn new(
        a1: SymmetricMatrix,
        a2: SymmetricMatrix,
        b1: SymmetricMatrix,
        b2: SymmetricMatrix,
        alpha: f64,
        beta: f64,
    ) -> Result<Self, PencilError> {
        let n = a1.dim();
        for m in [&a2, &b1, &b2] {
            if m.dim() != n {
                return Err(PencilError::DimensionMismatch { expected: n, found: m.dim() });
            }
        }
        check_parameter("alpha", alpha)?;
        check_parameter("beta", beta)?;
        Ok(Self { a1, a2, b1, b2, alpha, beta })
    }

    /// Pencil with all four matrices diagonal.
    pub fn diagonal(a1: &[f64], a2: &[f64], b1: &[f64], b2: &[f64], alpha: f64, beta: f64) -> Result<Self, PencilError> {
        Self::new(
            SymmetricMatrix::from_diagonal(a1),
            SymmetricMatrix::from_diagonal(a2),
            SymmetricMatrix::from_diagonal(b1),
            SymmetricMatrix::from_diagonal(b2),
            alpha,
            beta,
        )
    }

    pub fn dim(&self) -> usize {
        self.a1.dim()
    }

    pub fn with_params(&self, alpha: f64, beta: f64) -> Result<Self, PencilError> {
        check_parameter("alpha", alpha)?;
        check_parameter("beta", beta)?;
        Ok(Self { alpha, beta, ..self.clone() })
    }

    pub fn a(&self) -> SymmetricMatrix {
        self.a_at(self.alpha)
    }

    pub fn b(&self) -> SymmetricMatrix {
        self.b_at(self.beta)
    }

    pub fn a_at(&self, alpha: f64) -> SymmetricMatrix {
        self.a1.combine(alpha, &self.a2).expect("dimensions checked at construction")
    }

    pub fn b_at(&self, beta: f64) -> SymmetricMatrix {
        self.b1.combine(beta, &self.b2).expect("dimensions checked at construction")
    }

    /// Checks that all four matrices are positive semidefinite up to `tol`.
    pub fn ensure_semidefinite(&self, tol: f64) -> Result<(), PencilError> {
        for (name, m) in [("a1", &self.a1), ("a2", &self.a2), ("b1", &self.b1), ("b2", &self.b2)] {
            let eigs = m.eigenvalues()?;
            let scale = eigs.iter().fold(1.0f64, |s, v| s.max(v.abs()));
            if let Some(&lo) = eigs.first() {
                if lo < -tol * scale {
                    return Err(PencilError::NotSemidefinite { name, min_eigenvalue: lo });
                }
            }
        }
        Ok(())
    }
}

fn check_parameter(name: &'static str, v: f64) -> Result<(), PencilError> {
    if !(v >= 0.0) || !v.is_finite() {
        return Err(PencilError::InvalidParameter(format!("{name} must be finite and nonnegative, got {v}")));
    }
    Ok(())
}

/// How an eigenvalue of a diagonal pencil depends on `(α, β)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BranchKind {
    /// `λ = c`: index outside both kernels.
    Constant,
    /// `λ = c·α`: index in `ker A₁` only.
    LinearAlpha,
    /// `λ = c/β`: index in `ker B₁` only.
    HyperbolicBeta,
    /// `λ = c·α/β`: index in both kernels.
    RatioAlphaBeta,
    /// `B` vanishes on the index.
    Infinite,
}

impl BranchKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BranchKind::Constant => "constant",
            BranchKind::LinearAlpha => "linear_alpha",
            BranchKind::HyperbolicBeta => "hyperbolic_beta",
            BranchKind::RatioAlphaBeta => "ratio_alpha_beta",
            BranchKind::Infinite => "infinite",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Branch {
    pub coefficient: f64,
    pub kind: BranchKind,
}

impl Branch {
    pub fn value(&self, alpha: f64, beta: f64) -> f64 {
        match self.kind {
            BranchKind::Constant => self.coefficient,
            BranchKind::LinearAlpha => self.coefficient * alpha,
            BranchKind::HyperbolicBeta if beta > 0.0 => self.coefficient / beta,
            BranchKind::RatioAlphaBeta if beta > 0.0 => self.coefficient * alpha / beta,
            _ => f64::INFINITY,
        }
    }
}

/// Closed-form eigenvalue branches of a diagonal pencil, one per index.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchPrediction {
    pub branches: Vec<Branch>,
}

impl BranchPrediction {
    pub fn count(&self, kind: BranchKind) -> usize {
        self.branches.iter().filter(|b| b.kind == kind).count()
    }
}

/// Decomposes a diagonal pencil into its four families of eigenvalues.
///
/// Per index `i` at most one of `a1ᵢᵢ, a2ᵢᵢ` and at most one of `b1ᵢᵢ, b2ᵢᵢ`
/// may be nonzero, so that every coordinate vector lies in exactly one of the
/// four subspaces `K_A∩K_B`, `K_A∩K_B⊥`, `K_A⊥∩K_B`, `K_A⊥∩K_B⊥`.
pub fn predict_diagonal_spectrum(p: &ParametricPencil) -> Result<BranchPrediction, PencilError> {
    for m in [&p.a1, &p.a2, &p.b1, &p.b2] {
        if !m.is_diagonal() {
            return Err(PencilError::NotDiagonal);
        }
    }
    let (a1, a2, b1, b2) = (p.a1.diagonal(), p.a2.diagonal(), p.b1.diagonal(), p.b2.diagonal());
    let mut branches = Vec::with_capacity(a1.len());
    for i in 0..a1.len() {
        if a1[i] != 0.0 && a2[i] != 0.0 || b1[i] != 0.0 && b2[i] != 0.0 {
            return Err(PencilError::MixedSplit { index: i });
        }
        let a = if a1[i] != 0.0 { a1[i] } else { a2[i] };
        let a_in_kernel = a1[i] == 0.0 && a2[i] != 0.0;
        let branch = match (b1[i] != 0.0, b2[i] != 0.0) {
            (false, false) if a == 0.0 => return Err(PencilError::ZeroRow { index: i }),
            (false, false) => Branch { coefficient: f64::INFINITY, kind: BranchKind::Infinite },
            (true, _) => Branch {
                coefficient: a / b1[i],
                kind: if a_in_kernel { BranchKind::LinearAlpha } else { BranchKind::Constant },
            },
            (false, true) => Branch {
                coefficient: a / b2[i],
                kind: if a_in_kernel { BranchKind::RatioAlphaBeta } else if a == 0.0 { BranchKind::Constant } else { BranchKind::HyperbolicBeta },
            },
        };
        branches.push(branch);
    }
    Ok(BranchPrediction { branches })
}

/// Substitutes `(α, β)` into every branch.
pub fn evaluate_prediction(pred: &BranchPrediction, alpha: f64, beta: f64) -> Result<Spectrum, PencilError> {
    check_parameter("alpha", alpha)?;
    check_parameter("beta", beta)?;
    Ok(Spectrum::from_values(pred.branches.iter().map(|b| b.value(alpha, beta))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(p: &BranchPrediction) -> Vec<(f64, BranchKind)> {
        p.branches.iter().map(|b| (b.coefficient, b.kind)).collect()
    }

    #[test]
    fn disjoint_kernels() {
        let p = ParametricPencil::diagonal(
            &[0., 0., 3., 4., 5., 6.],
            &[1., 2., 0., 0., 0., 0.],
            &[7., 8., 9., 10., 0., 0.],
            &[0., 0., 0., 0., 0.8, 1.],
            1.0,
            1.0,
        )
        .unwrap();
        use BranchKind::*;
        assert_eq!(
            kinds(&predict_diagonal_spectrum(&p).unwrap()),
            vec![
                (1. / 7., LinearAlpha),
                (2. / 8., LinearAlpha),
                (3. / 9., Constant),
                (4. / 10., Constant),
                (5. / 0.8, HyperbolicBeta),
                (6. / 1., HyperbolicBeta)
            ]
        );
    }

    #[test]
    fn intersecting_kernels() {
        let p = ParametricPencil::diagonal(
            &[3., 0., 0., 4., 5., 6.],
            &[0., 1., 2., 0., 0., 0.],
            &[7., 8., 0., 0., 9., 10.],
            &[0., 0., 0.8, 1., 0., 0.],
            1.0,
            1.0,
        )
        .unwrap();
        use BranchKind::*;
        assert_eq!(
            kinds(&predict_diagonal_spectrum(&p).unwrap()),
            vec![
                (3. / 7., Constant),
                (1. / 8., LinearAlpha),
                (2. / 0.8, RatioAlphaBeta),
                (4. / 1., HyperbolicBeta),
                (5. / 9., Constant),
                (6. / 10., Constant)
            ]
        );
    }

    #[test]
    fn case_one_with_beta_identity() {
        let p = ParametricPencil::diagonal(&[3., 4., 5., 6., 0., 0.], &[0., 0., 0., 0., 1., 2.], &[0.; 6], &[1.; 6], 1.0, 1.0).unwrap();
        let pred = predict_diagonal_spectrum(&p).unwrap();
        assert_eq!(pred.count(BranchKind::HyperbolicBeta), 4);
        assert_eq!(pred.count(BranchKind::RatioAlphaBeta), 2);
        let s = evaluate_prediction(&pred, 1.0, 1.0).unwrap();
        assert_eq!(s.finite, vec![1., 2., 3., 4., 5., 6.]);

        let p = ParametricPencil::diagonal(&[3., 4., 5., 6., 0., 0.], &[0., 0., 0., 0., 1., 2.], &[1.; 6], &[0.; 6], 1.0, 1.0).unwrap();
        let pred = predict_diagonal_spectrum(&p).unwrap();
        assert_eq!(pred.count(BranchKind::Constant), 4);
        assert_eq!(pred.count(BranchKind::LinearAlpha), 2);
        assert_eq!(evaluate_prediction(&pred, 1.0, 1.0).unwrap().finite, vec![1., 2., 3., 4., 5., 6.]);
    }

    #[test]
    fn case_two_evaluations() {
        let p = ParametricPencil::diagonal(&[1.; 6], &[0.; 6], &[3., 4., 5., 6., 0., 0.], &[0., 0., 0., 0., 1., 2.], 1.0, 2.0).unwrap();
        let pred = predict_diagonal_spectrum(&p).unwrap();
        let s = evaluate_prediction(&pred, 1.0, 2.0).unwrap();
        // reciprocals of diag(3, 4, 5, 6, 2, 4)
        let want = [1. / 6., 1. / 5., 1. / 4., 1. / 4., 1. / 3., 1. / 2.];
        assert_eq!(s.infinite_count, 0);
        for (g, w) in s.finite.iter().zip(want) {
            assert!((g - w).abs() < 1e-15);
        }
        let s = evaluate_prediction(&pred, 1.0, 0.0).unwrap();
        assert_eq!(s.infinite_count, 2);
        assert_eq!(s.finite.len(), 4);
        assert!((s.finite[3] - 1. / 3.).abs() < 1e-15);
    }

    #[test]
    fn zero_row_and_non_diagonal_are_rejected() {
        let p = ParametricPencil::diagonal(&[1., 0.], &[0., 0.], &[1., 0.], &[0., 0.], 1.0, 1.0).unwrap();
        assert!(matches!(predict_diagonal_spectrum(&p), Err(PencilError::ZeroRow { index: 1 })));

        let full = SymmetricMatrix::from_rows(&[vec![1., 1.], vec![1., 1.]]).unwrap();
        let p = ParametricPencil::new(full, SymmetricMatrix::zeros(2), SymmetricMatrix::identity(2), SymmetricMatrix::zeros(2), 0.0, 0.0).unwrap();
        assert!(matches!(predict_diagonal_spectrum(&p), Err(PencilError::NotDiagonal)));
    }

    #[test]
    fn vanishing_numerator_is_a_zero_constant() {
        let p = ParametricPencil::diagonal(&[0., 2.], &[0., 0.], &[1., 1.], &[0., 0.], 1.0, 1.0).unwrap();
        let pred = predict_diagonal_spectrum(&p).unwrap();
        assert_eq!(pred.branches[0], Branch { coefficient: 0.0, kind: BranchKind::Constant });
    }

    #[test]
    fn negative_parameter_rejected() {
        assert!(ParametricPencil::diagonal(&[1.], &[0.], &[1.], &[0.], -1.0, 0.0).is_err());
        let pred = BranchPrediction { branches: vec![] };
        assert!(evaluate_prediction(&pred, 0.0, -0.5).is_err());
    }
}
