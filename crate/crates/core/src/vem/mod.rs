//! Lowest-to-cubic order virtual elements on polygons.
//!
//! Local DoFs are vertex values, scaled edge moments up to order `k − 2` and
//! scaled internal moments against `P_{k−2}`. Polynomials are expanded in
//! scaled monomials centred at the polygon centroid with scale `h_P`, and
//! every polynomial integral is computed exactly.

mod basis;
mod dofs;
mod element;
mod geometry;
mod quadrature;

use thiserror::Error;

pub use basis::{dim, index_of, ScaledMonomialBasis};
pub use dofs::{DofKind, DofLayout};
pub use element::{
    integrate_monomials, local_matrices, mass_matrix, projector_l2, projector_nabla, LocalElement,
};
pub use geometry::ElementGeometry;
pub use quadrature::{gauss_legendre, PolygonQuadrature};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VemError {
    #[error("centroid fan triangle {triangle} is flipped; polygon is not star-shaped about its centroid")]
    NonStarShaped { triangle: usize },
    #[error("projector constraint system is singular")]
    SingularConstraint,
    #[error("polynomial mass matrix is singular")]
    SingularMass,
    #[error("unsupported polynomial degree {0}; expected 1, 2 or 3")]
    UnsupportedDegree(usize),
    #[error("degenerate cell: {0}")]
    DegenerateCell(String),
}

/// Scaling of the DoF-identity stabilizations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum StabilizationMode {
    /// `σ_P = τ_P = 1`.
    #[default]
    DofIdentity,
    /// `σ_P = tr(A₁ˡ)/N_P`, `τ_P = tr(B₁ˡ)/(h_P² N_P)`.
    MeanEigenvalue,
}

impl StabilizationMode {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::DofIdentity => "dofi",
            Self::MeanEigenvalue => "mean-eig",
        }
    }
}

impl std::str::FromStr for StabilizationMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dofi" => Ok(Self::DofIdentity),
            "mean-eig" => Ok(Self::MeanEigenvalue),
            other => Err(format!("unknown stabilization `{other}` (expected dofi or mean-eig)")),
        }
    }
}
