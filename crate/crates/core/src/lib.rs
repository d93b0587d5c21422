//! Spectral analysis of parameter-dependent symmetric pencils and a virtual
//! element discretization of the Dirichlet Laplace eigenproblem on polygonal
//! meshes.

pub mod assembly;
pub mod experiments;
pub mod format;
pub mod mesh;
pub mod pencil;
pub mod vem;
