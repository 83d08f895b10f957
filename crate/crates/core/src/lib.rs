//! Spectral laboratory for the prescribed curvature gradient flow on the CR 3-sphere.
//!
//! The sphere S³ ⊂ ℂ² carries its standard contact structure. Everything in this
//! crate is built from one explicit frame,
//!
//! ```text
//! Z₁ = ζ̄₂ ∂ζ₁ − ζ̄₁ ∂ζ₂,    T = i(ζ₁∂ζ₁ + ζ₂∂ζ₂ − ζ̄₁∂ζ̄₁ − ζ̄₂∂ζ̄₂),
//! ```
//!
//! with the contact form dual to `T`. Structure constants (Levi form, torsion,
//! Webster curvature, sub-Laplacian eigenvalues, volume) are derived from this
//! convention at runtime in exact rational arithmetic, never imported from tables.
//!
//! Module map:
//! - [`poly`]: exact complex-rational polynomial algebra on ℂ² restricted to S³
//! - [`frame`]: frame vector fields, sub-Laplacian, structure-equation derivation
//! - [`basis`]: bigraded spherical harmonics and the orthonormal basis table
//! - [`quadrature`]: certified tensor quadrature in Hopf coordinates
//! - [`field`]: spectral/grid fields and the forward/inverse transforms
//! - [`operators`]: projection onto pluriharmonics, the fourth-order multiplier
//!   operator, curvature data, diagonal solvers and the Green kernel
//! - [`mobius`]: Cayley transform, sphere automorphisms, conformal pullbacks,
//!   moment centering
//! - [`symmetry`]: finite unitary symmetry groups, invariant projections, fixed sets
//! - [`flow`]: the constrained negative-gradient flow engine
//! - [`diagnostics`]: gauge distance, rate fitting, concentration scans, monitors
//! - [`ineq`]: exponential-class inequality verification and point configurations
//! - [`config`] / [`experiment`]: config-driven reproducible experiment runner

pub mod basis;
pub mod config;
pub mod diagnostics;
pub mod experiment;
pub mod field;
pub mod flow;
pub mod frame;
pub mod ineq;
pub mod mobius;
pub mod operators;
pub mod poly;
pub mod quadrature;
pub mod symmetry;
pub mod util;








/// Convention tag embedded in every report and cache file.
pub const CONVENTION_TAG: &str = "s3-hopf-frame-v1";

/// Crate version string embedded in reports.
pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("frame derivation failed: {0}")]
    Frame(String),
    #[error("basis construction failed: {0}")]
    Basis(String),
    #[error("quadrature certification failed: {0}")]
    Quadrature(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("normalization cross-check failed: {0}")]
    Normalization(String),
    #[error("curvature data invalid: {0}")]
    Curvature(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("numerical abort: {0}")]
    Numerical(String),
    #[error("solver did not converge: {0}")]
    NonConvergence(String),
    #[error("config invalid: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
