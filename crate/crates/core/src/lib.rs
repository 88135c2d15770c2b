//! Boundary-integral solver and verification toolkit for the two-dimensional
//! Stokes resolvent problem
//!
//! ```text
//! λu − Δu + ∇φ = f,  div u = 0  in Ω,   u = g  on ∂Ω
//! ```
//!
//! on bounded Lipschitz domains. The crate is layered bottom-up:
//!
//! * [`special`]: digamma, Hankel functions of the first kind and the
//!   derivatives of `H0` for complex arguments in the upper half-plane.
//! * [`kernels`]: Helmholtz and Laplace Green's functions, the Stokeslet
//!   `Γ(x;λ)`, the pressure kernel `Φ`, cancellation-safe small-argument paths
//!   and envelope sweeps.
//! * [`geometry`]: boundary curves, graded panel meshes, approach regions.
//! * [`potentials`]: layer potentials, Nyström boundary operators, jumps.
//! * [`solver`]: the Dirichlet boundary integral equation, volume potentials,
//!   the full resolvent `(λ + A)^{-1}` and discrete norms.
//! * [`calculus`]: semigroup, fractional powers and smoothing rates by
//!   resolvent quadrature.
//! * [`cli`]: configuration parsing, dispatch and CSV reports.

pub mod calculus;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod kernels;
pub mod linalg;
pub mod potentials;
pub mod quadrature;
pub mod report;
pub mod solver;
pub mod special;
pub mod suites;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
