//! # periflow
//!
//! One-dimensional nonlocal (peridynamic) moisture transport in unsaturated
//! soil, discretized in space by Chebyshev collocation on Gauss-Lobatto
//! points with transform-based kernel convolution, and integrated in time by
//! explicit Euler.
//!
//! The crate is organized around the pipeline:
//!
//! - [`chebyshev`] — spectral grids, discrete Chebyshev transforms, series
//!   products and convolution in coefficient space;
//! - [`soil`] — van Genuchten–Mualem constitutive relations (retention and
//!   conductivity);
//! - [`kernel`] — influence functions, the scaled kernel `phi(z)/|z|` and its
//!   normalization constant beta;
//! - [`operator`] — assembly of the nonlocal right-hand side, both through
//!   the spectral convolution path and through an independent
//!   direct-quadrature oracle;
//! - [`stepper`] — explicit Euler time integration with Dirichlet boundary
//!   enforcement and run diagnostics;
//! - [`config`], [`scenario`], [`output`], [`verify`] — scenario presets,
//!   the text config format, CSV/SVG/summary writers and the verification
//!   harnesses behind the CLI.

// validation guards are written as negated comparisons (`!(x > 0.0)`) so
// that NaN inputs fail them
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chebyshev;
pub mod config;
pub mod kernel;
pub mod operator;
pub mod output;
pub mod quadrature;
pub mod scenario;
pub mod soil;
pub mod stepper;
pub mod verify;

pub use chebyshev::{ChebSeries, NodalField, Orientation, SpectralGrid};
pub use config::SimConfig;
pub use kernel::{KernelFamily, KernelSpec};
pub use operator::RhsWorkspace;
pub use soil::SoilParams;
pub use stepper::{BoundaryConditions, SimState, Trajectory};
