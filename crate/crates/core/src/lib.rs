//! Spectral simulation and statistical verification of time-fractional
//! stochastic Navier-Stokes dynamics driven by Hermite noise.
//!
//! The library is organized along the pipeline:
//!
//! * [`mlf`] — Mittag-Leffler functions and the diagonal kernels of the
//!   fractional solution operators;
//! * [`noise`] — long-range-dependent Gaussian sequences, Hermite
//!   transforms, and partial-sum approximations of the Hermite process;
//! * [`spectral`] — eigenvalue models, fractional Sobolev norms,
//!   Hilbert-Schmidt norms, Helmholtz projection, and the convective
//!   bilinear term on the 2-D torus;
//! * [`convolution`] — Monte Carlo simulation of the stochastic
//!   convolution and its regularity exponents;
//! * [`solver`] — Picard construction of mild solutions in the weighted
//!   space, with contraction and Hölder diagnostics;
//! * [`nclt`] — discrete-noise solutions and distributional convergence
//!   checks;
//! * [`config`] / [`suite`] — experiment configuration, orchestration and
//!   machine-readable reports.

mod dd;
mod quad;

pub mod config;
pub mod convolution;
pub mod error;
pub mod mlf;
pub mod nclt;
pub mod noise;
pub mod report;
pub mod seed;
pub mod solver;
pub mod spectral;
pub mod stats;
pub mod suite;

pub use error::{Error, Result};
