//! Numerical study of generalized Hilbert operators on weighted Dirichlet
//! spaces.
//!
//! A radial weight `v` on the unit disk induces the Dirichlet-type space
//! `D_v` of analytic functions with `|f(0)|^2 + int |f'|^2 v dA < infty`.
//! An analytic symbol `g` induces the generalized Hilbert operator
//!
//! ```text
//! H_g(f)(z) = int_0^1 f(t) g'(tz) dt,
//! ```
//!
//! which for `g(z) = log 1/(1-z)` is the classical Hilbert operator. This
//! crate realizes these objects at finite truncation and measures, at desk
//! scale, the relationships between
//!
//! - Muckenhoupt-type conditions `M1(v)`, `M2(v)` on the weight,
//!   boundedness of the Hilbert operator, and the sandwich
//!   `M2/M1 <~ ||H|| <~ M1*M2`;
//! - membership of `H_g` in the Schatten class `S_p(D_v)` and the dyadic
//!   mixed-norm size `||g - g(0)||_{B(2,p)}` of the symbol;
//! - the little-oh symbol class `b(2,infty)` and compactness.
//!
//! The crate is organized bottom-up:
//!
//! - [`quadrature`]: adaptive integration on (0, 1) with endpoint
//!   singularity handling, divergence probes, and grid suprema;
//! - [`weights`]: radial weights, tails, moments, the doubling class and
//!   all Muckenhoupt-type condition evaluators;
//! - [`symbols`]: coefficient rules for symbols, dyadic block profiles and
//!   `B(2,p)` norms by two routes;
//! - [`spaces`]: the `D_v` inner product, the radial space `L^2_{V2}`,
//!   orthonormal bases and Hardy-Littlewood-type inequality checks;
//! - [`operators`]: truncated matrices of `H_g`, the discretized classical
//!   Hilbert operator, and extremal test inputs;
//! - [`schatten`]: singular spectra of truncations, `S_p` norms, sweeps;
//! - [`verify`]: named suites that bundle the above into pass/fail reports;
//! - [`cli`]: the command-line front end.
//!
//! Each major capability has a runnable example under `examples/`.

pub mod cli;
pub mod error;
pub mod operators;
pub mod quadrature;
pub mod schatten;
pub mod spaces;
pub mod symbols;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
