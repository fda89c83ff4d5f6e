//! Spectral-Galerkin machinery for constructing and verifying random periodic
//! solutions of semilinear SPDEs with diagonal multiplicative linear noise.
//!
//! The library works in the eigenbasis of `L = d²/dx² + c` on `(0,1)` with
//! Dirichlet boundary, where the linear stochastic evolution operator acts
//! diagonally: mode `k` is multiplied by `exp(mu_k t + sigma_k (W^k_{s+t} - W^k_s))`.
//! On top of that closed form the crate builds
//!
//! * two-sided per-mode Brownian ensembles with an exact shift operator
//!   ([`noise`]),
//! * the evolution cocycle, its norm cap, and dichotomy / Lyapunov
//!   diagnostics ([`cocycle`]),
//! * the coupled forward-backward infinite-horizon integral map and its
//!   Picard fixed-point solver for periodic random fields ([`periodic`]),
//! * a mild-solution integrator that verifies the periodic orbit against the
//!   actual semiflow ([`semiflow`]),
//! * closed-form Malliavin derivatives of the capped operator together with
//!   the derivative-norm bound curve ([`malliavin`]),
//! * the stochastic Allen-Cahn pipeline with drift cutoff and pointwise
//!   localization ([`allen_cahn`]).
//!
//! Ensembles parallelize over samples via rayon when the `parallel` feature
//! (default) is enabled; all reductions use a fixed pairwise order so results
//! are byte-identical with and without threads.

pub mod allen_cahn;
pub mod cocycle;
pub mod config;
pub mod drift;
pub mod error;
pub mod exec;
pub mod experiment;
pub mod malliavin;
pub mod noise;
pub mod periodic;
pub mod semiflow;
pub mod spectral;
pub mod stats;
pub mod timegrid;

pub use error::Error;

/// Crate version string recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
