//! Eigenvalue problems for differential forms on flat domains.
//!
//! * [`bessel`]: Bessel functions, their first zeros and closed-form ball spectra.
//! * [`discretize`]: box domains and the finite-difference pencils of the
//!   clamped-plate, buckling, Dirichlet and absolute problems on p-forms.
//! * [`eigensolve`]: smallest eigenpairs of symmetric pencils with residual
//!   certificates.
//! * [`verify`]: constants, inequality checks and mesh-convergence studies.

pub mod bessel;
pub mod discretize;
pub mod eigensolve;
pub mod error;
pub mod sparse;
pub mod verify;

pub use bessel::{ball_spectrum, BallSpectrum, BesselOrder};
pub use discretize::{assemble, build_domain, BoundaryKind, BoxDomain, ComponentIndex, FormProblem, ProblemKind};
pub use eigensolve::{solve_form, solve_generalized, SolverConfig, SolverMethod, Spectrum};
pub use error::{Error, Result};

/// Version of this crate, recorded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
