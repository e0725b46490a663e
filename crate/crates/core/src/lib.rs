//! Spectra of the scalar Laplacian and of the transverse-traceless tensor
//! perturbation on the Page inhomogeneous Einstein metric on CP² # CP̄².
//!
//! The eigenproblems are singular Sturm–Liouville problems on x ∈ [−1,1].
//! [`singular::strip`] removes the endpoint behaviour, [`spectral`] solves
//! the regular remainder by Chebyshev collocation, [`shooting`] provides an
//! independent check, and [`perturbation`] holds the small-squashing
//! expansion and the large-overtone fit.
//!
//! ```
//! use page_spectrum::{build_scalar, converge, resolution_ladder, strip, MetricParams, ModeNumbers, SolveOptions};
//!
//! let family = ModeNumbers::family(0, 0)?;
//! let stripped = strip(&build_scalar(family, MetricParams::page()))?;
//! let ladder = resolution_ladder(&stripped.problem, 64);
//! let opts = SolveOptions { count: Some(3), ..Default::default() };
//! let spectrum = converge(&stripped, &ladder, &opts)?;
//! assert!((spectrum.pairs[1].eigenvalue - 1.85251690621979).abs() < 1e-10);
//! # Ok::<(), page_spectrum::SpectrumError>(())
//! ```

pub mod error;
pub mod field;
pub mod metric;
pub mod modes;
pub mod perturbation;
pub mod problem;
pub mod scalar;
pub mod shooting;
pub mod singular;
pub mod spectral;
pub mod tensor;
pub mod validation;

pub use error::{Result, SpectrumError};
pub use metric::{solve_nu, MetricParams};
pub use modes::{mu_of, ModeNumbers};
pub use problem::{NormalForm, Problem, SturmLiouville};
pub use scalar::{build_nu_zero_reference, build_scalar, ReferenceProblem, ScalarProblem};
pub use singular::{strip, Endpoint, RobinBc, StrippedProblem};
pub use spectral::{converge, default_resolutions, resolution_ladder, spectrum_at, EigenPair, SolveOptions, Spectrum};
pub use tensor::{build_tensor, TensorProblem};
