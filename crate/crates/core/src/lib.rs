//! Norm forms and quasi-norm forms over ℚ, evaluated at S-integer points.
//!
//! The library builds the full pipeline behind the `normlab` CLI:
//!
//! * [`exact`] — arbitrary-precision rational polynomial arithmetic, number
//!   fields ℚ[t]/(μ) with power-basis multiplication matrices, field norms,
//!   and Sturm real-root isolation.
//! * [`places`] — normalized valuations for the archimedean place and for
//!   finite primes, certified dyadic interval arithmetic, capped-precision
//!   p-adic numbers, and Hensel factorization of a field over ℚ_p.
//! * [`forms`] — norm forms, quasi-norm forms assembled from anisotropic
//!   binary quadratics and local norms, the GL_n(ℚ) action, evaluation.
//! * [`sintegers`] — S-integer point enumeration, content and S-norm,
//!   S-unit balancing, and value-spectrum scans.
//! * [`dynamics`] — split-torus balancing, certified shortest lattice
//!   vectors, diagonal-flow orbit traces, and compactness verdicts.

pub mod dynamics;
pub mod error;
pub mod exact;
pub mod forms;
pub mod places;
pub mod sintegers;

pub use error::{Error, Result};
