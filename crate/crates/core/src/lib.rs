//! Quaternionic operator theory on `H^n`.
//!
//! Bounded right-linear operators are represented as dense quaternionic matrices.
//! The crate computes the pencil `Δ_q(A)`, the pseudo-resolvent `Q_q(A)` and the
//! left/right S-resolvents, the S-spectrum, the Cassini pseudo-metric and its balls,
//! and the spherical series expansion of the S-resolvent around a point of the
//! S-resolvent set, together with numerical checks of the identities that tie them
//! together.

pub mod error;
pub mod hmat;
pub mod quat;
pub mod random;
pub mod resolvent;
pub mod series;
pub mod slice;
pub mod spectrum;
pub mod verify;

pub use error::{Error, Result};
pub use hmat::{ComplexRep, HVector, QMatrix};
pub use quat::{cassini_u, spherical_power, spherical_power_sderiv, triangle, CassiniBall, Quaternion, SpherePoint};
pub use resolvent::{delta_op, resolvent_bundle, Residual, ResolventBundle};
pub use spectrum::{cassini_dist, in_resolvent, s_spectrum, SpectralSphere, SpectrumResult};
pub use series::{series_init, RemainderCheck, SeriesEval, SeriesReport, SeriesState};
pub use slice::{cauchy_coeffs, cr_residual, sderiv_operator, stem_decompose, SResolventFn, SliceEvaluator, SliceFunction, StemPair};
