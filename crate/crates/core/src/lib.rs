//! Newton-type fixed-point iteration schemes for polynomial root finding.
//!
//! * [`poly`]: complex polynomials, an expression parser and a simultaneous
//!   root finder.
//! * [`schemes`]: Newton, Picard–Mann, three-step, S-iteration and the
//!   three-stage Newton-like iteration, all as compositions of convex steps.
//! * [`bracket`]: interval conditions, derivative bounds and a-posteriori
//!   error estimates for real polynomials.
//! * [`render`]: basin-of-attraction images (polynomiographs) and PPM output.

pub mod bracket;
pub mod format;
pub mod poly;
pub mod render;
pub mod schemes;

pub use num_complex::Complex64;
pub use poly::{find_roots, parse, Polynomial, RootSet};
pub use schemes::{IterationScheme, NewtonMap, OrbitResult, SenMap, StopRule};
