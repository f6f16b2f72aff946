//! Polynomials with zeros in a disk, integral means on the unit circle, and
//! numerical certificates for L_p inequalities involving the polar
//! derivative `D_alpha P = n P + (alpha - z) P'`.

pub mod certificate;
pub mod circle;
pub mod error;
pub mod eval;
pub mod generate;
pub mod inequalities;
pub mod instance;
pub mod poly;
pub mod quadrature;
pub mod roots;

pub use certificate::{CheckerId, InequalityCertificate, Params, Verdict};
pub use error::{CheckError, InstanceError, PolyError};
pub use inequalities::{CheckContext, CheckOptions, Outcome, ParamGrid, Rejection, SweepPoint};
pub use instance::{Instance, InstanceSpec};
pub use num_complex::Complex64;
pub use poly::ComplexPoly;
pub use roots::{max_zero_modulus, RootFinder};
