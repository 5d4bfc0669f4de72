//! Exact decision procedures for k-dimensional transversals of small families of
//! convex bodies, colorful-intersection instance generators, and the antipodal
//! separating-normal certificate that rules transversals out above the critical
//! dimension.
//!
//! All arithmetic is exact over arbitrary-precision rationals; predicates reduce to
//! feasibility problems solved by a phase-one simplex with Bland's rule.

pub mod certificate;
pub mod convex;
pub mod error;
pub mod exactla;
pub mod format;
pub mod transversal;
pub mod witness;

pub use certificate::{full_certificate, CertificateOutcome, CertificateReport};
pub use convex::{AffineFlat, ConvexBody, VPolytope};
pub use error::{Error, Result};
pub use exactla::{QMatrix, QVector, Rational};
pub use transversal::{
    check_colorful, k_transversal, verify_theorem, ColorfulReport, Family, Instance, Partition,
    TheoremReport, TransversalWitness,
};
pub use witness::{CounterexampleInstance, Representation};
