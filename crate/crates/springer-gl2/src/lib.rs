//! Exact module computations for the Grothendieck-Springer resolution of
//! gl2 over the rationals.
//!
//! The universal trace-split operator `nu = [[a+z, b],[c, -a+z]]` acts on a
//! free rank-2 module over the quadratic extension
//! `Utilde = Q[a,b,c,z][h]/(h^2 - (a^2 + bc))`. This crate certifies, with
//! module Groebner bases and exact rational linear algebra:
//!
//! * the factorization of the characteristic polynomial through the
//!   eigenvalue shift `h`;
//! * the two-periodic exactness of multiplication by `nu - (z+h)` and
//!   `nu - (z-h)`, with `ker(nu - (z+h))` free of rank two over the base
//!   polynomial ring;
//! * a finite presentation of that kernel by two generators and two
//!   relations, including the failure of flatness over the origin and
//!   freeness of rank one over each nonsplit quadratic fiber ring;
//! * pointwise classification of the eigenvalue-cover fibers into etale,
//!   ramified, and full-flag types.

pub mod checks;
pub mod fiber;
pub mod rings;

pub use checks::{
    all_passed, charpoly_factorization_check, presentation_fiber, report_json,
    verify_periodic_exactness, verify_presentation, Check, SpecializationConfig,
};
pub use fiber::{fiber_type, fiber_type_rational, FiberType, SpringerFiberData};
pub use rings::{parse, SpringerRings, SPRINGER_VARS};
