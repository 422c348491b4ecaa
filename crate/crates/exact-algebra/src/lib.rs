//! Exact arithmetic foundation: arbitrary-precision rationals, multivariate
//! polynomials with monomial orders, Groebner bases (ideal and module level),
//! Artinian local quotient rings with explicit multiplication tables, Hensel
//! lifting of coprime factorizations, and exact linear algebra over all of
//! these.
//!
//! Every operation is pure and exact. There is no floating point and no
//! tolerance anywhere: equality always means identical reduced fractions.

pub mod artin;
pub mod error;
pub mod groebner;
pub mod json;
pub mod linalg;
pub mod mpoly;
pub mod rational;
pub mod univar;

pub use artin::{
    artin_ring_build, kernel_over_artin, nilpotency_order, sqrt_one_plus_nilpotent, AMat,
    ArtinLocalRing, RingElem,
};
pub use error::AlgebraError;
pub use groebner::{
    buchberger, kernel_syzygies, module_member, module_normal_form, normal_form, ModVec,
    QuotientRing,
};
pub use linalg::QMat;
pub use mpoly::{MonomialOrder, MPoly, PolyMat};
pub use rational::{rat, rat_from_str, rat_to_string, rint, Rational};
pub use univar::{hensel_factor, hensel_factor_detailed, resultant_q, UnivarPoly};
