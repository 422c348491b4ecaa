//! Error type for lattice-with-connection computations.

use std::fmt;

/// Failure modes of connection-module operations. Every variant corresponds
/// to a violated precondition or a structural certificate that could not be
/// produced; no operation silently returns partial data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConnError {
    /// A gauge matrix whose constant term is not invertible over the base.
    NotInvertible,
    /// fuchs_normalize_weight0 called on a module whose Sen polynomial is
    /// not congruent to T^n modulo the nilradical.
    NotWeightZero,
    /// The residue Sen polynomial does not split into integer linear factors.
    NotAlmostDeRham,
    /// The truncation window is too short for the requested operation.
    WindowTooSmall,
    /// A filtration step is not stable under the nilpotent operator, or a
    /// claimed free summand fails its freeness certificate.
    FiltrationNotStable,
    /// An operator image that must be divisible by t has a nonzero constant
    /// band; signals corrupted input since valid Sen data forbids it.
    DivisionObstruction,
    /// A computed submodule fails its Nakayama freeness certificate or has
    /// an unexpected rank.
    NotFree,
    /// Weight data of the wrong shape for the requested tensor computation.
    WeightShapeMismatch,
}

impl fmt::Display for ConnError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConnError::NotInvertible => write!(f, "gauge matrix is not invertible at t = 0"),
            ConnError::NotWeightZero => {
                write!(f, "Sen polynomial is not T^n modulo the nilradical")
            }
            ConnError::NotAlmostDeRham => {
                write!(f, "residue Sen polynomial has no integer root decomposition")
            }
            ConnError::WindowTooSmall => write!(f, "truncation window too small"),
            ConnError::FiltrationNotStable => {
                write!(f, "filtration is not stable or not free")
            }
            ConnError::DivisionObstruction => {
                write!(f, "operator image is not divisible by t")
            }
            ConnError::NotFree => write!(f, "submodule fails its freeness certificate"),
            ConnError::WeightShapeMismatch => {
                write!(f, "weight data has the wrong shape for this operation")
            }
        }
    }
}

impl std::error::Error for ConnError {}
