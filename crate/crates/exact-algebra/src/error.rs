use thiserror::Error;

/// Errors shared across the exact-algebra operations. Each variant carries
/// enough context to diagnose the failing input without re-running it.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum AlgebraError {
    /// Quotient ring is infinite-dimensional: some generator has no power in
    /// the ideal.
    #[error("quotient is not Artinian: generator `{generator}` has no power in the ideal")]
    NotArtinian { generator: String },

    /// Quotient is finite-dimensional but not local with rational residue
    /// field (some generator is not nilpotent, or the ideal is the unit
    /// ideal).
    #[error("quotient is not local with rational residue field: {reason}")]
    NotLocal { reason: String },

    /// Residue factors passed to Hensel lifting share a root.
    #[error("residue factors are not coprime: resultant vanishes")]
    NotCoprime,

    /// Polynomial does not reduce to the given product modulo the nilradical.
    #[error("polynomial is not congruent to the product of the residue factors")]
    NotCongruent,

    /// Square-root input is not 1 plus a nilpotent.
    #[error("element is not unipotent: u - 1 lies outside the nilradical")]
    NotUnipotent,

    /// Residue kernel dimension differs from the caller's expectation.
    #[error("kernel rank mismatch: expected {expected}, residue kernel has dimension {found}")]
    RankMismatch { expected: usize, found: usize },

    /// Residue kernel vector admits no exact lift; the input is not free or
    /// flat in the way the construction requires.
    #[error("kernel lift obstructed: only {liftable} of {expected} residue kernel directions lift exactly")]
    LiftObstruction { expected: usize, liftable: usize },
}
