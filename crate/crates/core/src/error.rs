//! Error types shared across the library.

use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A (N₁, N₂) pair violating the standing condition: gcd odd, lcm ≥ 5.
    #[error("invalid group spec ({n1}, {n2}): {reason}")]
    InvalidSpec { n1: u64, n2: u64, reason: String },

    /// A matrix that is not in SL₂(Z).
    #[error("matrix has determinant {det}, expected 1")]
    NotUnimodular { det: String },

    /// Membership was required but does not hold.
    #[error("matrix is not in the group (up to sign): {context}")]
    NotMember { context: String },

    /// A finite enumeration exceeded its element cap.
    #[error("enumeration exceeded cap of {cap} elements; choose a smaller modulus or raise the cap")]
    CapExceeded { cap: usize },

    /// Coefficient fields do not match and no embedding was declared.
    #[error("coefficient field mismatch: {context}")]
    FieldMismatch { context: String },

    /// A series operation hit a structural obstruction.
    #[error("series error: {context}")]
    Series { context: String },

    /// A square root was requested for a leading coefficient with no
    /// available root; the caller must supply a designated root.
    #[error("leading coefficient has no square root in the coefficient field; an extension is required")]
    SqrtNeedsExtension,

    /// Mutually inconsistent internal computations (signals a bug upstream).
    #[error("internal inconsistency: {context}")]
    Inconsistency { context: String },

    /// Invalid input data (ingest validation, malformed labels, bad moduli).
    #[error("invalid input: {context}")]
    InvalidInput { context: String },

    /// A bounded search ran out of budget without finding a certificate.
    #[error("search budget exhausted: {context}")]
    BudgetExhausted { context: String },
}

/// Library-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
