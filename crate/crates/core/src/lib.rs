//! Exact computations for congruence subgroups Γ = Γ₁(N₁) ∩ Γ(N₂) of SL₂(Z).
//!
//! The library is organized bottom-up:
//!
//! - [`f2`]: bit-vector linear algebra over F₂.
//! - [`exact`]: arbitrary-precision rationals, cyclotomic fields, number
//!   fields with a designated involution, and truncated q-series with
//!   fractional exponents.
//! - [`sl2`]: SL₂(Z) matrices, words in the generators S and T, group
//!   specifications (N₁, N₂), and finite reductions mod m.
//! - [`cosets`]: coset tables of PΓ in PSL₂(Z), cusps, widths, genus, and
//!   the cusp atlas of X₁(N) for squarefree odd N.
//! - [`presentation`]: Schreier generators, cusp-shear words, theta
//!   characters (sign characters vanishing on shear classes), lifts, and
//!   trace separation.
//! - [`congruence`]: congruence/noncongruence verdicts for the lifted
//!   groups, the V₂ = H₁(·, F₂) machinery, and Hecke-vanishing verdicts.
//! - [`dirichlet`]: Dirichlet characters mod squarefree odd N and Gauss
//!   sums.
//! - [`asai`]: q-expansions of newforms at arbitrary cusps of X₁(N) from
//!   the expansion at ∞.
//! - [`weight1`]: dimension formulas, the Δ-trick for dim S₁, formal
//!   square roots, and Brill-Noether specialty verdicts.
//! - [`sp4`]: Sp₄(Z) arithmetic and plus-type level structures on (Z/N)⁴.

pub mod arith;
pub mod asai;
pub mod congruence;
pub mod cosets;
pub mod dirichlet;
pub mod error;
pub mod exact;
pub mod f2;
pub mod presentation;
pub mod sl2;
pub mod sp4;
pub mod weight1;

pub use error::Error;
