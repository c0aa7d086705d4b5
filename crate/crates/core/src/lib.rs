//! Finite-dimensional calculus of monotone linear relations.
//!
//! Operators live in `R^n × R^n` and are given as finite sample sets,
//! subspaces, or translated subspaces. The crate computes `⊢`-complements,
//! closed-form Fitzpatrick functions, ε-enlargement membership, and decides
//! whether a maximal monotone affine operator is non-enlargeable.

pub mod document;
pub mod enlargeability;
pub mod error;
pub mod fitzpatrick;
pub mod generate;
pub mod operator;
pub mod oracle;
pub mod relation;
pub mod scalar;
pub mod suite;

pub use enlargeability::{
    classify_dual_sign, construct_from_self_cancelling, decide_non_enlargeable, disambiguate_sign,
    fitz_vanishes_on_dual, max_self_cancelling_part, monotone_dual_is_maximal, zero_duality_locus,
    Sign, Transcript, Verdict,
};
pub use error::{Error, Result};
pub use fitzpatrick::{
    effective_domain_fitz, fitz_finite, fitz_linear, in_enlargement_def, in_enlargement_fitz,
    represents_check, ExtReal, Fitzpatrick, GramData, QuadFunc,
};
pub use operator::{
    adjoint, is_maximal_self_cancelling, is_self_cancelling, is_skew, AffineRelation, FiniteSet,
    Operator,
};
pub use relation::{canonicalize, duality, pairing, PairedPoint, Subspace};
pub use scalar::{ArithMode, Rational, Scalar, ARITH_ENV_VAR, FLOAT_TOLERANCE};
