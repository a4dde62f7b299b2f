//! Uniform set families with restricted intersections.
//!
//! The crate answers two extremal questions about `k`-uniform families of
//! subsets of `[n]` whose pairwise (or `t`-wise) intersection sizes lie in a
//! prescribed set `L`:
//!
//! * `kappa`: the largest member size `k` admitting an `m`-member family;
//! * `mu`: the largest number of members for a given member size `k`.
//!
//! It provides the closed-form bounds and exact values ([`bounds`]), the
//! explicit families that witness them ([`constructions`]), the integer
//! program over element signatures ([`assignment`]) and exhaustive search
//! for small instances ([`oracle`]).

pub mod arith;
pub mod assignment;
pub mod bounds;
pub mod constructions;
pub mod family;
pub mod oracle;

pub use arith::Rational;
pub use family::{
    intersection_profile, read_family, verify, verify_capped, write_family, FamilyError, FamilyFormat, IntersectionLaw,
    LawKind, SetFamily, VerificationReport, Violation,
};
