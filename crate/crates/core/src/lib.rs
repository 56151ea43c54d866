//! Abelian-square and additive-square toolkit.
//!
//! Detection and enumeration of Ab-square and additive-square factors,
//! all-centers computation by divide and conquer over monotone Parikh sets,
//! a Conv3SUM → MidSUM3 → string reduction pipeline with witness tracing,
//! and the gadget-string encoders that turn integer instances into texts
//! whose Ab-square structure carries the answer.

pub mod absquare;
pub mod arith;
pub mod gadget;
pub mod io;
pub mod parikh;
pub mod progfree;
pub mod reduce;
pub mod text;

pub use absquare::{centers, detect_odd_absquare, enumerate_absquares, is_absquare, IntersectionBackend};
pub use arith::{IndexPairWitness, IntSeq};
pub use parikh::{ab_equivalent, parikh, FingerprintBasis, ParikhVector, PrefixParikhTable};
pub use text::{Alphabet, Center, Occurrence, Text};
