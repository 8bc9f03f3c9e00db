//! Exact counting of integer partitions whose parts lie in residue classes
//! modulo `m`, with checkers for the upper bounds on those counts and for
//! the analytic inequalities used to prove them.
//!
//! The counting engines are generic over [`num::Count`] and the analytic code
//! over [`num::Real`]; the aliases below fix the usual choices
//! (arbitrary-precision counts, `f64` reals).

pub mod bounds;
pub mod cli;
pub mod counting;
pub mod num;
pub mod partset;
pub mod report;
pub mod series;
pub mod verify;

pub use partset::{ExplicitSet, PartSetVariant, ResidueSpec};

/// Arbitrary-precision nonnegative partition count.
pub type BigCount = num_bigint::BigUint;
/// Default real scalar.
pub type Real = f64;

pub type CountTable = counting::CountTable<BigCount>;
pub type BoundParams = bounds::BoundParams<Real>;
pub type BoundReport = bounds::BoundReport<Real>;
pub type SeriesPoint = series::SeriesPoint<Real>;
pub type SeriesCheckReport = series::SeriesCheckReport<Real>;
pub type Counterexample = series::Counterexample<Real>;
