//! Computational group theory for free products of cyclic p-groups and the
//! groups that share their lower central quotients.

pub mod coset;
pub mod error;
pub mod freeprod;
pub mod gog;
pub mod intmat;
pub mod parafree;
pub mod parse;
pub mod presentation;
pub mod rewriting;
pub mod word;

pub use error::{Error, Result};
pub use presentation::Presentation;
pub use word::{Alphabet, Gen, Word};

/// Arbitrary-precision integer matrix.
pub type IntMatrix = intmat::Matrix<num_bigint::BigInt>;
/// Smith form over arbitrary-precision integers.
pub type SmithForm = intmat::SmithForm<num_bigint::BigInt>;
/// Exact rational over arbitrary-precision integers.
pub type Rational = num_rational::BigRational;
