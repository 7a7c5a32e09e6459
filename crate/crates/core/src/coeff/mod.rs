//! Coefficient domains: ℚ, number fields, finite fields and rational
//! function fields, plus prime-ideal reduction and house bounds.

pub mod dense;
pub mod domain;
pub mod fp;
pub mod house;
pub mod mpoly;
mod parse;
pub mod primes;
pub mod qpoly;

pub use dense::DenseMatrix;
pub use domain::{Domain, FieldDescriptor, FieldElement, NumberField, Rational, ResidueField};
pub use house::{house, matrix_house, House};
pub use primes::{enumerate_primes, reduce_mod_prime, PrimeIdeal};
pub(crate) use parse::parse_at;
