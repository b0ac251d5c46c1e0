//! Exact free-cumulant calculus.
//!
//! Everything except [`analytic`] works over arbitrary-precision rationals,
//! so identities between independently computed quantities are checked by
//! equality rather than tolerance. Batch sums (over index words, tuples and
//! partitions) go through [`exec`], which is data-parallel under the default
//! `parallel` feature and sequential without it.

pub mod analytic;
pub mod error;
pub mod exec;
pub mod free_moments;
pub mod infdiv;
pub mod laws;
pub mod partitions;
pub mod quadratic_forms;
pub mod rational;
pub mod series;

pub use error::{Error, Result};
pub use free_moments::{FreeFamily, PolySpec, Scalar};
pub use laws::LawSpec;
pub use partitions::{BlockSet, NcKind, Partition};
pub use quadratic_forms::{DiagonalMatrix, RationalMatrix};
pub use rational::Rational;
pub use series::{CumulantSeq, MomentSeq};
