//! Coefficients of the reduced characteristic polynomial of a matroid,
//! computed four independent ways:
//!
//! * Möbius summation over the lattice of flats ([`charpoly`]),
//! * counting initial descending flags of flats ([`charpoly`]),
//! * the fan displacement rule on the permutohedral fan ([`intersect`]),
//! * iterated divisor cup products on the Bergman fan ([`intersect`]).
//!
//! [`validate`] runs all four side by side together with the balancing,
//! truncation, and log-concavity checks, and [`corpus`] holds the built-in
//! test matroids. All arithmetic is exact.

pub mod charpoly;
pub mod corpus;
pub mod error;
pub mod fan;
pub mod intersect;
pub mod linalg;
pub mod matroid;
pub mod poly;
pub mod subset;
pub mod validate;

pub use error::{Error, Result};
pub use matroid::{Flat, Matroid};
pub use poly::IntPolynomial;
pub use subset::SubsetMask;
