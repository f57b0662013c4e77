//! Order-4 magic squares, additive and multiplicative.
//!
//! The crate enumerates every normal additive magic square of order 4,
//! relates them to normal multiplicative squares through the prime-divisibility
//! map, and decomposes the compatible ones into bit-plane forms labelled by
//! their dihedral orbits.
//!
//! The grid type [`Square`] is generic over its scalar; the aliases below fix
//! the scalars used throughout the crate.

pub mod correspond;
pub mod enumerate;
pub mod error;
pub mod forms;
pub mod groups;
pub mod square;

pub use correspond::{MultReport, MultSquare, PrimeBasis};
pub use enumerate::EnumerationResult;
pub use error::{Error, Result};
pub use forms::{ClassLabel, Decomposition, Form, OrbitLabel, OrbitLetter};
pub use groups::{BitPermutation, D8Element};
pub use square::{Line, MagicReport, Square, ORDER};

/// Additive-side square. Normal squares hold exactly the values `0..16`.
pub type AdditiveSquare = Square<u32>;

/// Grid of 4-bit prime-subset masks; bit weight 8 is the smallest prime.
pub type MaskSquare = Square<u8>;

/// Grid of multiplicative entry values (squarefree divisors of `k`).
pub type ValueSquare = Square<u64>;

/// Exact width used for line products and the multiplicative constant `k²`.
pub type Wide = u128;
