//! Kronecker quiver representations (matrix pencils) over exact arithmetic.
//!
//! The crate builds canonical pencils from Kronecker invariants, extracts
//! invariants from arbitrary rational pencils, solves homomorphism spaces,
//! evaluates closed-form generic ranks of structured homomorphisms, and
//! decides whether one representation embeds in (or is a quotient of)
//! another.

pub mod criteria;
pub mod error;
pub mod extract;
pub mod hom;
pub mod invariants;
pub mod linalg;
pub mod pencil;
pub mod rank;
pub mod verify;

pub use error::{Error, Result};
