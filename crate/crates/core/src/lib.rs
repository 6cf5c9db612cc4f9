//! Combinatorics of Springer fibers for minimal and minimal special nilpotent
//! orbits: root systems, Weyl groups, Bruhat order, Kazhdan-Lusztig
//! polynomials, cell enumeration and intersection graphs of components.

pub mod budget;
pub mod error;
pub mod f4appendix;
pub mod gamma;
pub mod klpoly;
pub mod rootsys;
pub mod springer;
pub mod weyl;

pub use budget::Budget;
pub use error::{Error, Result};
pub use klpoly::IntPolynomial;
pub use rootsys::{Family, Root, RootLength, RootSystem, SimpleType};
pub use weyl::{Side, WeylElement, WeylGroup, Word};

/// Largest rank an element can carry; element coordinates live in a fixed array.
pub const MAX_RANK: usize = 16;
