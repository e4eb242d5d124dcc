//! Gaussian Gabor systems through the Bargmann transform.
//!
//! The crate evaluates the Fock space of entire functions with weight
//! `e^{−π|z|²}`, maps Gabor atoms and Hermite expansions into it, evaluates
//! the Weierstrass σ function of the square lattice `ℤ + iℤ` in log space,
//! builds biorthogonal systems from σ-type generating functions, and checks
//! the resulting series identities and trends numerically.
//!
//! The library is `no_std` with `alloc`; the `std` feature only lifts that
//! restriction.
#![cfg_attr(not(any(feature = "std", test)), no_std)]
extern crate alloc;

pub mod bargmann;
pub mod checks;
pub mod dual;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod series;
pub mod sigma;
pub mod special;
