//! Lambda-C and lambda-mu calculi with second-order type derivations.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod derivation;
pub mod formula;
pub mod machines;
pub mod reduce;
pub mod storage;
pub mod term;
pub mod translate;

pub use term::syntax::{parse_mu_term, parse_term, ParseError};
pub use term::{church, MuName, MuTerm, Substitution, Term};
