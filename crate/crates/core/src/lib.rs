//! Exact arithmetic for degree 4 del Pezzo surfaces given as pencils of
//! quadrics in P^4 over function fields `Q(i)(a, b, c, ...)`.
//!
//! The crate is `no_std` (with `alloc`); the `std` feature only adds
//! `std::error::Error` impls.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod error;
pub mod field;

pub use error::{Error, Result};
pub mod f2;
pub mod squares;
pub mod pencil;
pub mod intmat;
pub mod picard;
pub mod cohomology;
pub mod symbols;
