//! Exact minimum-cost equivalence relations and the image-set bounds they
//! imply for planar, C3 and C4 functions.
//!
//! The crate is `no_std` (it only needs `alloc`). Everything here is a pure
//! function of its inputs; file formats, caching and the command line live in
//! the `rhombic` companion crate.
//!
//! Module map:
//!
//! * [`rhombic`]: rhombic floor and exact integer square roots.
//! * [`partition`]: the cost table, greedy descent, witnesses and the
//!   exceptional-size scan.
//! * [`classnum`]: reduced binary quadratic forms, class numbers and the
//!   modified class divisor.
//! * [`diophantine`]: desk-scale searches for the equations the bounds rest on.
//! * [`field`] and [`lab`]: explicit functions on finite groups and fields.
//! * [`radical`] and [`bounds`]: every closed-form bound, evaluated exactly.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod classnum;
pub mod diophantine;
mod error;
pub mod field;
pub mod lab;
pub mod partition;
pub mod radical;
pub mod rhombic;

pub use error::{Error, Result};
pub use partition::{CostTable, RhombicPartition};
