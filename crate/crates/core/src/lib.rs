//! Exact truncated arithmetic for higher-dimensional local fields.
//!
//! The crate is `no_std` and only needs `alloc`. Fields are described by
//! [`tower::TowerDesc`] values built from a finite field or `Q_p` by stacking
//! Laurent (`K((t))`) and curly (`K{{t}}`) constructors. Elements carry an
//! explicit precision contract and never report digits they do not know.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod adeles;
pub mod chains;
pub mod coeffbase;
pub mod error;
pub mod milnor;
pub mod sample;
pub mod structure;
pub mod tower;

pub use error::{Error, Result};
