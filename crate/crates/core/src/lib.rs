#![cfg_attr(not(test), no_std)]
extern crate alloc;

pub mod enumerative;
pub mod error;
pub mod fock;
pub mod forms;
pub mod igusa;
pub mod jacobi;
pub mod kfrac;
pub mod laurent;
pub mod scalar;
pub mod series;

pub use error::{Error, Result};
