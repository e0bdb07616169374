//! Quantum Fisher information and Cramér–Rao bounds for superpositions of
//! two SU(2) spin coherent states ("spin cat states").
//!
//! The numeric engine in [`qfi_engine`] is the ground truth. The closed forms
//! in [`analytic`] are evaluated independently and checked against it.

pub mod error;
pub mod par;
pub mod spin_algebra;
pub mod coherent_states;
pub mod qfi_engine;
pub mod analytic;
pub mod estimation;
pub mod sweep;

pub use error::{Error, Result};
