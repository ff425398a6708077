//! Finite combinatorial models of amalgamation categories and their
//! associated categories of finite sequences.

pub mod amalgam;
pub mod bcat;
pub mod classkit;
pub mod error;
pub mod gsets;
pub mod permlab;
pub mod relstruct;
pub mod witnesses;

pub use error::{Error, Result};
