//! Perverse cohomology of simplicial sets stratified over a poset.

pub mod blowup;
pub mod complex;
pub mod eml;
pub mod error;
pub mod ffs;
pub mod linalg;
pub mod poset;
pub mod sset;
pub mod suite;

pub use error::{Error, Result};
