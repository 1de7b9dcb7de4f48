//! Exact weights of rotation-symmetric and trace Boolean function families.
//!
//! Three independent weight-counting routes are provided: truth-table
//! enumeration, periodic-point counts of a finite-type shift, and point
//! counts of Artin-Schreier curves over binary fields. The quadratic and
//! curve modules tie these together through characteristic values.

pub mod algebra;
pub mod error;
pub mod field;
pub mod gf2poly;
pub mod matrix;
pub mod quadratic;
pub mod report;
pub mod rs;
pub mod sft;
pub mod tuples;
pub mod verify;
pub mod weights;
pub mod weil;

pub use error::{Error, Result};
