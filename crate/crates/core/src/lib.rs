pub mod classes;
pub mod cli;
pub mod construct;
pub mod document;
pub mod error;
pub mod fan;
pub mod polyhedra;
pub mod ratlinalg;
pub mod theorem;

pub use error::{Error, Result};
