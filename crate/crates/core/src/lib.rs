pub mod automorphisms;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod presentations;
pub mod rational;
pub mod report;
pub mod rewriting;
pub mod root_system;
pub mod suite;
pub mod weyl;
pub mod word;

pub use error::{Error, Result};
