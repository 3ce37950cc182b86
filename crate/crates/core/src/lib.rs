//! Verification kernel for homogeneous special real and special Kähler
//! geometry.

pub mod cli;
pub mod corpus;
pub mod error;
pub mod fd;
pub mod hypersurface;
pub mod jalgebra;
pub mod linalg;
pub mod poly;
pub mod pv;
pub mod report;
pub mod rng;
pub mod scalar;
pub mod special;
pub mod suites;
pub mod surd;
pub mod tube;

pub use error::{Error, Result};
pub use linalg::Signature;
pub use poly::{parse_poly, BlockStructure, HomoPoly, SymForm};
pub use surd::Surd;
