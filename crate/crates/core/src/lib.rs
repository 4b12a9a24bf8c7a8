pub mod chow;
pub mod corpus;
pub mod cosheaf;
pub mod duality;
pub mod error;
pub mod fan;
pub mod gf2;
pub mod hodge;
pub mod hull;
pub mod io;
pub mod koszul;
pub mod lattice;
pub mod polytope;
pub mod report;

pub use error::{Error, ErrorKind, Result};
