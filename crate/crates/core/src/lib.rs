//! Exact counting of quiver representations over finite fields: Kac
//! polynomials by two independent methods, Kac-Moody root multiplicities,
//! and the Harder-Narasimhan bookkeeping linking them.

pub mod error;
pub mod ffield;
pub mod hn;
pub mod kacmoody;
pub mod moment;
pub mod poly;
pub mod quiver;
pub mod rep;

pub use error::{Error, Result};
