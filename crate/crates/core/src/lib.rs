//! Frobenius module lengths of local cohomology via a Cartier operator on
//! graded Ext, over finite fields.

pub mod cache;
pub mod error;
pub mod ffield;
pub mod frobcartier;
pub mod groebner;
pub mod homalg;
pub mod linalg;
pub mod pipeline;
pub mod polyring;
pub mod semilinear;

pub use error::{Error, Result};
pub use pipeline::{length_report, LengthReport, ProblemSpec};
