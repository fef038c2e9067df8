//! Decompositions of square matrices over finite fields into sums and
//! differences of idempotents.

pub mod canon;
pub mod cli;
pub mod error;
pub mod factor;
pub mod field;
pub mod json;
pub mod matrix;
pub mod oracle;
pub mod pipelines;
pub mod poly;
pub mod two_idem;

pub use error::{Error, Result};
pub use field::{Elem, Field};
pub use matrix::Mat;
pub use poly::Poly;
