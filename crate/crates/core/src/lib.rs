//! Extended higher Herglotz functions, their character analogues, and a
//! numerical verification harness for their functional equations.

pub mod error;
pub mod herglotz;
pub mod lfunctions;
pub mod precision;
pub mod characters;
pub mod quadrature;
pub mod residues;
pub mod specfun;
pub mod verification;

pub use error::{Error, Result};
pub use precision::{make_context, HpComplex, HpReal, PrecisionContext};
