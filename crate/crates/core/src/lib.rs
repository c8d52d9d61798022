pub mod cli;
pub mod error;
pub mod lcfun;
pub mod norms;
pub mod numeric;
pub mod operators;
pub mod ultrametric;
pub mod verify;

pub use error::{Error, Result};
pub use numeric::{Precision, Rational, RealBound, Tri};
