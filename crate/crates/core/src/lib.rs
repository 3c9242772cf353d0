//! Exact construction and certification of the tower of quasi-affine
//! varieties `X_n`, `Y_n` over the quadratic field `Q(L)`, `L^2 = -l1*l2*l3`.

pub mod error;
pub mod field;
pub mod groebner;
pub mod poly;
pub mod rigidity;
pub mod schemes;
pub mod tower;
pub mod verifier;

pub use error::{Error, Result};
