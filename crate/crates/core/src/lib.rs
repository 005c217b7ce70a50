//! Arithmetic of Drinfeld modules over F_q[T]: Wieferich primes, Mersenne
//! polynomials, and the abc-style experiments that connect them.

pub mod drinfeld;
pub mod error;
pub mod factor;
pub mod field;
pub mod harness;
pub mod linalg;
pub mod mersenne;
pub mod poly;
pub mod twisted;
pub mod wieferich;

pub use drinfeld::{hypothesis_h, DrinfeldModule, FittingData};
pub use error::{Error, Result};
pub use factor::{factor, is_irreducible, radical, Factorization, Sampling};
pub use field::{FqElem, FqField};
pub use poly::Poly;
pub use twisted::TwistedPoly;
