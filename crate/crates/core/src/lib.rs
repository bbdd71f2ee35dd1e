//! Function-correcting codes over prime fields.
//!
//! A systematic `(f,t)`-FCC appends `r` parity symbols to a message `u` in
//! F_q^k so that `f(u)` survives up to `t` symbol errors. This crate builds the
//! distance requirement matrices and FCC graphs of a function, searches for
//! optimal parities, and evaluates lower and upper bounds on `r`.

pub mod bitset;
pub mod bounds;
pub mod coset_coding;
pub mod distance;
pub mod encoder;
pub mod error;
pub mod functions;
pub mod gf;
pub mod graph;
pub mod mis;
pub mod spectrum;

pub use error::{Error, Result};
pub use functions::{FunctionSpec, Label};
pub use gf::{FieldVec, Limits, PrimeField};
