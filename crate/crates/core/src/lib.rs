//! Aperiodic infinite words and the pseudorandom generators they steer.
//!
//! Words come from morphic fixed points ([`morphic`]), rotation codings
//! ([`rotation`]) and iterated palindromic closure ([`arnoux_rauzy`]). The
//! [`welldoc`] module checks how occurrences of factors distribute modulo `m`,
//! and [`prng`] combines linear congruential generators along a steering word
//! and looks for lattice structure in the result.

pub mod arnoux_rauzy;
pub mod error;
pub mod exec;
pub mod morphic;
pub mod prng;
pub mod rotation;
pub mod spec;
pub mod stream;
pub mod welldoc;
pub mod words;

pub use error::{Error, Result};
pub use exec::Execution;
pub use stream::{RandomAccess, WordStream};
pub use words::{Letter, ParikhVector, PrefixBuffer, Word};
