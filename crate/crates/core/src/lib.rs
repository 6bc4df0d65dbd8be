//! Asymptotic correlations of time-evolved observables.
//!
//! Words over copy-indexed letters ([`word`]) are evaluated three ways:
//! in closed form under tensor, free and koopman independence ([`laws`]),
//! by time-averaging concrete dynamics ([`cesaro`] over the bit-stream
//! [`shift`] or the doubling map in [`koopman`]), and through an independent
//! Pauli-string representation ([`pauli`]). [`fluctuations`] turns word
//! expectations into moments of normalized sums.

pub mod bitstream;
pub mod cesaro;
pub mod cli;
pub mod error;
pub mod fluctuations;
pub mod koopman;
pub mod laws;
pub mod parse;
pub mod partitions;
pub mod pauli;
pub mod scalar;
pub mod shift;
pub mod state;
pub mod symbolic;
pub mod word;

pub use bitstream::BitStream;
pub use error::{Error, Result};
pub use laws::Law;
pub use shift::TimedWord;
pub use state::{MarginalState, MomentOracle, SymbolicState};
pub use symbolic::Expr;
pub use word::{Letter, ObservableSymbol, Polynomial, Word};
