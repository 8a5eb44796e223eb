//! Desk-scale laboratory for zero-error and Holevo capacities of quantum
//! channels.
//!
//! * [`linalg`]: dense complex matrices, states, entropies.
//! * [`channels`]: channel representations and the named constructions.
//! * [`zero_error`]: confusability graphs, independence numbers, the quantum
//!   independence number and clique scores.
//! * [`capacity`]: minimum output entropy, Holevo capacity, the covariant
//!   lift and Arimoto-Blahut.
//! * [`reductions`]: hardness reductions with exact source oracles and a
//!   gap-verification harness.
//! * [`doc`] and [`cli`]: JSON documents and the command-line surface.

pub mod capacity;
pub mod channels;
pub mod cli;
pub mod doc;
pub mod error;
pub mod linalg;
pub mod reductions;
pub mod seed;
pub mod zero_error;

pub use error::{Error, Result};
