//! Maxflow-based error-exponent bounds for low-rate communication over
//! directed graphs of discrete memoryless channels.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only pure
//! computation:
//!
//! * [`channel`] and [`divergence`]: finite channels and the Bhattacharyya /
//!   Chernoff divergence calculus on them.
//! * [`exponent`]: one-hop error exponents, the permutation codebook and a few
//!   closed forms.
//! * [`netflow`] and [`graph`]: exponent-weighted networks, maxflow, mincuts,
//!   flow decomposition and edge splitting.
//! * [`protocol`]: the block-forwarding relay protocol, exact small-instance
//!   oracles and destination decoders.
//! * [`analysis`]: bound reports, the three-message counterexample, and the
//!   statistics used to fit exponents from simulated error rates.
//!
//! File formats, the parallel Monte Carlo driver and the command-line tool
//! live in the companion `netexp` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analysis;
pub mod channel;
pub mod divergence;
pub mod error;
pub mod exponent;
pub mod graph;
pub mod math;
pub mod netflow;
pub mod protocol;
pub mod rng;

pub use channel::Dmc;
pub use divergence::DivergenceResult;
pub use error::{Error, Result};
pub use graph::{ChannelGraph, Weights};
pub use netflow::{Cut, Flow, Network, PathDecomposition};
