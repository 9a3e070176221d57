//! Exact-arithmetic workbench for analog recurrent neural networks.
//!
//! - [`numerics`]: rationals, lazily known reals, activation functions.
//! - [`codec`]: alphabets, string indices, languages as reals, Cantor-4 packing.
//! - [`network`]: networks, synchronous dynamics, the data/validation I/O protocol.
//! - [`compile`]: automata, two-stack machines and oracle reals compiled to networks.
//! - [`degrees`]: degree labels and the classification of networks by weight class.
//! - [`spike`]: spike-timing codes for unit reals.

pub mod cli;
pub mod codec;
pub mod compile;
pub mod degrees;
pub mod format;
pub mod network;
pub mod numerics;
pub mod spike;
