//! Constructive compilers into networks: finite automata (integer weights),
//! two-stack machines (rational weights) and oracle reals (one lazy weight).

mod compose;
mod dfa;
mod oracle;
mod two_stack;

pub use compose::{compose_nets, relay_net, Line};
pub use dfa::{dfa_to_net, Dfa};
pub use oracle::{composed_oracle_net, extractor_net, index_net, oracle_net, OracleNet, OracleNetSpec};
pub use two_stack::{two_stack_ticks, two_stack_to_net, MachineOutcome, MachineRun, Pop, Push, Read, Rule, TwoStackMachine};

use crate::codec::CodecError;
use crate::network::NetworkError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CompileError {
    #[error("construction error: {0}")]
    Construction(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("horizon exceeded: index {index} is past the table horizon {horizon}")]
    HorizonExceeded { index: u64, horizon: u64 },
    #[error("network did not answer within its budget")]
    Timeout,
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Codec(#[from] CodecError),
}
