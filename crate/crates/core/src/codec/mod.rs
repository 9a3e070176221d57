//! Strings ↔ indices ↔ unit reals.

mod alphabet;
mod cantor;
mod index;
mod language;
mod oracle;

pub use alphabet::Alphabet;
pub use cantor::{cantor_decode, cantor_decode_step, cantor_encode, is_cantor4, pack, unpack_step};
pub use index::{index_of_string, string_of_index};
pub use language::{characteristic_bits, decode_membership, encode_language, Backing, Language, Rule};
pub use oracle::OracleTable;

use crate::numerics::NumericError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodecError {
    #[error("symbol `{symbol}` is not in alphabet `{alphabet}`")]
    Alphabet { symbol: char, alphabet: String },
    #[error("alphabet must not be empty")]
    EmptyAlphabet,
    #[error("duplicate symbol `{0}` in alphabet")]
    DuplicateSymbol(char),
    #[error("symbol `{0:?}` cannot appear in an alphabet")]
    InvalidSymbol(char),
    #[error("string indices start at 1")]
    IndexZero,
    #[error("string index does not fit in 64 bits")]
    IndexOverflow,
    #[error("membership of `{0}` undecided")]
    MembershipUndecided(String),
    #[error("horizon exceeded: index {index} is past the table horizon {horizon}")]
    HorizonExceeded { index: u64, horizon: u64 },
    #[error("encoding error: {0}")]
    Encoding(String),
    #[error("invalid rule: {0}")]
    Rule(String),
    #[error("malformed oracle table: {0}")]
    TableShape(String),
    #[error(transparent)]
    Numeric(NumericError),
}
