//! Dynamic word-based variable-to-variable compression.
//!
//! Text is split into word and separator tokens. The sender keeps a
//! frequency-sorted vocabulary of symbols: terminals (one token) and pairs of
//! earlier symbols, created from consecutive emissions so that repeated
//! phrases collapse into single codewords. Symbols are sent as End-Tagged
//! Dense Code codewords of their current rank; the receiver replays the same
//! vocabulary updates and needs no side information.
//!
//! ```
//! use dv2v::{compress, decompress, Format};
//!
//! let text = b"the more I know about you, the more I know about me";
//! let packed = compress(text, Format::Dv2v);
//! assert_eq!(decompress(&packed).unwrap(), text);
//! ```

pub mod baseline;
pub mod cli;
pub mod codec;
pub mod corpus;
pub mod error;
pub mod etdc;
pub mod lockstep;
pub mod receiver;
pub mod sender;
pub mod tokenizer;
pub mod trie;
pub mod vocab;
pub mod wire;

pub use codec::{compress, compress_stream, decompress, decompress_stream, stats, Stats};
pub use error::{Error, Result};
pub use wire::Format;
