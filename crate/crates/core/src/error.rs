use std::io;

use thiserror::Error;

/// Errors raised while decoding streams or addressing the vocabulary.
#[derive(Debug, Error)]
pub enum Error {
    /// The source ended inside a codeword, a length prefix or a plain payload.
    #[error("unexpected end of stream")]
    UnexpectedEof,
    #[error("corrupt stream: {0}")]
    CorruptStream(String),
    #[error("unknown symbol id {0}")]
    UnknownSymbol(usize),
    #[error("unknown rank {0}")]
    UnknownRank(u64),
    #[error("bad stream header: {0}")]
    BadHeader(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn corrupt(msg: impl Into<String>) -> Self {
        Error::CorruptStream(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
