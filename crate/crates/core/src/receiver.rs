//! One-pass dv2v decompressor.
//!
//! Symbols are stored as `(offset, length)` references into the text decoded
//! so far. A pair created after an emission starts where the previous
//! emission started and covers both emissions, which lie back to back in the
//! output, so the reference is always valid.

use std::io::BufRead;
use std::ops::Range;

use crate::codec::SymbolReceiver;
use crate::error::{Error, Result};
use crate::etdc;
use crate::vocab::{Permutation, SymbolId, Vocab};
use crate::wire::{read_plain, read_varint, Format};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReceiverEntry {
    pub offset: usize,
    pub length: usize,
}

impl ReceiverEntry {
    pub fn range(&self) -> Range<usize> {
        self.offset..self.offset + self.length
    }
}

#[derive(Debug, Default)]
pub struct Receiver {
    vocab: Vocab<ReceiverEntry>,
    output: Vec<u8>,
    /// Where the previous symbol was written in `output`.
    prev_emit: Option<ReceiverEntry>,
}

impl Receiver {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vocab(&self) -> &Vocab<ReceiverEntry> {
        &self.vocab
    }

    pub fn into_output(self) -> Vec<u8> {
        self.output
    }

    fn after_emit(&mut self, emitted: ReceiverEntry) {
        if let Some(prev) = self.prev_emit {
            debug_assert_eq!(prev.offset + prev.length, emitted.offset);
            self.vocab.append(ReceiverEntry {
                offset: prev.offset,
                length: prev.length + emitted.length,
            });
        }
        self.prev_emit = Some(emitted);
    }
}

impl SymbolReceiver for Receiver {
    const FORMAT: Format = Format::Dv2v;

    fn feed<R: BufRead + ?Sized>(&mut self, src: &mut R) -> Result<Range<usize>> {
        let rank = etdc::decode(src)?;
        let size = self.vocab.size() as u64;
        let start = self.output.len();
        if rank < size {
            let id = self.vocab.id_at(rank)?;
            let entry = *self.vocab.entry(id)?;
            if entry.offset + entry.length > start {
                return Err(Error::corrupt("back-reference past end of output"));
            }
            self.output.extend_from_within(entry.range());
            self.vocab.promote(id)?;
        } else if rank == size {
            let len = read_varint(src)?;
            if len == 0 {
                return Err(Error::corrupt("empty plain token"));
            }
            let len = usize::try_from(len).map_err(|_| Error::corrupt("plain token too long"))?;
            read_plain(src, len, &mut self.output)?;
            let id = self.vocab.append(ReceiverEntry {
                offset: start,
                length: len,
            });
            self.vocab.promote(id)?;
        } else {
            return Err(Error::corrupt(format!(
                "rank {rank} beyond vocabulary of {size} symbols"
            )));
        }
        let end = self.output.len();
        self.after_emit(ReceiverEntry {
            offset: start,
            length: end - start,
        });
        Ok(start..end)
    }

    fn output(&self) -> &[u8] {
        &self.output
    }

    fn permutation(&self) -> &Permutation {
        self.vocab.permutation()
    }

    fn symbol_count(&self) -> usize {
        self.vocab.size()
    }

    fn symbol_text(&self, id: SymbolId) -> Result<&[u8]> {
        let e = self.vocab.entry(id)?;
        Ok(&self.output[e.range()])
    }
}
