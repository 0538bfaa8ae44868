//! Word-only dynamic ETDC (detdc): every token is a symbol, no phrases.
//! Shares the tokenizer, vocabulary and wire framing with dv2v.

use std::collections::HashMap;
use std::io::BufRead;
use std::ops::Range;

use crate::codec::{Emission, SymbolReceiver, TokenSender};
use crate::error::{Error, Result};
use crate::etdc::{self, encode};
use crate::receiver::ReceiverEntry;
use crate::vocab::{Permutation, SymbolId, Vocab};
use crate::wire::{read_plain, read_varint, Format, WireItem};

#[derive(Debug, Default)]
pub struct BaselineSender {
    vocab: Vocab<Box<[u8]>>,
    token_dict: HashMap<Box<[u8]>, SymbolId>,
}

impl BaselineSender {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vocab(&self) -> &Vocab<Box<[u8]>> {
        &self.vocab
    }
}

impl TokenSender for BaselineSender {
    const FORMAT: Format = Format::Detdc;

    fn push_token_observed<F>(&mut self, token: &[u8], out: &mut Vec<WireItem>, mut observer: F)
    where
        F: FnMut(&Self, &Emission, &WireItem),
    {
        let size_before = self.vocab.size();
        let (symbol, rank, escaped) = match self.token_dict.get(token) {
            Some(&id) => {
                let rank = self.vocab.rank_of(id).expect("live symbol") as u64;
                out.push(WireItem::Codeword(encode(rank)));
                (id, rank, false)
            }
            None => {
                let rank = size_before as u64;
                out.push(WireItem::EscapeThenPlain(encode(rank), token.to_vec()));
                let id = self.vocab.append(token.into());
                self.token_dict.insert(token.into(), id);
                (id, rank, true)
            }
        };
        self.vocab.promote(symbol).expect("live symbol");
        let emission = Emission {
            symbol,
            rank,
            escaped,
            size_before,
            tokens: 1,
            pair: None,
        };
        observer(self, &emission, out.last().expect("just pushed"));
    }

    fn flush_observed<F>(&mut self, _out: &mut Vec<WireItem>, _observer: F)
    where
        F: FnMut(&Self, &Emission, &WireItem),
    {
    }

    fn permutation(&self) -> &Permutation {
        self.vocab.permutation()
    }

    fn symbol_count(&self) -> usize {
        self.vocab.size()
    }

    fn symbol_text(&self, id: SymbolId) -> Result<Vec<u8>> {
        Ok(self.vocab.entry(id)?.to_vec())
    }

    fn terminal_count(&self) -> usize {
        self.vocab.size()
    }
}

#[derive(Debug, Default)]
pub struct BaselineReceiver {
    vocab: Vocab<ReceiverEntry>,
    output: Vec<u8>,
}

impl BaselineReceiver {
    pub fn new() -> Self {
        Self::default()
    }
}

impl SymbolReceiver for BaselineReceiver {
    const FORMAT: Format = Format::Detdc;

    fn feed<R: BufRead + ?Sized>(&mut self, src: &mut R) -> Result<Range<usize>> {
        let rank = etdc::decode(src)?;
        let size = self.vocab.size() as u64;
        let start = self.output.len();
        let id = if rank < size {
            let id = self.vocab.id_at(rank)?;
            let entry = *self.vocab.entry(id)?;
            self.output.extend_from_within(entry.range());
            id
        } else if rank == size {
            let len = read_varint(src)?;
            if len == 0 {
                return Err(Error::corrupt("empty plain token"));
            }
            let len = usize::try_from(len).map_err(|_| Error::corrupt("plain token too long"))?;
            read_plain(src, len, &mut self.output)?;
            self.vocab.append(ReceiverEntry {
                offset: start,
                length: len,
            })
        } else {
            return Err(Error::corrupt(format!(
                "rank {rank} beyond vocabulary of {size} symbols"
            )));
        };
        self.vocab.promote(id)?;
        Ok(start..self.output.len())
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wire::frame;

    #[test]
    fn fresh_token_escapes() {
        let mut s = BaselineSender::new();
        let mut out = Vec::new();
        s.push_token(b"the", &mut out);
        assert_eq!(
            out,
            vec![WireItem::EscapeThenPlain(encode(0), b"the".to_vec())]
        );
    }

    #[test]
    fn repeated_word_sends_its_rank() {
        let mut s = BaselineSender::new();
        let mut out = Vec::new();
        for t in ["the", " ", "the"] {
            s.push_token(t.as_bytes(), &mut out);
        }
        assert_eq!(out.len(), 3);
        assert_eq!(out[1], WireItem::EscapeThenPlain(encode(1), b" ".to_vec()));
        assert_eq!(out[2], WireItem::Codeword(encode(0)));

        let mut r = BaselineReceiver::new();
        let bytes = frame(&out);
        let mut src = &bytes[..];
        while !src.is_empty() {
            r.feed(&mut src).unwrap();
        }
        assert_eq!(r.output(), b"the the");
        assert_eq!(r.permutation(), s.permutation());
    }

    #[test]
    fn rank_past_escape_is_corrupt() {
        let mut r = BaselineReceiver::new();
        assert!(matches!(
            r.feed(&mut &[0x85u8][..]),
            Err(Error::CorruptStream(_))
        ));
    }
}
