//! One-pass dv2v compressor.
//!
//! Tokens are buffered while they still spell a prefix of some known
//! sequence. Once the buffer can no longer be extended, the longest known
//! prefix is sent as a single codeword and the remaining tokens are matched
//! again from the root. A token never seen before is sent as the escape
//! codeword (the current vocabulary size) followed by its bytes.
//!
//! After every emitted symbol `s`, a pair symbol `prev || s` is created with
//! frequency 0, so a phrase becomes matchable from its second occurrence on.
//!
//! Per emission the order is fixed, and the receiver mirrors it:
//! known symbol: codeword(pre-promotion rank), promote, create pair;
//! new token: escape codeword, plain bytes, append terminal, promote, create
//! pair.

use std::collections::{HashMap, VecDeque};

use crate::codec::{Emission, TokenSender};
use crate::error::{Error, Result};
use crate::etdc::encode;
use crate::trie::{Cursor, InsertOutcome, NodeId, SequenceTrie, TokenId};
use crate::vocab::{Permutation, SymbolId, Vocab};
use crate::wire::{Format, WireItem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SenderEntry {
    Terminal(Box<[u8]>),
    Pair(SymbolId, SymbolId),
}

impl SenderEntry {
    pub fn is_terminal(&self) -> bool {
        matches!(self, SenderEntry::Terminal(_))
    }
}

#[derive(Debug, Default)]
pub struct Sender {
    vocab: Vocab<SenderEntry>,
    trie: SequenceTrie,
    /// Token bytes to the terminal symbol spelling them. The terminal's id
    /// doubles as the token id used to label trie edges.
    token_dict: HashMap<Box<[u8]>, SymbolId>,
    /// Trie node spelling each symbol's expansion, indexed by symbol id.
    nodes: Vec<NodeId>,
    terminals: usize,
    prev: Option<SymbolId>,
    /// Known tokens read but not yet sent.
    pending: VecDeque<TokenId>,
    /// A never-seen token that ended the pending run.
    pending_new: Option<Vec<u8>>,
    /// Trie walk over `pending`, stopped at the first failing token.
    cursor: Cursor,
    scratch: Vec<TokenId>,
}

impl Sender {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vocab(&self) -> &Vocab<SenderEntry> {
        &self.vocab
    }

    pub fn trie(&self) -> &SequenceTrie {
        &self.trie
    }

    pub fn token_id(&self, token: &[u8]) -> Option<TokenId> {
        self.token_dict.get(token).map(|s| s.0)
    }

    pub fn token_bytes(&self, token: TokenId) -> Result<&[u8]> {
        match self.vocab.entry(SymbolId(token))? {
            SenderEntry::Terminal(bytes) => Ok(bytes),
            SenderEntry::Pair(..) => Err(Error::UnknownSymbol(token as usize)),
        }
    }

    /// Number of tokens buffered and not yet sent.
    pub fn pending_len(&self) -> usize {
        self.pending.len() + usize::from(self.pending_new.is_some())
    }

    /// Token sequence spelled by a symbol.
    pub fn expand(&self, id: SymbolId) -> Result<Vec<TokenId>> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(s) = stack.pop() {
            match self.vocab.entry(s)? {
                SenderEntry::Terminal(_) => out.push(s.0),
                SenderEntry::Pair(l, r) => {
                    stack.push(*r);
                    stack.push(*l);
                }
            }
        }
        Ok(out)
    }

    pub fn expand_bytes(&self, id: SymbolId) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        for t in self.expand(id)? {
            out.extend_from_slice(self.token_bytes(t)?);
        }
        Ok(out)
    }

    fn drain<F>(&mut self, flush: bool, out: &mut Vec<WireItem>, observer: &mut F)
    where
        F: FnMut(&Self, &Emission, &WireItem),
    {
        loop {
            if self.pending.is_empty() {
                if let Some(bytes) = self.pending_new.take() {
                    self.send_new(bytes, out, observer);
                    self.cursor = self.trie.root();
                }
                return;
            }
            let complete = self.cursor.depth == self.pending.len();
            if complete && self.pending_new.is_none() && !flush {
                return;
            }
            // A known token always matches its own terminal, so the walk has
            // seen at least one symbol.
            let (symbol, depth) = self
                .cursor
                .last_symbol
                .expect("pending starts with a known token");
            self.send_known(symbol, depth, out, observer);
            self.cursor = self.trie.walk(self.pending.iter().copied());
        }
    }

    fn send_known<F>(
        &mut self,
        symbol: SymbolId,
        depth: usize,
        out: &mut Vec<WireItem>,
        observer: &mut F,
    ) where
        F: FnMut(&Self, &Emission, &WireItem),
    {
        let size_before = self.vocab.size();
        let rank = self.vocab.rank_of(symbol).expect("live symbol") as u64;
        out.push(WireItem::Codeword(encode(rank)));
        self.vocab.promote(symbol).expect("live symbol");

        let mut consumed = std::mem::take(&mut self.scratch);
        consumed.clear();
        consumed.extend(self.pending.drain(..depth));
        let pair = self.prev.map(|p| self.create_pair(p, symbol, &consumed));
        self.scratch = consumed;
        self.prev = Some(symbol);

        let emission = Emission {
            symbol,
            rank,
            escaped: false,
            size_before,
            tokens: depth,
            pair,
        };
        observer(self, &emission, out.last().expect("just pushed"));
    }

    fn send_new<F>(&mut self, bytes: Vec<u8>, out: &mut Vec<WireItem>, observer: &mut F)
    where
        F: FnMut(&Self, &Emission, &WireItem),
    {
        let size_before = self.vocab.size();
        let rank = size_before as u64;
        let key: Box<[u8]> = bytes.as_slice().into();
        out.push(WireItem::EscapeThenPlain(encode(rank), bytes));

        let id = self.vocab.append(SenderEntry::Terminal(key.clone()));
        self.vocab.promote(id).expect("live symbol");
        self.token_dict.insert(key, id);
        self.terminals += 1;
        let (node, _) = self.trie.insert(&[id.0], id);
        self.nodes.push(node);

        let pair = self.prev.map(|p| self.create_pair(p, id, &[id.0]));
        self.prev = Some(id);

        let emission = Emission {
            symbol: id,
            rank,
            escaped: true,
            size_before,
            tokens: 1,
            pair,
        };
        observer(self, &emission, out.last().expect("just pushed"));
    }

    /// Appends `left || right`; `right_tokens` is the expansion of `right`.
    fn create_pair(
        &mut self,
        left: SymbolId,
        right: SymbolId,
        right_tokens: &[TokenId],
    ) -> (SymbolId, InsertOutcome) {
        let id = self.vocab.append(SenderEntry::Pair(left, right));
        let (node, outcome) = self
            .trie
            .insert_from(self.nodes[left.index()], right_tokens, id);
        self.nodes.push(node);
        (id, outcome)
    }
}

impl TokenSender for Sender {
    const FORMAT: Format = Format::Dv2v;

    fn push_token_observed<F>(&mut self, token: &[u8], out: &mut Vec<WireItem>, mut observer: F)
    where
        F: FnMut(&Self, &Emission, &WireItem),
    {
        debug_assert!(!token.is_empty());
        match self.token_dict.get(token) {
            Some(&id) => {
                self.pending.push_back(id.0);
                if self.cursor.depth + 1 == self.pending.len() {
                    if let Some(next) = self.trie.step(self.cursor, id.0) {
                        self.cursor = next;
                        return;
                    }
                }
                self.drain(false, out, &mut observer);
            }
            None => {
                self.pending_new = Some(token.to_vec());
                self.drain(false, out, &mut observer);
            }
        }
    }

    fn flush_observed<F>(&mut self, out: &mut Vec<WireItem>, mut observer: F)
    where
        F: FnMut(&Self, &Emission, &WireItem),
    {
        self.drain(true, out, &mut observer);
    }

    fn permutation(&self) -> &Permutation {
        self.vocab.permutation()
    }

    fn symbol_count(&self) -> usize {
        self.vocab.size()
    }

    fn symbol_text(&self, id: SymbolId) -> Result<Vec<u8>> {
        self.expand_bytes(id)
    }

    fn terminal_count(&self) -> usize {
        self.terminals
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::etdc::decode_slice;

    const SENTENCE: [&str; 12] = [
        "the", "more", "I", "know", "about", "you", "the", "more", "I", "know", "about", "me",
    ];

    fn expansion(s: &Sender, id: u32) -> Vec<&str> {
        s.expand(SymbolId(id))
            .unwrap()
            .into_iter()
            .map(|t| std::str::from_utf8(s.token_bytes(t).unwrap()).unwrap())
            .collect()
    }

    #[test]
    fn first_token_is_escaped() {
        let mut s = Sender::new();
        let mut out = Vec::new();
        s.push_token(b"the", &mut out);
        assert_eq!(
            out,
            vec![WireItem::EscapeThenPlain(encode(0), b"the".to_vec())]
        );
        assert_eq!(s.symbol_count(), 1);
        assert_eq!(expansion(&s, 0), ["the"]);
    }

    #[test]
    fn word_trace_builds_known_sequences() {
        let mut s = Sender::new();
        let mut out = Vec::new();
        for w in &SENTENCE[..6] {
            s.push_token(w.as_bytes(), &mut out);
        }
        assert_eq!(out.len(), 6);
        assert!(out.iter().all(|i| i.plain().is_some()));
        assert_eq!(s.symbol_count(), 11);
        let expected: [&[&str]; 11] = [
            &["the"],
            &["more"],
            &["the", "more"],
            &["I"],
            &["more", "I"],
            &["know"],
            &["I", "know"],
            &["about"],
            &["know", "about"],
            &["you"],
            &["about", "you"],
        ];
        for (id, exp) in expected.iter().enumerate() {
            assert_eq!(expansion(&s, id as u32), *exp, "S{id}");
        }

        // "the", "more" are buffered; "I" makes the run unknown and S2 goes out
        out.clear();
        s.push_token(b"the", &mut out);
        s.push_token(b"more", &mut out);
        assert!(out.is_empty());
        assert_eq!(s.pending_len(), 2);
        s.push_token(b"I", &mut out);
        assert_eq!(out.len(), 1);
        // S2 sits at rank 9 before promotion
        assert_eq!(decode_slice(out[0].codeword().as_bytes()).unwrap().0, 9);
        assert_eq!(s.vocab().rank_of(SymbolId(2)).unwrap(), 6);
        assert_eq!(expansion(&s, 11), ["you", "the", "more"]);
        assert_eq!(
            s.vocab().entry(SymbolId(11)).unwrap(),
            &SenderEntry::Pair(SymbolId(9), SymbolId(2))
        );
    }

    #[test]
    fn flush_drains_pending() {
        let mut s = Sender::new();
        let mut out = Vec::new();
        s.flush(&mut out);
        assert!(out.is_empty());
        s.push_token(b"a", &mut out);
        out.clear();
        s.push_token(b"a", &mut out);
        assert!(out.is_empty());
        s.flush(&mut out);
        assert_eq!(out, vec![WireItem::Codeword(encode(0))]);
        assert_eq!(s.pending_len(), 0);
        // the model survives a flush
        s.push_token(b"b", &mut out);
        assert_eq!(out.len(), 2);
    }

    #[test]
    fn deep_chain_expands() {
        let mut s = Sender::new();
        let mut out = Vec::new();
        s.push_token(b"x", &mut out);
        let x = SymbolId(0);
        let mut top = x;
        for _ in 0..20 {
            top = s.vocab.append(SenderEntry::Pair(top, x));
        }
        assert_eq!(s.expand(top).unwrap().len(), 21);
        assert!(matches!(
            s.expand(SymbolId(99)),
            Err(Error::UnknownSymbol(99))
        ));
    }

    #[test]
    fn escape_rank_is_vocab_size() {
        let mut s = Sender::new();
        let mut emissions = Vec::new();
        let mut out = Vec::new();
        for w in ["a", " ", "b", " ", "a", " ", "c"] {
            s.push_token_observed(w.as_bytes(), &mut out, |_, e, _| emissions.push(e.clone()));
        }
        s.flush_observed(&mut out, |_, e, _| emissions.push(e.clone()));
        for e in emissions.iter().filter(|e| e.escaped) {
            assert_eq!(e.rank, e.size_before as u64);
        }
        let covered: usize = emissions.iter().map(|e| e.tokens).sum();
        assert_eq!(covered, 7);
    }
}
