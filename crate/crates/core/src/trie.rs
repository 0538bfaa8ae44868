//! Trie of known token sequences.
//!
//! Edges are labelled with token ids; a node may carry the symbol whose
//! expansion spells the path leading to it. Walking the pending tokens with a
//! [`Cursor`] tracks the deepest symbol seen, which is the longest known
//! prefix.

use std::collections::HashMap;

use crate::vocab::SymbolId;

/// Token ids are the ids of the terminal symbols representing them.
pub type TokenId = u32;

/// Index of a node inside the trie arena.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct NodeId(u32);

impl NodeId {
    pub const ROOT: NodeId = NodeId(0);
}

#[derive(Debug, Default, Clone)]
struct Node {
    children: HashMap<TokenId, NodeId>,
    symbol: Option<SymbolId>,
}

/// A root cursor is the default.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Cursor {
    pub node: NodeId,
    pub depth: usize,
    /// Deepest symbol-bearing node on the path so far, with its depth.
    pub last_symbol: Option<(SymbolId, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InsertOutcome {
    Inserted,
    /// The path already carried a symbol; the earlier mapping is kept.
    AlreadyPresent,
}

#[derive(Debug, Clone)]
pub struct SequenceTrie {
    nodes: Vec<Node>,
}

impl Default for SequenceTrie {
    fn default() -> Self {
        Self {
            nodes: vec![Node::default()],
        }
    }
}

impl SequenceTrie {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn root(&self) -> Cursor {
        Cursor {
            node: NodeId::ROOT,
            depth: 0,
            last_symbol: None,
        }
    }

    /// Descends one token. `None` means no known sequence extends the path.
    #[inline]
    pub fn step(&self, cursor: Cursor, token: TokenId) -> Option<Cursor> {
        let child = *self.nodes[cursor.node.0 as usize].children.get(&token)?;
        let depth = cursor.depth + 1;
        let last_symbol = match self.nodes[child.0 as usize].symbol {
            Some(s) => Some((s, depth)),
            None => cursor.last_symbol,
        };
        Some(Cursor {
            node: child,
            depth,
            last_symbol,
        })
    }

    pub fn symbol_at(&self, node: NodeId) -> Option<SymbolId> {
        self.nodes[node.0 as usize].symbol
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Inserts `tokens` from the root.
    pub fn insert(&mut self, tokens: &[TokenId], symbol: SymbolId) -> (NodeId, InsertOutcome) {
        assert!(!tokens.is_empty(), "cannot insert an empty sequence");
        self.insert_from(NodeId::ROOT, tokens, symbol)
    }

    /// Inserts `tokens` continuing the path that ends at `start`. The symbol
    /// is attached to the final node unless that node already has one.
    pub fn insert_from(
        &mut self,
        start: NodeId,
        tokens: &[TokenId],
        symbol: SymbolId,
    ) -> (NodeId, InsertOutcome) {
        let mut node = start;
        for &t in tokens {
            node = match self.nodes[node.0 as usize].children.get(&t) {
                Some(&child) => child,
                None => {
                    let child = NodeId(self.nodes.len() as u32);
                    self.nodes.push(Node::default());
                    self.nodes[node.0 as usize].children.insert(t, child);
                    child
                }
            };
        }
        let slot = &mut self.nodes[node.0 as usize].symbol;
        if slot.is_some() {
            (node, InsertOutcome::AlreadyPresent)
        } else {
            *slot = Some(symbol);
            (node, InsertOutcome::Inserted)
        }
    }

    /// Walks `tokens` from the root as far as possible.
    pub fn walk(&self, tokens: impl IntoIterator<Item = TokenId>) -> Cursor {
        let mut cursor = self.root();
        for t in tokens {
            match self.step(cursor, t) {
                Some(c) => cursor = c,
                None => break,
            }
        }
        cursor
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn empty_trie_fails_every_step() {
        let t = SequenceTrie::new();
        assert_eq!(t.root().depth, 0);
        assert_eq!(t.root(), t.root());
        assert!(t.step(t.root(), 0).is_none());
    }

    #[test]
    fn sentence_trie() {
        // the=0 more=1 I=3 know=5 about=7 you=9
        let mut t = SequenceTrie::new();
        let seqs: &[(&[TokenId], u32)] = &[
            (&[0], 0),
            (&[1], 1),
            (&[0, 1], 2),
            (&[3], 3),
            (&[1, 3], 4),
            (&[5], 5),
            (&[3, 5], 6),
            (&[7], 7),
            (&[5, 7], 8),
            (&[9], 9),
            (&[7, 9], 10),
        ];
        for &(s, id) in seqs {
            assert_eq!(t.insert(s, SymbolId(id)).1, InsertOutcome::Inserted);
        }
        let c = t.step(t.root(), 0).unwrap();
        assert_eq!(c.last_symbol, Some((SymbolId(0), 1)));
        let c = t.step(c, 1).unwrap();
        assert_eq!(c.last_symbol, Some((SymbolId(2), 2)));
        assert!(t.step(c, 3).is_none());
    }

    #[test]
    fn three_token_sequence() {
        let mut t = SequenceTrie::new();
        t.insert(&[4, 5, 6], SymbolId(9));
        let c = t.walk([4, 5, 6]);
        assert_eq!(c.depth, 3);
        assert_eq!(c.last_symbol, Some((SymbolId(9), 3)));
        let partial = t.walk([4, 5]);
        assert_eq!(partial.last_symbol, None);
    }

    #[test]
    fn first_insert_wins() {
        let mut t = SequenceTrie::new();
        assert_eq!(t.insert(&[1, 2], SymbolId(0)).1, InsertOutcome::Inserted);
        assert_eq!(
            t.insert(&[1, 2], SymbolId(5)).1,
            InsertOutcome::AlreadyPresent
        );
        assert_eq!(t.walk([1, 2]).last_symbol, Some((SymbolId(0), 2)));
    }

    #[test]
    fn random_sequences_against_brute_force() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut t = SequenceTrie::new();
        let mut inserted: Vec<(Vec<TokenId>, SymbolId)> = Vec::new();
        let mut total_len = 0;
        for i in 0..1000u32 {
            let len = rng.random_range(1..6);
            let seq: Vec<TokenId> = (0..len).map(|_| rng.random_range(0..6)).collect();
            total_len += len;
            if t.insert(&seq, SymbolId(i)).1 == InsertOutcome::Inserted {
                inserted.push((seq, SymbolId(i)));
            }
        }
        assert!(t.node_count() <= 1 + total_len);
        for (seq, id) in &inserted {
            let c = t.walk(seq.iter().copied());
            assert_eq!(c.depth, seq.len());
            assert_eq!(t.symbol_at(c.node), Some(*id));
        }
        // longest-prefix against a linear scan
        for _ in 0..500 {
            let probe: Vec<TokenId> = (0..8).map(|_| rng.random_range(0..6)).collect();
            let expected = inserted
                .iter()
                .filter(|(s, _)| probe.starts_with(s))
                .max_by_key(|(s, _)| s.len())
                .map(|(s, id)| (*id, s.len()));
            assert_eq!(t.walk(probe.iter().copied()).last_symbol, expected);
        }
    }
}
