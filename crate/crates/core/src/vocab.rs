//! Frequency-sorted vocabulary shared (logically) by sender and receiver.
//!
//! Symbols live in creation order; a permutation keeps them sorted by
//! non-increasing frequency:
//!
//! * `voc[id]` is the rank of symbol `id`,
//! * `pos[rank]` is the symbol at `rank`,
//! * `top[f]` is the first rank holding a symbol of frequency `f`.
//!
//! Promoting a symbol swaps it with the first symbol of its frequency block
//! and moves that block's start one rank to the right, so every update is
//! O(1). Both ends of a stream apply the same sequence of appends and
//! promotions and therefore hold identical permutations.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Creation-order index of a symbol. Stable for the lifetime of a stream.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolId(pub u32);

impl SymbolId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for SymbolId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S{}", self.0)
    }
}

/// The `voc`/`pos`/`top` triple plus frequencies.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Permutation {
    freq: Vec<u64>,
    voc: Vec<u32>,
    pos: Vec<u32>,
    /// Only occupied frequencies have an entry.
    top: HashMap<u64, usize>,
}

impl Permutation {
    pub fn len(&self) -> usize {
        self.freq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freq.is_empty()
    }

    pub fn freq(&self, id: SymbolId) -> u64 {
        self.freq[id.index()]
    }

    pub fn voc(&self) -> &[u32] {
        &self.voc
    }

    pub fn pos(&self) -> &[u32] {
        &self.pos
    }

    pub fn top(&self, freq: u64) -> Option<usize> {
        self.top.get(&freq).copied()
    }

    fn push(&mut self) -> SymbolId {
        let n = self.freq.len();
        assert!(n < u32::MAX as usize, "vocabulary exceeds u32 symbol ids");
        self.freq.push(0);
        self.voc.push(n as u32);
        self.pos.push(n as u32);
        self.top.entry(0).or_insert(n);
        SymbolId(n as u32)
    }

    fn promote(&mut self, id: SymbolId) -> usize {
        let i = id.index();
        let f = self.freq[i];
        let rank = self.voc[i] as usize;
        let first = self.top[&f];
        let other = self.pos[first];
        self.pos[first] = id.0;
        self.pos[rank] = other;
        self.voc[other as usize] = rank as u32;
        self.voc[i] = first as u32;
        self.freq[i] = f + 1;

        let next = first + 1;
        if next < self.pos.len() && self.freq[self.pos[next] as usize] == f {
            self.top.insert(f, next);
        } else {
            self.top.remove(&f);
        }
        self.top.entry(f + 1).or_insert(first);
        first
    }

    /// Checks every structural invariant in O(n). Returns a description of the
    /// first violation.
    pub fn check(&self) -> std::result::Result<(), String> {
        let n = self.freq.len();
        if self.voc.len() != n || self.pos.len() != n {
            return Err("array lengths differ".into());
        }
        for (rank, &id) in self.pos.iter().enumerate() {
            if id as usize >= n || self.voc[id as usize] as usize != rank {
                return Err(format!("pos/voc not inverse at rank {rank}"));
            }
        }
        let mut expected_top = HashMap::new();
        for rank in 0..n {
            let f = self.freq[self.pos[rank] as usize];
            if rank > 0 {
                let prev = self.freq[self.pos[rank - 1] as usize];
                if prev < f {
                    return Err(format!("frequency increases at rank {rank}"));
                }
                if prev == f {
                    continue;
                }
            }
            expected_top.insert(f, rank);
        }
        if expected_top != self.top {
            return Err(format!(
                "top mismatch: have {:?}, expected {:?}",
                self.top, expected_top
            ));
        }
        Ok(())
    }
}

/// Symbol table with per-symbol payload `E` and the rank permutation.
#[derive(Debug, Clone)]
pub struct Vocab<E> {
    entries: Vec<E>,
    perm: Permutation,
}

impl<E> Default for Vocab<E> {
    fn default() -> Self {
        Self {
            entries: Vec::new(),
            perm: Permutation::default(),
        }
    }
}

impl<E> Vocab<E> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a symbol with frequency 0 at the last rank.
    pub fn append(&mut self, entry: E) -> SymbolId {
        self.entries.push(entry);
        self.perm.push()
    }

    /// Increments the frequency of `id` and moves it to the front of its old
    /// frequency block. Returns the new rank.
    pub fn promote(&mut self, id: SymbolId) -> Result<usize> {
        if id.index() >= self.len() {
            return Err(Error::UnknownSymbol(id.index()));
        }
        Ok(self.perm.promote(id))
    }

    pub fn rank_of(&self, id: SymbolId) -> Result<usize> {
        self.perm
            .voc
            .get(id.index())
            .map(|&r| r as usize)
            .ok_or(Error::UnknownSymbol(id.index()))
    }

    pub fn id_at(&self, rank: u64) -> Result<SymbolId> {
        usize::try_from(rank)
            .ok()
            .and_then(|r| self.perm.pos.get(r))
            .map(|&id| SymbolId(id))
            .ok_or(Error::UnknownRank(rank))
    }

    pub fn entry(&self, id: SymbolId) -> Result<&E> {
        self.entries
            .get(id.index())
            .ok_or(Error::UnknownSymbol(id.index()))
    }

    pub fn entries(&self) -> &[E] {
        &self.entries
    }

    pub fn freq(&self, id: SymbolId) -> Result<u64> {
        self.perm
            .freq
            .get(id.index())
            .copied()
            .ok_or(Error::UnknownSymbol(id.index()))
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn permutation(&self) -> &Permutation {
        &self.perm
    }
}
