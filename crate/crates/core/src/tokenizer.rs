//! Splits bytes into alternating runs of word and separator bytes.
//!
//! Word bytes are ASCII letters, ASCII digits, `_` and every byte `>= 0x80`,
//! so multi-byte UTF-8 sequences always stay inside a word. Everything else is
//! a separator. Concatenating the tokens gives back the input exactly.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenClass {
    Word,
    Separator,
}

impl TokenClass {
    #[inline]
    pub fn of(byte: u8) -> TokenClass {
        if byte.is_ascii_alphanumeric() || byte == b'_' || byte >= 0x80 {
            TokenClass::Word
        } else {
            TokenClass::Separator
        }
    }
}

/// A maximal run of bytes of one class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Token<'a> {
    pub bytes: &'a [u8],
    pub class: TokenClass,
}

impl<'a> Token<'a> {
    pub fn as_bytes(&self) -> &'a [u8] {
        self.bytes
    }
}

/// Iterator over the tokens of a byte slice.
#[derive(Debug, Clone)]
pub struct Tokens<'a> {
    rest: &'a [u8],
}

impl<'a> Iterator for Tokens<'a> {
    type Item = Token<'a>;

    fn next(&mut self) -> Option<Token<'a>> {
        let first = *self.rest.first()?;
        let class = TokenClass::of(first);
        let len = self
            .rest
            .iter()
            .position(|&b| TokenClass::of(b) != class)
            .unwrap_or(self.rest.len());
        let (bytes, rest) = self.rest.split_at(len);
        self.rest = rest;
        Some(Token { bytes, class })
    }
}

pub fn tokens(input: &[u8]) -> Tokens<'_> {
    Tokens { rest: input }
}

pub fn tokenize(input: &[u8]) -> Vec<Token<'_>> {
    tokens(input).collect()
}

pub fn detokenize<'a, I>(tokens: I) -> Vec<u8>
where
    I: IntoIterator<Item = &'a Token<'a>>,
{
    let mut out = Vec::new();
    for t in tokens {
        out.extend_from_slice(t.bytes);
    }
    out
}

/// Incremental tokenizer for chunked input.
///
/// A run is only complete once a byte of the other class (or the end of
/// input) has been seen, so the trailing run of every chunk is held back.
#[derive(Debug, Default)]
pub struct StreamTokenizer {
    partial: Vec<u8>,
}

impl StreamTokenizer {
    pub fn new() -> Self {
        Self::default()
    }

    /// Feeds a chunk and calls `emit` for every token completed by it.
    pub fn feed(&mut self, chunk: &[u8], mut emit: impl FnMut(&[u8])) {
        if chunk.is_empty() {
            return;
        }
        let mut rest = chunk;
        if let Some(&last) = self.partial.last() {
            let class = TokenClass::of(last);
            let len = rest
                .iter()
                .position(|&b| TokenClass::of(b) != class)
                .unwrap_or(rest.len());
            self.partial.extend_from_slice(&rest[..len]);
            rest = &rest[len..];
            if rest.is_empty() {
                return;
            }
            emit(&self.partial);
            self.partial.clear();
        }
        let mut iter = tokens(rest).peekable();
        while let Some(tok) = iter.next() {
            if iter.peek().is_some() {
                emit(tok.bytes);
            } else {
                self.partial.extend_from_slice(tok.bytes);
            }
        }
    }

    /// Flushes the held-back run, if any.
    pub fn finish(&mut self, mut emit: impl FnMut(&[u8])) {
        if !self.partial.is_empty() {
            emit(&self.partial);
            self.partial.clear();
        }
    }
}
