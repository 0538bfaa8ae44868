//! Traits shared by the dv2v and detdc implementations, plus whole-buffer and
//! streaming compress/decompress helpers built on them.

use std::io::{BufRead, BufReader, Read, Write};
use std::ops::Range;

use crate::baseline::{BaselineReceiver, BaselineSender};
use crate::error::Result;
use crate::receiver::Receiver;
use crate::sender::Sender;
use crate::tokenizer::{tokens, StreamTokenizer};
use crate::trie::InsertOutcome;
use crate::vocab::{Permutation, SymbolId};
use crate::wire::{at_end, Format, StreamHeader, WireItem};

/// What a sender did for one emitted symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Emission {
    pub symbol: SymbolId,
    /// Rank carried by the codeword: the pre-promotion rank of a known symbol,
    /// or the vocabulary size for an escape.
    pub rank: u64,
    pub escaped: bool,
    /// Vocabulary size before this emission.
    pub size_before: usize,
    /// Number of input tokens the symbol covers.
    pub tokens: usize,
    /// Pair symbol created after the emission, if any.
    pub pair: Option<(SymbolId, InsertOutcome)>,
}

/// The compressing end of a stream.
pub trait TokenSender {
    const FORMAT: Format;

    /// Feeds one token. `observer` runs after each emission has been fully
    /// applied to the model.
    fn push_token_observed<F>(&mut self, token: &[u8], out: &mut Vec<WireItem>, observer: F)
    where
        F: FnMut(&Self, &Emission, &WireItem);

    /// Emits everything still buffered. The model stays usable.
    fn flush_observed<F>(&mut self, out: &mut Vec<WireItem>, observer: F)
    where
        F: FnMut(&Self, &Emission, &WireItem);

    fn push_token(&mut self, token: &[u8], out: &mut Vec<WireItem>) {
        self.push_token_observed(token, out, |_, _, _| {});
    }

    fn flush(&mut self, out: &mut Vec<WireItem>) {
        self.flush_observed(out, |_, _, _| {});
    }

    fn permutation(&self) -> &Permutation;

    fn symbol_count(&self) -> usize;

    /// Text spelled by a symbol.
    fn symbol_text(&self, id: SymbolId) -> Result<Vec<u8>>;

    fn terminal_count(&self) -> usize;
}

/// The decompressing end of a stream.
pub trait SymbolReceiver {
    const FORMAT: Format;

    /// Decodes one item. Returns the range of output it appended.
    fn feed<R: BufRead + ?Sized>(&mut self, src: &mut R) -> Result<Range<usize>>;

    fn output(&self) -> &[u8];

    fn permutation(&self) -> &Permutation;

    fn symbol_count(&self) -> usize;

    fn symbol_text(&self, id: SymbolId) -> Result<&[u8]>;
}

fn sender_items<S: TokenSender>(mut sender: S, input: &[u8]) -> (S, Vec<WireItem>) {
    let mut items = Vec::new();
    for tok in tokens(input) {
        sender.push_token(tok.bytes, &mut items);
    }
    sender.flush(&mut items);
    (sender, items)
}

fn compress_with<S: TokenSender>(sender: S, input: &[u8]) -> Vec<u8> {
    let (_, items) = sender_items(sender, input);
    let mut out = StreamHeader { format: S::FORMAT }.to_bytes().to_vec();
    for item in &items {
        item.write_to(&mut out);
    }
    out
}

/// Compresses a whole buffer into a headed stream.
pub fn compress(input: &[u8], format: Format) -> Vec<u8> {
    match format {
        Format::Dv2v => compress_with(Sender::new(), input),
        Format::Detdc => compress_with(BaselineSender::new(), input),
    }
}

fn drain_receiver<Rc: SymbolReceiver, R: BufRead + ?Sized>(
    mut receiver: Rc,
    src: &mut R,
) -> Result<Vec<u8>> {
    while !at_end(src)? {
        receiver.feed(src)?;
    }
    Ok(receiver.output().to_vec())
}

/// Decompresses a whole headed stream.
pub fn decompress(stream: &[u8]) -> Result<Vec<u8>> {
    let header = StreamHeader::parse(stream)?;
    let mut body = &stream[crate::wire::HEADER_LEN..];
    match header.format {
        Format::Dv2v => drain_receiver(Receiver::new(), &mut body),
        Format::Detdc => drain_receiver(BaselineReceiver::new(), &mut body),
    }
}

/// Model statistics for one compression run.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Stats {
    pub format: Format,
    pub original_bytes: u64,
    pub compressed_bytes: u64,
    pub ratio_percent: f64,
    pub terminals: usize,
    pub non_terminals: usize,
    pub vocabulary_size: usize,
    pub codewords: usize,
    pub escapes: usize,
}

fn stats_with<S: TokenSender>(sender: S, input: &[u8]) -> Stats {
    let (sender, items) = sender_items(sender, input);
    let compressed =
        crate::wire::HEADER_LEN + items.iter().map(WireItem::encoded_len).sum::<usize>();
    let escapes = items.iter().filter(|i| i.plain().is_some()).count();
    let terminals = sender.terminal_count();
    Stats {
        format: S::FORMAT,
        original_bytes: input.len() as u64,
        compressed_bytes: compressed as u64,
        ratio_percent: ratio_percent(compressed as u64, input.len() as u64),
        terminals,
        non_terminals: sender.symbol_count() - terminals,
        vocabulary_size: sender.symbol_count(),
        codewords: items.len() - escapes,
        escapes,
    }
}

pub fn stats(input: &[u8], format: Format) -> Stats {
    match format {
        Format::Dv2v => stats_with(Sender::new(), input),
        Format::Detdc => stats_with(BaselineSender::new(), input),
    }
}

/// Compressed size as a percentage of the original size. Empty input gives 0.
pub fn ratio_percent(compressed: u64, original: u64) -> f64 {
    if original == 0 {
        0.0
    } else {
        compressed as f64 * 100.0 / original as f64
    }
}

const CHUNK: usize = 64 * 1024;

fn compress_stream_with<S: TokenSender, R: Read, W: Write>(
    mut sender: S,
    mut input: R,
    mut output: W,
) -> Result<u64> {
    output.write_all(&StreamHeader { format: S::FORMAT }.to_bytes())?;
    let mut tokenizer = StreamTokenizer::new();
    let mut buf = vec![0u8; CHUNK];
    let mut items = Vec::new();
    let mut bytes = Vec::new();
    let mut read_total = 0u64;
    loop {
        let n = match input.read(&mut buf) {
            Ok(0) => break,
            Ok(n) => n,
            Err(e) if e.kind() == std::io::ErrorKind::Interrupted => continue,
            Err(e) => return Err(e.into()),
        };
        read_total += n as u64;
        tokenizer.feed(&buf[..n], |tok| sender.push_token(tok, &mut items));
        for item in items.drain(..) {
            item.write_to(&mut bytes);
        }
        output.write_all(&bytes)?;
        bytes.clear();
    }
    tokenizer.finish(|tok| sender.push_token(tok, &mut items));
    sender.flush(&mut items);
    for item in items.drain(..) {
        item.write_to(&mut bytes);
    }
    output.write_all(&bytes)?;
    output.flush()?;
    Ok(read_total)
}

/// Compresses `input` to `output` chunk by chunk; output is written as soon as
/// the model has committed to it. Returns the number of input bytes read.
pub fn compress_stream<R: Read, W: Write>(input: R, output: W, format: Format) -> Result<u64> {
    match format {
        Format::Dv2v => compress_stream_with(Sender::new(), input, output),
        Format::Detdc => compress_stream_with(BaselineSender::new(), input, output),
    }
}

fn decompress_stream_with<Rc: SymbolReceiver, R: BufRead, W: Write>(
    mut receiver: Rc,
    mut input: R,
    mut output: W,
) -> Result<u64> {
    let mut written = 0;
    while !at_end(&mut input)? {
        let range = receiver.feed(&mut input)?;
        output.write_all(&receiver.output()[range.clone()])?;
        written += range.len() as u64;
    }
    output.flush()?;
    Ok(written)
}

/// Decompresses a headed stream from `input`, writing text as it is decoded.
/// Returns the number of bytes written.
pub fn decompress_stream<R: Read, W: Write>(input: R, output: W) -> Result<u64> {
    let mut input = BufReader::with_capacity(CHUNK, input);
    let header = StreamHeader::read_from(&mut input)?;
    match header.format {
        Format::Dv2v => decompress_stream_with(Receiver::new(), input, output),
        Format::Detdc => decompress_stream_with(BaselineReceiver::new(), input, output),
    }
}
