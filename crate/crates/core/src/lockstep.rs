//! Runs a sender and a receiver side by side and compares their models after
//! every emitted symbol.

use crate::baseline::{BaselineReceiver, BaselineSender};
use crate::codec::{SymbolReceiver, TokenSender};
use crate::receiver::Receiver;
use crate::sender::Sender;
use crate::tokenizer::tokens;
use crate::vocab::SymbolId;
use crate::wire::{Format, WireItem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divergence {
    /// Index of the emission after which the models disagreed.
    pub emission: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub symbol: SymbolId,
    pub escaped: bool,
    pub text: Vec<u8>,
}

#[derive(Debug, Clone)]
pub struct LockstepReport {
    pub format: Format,
    /// Emitted symbols, escapes included.
    pub symbols: usize,
    pub codewords: usize,
    pub escapes: usize,
    pub vocabulary_size: usize,
    pub compressed_bytes: usize,
    pub divergence: Option<Divergence>,
    pub trace: Vec<TraceStep>,
}

impl LockstepReport {
    pub fn is_success(&self) -> bool {
        self.divergence.is_none()
    }
}

pub fn lockstep_run(input: &[u8], format: Format) -> LockstepReport {
    lockstep_tokens(tokens(input).map(|t| t.bytes), format)
}

/// Lockstep run over an explicit token sequence, bypassing the tokenizer.
/// The expected output is the concatenation of the tokens.
pub fn lockstep_tokens<'a, I>(tokens: I, format: Format) -> LockstepReport
where
    I: IntoIterator<Item = &'a [u8]>,
{
    match format {
        Format::Dv2v => run(Sender::new(), Receiver::new(), tokens),
        Format::Detdc => run(BaselineSender::new(), BaselineReceiver::new(), tokens),
    }
}

struct Harness<R> {
    receiver: R,
    frame: Vec<u8>,
    checked: usize,
    emissions: usize,
    escapes: usize,
    compressed: usize,
    divergence: Option<Divergence>,
    trace: Vec<TraceStep>,
}

impl<R: SymbolReceiver> Harness<R> {
    fn check<S: TokenSender>(&mut self, sender: &S, symbol: SymbolId, item: &WireItem) {
        let index = self.emissions;
        self.emissions += 1;
        self.escapes += usize::from(item.plain().is_some());
        self.compressed += item.encoded_len();
        if self.divergence.is_some() {
            return;
        }
        if let Err(reason) = self.compare(sender, symbol, item) {
            self.divergence = Some(Divergence {
                emission: index,
                reason,
            });
        }
    }

    fn compare<S: TokenSender>(
        &mut self,
        sender: &S,
        symbol: SymbolId,
        item: &WireItem,
    ) -> Result<(), String> {
        self.frame.clear();
        item.write_to(&mut self.frame);
        let mut src = &self.frame[..];
        let range = self
            .receiver
            .feed(&mut src)
            .map_err(|e| format!("receiver error: {e}"))?;
        if !src.is_empty() {
            return Err("receiver left bytes of the item unread".into());
        }
        let sent = sender.symbol_text(symbol).map_err(|e| e.to_string())?;
        let got = &self.receiver.output()[range];
        if got != sent {
            return Err(format!("emitted text differs for {symbol:?}"));
        }
        self.trace.push(TraceStep {
            symbol,
            escaped: item.plain().is_some(),
            text: sent,
        });
        if sender.symbol_count() != self.receiver.symbol_count() {
            return Err(format!(
                "symbol counts differ: sender {}, receiver {}",
                sender.symbol_count(),
                self.receiver.symbol_count()
            ));
        }
        if sender.permutation() != self.receiver.permutation() {
            return Err("vocabulary permutations differ".into());
        }
        // Entries never change after creation, so each is compared once.
        for k in self.checked..sender.symbol_count() {
            let id = SymbolId(k as u32);
            let s = sender.symbol_text(id).map_err(|e| e.to_string())?;
            let r = self.receiver.symbol_text(id).map_err(|e| e.to_string())?;
            if s != r {
                return Err(format!("entry text differs for {id:?}"));
            }
        }
        self.checked = sender.symbol_count();
        Ok(())
    }
}

fn run<'a, S, R, I>(mut sender: S, receiver: R, tokens: I) -> LockstepReport
where
    S: TokenSender,
    R: SymbolReceiver,
    I: IntoIterator<Item = &'a [u8]>,
{
    let mut h = Harness {
        receiver,
        frame: Vec::new(),
        checked: 0,
        emissions: 0,
        escapes: 0,
        compressed: 0,
        divergence: None,
        trace: Vec::new(),
    };
    let mut items = Vec::new();
    let mut input = Vec::new();
    for tok in tokens {
        input.extend_from_slice(tok);
        sender.push_token_observed(tok, &mut items, |s, e, item| h.check(s, e.symbol, item));
    }
    sender.flush_observed(&mut items, |s, e, item| h.check(s, e.symbol, item));

    if h.divergence.is_none() && h.receiver.output() != &input[..] {
        h.divergence = Some(Divergence {
            emission: h.emissions,
            reason: "final output differs from input".into(),
        });
    }
    LockstepReport {
        format: S::FORMAT,
        symbols: h.emissions,
        codewords: h.emissions - h.escapes,
        escapes: h.escapes,
        vocabulary_size: sender.symbol_count(),
        compressed_bytes: h.compressed,
        divergence: h.divergence,
        trace: h.trace,
    }
}
