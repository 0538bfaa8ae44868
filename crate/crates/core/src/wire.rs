//! Wire format.
//!
//! ```text
//! stream  = header item*
//! header  = "DV2V" version:u8(0x01) format:u8 (0x01 dv2v, 0x02 detdc)
//! item    = codeword                       ; known symbol
//!         | codeword varint(len) bytes     ; escape + plain token
//! ```
//!
//! Codewords follow the ETDC byte convention in [`crate::etdc`]. The varint
//! is unsigned LEB128: seven bits per byte, least significant group first,
//! high bit set on every byte except the last. The stream is byte aligned
//! and may be flushed after any item.

use std::io::{BufRead, Read};

use crate::error::{Error, Result};
use crate::etdc::Codeword;

pub const MAGIC: [u8; 4] = *b"DV2V";
pub const VERSION: u8 = 0x01;
pub const HEADER_LEN: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Dv2v,
    Detdc,
}

impl Format {
    pub fn id(self) -> u8 {
        match self {
            Format::Dv2v => 0x01,
            Format::Detdc => 0x02,
        }
    }

    pub fn from_id(id: u8) -> Option<Format> {
        match id {
            0x01 => Some(Format::Dv2v),
            0x02 => Some(Format::Detdc),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Format::Dv2v => "dv2v",
            Format::Detdc => "detdc",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamHeader {
    pub format: Format,
}

impl StreamHeader {
    pub fn to_bytes(self) -> [u8; HEADER_LEN] {
        let [a, b, c, d] = MAGIC;
        [a, b, c, d, VERSION, self.format.id()]
    }

    pub fn parse(bytes: &[u8]) -> Result<StreamHeader> {
        if bytes.len() < HEADER_LEN {
            return Err(Error::BadHeader(format!(
                "need {HEADER_LEN} header bytes, got {}",
                bytes.len()
            )));
        }
        if bytes[..4] != MAGIC {
            return Err(Error::BadHeader("bad magic".into()));
        }
        if bytes[4] != VERSION {
            return Err(Error::BadHeader(format!(
                "unsupported version {}",
                bytes[4]
            )));
        }
        let format = Format::from_id(bytes[5])
            .ok_or_else(|| Error::BadHeader(format!("unknown format id {}", bytes[5])))?;
        Ok(StreamHeader { format })
    }

    /// Reads and validates the header from a stream.
    pub fn read_from<R: Read + ?Sized>(src: &mut R) -> Result<StreamHeader> {
        let mut buf = [0u8; HEADER_LEN];
        let mut got = 0;
        while got < HEADER_LEN {
            match src.read(&mut buf[got..])? {
                0 => break,
                n => got += n,
            }
        }
        StreamHeader::parse(&buf[..got])
    }
}

/// One unit emitted by a sender.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WireItem {
    Codeword(Codeword),
    /// Escape codeword followed by the new token in plain form (non-empty).
    EscapeThenPlain(Codeword, Vec<u8>),
}

impl WireItem {
    pub fn codeword(&self) -> &Codeword {
        match self {
            WireItem::Codeword(c) | WireItem::EscapeThenPlain(c, _) => c,
        }
    }

    pub fn plain(&self) -> Option<&[u8]> {
        match self {
            WireItem::Codeword(_) => None,
            WireItem::EscapeThenPlain(_, p) => Some(p),
        }
    }

    pub fn write_to(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(self.codeword().as_bytes());
        if let WireItem::EscapeThenPlain(_, plain) = self {
            write_varint(out, plain.len() as u64);
            out.extend_from_slice(plain);
        }
    }

    pub fn encoded_len(&self) -> usize {
        self.codeword().len()
            + self
                .plain()
                .map_or(0, |p| varint_len(p.len() as u64) + p.len())
    }
}

/// Concatenates the framed bytes of `items`.
pub fn frame<'a>(items: impl IntoIterator<Item = &'a WireItem>) -> Vec<u8> {
    let mut out = Vec::new();
    for item in items {
        item.write_to(&mut out);
    }
    out
}

pub fn write_varint(out: &mut Vec<u8>, mut value: u64) {
    while value >= 0x80 {
        out.push((value as u8) | 0x80);
        value >>= 7;
    }
    out.push(value as u8);
}

pub fn varint_len(mut value: u64) -> usize {
    let mut n = 1;
    while value >= 0x80 {
        value >>= 7;
        n += 1;
    }
    n
}

pub fn read_varint<R: BufRead + ?Sized>(src: &mut R) -> Result<u64> {
    let mut value: u64 = 0;
    let mut shift = 0u32;
    loop {
        let byte = read_byte(src)?;
        if shift >= 64 || (shift == 63 && byte & 0x7F > 1) {
            return Err(Error::corrupt("varint overflows u64"));
        }
        value |= ((byte & 0x7F) as u64) << shift;
        if byte & 0x80 == 0 {
            return Ok(value);
        }
        shift += 7;
    }
}

fn read_byte<R: BufRead + ?Sized>(src: &mut R) -> Result<u8> {
    let buf = src.fill_buf()?;
    let b = *buf.first().ok_or(Error::UnexpectedEof)?;
    src.consume(1);
    Ok(b)
}

/// Appends exactly `len` bytes from `src` to `out`.
pub fn read_plain<R: BufRead + ?Sized>(src: &mut R, len: usize, out: &mut Vec<u8>) -> Result<()> {
    let mut remaining = len;
    while remaining > 0 {
        let buf = src.fill_buf()?;
        if buf.is_empty() {
            return Err(Error::UnexpectedEof);
        }
        let n = buf.len().min(remaining);
        out.extend_from_slice(&buf[..n]);
        src.consume(n);
        remaining -= n;
    }
    Ok(())
}

/// True when the source has no more bytes, i.e. the stream ended cleanly at an
/// item boundary.
pub fn at_end<R: BufRead + ?Sized>(src: &mut R) -> Result<bool> {
    Ok(src.fill_buf()?.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::etdc::encode;
    use proptest::prelude::*;

    #[test]
    fn frame_vectors() {
        assert!(frame(&[]).is_empty());
        let item = WireItem::EscapeThenPlain(encode(0), b"the".to_vec());
        assert_eq!(frame([&item]), [0x80, 0x03, b't', b'h', b'e']);
        assert_eq!(item.encoded_len(), 5);
        assert_eq!(frame([&WireItem::Codeword(encode(128))]), [0x00, 0x80]);
    }

    #[test]
    fn varint_vectors() {
        let mut out = Vec::new();
        write_varint(&mut out, 300);
        assert_eq!(out, [0xAC, 0x02]);
        let mut src: &[u8] = &out;
        assert_eq!(read_varint(&mut src).unwrap(), 300);
        let mut trunc: &[u8] = &[0xAC];
        assert!(matches!(read_varint(&mut trunc), Err(Error::UnexpectedEof)));
    }

    #[test]
    fn header_roundtrip_and_rejection() {
        let h = StreamHeader {
            format: Format::Detdc,
        };
        let bytes = h.to_bytes();
        assert_eq!(&bytes, b"DV2V\x01\x02");
        assert_eq!(StreamHeader::parse(&bytes).unwrap(), h);
        assert!(StreamHeader::parse(b"DV2X\x01\x01").is_err());
        assert!(StreamHeader::parse(b"DV2V\x02\x01").is_err());
        assert!(StreamHeader::parse(b"DV2V\x01\x03").is_err());
        assert!(StreamHeader::parse(b"DV2").is_err());
    }

    proptest! {
        #[test]
        fn varint_roundtrip(v in any::<u64>()) {
            let mut out = Vec::new();
            write_varint(&mut out, v);
            prop_assert_eq!(out.len(), varint_len(v));
            let mut src: &[u8] = &out;
            prop_assert_eq!(read_varint(&mut src).unwrap(), v);
            prop_assert!(src.is_empty());
        }
    }
}
