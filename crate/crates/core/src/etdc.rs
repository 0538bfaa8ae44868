//! End-Tagged Dense Code.
//!
//! A rank is written as a base-128 dense number: every byte but the last lies
//! in `0x00..=0x7F`, the last one carries the tag bit (`0x80..=0xFF`). Rank 0
//! is `[0x80]`, rank 127 is `[0xFF]`, rank 128 is `[0x00, 0x80]`, and so on
//! with no gaps: there are exactly `128^k` codewords of `k` bytes.

use std::fmt;
use std::io::BufRead;

use crate::error::{Error, Result};

/// Longest codeword for a `u64` rank.
pub const MAX_CODEWORD_LEN: usize = 10;

const TAG: u8 = 0x80;

/// A tagged byte codeword. Stored inline; at most [`MAX_CODEWORD_LEN`] bytes.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Codeword {
    buf: [u8; MAX_CODEWORD_LEN],
    len: u8,
}

impl Codeword {
    pub fn as_bytes(&self) -> &[u8] {
        &self.buf[MAX_CODEWORD_LEN - self.len as usize..]
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.len as usize
    }
}

impl fmt::Debug for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Codeword(")?;
        for (i, b) in self.as_bytes().iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{b:02x}")?;
        }
        write!(f, ")")
    }
}

/// Encodes a rank. Runs in time linear in the codeword length.
pub fn encode(rank: u64) -> Codeword {
    let mut buf = [0u8; MAX_CODEWORD_LEN];
    let mut at = MAX_CODEWORD_LEN - 1;
    buf[at] = TAG | (rank % 128) as u8;
    let mut rest = rank / 128;
    while rest > 0 {
        rest -= 1;
        at -= 1;
        buf[at] = (rest % 128) as u8;
        rest /= 128;
    }
    Codeword {
        buf,
        len: (MAX_CODEWORD_LEN - at) as u8,
    }
}

/// Number of bytes `encode(rank)` produces.
pub fn codeword_len(rank: u64) -> usize {
    let mut len = 1;
    let mut rest = rank / 128;
    while rest > 0 {
        rest = (rest - 1) / 128;
        len += 1;
    }
    len
}

/// Decodes one codeword from the front of `bytes`, returning the rank and the
/// number of bytes consumed.
pub fn decode_slice(bytes: &[u8]) -> Result<(u64, usize)> {
    let mut rank: u64 = 0;
    for (i, &b) in bytes.iter().enumerate() {
        if b & TAG != 0 {
            rank = push_digit(rank, (b & !TAG) as u64, 0)?;
            return Ok((rank, i + 1));
        }
        rank = push_digit(rank, b as u64, 1)?;
    }
    Err(Error::UnexpectedEof)
}

/// Decodes one codeword from a byte source, consuming exactly its bytes.
pub fn decode<R: BufRead + ?Sized>(src: &mut R) -> Result<u64> {
    let mut rank: u64 = 0;
    loop {
        let buf = src.fill_buf()?;
        if buf.is_empty() {
            return Err(Error::UnexpectedEof);
        }
        match buf.iter().position(|&b| b & TAG != 0) {
            Some(end) => {
                for &b in &buf[..end] {
                    rank = push_digit(rank, b as u64, 1)?;
                }
                rank = push_digit(rank, (buf[end] & !TAG) as u64, 0)?;
                src.consume(end + 1);
                return Ok(rank);
            }
            None => {
                for &b in buf {
                    rank = push_digit(rank, b as u64, 1)?;
                }
                let n = buf.len();
                src.consume(n);
            }
        }
    }
}

#[inline]
fn push_digit(rank: u64, digit: u64, carry: u64) -> Result<u64> {
    rank.checked_mul(128)
        .and_then(|r| r.checked_add(digit + carry))
        .ok_or_else(|| Error::corrupt("codeword rank overflows u64"))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// All codewords of `k` bytes in canonical order: shorter first, then
    /// lexicographic with the tagged byte varying fastest.
    fn enumerate_len(k: usize) -> Vec<Vec<u8>> {
        let mut out = vec![Vec::new()];
        for _ in 0..k - 1 {
            out = out
                .into_iter()
                .flat_map(|p| {
                    (0u8..0x80).map(move |b| {
                        let mut q = p.clone();
                        q.push(b);
                        q
                    })
                })
                .collect();
        }
        out.into_iter()
            .flat_map(|p| {
                (0x80u8..=0xFF).map(move |b| {
                    let mut q = p.clone();
                    q.push(b);
                    q
                })
            })
            .collect()
    }

    #[test]
    fn boundary_vectors() {
        assert_eq!(encode(0).as_bytes(), [0x80]);
        assert_eq!(encode(127).as_bytes(), [0xFF]);
        assert_eq!(encode(128).as_bytes(), [0x00, 0x80]);
        assert_eq!(encode(16511).as_bytes(), [0x7F, 0xFF]);
        assert_eq!(encode(16512).as_bytes(), [0x00, 0x00, 0x80]);
        assert_eq!(decode_slice(&[0x80]).unwrap(), (0, 1));
        assert_eq!(decode_slice(&[0x00, 0x80]).unwrap(), (128, 2));
    }

    #[test]
    fn matches_enumeration_for_one_and_two_bytes() {
        let mut all = enumerate_len(1);
        all.extend(enumerate_len(2));
        assert_eq!(all.len(), 128 + 128 * 128);
        for (rank, cw) in all.iter().enumerate() {
            assert_eq!(encode(rank as u64).as_bytes(), &cw[..], "rank {rank}");
        }
    }

    #[test]
    fn three_byte_codewords_sampled() {
        let three = enumerate_len(3);
        let base = 128 + 128 * 128;
        for i in (0..three.len()).step_by(997).chain([three.len() - 1]) {
            assert_eq!(encode((base + i) as u64).as_bytes(), &three[i][..]);
        }
        assert_eq!(codeword_len((base + three.len()) as u64), 4);
    }

    #[test]
    fn truncated_codeword_is_eof() {
        assert!(matches!(decode_slice(&[]), Err(Error::UnexpectedEof)));
        assert!(matches!(
            decode_slice(&[0x00, 0x01]),
            Err(Error::UnexpectedEof)
        ));
        let mut src: &[u8] = &[0x05];
        assert!(matches!(decode(&mut src), Err(Error::UnexpectedEof)));
    }

    #[test]
    fn overlong_codeword_is_corrupt() {
        let bytes = [0x7Fu8; 12];
        let mut v = bytes.to_vec();
        v.push(0xFF);
        assert!(matches!(decode_slice(&v), Err(Error::CorruptStream(_))));
    }

    #[test]
    fn large_ranks_roundtrip() {
        for r in [(1u64 << 62) - 1, u64::MAX - 1, u64::MAX] {
            let cw = encode(r);
            assert_eq!(cw.len(), codeword_len(r));
            assert_eq!(decode_slice(cw.as_bytes()).unwrap().0, r);
        }
    }

    #[test]
    fn stream_decode_consumes_one_codeword() {
        let mut bytes = Vec::new();
        for r in [0u64, 300, 16512, 5] {
            bytes.extend_from_slice(encode(r).as_bytes());
        }
        let mut src: &[u8] = &bytes;
        for r in [0u64, 300, 16512, 5] {
            assert_eq!(decode(&mut src).unwrap(), r);
        }
        assert!(src.is_empty());
    }
}
