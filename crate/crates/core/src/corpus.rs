//! Deterministic corpus generators used by the benchmark and the tests.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LEXICON_SIZE: usize = 10_000;
const PARAGRAPH_BYTES: usize = 10 * 1024;
const SUBSTITUTION_RATE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CorpusKind {
    /// A user-supplied file, passed through.
    NaturalSample,
    /// A seeded paragraph repeated with sparse word substitutions.
    Repetitive,
    UniformRandomWords,
    PathologicalSingleWord,
}

impl CorpusKind {
    pub fn name(self) -> &'static str {
        match self {
            CorpusKind::NaturalSample => "natural",
            CorpusKind::Repetitive => "repetitive",
            CorpusKind::UniformRandomWords => "uniform",
            CorpusKind::PathologicalSingleWord => "single",
        }
    }
}

impl FromStr for CorpusKind {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, CorpusError> {
        match s {
            "natural" | "natural_sample" => Ok(CorpusKind::NaturalSample),
            "repetitive" => Ok(CorpusKind::Repetitive),
            "uniform" | "uniform_random_words" => Ok(CorpusKind::UniformRandomWords),
            "single" | "pathological_single_word" => Ok(CorpusKind::PathologicalSingleWord),
            _ => Err(CorpusError::BadSpec(format!("unknown corpus kind `{s}`"))),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("invalid corpus spec: {0}")]
    BadSpec(String),
    #[error("natural sample corpus needs a file")]
    MissingSample,
    #[error("reading sample {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusSpec {
    pub kind: CorpusKind,
    pub seed: u64,
    pub target_bytes: usize,
    pub sample: Option<PathBuf>,
}

impl CorpusSpec {
    pub fn new(kind: CorpusKind, seed: u64, target_bytes: usize) -> Self {
        Self {
            kind,
            seed,
            target_bytes,
            sample: None,
        }
    }
}

impl fmt::Display for CorpusSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}",
            self.kind.name(),
            self.seed,
            self.target_bytes
        )
    }
}

/// Parses `kind:seed:bytes`, e.g. `repetitive:1:4194304`.
impl FromStr for CorpusSpec {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, CorpusError> {
        let parts: Vec<&str> = s.split(':').collect();
        let [kind, seed, bytes] = parts[..] else {
            return Err(CorpusError::BadSpec(format!(
                "expected kind:seed:bytes, got `{s}`"
            )));
        };
        let seed = seed
            .parse()
            .map_err(|_| CorpusError::BadSpec(format!("bad seed `{seed}`")))?;
        let target_bytes = bytes
            .parse()
            .map_err(|_| CorpusError::BadSpec(format!("bad byte count `{bytes}`")))?;
        Ok(CorpusSpec::new(kind.parse()?, seed, target_bytes))
    }
}

/// Builds the corpus described by `spec`. Output is exactly `target_bytes`
/// long, except for natural samples shorter than that.
pub fn generate(spec: &CorpusSpec) -> Result<Vec<u8>, CorpusError> {
    let n = spec.target_bytes;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let out = match spec.kind {
        CorpusKind::NaturalSample => {
            let path = spec.sample.as_ref().ok_or(CorpusError::MissingSample)?;
            let mut data = std::fs::read(path).map_err(|source| CorpusError::Io {
                path: path.clone(),
                source,
            })?;
            data.truncate(n);
            data
        }
        CorpusKind::PathologicalSingleWord => b"a ".iter().copied().cycle().take(n).collect(),
        CorpusKind::UniformRandomWords => {
            let lexicon = lexicon(&mut rng);
            let mut out = Vec::with_capacity(n + 16);
            let mut col = 0;
            while out.len() < n {
                let w = &lexicon[rng.random_range(0..lexicon.len())];
                out.extend_from_slice(w.as_bytes());
                col += 1;
                out.push(if col % 16 == 0 { b'\n' } else { b' ' });
            }
            out.truncate(n);
            out
        }
        CorpusKind::Repetitive => repetitive(&mut rng, n),
    };
    Ok(out)
}

/// Synthetic lexicon of lowercase words, 1 to 10 letters.
fn lexicon(rng: &mut ChaCha8Rng) -> Vec<String> {
    (0..LEXICON_SIZE)
        .map(|_| {
            let len = rng.random_range(1..=10);
            (0..len)
                .map(|_| rng.random_range(b'a'..=b'z') as char)
                .collect()
        })
        .collect()
}

fn repetitive(rng: &mut ChaCha8Rng, n: usize) -> Vec<u8> {
    let lexicon = lexicon(rng);
    // Skewed word choice so the paragraph reads like text rather than noise.
    let pick = |rng: &mut ChaCha8Rng| {
        let u: f64 = rng.random();
        ((u * u * u) * lexicon.len() as f64) as usize
    };

    let mut paragraph: Vec<(usize, &'static str)> = Vec::new();
    let mut len = 0;
    while len < PARAGRAPH_BYTES {
        let w = pick(rng);
        let sep = match rng.random_range(0..20) {
            0 => ", ",
            1 => ". ",
            2 => ".\n",
            _ => " ",
        };
        len += lexicon[w].len() + sep.len();
        paragraph.push((w, sep));
    }

    let mut out = Vec::with_capacity(n + PARAGRAPH_BYTES);
    while out.len() < n {
        for &(w, sep) in &paragraph {
            let w = if rng.random_bool(SUBSTITUTION_RATE) {
                pick(rng)
            } else {
                w
            };
            out.extend_from_slice(lexicon[w].as_bytes());
            out.extend_from_slice(sep.as_bytes());
        }
    }
    out.truncate(n);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_bytes_is_empty() {
        for kind in [
            CorpusKind::Repetitive,
            CorpusKind::UniformRandomWords,
            CorpusKind::PathologicalSingleWord,
        ] {
            assert!(generate(&CorpusSpec::new(kind, 1, 0)).unwrap().is_empty());
        }
    }

    #[test]
    fn single_word_prefix() {
        let c = generate(&CorpusSpec::new(CorpusKind::PathologicalSingleWord, 0, 7)).unwrap();
        assert_eq!(c, b"a a a a");
    }

    #[test]
    fn deterministic_and_exact_length() {
        for kind in [CorpusKind::Repetitive, CorpusKind::UniformRandomWords] {
            let spec = CorpusSpec::new(kind, 42, 50_000);
            let a = generate(&spec).unwrap();
            assert_eq!(a.len(), 50_000);
            assert_eq!(a, generate(&spec).unwrap());
            assert_ne!(a, generate(&CorpusSpec::new(kind, 43, 50_000)).unwrap());
        }
    }

    #[test]
    fn natural_needs_a_file() {
        let spec = CorpusSpec::new(CorpusKind::NaturalSample, 0, 10);
        assert!(matches!(generate(&spec), Err(CorpusError::MissingSample)));
    }

    #[test]
    fn parse_spec() {
        let s: CorpusSpec = "repetitive:3:1024".parse().unwrap();
        assert_eq!(s, CorpusSpec::new(CorpusKind::Repetitive, 3, 1024));
        assert_eq!(s.to_string(), "repetitive:3:1024");
        assert!("repetitive:3".parse::<CorpusSpec>().is_err());
        assert!("bogus:1:1".parse::<CorpusSpec>().is_err());
    }
}
