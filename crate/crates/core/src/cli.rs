//! Command-line front end.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::codec::{self, ratio_percent};
use crate::corpus::{self, CorpusSpec};
use crate::wire::Format;

#[derive(Debug, Parser)]
#[command(
    name = "dv2v",
    version,
    about = "One-pass word-based variable-to-variable compressor"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compress text into a dv2v/detdc stream.
    Compress(IoArgs),
    /// Decompress a stream; the format is read from its header.
    Decompress(IoArgs),
    /// Compress and decompress in memory and compare with the input.
    Verify(InputArgs),
    /// Print model statistics for the input.
    Stats(InputArgs),
    /// Compare dv2v and detdc on the input: ratio and timings.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Dv2v,
    Detdc,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Dv2v => Format::Dv2v,
            FormatArg::Detdc => Format::Detdc,
        }
    }
}

#[derive(Debug, Args)]
struct IoArgs {
    /// Input path, or `-` for stdin.
    #[arg(long, short, default_value = "-")]
    input: String,
    /// Output path, or `-` for stdout.
    #[arg(long, short, default_value = "-")]
    output: String,
    #[arg(long, value_enum, default_value = "dv2v")]
    format: FormatArg,
}

#[derive(Debug, Args)]
struct Source {
    /// Input path, or `-` for stdin.
    #[arg(long, short, default_value = "-")]
    input: String,
    /// Generate the input instead: `kind:seed:bytes` with kind one of
    /// repetitive, uniform, single, natural.
    #[arg(long, conflicts_with = "input")]
    corpus: Option<String>,
    /// File backing a `natural` corpus.
    #[arg(long)]
    sample: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct InputArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, value_enum, default_value = "dv2v")]
    format: FormatArg,
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    json: bool,
}

/// Parses `argv` (including the program name) and runs the command against
/// the process's standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdin = io::stdin();
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(argv, stdin.lock(), stdout.lock(), stderr.lock())
}

/// Like [`run`], with explicit streams.
pub fn run_with<I, T, R, W, E>(argv: I, stdin: R, mut stdout: W, mut stderr: E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    R: Read,
    W: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(stderr, "{}", e.render())
            } else {
                write!(stdout, "{}", e.render())
            };
            return code;
        }
    };
    match execute(cli.command, stdin, &mut stdout) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(stderr, "dv2v: {msg}");
            1
        }
    }
}

type CliResult<T> = Result<T, String>;

fn execute<R: Read, W: Write>(command: Command, stdin: R, stdout: &mut W) -> CliResult<i32> {
    match command {
        Command::Compress(args) => {
            let input = open_input(&args.input, stdin)?;
            let output = open_output(&args.output, stdout)?;
            codec::compress_stream(input, output, args.format.into())
                .map_err(|e| format!("compress: {e}"))?;
            Ok(0)
        }
        Command::Decompress(args) => {
            let input = open_input(&args.input, stdin)?;
            let output = open_output(&args.output, stdout)?;
            codec::decompress_stream(input, output).map_err(|e| format!("decompress: {e}"))?;
            Ok(0)
        }
        Command::Verify(args) => {
            let data = load(&args.source, stdin)?;
            let format = args.format.into();
            let compressed = codec::compress(&data, format);
            let restored = codec::decompress(&compressed).map_err(|e| format!("verify: {e}"))?;
            if restored != data {
                let at = restored
                    .iter()
                    .zip(&data)
                    .position(|(a, b)| a != b)
                    .unwrap_or(restored.len().min(data.len()));
                return Err(format!("verify: mismatch at byte {at}"));
            }
            let ratio = ratio_percent(compressed.len() as u64, data.len() as u64);
            if args.json {
                let v = serde_json::json!({
                    "ok": true,
                    "format": format,
                    "original_bytes": data.len(),
                    "compressed_bytes": compressed.len(),
                    "ratio_percent": ratio,
                });
                writeln!(stdout, "{v}").map_err(io_err)?;
            } else {
                writeln!(
                    stdout,
                    "ok: {} bytes -> {} bytes ({ratio:.2}%) [{}]",
                    data.len(),
                    compressed.len(),
                    format.name()
                )
                .map_err(io_err)?;
            }
            Ok(0)
        }
        Command::Stats(args) => {
            let data = load(&args.source, stdin)?;
            let s = codec::stats(&data, args.format.into());
            if args.json {
                let v = serde_json::to_string(&s).map_err(|e| e.to_string())?;
                writeln!(stdout, "{v}").map_err(io_err)?;
            } else {
                let text = format!(
                    "format:          {}\n\
                     original bytes:  {}\n\
                     compressed:      {}\n\
                     ratio:           {:.2}%\n\
                     vocabulary:      {}\n\
                     terminals:       {}\n\
                     non-terminals:   {}\n\
                     codewords:       {}\n\
                     escapes:         {}\n",
                    s.format.name(),
                    s.original_bytes,
                    s.compressed_bytes,
                    s.ratio_percent,
                    s.vocabulary_size,
                    s.terminals,
                    s.non_terminals,
                    s.codewords,
                    s.escapes
                );
                stdout.write_all(text.as_bytes()).map_err(io_err)?;
            }
            Ok(0)
        }
        Command::Bench(args) => {
            let data = load(&args.source, stdin)?;
            let label = args
                .source
                .corpus
                .clone()
                .unwrap_or_else(|| args.source.input.clone());
            let results = [bench(&data, Format::Dv2v)?, bench(&data, Format::Detdc)?];
            if args.json {
                let v = serde_json::json!({ "input": label, "results": results });
                writeln!(stdout, "{v}").map_err(io_err)?;
            } else {
                writeln!(stdout, "input: {label}").map_err(io_err)?;
                writeln!(
                    stdout,
                    "{:<6} {:>12} {:>12} {:>9} {:>12} {:>12}",
                    "format", "original", "compressed", "ratio(%)", "compress(s)", "decomp(s)"
                )
                .map_err(io_err)?;
                for r in &results {
                    writeln!(
                        stdout,
                        "{:<6} {:>12} {:>12} {:>9.2} {:>12.4} {:>12.4}",
                        r.format.name(),
                        r.original_bytes,
                        r.compressed_bytes,
                        r.ratio_percent,
                        r.compress_seconds,
                        r.decompress_seconds
                    )
                    .map_err(io_err)?;
                }
            }
            Ok(0)
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchResult {
    pub format: Format,
    pub original_bytes: usize,
    pub compressed_bytes: usize,
    pub ratio_percent: f64,
    pub compress_seconds: f64,
    pub decompress_seconds: f64,
}

/// Times one in-memory compress/decompress cycle and checks the roundtrip.
pub fn bench(data: &[u8], format: Format) -> CliResult<BenchResult> {
    let t = Instant::now();
    let compressed = codec::compress(data, format);
    let compress_seconds = t.elapsed().as_secs_f64();
    let t = Instant::now();
    let restored = codec::decompress(&compressed).map_err(|e| format!("bench: {e}"))?;
    let decompress_seconds = t.elapsed().as_secs_f64();
    if restored != data {
        return Err(format!("bench: {} roundtrip mismatch", format.name()));
    }
    Ok(BenchResult {
        format,
        original_bytes: data.len(),
        compressed_bytes: compressed.len(),
        ratio_percent: ratio_percent(compressed.len() as u64, data.len() as u64),
        compress_seconds,
        decompress_seconds,
    })
}

fn io_err(e: io::Error) -> String {
    e.to_string()
}

fn load<R: Read>(source: &Source, stdin: R) -> CliResult<Vec<u8>> {
    if let Some(spec) = &source.corpus {
        let mut spec: CorpusSpec = spec.parse().map_err(|e| format!("{e}"))?;
        spec.sample = source.sample.clone();
        return corpus::generate(&spec).map_err(|e| e.to_string());
    }
    let mut data = Vec::new();
    open_input(&source.input, stdin)?
        .read_to_end(&mut data)
        .map_err(|e| format!("reading {}: {e}", source.input))?;
    Ok(data)
}

fn open_input<'a, R: Read + 'a>(path: &str, stdin: R) -> CliResult<Box<dyn Read + 'a>> {
    if path == "-" {
        Ok(Box::new(stdin))
    } else {
        let f = File::open(path).map_err(|e| format!("cannot open {path}: {e}"))?;
        Ok(Box::new(f))
    }
}

fn open_output<'a, W: Write + 'a>(path: &str, stdout: &'a mut W) -> CliResult<Box<dyn Write + 'a>> {
    if path == "-" {
        Ok(Box::new(stdout))
    } else {
        let f = File::create(path).map_err(|e| format!("cannot create {path}: {e}"))?;
        Ok(Box::new(BufWriter::new(f)))
    }
}
