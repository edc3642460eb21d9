//! `ortc` command line.
//!
//! Exit codes: 0 success, 1 I/O failure or empty bench directory,
//! 2 invalid parameters, 3 malformed container.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::bench::{self, Codec, ReportFormat};
use crate::codec::{self, CodecError, CodecParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_PARAMS: i32 = 2;
pub const EXIT_FORMAT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "ortc", version, about = "Octonary repetition tree run-length compressor")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct PassArgs {
    /// Number of recursive passes; pass i compares bytes i positions apart
    #[arg(long, default_value_t = 10)]
    pub passes: u8,
    /// Shortest chain of equal bytes that gets eliminated
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(1..))]
    pub min_run: u8,
}

impl PassArgs {
    fn params(&self) -> CodecParams {
        CodecParams::new(u32::from(self.passes), u32::from(self.min_run))
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compress a file into an ORTC container
    Compress {
        input: PathBuf,
        output: PathBuf,
        #[command(flatten)]
        pass: PassArgs,
    },
    /// Restore the original file from a container
    Decompress { input: PathBuf, output: PathBuf },
    /// Show container header and per-pass frame layout
    Inspect { input: PathBuf },
    /// Compare compression ratios over every file in a directory
    Bench {
        dir: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "ort,prlc1,prlc2,stored")]
        codecs: Vec<Codec>,
        #[arg(long, default_value = "markdown")]
        format: ReportFormat,
        #[command(flatten)]
        pass: PassArgs,
    },
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARAMS } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message);
            failure.code
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn io(path: &Path, e: io::Error) -> Self {
        Failure {
            code: EXIT_IO,
            message: format!("{}: {e}", path.display()),
        }
    }
}

impl From<CodecError> for Failure {
    fn from(e: CodecError) -> Self {
        let code = match e {
            CodecError::InvalidStride(_) | CodecError::InvalidMinRun(_) | CodecError::TooManyPasses(_) => EXIT_PARAMS,
            _ => EXIT_FORMAT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn write_stdout(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::io(Path::new("<stdout>"), e))
}

fn execute(command: Command, out: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Compress { input, output, pass } => {
            let data = fs::read(&input).map_err(|e| Failure::io(&input, e))?;
            let packed = codec::compress(&data, &pass.params())?;
            write_atomically(&output, &packed)?;
            let cr = if data.is_empty() {
                1.0
            } else {
                data.len() as f64 / packed.len() as f64
            };
            write_stdout(
                out,
                &format!(
                    "original: {} bytes\ncompressed: {} bytes\nCR: {cr:.3}\n",
                    data.len(),
                    packed.len()
                ),
            )
        }
        Command::Decompress { input, output } => {
            let packed = fs::read(&input).map_err(|e| Failure::io(&input, e))?;
            let data = codec::decompress(&packed)?;
            write_atomically(&output, &data)
        }
        Command::Inspect { input } => {
            let packed = fs::read(&input).map_err(|e| Failure::io(&input, e))?;
            let info = codec::inspect(&packed)?;
            let mut text = format!(
                "version: {}\nstored: {}\npasses: {}\nmin-run: {}\noriginal: {} bytes\ncontainer: {} bytes\n",
                info.version, info.stored, info.pass_count, info.min_run, info.orig_len, info.total_len
            );
            for f in &info.frames {
                text.push_str(&format!(
                    "pass {:>3}: mode={:<6} stride={:<3} input={} kept={} tree={} frame={}\n",
                    f.stride,
                    f.mode.name(),
                    f.stride,
                    f.input_len,
                    f.kept_len,
                    f.tree_len,
                    f.encoded_len
                ));
            }
            write_stdout(out, &text)
        }
        Command::Bench {
            dir,
            codecs,
            format,
            pass,
        } => {
            let corpus = bench::load_corpus(&dir).map_err(|e| Failure {
                code: EXIT_IO,
                message: format!("{}: {e}", dir.display()),
            })?;
            if corpus.is_empty() {
                return Err(Failure {
                    code: EXIT_IO,
                    message: format!("{}: no files to benchmark", dir.display()),
                });
            }
            let rows = bench::run_bench(&corpus, &codecs, &pass.params()).map_err(|e| Failure {
                code: EXIT_PARAMS,
                message: e.to_string(),
            })?;
            write_stdout(out, &bench::render_report(&rows, format))
        }
    }
}

/// Writes through a temporary file in the destination directory and renames
/// it into place, so a failed command leaves no partial output.
fn write_atomically(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Failure::io(path, e))?;
    tmp.write_all(bytes).map_err(|e| Failure::io(path, e))?;
    tmp.persist(path).map_err(|e| Failure::io(path, e.error))?;
    Ok(())
}
