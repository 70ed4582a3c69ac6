//! The `qmus` command.
//!
//! Exit codes: 0 success, 1 score errors, 2 I/O and usage errors, 3 the
//! melody enumeration cap was exceeded.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::perform::{self, PerformError, ENUM_CAP};
use crate::score::{self, Score};
use crate::util::format_sig;

pub const EXIT_OK: i32 = 0;
pub const EXIT_SCORE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_CAP: i32 = 3;

/// Environment variable overriding the enumeration cap.
pub const ENUM_CAP_VAR: &str = "QMUS_ENUM_CAP";

#[derive(Debug, Parser)]
#[command(name = "qmus", version, about = "Check, analyze, perform and render quantum scores")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Midi,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate a score; prints OK or one error per line.
    Check { input: PathBuf },
    /// Exact melody distribution of one voice as CSV.
    Analyze {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Voice to analyze; defaults to the first.
        #[arg(long)]
        voice: Option<String>,
    },
    /// Sample performances; one line per sample: seed, index, melody, probability.
    Perform {
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the score as CSV, MIDI or a text staff.
    Render {
        input: PathBuf,
        #[arg(long)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of sampled performances; each voice of each becomes a MIDI track.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
        #[arg(long)]
        voice: Option<String>,
    },
}

enum Failure {
    Score(Vec<String>),
    Io(String),
    Cap(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Score(_) => EXIT_SCORE,
            Failure::Io(_) => EXIT_IO,
            Failure::Cap(_) => EXIT_CAP,
        }
    }
}

impl From<PerformError> for Failure {
    fn from(e: PerformError) -> Self {
        match e {
            PerformError::EnumerationTooLarge { .. } => Failure::Cap(format!("{e}; try `qmus perform`")),
            e => Failure::Score(vec![e.to_string()]),
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                EXIT_IO
            } else {
                let _ = write!(stdout, "{e}");
                EXIT_OK
            };
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let code = f.code();
            let lines = match f {
                Failure::Score(lines) => lines,
                Failure::Io(m) | Failure::Cap(m) => vec![format!("qmus: {m}")],
            };
            for l in lines {
                let _ = writeln!(stderr, "{l}");
            }
            code
        }
    }
}

fn load(path: &Path) -> Result<Score, Failure> {
    let src = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    score::parse(&src).map_err(|errs| Failure::Score(errs.iter().map(ToString::to_string).collect()))
}

fn emit(bytes: &[u8], out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, bytes).map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display()))),
        None => stdout.write_all(bytes).map_err(|e| Failure::Io(format!("cannot write output: {e}"))),
    }
}

fn enum_cap() -> Result<u128, Failure> {
    match std::env::var(ENUM_CAP_VAR) {
        Err(std::env::VarError::NotPresent) => Ok(ENUM_CAP),
        Ok(v) => {
            v.trim().parse().map_err(|_| Failure::Io(format!("{ENUM_CAP_VAR}={v:?} is not a non-negative integer")))
        }
        Err(e) => Err(Failure::Io(format!("{ENUM_CAP_VAR}: {e}"))),
    }
}

fn pick_voice(score: &Score, voice: Option<String>) -> Result<String, Failure> {
    match voice {
        Some(v) if score.voice(&v).is_some() => Ok(v),
        Some(v) => Err(Failure::Score(vec![format!("no voice `{v}`")])),
        None => {
            score.voices.first().map(|v| v.id.clone()).ok_or_else(|| Failure::Score(vec!["score has no voices".into()]))
        }
    }
}

fn analysis_csv(score: &Score, voice: Option<String>) -> Result<String, Failure> {
    let v = pick_voice(score, voice)?;
    let md = perform::melody_distribution_capped(score, &v, enum_cap()?)?;
    Ok(perform::render_csv(&md))
}

fn execute(command: Command, stdout: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Check { input } => {
            load(&input)?;
            emit(b"OK\n", None, stdout)
        }
        Command::Analyze { input, out, voice } => {
            let s = load(&input)?;
            emit(analysis_csv(&s, voice)?.as_bytes(), out.as_deref(), stdout)
        }
        Command::Perform { input, seed, count, out } => {
            let s = load(&input)?;
            let mut log = String::new();
            for p in perform::sample_performance(&s, seed, count)? {
                log.push_str(&format!("{} {} {} {}\n", p.seed, p.index, p.melody(), format_sig(p.probability, 12)));
            }
            emit(log.as_bytes(), out.as_deref(), stdout)
        }
        Command::Render { input, format, out, seed, count, voice } => {
            let s = load(&input)?;
            let bytes = match format {
                Format::Csv => analysis_csv(&s, voice)?.into_bytes(),
                Format::Text => perform::render_text(&s).into_bytes(),
                Format::Midi => {
                    let samples = perform::sample_performance(&s, seed, count)?;
                    perform::render_midi(&samples, s.tempo_bpm).map_err(|e| Failure::Score(vec![e.to_string()]))?
                }
            };
            emit(&bytes, out.as_deref(), stdout)
        }
    }
}
