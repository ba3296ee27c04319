//! `bifib` command-line front end.
//!
//! Exit codes: 0 on success (every verification passed or was skipped),
//! 1 when any verification failed, 2 for usage or request errors.

use std::io::Write;
use std::ops::RangeInclusive;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::cell::CellStructure;
use crate::decompose::{self, DecomposeOptions, ParityCase};
use crate::verify::{self, Grid, IdentityId, Status};
use crate::word::{self, Convention, Params};

/// Environment variable holding the global length cap.
pub const CAP_ENV: &str = "BIFIB_LENGTH_CAP";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "bifib", version, about = "Biperiodic Fibonacci words and their cell structures")]
pub struct Cli {
    /// Largest word, in symbols, any command may materialize.
    #[arg(long, global = true, env = CAP_ENV, default_value_t = word::DEFAULT_LENGTH_CAP,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub cap: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print f(a,b,n), or t / I with --word.
    Gen(GenArgs),
    /// Print the overlapping cell structure of f(a,b,n).
    Decompose(DecomposeArgs),
    /// Check identities by brute force over a parameter grid.
    Verify(VerifyArgs),
    /// Lengths, r/s, parity cases and cell counts per level.
    Stats(StatsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WordKind {
    F,
    T,
    I,
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub a: u32,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub b: u32,
    /// Classical initial conditions f(0)=1, f(1)=0 (a = b = 1 only).
    #[arg(long)]
    pub classical: bool,
}

impl ParamArgs {
    fn params(&self) -> Result<Params, String> {
        let convention = if self.classical {
            Convention::ClassicalSwapped
        } else {
            Convention::Standard
        };
        Params::with_convention(self.a, self.b, convention).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long)]
    pub n: u32,
    #[arg(long, value_enum, default_value_t = WordKind::F)]
    pub word: WordKind,
    /// Print only the length.
    #[arg(long)]
    pub length_only: bool,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long)]
    pub n: u32,
    /// Further refinement steps applied to every cell.
    #[arg(long, default_value_t = 0)]
    pub depth: u32,
    /// Replace I cells by their overlapping f/t copies.
    #[arg(long)]
    pub expand_i: bool,
    /// Both-odd case: apply the step twice (level drop 6).
    #[arg(long)]
    pub compose_twice: bool,
    #[arg(long, value_enum, default_value_t = Format::Structured)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Inclusive range "lo..hi" or a single value.
    #[arg(long, value_parser = parse_range)]
    pub a: RangeInclusive<u32>,
    #[arg(long, value_parser = parse_range)]
    pub b: RangeInclusive<u32>,
    #[arg(long)]
    pub n_max: Option<u32>,
    /// Skip n once f(n) is longer than this.
    #[arg(long, default_value_t = verify::DEFAULT_GRID_CAP)]
    pub length_cap: u64,
    /// Comma-separated identity names; all when omitted.
    #[arg(long, value_delimiter = ',')]
    pub ids: Option<Vec<IdentityId>>,
    /// Use the classical initial conditions at a = b = 1.
    #[arg(long)]
    pub classical: bool,
    #[arg(long, value_enum, default_value_t = Format::Structured)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 12)]
    pub n_max: u32,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    pub format: Format,
}

/// Parses `lo..hi` (inclusive) or a single value.
pub fn parse_range(text: &str) -> Result<RangeInclusive<u32>, String> {
    let value = |s: &str| {
        s.trim()
            .parse::<u32>()
            .map_err(|e| format!("{s:?}: {e}"))
            .and_then(|v| if v == 0 { Err("values must be >= 1".to_string()) } else { Ok(v) })
    };
    let (lo, hi) = match text.split_once("..") {
        Some((lo, hi)) => (value(lo)?, value(hi)?),
        None => {
            let v = value(text)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range {text:?}"));
    }
    Ok(lo..=hi)
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Gen(args) => cmd_gen(args, cli.cap, out),
        Command::Decompose(args) => cmd_decompose(args, cli.cap, out),
        Command::Verify(args) => cmd_verify(args, cli.cap, out),
        Command::Stats(args) => cmd_stats(args, cli.cap, out),
    };
    match result {
        Ok(code) => code,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_USAGE
        }
    }
}

type CmdResult = Result<i32, String>;

fn io(e: std::io::Error) -> String {
    format!("write failed: {e}")
}

#[derive(Serialize)]
struct GenRecord<'a> {
    a: u32,
    b: u32,
    n: u32,
    convention: Convention,
    word: &'a str,
    length: u64,
    symbols: Option<String>,
}

pub fn cmd_gen(args: &GenArgs, cap: u64, out: &mut dyn Write) -> CmdResult {
    let params = args.params.params()?;
    let n = args.n;
    let length = match args.word {
        WordKind::F | WordKind::T => word::length_f(&params, n),
        WordKind::I => word::length_i(&params, n),
    }
    .map_err(|e| e.to_string())?;
    let symbols = if args.length_only {
        None
    } else {
        let w = match args.word {
            WordKind::F => word::word_f_capped(&params, n, cap),
            WordKind::T => word::word_t_capped(&params, n, cap),
            WordKind::I => word::word_i_capped(&params, n, cap),
        }
        .map_err(|e| e.to_string())?;
        Some(w.to_string())
    };
    match args.format {
        Format::Plain => match &symbols {
            Some(s) => writeln!(out, "{s}"),
            None => writeln!(out, "{length}"),
        },
        Format::Structured => {
            let record = GenRecord {
                a: params.a(),
                b: params.b(),
                n,
                convention: params.convention(),
                word: match args.word {
                    WordKind::F => "f",
                    WordKind::T => "t",
                    WordKind::I => "I",
                },
                length,
                symbols,
            };
            writeln!(out, "{}", serde_json::to_string(&record).expect("serializes"))
        }
    }
    .map_err(io)?;
    Ok(EXIT_OK)
}

/// Builds the structure `decompose` prints for these arguments.
pub fn build_structure(args: &DecomposeArgs, cap: u64) -> Result<CellStructure, String> {
    let params = args.params.params()?;
    let length = word::length_f(&params, args.n).map_err(|e| e.to_string())?;
    if length > cap {
        return Err(word::WordError::CapExceeded { length, cap }.to_string());
    }
    let base = decompose::decompose(
        &params,
        args.n,
        DecomposeOptions {
            expand_i: false,
            compose_twice: args.compose_twice,
        },
    )
    .map_err(|e| e.to_string())?;
    let refined = decompose::refine(&base, args.depth).map_err(|e| e.to_string())?;
    if args.expand_i {
        crate::cell::expand_all_i(&refined).map_err(|e| e.to_string())
    } else {
        Ok(refined)
    }
}

const DIAGRAM_WIDTH: u64 = 60;

fn write_diagram(structure: &CellStructure, out: &mut dyn Write) -> std::io::Result<()> {
    let p = &structure.params;
    writeln!(
        out,
        "f(a={}, b={}, n={}) [{}]: {} symbols, {} cells, period {}{}",
        p.a(),
        p.b(),
        structure.root_level,
        p.convention(),
        structure.parent_length,
        structure.cells.len(),
        structure.period,
        if structure.self_similar {
            ""
        } else {
            ", not yet self-similar (compose twice)"
        }
    )?;
    let total = structure.parent_length.max(1);
    for (i, cell) in structure.cells.iter().enumerate() {
        let start = cell.offset * DIAGRAM_WIDTH / total;
        let end = (cell.end() * DIAGRAM_WIDTH).div_ceil(total).max(start + 1);
        let mut bar = " ".repeat(start as usize);
        if end - start == 1 {
            bar.push('|');
        } else {
            bar.push('[');
            bar.push_str(&"=".repeat((end - start - 2) as usize));
            bar.push(']');
        }
        let label = format!("{}({})", cell.kind, cell.level);
        writeln!(
            out,
            "{i:>5}  {label:<7} {:>10} {:>10}  {bar}",
            cell.offset, cell.length
        )?;
    }
    Ok(())
}

pub fn cmd_decompose(args: &DecomposeArgs, cap: u64, out: &mut dyn Write) -> CmdResult {
    let structure = build_structure(args, cap)?;
    match args.format {
        Format::Structured => writeln!(out, "{}", structure.to_json()).map_err(io)?,
        Format::Plain => write_diagram(&structure, out).map_err(io)?,
    }
    Ok(EXIT_OK)
}

pub fn cmd_verify(args: &VerifyArgs, cap: u64, out: &mut dyn Write) -> CmdResult {
    let grid = Grid {
        a: args.a.clone(),
        b: args.b.clone(),
        n_max: args.n_max,
        length_cap: args.length_cap.min(cap),
        ids: args
            .ids
            .clone()
            .unwrap_or_else(|| IdentityId::ALL.to_vec()),
        classical_unit: args.classical,
    };
    let reports = verify::verify_grid(&grid);
    for report in &reports {
        match args.format {
            Format::Structured => writeln!(out, "{}", report.to_json_line()),
            Format::Plain => {
                let status = match report.status {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                    Status::SkippedPrecondition => "SKIP",
                };
                let p = &report.params;
                writeln!(
                    out,
                    "{status}  {:<17} a={} b={} n={:<3} {:<17} {}",
                    report.identity.name(),
                    p.a(),
                    p.b(),
                    report.n,
                    p.convention(),
                    report.detail.as_deref().unwrap_or("")
                )
            }
        }
        .map_err(io)?;
    }
    let (pass, fail, skip) = verify::tally(&reports);
    if args.format == Format::Plain {
        writeln!(out, "{pass} passed, {fail} failed, {skip} skipped").map_err(io)?;
    }
    Ok(if fail > 0 { EXIT_FAILED } else { EXIT_OK })
}

#[derive(Serialize)]
struct StatsRow {
    n: u32,
    length: u64,
    r: u32,
    s: u32,
    case: ParityCase,
    row: u32,
    min_n: u32,
    cells: Option<usize>,
}

#[derive(Serialize)]
struct StatsRecord {
    a: u32,
    b: u32,
    convention: Convention,
    period: u32,
    rows: Vec<StatsRow>,
}

pub fn cmd_stats(args: &StatsArgs, cap: u64, out: &mut dyn Write) -> CmdResult {
    let params = args.params.params()?;
    let mut rows = Vec::new();
    for n in 0..=args.n_max {
        let Ok(length) = word::length_f(&params, n) else {
            break;
        };
        let pair = params.rs(n);
        let case = ParityCase::of(&params, n);
        let min_n = case.min_level(&params);
        let cells = if n >= min_n && length <= cap {
            decompose::decompose(&params, n, DecomposeOptions::default())
                .ok()
                .map(|s| s.cells.len())
        } else {
            None
        };
        rows.push(StatsRow {
            n,
            length,
            r: pair.r,
            s: pair.s,
            case,
            row: case.row(),
            min_n,
            cells,
        });
    }
    let period = decompose::period_l(&params);
    match args.format {
        Format::Structured => {
            let record = StatsRecord {
                a: params.a(),
                b: params.b(),
                convention: params.convention(),
                period,
                rows,
            };
            writeln!(out, "{}", serde_json::to_string(&record).expect("serializes")).map_err(io)?;
        }
        Format::Plain => {
            writeln!(
                out,
                "a={} b={} [{}] period {}",
                params.a(),
                params.b(),
                params.convention(),
                period
            )
            .map_err(io)?;
            writeln!(out, "{:>4} {:>22} {:>4} {:>4} {:>4} {:>6} {:>6}", "n", "L(n)", "r", "s", "row", "min n", "cells")
                .map_err(io)?;
            for row in &rows {
                let cells = row.cells.map_or("-".to_string(), |c| c.to_string());
                writeln!(
                    out,
                    "{:>4} {:>22} {:>4} {:>4} {:>4} {:>6} {:>6}",
                    row.n, row.length, row.r, row.s, row.row, row.min_n, cells
                )
                .map_err(io)?;
            }
        }
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..4").unwrap(), 2..=4);
        assert_eq!(parse_range("3").unwrap(), 3..=3);
        assert!(parse_range("4..2").is_err());
        assert!(parse_range("0..2").is_err());
        assert!(parse_range("x").is_err());
    }
}
