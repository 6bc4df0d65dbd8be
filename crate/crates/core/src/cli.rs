//! Command-line harness. Every output starts with `# <json config>` so a
//! result file names the exact run that produced it.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bitstream::BitStream;
use crate::cesaro::{self, AveragingSchedule, TimePattern};
use crate::error::{Error, Result};
use crate::fluctuations::{
    self, classify, gaussian_moments, semicircle_moments, FreeShiftModel, LawModel, MomentSequence, PatternModel,
    ShiftModel, DEFAULT_CLASSIFY_THRESHOLD,
};
use crate::koopman::{self, FiniteRankOperator};
use crate::laws::Law;
use crate::parse::{parse_timed, parse_word};
use crate::pauli;
use crate::shift::{self, TimedWord};
use crate::state::{MarginalState, SymbolicState};
use crate::word::{ObservableSymbol, Word};

pub const THREADS_ENV: &str = "FREECORR_THREADS";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Parser)]
#[command(name = "freecorr", version, about = "Asymptotic correlations of time-evolved observables")]
pub struct ExperimentConfig {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,

    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Subcommand)]
#[serde(tag = "subcommand", rename_all = "lowercase")]
pub enum Command {
    /// Expectation of a timed word such as `e(1) e(2) e(1) e(2)` in the shift state.
    Expect {
        #[arg(long)]
        word: String,
        /// `constant:0`, `periodic:0110`, `thue-morse`, `bernoulli:0.5:seed=42` or `file:<path>`.
        #[arg(long)]
        stream: String,
    },
    /// Cesàro averages of a shift word over growing horizons.
    Cesaro {
        /// A copy pattern like `1212` or a word like `e_1 e_2 e_1 e_2`.
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        stream: String,
        /// Comma-separated horizons T; every time runs over 0..=T.
        #[arg(long, value_delimiter = ',', required = true)]
        horizons: Vec<u64>,
        /// Drop grid points where two distinct times are closer than this.
        #[arg(long, default_value_t = 0)]
        min_gap: u64,
    },
    /// Closed-form expectation of a word under an independence law.
    Law {
        /// `tensor`, `free` or `koopman`.
        #[arg(long)]
        law: Law,
        /// A word such as `A_1 B_2 A*_1`.
        #[arg(long)]
        word: String,
        /// A marginal table file, or `symbolic`.
        #[arg(long)]
        marginals: String,
    },
    /// Doubling-map correlations against the koopman-law prediction.
    Koopman {
        /// Copy pattern such as `121`, one slot per operator.
        #[arg(long)]
        pattern: String,
        /// Comma-separated `.obs` files, one per pattern slot.
        #[arg(long, value_delimiter = ',', required = true)]
        ops: Vec<PathBuf>,
        /// Comma-separated horizons T.
        #[arg(long, value_delimiter = ',', required = true)]
        horizons: Vec<u64>,
    },
    /// Moments of normalized fluctuation sums.
    Fluct {
        /// `tensor`, `free`, `koopman`, `free-shift` or `shift:<stream>`.
        #[arg(long)]
        law: String,
        /// Number of summed copies.
        #[arg(long = "N")]
        n: u64,
        /// Moments 1..=max_moment are reported.
        #[arg(long)]
        max_moment: u32,
        /// Marginal table for the generator; defaults to a symmetric +-1 generator.
        #[arg(long)]
        marginals: Option<PathBuf>,
        #[arg(long, default_value = "e")]
        generator: String,
        /// Per-axis horizon for shift models.
        #[arg(long, default_value_t = 10_000)]
        horizon: u64,
        /// Grid-point cap per copy pattern for shift models.
        #[arg(long, default_value_t = 2_000_000)]
        max_grid: u64,
    },
    /// Cross-check the fast shift reduction against the Pauli representation.
    Verify {
        /// Number of random timed words.
        #[arg(long, default_value_t = 10_000)]
        words: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write a gnuplot script for a `cesaro`, `koopman` or `fluct` CSV.
    Plot {
        /// CSV written by `cesaro`, `koopman` or `fluct`.
        #[arg(long)]
        csv: PathBuf,
    },
}

/// One result cell.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format!("{v:?}"),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) => json!(v),
            Cell::Text(s) => json!(s),
            Cell::Empty => Value::Null,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Report {
    /// A single value printed bare.
    Scalar(Cell),
    Table {
        columns: Vec<&'static str>,
        rows: Vec<Vec<Cell>>,
        /// Extra `key value` facts, printed as trailing `#` lines in CSV.
        notes: Vec<(&'static str, String)>,
    },
    /// Verbatim text (plot scripts).
    Text(String),
}

/// Result of a run that completed but found a failed check (exit 1).
#[derive(Debug)]
pub struct RunOutcome {
    pub text: String,
    pub failed: bool,
}

impl ExperimentConfig {
    pub fn header(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn from_header(line: &str) -> Result<Self> {
        let body = line.strip_prefix('#').unwrap_or(line).trim();
        serde_json::from_str(body).map_err(|e| Error::parse(e.column(), body, e.to_string()))
    }
}

fn render(config: &ExperimentConfig, report: &Report) -> String {
    if let Report::Text(t) = report {
        return t.clone();
    }
    let mut out = String::new();
    match config.format {
        OutputFormat::Csv => {
            writeln!(out, "# {}", config.header()).unwrap();
            match report {
                Report::Scalar(c) => writeln!(out, "{}", c.csv()).unwrap(),
                Report::Table { columns, rows, notes } => {
                    writeln!(out, "{}", columns.join(",")).unwrap();
                    for row in rows {
                        let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                        writeln!(out, "{}", cells.join(",")).unwrap();
                    }
                    for (k, v) in notes {
                        writeln!(out, "# {k} {v}").unwrap();
                    }
                }
                Report::Text(_) => unreachable!(),
            }
        }
        OutputFormat::Json => {
            let mut doc = serde_json::Map::new();
            doc.insert("config".into(), serde_json::to_value(config).expect("config serializes"));
            match report {
                Report::Scalar(c) => {
                    doc.insert("value".into(), c.json());
                }
                Report::Table { columns, rows, notes } => {
                    let rows: Vec<Value> = rows
                        .iter()
                        .map(|r| {
                            Value::Object(columns.iter().zip(r).map(|(k, c)| (k.to_string(), c.json())).collect())
                        })
                        .collect();
                    doc.insert("rows".into(), Value::Array(rows));
                    for (k, v) in notes {
                        doc.insert(k.to_string(), json!(v));
                    }
                }
                Report::Text(_) => unreachable!(),
            }
            writeln!(out, "{}", Value::Object(doc)).unwrap();
        }
    }
    out
}

/// Copy labels of a pattern given as digits (`1212`) or as a word of `e`
/// letters (`e_1 e_2 e_1 e_2`, merged letters expand in place).
fn pattern_copies(text: &str) -> Result<Vec<u32>> {
    let trimmed = text.trim();
    if !trimmed.is_empty() && trimmed.chars().all(|c| c.is_ascii_digit()) {
        return trimmed
            .char_indices()
            .map(|(i, c)| match c.to_digit(10) {
                Some(0) | None => Err(Error::parse(i, c.to_string(), "copy labels start at 1")),
                Some(d) => Ok(d),
            })
            .collect();
    }
    let word = parse_word(trimmed)?;
    let mut copies = Vec::new();
    for letter in word.letters() {
        for sym in letter.symbols() {
            if sym.name() != "e" {
                return Err(Error::invalid(format!(
                    "shift patterns are built from the generator `e`, found `{sym}`"
                )));
            }
            copies.push(letter.copy());
        }
    }
    if copies.is_empty() {
        return Err(Error::parse(0, text, "empty pattern"));
    }
    Ok(copies)
}

fn complex_cells(z: Complex64) -> [Cell; 2] {
    [Cell::Float(z.re), Cell::Float(z.im)]
}

fn run_expect(word: &str, stream: &str) -> Result<Report> {
    let times = parse_timed(word)?;
    let stream: BitStream = stream.parse()?;
    Ok(Report::Scalar(Cell::Int(shift::expectation(&TimedWord(times), &stream) as i64)))
}

fn run_cesaro(pattern: &str, stream: &str, horizons: &[u64], min_gap: u64) -> Result<Report> {
    let copies = pattern_copies(pattern)?;
    let stream: BitStream = stream.parse()?;
    let pattern = TimePattern::from_copies(&copies);
    let canon = pattern.copies();
    let s = pattern.distinct_count();
    let ladder: Vec<AveragingSchedule> = horizons
        .iter()
        .map(|&t| AveragingSchedule::equal(t, s))
        .collect::<Result<_>>()?;
    let report = cesaro::convergence_report(
        &pattern,
        |times: &[i64]| {
            let word: smallvec::SmallVec<[i64; 16]> = canon.iter().map(|&c| times[(c - 1) as usize]).collect();
            shift::expectation_of(&word, &stream) as f64
        },
        &ladder,
        min_gap,
    )?;
    let rows = horizons
        .iter()
        .zip(&report.rows)
        .map(|(&t, r)| {
            vec![
                Cell::Int(t as i64),
                Cell::Float(r.estimate),
                r.delta.map_or(Cell::Empty, Cell::Float),
            ]
        })
        .collect();
    Ok(Report::Table {
        columns: vec!["T", "estimate", "delta"],
        rows,
        notes: vec![("non_cauchy", report.non_cauchy.to_string())],
    })
}

fn run_law(law: Law, word: &str, marginals: &str) -> Result<Report> {
    let word: Word = parse_word(word)?;
    if marginals == "symbolic" {
        let expr = law.moment(&word, &SymbolicState)?;
        return Ok(Report::Scalar(Cell::Text(expr.to_string())));
    }
    let state = MarginalState::<Complex64>::from_file(Path::new(marginals))?;
    let v = law.moment(&word, &state)?;
    Ok(Report::Table {
        columns: vec!["re", "im"],
        rows: vec![complex_cells(v).to_vec()],
        notes: vec![],
    })
}

fn run_koopman(pattern: &str, ops: &[PathBuf], horizons: &[u64]) -> Result<Report> {
    let copies = pattern_copies(pattern)?;
    let ops: Vec<FiniteRankOperator> = ops
        .iter()
        .map(|p| FiniteRankOperator::from_file(p))
        .collect::<Result<_>>()?;
    let s = TimePattern::from_copies(&copies).distinct_count();
    let mut rows = Vec::new();
    for &t in horizons {
        let check = koopman::asymptotic_check(&copies, &ops, &AveragingSchedule::equal(t, s)?)?;
        let mut row = vec![Cell::Int(t as i64)];
        row.extend(complex_cells(check.estimate));
        row.extend(complex_cells(check.prediction));
        row.push(Cell::Float(check.error));
        row.extend(complex_cells(check.full_grid));
        rows.push(row);
    }
    Ok(Report::Table {
        columns: vec![
            "T",
            "estimate_re",
            "estimate_im",
            "prediction_re",
            "prediction_im",
            "error",
            "full_grid_re",
            "full_grid_im",
        ],
        rows,
        notes: vec![],
    })
}

fn moment_rows<M: PatternModel>(model: &M, n: u64, max_moment: u32) -> Result<MomentSequence> {
    fluctuations::fluctuation_moments(model, n, max_moment)
}

#[allow(clippy::too_many_arguments)]
fn run_fluct(
    law: &str,
    n: u64,
    max_moment: u32,
    marginals: Option<&Path>,
    generator: &str,
    horizon: u64,
    max_grid: u64,
) -> Result<Report> {
    if max_moment == 0 {
        return Err(Error::invalid("--max-moment must be at least 1"));
    }
    if max_moment > fluctuations::MAX_MOMENT || n == 0 || n > fluctuations::MAX_COMBINATORIAL_N {
        return Err(Error::ModeBound {
            mode: "combinatorial",
            detail: format!(
                "need 1 <= N <= {} and m <= {}, got N = {n}, m = {max_moment}",
                fluctuations::MAX_COMBINATORIAL_N,
                fluctuations::MAX_MOMENT
            ),
        });
    }
    let seq = if law == "free-shift" {
        moment_rows(&FreeShiftModel, n, max_moment)?
    } else if let Some(stream) = law.strip_prefix("shift:") {
        let stream: BitStream = stream
            .parse()
            .map_err(|e| shift_spec_error(e, "shift:".len()))?;
        if n > fluctuations::MAX_SHIFT_N || max_moment > fluctuations::MAX_SHIFT_MOMENT {
            return Err(Error::ModeBound {
                mode: "shift",
                detail: format!(
                    "need N <= {} and m <= {}",
                    fluctuations::MAX_SHIFT_N,
                    fluctuations::MAX_SHIFT_MOMENT
                ),
            });
        }
        moment_rows(&ShiftModel::new(stream, horizon, max_grid), n, max_moment)?
    } else {
        let law: Law = law.parse()?;
        match marginals {
            None => moment_rows(&LawModel::bernoulli(law, max_moment), n, max_moment)?,
            Some(path) => {
                let state = MarginalState::<Complex64>::from_file(path)?;
                moment_rows(&LawModel::new(law, ObservableSymbol::new(generator), state)?, n, max_moment)?
            }
        }
    };
    let var = if seq.len() >= 2 { seq.moment(2) } else { 1.0 };
    let k = seq.len();
    let gauss = gaussian_moments(k, var)?;
    let semi = semicircle_moments(k, var)?;
    let rows = (1..=k)
        .map(|m| {
            vec![
                Cell::Int(m as i64),
                Cell::Float(seq.moment(m)),
                Cell::Float(gauss.moment(m)),
                Cell::Float(semi.moment(m)),
            ]
        })
        .collect();
    let mut notes = Vec::new();
    if let Ok(c) = classify(&seq, DEFAULT_CLASSIFY_THRESHOLD) {
        notes.push(("classification", serde_json::to_string(&c).expect("classification serializes")));
    }
    Ok(Report::Table {
        columns: vec!["m", "value", "gaussian_ref", "semicircle_ref"],
        rows,
        notes,
    })
}

fn shift_spec_error(e: Error, offset: usize) -> Error {
    match e {
        Error::Parse {
            position,
            token,
            message,
        } => Error::Parse {
            position: position + offset,
            token,
            message,
        },
        other => other,
    }
}

fn run_verify(words: usize, seed: u64) -> Result<(Report, bool)> {
    let check = pauli::cross_check(words, seed)?;
    let line = format!("{}/{} oracle matches", check.matches(), check.checked);
    Ok((Report::Scalar(Cell::Text(line)), !check.mismatches.is_empty()))
}

/// Gnuplot script for a CSV produced by `cesaro`, `koopman` or `fluct`.
pub fn emit_plot_script(csv_path: &Path, csv_text: &str) -> Result<String> {
    let header = csv_text
        .lines()
        .find(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .ok_or_else(|| Error::invalid("empty CSV"))?;
    let path = csv_path.display();
    let preamble = "set datafile separator ','\nset datafile commentschars '#'\nset key left top\n".to_string();
    let body = match header.trim() {
        "T,estimate,delta" => format!(
            "set logscale x\nset xlabel 'T'\nset ylabel 'estimate'\n\
             plot '{path}' using 1:2 every ::1 with linespoints title 'estimate'\n"
        ),
        h if h.starts_with("T,estimate_re,estimate_im,prediction_re,prediction_im,error") => format!(
            "set logscale x\nset xlabel 'T'\nset ylabel 'Re'\n\
             plot '{path}' using 1:2 every ::1 with linespoints title 'estimate', \\\n     \
             '{path}' using 1:4 every ::1 with lines title 'prediction'\n"
        ),
        "m,value,gaussian_ref,semicircle_ref" => format!(
            "set logscale y\nset xlabel 'm'\nset ylabel 'moment'\nset style data linespoints\n\
             plot '{path}' using 1:2 every ::1 title 'value', \\\n     \
             '{path}' using 1:3 every ::1 title 'gaussian', \\\n     \
             '{path}' using 1:4 every ::1 title 'semicircle'\n"
        ),
        other => return Err(Error::parse(0, other, "unknown CSV schema")),
    };
    Ok(preamble + &body)
}

fn dispatch(config: &ExperimentConfig) -> Result<(Report, bool)> {
    let ok = |r: Report| Ok((r, false));
    match &config.command {
        Command::Expect { word, stream } => ok(run_expect(word, stream)?),
        Command::Cesaro {
            pattern,
            stream,
            horizons,
            min_gap,
        } => ok(run_cesaro(pattern, stream, horizons, *min_gap)?),
        Command::Law { law, word, marginals } => ok(run_law(*law, word, marginals)?),
        Command::Koopman { pattern, ops, horizons } => ok(run_koopman(pattern, ops, horizons)?),
        Command::Fluct {
            law,
            n,
            max_moment,
            marginals,
            generator,
            horizon,
            max_grid,
        } => ok(run_fluct(
            law,
            *n,
            *max_moment,
            marginals.as_deref(),
            generator,
            *horizon,
            *max_grid,
        )?),
        Command::Verify { words, seed } => run_verify(*words, *seed),
        Command::Plot { csv } => {
            let text = std::fs::read_to_string(csv)?;
            ok(Report::Text(emit_plot_script(csv, &text)?))
        }
    }
}

/// Runs one configured experiment and renders its output. `failed` is set
/// when the run completed but a check inside it did not pass.
pub fn run(config: &ExperimentConfig) -> Result<RunOutcome> {
    let threads = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok());
    let (report, failed) = match threads {
        Some(n) => cesaro::with_threads(n, || dispatch(config))?,
        None => dispatch(config)?,
    };
    Ok(RunOutcome {
        text: render(config, &report),
        failed,
    })
}

/// Exit status for an error: 2 for bad input, 1 for failures while running.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. }
        | Error::InvalidArgument(_)
        | Error::ModeBound { .. }
        | Error::StreamIndex(_)
        | Error::EqualTimes(_)
        | Error::DuplicateTime(_)
        | Error::TooManyTimes(..) => 2,
        Error::MissingMoment(_) | Error::EmptyGrid(_) | Error::Io(_) => 1,
    }
}

/// Entry point shared by the binary and tests; returns the process exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn std::io::Write, stderr: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match ExperimentConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 {
                write!(stdout, "{e}")
            } else {
                write!(stderr, "{e}")
            };
            return code;
        }
    };
    match run(&config) {
        Ok(outcome) => {
            let written = match &config.output {
                Some(path) => std::fs::write(path, &outcome.text).map_err(Error::from),
                None => stdout.write_all(outcome.text.as_bytes()).map_err(Error::from),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return 1;
            }
            if outcome.failed {
                1
            } else {
                0
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = main_with_args(std::iter::once("freecorr").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn expect_prints_value_after_header() {
        let (code, out, _) = run_args(&["expect", "--word", "e(1) e(2) e(1) e(2)", "--stream", "constant:0"]);
        assert_eq!(code, 0);
        let lines: Vec<_> = out.lines().collect();
        assert!(lines[0].starts_with("# {"));
        assert_eq!(lines.last(), Some(&"1"));
    }

    #[test]
    fn header_round_trips() {
        let config = ExperimentConfig::try_parse_from([
            "freecorr", "cesaro", "--pattern", "1212", "--stream", "bernoulli:0.5:seed=3", "--horizons", "10,20",
        ])
        .unwrap();
        assert_eq!(ExperimentConfig::from_header(&format!("# {}", config.header())).unwrap(), config);
    }

    #[test]
    fn bad_stream_exits_two_with_position() {
        let (code, _, err) = run_args(&["expect", "--word", "e(1)", "--stream", "periodic:01x"]);
        assert_eq!(code, 2);
        assert!(err.contains("position 11"), "{err}");
        assert!(err.contains("`x`"), "{err}");
    }

    #[test]
    fn plot_rejects_unknown_and_empty() {
        let p = Path::new("x.csv");
        assert!(emit_plot_script(p, "").is_err());
        assert!(emit_plot_script(p, "# only a header\n").is_err());
        assert!(emit_plot_script(p, "a,b\n1,2\n").is_err());
        assert!(emit_plot_script(p, "T,estimate,delta\n10,1.0,\n").unwrap().contains("logscale x"));
        let fl = emit_plot_script(p, "m,value,gaussian_ref,semicircle_ref\n").unwrap();
        assert!(fl.contains("gaussian") && fl.contains("semicircle"));
    }
}
