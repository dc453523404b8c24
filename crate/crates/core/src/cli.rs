//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage, parse or cap errors, 2 when the
//! automaton (or the given word) does not synchronize.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::automaton::{Automaton, Word};
use crate::corpus::{self, Family, GeneratorSpec, ReferenceRow};
use crate::error::Error;
use crate::heuristics::{self, HeuristicKind, SyncResult};
use crate::oracle::{self, OracleResult};
use crate::powerset;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NOT_SYNC: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "syncword",
    version,
    about = "Low-weight synchronizing words for weighted automata"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Tsv,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Automaton file, or a built-in: `paper:A`, `paper:B`, `cerny:<n>`
    pub input: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize a synchronizing word with the greedy heuristic
    Sync {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        heuristic: HeuristicKind,
        /// Print the per-step trace
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check whether a word synchronizes the automaton
    Verify {
        #[command(flatten)]
        input: Input,
        /// Concatenated letters; `-` or an empty string for the empty word
        word: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Exact minimum-weight and/or minimum-length synchronizing word
    Exact {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        weight: bool,
        #[arg(long)]
        length: bool,
        /// Largest state count to search exhaustively
        #[arg(long, default_value_t = oracle::DEFAULT_CAP)]
        cap: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Decide whether the automaton is synchronizing
    Check {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run every heuristic for a range of m
    Table {
        #[command(flatten)]
        input: Input,
        /// `2..6` (inclusive) or a list such as `2,3,5`
        #[arg(long, default_value = "2..6")]
        m: String,
        #[arg(long, value_delimiter = ',', default_value = "H1,H2,H3,H4")]
        heuristics: Vec<HeuristicKind>,
        /// Compare against the bundled reference table
        #[arg(long)]
        compare: bool,
        /// Compare against this reference TSV instead of the bundled one
        #[arg(long)]
        reference: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Emit an automaton file: `random`, `cerny`, `paper:A` or `paper:B`
    Gen {
        family: String,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        letters: usize,
        #[arg(long, default_value_t = 1)]
        max_weight: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Emit Graphviz DOT instead of the automaton format
        #[arg(long)]
        emit_dot: bool,
    },
    /// Dump the merging-word table as `subset<TAB>word<TAB>weight`
    DumpWords {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        m: usize,
    },
}

/// Resolves a built-in name or reads and parses a file.
pub fn load_automaton(source: &str) -> Result<Automaton, Error> {
    match source {
        "paper:A" => Ok(corpus::paper_automaton_a()),
        "paper:B" => Ok(corpus::paper_automaton_b()),
        _ => {
            if let Some(n) = source.strip_prefix("cerny:") {
                let n = n
                    .parse()
                    .map_err(|_| Error::InvalidSpec(format!("bad state count in `{source}`")))?;
                return corpus::cerny(n, (1, 1));
            }
            let text = fs::read_to_string(source)
                .map_err(|e| Error::InvalidSpec(format!("cannot read `{source}`: {e}")))?;
            Ok(Automaton::parse(&text)?)
        }
    }
}

#[derive(Debug, Serialize)]
struct SyncRow<'a> {
    m: usize,
    heuristic: HeuristicKind,
    word: String,
    length: usize,
    weight: u64,
    verified: bool,
    synchronized: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    steps: Option<Vec<StepRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reference: Option<&'a ReferenceRow>,
}

#[derive(Debug, Serialize)]
struct StepRow {
    subset: Vec<usize>,
    word: String,
    before: Vec<usize>,
    after: Vec<usize>,
}

impl Serialize for ReferenceRow {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ReferenceRow", 3)?;
        st.serialize_field("word", &self.word)?;
        st.serialize_field("length", &self.length)?;
        st.serialize_field("weight", &self.weight)?;
        st.end()
    }
}

fn sync_row<'a>(
    aut: &Automaton,
    m: usize,
    kind: HeuristicKind,
    r: &SyncResult,
    trace: bool,
) -> SyncRow<'a> {
    SyncRow {
        m,
        heuristic: kind,
        word: aut.format_word(&r.word),
        length: r.length,
        weight: r.weight,
        verified: r.synchronized && aut.verify_sync_word(&r.word).is_some(),
        synchronized: r.synchronized,
        steps: trace.then(|| {
            r.steps
                .iter()
                .map(|s| StepRow {
                    subset: s.subset.to_vec(),
                    word: aut.format_word(&s.word),
                    before: s.before.to_vec(),
                    after: s.after.to_vec(),
                })
                .collect()
        }),
        reference: None,
    }
}

fn json_line<T: Serialize>(out: &mut dyn Write, value: &T) -> std::io::Result<()> {
    writeln!(
        out,
        "{}",
        serde_json::to_string(value).expect("serializable")
    )
}

fn display_word(w: &str) -> &str {
    if w.is_empty() {
        "-"
    } else {
        w
    }
}

/// Parses `args` (including the program name) and runs the command. Returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("internal check failed: {0}")]
    SelfCheck(String),
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Sync {
            input,
            m,
            heuristic,
            trace,
            format,
        } => cmd_sync(
            &load_automaton(&input.input)?,
            m,
            heuristic,
            trace,
            format,
            out,
        ),
        Command::Verify {
            input,
            word,
            format,
        } => {
            let aut = load_automaton(&input.input)?;
            let word = aut.parse_word(&word)?;
            cmd_verify(&aut, &word, format, out)
        }
        Command::Exact {
            input,
            weight,
            length,
            cap,
            format,
        } => {
            let aut = load_automaton(&input.input)?;
            let both = !weight && !length;
            cmd_exact(&aut, weight || both, length || both, cap, format, out)
        }
        Command::Check { input, format } => {
            let aut = load_automaton(&input.input)?;
            let sync = aut.is_synchronizing();
            match format {
                Format::Json => json_line(out, &serde_json::json!({ "synchronizing": sync }))?,
                Format::Text | Format::Tsv => writeln!(out, "{sync}")?,
            }
            Ok(if sync { EXIT_OK } else { EXIT_NOT_SYNC })
        }
        Command::Table {
            input,
            m,
            heuristics,
            compare,
            reference,
            format,
        } => {
            let aut = load_automaton(&input.input)?;
            let m_values = heuristics::parse_m_range(&m).map_err(Error::InvalidSpec)?;
            let reference = match reference {
                Some(path) => Some(corpus::parse_reference_table(
                    &fs::read_to_string(&path).map_err(|e| {
                        Error::InvalidSpec(format!("cannot read `{}`: {e}", path.display()))
                    })?,
                )?),
                None if compare => Some(corpus::reference_table()),
                None => None,
            };
            cmd_table(
                &aut,
                &m_values,
                &heuristics,
                reference.as_deref(),
                format,
                out,
            )
        }
        Command::Gen {
            family,
            n,
            letters,
            max_weight,
            seed,
            emit_dot,
        } => {
            let spec = GeneratorSpec {
                family: family.parse::<Family>()?,
                n,
                letters,
                max_weight,
                seed,
            };
            let aut = corpus::generate(&spec)?;
            if emit_dot {
                write!(out, "{}", aut.to_dot())?;
            } else {
                write!(out, "{}", aut.serialize())?;
            }
            Ok(EXIT_OK)
        }
        Command::DumpWords { input, m } => {
            let aut = load_automaton(&input.input)?;
            let table = powerset::compute_words(&aut, m)?;
            write!(out, "{}", table.to_tsv(&aut))?;
            Ok(EXIT_OK)
        }
    }
}

fn cmd_sync(
    aut: &Automaton,
    m: usize,
    kind: HeuristicKind,
    trace: bool,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let result = heuristics::approximate_weight_synch(aut, m, kind)?;
    let row = sync_row(aut, m, kind, &result, trace);
    if row.synchronized && !row.verified {
        return Err(CliError::SelfCheck(format!(
            "word {} does not synchronize",
            row.word
        )));
    }
    match format {
        Format::Json => json_line(out, &row)?,
        Format::Tsv => {
            writeln!(out, "m\theuristic\tword\tlength\tweight\tverified")?;
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}",
                row.m, row.heuristic, row.word, row.length, row.weight, row.verified
            )?;
        }
        Format::Text => {
            writeln!(out, "m: {m}")?;
            writeln!(out, "heuristic: {kind}")?;
            writeln!(out, "word: {}", display_word(&row.word))?;
            writeln!(out, "length: {}", row.length)?;
            writeln!(out, "weight: {}", row.weight)?;
            writeln!(out, "synchronized: {}", row.synchronized)?;
            writeln!(out, "verified: {}", row.verified)?;
            if trace {
                for (i, s) in result.steps.iter().enumerate() {
                    writeln!(
                        out,
                        "step {}: P={:?} w={} T={:?} -> {:?}",
                        i + 1,
                        s.subset,
                        aut.format_word(&s.word),
                        s.before,
                        s.after
                    )?;
                }
            }
        }
    }
    Ok(if row.synchronized {
        EXIT_OK
    } else {
        EXIT_NOT_SYNC
    })
}

fn cmd_verify(
    aut: &Automaton,
    word: &Word,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let target = aut.verify_sync_word(word);
    let text = aut.format_word(word);
    let (length, weight) = (word.len(), aut.word_weight(word));
    match format {
        Format::Json => json_line(
            out,
            &serde_json::json!({
                "word": text,
                "synchronizing": target.is_some(),
                "target": target,
                "length": length,
                "weight": weight,
            }),
        )?,
        Format::Tsv => {
            writeln!(out, "word\tsynchronizing\ttarget\tlength\tweight")?;
            let t = target.map_or("-".to_string(), |t| t.to_string());
            writeln!(
                out,
                "{}\t{}\t{t}\t{length}\t{weight}",
                display_word(&text),
                target.is_some()
            )?;
        }
        Format::Text => {
            writeln!(out, "{}", target.is_some())?;
            if let Some(t) = target {
                writeln!(out, "target: {t}")?;
            }
            writeln!(out, "length: {length}")?;
            writeln!(out, "weight: {weight}")?;
        }
    }
    Ok(if target.is_some() {
        EXIT_OK
    } else {
        EXIT_NOT_SYNC
    })
}

fn cmd_exact(
    aut: &Automaton,
    by_weight: bool,
    by_length: bool,
    cap: usize,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let mut queries: Vec<(&str, Option<OracleResult>)> = Vec::new();
    if by_weight {
        queries.push(("weight", oracle::min_weight_sync(aut, cap)?));
    }
    if by_length {
        queries.push(("length", oracle::min_length_sync(aut, cap)?));
    }
    if format == Format::Tsv {
        writeln!(out, "query\tvalue\tword\tlength\tweight")?;
    }
    let mut synchronizing = true;
    for (query, result) in &queries {
        let Some(r) = result else {
            synchronizing = false;
            match format {
                Format::Json => json_line(
                    out,
                    &serde_json::json!({ "query": query, "synchronizing": false }),
                )?,
                Format::Tsv => writeln!(out, "{query}\t-\t-\t-\t-")?,
                Format::Text => writeln!(out, "min {query}: not synchronizing")?,
            }
            continue;
        };
        if aut.verify_sync_word(&r.word).is_none() {
            return Err(CliError::SelfCheck(
                "oracle witness does not synchronize".into(),
            ));
        }
        let word = aut.format_word(&r.word);
        let (length, weight) = (r.word.len(), aut.word_weight(&r.word));
        match format {
            Format::Json => json_line(
                out,
                &serde_json::json!({
                    "query": query,
                    "synchronizing": true,
                    "value": r.value,
                    "word": word,
                    "length": length,
                    "weight": weight,
                }),
            )?,
            Format::Tsv => writeln!(
                out,
                "{query}\t{}\t{}\t{length}\t{weight}",
                r.value,
                display_word(&word)
            )?,
            Format::Text => writeln!(
                out,
                "min {query}: {} (word {}, length {length}, weight {weight})",
                r.value,
                display_word(&word)
            )?,
        }
    }
    Ok(if synchronizing {
        EXIT_OK
    } else {
        EXIT_NOT_SYNC
    })
}

fn cmd_table(
    aut: &Automaton,
    m_values: &[usize],
    kinds: &[HeuristicKind],
    reference: Option<&[ReferenceRow]>,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let grid = heuristics::run_grid(aut, m_values, kinds)?;
    let bound = aut.sync_weight_bound();
    let mut rows = Vec::with_capacity(grid.len());
    for g in &grid {
        let mut row = sync_row(aut, g.m, g.kind, &g.result, false);
        if row.synchronized && !row.verified {
            return Err(CliError::SelfCheck(format!(
                "word {} does not synchronize",
                row.word
            )));
        }
        if row.synchronized && row.weight > bound {
            return Err(CliError::SelfCheck(format!(
                "weight {} exceeds the bound {bound}",
                row.weight
            )));
        }
        row.reference = reference.and_then(|refs| {
            refs.iter()
                .find(|r| r.m == g.m && r.heuristic == g.kind.to_string())
        });
        rows.push(row);
    }

    match format {
        Format::Json => {
            for row in &rows {
                json_line(out, row)?;
            }
        }
        Format::Tsv => {
            write!(out, "heuristic\tm\tword\tlength\tweight\tverified")?;
            if reference.is_some() {
                write!(
                    out,
                    "\tref_word\tref_length\tref_weight\tsame_word\tweight_diff"
                )?;
            }
            writeln!(out)?;
            for row in &rows {
                write!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t{}",
                    row.heuristic,
                    row.m,
                    display_word(&row.word),
                    row.length,
                    row.weight,
                    row.verified
                )?;
                if reference.is_some() {
                    match row.reference {
                        Some(r) => write!(
                            out,
                            "\t{}\t{}\t{}\t{}\t{}",
                            r.word,
                            r.length,
                            r.weight,
                            r.word == row.word,
                            row.weight as i64 - r.weight as i64
                        )?,
                        None => write!(out, "\t-\t-\t-\t-\t-")?,
                    }
                }
                writeln!(out)?;
            }
        }
        Format::Text => {
            let width = rows.iter().map(|r| r.word.len()).max().unwrap_or(0).max(4);
            write!(
                out,
                "{:<4} {:>2}  {:<width$}  {:>6} {:>6} {:>8}",
                "heur", "m", "word", "length", "weight", "verified"
            )?;
            if reference.is_some() {
                write!(out, "  {:>10} {:>9}", "ref_weight", "same_word")?;
            }
            writeln!(out)?;
            for row in &rows {
                write!(
                    out,
                    "{:<4} {:>2}  {:<width$}  {:>6} {:>6} {:>8}",
                    row.heuristic.to_string(),
                    row.m,
                    display_word(&row.word),
                    row.length,
                    row.weight,
                    row.verified
                )?;
                if reference.is_some() {
                    match row.reference {
                        Some(r) => write!(out, "  {:>10} {:>9}", r.weight, r.word == row.word)?,
                        None => write!(out, "  {:>10} {:>9}", "-", "-")?,
                    }
                }
                writeln!(out)?;
            }
            writeln!(out, "bound k(n-1)C(n,2) = {bound}")?;
        }
    }
    let all_sync = rows.iter().all(|r| r.synchronized);
    Ok(if all_sync { EXIT_OK } else { EXIT_NOT_SYNC })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("syncword").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn verify_subcommand() {
        let (code, out, _) = run_str(&["verify", "paper:A", "baacb"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("true\n"));
        assert!(out.contains("weight: 10"));
        let (code, out, _) = run_str(&["verify", "paper:A", "-"]);
        assert_eq!(code, 2);
        assert!(out.starts_with("false\n"));
        let (code, _, err) = run_str(&["verify", "paper:A", "abz"]);
        assert_eq!(code, 1);
        assert!(err.contains("`z`"));
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_str(&["sync", "paper:A"]).0, 1);
        assert_eq!(
            run_str(&["sync", "paper:A", "--m", "2", "--heuristic", "H9"]).0,
            1
        );
        assert_eq!(
            run_str(&["sync", "paper:A", "--m", "9", "--heuristic", "H1"]).0,
            1
        );
        assert_eq!(run_str(&["frobnicate"]).0, 1);
        assert_eq!(run_str(&["check", "/nonexistent/file.wfa"]).0, 1);
        assert_eq!(run_str(&["check", "cerny:x"]).0, 1);
        let (code, out, _) = run_str(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("Usage"));
    }

    #[test]
    fn sync_json_and_text_agree() {
        let (code, json, _) = run_str(&[
            "sync",
            "paper:A",
            "--m",
            "2",
            "--heuristic",
            "H1",
            "--format",
            "json",
        ]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(json.trim()).unwrap();
        let (_, text, _) = run_str(&["sync", "paper:A", "--m", "2", "--heuristic", "H1"]);
        assert!(text.contains(&format!("weight: {}\n", v["weight"])));
        assert!(text.contains(&format!("length: {}\n", v["length"])));
        assert!(text.contains(&format!("word: {}\n", v["word"].as_str().unwrap())));
        assert!(v["weight"].as_u64().unwrap() <= 108);
        assert_eq!(v["verified"], true);
    }

    #[test]
    fn sync_trace() {
        let (code, out, _) = run_str(&[
            "sync",
            "cerny:4",
            "--m",
            "2",
            "--heuristic",
            "H4",
            "--trace",
        ]);
        assert_eq!(code, 0);
        assert!(out.contains("step 1: P="));
    }

    #[test]
    fn exact_cap() {
        let (code, _, err) = run_str(&["exact", "cerny:20", "--length"]);
        assert_eq!(code, 1);
        assert!(err.contains("cap"));
        let (code, out, _) = run_str(&["exact", "cerny:5", "--length", "--format", "tsv"]);
        assert_eq!(code, 0);
        assert!(out.contains("length\t16\t"));
    }

    #[test]
    fn gen_builtin_passthrough_and_dot() {
        let (code, out, _) = run_str(&["gen", "paper:B"]);
        assert_eq!(code, 0);
        assert_eq!(out, corpus::PAPER_B_WFA);
        let (_, dot, _) = run_str(&["gen", "cerny", "--n", "3", "--emit-dot"]);
        assert!(dot.starts_with("digraph"));
        assert_eq!(run_str(&["gen", "random", "--n", "0"]).0, 1);
        assert_eq!(run_str(&["gen", "bogus"]).0, 1);
    }

    #[test]
    fn dump_words() {
        let (code, out, _) = run_str(&["dump-words", "paper:A", "--m", "2"]);
        assert_eq!(code, 0);
        assert!(out.contains("0,3\tb\t1\n"));
        assert_eq!(out.lines().count(), 6);
    }
}
