use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Read, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use tenhundred::analyzer::{classify_stream, coverage, rank_frequency, RankFrequency, RankMode, Underivable};
use tenhundred::distfit::{fit_report_at, CountSample, FitReport, DEFAULT_THRESHOLD};
use tenhundred::morphology::{Derivation, Rule};
use tenhundred::textpipe::normalize_bytes;
use tenhundred::{data, DataPaths, Engine, FitError, InputError, LoadError, Verdict};
use tenhundred_service::ServiceConfig;

#[derive(Parser)]
#[command(name = "tenhundred", version, about = "Check and analyze text written with the ten hundred most used words")]
struct Cli {
    /// Word-list file (default: bundled list, or $TENHUNDRED_DATA_DIR/wordlist.tsv)
    #[arg(long, global = true)]
    word_list: Option<PathBuf>,
    /// Irregular-forms table
    #[arg(long, global = true)]
    irregular: Option<PathBuf>,
    /// Contraction table
    #[arg(long, global = true)]
    contractions: Option<PathBuf>,
    /// Directory holding wordlist.tsv, irregular.tsv and contractions.tsv
    #[arg(long, global = true, env = data::DATA_DIR_ENV)]
    data_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
    Plain,
}

#[derive(Subcommand)]
enum Command {
    /// Flag words that are not allowed. Exit 0: all allowed, 1: extra words, 2: rejected words
    Check {
        /// Input files; `-` reads standard input
        #[arg(default_value = "-")]
        inputs: Vec<PathBuf>,
    },
    /// Rule histograms, coverage and rank-frequency tables for a corpus
    Analyze {
        #[arg(default_value = "-")]
        inputs: Vec<PathBuf>,
        /// Directory for histogram.json, rank_surface.tsv and rank_lemmatized.tsv
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Fit power law and exponential to a rank-frequency table and compare them
    Fit {
        /// Rank-frequency TSV (`rank<TAB>term<TAB>count`); `-` reads standard input
        #[arg(default_value = "-")]
        table: PathBuf,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD, value_parser = parse_threshold)]
        threshold: f64,
        /// Fixed cutoff instead of the KS-selected one
        #[arg(long)]
        xmin: Option<u64>,
    },
    /// List every form a listed word licenses (or, with --reverse, how a form is derived)
    Expand {
        word: String,
        #[arg(long)]
        reverse: bool,
    },
    /// Export the closure as `surface<TAB>root<TAB>rule`
    Closure,
    /// Run the HTTP checking service
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        serve_addr: SocketAddr,
        #[arg(long, default_value_t = tenhundred_service::DEFAULT_MAX_BODY)]
        max_body: usize,
        /// Allowed CORS origin; repeatable. Any origin when absent
        #[arg(long)]
        allow_origin: Vec<String>,
    },
}

fn parse_threshold(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if t > 0.0 && t < 1.0 {
        Ok(t)
    } else {
        Err("threshold must lie strictly between 0 and 1".into())
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Input(#[from] InputError),
    #[error("corpus contains no classifiable tokens")]
    EmptyCorpus,
    #[error("{0}")]
    Fit(#[from] FitError),
    #[error("`{0}` is not on the word list")]
    NotListed(String),
    #[error("{0}")]
    Load(#[from] LoadError),
    #[error("{0}")]
    Io(#[from] io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 3,
            CliError::EmptyCorpus => 4,
            CliError::Fit(_) => 5,
            CliError::NotListed(_) => 6,
            CliError::Io(_) => 7,
            CliError::Load(_) => 8,
        }
    }
}

fn read_input(path: &Path) -> Result<Vec<u8>, InputError> {
    let io_err = |source| InputError::Io {
        path: path.to_path_buf(),
        source,
    };
    if path == Path::new("-") {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf).map_err(io_err)?;
        Ok(buf)
    } else {
        fs::read(path).map_err(io_err)
    }
}

fn emit(out: &mut impl Write, value: &impl Serialize) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)
}

fn rules_text(rules: &[Rule]) -> String {
    rules.iter().map(Rule::to_string).collect::<Vec<_>>().join(",")
}

#[derive(Serialize)]
struct Flag {
    file: String,
    line: usize,
    column: usize,
    start: usize,
    end: usize,
    surface: String,
    verdict: Verdict,
    rules: Vec<Rule>,
    suggestions: Vec<String>,
}

#[derive(Serialize)]
struct CheckReport {
    tokens: usize,
    allowed: usize,
    extra: usize,
    rejected: usize,
    flags: Vec<Flag>,
}

// 1-based line and column (in characters) of a byte offset.
fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let line_start = before.rfind('\n').map_or(0, |i| i + 1);
    (line, before[line_start..].chars().count() + 1)
}

fn cmd_check(engine: &Engine, inputs: &[PathBuf], format: Format, out: &mut impl Write) -> Result<u8, CliError> {
    let mut report = CheckReport {
        tokens: 0,
        allowed: 0,
        extra: 0,
        rejected: 0,
        flags: Vec::new(),
    };
    for path in inputs {
        let bytes = read_input(path)?;
        let tokens = normalize_bytes(&bytes, engine.contractions(), engine.morphology().closure())?;
        let text = std::str::from_utf8(&bytes).expect("validated by the pipeline");
        report.tokens += tokens.len();
        for t in &tokens {
            let result = engine.check_token(&t.surface);
            match result.verdict {
                Verdict::Allowed => {
                    report.allowed += 1;
                    continue;
                }
                Verdict::Extra => report.extra += 1,
                Verdict::Rejected => report.rejected += 1,
            }
            let (line, column) = line_column(text, t.span.0);
            report.flags.push(Flag {
                file: path.display().to_string(),
                line,
                column,
                start: t.span.0,
                end: t.span.1,
                surface: t.surface.clone(),
                verdict: result.verdict,
                rules: result.rules(),
                suggestions: result.suggestions,
            });
        }
    }
    match format {
        Format::Json => emit(out, &report)?,
        Format::Tsv | Format::Plain => {
            for f in &report.flags {
                let verdict = match f.verdict {
                    Verdict::Extra => "extra",
                    _ => "rejected",
                };
                if format == Format::Tsv {
                    writeln!(
                        out,
                        "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                        f.file,
                        f.line,
                        f.column,
                        f.surface,
                        verdict,
                        rules_text(&f.rules),
                        f.suggestions.join(",")
                    )?;
                } else {
                    let hint = if f.suggestions.is_empty() {
                        String::new()
                    } else {
                        format!(" (try: {})", f.suggestions.join(", "))
                    };
                    writeln!(out, "{}:{}:{}: {} `{}`{}", f.file, f.line, f.column, verdict, f.surface, hint)?;
                }
            }
        }
    }
    Ok(if report.rejected > 0 {
        2
    } else if report.extra > 0 {
        1
    } else {
        0
    })
}

#[derive(Serialize)]
struct AnalyzeReport {
    tokens: usize,
    forms: tenhundred::analyzer::RuleHistogram,
    occurrences: tenhundred::analyzer::RuleHistogram,
    coverage: tenhundred::analyzer::Coverage,
    underivable: Vec<Underivable>,
}

fn cmd_analyze(
    engine: &Engine,
    inputs: &[PathBuf],
    out_dir: &Path,
    format: Format,
    out: &mut impl Write,
) -> Result<u8, CliError> {
    let mut tokens = Vec::new();
    for path in inputs {
        let bytes = read_input(path)?;
        tokens.extend(normalize_bytes(&bytes, engine.contractions(), engine.morphology().closure())?);
    }
    let m = engine.morphology();
    let c = classify_stream(&tokens, m);
    let cov = coverage(&c.forms, &c.occurrences).map_err(|_| CliError::EmptyCorpus)?;
    let mut underivable = c.underivable;
    underivable.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.surface.cmp(&b.surface)));
    let report = AnalyzeReport {
        tokens: tokens.len(),
        forms: c.forms,
        occurrences: c.occurrences,
        coverage: cov,
        underivable,
    };
    fs::create_dir_all(out_dir)?;
    let mut json = serde_json::to_vec_pretty(&report).map_err(io::Error::from)?;
    json.push(b'\n');
    fs::write(out_dir.join("histogram.json"), &json)?;
    let surface = rank_frequency(&tokens, RankMode::Surface, m);
    let lemmatized = rank_frequency(&tokens, RankMode::Lemmatized, m);
    fs::write(out_dir.join("rank_surface.tsv"), surface.to_tsv())?;
    fs::write(out_dir.join("rank_lemmatized.tsv"), lemmatized.to_tsv())?;
    match format {
        Format::Json => out.write_all(&json)?,
        Format::Tsv => {
            for bin in tenhundred::analyzer::BinId::ALL {
                writeln!(out, "{}\t{}\t{}", bin.key(), report.forms.count(bin), report.occurrences.count(bin))?;
            }
        }
        Format::Plain => {
            writeln!(out, "tokens: {} ({} classified)", report.tokens, report.occurrences.total())?;
            writeln!(out, "word forms: {}", report.forms.total())?;
            writeln!(out, "token coverage: {:.4}", cov.tokens)?;
            writeln!(out, "form coverage: {:.4}", cov.forms)?;
            writeln!(out, "underivable forms: {}", report.underivable.len())?;
            for bin in tenhundred::analyzer::BinId::ALL {
                writeln!(out, "{:>8} {:>8}  {}", report.forms.count(bin), report.occurrences.count(bin), bin.label())?;
            }
        }
    }
    Ok(0)
}

fn cmd_fit(table: &Path, threshold: f64, xmin: Option<u64>, format: Format, out: &mut impl Write) -> Result<u8, CliError> {
    let bytes = read_input(table)?;
    let text = String::from_utf8(bytes).map_err(|e| InputError::InvalidUtf8(e.utf8_error().valid_up_to()))?;
    let rf = RankFrequency::from_tsv(&text)?;
    let sample = CountSample::new(rf.counts())?;
    let report: FitReport = fit_report_at(&sample, xmin, threshold)?;
    match format {
        Format::Json => emit(out, &report)?,
        Format::Tsv | Format::Plain => {
            let v = serde_json::to_value(report).map_err(io::Error::from)?;
            let fields: BTreeMap<String, serde_json::Value> = serde_json::from_value(v).map_err(io::Error::from)?;
            for (k, v) in fields {
                let sep = if format == Format::Tsv { "\t" } else { ": " };
                writeln!(out, "{k}{sep}{}", v.as_str().map_or_else(|| v.to_string(), str::to_string))?;
            }
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct ExpandReport<'a> {
    word: &'a str,
    reverse: bool,
    derivations: &'a [Derivation],
}

fn cmd_expand(engine: &Engine, word: &str, reverse: bool, format: Format, out: &mut impl Write) -> Result<u8, CliError> {
    let word = word.to_lowercase();
    let m = engine.morphology();
    let derivations = if reverse {
        m.analyze(&word)
    } else {
        m.derive_forms(&word).map_err(|_| CliError::NotListed(word.clone()))?
    };
    match format {
        Format::Json => emit(
            out,
            &ExpandReport {
                word: &word,
                reverse,
                derivations: &derivations,
            },
        )?,
        Format::Tsv | Format::Plain => {
            for d in &derivations {
                writeln!(out, "{}\t{}\t{}", d.surface, d.root, d.rule)?;
            }
        }
    }
    Ok(0)
}

fn run(cli: Cli, out: &mut impl Write) -> Result<u8, CliError> {
    let paths = DataPaths {
        word_list: cli.word_list,
        irregular: cli.irregular,
        contractions: cli.contractions,
    };
    let engine = Engine::load(&paths, cli.data_dir.as_deref())?;
    match cli.command {
        Command::Check { inputs } => cmd_check(&engine, &inputs, cli.format, out),
        Command::Analyze { inputs, out_dir } => cmd_analyze(&engine, &inputs, &out_dir, cli.format, out),
        Command::Fit { table, threshold, xmin } => cmd_fit(&table, threshold, xmin, cli.format, out),
        Command::Expand { word, reverse } => cmd_expand(&engine, &word, reverse, cli.format, out),
        Command::Closure => {
            out.write_all(engine.morphology().closure().to_tsv().as_bytes())?;
            Ok(0)
        }
        Command::Serve {
            serve_addr,
            max_body,
            allow_origin,
        } => {
            let config = ServiceConfig {
                max_body_bytes: max_body,
                allowed_origins: allow_origin,
            };
            eprintln!("listening on http://{serve_addr}");
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(tenhundred_service::serve(serve_addr, Arc::new(engine), &config))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 64 } else { 0 });
        }
    };
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let code = match run(cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            let _ = out.flush();
            eprintln!("tenhundred: {e}");
            e.exit_code()
        }
    };
    if out.flush().is_err() {
        return ExitCode::from(7);
    }
    ExitCode::from(code)
}
