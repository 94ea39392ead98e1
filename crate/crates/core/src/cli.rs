//! Command-line front end.
//!
//! Exit codes: 0 stoquastic basis found, 1 not stoquasticizable,
//! 2 inconclusive, 3 runtime or input error, 4 usage error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::certificates::{analyze, diag_nogo_check, is_stoquastic, span_nogo_check, AnalysisConfig, Verdict, Witness};
use crate::config::Tolerances;
use crate::curing::{cure_search, plant_instance, random_stoquastic_set, CuringConfig, CuringResult};
use crate::error::{Error, Result};
use crate::invariants::{enumerate_words, max_word_length, word_traces, Word};
use crate::io::{format_f64, load_set, to_json_string, HamiltonianSetFile, MatrixParts, Metadata};
use crate::linalg::{random_gue_set, HermitianMatrix};
use crate::su_basis::{build_basis, structure_constants_analytic, structure_constants_trace};

pub const EXIT_ERROR: i32 = 3;
pub const EXIT_USAGE: i32 = 4;
/// Longest word enumerated without `--force`.
pub const WORD_CAP_LIMIT: usize = 12;
pub const SEED_ENV: &str = "SIMSTOQ_SEED";

#[derive(Debug, Parser)]
#[command(name = "simstoq", version, about = "Simultaneous stoquasticity analysis for sets of Hamiltonians")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the generalized Gell-Mann basis and its structure constants.
    Basis {
        #[arg(value_parser = clap::value_parser!(u64).range(2..=16))]
        d: u64,
        /// Compare the closed-form table against the trace computation.
        #[arg(long)]
        check: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the certificates and the curing search, and write a report.
    Analyze(AnalyzeArgs),
    /// Run only the curing search.
    Cure(CureArgs),
    /// Tabulate traces of canonical words.
    Invariants {
        input: PathBuf,
        #[arg(long, default_value_t = 6)]
        word_cap: usize,
        /// Allow word caps above 12.
        #[arg(long)]
        force: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a random Hamiltonian set file.
    Random {
        #[arg(value_parser = clap::value_parser!(u64).range(2..=16))]
        d: u64,
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        m: u64,
        #[arg(long, value_enum, default_value_t = Kind::Gue)]
        kind: Kind,
        #[arg(long, env = SEED_ENV, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Gue,
    Stoquastic,
    Planted,
}

#[derive(Debug, Args)]
struct SearchArgs {
    /// Slack allowed on off-diagonal entries when testing stoquasticity.
    #[arg(long, default_value_t = 1e-10, value_parser = positive_float)]
    tol: f64,
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
    restarts: u64,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    seed: u64,
    /// Include wall-clock timings; the report is then no longer reproducible.
    #[arg(long)]
    timings: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    input: PathBuf,
    #[command(flatten)]
    search: SearchArgs,
    /// Longest word in the invariant table; 0 omits the table.
    #[arg(long, default_value_t = 6)]
    word_cap: usize,
    #[arg(long)]
    force: bool,
    /// Skip the curing search.
    #[arg(long)]
    no_cure: bool,
}

#[derive(Debug, Args)]
struct CureArgs {
    input: PathBuf,
    #[command(flatten)]
    search: SearchArgs,
}

fn positive_float(s: &str) -> std::result::Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() && x > 0.0 => Ok(x),
        _ => Err(format!("`{s}` is not a positive finite number")),
    }
}

impl SearchArgs {
    fn tolerances(&self) -> Tolerances {
        Tolerances { stoquastic: self.tol, ..Tolerances::default() }
    }

    fn curing(&self) -> CuringConfig {
        CuringConfig { restarts: self.restarts as usize, seed: self.seed, ..CuringConfig::default() }
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            match e {
                Error::WordCapExceeded { .. } => EXIT_USAGE,
                _ => EXIT_ERROR,
            }
        }
    }
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Basis { d, check, out } => {
            let (text, ok) = basis_dump(d as usize, check)?;
            emit(&text, out.as_deref(), stdout)?;
            Ok(if ok { 0 } else { 1 })
        }
        Command::Analyze(args) => {
            let (report, verdict) = analyze_report(&args)?;
            emit(&to_json_string(&report)?, args.search.out.as_deref(), stdout)?;
            Ok(verdict.exit_code())
        }
        Command::Cure(args) => {
            let (report, found) = cure_report(&args)?;
            emit(&to_json_string(&report)?, args.search.out.as_deref(), stdout)?;
            Ok(if found { 0 } else { Verdict::Inconclusive.exit_code() })
        }
        Command::Invariants { input, word_cap, force, out } => {
            check_cap(word_cap, force)?;
            let (_, set, _) = load_set(&input)?;
            emit(&invariant_table(&set, word_cap)?, out.as_deref(), stdout)?;
            Ok(0)
        }
        Command::Random { d, m, kind, seed, out } => {
            let file = random_file(d as usize, m as usize, kind, seed)?;
            emit(&file.to_json()?, out.as_deref(), stdout)?;
            Ok(0)
        }
    }
}

fn check_cap(cap: usize, force: bool) -> Result<()> {
    if cap > WORD_CAP_LIMIT && !force {
        return Err(Error::WordCapExceeded { cap, limit: WORD_CAP_LIMIT });
    }
    Ok(())
}

fn basis_dump(d: usize, check: bool) -> Result<(String, bool)> {
    let basis = build_basis(d)?;
    let table = structure_constants_analytic(d)?;
    let mut s = String::new();
    let _ = writeln!(s, "# generalized Gell-Mann basis, d = {d}, {} elements", basis.len());
    let _ = writeln!(s, "# index label: nonzero entries (row, col) re im, 1-based");
    for (pos, label) in basis.index_map().labels().iter().enumerate() {
        let _ = write!(s, "{} {label}:", pos + 1);
        let m = basis.element(pos).as_matrix();
        for r in 0..d {
            for c in 0..d {
                let z = m.get(r, c);
                if z != num_complex::Complex64::new(0.0, 0.0) {
                    let _ = write!(s, " ({}, {}) {} {}", r + 1, c + 1, format_f64(z.re + 0.0), format_f64(z.im + 0.0));
                }
            }
        }
        s.push('\n');
    }
    let _ = writeln!(s, "# symmetric structure constants i j k d_ijk, i <= j <= k: {} entries", table.sym_count());
    for ([i, j, k], v) in table.sym_entries() {
        let _ = writeln!(s, "{i} {j} {k} {}", format_f64(v));
    }
    let mut ok = true;
    if check {
        let oracle = structure_constants_trace(&basis)?;
        let diff = table.max_sym_difference(&oracle);
        ok = diff <= 1e-12 && table.sym_count() == oracle.sym_count();
        let _ = writeln!(
            s,
            "# check: closed form {} entries, trace oracle {} entries, max difference {}: {}",
            table.sym_count(),
            oracle.sym_count(),
            format_f64(diff),
            if ok { "ok" } else { "MISMATCH" }
        );
        let _ = writeln!(s, "# antisymmetric structure constants i j k f_ijk, i < j < k: {} entries", oracle.antisym_count());
        for ([i, j, k], v) in oracle.antisym_entries() {
            let _ = writeln!(s, "{i} {j} {k} {}", format_f64(v));
        }
    }
    Ok((s, ok))
}

fn word_rows(set: &[HermitianMatrix], cap: usize) -> Result<Vec<(Word, num_complex::Complex64)>> {
    let m = set.len();
    let mut words: Vec<Word> = if cap >= 1 { (0..m).map(|i| Word::new(vec![i], m)).collect::<Result<_>>()? } else { Vec::new() };
    words.extend(enumerate_words(m, cap));
    let traces = word_traces(set, &words)?;
    Ok(words.into_iter().zip(traces).collect())
}

fn invariant_table(set: &[HermitianMatrix], cap: usize) -> Result<String> {
    let d = set[0].dim();
    let bound = max_word_length(set.len(), d);
    let mut s = String::new();
    let _ = writeln!(
        s,
        "# canonical word traces: m = {}, d = {d}, cap = {cap}; lengths up to {} suffice for similarity",
        set.len(),
        bound.l_max
    );
    let _ = writeln!(s, "word\tre\tim");
    for (w, t) in word_rows(set, cap)? {
        let _ = writeln!(s, "{w}\t{}\t{}", format_f64(t.re), format_f64(t.im));
    }
    Ok(s)
}

fn tool_info() -> Value {
    json!({ "name": env!("CARGO_PKG_NAME"), "version": env!("CARGO_PKG_VERSION") })
}

fn curing_summary(result: &CuringResult, config: &CuringConfig) -> Result<Value> {
    let mut v = serde_json::to_value(result).map_err(|e| Error::Parse(e.to_string()))?;
    let verified = result.transformed.iter().all(|h| is_stoquastic(h, config.violation_tol()));
    if let Value::Object(map) = &mut v {
        map.insert("unitary".into(), json!(MatrixParts::from(result.unitary().as_matrix())));
        map.insert("verified_stoquastic".into(), json!(verified));
        map.insert("config".into(), json!(config));
    }
    Ok(v)
}

fn analyze_report(args: &AnalyzeArgs) -> Result<(Value, Verdict)> {
    check_cap(args.word_cap, args.force)?;
    let started = Instant::now();
    let (_, set, digest) = load_set(&args.input)?;
    let d = set[0].dim();
    let basis = build_basis(d)?;
    let table = structure_constants_analytic(d)?;
    let config = AnalysisConfig {
        tolerances: args.search.tolerances(),
        curing: args.search.curing(),
        run_curing: !args.no_cure,
        cure_after_nogo: false,
    };
    let setup = started.elapsed();

    let cert = analyze(&set, &basis, &table, &config)?;
    let analysis = started.elapsed() - setup;

    let traceless: Vec<HermitianMatrix> = set.iter().map(|h| h.traceless_part().0).collect();
    let span = match cert.checks.iter().find(|c| c.name == "span_rank") {
        Some(c) => c.clone(),
        None => span_nogo_check(&traceless, &basis, &table, &config.tolerances)?,
    };
    let closure = match &span.witness {
        Some(Witness::SpanRank { rank, bound, stated_bound }) => {
            json!({ "rank": rank, "bound": bound, "stated_bound": stated_bound })
        }
        _ => Value::Null,
    };
    let diag = diag_nogo_check(&traceless, &basis, &table, &config.tolerances)?;
    let words = if args.word_cap == 0 {
        Value::Null
    } else {
        let rows: Vec<Value> = word_rows(&set, args.word_cap)?
            .into_iter()
            .map(|(w, t)| json!({ "word": w.to_string(), "re": t.re, "im": t.im }))
            .collect();
        json!({ "cap": args.word_cap, "sufficient_length": max_word_length(set.len(), d), "rows": rows })
    };
    let curing = match &cert.curing {
        Some(c) => curing_summary(c, &config.curing)?,
        None => Value::Null,
    };

    let mut report = json!({
        "tool": tool_info(),
        "command": "analyze",
        "input_digest": format!("sha256:{digest}"),
        "seed": args.search.seed,
        "d": d,
        "m": set.len(),
        "tolerances": cert.tolerances,
        "trace_shifts": cert.trace_shifts,
        "verdict": cert.verdict,
        "given_basis": cert.given_basis,
        "checks": cert.checks,
        "closure": closure,
        "diagonalizability": diag,
        "word_invariants": words,
        "curing": curing,
    });
    if args.search.timings {
        report["timings"] = json!({
            "setup_s": setup.as_secs_f64(),
            "analysis_s": analysis.as_secs_f64(),
            "total_s": started.elapsed().as_secs_f64(),
        });
    }
    Ok((report, cert.verdict))
}

fn cure_report(args: &CureArgs) -> Result<(Value, bool)> {
    let started = Instant::now();
    let (_, set, digest) = load_set(&args.input)?;
    let d = set[0].dim();
    let basis = build_basis(d)?;
    let (traceless, shifts): (Vec<HermitianMatrix>, Vec<f64>) = set.iter().map(HermitianMatrix::traceless_part).unzip();
    let config = args.search.curing();
    let result = cure_search(&traceless, &config, &basis)?;
    let found = result.found && result.transformed.iter().all(|h| is_stoquastic(h, args.search.tol.max(config.violation_tol())));
    let mut report = json!({
        "tool": tool_info(),
        "command": "cure",
        "input_digest": format!("sha256:{digest}"),
        "seed": args.search.seed,
        "d": d,
        "m": set.len(),
        "tolerances": args.search.tolerances(),
        "trace_shifts": shifts,
        "verdict": if found { Verdict::StoquasticBasisFound } else { Verdict::Inconclusive },
        "curing": curing_summary(&result, &config)?,
    });
    if args.search.timings {
        report["timings"] = json!({ "total_s": started.elapsed().as_secs_f64() });
    }
    Ok((report, found))
}

fn random_file(d: usize, m: usize, kind: Kind, seed: u64) -> Result<HamiltonianSetFile> {
    let mut meta = Metadata { seed: Some(seed), ..Metadata::default() };
    let set = match kind {
        Kind::Gue => {
            meta.kind = Some("gue".into());
            random_gue_set(d, m, seed)?
        }
        Kind::Stoquastic => {
            meta.kind = Some("stoquastic".into());
            random_stoquastic_set(d, m, seed)?
        }
        Kind::Planted => {
            let basis = build_basis(d)?;
            let planted = plant_instance(d, m, seed, &basis)?;
            meta.kind = Some("planted".into());
            meta.theta_star = Some(planted.theta_star);
            meta.note = Some("stoquastic set conjugated by exp(i theta_star . lambda)".into());
            planted.hamiltonians
        }
    };
    HamiltonianSetFile::from_set(&set, Some(meta))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("simstoq").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn basis_usage_and_check() {
        assert_eq!(run_args(&["basis", "1"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["basis", "17"]).0, EXIT_USAGE);
        let (code, out, _) = run_args(&["basis", "2", "--check"]);
        assert_eq!(code, 0);
        assert!(out.contains("0 entries"), "{out}");
        assert!(out.contains(": ok"));
        let (code, out, _) = run_args(&["basis", "3"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().filter(|l| l.starts_with(|c: char| c.is_ascii_digit()) && l.contains(':')).count(), 8);
    }

    #[test]
    fn random_is_deterministic_and_kinds_are_checked() {
        let a = run_args(&["random", "3", "2", "--kind", "planted", "--seed", "5"]);
        let b = run_args(&["random", "3", "2", "--kind", "planted", "--seed", "5"]);
        assert_eq!(a.0, 0);
        assert_eq!(a.1, b.1);
        assert!(a.1.contains("theta_star"));
        assert_eq!(run_args(&["random", "3", "2", "--kind", "wishart"]).0, EXIT_USAGE);
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("analyze"));
    }
}
