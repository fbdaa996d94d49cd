//! Command-line front end: `decide`, `check` and `corpus`.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::combinator::{check_derivation, CombDerivation};
use crate::formula::{parse_formula, Formula};
use crate::oracle::{bounded_decide, OracleVerdict, SearchBound};
use crate::shadow::{decide, Caps, DecideConfig, Decision, Engine, Verdict};

pub const EXIT_INHABITED: i32 = 0;
pub const EXIT_EMPTY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_EXHAUSTED: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "ticket",
    version,
    about = "Decide implicational Ticket Entailment with certificates"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide a formula and print the verdict with its witnesses.
    Decide {
        formula: String,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value_t = Emit::Both)]
        emit: Emit,
    },
    /// Check a combinator certificate (JSON) against a formula.
    Check {
        certificate: PathBuf,
        formula: String,
    },
    /// Decide every formula of a file and compare against the bounded oracle.
    Corpus {
        file: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    Auto,
    Bounded,
    Shadow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Lambda,
    Combinator,
    Both,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long, value_enum, default_value_t = EngineArg::Auto)]
    pub engine: EngineArg,
    /// Node bound of the bounded engine.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_nodes: u64,
    /// Node bound of a single shadow.
    #[arg(long, default_value_t = 48, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_shadow_nodes: u64,
    #[arg(long, default_value_t = 200_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_shadows: u64,
    #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_candidates: u64,
    /// Seconds.
    #[arg(long, default_value_t = 60.0)]
    pub time_budget: f64,
    #[arg(long)]
    pub json: bool,
    /// Print statistics, including wall time, to stderr.
    #[arg(long)]
    pub trace: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub decide: DecideConfig,
    pub format: OutputFormat,
    pub trace: bool,
}

impl RunArgs {
    pub fn config(&self) -> Result<RunConfig, String> {
        if !(self.time_budget.is_finite() && self.time_budget > 0.0) {
            return Err(format!(
                "time budget must be positive, got {}",
                self.time_budget
            ));
        }
        let engine = match self.engine {
            EngineArg::Auto => Engine::Auto,
            EngineArg::Bounded => Engine::Bounded,
            EngineArg::Shadow => Engine::Shadow,
        };
        let caps = Caps {
            max_nodes: self.max_nodes as usize,
            max_shadow_nodes: self.max_shadow_nodes as usize,
            max_shadows: self.max_shadows as usize,
            max_candidates: self.max_candidates as usize,
            time_budget: Some(Duration::from_secs_f64(self.time_budget)),
        };
        Ok(RunConfig {
            decide: DecideConfig {
                engine,
                caps,
                ..DecideConfig::default()
            },
            format: if self.json {
                OutputFormat::Json
            } else {
                OutputFormat::Text
            },
            trace: self.trace,
        })
    }
}

fn caps_json(c: &Caps) -> Value {
    json!({
        "max_nodes": c.max_nodes,
        "max_shadow_nodes": c.max_shadow_nodes,
        "max_shadows": c.max_shadows,
        "max_candidates": c.max_candidates,
        "time_budget": c.time_budget.map(|d| d.as_secs_f64()),
    })
}

/// Decision as JSON; wall time is left out so that output is reproducible.
pub fn decision_json(d: &Decision, config: &DecideConfig, emit: Emit) -> Value {
    let lambda = matches!(emit, Emit::Lambda | Emit::Both);
    let comb = matches!(emit, Emit::Combinator | Emit::Both);
    json!({
        "formula": d.formula.to_string(),
        "engine": config.engine.name(),
        "verdict": d.verdict.name(),
        "witness_lambda": d.witness_lambda.as_ref().filter(|_| lambda).map(|t| t.to_string()),
        "witness_combinator": d.witness_combinator.as_ref().filter(|_| comb).map(CombDerivation::to_json),
        "stats": {
            "shadows_generated": d.stats.shadows_generated,
            "domains_searched": d.stats.domains_searched,
            "nodes_expanded": d.stats.nodes_expanded,
        },
        "caps": caps_json(&config.caps),
        "note": d.note,
    })
}

pub fn exit_code(v: Verdict) -> i32 {
    match v {
        Verdict::Inhabited => EXIT_INHABITED,
        Verdict::Empty => EXIT_EMPTY,
        Verdict::ResourceExhausted => EXIT_EXHAUSTED,
    }
}

fn trace(err: &mut dyn Write, d: &Decision) {
    let _ = writeln!(
        err,
        "trace: shadows={} domains={} expanded={} wall={:.3}s",
        d.stats.shadows_generated,
        d.stats.domains_searched,
        d.stats.nodes_expanded,
        d.stats.wall_time.as_secs_f64()
    );
}

pub fn cmd_decide(
    formula: &str,
    run: &RunArgs,
    emit: Emit,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let phi = match parse_formula(formula) {
        Ok(f) => f,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let cfg = match run.config() {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let d = decide(&phi, &cfg.decide);
    match cfg.format {
        OutputFormat::Json => {
            let v = decision_json(&d, &cfg.decide, emit);
            let _ = writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&v).unwrap_or_default()
            );
        }
        OutputFormat::Text => {
            let _ = writeln!(out, "formula: {}", d.formula);
            let _ = writeln!(out, "verdict: {}", d.verdict.name());
            if let Some(t) = d
                .witness_lambda
                .as_ref()
                .filter(|_| emit != Emit::Combinator)
            {
                let _ = writeln!(out, "lambda: {t}");
            }
            if let Some(c) = d
                .witness_combinator
                .as_ref()
                .filter(|_| emit != Emit::Lambda)
            {
                let _ = writeln!(out, "combinator: {c}");
            }
            if let Some(n) = &d.note {
                let _ = writeln!(out, "note: {n}");
            }
        }
    }
    if cfg.trace {
        trace(err, &d);
    }
    exit_code(d.verdict)
}

pub fn cmd_check(
    certificate: &PathBuf,
    formula: &str,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let phi = match parse_formula(formula) {
        Ok(f) => f,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let text = match std::fs::read_to_string(certificate) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", certificate.display());
            return EXIT_USAGE;
        }
    };
    let d = match serde_json::from_str::<Value>(&text)
        .map_err(|e| e.to_string())
        .and_then(|v| CombDerivation::from_json(&v).map_err(|e| e.to_string()))
    {
        Ok(d) => d,
        Err(e) => {
            let _ = writeln!(err, "error: malformed certificate: {e}");
            return EXIT_USAGE;
        }
    };
    match check_derivation(&d) {
        Ok(ty) if ty == phi => {
            let _ = writeln!(out, "valid: {d} proves {phi}");
            0
        }
        Ok(ty) => {
            let _ = writeln!(out, "invalid: certificate proves {ty}, not {phi}");
            1
        }
        Err(e) => {
            let _ = writeln!(out, "invalid: {e}");
            1
        }
    }
}

/// Formulas of a corpus file; blank lines and `#` comments are skipped.
pub fn read_corpus(text: &str) -> Result<Vec<(usize, Formula)>, String> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let l = line.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let f = parse_formula(l).map_err(|e| format!("line {}: {e}", i + 1))?;
        out.push((i + 1, f));
    }
    Ok(out)
}

pub fn cmd_corpus(file: &PathBuf, run: &RunArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cfg = match run.config() {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", file.display());
            return EXIT_USAGE;
        }
    };
    let corpus = match read_corpus(&text) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let bound = SearchBound::nodes(cfg.decide.caps.max_nodes);
    let mut rows = Vec::new();
    let mut disagreements = 0;
    for (line, phi) in &corpus {
        let oracle = bounded_decide(phi, &bound);
        let d = decide(phi, &cfg.decide);
        let agree = !(matches!(oracle, OracleVerdict::Inhabited(_)) && d.verdict == Verdict::Empty);
        if !agree {
            disagreements += 1;
        }
        let oracle_name = match oracle {
            OracleVerdict::Inhabited(_) => "Inhabited",
            OracleVerdict::Unknown => "Unknown",
        };
        rows.push((*line, phi.to_string(), oracle_name, d.verdict.name(), agree));
        if cfg.trace {
            trace(err, &d);
        }
    }
    match cfg.format {
        OutputFormat::Json => {
            let v: Vec<Value> = rows
                .iter()
                .map(|(line, f, o, v, a)| json!({"line": line, "formula": f, "oracle": o, "verdict": v, "agree": a}))
                .collect();
            let _ = writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&json!({"rows": v, "disagreements": disagreements}))
                    .unwrap_or_default()
            );
        }
        OutputFormat::Text => {
            let _ = writeln!(
                out,
                "{:>5}  {:<32} {:<10} {:<18} agree",
                "line", "formula", "oracle", "verdict"
            );
            for (line, f, o, v, a) in &rows {
                let mark = if *a { "yes" } else { "NO" };
                let _ = writeln!(out, "{line:>5}  {f:<32} {o:<10} {v:<18} {mark}");
            }
            let _ = writeln!(out, "disagreements: {disagreements}");
        }
    }
    if disagreements == 0 {
        0
    } else {
        1
    }
}

/// Parses `args` (program name first) and runs the command; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    match &cli.command {
        Command::Decide { formula, run, emit } => cmd_decide(formula, run, *emit, out, err),
        Command::Check {
            certificate,
            formula,
        } => cmd_check(certificate, formula, out, err),
        Command::Corpus { file, run } => cmd_corpus(file, run, out, err),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["ticket"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn decide_exit_codes() {
        let (code, out, _) = run_str(&["decide", "a->a"]);
        assert_eq!(code, 0);
        assert!(out.contains(r"lambda: \x:a. x"), "{out}");
        assert_eq!(run_str(&["decide", "(x->y)->((p->x)->(p->y))"]).0, 0);
        assert_eq!(run_str(&["decide", "a->(b->a)", "--engine", "shadow"]).0, 1);
        assert_eq!(run_str(&["decide", "a->"]).0, 2);
        assert_eq!(run_str(&["decide", "a->a", "--max-nodes", "0"]).0, 2);
        assert_eq!(run_str(&["decide", "a->b->a", "--engine", "bounded"]).0, 3);
    }

    #[test]
    fn json_is_reproducible() {
        let a = run_str(&["decide", "(p->p->c)->p->c", "--json"]);
        let b = run_str(&["decide", "(p->p->c)->p->c", "--json"]);
        assert_eq!(a, b);
        let v: Value = serde_json::from_str(&a.1).unwrap();
        assert_eq!(v["verdict"], "Inhabited");
        let d = CombDerivation::from_json(&v["witness_combinator"]).unwrap();
        assert_eq!(
            check_derivation(&d).unwrap(),
            parse_formula("(p->p->c)->p->c").unwrap()
        );
    }

    #[test]
    fn corpus_parsing() {
        assert_eq!(read_corpus("a->a\n\n# c\nb").unwrap().len(), 2);
        assert_eq!(
            read_corpus("a->a\na->\n").unwrap_err().split(':').next(),
            Some("line 2")
        );
    }
}
