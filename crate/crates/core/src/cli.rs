//! Command-line front end. [`run`] takes the argument list and output
//! streams so it can be driven from tests.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::autgroup::automorphism_group;
use crate::bounds::{analyze, AnalysisError, BoundsReport};
use crate::config::Config;
use crate::multigraph::{builtin, parse_graph, GraphError, Multigraph};
use crate::oracle::{run_oracles, Fault};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NO_BOUND: i32 = 2;
pub const EXIT_ORACLE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "graphbrauer", version, about = "Period and index bounds for Brauer classes of dual graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Analyze a graph file or a built-in graph.
    Analyze(AnalyzeArgs),
    /// Run the cross-check suites.
    Oracle {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// List or write the built-in graphs.
    Examples {
        #[command(subcommand)]
        action: ExamplesAction,
    },
}

#[derive(Debug, clap::Args)]
struct AnalyzeArgs {
    /// Graph JSON file.
    #[arg(required_unless_present = "builtin", conflicts_with = "builtin")]
    path: Option<PathBuf>,
    #[arg(long, value_name = "NAME")]
    builtin: Option<String>,
    #[arg(long)]
    json: bool,
    #[arg(long, value_name = "N", default_value_t = 1_000_000)]
    max_enum: u64,
    #[arg(long, value_name = "N", default_value_t = 32)]
    bar_cap: u64,
    #[arg(long, value_name = "N", default_value_t = 4096)]
    union_cap: u64,
    #[arg(long, value_name = "N", default_value_t = 1)]
    subgraph_depth: u32,
    #[arg(long, value_name = "N", default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum ExamplesAction {
    List,
    Emit { name: String, path: PathBuf },
}

/// Built-in families with the verdicts the analysis is expected to reach.
pub const EXPECTED: &[(&str, &str)] = &[
    ("doubled-cycle-g3 .. doubled-cycle-g8", "per = ind = g-1"),
    ("k5", "per = ind = 5"),
    ("doubled-k4", "per = ind = 2"),
    ("hybrid", "per = ind = 4"),
    ("k34", "per = ind = 1"),
    ("soccer-doubled", "per in {30, 60}, ind | 60"),
];

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    match cli.command {
        Command::Analyze(a) => cmd_analyze(&a, out, err),
        Command::Oracle { seed } => cmd_oracle(seed, out),
        Command::Examples { action } => cmd_examples(&action, out, err),
    }
}

fn load(a: &AnalyzeArgs) -> Result<Multigraph, String> {
    if let Some(name) = &a.builtin {
        return builtin(name).map_err(|e| e.to_string());
    }
    let path = a.path.as_deref().expect("clap requires a path or --builtin");
    read_graph(path)
}

fn read_graph(path: &Path) -> Result<Multigraph, String> {
    let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => format!("{}: file not found", path.display()),
        _ => format!("{}: {e}", path.display()),
    })?;
    parse_graph(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn cmd_analyze(a: &AnalyzeArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let config = Config {
        enum_cap: a.max_enum,
        bar_cap: a.bar_cap,
        union_cap: a.union_cap,
        subgraph_depth: a.subgraph_depth,
        seed: a.seed,
        ..Config::default()
    };
    if let Err(e) = config.validate() {
        let _ = writeln!(err, "error: {e}");
        return EXIT_INPUT;
    }
    let g = match load(a) {
        Ok(g) => g,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT;
        }
    };
    match analyze(&g, &config) {
        Ok(report) => {
            let _ = write_report(&report, a.json, out);
            EXIT_OK
        }
        Err(AnalysisError::ResourceCap { report }) => {
            let _ = writeln!(err, "error: no bound established under the resource caps");
            for s in &report.status {
                let _ = writeln!(err, "  {s}");
            }
            EXIT_NO_BOUND
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn write_report(r: &BoundsReport, json: bool, out: &mut dyn Write) -> std::io::Result<()> {
    if json {
        return writeln!(out, "{}", r.to_json());
    }
    write!(out, "{}", render_text(r))
}

/// Plain-text rendering with the same numbers as the JSON form.
pub fn render_text(r: &BoundsReport) -> String {
    let mut s = String::new();
    let interval = |i: &crate::bounds::DivisorInterval| {
        if i.resolved {
            format!("{} (resolved)", i.lower)
        } else {
            format!("lower {}, upper {}", i.lower, i.upper)
        }
    };
    s += &format!("graph   {}\n", r.graph);
    s += &format!("genus   {}\n", r.genus);
    s += &format!("|Aut|   {}\n", r.aut_order);
    s += &format!("period  {}\n", interval(&r.period));
    s += &format!("index   {}\n", interval(&r.index));
    s += "certificates\n";
    for c in &r.certificates {
        s += &format!(
            "  {:<20} {:<6} {:<5} {}\n",
            c.rule.as_str(),
            c.target,
            c.direction,
            c.divisor
        );
    }
    if !r.status.is_empty() {
        s += "status\n";
        for line in &r.status {
            s += &format!("  {line}\n");
        }
    }
    s
}

fn cmd_oracle(seed: u64, out: &mut dyn Write) -> i32 {
    let report = run_oracles(seed, Fault::None);
    for suite in &report.suites {
        let _ = writeln!(out, "{suite}");
    }
    if report.passed() {
        EXIT_OK
    } else {
        EXIT_ORACLE
    }
}

fn cmd_examples(action: &ExamplesAction, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match action {
        ExamplesAction::List => {
            for (names, verdict) in EXPECTED {
                let first = names.split_whitespace().next().unwrap_or(names);
                let g = builtin(first).expect("listed built-in");
                let genus = if first.starts_with("doubled-cycle") {
                    "3..8".to_string()
                } else {
                    g.genus().to_string()
                };
                let aut = if first.starts_with("doubled-cycle") {
                    "varies".to_string()
                } else {
                    automorphism_group(&g).order().to_string()
                };
                let _ = writeln!(out, "{names:<38} genus {genus:<5} |Aut| {aut:<14} {verdict}");
            }
            EXIT_OK
        }
        ExamplesAction::Emit { name, path } => {
            let g = match builtin(name) {
                Ok(g) => g,
                Err(e @ GraphError::UnknownName(_)) => {
                    let _ = writeln!(err, "error: {e}");
                    return EXIT_INPUT;
                }
                Err(e) => unreachable!("built-ins are valid: {e}"),
            };
            match std::fs::write(path, g.to_json()) {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    let _ = writeln!(err, "error: {}: {e}", path.display());
                    EXIT_INPUT
                }
            }
        }
    }
}
