use std::fs::{File, OpenOptions};
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, ValueEnum};
use xorsat::cdcl::SolveResult;
use xorsat::decompose::DEFAULT_CLAUSIFY_WIDTH;
use xorsat::dimacs;
use xorsat::pipeline::{self, Outcome, PipelineConfig};
use xorsat::xorengine::Backend;
use xorsat::CnfXorFormula;

const EXIT_SAT: u8 = 10;
const EXIT_UNSAT: u8 = 20;
const EXIT_UNKNOWN: u8 = 0;
const EXIT_USAGE: u8 = 1;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BackendArg {
    Unitprop,
    Gj,
    GjConflictsOnly,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Backend {
        match b {
            BackendArg::Unitprop => Backend::UnitProp,
            BackendArg::Gj => Backend::GaussJordan,
            BackendArg::GjConflictsOnly => Backend::GaussJordanConflictsOnly,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

/// CDCL solver for CNF formulas with xor-constraints.
#[derive(Debug, Parser)]
#[command(version)]
struct Cli {
    /// Extended DIMACS input; `-` reads standard input.
    input: PathBuf,

    #[arg(long, value_enum, default_value = "gj")]
    backend: BackendArg,

    /// One xor reasoner per biconnected component.
    #[arg(long, value_enum, default_value = "on")]
    decompose: Switch,

    /// Eliminate xor-internal variables before search.
    #[arg(long, value_enum, default_value = "on")]
    eliminate: Switch,

    /// Translate singleton components into clauses.
    #[arg(long)]
    clausify_singletons: bool,

    /// Cross-check the verdict by enumeration (inputs with at most 24 variables).
    #[arg(long)]
    verify: bool,

    /// Append one row of statistics to this CSV file.
    #[arg(long, value_name = "PATH")]
    stats_csv: Option<PathBuf>,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(long, value_name = "N")]
    max_conflicts: Option<u64>,

    /// Write the instance (after optional clausification) here instead of solving.
    #[arg(long, value_name = "PATH")]
    export: Option<PathBuf>,
}

fn read_formula(path: &Path) -> Result<CnfXorFormula> {
    let parsed = if path.as_os_str() == "-" {
        dimacs::parse(io::stdin().lock())
    } else {
        let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
        dimacs::parse(BufReader::new(file))
    };
    parsed.with_context(|| format!("{}", path.display()))
}

fn print_result(out: &mut impl Write, outcome: &Outcome) -> io::Result<u8> {
    let s = &outcome.stats;
    writeln!(
        out,
        "c decisions {} conflicts {} restarts {} time {:.3}s",
        s.solver.decisions,
        s.solver.conflicts,
        s.solver.restarts,
        s.wall_time.as_secs_f64()
    )?;
    writeln!(
        out,
        "c xor reasoners {} matrix elements {} fixed {} substituted {} eliminated {}",
        s.reasoners, s.matrix_elements, s.preprocess.fixed, s.preprocess.substituted, s.preprocess.eliminated
    )?;
    if s.verified == Some(true) {
        writeln!(out, "c verified by enumeration")?;
    }
    match &outcome.result {
        SolveResult::Sat(model) => {
            writeln!(out, "s SATISFIABLE")?;
            let lits: Vec<String> = model.lits().map(|l| l.to_dimacs().to_string()).collect();
            for chunk in lits.chunks(10) {
                writeln!(out, "v {}", chunk.join(" "))?;
            }
            writeln!(out, "v 0")?;
            Ok(EXIT_SAT)
        }
        SolveResult::Unsat => {
            writeln!(out, "s UNSATISFIABLE")?;
            Ok(EXIT_UNSAT)
        }
        SolveResult::Unknown => {
            writeln!(out, "s UNKNOWN")?;
            Ok(EXIT_UNKNOWN)
        }
    }
}

const CSV_HEADER: [&str; 25] = [
    "instance",
    "backend",
    "decompose",
    "eliminate",
    "status",
    "decisions",
    "conflicts",
    "xor_conflicts",
    "cnf_propagations",
    "xor_propagations",
    "restarts",
    "learned",
    "xor_assumes",
    "xor_implied",
    "reasoners",
    "matrix_elements",
    "elements_monolithic",
    "elements_decomposed",
    "elements_without_singletons",
    "elements_post_elimination",
    "fixed",
    "substituted",
    "eliminated",
    "cut_vars",
    "wall_ms",
];

fn append_csv(path: &Path, cli: &Cli, outcome: &Outcome) -> Result<()> {
    let file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .with_context(|| format!("cannot open {}", path.display()))?;
    let fresh = file.metadata()?.len() == 0;
    let mut w = csv::Writer::from_writer(file);
    if fresh {
        w.write_record(CSV_HEADER)?;
    }
    let s = &outcome.stats;
    let pre = &s.preprocess;
    let status = match outcome.result {
        SolveResult::Sat(_) => "sat",
        SolveResult::Unsat => "unsat",
        SolveResult::Unknown => "unknown",
    };
    let switch = |s: Switch| if s == Switch::On { "on" } else { "off" };
    let row: Vec<String> = vec![
        cli.input.display().to_string(),
        Backend::from(cli.backend).to_string(),
        switch(cli.decompose).into(),
        switch(cli.eliminate).into(),
        status.into(),
        s.solver.decisions.to_string(),
        s.solver.conflicts.to_string(),
        s.solver.xor_conflicts.to_string(),
        s.solver.cnf_propagations.to_string(),
        s.solver.xor_propagations.to_string(),
        s.solver.restarts.to_string(),
        s.solver.learned.to_string(),
        s.solver.engine.assumes.to_string(),
        s.solver.engine.implied.to_string(),
        s.reasoners.to_string(),
        s.matrix_elements.to_string(),
        pre.before_elimination.monolithic_elements.to_string(),
        pre.before_elimination.decomposed_elements.to_string(),
        pre.before_elimination.non_singleton_elements.to_string(),
        pre.after_elimination.non_singleton_elements.to_string(),
        pre.fixed.to_string(),
        pre.substituted.to_string(),
        pre.eliminated.to_string(),
        pre.cut_vars.to_string(),
        s.wall_time.as_millis().to_string(),
    ];
    w.write_record(&row)?;
    w.flush()?;
    Ok(())
}

fn run(cli: &Cli) -> Result<u8> {
    let f = read_formula(&cli.input)?;
    if let Some(path) = &cli.export {
        let e = pipeline::export(&f, cli.clausify_singletons, DEFAULT_CLAUSIFY_WIDTH);
        std::fs::write(path, e.text).with_context(|| format!("cannot write {}", path.display()))?;
        for i in e.refused {
            eprintln!("c xor constraint {} left unclausified: wider than {DEFAULT_CLAUSIFY_WIDTH}", i + 1);
        }
        return Ok(0);
    }
    let mut config = PipelineConfig {
        eliminate: cli.eliminate == Switch::On,
        clausify_singletons: cli.clausify_singletons,
        verify: cli.verify,
        ..PipelineConfig::default()
    };
    config.solver.engine.backend = cli.backend.into();
    config.solver.decompose = cli.decompose == Switch::On;
    config.solver.seed = cli.seed;
    config.solver.max_conflicts = cli.max_conflicts;
    if cli.verify && f.num_vars > xorsat::oracle::MAX_ENUM_VARS {
        eprintln!(
            "c --verify skipped: {} variables exceed the enumeration limit of {}",
            f.num_vars,
            xorsat::oracle::MAX_ENUM_VARS
        );
    }
    let outcome = pipeline::run(&f, &config)?;
    if let Some(path) = &cli.stats_csv {
        append_csv(path, cli, &outcome)?;
    }
    let code = print_result(&mut io::stdout().lock(), &outcome)?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
