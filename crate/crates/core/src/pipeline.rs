//! Preprocessing, solving, model reconstruction and checking in one call.

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::cdcl::{SolveResult, Solver, SolverConfig, SolverStats};
use crate::decompose::{clausify_singletons, decompose, DEFAULT_CLAUSIFY_WIDTH};
use crate::dimacs;
use crate::eliminate::reconstruct_model;
use crate::formula::CnfXorFormula;
use crate::oracle::{is_satisfiable, MAX_ENUM_VARS};
use crate::preprocess::{preprocess, PreprocessOptions, PreprocessStats, Preprocessed};

#[derive(Debug, Clone, Copy)]
pub struct PipelineConfig {
    pub solver: SolverConfig,
    /// Unit fixing and binary xor substitution.
    pub preprocess: bool,
    /// Elimination of xor-internal variables (needs `preprocess`).
    pub eliminate: bool,
    /// Turn singleton components into clauses before solving.
    pub clausify_singletons: bool,
    /// Cross-check the verdict by enumeration on small inputs.
    pub verify: bool,
}

impl Default for PipelineConfig {
    fn default() -> PipelineConfig {
        PipelineConfig {
            solver: SolverConfig::default(),
            preprocess: true,
            eliminate: true,
            clausify_singletons: false,
            verify: false,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunStats {
    pub solver: SolverStats,
    pub preprocess: PreprocessStats,
    /// Xor reasoners used in search and their total matrix elements.
    pub reasoners: usize,
    pub matrix_elements: usize,
    pub clausified: usize,
    pub wall_time: Duration,
    /// `Some(true)` when the enumeration cross-check ran and agreed.
    pub verified: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    /// With `Sat`, a total model of the input formula.
    pub result: SolveResult,
    pub stats: RunStats,
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("the returned model violates the input formula")]
    BadModel,
    #[error("verification failed: the solver answered {solver}, enumeration says {oracle}")]
    Disagreement { solver: &'static str, oracle: &'static str },
}

fn verdict(r: &SolveResult) -> &'static str {
    match r {
        SolveResult::Sat(_) => "satisfiable",
        SolveResult::Unsat => "unsatisfiable",
        SolveResult::Unknown => "unknown",
    }
}

pub fn run(f: &CnfXorFormula, config: &PipelineConfig) -> Result<Outcome, PipelineError> {
    let start = Instant::now();
    let mut stats = RunStats::default();
    let (formula, records) = if config.preprocess {
        let options = PreprocessOptions {
            eliminate: config.eliminate,
            ..PreprocessOptions::default()
        };
        match preprocess(f, &options) {
            Preprocessed::Unsat => (None, Vec::new()),
            Preprocessed::Simplified {
                formula,
                records,
                stats: pre,
                ..
            } => {
                stats.preprocess = pre;
                (Some(formula), records)
            }
        }
    } else {
        let d = decompose(&f.xors);
        stats.preprocess.before_elimination = d.stats(&f.xors);
        stats.preprocess.after_elimination = stats.preprocess.before_elimination;
        stats.preprocess.cut_vars = d.cut_vars.len();
        (Some(f.clone()), Vec::new())
    };

    let result = match formula {
        None => SolveResult::Unsat,
        Some(mut formula) => {
            if config.clausify_singletons {
                let d = decompose(&formula.xors);
                let c = clausify_singletons(&formula, &d, DEFAULT_CLAUSIFY_WIDTH);
                stats.clausified = c.clausified.len();
                formula = c.formula;
            }
            let mut solver = Solver::new(&formula, config.solver);
            stats.reasoners = solver.engine().num_reasoners();
            stats.matrix_elements = solver.engine().matrix_elements();
            let r = solver.solve();
            stats.solver = solver.stats();
            match r {
                SolveResult::Sat(m) => {
                    let full = reconstruct_model(&records, &m);
                    let model = crate::Assignment::from_values(full.values()[..f.num_vars].to_vec());
                    if !f.is_satisfied_by(&model) {
                        return Err(PipelineError::BadModel);
                    }
                    SolveResult::Sat(model)
                }
                other => other,
            }
        }
    };

    if config.verify && f.num_vars <= MAX_ENUM_VARS && result != SolveResult::Unknown {
        let sat = is_satisfiable(f, &[]).expect("within the enumeration limit");
        if sat != result.is_sat() {
            return Err(PipelineError::Disagreement {
                solver: verdict(&result),
                oracle: if sat { "satisfiable" } else { "unsatisfiable" },
            });
        }
        stats.verified = Some(true);
    }
    stats.wall_time = start.elapsed();
    Ok(Outcome { result, stats })
}

#[derive(Debug, Clone)]
pub struct Exported {
    pub text: String,
    /// Singleton constraints left as xors because they exceed the width limit.
    pub refused: Vec<usize>,
}

/// Extended DIMACS for `f`, optionally with singleton components written as clauses.
pub fn export(f: &CnfXorFormula, clausify: bool, width_limit: usize) -> Exported {
    if !clausify {
        return Exported {
            text: dimacs::emit(f),
            refused: Vec::new(),
        };
    }
    let d = decompose(&f.xors);
    let c = clausify_singletons(f, &d, width_limit);
    Exported {
        text: dimacs::emit(&c.formula),
        refused: c.refused,
    }
}
