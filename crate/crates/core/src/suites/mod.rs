//! The verification suites behind each command. Every suite returns its CSV
//! tables and PASS/FAIL criteria; nothing here touches the file system.

pub mod boundary;
pub mod calculus;
pub mod kernels;
pub mod resolvent;

use crate::cli::config::{Command, ExperimentConfig};
use crate::error::Result;
use crate::report::{Criterion, Table};
use std::time::{Duration, Instant};

#[derive(Default)]
pub struct SuiteOutput {
    /// `(file name, table)` in emission order.
    pub tables: Vec<(String, Table)>,
    pub criteria: Vec<Criterion>,
    /// Wall-clock time per stage; reported on the terminal only.
    pub timings: Vec<(String, Duration)>,
}

impl SuiteOutput {
    pub fn table(&mut self, name: &str, t: Table) {
        self.tables.push((name.to_string(), t));
    }

    pub fn timed<T>(&mut self, stage: &str, f: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        let start = Instant::now();
        let r = f(self)?;
        self.timings.push((stage.to_string(), start.elapsed()));
        Ok(r)
    }

    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.pass)
    }

    pub fn criterion(&self, name: &str) -> Option<&Criterion> {
        self.criteria.iter().find(|c| c.name == name)
    }
}

pub(crate) fn bool_str(b: bool) -> String {
    if b { "true" } else { "false" }.to_string()
}

pub fn run_suite(command: Command, cfg: &ExperimentConfig) -> Result<SuiteOutput> {
    match command {
        Command::VerifyKernels => kernels::verify_kernels(cfg),
        Command::VerifyJumps => boundary::verify_jumps(cfg),
        Command::SolveDirichlet => boundary::solve_dirichlet(cfg),
        Command::SolveResolvent => resolvent::solve_resolvent(cfg),
        Command::ResolventSweep => resolvent::resolvent_sweep(cfg),
        Command::Semigroup => calculus::semigroup(cfg),
        Command::Smoothing => calculus::smoothing(cfg),
        Command::Fractional => calculus::fractional(cfg),
    }
}
