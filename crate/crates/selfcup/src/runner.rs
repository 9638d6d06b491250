//! Parallel execution of suite tasks. Results come back in task order, so
//! reports do not depend on scheduling.

use rayon::prelude::*;
use selfcup_core::suite::{criterion, Check, CriterionReport, SuiteOptions};

use crate::error::{CliError, CliResult};

/// Environment variable capping the number of worker threads.
pub const THREADS_VAR: &str = "SELFCUP_THREADS";

/// Reads `SELFCUP_THREADS`; `None` means rayon's default.
pub fn thread_limit() -> CliResult<Option<usize>> {
    match std::env::var(THREADS_VAR) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Input(format!("{THREADS_VAR} must be a positive integer, got {v:?}"))),
        },
    }
}

/// Runs `f` inside a pool sized by `SELFCUP_THREADS`.
pub fn with_pool<R: Send>(f: impl FnOnce() -> R + Send) -> CliResult<R> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_limit()? {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Input(format!("cannot start worker threads: {e}")))?;
    Ok(pool.install(f))
}

/// Runs every task of the listed criteria in parallel and regroups the
/// checks per criterion.
pub fn run_criteria(ids: &[u8], opts: &SuiteOptions) -> CliResult<Vec<CriterionReport>> {
    let criteria = ids.iter().map(|&id| criterion(id)).collect::<Result<Vec<_>, _>>()?;
    let jobs: Vec<(usize, usize)> = criteria
        .iter()
        .enumerate()
        .flat_map(|(c, crit)| (0..crit.tasks.len()).map(move |t| (c, t)))
        .collect();
    let checks: Vec<Check> = with_pool(|| jobs.par_iter().map(|&(c, t)| criteria[c].tasks[t].run(opts)).collect())?;
    let mut checks = checks.into_iter();
    Ok(criteria
        .iter()
        .map(|crit| crit.report(checks.by_ref().take(crit.tasks.len()).collect()))
        .collect())
}
