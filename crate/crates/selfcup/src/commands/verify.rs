use std::fmt::Write;

use rayon::prelude::*;
use serde::Serialize;
use selfcup_core::cohomology::CupConvention;
use selfcup_core::suite::{grid_cells, CriterionReport, GridCell, SuiteOptions};
use selfcup_core::ucons::selfcup_check;

use super::{format_coords, Outcome, Render};
use crate::error::{CliError, CliResult, EXIT_FAILURE};
use crate::runner::{run_criteria, with_pool};

/// How classes are written in reports.
pub const COORDINATE_NOTE: &str = "a class of H^1(G, M) is written as its cocycle values on the group generators \
     s_1, ..., s_k in order, concatenated; each value is a vector of length dim M over Z/m";

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub suite: SuiteOptions,
    /// Keep grid cells whose group name matches, e.g. `Z2` or `Z/2`.
    pub group: Option<String>,
    /// Keep grid cells whose module label contains this text.
    pub module: Option<String>,
    /// Suites to run; criterion 1 is reported cell by cell.
    pub criteria: Vec<u8>,
    /// Compare against the cup product with the action dropped.
    pub corrupt_cup: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassRecord {
    pub coords: Vec<u8>,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CellReport {
    pub group: String,
    pub group_order: usize,
    pub module: String,
    pub modulus: u8,
    pub dim: usize,
    pub log_h1: u32,
    pub exhaustive: bool,
    pub classes: Vec<ClassRecord>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckJson {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionJson {
    pub id: u8,
    pub title: String,
    pub passed: bool,
    pub checks: Vec<CheckJson>,
}

impl From<&CriterionReport> for CriterionJson {
    fn from(r: &CriterionReport) -> Self {
        CriterionJson {
            id: r.id,
            title: r.title.to_string(),
            passed: r.passed(),
            checks: r
                .checks
                .iter()
                .map(|c| CheckJson {
                    label: c.label.clone(),
                    passed: c.passed,
                    detail: c.detail.clone(),
                })
                .collect(),
        }
    }
}

/// First failing witness.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Failure {
    Class { group: String, module: String, coords: Vec<u8> },
    CellError { group: String, module: String, error: String },
    Check { criterion: u8, label: String, detail: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub h2_cap: usize,
    pub convention: &'static str,
    pub class_coordinates: &'static str,
    pub cells: Vec<CellReport>,
    pub criteria: Vec<CriterionJson>,
    pub classes_checked: usize,
    pub passed: bool,
    pub first_failure: Option<Failure>,
}

fn normalize(name: &str) -> String {
    name.chars()
        .filter(|c| !matches!(c, '/' | ' ' | '_'))
        .flat_map(char::to_lowercase)
        .collect()
}

fn check_cell(cell: &GridCell, opts: &SuiteOptions, convention: CupConvention) -> CellReport {
    let mut report = CellReport {
        group: cell.group.to_string(),
        group_order: cell.data.group().order(),
        module: cell.module.clone(),
        modulus: cell.data.ring().modulus(),
        dim: cell.data.dim(),
        log_h1: 0,
        exhaustive: false,
        classes: Vec::new(),
        passed: false,
        error: None,
    };
    match selfcup_check(&cell.data, &opts.cohomology, convention) {
        Ok(rep) => {
            report.log_h1 = rep.log_h1;
            report.exhaustive = rep.exhaustive;
            report.passed = rep.passed() && rep.classes_checked > 0;
            report.classes = rep
                .classes
                .into_iter()
                .map(|coords| ClassRecord {
                    passed: !rep.failures.contains(&coords),
                    coords,
                })
                .collect();
        }
        Err(e) => report.error = Some(e.to_string()),
    }
    report
}

/// Runs the self-cup grid cell by cell and the other selected suites.
pub fn verify_core(opts: &VerifyOptions) -> CliResult<Outcome> {
    for &id in &opts.criteria {
        if !(1..=10).contains(&id) {
            return Err(CliError::Input(format!("no criterion {id}; expected 1 to 10")));
        }
    }
    let convention = if opts.corrupt_cup {
        CupConvention::IgnoreAction
    } else {
        CupConvention::Standard
    };
    let mut cells = Vec::new();
    if opts.criteria.contains(&1) {
        let group = opts.group.as_deref().map(normalize);
        let module = opts.module.as_deref().map(normalize);
        let selected: Vec<GridCell> = grid_cells()?
            .into_iter()
            .filter(|c| group.as_ref().map_or(true, |g| normalize(c.group) == *g))
            .filter(|c| module.as_ref().map_or(true, |m| normalize(&c.module).contains(m.as_str())))
            .collect();
        if selected.is_empty() {
            return Err(CliError::Input("no grid cell matches the group/module filter".into()));
        }
        cells = with_pool(|| selected.par_iter().map(|c| check_cell(c, &opts.suite, convention)).collect())?;
    }
    let others: Vec<u8> = opts.criteria.iter().copied().filter(|&id| id != 1).collect();
    let criteria: Vec<CriterionJson> = run_criteria(&others, &opts.suite)?.iter().map(CriterionJson::from).collect();

    let first_failure = cells
        .iter()
        .find_map(|c| {
            if let Some(e) = &c.error {
                return Some(Failure::CellError {
                    group: c.group.clone(),
                    module: c.module.clone(),
                    error: e.clone(),
                });
            }
            c.classes.iter().find(|x| !x.passed).map(|x| Failure::Class {
                group: c.group.clone(),
                module: c.module.clone(),
                coords: x.coords.clone(),
            })
        })
        .or_else(|| {
            criteria.iter().find_map(|r| {
                r.checks.iter().find(|c| !c.passed).map(|c| Failure::Check {
                    criterion: r.id,
                    label: c.label.clone(),
                    detail: c.detail.clone(),
                })
            })
        });
    let passed = cells.iter().all(|c| c.passed) && criteria.iter().all(|c| c.passed) && first_failure.is_none();
    let report = VerifyReport {
        seed: opts.suite.cohomology.seed,
        h2_cap: opts.suite.cohomology.h2_cap,
        convention: if opts.corrupt_cup { "ignore-action" } else { "standard" },
        class_coordinates: COORDINATE_NOTE,
        classes_checked: cells.iter().map(|c| c.classes.len()).sum(),
        cells,
        criteria,
        passed,
        first_failure,
    };
    Ok(Outcome::new(&report, if passed { 0 } else { EXIT_FAILURE }))
}

impl Render for VerifyReport {
    fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {}", self.class_coordinates);
        let _ = writeln!(out, "# seed {:#x}, cup convention {}", self.seed, self.convention);
        for c in &self.cells {
            let ok = c.classes.iter().filter(|x| x.passed).count();
            let status = if c.passed { "ok" } else { "FAIL" };
            let _ = write!(
                out,
                "{status:<4} {} / {}: {ok}/{} classes ({}, log|H1| = {})",
                c.group,
                c.module,
                c.classes.len(),
                if c.exhaustive { "all" } else { "sampled" },
                c.log_h1
            );
            match &c.error {
                Some(e) => {
                    let _ = writeln!(out, " error: {e}");
                }
                None => {
                    let list: Vec<String> = c
                        .classes
                        .iter()
                        .map(|x| {
                            let s = format_coords(&x.coords, c.modulus);
                            if x.passed {
                                s
                            } else {
                                format!("{s}!")
                            }
                        })
                        .collect();
                    let _ = writeln!(out, "\n       classes: {}", list.join(" "));
                }
            }
        }
        for r in &self.criteria {
            let ok = r.checks.iter().filter(|c| c.passed).count();
            let _ = writeln!(
                out,
                "criterion {:>2} [{}] {} ({ok}/{} checks)",
                r.id,
                if r.passed { "PASS" } else { "FAIL" },
                r.title,
                r.checks.len()
            );
            for c in &r.checks {
                let _ = writeln!(out, "    {} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.label, c.detail);
            }
        }
        let _ = writeln!(out, "{} classes checked: {}", self.classes_checked, if self.passed { "PASS" } else { "FAIL" });
        if let Some(f) = &self.first_failure {
            let _ = writeln!(out, "first failure: {}", serde_json::to_string(f).expect("serializable"));
        }
        out
    }
}
