use std::fmt::Write;
use std::path::Path;

use serde::Serialize;
use selfcup_core::cohomology::{CohomologyOptions, CupConvention, H1, H2};
use selfcup_core::ucons::selfcup_check;

use super::{format_coords, Outcome, Render};
use crate::error::{CliResult, EXIT_FAILURE};
use crate::module_file::ModuleDescription;

#[derive(Clone, Debug, Serialize)]
pub struct ModuleReport {
    pub description: ModuleDescription,
    pub group_order: usize,
    pub log_h1: u32,
    /// `None` above the H^2 cap.
    pub log_h2: Option<u32>,
    pub log_h2_tensor_square: Option<u32>,
    pub classes: Vec<Vec<u8>>,
    pub exhaustive: bool,
    pub selfcup_passed: bool,
    pub selfcup_failures: Vec<Vec<u8>>,
}

/// Cohomology sizes of a module read from a description file, and the
/// self-cup comparison on its `H^1`.
pub fn module_info(path: &Path, opts: &CohomologyOptions) -> CliResult<Outcome> {
    let description = ModuleDescription::read(path)?;
    let module = description.build()?;
    let log_h2 = |m: &selfcup_core::GModule| -> CliResult<Option<u32>> {
        if module.group().order() > opts.h2_cap {
            return Ok(None);
        }
        Ok(Some(H2::new(m).space(opts)?.log_h))
    };
    let check = selfcup_check(&module, opts, CupConvention::Standard)?;
    let report = ModuleReport {
        group_order: module.group().order(),
        log_h1: H1::new(&module).log_h(),
        log_h2: log_h2(&module)?,
        log_h2_tensor_square: log_h2(&module.tensor_square())?,
        exhaustive: check.exhaustive,
        selfcup_passed: check.passed(),
        classes: check.classes.clone(),
        selfcup_failures: check.failures,
        description,
    };
    let code = if report.selfcup_passed { 0 } else { EXIT_FAILURE };
    Ok(Outcome::new(&report, code))
}

impl Render for ModuleReport {
    fn render(&self) -> String {
        let d = &self.description;
        let mut out = String::new();
        let _ = writeln!(out, "G = <{}>, |G| = {}", d.generators, self.group_order);
        let _ = writeln!(out, "M = (Z/{})^{}", d.modulus, d.dim);
        let _ = writeln!(out, "log|H1(G, M)| = {}", self.log_h1);
        let show = |x: Option<u32>| x.map_or("skipped (above H2 cap)".to_string(), |v| v.to_string());
        let _ = writeln!(out, "log|H2(G, M)| = {}", show(self.log_h2));
        let _ = writeln!(out, "log|H2(G, M (x) M)| = {}", show(self.log_h2_tensor_square));
        let classes: Vec<String> = self.classes.iter().map(|c| format_coords(c, d.modulus as u8)).collect();
        let _ = writeln!(
            out,
            "self-cup: {} on {} classes{}: {}",
            if self.selfcup_passed { "PASS" } else { "FAIL" },
            self.classes.len(),
            if self.exhaustive { "" } else { " (sampled)" },
            classes.join(" ")
        );
        out
    }
}
