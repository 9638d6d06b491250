use std::fmt::Write;

use rayon::prelude::*;
use serde::Serialize;
use selfcup_core::galois::{
    assemble_scan, describe, discriminant, primes_up_to, scan_prime, Certification, IntPoly, ScanReport, MAX_PRIME,
};

use super::{Outcome, Render};
use crate::error::{CliError, CliResult};
use crate::runner::with_pool;

#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub p: u64,
    pub cycle_type: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanJson {
    pub polynomial: String,
    pub degree: usize,
    /// Decimal string; discriminants outgrow JSON numbers quickly.
    pub discriminant: String,
    pub prime_bound: u64,
    pub table: Vec<ScanRow>,
    pub ramified: Vec<u64>,
    pub skipped: Vec<u64>,
    pub observed: Vec<Vec<usize>>,
    pub certification: String,
    pub certified_symmetric: bool,
}

pub fn parse_poly(text: &str) -> CliResult<IntPoly> {
    let f = IntPoly::parse(text)?;
    if f.degree() < 2 {
        return Err(CliError::Input(format!("{f} has degree below 2")));
    }
    Ok(f)
}

/// Per-prime DDF in parallel, assembled in ascending order.
pub(crate) fn parallel_scan(f: &IntPoly, bound: u64) -> CliResult<ScanReport> {
    if bound >= MAX_PRIME {
        return Err(CliError::Input(format!("prime bound must be below {MAX_PRIME}")));
    }
    let primes = primes_up_to(bound);
    let results = with_pool(|| primes.par_iter().map(|&p| (p, scan_prime(f, p))).collect())?;
    Ok(assemble_scan(f, bound, results)?)
}

pub(crate) fn scan_json(f: &IntPoly, report: &ScanReport) -> CliResult<ScanJson> {
    Ok(ScanJson {
        polynomial: f.to_string(),
        degree: f.degree(),
        discriminant: discriminant(f)?.to_string(),
        prime_bound: report.bound,
        table: report
            .cycle_types
            .iter()
            .map(|(p, t)| ScanRow {
                p: *p,
                cycle_type: t.parts().to_vec(),
            })
            .collect(),
        ramified: report.ramified.clone(),
        skipped: report.skipped.clone(),
        observed: report.observed.iter().map(|t| t.parts().to_vec()).collect(),
        certification: describe(report.certification, f.degree()),
        certified_symmetric: report.certification == Certification::Full,
    })
}

pub fn frobenius_scan(poly: &str, bound: u64) -> CliResult<Outcome> {
    let f = parse_poly(poly)?;
    let report = parallel_scan(&f, bound)?;
    Ok(Outcome::new(&scan_json(&f, &report)?, 0))
}

fn braces(parts: &[usize]) -> String {
    let inner: Vec<String> = parts.iter().map(usize::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

impl Render for ScanJson {
    fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "f = {}", self.polynomial);
        let _ = writeln!(out, "discriminant = {}", self.discriminant);
        let _ = writeln!(out, "primes up to {}:", self.prime_bound);
        for row in &self.table {
            let _ = writeln!(out, "  {:>6}  {}", row.p, braces(&row.cycle_type));
        }
        let list = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(", ");
        let _ = writeln!(out, "ramified: {}", list(&self.ramified));
        if !self.skipped.is_empty() {
            let _ = writeln!(out, "skipped (divide the leading coefficient): {}", list(&self.skipped));
        }
        let observed: Vec<String> = self.observed.iter().map(|t| braces(t)).collect();
        let _ = writeln!(out, "observed cycle types: {}", observed.join(" "));
        let _ = writeln!(out, "Galois group: {}", self.certification);
        out
    }
}
