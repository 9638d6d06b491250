use std::fmt::Write;

use serde::Serialize;
use selfcup_core::cohomology::CohomologyOptions;
use selfcup_core::galois::Certification;
use selfcup_core::perm::parse_generators;
use selfcup_core::theta::{
    build_theta_from_generators, jacobian_identity_check, local_report, theta_class, MAX_GENUS,
};

use super::scan::{parallel_scan, parse_poly, scan_json, ScanJson};
use super::{Outcome, Render};
use crate::error::{CliError, CliResult, EXIT_FAILURE};

#[derive(Clone, Debug)]
pub enum ThetaInput {
    /// Ascending coefficients of a squarefree polynomial of even degree.
    Poly { coeffs: String, prime_bound: u64 },
    /// Permutations of the roots in 1-based cycle notation.
    Generators(String),
}

#[derive(Clone, Debug, Serialize)]
pub struct CyclicEntry {
    pub generator_cycles: String,
    pub order: usize,
    pub fixed_points: usize,
    pub trivial: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityJson {
    pub classes_checked: usize,
    pub exhaustive: bool,
    pub cup_failures: usize,
    pub obstruction_matches: bool,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThetaReport {
    pub genus: usize,
    pub generators: String,
    pub group_order: usize,
    #[serde(rename = "c_T_trivial")]
    pub c_t_trivial: bool,
    /// Fixed theta characteristics as 1-based root subsets, each listed by
    /// the representative that omits the last root.
    pub fixed_points: Vec<Vec<usize>>,
    pub cyclic_table: Vec<CyclicEntry>,
    pub sha_style: bool,
    pub identity_checked: bool,
    pub identity: IdentityJson,
    pub note: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanJson>,
}

fn symmetric_generators(n: usize) -> String {
    let cycle: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    format!("({}), (1 2)", cycle.join(" "))
}

fn genus_from_points(n: usize) -> CliResult<usize> {
    if n < 4 || n % 2 == 1 {
        return Err(CliError::Input(format!(
            "the model needs an even number of roots, at least 4; got {n}"
        )));
    }
    Ok((n - 2) / 2)
}

pub fn theta_check(input: &ThetaInput, genus: Option<usize>, opts: &CohomologyOptions) -> CliResult<Outcome> {
    let (genus, generators, scan) = match input {
        ThetaInput::Poly { coeffs, prime_bound } => {
            let f = parse_poly(coeffs)?;
            let g = genus_from_points(f.degree())?;
            if genus.is_some_and(|x| x != g) {
                return Err(CliError::Input(format!("degree {} gives genus {g}", f.degree())));
            }
            let report = parallel_scan(&f, *prime_bound)?;
            if report.certification != Certification::Full {
                return Err(CliError::Undetermined(format!(
                    "Frobenius cycle types up to {prime_bound} do not certify S{}; pass --generators",
                    f.degree()
                )));
            }
            (g, symmetric_generators(f.degree()), Some(scan_json(&f, &report)?))
        }
        ThetaInput::Generators(text) => {
            let g = match genus {
                Some(g) => g,
                None => {
                    let points = parse_generators(text, None)?.first().map_or(1, |p| p.degree());
                    genus_from_points((points + points % 2).max(6))?
                }
            };
            (g, text.clone(), None)
        }
    };
    if !(1..=MAX_GENUS).contains(&genus) {
        return Err(CliError::Input(format!("genus must be between 1 and {MAX_GENUS}")));
    }
    let data = build_theta_from_generators(genus, &generators)?;
    let class = theta_class(&data)?;
    let local = local_report(&data)?;
    let verdict = jacobian_identity_check(&data, opts)?;
    let report = ThetaReport {
        genus,
        generators,
        group_order: data.group().order(),
        c_t_trivial: class.trivial,
        fixed_points: class
            .fixed_points
            .iter()
            .map(|s| s.indices().iter().map(|i| i + 1).collect())
            .collect(),
        cyclic_table: local
            .rows
            .iter()
            .map(|r| CyclicEntry {
                generator_cycles: r.generator.to_cycle_string(),
                order: r.order,
                fixed_points: r.fixed_points,
                trivial: r.trivial,
            })
            .collect(),
        sha_style: local.sha_style,
        identity_checked: verdict.cup_checked,
        identity: IdentityJson {
            classes_checked: verdict.classes_checked,
            exhaustive: verdict.exhaustive,
            cup_failures: verdict.cup_failures,
            obstruction_matches: verdict.obstruction_matches,
            passed: verdict.passed(),
        },
        note: local.note,
        scan,
    };
    let code = if verdict.passed() { 0 } else { EXIT_FAILURE };
    Ok(Outcome::new(&report, code))
}

impl Render for ThetaReport {
    fn render(&self) -> String {
        let mut out = String::new();
        if let Some(scan) = &self.scan {
            let _ = writeln!(out, "f = {}", scan.polynomial);
            let _ = writeln!(out, "discriminant = {}", scan.discriminant);
            let _ = writeln!(out, "Galois group: {} (primes up to {})", scan.certification, scan.prime_bound);
        }
        let _ = writeln!(out, "genus {}, G = <{}>, |G| = {}", self.genus, self.generators, self.group_order);
        let _ = writeln!(out, "c_T {}", if self.c_t_trivial { "trivial" } else { "nontrivial" });
        let fixed: Vec<String> = self
            .fixed_points
            .iter()
            .map(|s| {
                let inner: Vec<String> = s.iter().map(usize::to_string).collect();
                format!("{{{}}}", inner.join(","))
            })
            .collect();
        let _ = writeln!(out, "fixed theta characteristics: {}", if fixed.is_empty() { "none".into() } else { fixed.join(" ") });
        let _ = writeln!(out, "cyclic subgroups (one per conjugacy class):");
        for row in &self.cyclic_table {
            let _ = writeln!(
                out,
                "  {:<24} order {:>2}  fixed {:>3}  {}",
                row.generator_cycles,
                row.order,
                row.fixed_points,
                if row.trivial { "trivial" } else { "nontrivial" }
            );
        }
        let _ = writeln!(out, "sha_style: {}", self.sha_style);
        let id = &self.identity;
        if self.identity_checked {
            let _ = writeln!(
                out,
                "identity: {} ({} classes{}, {} failures, obstruction {})",
                if id.passed { "PASS" } else { "FAIL" },
                id.classes_checked,
                if id.exhaustive { "" } else { " sampled" },
                id.cup_failures,
                if id.obstruction_matches { "matches" } else { "differs" }
            );
        } else {
            let _ = writeln!(
                out,
                "identity: cup half skipped (group too large), obstruction {}",
                if id.obstruction_matches { "matches" } else { "differs" }
            );
        }
        let _ = writeln!(out, "note: {}", self.note);
        out
    }
}
