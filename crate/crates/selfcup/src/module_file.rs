//! JSON module descriptions.
//!
//! ```json
//! {
//!   "generators": "(1 2 3), (1 2)",
//!   "modulus": 2,
//!   "dim": 2,
//!   "matrices": [[0, 1, 1, 1], [0, 1, 1, 0]]
//! }
//! ```
//!
//! One row-major matrix per generator, in the order the generators are
//! listed. `degree` is optional and defaults to the largest point mentioned.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use selfcup_core::linalg::Matrix;
use selfcup_core::perm::{parse_generators, PermGroup};
use selfcup_core::{GModule, Zm};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDescription {
    pub generators: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    pub modulus: u32,
    pub dim: usize,
    pub matrices: Vec<Vec<i64>>,
}

impl ModuleDescription {
    pub fn from_json(text: &str) -> CliResult<ModuleDescription> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> CliResult<ModuleDescription> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        ModuleDescription::from_json(&text)
    }

    pub fn build(&self) -> CliResult<GModule> {
        let gens = parse_generators(&self.generators, self.degree)?;
        let n = gens.first().map_or(self.degree.unwrap_or(1), |g| g.degree());
        let group = Arc::new(PermGroup::closure(n, &gens)?);
        let ring = Zm::new(self.modulus)?;
        let d = self.dim;
        let mats = self
            .matrices
            .iter()
            .enumerate()
            .map(|(k, entries)| {
                if entries.len() != d * d {
                    return Err(CliError::Input(format!(
                        "matrix {k} has {} entries, expected {}",
                        entries.len(),
                        d * d
                    )));
                }
                Ok(Matrix::from_row_major(d, d, entries, ring))
            })
            .collect::<CliResult<Vec<_>>>()?;
        Ok(GModule::new(group, ring, d, &mats)?)
    }
}
