//! Subcommand implementations. Each returns a serializable report; the text
//! output is a rendering of the same report.

mod info;
mod scan;
mod theta;
mod verify;

use serde::Serialize;

pub use info::{module_info, ModuleReport};
pub use scan::{frobenius_scan, parse_poly, ScanJson, ScanRow};
pub use theta::{theta_check, ThetaInput, ThetaReport};
pub use verify::{verify_core, CellReport, ClassRecord, Failure, VerifyOptions, VerifyReport};

pub trait Render {
    fn render(&self) -> String;
}

/// A finished command: exit code plus report.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub code: u8,
    pub json: serde_json::Value,
    pub text: String,
}

impl Outcome {
    fn new<R: Serialize + Render>(report: &R, code: u8) -> Outcome {
        Outcome {
            code,
            json: serde_json::to_value(report).expect("reports serialize"),
            text: report.render(),
        }
    }
}

/// Class coordinates as digits (`0112`) or, for moduli above 10, dotted.
pub(crate) fn format_coords(coords: &[u8], modulus: u8) -> String {
    if coords.is_empty() {
        return "-".into();
    }
    if modulus <= 10 {
        coords.iter().map(|c| char::from(b'0' + c)).collect()
    } else {
        coords.iter().map(u8::to_string).collect::<Vec<_>>().join(".")
    }
}
