pub mod eval;
pub mod kernels;
pub mod sharpness;
pub mod verify;

use cmkit::FamilyIndex;

use crate::error::{CliError, CliResult};

pub fn required<T>(value: Option<T>, flag: &str) -> CliResult<T> {
    value.ok_or_else(|| CliError::Usage(format!("missing required --{flag}")))
}

pub fn index(p: Option<u32>, m: Option<u32>, n: Option<u32>, q: Option<u32>) -> CliResult<FamilyIndex> {
    FamilyIndex::new(required(p, "p")?, required(m, "m")?, required(n, "n")?, required(q, "q")?)
        .map_err(CliError::usage)
}
