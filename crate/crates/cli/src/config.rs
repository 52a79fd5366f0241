//! Optional JSON config files. Each command reads a flat object whose keys
//! mirror its long flags (dashes become underscores); flags win over the file.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;

use crate::error::{CliError, CliResult};

pub fn load<T: DeserializeOwned + Default>(path: Option<&Path>) -> CliResult<T> {
    let Some(path) = path else {
        return Ok(T::default());
    };
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
}

/// Flag, then file, then default.
pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

/// Repeatable flags replace the file's list only when given at least once.
pub fn pick_list<T>(flag: Vec<T>, file: Option<Vec<T>>, default: Vec<T>) -> Vec<T> {
    if !flag.is_empty() {
        flag
    } else {
        file.unwrap_or(default)
    }
}
