//! JSON report helpers shared by the detector, sweeps and the CLI.

use serde::Serialize;

use crate::error::{Error, Result};

/// Bumped whenever a report field changes meaning or disappears.
pub const SCHEMA_VERSION: u32 = 1;

/// Pretty JSON with a trailing newline. Field order follows the struct
/// definitions and map keys are sorted, so equal inputs give equal bytes.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut out = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    out.push('\n');
    Ok(out)
}

/// Row-major flattening of a 3x3 matrix.
pub fn row_major(a: &[[f64; 3]; 3]) -> [f64; 9] {
    let mut out = [0.0; 9];
    for (i, row) in a.iter().enumerate() {
        out[3 * i..3 * i + 3].copy_from_slice(row);
    }
    out
}
