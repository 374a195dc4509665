//! Matrix documents, atomic writes and number formatting.

use std::io::Write;
use std::path::Path;

use protset_core::linalg::{Matrix, SymmetricMatrix};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// On-disk form of a square matrix: `{"n": .., "matrix": [..], "label": ..}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub n: usize,
    pub matrix: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl MatrixFile {
    pub fn from_symmetric(m: &SymmetricMatrix, label: impl Into<String>) -> Self {
        Self {
            n: m.dim(),
            matrix: m.as_matrix().as_slice().to_vec(),
            label: Some(label.into()),
        }
    }
}

/// A matrix read from disk together with its provenance.
pub struct LoadedMatrix {
    pub matrix: SymmetricMatrix,
    pub sha256: String,
    pub label: Option<String>,
}

fn parse_error(path: &Path, message: impl Into<String>) -> CliError {
    CliError::Parse {
        path: path.display().to_string(),
        message: message.into(),
    }
}

/// Validates the document field by field so that errors name the field.
pub fn parse_matrix_file(path: &Path, bytes: &[u8]) -> Result<MatrixFile, CliError> {
    let value: Value =
        serde_json::from_slice(bytes).map_err(|e| parse_error(path, format!("not a valid matrix document: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| parse_error(path, "document must be an object with fields `n` and `matrix`"))?;
    if let Some(key) = obj.keys().find(|k| !matches!(k.as_str(), "n" | "matrix" | "label")) {
        return Err(parse_error(path, format!("unknown field `{key}`")));
    }
    let n = match obj.get("n") {
        None => return Err(parse_error(path, "missing field `n`")),
        Some(v) => v
            .as_u64()
            .filter(|n| (1..=4096).contains(n))
            .ok_or_else(|| parse_error(path, format!("field `n` must be an integer in 1..=4096, found {v}")))?
            as usize,
    };
    let entries = match obj.get("matrix") {
        None => return Err(parse_error(path, "missing field `matrix`")),
        Some(Value::Array(a)) => a,
        Some(v) => return Err(parse_error(path, format!("field `matrix` must be an array, found {v}"))),
    };
    if entries.len() != n * n {
        return Err(parse_error(
            path,
            format!("field `matrix` must hold n² = {} entries, found {}", n * n, entries.len()),
        ));
    }
    let matrix = entries
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.as_f64()
                .ok_or_else(|| parse_error(path, format!("field `matrix` entry {i} is not a number: {v}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let label = match obj.get("label") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(v) => return Err(parse_error(path, format!("field `label` must be a string, found {v}"))),
    };
    Ok(MatrixFile { n, matrix, label })
}

pub fn read_bytes(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Reads, parses and symmetry-checks a matrix document.
pub fn load_matrix(path: &Path) -> Result<LoadedMatrix, CliError> {
    let bytes = read_bytes(path)?;
    let file = parse_matrix_file(path, &bytes)?;
    let m = Matrix::from_row_major(file.n, file.matrix).map_err(|e| parse_error(path, e.to_string()))?;
    let matrix = SymmetricMatrix::new(m)
        .map_err(|e| CliError::InvalidInput(format!("{}: {e}", path.display())))?;
    Ok(LoadedMatrix {
        matrix,
        sha256: sha256_hex(&bytes),
        label: file.label,
    })
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let io_err = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(bytes).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

pub fn to_json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut out = serde_json::to_vec_pretty(value).map_err(|e| CliError::Internal(e.to_string()))?;
    out.push(b'\n');
    Ok(out)
}

/// Shortest decimal that parses back to the same double; `-0` prints as `0`.
pub fn fmt_real(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x}")
    }
}
