//! JSON file formats for Hamiltonian sets and analysis reports.
//!
//! All floating-point numbers are written with 17 significant digits so a
//! file reloads bit for bit.

use serde::{Deserialize, Serialize};
use serde_json::{Number, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianMatrix};

/// Hermiticity slack accepted when loading a file.
pub const FILE_HERMITICITY_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixEntry {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_star: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianSetFile {
    pub d: usize,
    pub hamiltonians: Vec<MatrixEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

impl HamiltonianSetFile {
    pub fn from_set(set: &[HermitianMatrix], metadata: Option<Metadata>) -> Result<Self> {
        let d = set.first().ok_or(Error::EmptySet)?.dim();
        let hamiltonians = set
            .iter()
            .map(|h| {
                if h.dim() != d {
                    return Err(Error::DimensionMismatch { expected: d, found: h.dim() });
                }
                Ok(MatrixEntry { re: h.as_matrix().real_part(), im: h.as_matrix().imag_part() })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { d, hamiltonians, metadata })
    }

    /// Parses and validates. Errors carry the JSON path and position.
    pub fn parse(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let file: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            Error::Parse(format!("malformed Hamiltonian set file at `{path}` (line {}, column {}): {inner}", inner.line(), inner.column()))
        })?;
        file.validate()?;
        Ok(file)
    }

    fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::DimensionTooSmall { min: 2, got: self.d });
        }
        if self.hamiltonians.is_empty() {
            return Err(Error::EmptySet);
        }
        for (i, h) in self.hamiltonians.iter().enumerate() {
            for (part, rows) in [("re", &h.re), ("im", &h.im)] {
                if rows.len() != self.d || rows.iter().any(|r| r.len() != self.d) {
                    return Err(Error::Parse(format!(
                        "hamiltonians[{i}].{part}: expected a {d}x{d} array",
                        d = self.d
                    )));
                }
            }
        }
        Ok(())
    }

    /// Matrices as given, rejecting any entry further than 1e-8 from Hermitian.
    pub fn matrices(&self) -> Result<Vec<HermitianMatrix>> {
        self.hamiltonians
            .iter()
            .enumerate()
            .map(|(i, h)| {
                let m = ComplexMatrix::from_parts(&h.re, &h.im).map_err(|e| Error::Parse(format!("hamiltonians[{i}]: {e}")))?;
                HermitianMatrix::with_tolerance(m.clone(), FILE_HERMITICITY_TOL)
                    .map_err(|e| Error::Parse(format!("hamiltonians[{i}]: {e}")))?;
                Ok(HermitianMatrix::hermitize(&m))
            })
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        to_json_string(self)
    }
}

pub fn load_set(path: &std::path::Path) -> Result<(HamiltonianSetFile, Vec<HermitianMatrix>, String)> {
    let bytes = std::fs::read(path)?;
    let digest = sha256_hex(&bytes);
    let text = String::from_utf8(bytes).map_err(|e| Error::Parse(format!("input is not UTF-8: {e}")))?;
    let file = HamiltonianSetFile::parse(&text)?;
    let set = file.matrices()?;
    Ok((file, set, digest))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Formats a float with 17 significant digits.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fix_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64() {
                if let Ok(fixed) = format_f64(x).parse::<Number>() {
                    *n = fixed;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(fix_floats),
        Value::Object(map) => map.values_mut().for_each(fix_floats),
        _ => {}
    }
}

/// Pretty JSON with every float rewritten to 17 significant digits.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut v = serde_json::to_value(value).map_err(|e| Error::Parse(e.to_string()))?;
    fix_floats(&mut v);
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Real and imaginary parts of a matrix, for reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixParts {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<&ComplexMatrix> for MatrixParts {
    fn from(m: &ComplexMatrix) -> Self {
        Self { re: m.real_part(), im: m.imag_part() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random_gue_set;

    #[test]
    fn round_trip_is_bitwise() {
        let set = random_gue_set(4, 3, 17).unwrap();
        let text = HamiltonianSetFile::from_set(&set, None).unwrap().to_json().unwrap();
        let back = HamiltonianSetFile::parse(&text).unwrap().matrices().unwrap();
        for (a, b) in set.iter().zip(&back) {
            for (x, y) in a.as_matrix().as_slice().iter().zip(b.as_matrix().as_slice()) {
                assert_eq!(x.re.to_bits(), y.re.to_bits());
                assert_eq!(x.im.to_bits(), y.im.to_bits());
            }
        }
    }

    #[test]
    fn floats_have_seventeen_digits() {
        assert_eq!(format_f64(1.0), "1.0000000000000000e0");
        let s = to_json_string(&serde_json::json!({"x": 0.1, "n": 3})).unwrap();
        assert!(s.contains("\"x\": 1.0000000000000001e-1"), "{s}");
        assert!(s.contains("\"n\": 3"));
    }

    #[test]
    fn rejects_non_hermitian_entry() {
        let text = r#"{"d": 2, "hamiltonians": [
            {"re": [[1, 0], [0, -1]], "im": [[0, 0], [0, 0]]},
            {"re": [[0, 1], [0.5, 0]], "im": [[0, 0], [0, 0]]}]}"#;
        let err = HamiltonianSetFile::parse(text).unwrap().matrices().unwrap_err().to_string();
        assert!(err.contains("hamiltonians[1]"), "{err}");
        assert!(err.contains("not Hermitian"), "{err}");
    }

    #[test]
    fn parse_errors_name_the_field() {
        let text = r#"{"d": 2, "hamiltonians": [{"re": [[1, 0], [0, "x"]], "im": [[0, 0], [0, 0]]}]}"#;
        let err = HamiltonianSetFile::parse(text).unwrap_err().to_string();
        assert!(err.contains("hamiltonians[0].re[1][1]"), "{err}");
        assert!(err.contains("line 1"), "{err}");
        let err = HamiltonianSetFile::parse(r#"{"d": 2, "hamiltonians": [{"re": [[1]], "im": [[0]]}]}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("2x2"), "{err}");
    }
}
