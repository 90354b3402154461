//! JSON matrix files.
//!
//! ```json
//! {"dim": 2, "kind": "density", "matrix": [[[0.5, 0.0], [0.5, 0.0]], [[0.5, 0.0], [0.5, 0.0]]]}
//! ```
//!
//! Entries are `[re, im]` pairs, rows outermost. `kraus_channel` files carry
//! a `kraus` array of such matrices instead of `matrix`. Optional metadata
//! (`family`, `threshold`, `seed`, `generator`) is written by the generators
//! and ignored on load.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channels::KrausChannel;
use crate::error::TextureError;
use crate::linalg::{check_unitary, ComplexMatrix, HermitianOperator};
use crate::states::DensityMatrix;
use num_complex::Complex64;

/// Unitarity tolerance for loaded unitaries.
pub const UNITARY_LOAD_TOL: f64 = 1e-10;

type Rows = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixKind {
    Density,
    Hermitian,
    Unitary,
    KrausChannel,
}

impl MatrixKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MatrixKind::Density => "density",
            MatrixKind::Hermitian => "hermitian",
            MatrixKind::Unitary => "unitary",
            MatrixKind::KrausChannel => "kraus_channel",
        }
    }
}

#[derive(Debug, Error)]
pub enum InterchangeError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("field `{field}`: {reason}")]
    Field { field: String, reason: String },
    #[error("field `{field}`: {source}")]
    Invalid {
        field: String,
        #[source]
        source: TextureError,
    },
}

fn field_err(field: impl Into<String>, reason: impl Into<String>) -> InterchangeError {
    InterchangeError::Field {
        field: field.into(),
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub dim: usize,
    pub kind: MatrixKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Rows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kraus: Option<Vec<Rows>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
}

fn to_rows(m: &ComplexMatrix) -> Rows {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

fn from_rows(rows: &Rows, dim: usize, field: &str) -> Result<ComplexMatrix, InterchangeError> {
    if rows.len() != dim {
        return Err(field_err(field, format!("expected {dim} rows, found {}", rows.len())));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != dim {
            return Err(field_err(
                format!("{field}[{i}]"),
                format!("expected {dim} entries, found {}", row.len()),
            ));
        }
        for (j, e) in row.iter().enumerate() {
            if !(e[0].is_finite() && e[1].is_finite()) {
                return Err(field_err(format!("{field}[{i}][{j}]"), "entry is not finite"));
            }
        }
    }
    Ok(ComplexMatrix::from_fn(dim, dim, |i, j| {
        let [re, im] = rows[i][j];
        Complex64::new(re, im)
    }))
}

impl MatrixFile {
    fn square(kind: MatrixKind, m: &ComplexMatrix) -> Self {
        Self {
            dim: m.nrows(),
            kind,
            matrix: Some(to_rows(m)),
            kraus: None,
            family: None,
            threshold: None,
            seed: None,
            generator: None,
        }
    }

    pub fn from_density(rho: &DensityMatrix) -> Self {
        Self::square(MatrixKind::Density, rho.matrix())
    }

    pub fn from_hermitian(op: &HermitianOperator) -> Self {
        Self::square(MatrixKind::Hermitian, op.matrix())
    }

    pub fn from_unitary(u: &ComplexMatrix) -> Self {
        Self::square(MatrixKind::Unitary, u)
    }

    pub fn from_channel(ch: &KrausChannel) -> Self {
        Self {
            dim: ch.dim(),
            kind: MatrixKind::KrausChannel,
            matrix: None,
            kraus: Some(ch.kraus_ops().iter().map(to_rows).collect()),
            family: None,
            threshold: None,
            seed: None,
            generator: None,
        }
    }

    pub fn from_json(s: &str) -> Result<Self, InterchangeError> {
        let f: Self = serde_json::from_str(s)?;
        if f.dim == 0 {
            return Err(field_err("dim", "dimension must be positive"));
        }
        Ok(f)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("matrix files always serialize")
    }

    fn expect_kind(&self, allowed: &[MatrixKind]) -> Result<(), InterchangeError> {
        if allowed.contains(&self.kind) {
            return Ok(());
        }
        let names: Vec<&str> = allowed.iter().map(|k| k.as_str()).collect();
        Err(field_err(
            "kind",
            format!("expected {}, found {}", names.join(" or "), self.kind.as_str()),
        ))
    }

    /// The `matrix` field as a `dim × dim` matrix.
    pub fn square_matrix(&self) -> Result<ComplexMatrix, InterchangeError> {
        let rows = self
            .matrix
            .as_ref()
            .ok_or_else(|| field_err("matrix", "missing"))?;
        from_rows(rows, self.dim, "matrix")
    }

    fn invalid(source: TextureError) -> InterchangeError {
        InterchangeError::Invalid {
            field: "matrix".into(),
            source,
        }
    }

    pub fn to_density(&self) -> Result<DensityMatrix, InterchangeError> {
        self.expect_kind(&[MatrixKind::Density])?;
        DensityMatrix::from_matrix(self.square_matrix()?).map_err(Self::invalid)
    }

    /// Accepts `hermitian` and `density` files.
    pub fn to_hermitian(&self) -> Result<HermitianOperator, InterchangeError> {
        self.expect_kind(&[MatrixKind::Hermitian, MatrixKind::Density])?;
        HermitianOperator::new(self.square_matrix()?).map_err(Self::invalid)
    }

    pub fn to_unitary(&self) -> Result<ComplexMatrix, InterchangeError> {
        self.expect_kind(&[MatrixKind::Unitary])?;
        let u = self.square_matrix()?;
        check_unitary(&u, UNITARY_LOAD_TOL).map_err(Self::invalid)?;
        Ok(u)
    }

    pub fn to_channel(&self) -> Result<KrausChannel, InterchangeError> {
        self.expect_kind(&[MatrixKind::KrausChannel])?;
        let ops = self
            .kraus
            .as_ref()
            .ok_or_else(|| field_err("kraus", "missing"))?;
        if ops.is_empty() {
            return Err(field_err("kraus", "need at least one Kraus operator"));
        }
        let mats = ops
            .iter()
            .enumerate()
            .map(|(n, rows)| from_rows(rows, self.dim, &format!("kraus[{n}]")))
            .collect::<Result<Vec<_>, _>>()?;
        KrausChannel::new(mats).map_err(|source| InterchangeError::Invalid {
            field: "kraus".into(),
            source,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use crate::states::{random_mixed, TextureRng};

    #[test]
    fn density_round_trip_is_exact() {
        let mut rng = TextureRng::new(11);
        let rho = random_mixed(4, 3, &mut rng).unwrap();
        let s = MatrixFile::from_density(&rho).to_json();
        let back = MatrixFile::from_json(&s).unwrap().to_density().unwrap();
        assert_eq!(max_abs_diff(back.matrix(), rho.matrix()), 0.0);
    }

    #[test]
    fn diagnostics_name_the_field() {
        let s = r#"{"dim": 2, "kind": "density", "matrix": [[[1,0],[0,0]], [[0,0]]]}"#;
        let e = MatrixFile::from_json(s).unwrap().to_density().unwrap_err();
        assert!(e.to_string().contains("matrix[1]"), "{e}");
        let e = MatrixFile::from_json("{\"dim\": 2,\n \"kind\": \"nope\"}").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        let s = r#"{"dim": 2, "kind": "hermitian", "matrix": [[[1,0],[0,0]], [[0,0],[0,0]]]}"#;
        let e = MatrixFile::from_json(s).unwrap().to_density().unwrap_err();
        assert!(e.to_string().contains("kind"), "{e}");
    }
}
