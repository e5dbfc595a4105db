//! The JSON model format and its assembly into a validated, runnable model.
//!
//! A model file carries the algebra (structure constants as sparse `[i, j, k,
//! value]` quadruples with i < j), the subalgebra indices, the inner product
//! on m (row-major), the drift vector, the φ choice, and optional config
//! overrides. Assembly runs every structural validation and produces field-
//! named diagnostics on bad input.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{ConfigOverrides, RunConfig};
use crate::lie::{self, AlgebraError, ReductiveDecomposition, StructureConstants, ValidatedAlgebra};
use crate::metric::{InnerProduct, MetricData, MetricError, PhiFamily, DEFAULT_S_MIN};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("cannot read model file: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid field '{field}': {message}")]
    Invalid { field: String, message: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

fn invalid(field: &str, message: impl Into<String>) -> ModelError {
    ModelError::Invalid {
        field: field.to_string(),
        message: message.into(),
    }
}

/// φ selection as written in the model file.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PhiSpec {
    pub family: String,
    #[serde(default)]
    pub params: PhiParams,
}

/// Union of the per-family parameters; which ones are legal depends on the
/// family and is checked during assembly.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PhiParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b0: Option<f64>,
}

impl PhiSpec {
    /// Resolve the description into a concrete family, rejecting out-of-place
    /// or out-of-range parameters with the offending field named.
    pub fn resolve(&self) -> Result<PhiFamily, ModelError> {
        let no_coeffs = |family: &str| -> Result<(), ModelError> {
            if self.params.coeffs.is_some() {
                return Err(invalid(
                    "phi.params.coeffs",
                    format!("not accepted by family '{family}'"),
                ));
            }
            Ok(())
        };
        let no_b0 = |family: &str| -> Result<(), ModelError> {
            if self.params.b0.is_some() {
                return Err(invalid(
                    "phi.params.b0",
                    format!("not accepted by family '{family}' (its bound is fixed)"),
                ));
            }
            Ok(())
        };
        let no_s_min = |family: &str| -> Result<(), ModelError> {
            if self.params.s_min.is_some() {
                return Err(invalid(
                    "phi.params.s_min",
                    format!("not accepted by family '{family}' (no domain guard needed)"),
                ));
            }
            Ok(())
        };
        let s_min = || -> Result<f64, ModelError> {
            let v = self.params.s_min.unwrap_or(DEFAULT_S_MIN);
            if !(v > 0.0 && v < 1.0) {
                return Err(invalid("phi.params.s_min", "must lie in (0, 1)"));
            }
            Ok(v)
        };
        match self.family.as_str() {
            "randers" => {
                no_coeffs("randers")?;
                no_b0("randers")?;
                no_s_min("randers")?;
                Ok(PhiFamily::Randers)
            }
            "kropina" => {
                no_coeffs("kropina")?;
                no_b0("kropina")?;
                Ok(PhiFamily::Kropina { s_min: s_min()? })
            }
            "matsumoto" => {
                no_coeffs("matsumoto")?;
                no_b0("matsumoto")?;
                Ok(PhiFamily::Matsumoto { s_min: s_min()? })
            }
            "polynomial" => {
                no_s_min("polynomial")?;
                let coeffs = self
                    .params
                    .coeffs
                    .clone()
                    .ok_or_else(|| invalid("phi.params.coeffs", "required for family 'polynomial'"))?;
                if coeffs.is_empty() {
                    return Err(invalid("phi.params.coeffs", "must be nonempty"));
                }
                if coeffs.iter().any(|c| !c.is_finite()) {
                    return Err(invalid("phi.params.coeffs", "entries must be finite"));
                }
                let b0 = self.params.b0.unwrap_or(f64::INFINITY);
                if b0.is_nan() || b0 <= 0.0 {
                    return Err(invalid("phi.params.b0", "must be positive"));
                }
                Ok(PhiFamily::Polynomial { coeffs, b0 })
            }
            other => Err(invalid(
                "phi.family",
                format!("unknown family '{other}' (expected randers, kropina, matsumoto, or polynomial)"),
            )),
        }
    }

    /// The file form of a concrete family (used when exporting models).
    pub fn from_family(phi: &PhiFamily) -> Self {
        match phi {
            PhiFamily::Randers => PhiSpec {
                family: "randers".into(),
                params: PhiParams::default(),
            },
            PhiFamily::Kropina { s_min } => PhiSpec {
                family: "kropina".into(),
                params: PhiParams {
                    s_min: Some(*s_min),
                    ..PhiParams::default()
                },
            },
            PhiFamily::Matsumoto { s_min } => PhiSpec {
                family: "matsumoto".into(),
                params: PhiParams {
                    s_min: Some(*s_min),
                    ..PhiParams::default()
                },
            },
            PhiFamily::Polynomial { coeffs, b0 } => PhiSpec {
                family: "polynomial".into(),
                params: PhiParams {
                    coeffs: Some(coeffs.clone()),
                    b0: b0.is_finite().then_some(*b0),
                    ..PhiParams::default()
                },
            },
        }
    }
}

/// On-disk model document.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub dim: usize,
    pub brackets: Vec<(usize, usize, usize, f64)>,
    pub h_indices: Vec<usize>,
    /// Row-major symmetric matrix over m-indices.
    pub metric: Vec<Vec<f64>>,
    /// Drift vector over m-indices.
    #[serde(rename = "X")]
    pub x: Vec<f64>,
    pub phi: PhiSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<ConfigOverrides>,
}

impl ModelFile {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ModelError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        serde_json::from_str(text).map_err(|e| ModelError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), ModelError> {
        let mut text = serde_json::to_string_pretty(self).expect("model serialization");
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }
}

/// Fully validated model: algebra, decomposition, metric, and the run config
/// after applying file-level overrides.
#[derive(Debug, Clone)]
pub struct Model {
    pub algebra: ValidatedAlgebra,
    pub decomposition: ReductiveDecomposition,
    pub metric: MetricData,
    pub config: RunConfig,
    /// Whether the file carried a config block (seed precedence cares).
    pub file_seed: Option<u64>,
}

impl Model {
    /// Validate and assemble a parsed model file. Tolerance overrides from the
    /// file's config block apply before structural validation (they set the
    /// Jacobi and reductivity tolerances used here).
    pub fn assemble(file: &ModelFile) -> Result<Self, ModelError> {
        let mut config = RunConfig::default();
        if let Some(overrides) = &file.config {
            config.apply(overrides);
        }
        let file_seed = file.config.as_ref().and_then(|c| c.seed);

        if file.dim == 0 {
            return Err(invalid("dim", "must be at least 1"));
        }
        for &(i, j, _, v) in &file.brackets {
            if i >= j {
                return Err(invalid(
                    "brackets",
                    format!("entry [{i}, {j}, ..] must have i < j (store each pair once, upper half)"),
                ));
            }
            if !v.is_finite() {
                return Err(invalid("brackets", format!("entry [{i}, {j}, ..] has a non-finite value")));
            }
        }
        let constants = StructureConstants::new(file.dim, &file.brackets)?;
        let algebra = ValidatedAlgebra::validate(constants, config.tolerances.jacobi)?;
        let decomposition = lie::decompose(&algebra, &file.h_indices, config.tolerances.nr)?;
        let m_dim = decomposition.m_dim();

        if file.metric.len() != m_dim {
            return Err(invalid(
                "metric",
                format!("expected {m_dim} rows (dim of m), got {}", file.metric.len()),
            ));
        }
        for (r, row) in file.metric.iter().enumerate() {
            if row.len() != m_dim {
                return Err(invalid(
                    "metric",
                    format!("row {r} has {} entries, expected {m_dim}", row.len()),
                ));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(invalid("metric", format!("row {r} has a non-finite entry")));
            }
        }
        let a = DMatrix::from_fn(m_dim, m_dim, |i, j| file.metric[i][j]);
        let inner = InnerProduct::new(a)?;

        if file.x.len() != m_dim {
            return Err(invalid(
                "X",
                format!("expected {m_dim} entries (dim of m), got {}", file.x.len()),
            ));
        }
        if file.x.iter().any(|v| !v.is_finite()) {
            return Err(invalid("X", "entries must be finite"));
        }
        let drift = DVector::from_vec(file.x.clone());
        let phi = file.phi.resolve()?;

        let metric = MetricData { inner, drift, phi };
        Ok(Model {
            algebra,
            decomposition,
            metric,
            config,
            file_seed,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ModelError> {
        Self::assemble(&ModelFile::load(path)?)
    }

    pub fn m_dim(&self) -> usize {
        self.decomposition.m_dim()
    }

    /// m-part of the bracket of two m-vectors, in m-coordinates.
    pub fn bracket_m(&self, u: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
        let w = self
            .algebra
            .bracket(&self.decomposition.embed(u), &self.decomposition.embed(v));
        self.decomposition.restrict_m(&w)
    }

    /// Full bracket of two m-vectors, in algebra coordinates.
    pub fn bracket_full(&self, u: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
        self.algebra
            .bracket(&self.decomposition.embed(u), &self.decomposition.embed(v))
    }

    /// Round-trip back to the file form (config overrides are not retained).
    pub fn to_file(&self) -> ModelFile {
        let m_dim = self.m_dim();
        let a = self.metric.inner.matrix();
        ModelFile {
            dim: self.algebra.dim(),
            brackets: self.algebra.constants().entries().to_vec(),
            h_indices: self.decomposition.h().to_vec(),
            metric: (0..m_dim)
                .map(|i| (0..m_dim).map(|j| a[(i, j)]).collect())
                .collect(),
            x: self.metric.drift.iter().copied().collect(),
            phi: PhiSpec::from_family(&self.metric.phi),
            config: None,
        }
    }
}
