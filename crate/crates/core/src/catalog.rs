//! Built-in reference models with known verdicts and, where applicable,
//! known constant flag curvature. They double as regression anchors and as
//! ready-made inputs for the command-line tools.

use thiserror::Error;

use crate::model::{Model, ModelError, ModelFile, PhiParams, PhiSpec};
use crate::reductivity::Verdict;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown catalog id {id:?} (known ids: {known})")]
    UnknownId { id: String, known: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A named reference model together with its expected behaviour.
#[derive(Debug, Clone, Copy)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub summary: &'static str,
    pub verdict: Verdict,
    /// Constant flag curvature, when the model has one.
    pub constant_curvature: Option<f64>,
}

const ENTRIES: [CatalogEntry; 6] = [
    CatalogEntry {
        id: "su2_biinvariant",
        summary: "compact 3-dimensional group, bi-invariant metric, no drift; every flag has curvature 1/4",
        verdict: Verdict::NaturallyReductive,
        constant_curvature: Some(0.25),
    },
    CatalogEntry {
        id: "u2_randers",
        summary: "compact 3-dimensional group times a central line, drift 0.5 along the center, randers deformation",
        verdict: Verdict::NaturallyReductive,
        constant_curvature: None,
    },
    CatalogEntry {
        id: "u2_matsumoto",
        summary: "same algebra as u2_randers with drift 0.3 along the center and the matsumoto deformation",
        verdict: Verdict::NaturallyReductive,
        constant_curvature: None,
    },
    CatalogEntry {
        id: "u2_kropina",
        summary: "same algebra as u2_randers with the kropina deformation; sampling rejects the half-space where the one-sided domain fails",
        verdict: Verdict::NaturallyReductive,
        constant_curvature: None,
    },
    CatalogEntry {
        id: "heisenberg_randers",
        summary: "3-dimensional nilpotent group with central drift; fails the sampled criterion with an explicit witness",
        verdict: Verdict::NotNaturallyReductive,
        constant_curvature: None,
    },
    CatalogEntry {
        id: "so3_sphere",
        summary: "the round 2-sphere as a quotient (isotropy spanned by the third basis vector), no drift; every flag has curvature 1",
        verdict: Verdict::NaturallyReductive,
        constant_curvature: Some(1.0),
    },
];

/// All entries, in stable listing order.
pub fn entries() -> &'static [CatalogEntry] {
    &ENTRIES
}

fn known_ids() -> String {
    ENTRIES
        .iter()
        .map(|e| e.id)
        .collect::<Vec<_>>()
        .join(", ")
}

/// Look up an entry by id.
pub fn entry(id: &str) -> Result<&'static CatalogEntry, CatalogError> {
    ENTRIES
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| CatalogError::UnknownId {
            id: id.to_string(),
            known: known_ids(),
        })
}

fn identity(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

fn phi(family: &str) -> PhiSpec {
    PhiSpec {
        family: family.to_string(),
        params: PhiParams::default(),
    }
}

fn phi_poly(coeffs: &[f64]) -> PhiSpec {
    PhiSpec {
        family: "polynomial".to_string(),
        params: PhiParams {
            coeffs: Some(coeffs.to_vec()),
            ..PhiParams::default()
        },
    }
}

/// Structure constants of the compact 3-dimensional simple algebra in an
/// orthonormal basis: [e0,e1] = e2, [e1,e2] = e0, [e2,e0] = e1.
fn so3_brackets() -> Vec<(usize, usize, usize, f64)> {
    vec![
        (0, 1, 2, 1.0),
        (1, 2, 0, 1.0),
        (0, 2, 1, -1.0),
    ]
}

fn u2_file(drift: f64, phi: PhiSpec) -> ModelFile {
    ModelFile {
        dim: 4,
        brackets: so3_brackets(),
        h_indices: vec![],
        metric: identity(4),
        x: vec![0.0, 0.0, 0.0, drift],
        phi,
        config: None,
    }
}

/// The serializable model description for a catalog id.
pub fn model_file(id: &str) -> Result<ModelFile, CatalogError> {
    let file = match id {
        "su2_biinvariant" => ModelFile {
            dim: 3,
            brackets: so3_brackets(),
            h_indices: vec![],
            metric: identity(3),
            x: vec![0.0; 3],
            phi: phi_poly(&[1.0]),
            config: None,
        },
        "u2_randers" => u2_file(0.5, phi("randers")),
        "u2_matsumoto" => u2_file(0.3, phi("matsumoto")),
        "u2_kropina" => u2_file(0.5, phi("kropina")),
        "heisenberg_randers" => ModelFile {
            dim: 3,
            brackets: vec![(0, 1, 2, 1.0)],
            h_indices: vec![],
            metric: identity(3),
            x: vec![0.0, 0.0, 0.5],
            phi: phi("randers"),
            config: None,
        },
        "so3_sphere" => ModelFile {
            dim: 3,
            brackets: so3_brackets(),
            h_indices: vec![2],
            metric: identity(2),
            x: vec![0.0; 2],
            phi: phi_poly(&[1.0]),
            config: None,
        },
        _ => {
            return Err(CatalogError::UnknownId {
                id: id.to_string(),
                known: known_ids(),
            })
        }
    };
    Ok(file)
}

/// Assemble a catalog model, validating it like any user input.
pub fn model(id: &str) -> Result<Model, CatalogError> {
    Ok(Model::assemble(&model_file(id)?)?)
}
