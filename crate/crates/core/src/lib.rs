//! Numerical workbench for invariant (α,β)-metrics on homogeneous spaces
//! given by Lie-algebra data.
//!
//! A model is a finite-dimensional real Lie algebra g (structure constants in
//! a fixed basis), a reductive decomposition g = h ⊕ m picked out by basis
//! indices, an inner product ã on m, a drift vector X ∈ m, and a choice of φ
//! from the supported families. From this the crate evaluates the Finsler
//! norm F = α·φ(β/α), its fundamental tensor and Cartan torsion in closed
//! form, checks natural reductivity by sampled criteria plus an algebraic
//! certificate, and computes flag curvature along two independent routes.
//! Every closed form is cross-checked against finite-difference oracles.

pub mod catalog;
pub mod config;
pub mod curvature;
pub mod exec;
pub mod lie;
pub mod metric;
pub mod model;
pub mod reductivity;
pub mod sample;
pub mod tensor;
pub mod verify;

pub use catalog::{CatalogEntry, CatalogError};
pub use config::{ConfigOverrides, RunConfig, Tolerances};
pub use curvature::{
    curvature_operator, flag_curvature_closed, flag_curvature_general, scan, ClosedFlagCurvature,
    CurvatureError, Flag, ScanOptions, ScanRow, ScanSummary, ScanTable,
};
pub use lie::{AlgebraError, ReductiveDecomposition, StructureConstants, ValidatedAlgebra};
pub use metric::{
    AdmissibilityReport, InnerProduct, MetricData, MetricError, PhiFamily, PhiJet,
};
pub use model::{Model, ModelError, ModelFile, PhiSpec};
pub use reductivity::{reductivity_verdict, ReductivityReport, Verdict};
pub use sample::{draw_samples, SampleError, SampleSet};
pub use tensor::{cartan_fd, g_fd, rel_err, PdCheck, TensorSample};
pub use verify::{verify_tensors, TensorVerification};
