//! Flag curvature of naturally reductive models along two independent routes.
//!
//! Route 1 (general): K = g_y(R(u,y)y, u) / (g_y(y,y)·g_y(u,u) − g_y(y,u)²)
//! with the curvature operator R(u,y)y = ¼[y,[u,y]_m]_m + [y,[u,y]_h].
//!
//! Route 2 (closed): for an ã-orthonormal pair (y,u), with r = ã(X,y),
//! xu = ã(X,u), t = R(u,y)y and the φ-jet at r,
//!
//!   K·θ = (φ² − φφ′r)·ã(t,u)
//!       + (φφ′·xu − (φ′²+φφ″)·xu·r)·ã(t,y)
//!       + (φ′²+φφ″)·xu·ã(t,X),
//!   θ   = φ²·(φ² + φφ″·xu² − φφ′·r).
//!
//! On certified models ã(t,y) = 0 (skew-adjointness), so the middle term
//! drops; the scan tracks that reduced form's deviation as a diagnostic.

use nalgebra::DVector;
use serde::Serialize;
use thiserror::Error;

use crate::config::RunConfig;
use crate::exec;
use crate::metric::{MetricData, MetricError};
use crate::model::Model;
use crate::reductivity::Verdict;
use crate::sample::{draw_samples, SampleError};
use crate::tensor::{g_fd, TensorSample};

/// Minimum Gram determinant of the normalized flag pair for the plane to
/// count as two-dimensional.
pub const FLAG_INDEPENDENCE_FLOOR: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum CurvatureError {
    #[error("flag is degenerate (Gram determinant {gram_det:.3e} at or below the independence floor)")]
    DegenerateFlag { gram_det: f64 },
    #[error("closed-form denominator θ = {theta:.3e} is numerically zero")]
    ThetaNearZero { theta: f64 },
    #[error(
        "model verdict is {verdict:?}; the curvature formulas assume natural reductivity \
         (use force to compute anyway)"
    )]
    NotNaturallyReductive { verdict: Verdict },
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// An ã-orthonormalized flag: ‖y‖ = ‖u‖ = 1, ã(y,u) = 0.
#[derive(Debug, Clone)]
pub struct Flag {
    pub y: DVector<f64>,
    pub u: DVector<f64>,
}

impl Flag {
    /// Normalize y, check independence via the Gram determinant of the
    /// normalized pair, then Gram-Schmidt u against y.
    pub fn new(
        metric: &MetricData,
        y: &DVector<f64>,
        u: &DVector<f64>,
    ) -> Result<Self, CurvatureError> {
        let ny = metric.inner.norm(y);
        let nu = metric.inner.norm(u);
        if ny <= 1e-12 || nu <= 1e-12 {
            return Err(CurvatureError::DegenerateFlag { gram_det: 0.0 });
        }
        let yh = y / ny;
        let uh = u / nu;
        let c = metric.inner.inner(&yh, &uh);
        let gram_det = 1.0 - c * c;
        if gram_det <= FLAG_INDEPENDENCE_FLOOR {
            return Err(CurvatureError::DegenerateFlag { gram_det });
        }
        let perp = &uh - c * &yh;
        let u_unit = &perp / metric.inner.norm(&perp);
        Ok(Self { y: yh, u: u_unit })
    }
}

/// R(u,y)y = ¼[y,[u,y]_m]_m + [y,[u,y]_h], in m-coordinates. The second
/// bracket lands in m for reductive decompositions; its m-restriction is
/// taken for numerical hygiene.
pub fn curvature_operator(model: &Model, u: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
    let dec = &model.decomposition;
    let w = model.bracket_full(u, y);
    let wm = dec.project_m(&w);
    let wh = dec.project_h(&w);
    let yg = dec.embed(y);
    let term_m = dec.restrict_m(&model.algebra.bracket(&yg, &wm));
    let term_h = dec.restrict_m(&model.algebra.bracket(&yg, &wh));
    0.25 * term_m + term_h
}

/// General-definition flag curvature at the sample's base point with plane
/// mate u (any vector independent of y; the value depends only on the plane
/// and the flagpole). With `fd_numerator` the numerator pairing g_y(t, u) is
/// evaluated by the finite-difference oracle instead of the closed form.
pub fn flag_curvature_general(
    model: &Model,
    sample: &TensorSample<'_>,
    u: &DVector<f64>,
    cfg: &RunConfig,
    fd_numerator: bool,
) -> Result<f64, CurvatureError> {
    let y = &sample.y;
    let t = curvature_operator(model, u, y);
    let numerator = if fd_numerator {
        g_fd(&model.metric, y, &t, u, cfg.tolerances.alpha_floor)?
    } else {
        sample.g(&t, u)
    };
    let denominator = sample.g(y, y) * sample.g(u, u) - sample.g(y, u).powi(2);
    if denominator.abs() <= cfg.tolerances.denom_floor {
        return Err(CurvatureError::DegenerateFlag {
            gram_det: denominator,
        });
    }
    Ok(numerator / denominator)
}

/// Closed-form result: the full value, θ, and the reduced form without the
/// ã(t,y) term (which vanishes on certified models).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ClosedFlagCurvature {
    pub k: f64,
    pub theta: f64,
    pub k_reduced: f64,
}

/// Closed-form flag curvature. `sample` must sit at the flag's (unit) pole
/// and `u` must be the ã-orthonormal mate, as produced by [`Flag::new`].
pub fn flag_curvature_closed(
    model: &Model,
    sample: &TensorSample<'_>,
    u: &DVector<f64>,
    cfg: &RunConfig,
) -> Result<ClosedFlagCurvature, CurvatureError> {
    let y = &sample.y;
    let t = curvature_operator(model, u, y);
    let inner = &model.metric.inner;
    let r = sample.r;
    let jet = sample.jet;
    let (phi, d1, d2) = (jet.phi, jet.d1, jet.d2);
    let xu = inner.inner(&model.metric.drift, u);

    let tu = inner.inner(&t, u);
    let ty = inner.inner(&t, y);
    let tx = inner.inner(&t, &model.metric.drift);

    let coeff = d1 * d1 + phi * d2;
    let n1 = (phi * phi - phi * d1 * r) * tu;
    let n2 = (phi * d1 * xu - coeff * xu * r) * ty;
    let n3 = coeff * xu * tx;
    let theta = phi * phi * (phi * phi + phi * d2 * xu * xu - phi * d1 * r);
    if theta.abs() <= cfg.tolerances.denom_floor {
        return Err(CurvatureError::ThetaNearZero { theta });
    }
    Ok(ClosedFlagCurvature {
        k: (n1 + n2 + n3) / theta,
        theta,
        k_reduced: (n1 + n3) / theta,
    })
}

/// One scanned flag.
#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    pub y: Vec<f64>,
    pub u: Vec<f64>,
    pub r: f64,
    pub k_general: f64,
    pub k_closed: f64,
    pub delta: f64,
    pub theta: f64,
}

/// Scan aggregates.
#[derive(Debug, Clone, Serialize)]
pub struct ScanSummary {
    pub rows: usize,
    pub k_min: Option<f64>,
    pub k_max: Option<f64>,
    pub max_delta: Option<f64>,
    /// Worst deviation of the reduced closed form (middle term dropped).
    pub max_reduced_delta: Option<f64>,
    pub skipped_degenerate: usize,
    pub skipped_domain: usize,
    /// True when the scan ran despite a non-naturally-reductive verdict.
    pub forced: bool,
    pub fd_numerator: bool,
    /// max_delta within the two-route agreement tolerance.
    pub delta_pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanTable {
    pub rows: Vec<ScanRow>,
    pub summary: ScanSummary,
}

impl ScanTable {
    /// CSV rendering. Vector cells are space-joined coordinate lists; the
    /// header is a stable contract.
    pub fn to_csv(&self) -> String {
        fn join(v: &[f64]) -> String {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        }
        let mut out = String::from("y,u,r,K_general,K_closed,delta,theta\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                join(&row.y),
                join(&row.u),
                row.r,
                row.k_general,
                row.k_closed,
                row.delta,
                row.theta
            ));
        }
        out
    }
}

/// Scan shape and switches.
#[derive(Debug, Clone)]
pub struct ScanOptions {
    pub n_y: usize,
    pub n_planes: usize,
    pub force: bool,
    pub fd_numerator: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            n_y: 16,
            n_planes: 16,
            force: false,
            fd_numerator: false,
        }
    }
}

enum FlagOutcome {
    Row(Box<ScanRow>, f64),
    Degenerate,
    Domain,
}

/// Curvature scan over seeded flagpoles × pooled plane mates. Gated on the
/// natural-reductivity verdict unless forced. Rows come out in deterministic
/// order: flagpoles in draw order, mates in pool order.
pub fn scan(
    model: &Model,
    cfg: &RunConfig,
    verdict: Verdict,
    opts: &ScanOptions,
) -> Result<ScanTable, CurvatureError> {
    if verdict != Verdict::NaturallyReductive && !opts.force {
        return Err(CurvatureError::NotNaturallyReductive { verdict });
    }
    let mut draw_cfg = *cfg;
    draw_cfg.n_samples = opts.n_y;
    let set = draw_samples(model, &draw_cfg)?;
    let pool = &set.directions;

    let tasks = opts.n_y * opts.n_planes;
    let outcomes: Vec<FlagOutcome> = exec::map_indexed(tasks, |idx| {
        let sample_raw = &set.samples[idx / opts.n_planes];
        let mate = &pool[(idx % opts.n_planes) % pool.len()];
        let flag = match Flag::new(&model.metric, &sample_raw.y, mate) {
            Ok(flag) => flag,
            Err(_) => return FlagOutcome::Degenerate,
        };
        // Re-anchor the sample at the normalized pole; renormalization can
        // nudge r across a domain edge, which counts as a domain skip.
        let sample = match TensorSample::new(&model.metric, flag.y.clone(), cfg.tolerances.alpha_floor)
        {
            Ok(sample) => sample,
            Err(_) => return FlagOutcome::Domain,
        };
        let k_general =
            match flag_curvature_general(model, &sample, &flag.u, cfg, opts.fd_numerator) {
                Ok(k) => k,
                Err(CurvatureError::Metric(_)) => return FlagOutcome::Domain,
                Err(_) => return FlagOutcome::Degenerate,
            };
        let closed = match flag_curvature_closed(model, &sample, &flag.u, cfg) {
            Ok(c) => c,
            Err(_) => return FlagOutcome::Degenerate,
        };
        let row = ScanRow {
            y: flag.y.iter().copied().collect(),
            u: flag.u.iter().copied().collect(),
            r: sample.r,
            k_general,
            k_closed: closed.k,
            delta: (k_general - closed.k).abs(),
            theta: closed.theta,
        };
        FlagOutcome::Row(Box::new(row), (closed.k - closed.k_reduced).abs())
    });

    let mut rows = Vec::new();
    let mut skipped_degenerate = 0;
    let mut skipped_domain = 0;
    let mut max_reduced_delta: Option<f64> = None;
    for outcome in outcomes {
        match outcome {
            FlagOutcome::Row(row, reduced_delta) => {
                max_reduced_delta =
                    Some(max_reduced_delta.unwrap_or(0.0).max(reduced_delta));
                rows.push(*row);
            }
            FlagOutcome::Degenerate => skipped_degenerate += 1,
            FlagOutcome::Domain => skipped_domain += 1,
        }
    }
    let k_min = rows.iter().map(|r| r.k_general).fold(None, |acc: Option<f64>, k| {
        Some(acc.map_or(k, |a| a.min(k)))
    });
    let k_max = rows.iter().map(|r| r.k_general).fold(None, |acc: Option<f64>, k| {
        Some(acc.map_or(k, |a| a.max(k)))
    });
    let max_delta = rows.iter().map(|r| r.delta).fold(None, |acc: Option<f64>, d| {
        Some(acc.map_or(d, |a| a.max(d)))
    });
    let summary = ScanSummary {
        rows: rows.len(),
        k_min,
        k_max,
        max_delta,
        max_reduced_delta,
        skipped_degenerate,
        skipped_domain,
        forced: opts.force && verdict != Verdict::NaturallyReductive,
        fd_numerator: opts.fd_numerator,
        delta_pass: max_delta.is_none_or(|d| d <= cfg.tolerances.curvature_agree),
    };
    Ok(ScanTable { rows, summary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelFile;
    use crate::reductivity::reductivity_verdict;
    use crate::tensor::rel_err;

    fn su2_biinvariant() -> Model {
        let text = r#"{
            "dim": 3,
            "brackets": [[0, 1, 2, 1.0], [1, 2, 0, 1.0], [0, 2, 1, -1.0]],
            "h_indices": [],
            "metric": [[1,0,0],[0,1,0],[0,0,1]],
            "X": [0.0, 0.0, 0.0],
            "phi": {"family": "polynomial", "params": {"coeffs": [1.0]}}
        }"#;
        Model::assemble(&ModelFile::from_json(text).unwrap()).unwrap()
    }

    fn u2_model(x3: f64, phi: &str) -> Model {
        let text = format!(
            r#"{{
                "dim": 4,
                "brackets": [[0, 1, 2, 1.0], [1, 2, 0, 1.0], [0, 2, 1, -1.0]],
                "h_indices": [],
                "metric": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]],
                "X": [0.0, 0.0, 0.0, {x3}],
                "phi": {phi}
            }}"#
        );
        Model::assemble(&ModelFile::from_json(&text).unwrap()).unwrap()
    }

    fn so3_sphere() -> Model {
        let text = r#"{
            "dim": 3,
            "brackets": [[0, 1, 2, 1.0], [1, 2, 0, 1.0], [0, 2, 1, -1.0]],
            "h_indices": [2],
            "metric": [[1,0],[0,1]],
            "X": [0.0, 0.0],
            "phi": {"family": "polynomial", "params": {"coeffs": [1.0]}}
        }"#;
        Model::assemble(&ModelFile::from_json(text).unwrap()).unwrap()
    }

    const FLOOR: f64 = 1e-12;

    #[test]
    fn curvature_operator_on_su2_basis() {
        let model = su2_biinvariant();
        let e0 = DVector::from_vec(vec![1.0, 0.0, 0.0]);
        let e1 = DVector::from_vec(vec![0.0, 1.0, 0.0]);
        // ¼[e1,[e0,e1]] = ¼[e1,e2] = ¼e0
        let t = curvature_operator(&model, &e0, &e1);
        assert_eq!(t, DVector::from_vec(vec![0.25, 0.0, 0.0]));
    }

    #[test]
    fn curvature_operator_on_the_sphere_pair_uses_the_h_term() {
        let model = so3_sphere();
        let e0 = DVector::from_vec(vec![1.0, 0.0]);
        let e1 = DVector::from_vec(vec![0.0, 1.0]);
        // [e0,e1] = e2 ∈ h, so R(e0,e1)e1 = [e1,[e0,e1]_h] = [e1,e2] = e0
        let t = curvature_operator(&model, &e0, &e1);
        assert_eq!(t, DVector::from_vec(vec![1.0, 0.0]));
    }

    #[test]
    fn su2_biinvariant_flags_have_curvature_one_quarter() {
        let model = su2_biinvariant();
        let cfg = model.config;
        let flag = Flag::new(
            &model.metric,
            &DVector::from_vec(vec![0.6, -0.2, 0.75]),
            &DVector::from_vec(vec![0.1, 0.9, -0.3]),
        )
        .unwrap();
        let sample = TensorSample::new(&model.metric, flag.y.clone(), FLOOR).unwrap();
        let kg = flag_curvature_general(&model, &sample, &flag.u, &cfg, false).unwrap();
        let kc = flag_curvature_closed(&model, &sample, &flag.u, &cfg).unwrap();
        assert!(rel_err(kg, 0.25) < 1e-12, "general route {kg}");
        assert!(rel_err(kc.k, 0.25) < 1e-12, "closed route {}", kc.k);
        assert!(rel_err(kc.theta, 1.0) < 1e-12, "θ = φ⁴ = 1 for φ ≡ 1");
    }

    #[test]
    fn sphere_pair_has_curvature_one() {
        let model = so3_sphere();
        let cfg = model.config;
        let flag = Flag::new(
            &model.metric,
            &DVector::from_vec(vec![0.8, -0.6]),
            &DVector::from_vec(vec![0.3, 0.7]),
        )
        .unwrap();
        let sample = TensorSample::new(&model.metric, flag.y.clone(), FLOOR).unwrap();
        let kg = flag_curvature_general(&model, &sample, &flag.u, &cfg, false).unwrap();
        let kc = flag_curvature_closed(&model, &sample, &flag.u, &cfg).unwrap();
        assert!(rel_err(kg, 1.0) < 1e-12);
        assert!(rel_err(kc.k, 1.0) < 1e-12);
    }

    #[test]
    fn frozen_matsumoto_flag_value() {
        let model = u2_model(0.3, r#"{"family": "matsumoto"}"#);
        let cfg = model.config;
        let flag = Flag::new(
            &model.metric,
            &DVector::from_vec(vec![1.0, 0.2, -0.3, 0.25]),
            &DVector::from_vec(vec![0.1, 1.0, 0.4, -0.2]),
        )
        .unwrap();
        let sample = TensorSample::new(&model.metric, flag.y.clone(), FLOOR).unwrap();
        assert!((sample.r - 0.0686802819743445).abs() < 1e-14);
        let kg = flag_curvature_general(&model, &sample, &flag.u, &cfg, false).unwrap();
        let kc = flag_curvature_closed(&model, &sample, &flag.u, &cfg).unwrap();
        assert!(rel_err(kg, 0.19423036071224048) < 1e-12, "{kg}");
        assert!(rel_err(kc.k, 0.19423036071224048) < 1e-12, "{}", kc.k);
        assert!(rel_err(kc.theta, 1.24313234587235) < 1e-12, "{}", kc.theta);
        assert!((kg - kc.k).abs() < 1e-14);
        // the certificate holds for central drift, so the reduced form agrees
        assert!((kc.k - kc.k_reduced).abs() < 1e-14);
    }

    #[test]
    fn central_flags_on_u2_are_flat() {
        let model = u2_model(0.3, r#"{"family": "matsumoto"}"#);
        let cfg = model.config;
        // y = e1, mate e3: the plane meets the center, [u, y] = 0, so K = 0
        let flag = Flag::new(
            &model.metric,
            &DVector::from_vec(vec![0.0, 1.0, 0.0, 0.0]),
            &DVector::from_vec(vec![0.0, 0.0, 0.0, 1.0]),
        )
        .unwrap();
        let sample = TensorSample::new(&model.metric, flag.y.clone(), FLOOR).unwrap();
        let kg = flag_curvature_general(&model, &sample, &flag.u, &cfg, false).unwrap();
        let kc = flag_curvature_closed(&model, &sample, &flag.u, &cfg).unwrap();
        assert_eq!(kg, 0.0);
        assert_eq!(kc.k, 0.0);
        assert!(rel_err(kc.theta, 1.18) < 1e-12, "θ at r=0, xu=0.3: {}", kc.theta);
    }

    #[test]
    fn general_route_is_plane_invariant() {
        let model = u2_model(0.5, r#"{"family": "randers"}"#);
        let cfg = model.config;
        let flag = Flag::new(
            &model.metric,
            &DVector::from_vec(vec![1.0, 0.2, -0.3, 0.25]),
            &DVector::from_vec(vec![0.1, 1.0, 0.4, -0.2]),
        )
        .unwrap();
        let sample = TensorSample::new(&model.metric, flag.y.clone(), FLOOR).unwrap();
        let base = flag_curvature_general(&model, &sample, &flag.u, &cfg, false).unwrap();
        // same plane, different spanning mate
        let mate = 0.3 * &flag.y + 1.7 * &flag.u;
        let other = flag_curvature_general(&model, &sample, &mate, &cfg, false).unwrap();
        assert!(rel_err(base, other) < 1e-9, "{base} vs {other}");
    }

    #[test]
    fn fd_numerator_route_agrees() {
        let model = u2_model(0.5, r#"{"family": "randers"}"#);
        let cfg = model.config;
        let flag = Flag::new(
            &model.metric,
            &DVector::from_vec(vec![1.0, 0.2, -0.3, 0.25]),
            &DVector::from_vec(vec![0.1, 1.0, 0.4, -0.2]),
        )
        .unwrap();
        let sample = TensorSample::new(&model.metric, flag.y.clone(), FLOOR).unwrap();
        let closed = flag_curvature_general(&model, &sample, &flag.u, &cfg, false).unwrap();
        let fd = flag_curvature_general(&model, &sample, &flag.u, &cfg, true).unwrap();
        assert!(rel_err(closed, fd) < 1e-6, "{closed} vs {fd}");
    }

    #[test]
    fn degenerate_flags_are_rejected() {
        let model = su2_biinvariant();
        let y = DVector::from_vec(vec![0.6, -0.2, 0.75]);
        assert!(matches!(
            Flag::new(&model.metric, &y, &(2.0 * &y)),
            Err(CurvatureError::DegenerateFlag { .. })
        ));
        assert!(matches!(
            Flag::new(&model.metric, &y, &DVector::zeros(3)),
            Err(CurvatureError::DegenerateFlag { .. })
        ));
    }

    #[test]
    fn scan_routes_agree_across_families() {
        for (x3, phi) in [
            (0.5, r#"{"family": "randers"}"#),
            (0.3, r#"{"family": "matsumoto"}"#),
            (0.5, r#"{"family": "kropina"}"#),
        ] {
            let model = u2_model(x3, phi);
            let cfg = model.config;
            let verdict = reductivity_verdict(&model, &cfg).unwrap().verdict;
            assert_eq!(verdict, Verdict::NaturallyReductive, "{phi}");
            let opts = ScanOptions {
                n_y: 8,
                n_planes: 8,
                ..ScanOptions::default()
            };
            let table = scan(&model, &cfg, verdict, &opts).unwrap();
            assert_eq!(table.rows.len(), 64, "{phi}: no skips expected");
            assert!(table.summary.delta_pass, "{phi}");
            assert!(
                table.summary.max_delta.unwrap() <= cfg.tolerances.curvature_agree,
                "{phi}: {:?}",
                table.summary.max_delta
            );
            assert!(table.summary.max_reduced_delta.unwrap() <= 1e-12, "{phi}");
            assert!(!table.summary.forced);
        }
    }

    #[test]
    fn scan_is_deterministic() {
        let model = u2_model(0.5, r#"{"family": "randers"}"#);
        let cfg = model.config;
        let opts = ScanOptions {
            n_y: 4,
            n_planes: 6,
            ..ScanOptions::default()
        };
        let a = scan(&model, &cfg, Verdict::NaturallyReductive, &opts).unwrap();
        let b = scan(&model, &cfg, Verdict::NaturallyReductive, &opts).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        assert!(a.to_csv().starts_with("y,u,r,K_general,K_closed,delta,theta\n"));
        assert_eq!(a.to_csv().lines().count(), 1 + 24);
    }

    #[test]
    fn scan_gates_on_the_verdict_unless_forced() {
        let text = r#"{
            "dim": 3,
            "brackets": [[0, 1, 2, 1.0]],
            "h_indices": [],
            "metric": [[1,0,0],[0,1,0],[0,0,1]],
            "X": [0.0, 0.0, 0.5],
            "phi": {"family": "randers"}
        }"#;
        let model = Model::assemble(&ModelFile::from_json(text).unwrap()).unwrap();
        let cfg = model.config;
        let verdict = reductivity_verdict(&model, &cfg).unwrap().verdict;
        assert_eq!(verdict, Verdict::NotNaturallyReductive);
        let opts = ScanOptions {
            n_y: 4,
            n_planes: 4,
            ..ScanOptions::default()
        };
        assert!(matches!(
            scan(&model, &cfg, verdict, &opts),
            Err(CurvatureError::NotNaturallyReductive { .. })
        ));
        let forced = scan(
            &model,
            &cfg,
            verdict,
            &ScanOptions {
                force: true,
                ..opts
            },
        )
        .unwrap();
        assert!(forced.summary.forced, "the watermark must be set");
        assert!(!forced.rows.is_empty());
    }

    #[test]
    fn scan_k_bounds_bracket_the_known_values() {
        // u(2) with central drift: su(2)-planes have K > 0, central planes K = 0
        let model = u2_model(0.5, r#"{"family": "randers"}"#);
        let cfg = model.config;
        let opts = ScanOptions {
            n_y: 8,
            n_planes: 8,
            ..ScanOptions::default()
        };
        let table = scan(&model, &cfg, Verdict::NaturallyReductive, &opts).unwrap();
        let k_min = table.summary.k_min.unwrap();
        let k_max = table.summary.k_max.unwrap();
        assert!(k_min >= -1e-12, "no negative curvature on this model: {k_min}");
        assert!(k_max > 0.01, "some su(2)-plane content expected: {k_max}");
    }
}
