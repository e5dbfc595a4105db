//! Acceptance suite: one test per criterion, each printing a single
//! pass/fail line. Tolerances are pinned here as literals on purpose —
//! loosening a default elsewhere must not silently weaken this suite.

use std::process::Command;

use frhs_core::catalog;
use frhs_core::curvature::{scan, ScanOptions};
use frhs_core::reductivity::{reductivity_verdict, Verdict};
use frhs_core::tensor::{rel_err, TensorSample};
use frhs_core::verify::verify_tensors;
use nalgebra::DVector;

fn report(criterion: u32, what: &str, pass: bool, detail: &str) {
    println!(
        "criterion {criterion}: {} — {what} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed: {detail}");
}

/// Closed-form tensors vs finite-difference oracles on every catalog model.
#[test]
fn criterion_1_tensor_oracle_equivalence() {
    let mut worst_g = 0.0f64;
    let mut worst_cartan = 0.0f64;
    for e in catalog::entries() {
        let model = catalog::model(e.id).unwrap();
        let v = verify_tensors(&model, &model.config).unwrap();
        worst_g = worst_g.max(v.g_max_rel_err);
        worst_cartan = worst_cartan.max(v.cartan_max_rel_err);
    }
    let pass = worst_g <= 1e-6 && worst_cartan <= 1e-4;
    report(
        1,
        "closed forms match the oracles on all catalog models",
        pass,
        &format!("worst g {worst_g:.3e} ≤ 1e-6, worst cartan {worst_cartan:.3e} ≤ 1e-4"),
    );
}

/// The algebraic certificate and the sampled tensor criterion both hold on
/// the certified catalog models.
#[test]
fn criterion_2_certificate_and_sampled_criterion() {
    let mut worst = 0.0f64;
    let mut all_certified = true;
    for id in ["u2_randers", "u2_matsumoto", "u2_kropina", "su2_biinvariant"] {
        let model = catalog::model(id).unwrap();
        let r = reductivity_verdict(&model, &model.config).unwrap();
        all_certified &= r.certificate && r.verdict == Verdict::NaturallyReductive;
        worst = worst.max(r.finsler_nr.max_residual);
    }
    let pass = all_certified && worst <= 1e-8;
    report(
        2,
        "skew-adjointness + drift orthogonality certify, sampled residual small",
        pass,
        &format!("all certified: {all_certified}, worst sampled residual {worst:.3e} ≤ 1e-8"),
    );
}

/// The negative control fails with the known exact witness.
#[test]
fn criterion_3_negative_control() {
    let model = catalog::model("heisenberg_randers").unwrap();
    let r = reductivity_verdict(&model, &model.config).unwrap();
    let witness_exact = (r.riemannian_nr.max_residual - 1.0).abs() <= 1e-12
        && r.riemannian_nr.witness == Some([0, 1, 2]);
    let pass = witness_exact
        && !r.finsler_nr.pass
        && r.verdict == Verdict::NotNaturallyReductive;
    report(
        3,
        "heisenberg model fails with residual exactly 1 at triple (e0,e1,e2)",
        pass,
        &format!(
            "riemannian residual {} at {:?}, sampled pass {}",
            r.riemannian_nr.max_residual, r.riemannian_nr.witness, r.finsler_nr.pass
        ),
    );
}

/// Both curvature routes agree on a 16×16 scan, and the reduced closed form
/// (middle term dropped) agrees with the full one on certified models.
#[test]
fn criterion_4_two_route_agreement() {
    let mut worst_delta = 0.0f64;
    let mut worst_reduced = 0.0f64;
    for id in ["u2_randers", "u2_matsumoto"] {
        let model = catalog::model(id).unwrap();
        let opts = ScanOptions {
            n_y: 16,
            n_planes: 16,
            ..ScanOptions::default()
        };
        let table = scan(&model, &model.config, Verdict::NaturallyReductive, &opts).unwrap();
        assert_eq!(table.rows.len(), 256, "{id}: all flags should evaluate");
        worst_delta = worst_delta.max(table.summary.max_delta.unwrap());
        worst_reduced = worst_reduced.max(table.summary.max_reduced_delta.unwrap());
    }
    let pass = worst_delta <= 1e-8 && worst_reduced <= 1e-10;
    report(
        4,
        "general and closed flag-curvature routes agree on 16×16 scans",
        pass,
        &format!("max delta {worst_delta:.3e} ≤ 1e-8, max reduced delta {worst_reduced:.3e} ≤ 1e-10"),
    );
}

/// Riemannian reduction: constant curvature 1/4 on the bi-invariant model,
/// and φ ≡ 1 collapses g to ã and the Cartan tensor to zero.
#[test]
fn criterion_5_riemannian_reduction() {
    let model = catalog::model("su2_biinvariant").unwrap();
    let opts = ScanOptions {
        n_y: 16,
        n_planes: 16,
        ..ScanOptions::default()
    };
    let table = scan(&model, &model.config, Verdict::NaturallyReductive, &opts).unwrap();
    let mut worst_k = 0.0f64;
    for row in &table.rows {
        worst_k = worst_k.max((row.k_general - 0.25).abs());
    }

    let mut worst_g = 0.0f64;
    let mut worst_cartan = 0.0f64;
    for id in ["su2_biinvariant", "so3_sphere"] {
        let m = catalog::model(id).unwrap();
        let set = frhs_core::sample::draw_samples(&m, &m.config).unwrap();
        let dim = m.m_dim();
        let basis: Vec<DVector<f64>> = (0..dim)
            .map(|i| DVector::from_fn(dim, |r, _| if r == i { 1.0 } else { 0.0 }))
            .collect();
        for s in set.samples.iter().take(8) {
            let sample = TensorSample::new(&m.metric, s.y.clone(), 1e-12).unwrap();
            for u in &basis {
                for v in &basis {
                    worst_g = worst_g
                        .max(rel_err(sample.g(u, v), m.metric.inner.inner(u, v)));
                    for z in &basis {
                        worst_cartan = worst_cartan.max(sample.cartan(u, v, z).abs());
                    }
                }
            }
        }
    }
    let pass = worst_k <= 1e-10 && worst_g <= 1e-14 && worst_cartan <= 1e-12;
    report(
        5,
        "bi-invariant scan gives K = 1/4; φ ≡ 1 collapses to the Riemannian case",
        pass,
        &format!(
            "max |K - 1/4| {worst_k:.3e} ≤ 1e-10, g vs ã {worst_g:.3e} ≤ 1e-14, cartan {worst_cartan:.3e} ≤ 1e-12"
        ),
    );
}

/// Sampled flagpoles are geodesic vectors on every naturally reductive
/// catalog model, by two agreeing evaluation routes.
#[test]
fn criterion_6_geodesic_vectors() {
    let mut worst_residual = 0.0f64;
    let mut worst_route_delta = 0.0f64;
    for e in catalog::entries() {
        if e.verdict != Verdict::NaturallyReductive {
            continue;
        }
        let model = catalog::model(e.id).unwrap();
        let r = reductivity_verdict(&model, &model.config).unwrap();
        worst_residual = worst_residual.max(r.geodesic_vectors.max_residual);
        worst_route_delta = worst_route_delta.max(r.geodesic_vectors.route_delta);
    }
    let pass = worst_residual <= 1e-9 && worst_route_delta <= 1e-10;
    report(
        6,
        "g_y(y,[y,z]_m) vanishes on NR models, linear and full routes agree",
        pass,
        &format!(
            "max residual {worst_residual:.3e} ≤ 1e-9, route delta {worst_route_delta:.3e} ≤ 1e-10"
        ),
    );
}

/// Homogeneity and symmetry identities across all catalog models.
#[test]
fn criterion_7_homogeneity_and_symmetry() {
    let mut worst = 0.0f64;
    for e in catalog::entries() {
        let model = catalog::model(e.id).unwrap();
        let mut cfg = model.config;
        cfg.n_samples = 8;
        let set = frhs_core::sample::draw_samples(&model, &cfg).unwrap();
        let dim = model.m_dim();
        let basis: Vec<DVector<f64>> = (0..dim)
            .map(|i| DVector::from_fn(dim, |r, _| if r == i { 1.0 } else { 0.0 }))
            .collect();
        for s in &set.samples {
            let sample = TensorSample::new(&model.metric, s.y.clone(), 1e-12).unwrap();
            for lambda in [0.5, 3.0] {
                let scaled =
                    TensorSample::new(&model.metric, lambda * &s.y, 1e-12).unwrap();
                // F(λy) = λ·F(y)
                worst = worst.max(rel_err(scaled.f(), lambda * sample.f()));
                for u in &basis {
                    for v in &basis {
                        // g_{λy} = g_y
                        worst = worst.max(rel_err(scaled.g(u, v), sample.g(u, v)));
                        // C_{λy} = λ⁻¹·C_y
                        worst = worst.max(rel_err(
                            scaled.cartan(u, v, &basis[0]),
                            sample.cartan(u, v, &basis[0]) / lambda,
                        ));
                    }
                }
            }
            let u = &basis[0];
            let v = &basis[dim - 1];
            let z = &basis[dim / 2];
            // symmetry of g, total symmetry of C, C_y(y,·,·) = 0
            worst = worst.max(rel_err(sample.g(u, v), sample.g(v, u)));
            let c = sample.cartan(u, v, z);
            for perm in [
                sample.cartan(u, z, v),
                sample.cartan(v, u, z),
                sample.cartan(v, z, u),
                sample.cartan(z, u, v),
                sample.cartan(z, v, u),
            ] {
                worst = worst.max(rel_err(c, perm));
            }
            worst = worst.max(sample.cartan(&sample.y, u, v).abs());
        }
    }
    let pass = worst <= 1e-12;
    report(
        7,
        "homogeneity of F, g, C and the symmetry identities hold on all catalog models",
        pass,
        &format!("worst deviation {worst:.3e} ≤ 1e-12"),
    );
}

/// Two runs of the curvature command with the same seed emit byte-identical
/// CSV.
#[test]
fn criterion_8_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let model_path = dir.path().join("model.json");
    let bin = env!("CARGO_BIN_EXE_frhs");
    let export = Command::new(bin)
        .args(["catalog", "export", "u2_randers"])
        .arg(&model_path)
        .output()
        .unwrap();
    assert!(export.status.success());
    let mut outputs = Vec::new();
    for run in 0..2 {
        let csv_path = dir.path().join(format!("scan{run}.csv"));
        let output = Command::new(bin)
            .arg("curvature")
            .arg(&model_path)
            .args(["--ny", "8", "--nplanes", "8", "--seed", "42", "-o"])
            .arg(&csv_path)
            .output()
            .unwrap();
        assert!(output.status.success());
        outputs.push(std::fs::read(&csv_path).unwrap());
    }
    let pass = outputs[0] == outputs[1] && !outputs[0].is_empty();
    report(
        8,
        "repeated curvature runs with one seed give byte-identical CSV",
        pass,
        &format!("{} bytes, identical: {}", outputs[0].len(), outputs[0] == outputs[1]),
    );
}
