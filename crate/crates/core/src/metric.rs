//! Scalar ingredients of an invariant (α,β)-metric F(y) = α(y)·φ(β(y)/α(y)):
//! the bilinear form ã on m, the drift vector X, the φ family with its first
//! three derivatives, and the strong-convexity admissibility check.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("metric matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("metric matrix is not symmetric at entry ({i},{j}): {a} vs {b}")]
    NotSymmetric { i: usize, j: usize, a: f64, b: f64 },
    #[error("metric matrix is not positive definite (smallest Cholesky pivot {pivot:.3e})")]
    NotPositiveDefinite { pivot: f64 },
    #[error("metric matrix must be nonempty")]
    Empty,
    #[error("phi family '{family}' is undefined at s = {s} (admissible range: {range})")]
    DomainError {
        family: &'static str,
        s: f64,
        range: String,
    },
    #[error("base vector is numerically zero (alpha below the floor)")]
    NearZeroVector,
}

/// Attempt a Cholesky factorization, reporting success and the smallest
/// diagonal pivot encountered (negative or zero on failure).
pub fn cholesky_min_pivot(a: &DMatrix<f64>) -> (bool, f64) {
    let n = a.nrows();
    let mut l = a.clone_owned();
    let mut min_pivot = f64::INFINITY;
    for j in 0..n {
        let mut d = l[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        min_pivot = min_pivot.min(d);
        if d <= 0.0 {
            return (false, min_pivot);
        }
        let root = d.sqrt();
        l[(j, j)] = root;
        for i in (j + 1)..n {
            let mut s = l[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / root;
        }
    }
    (true, min_pivot)
}

/// Symmetric positive definite bilinear form on m.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerProduct {
    a: DMatrix<f64>,
}

impl InnerProduct {
    pub fn new(a: DMatrix<f64>) -> Result<Self, MetricError> {
        if a.nrows() != a.ncols() {
            return Err(MetricError::NotSquare {
                rows: a.nrows(),
                cols: a.ncols(),
            });
        }
        if a.nrows() == 0 {
            return Err(MetricError::Empty);
        }
        for i in 0..a.nrows() {
            for j in (i + 1)..a.ncols() {
                if a[(i, j)] != a[(j, i)] {
                    return Err(MetricError::NotSymmetric {
                        i,
                        j,
                        a: a[(i, j)],
                        b: a[(j, i)],
                    });
                }
            }
        }
        let (pd, pivot) = cholesky_min_pivot(&a);
        if !pd {
            return Err(MetricError::NotPositiveDefinite { pivot });
        }
        Ok(Self { a })
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.a
    }

    /// ã(u, v) = uᵀ A v.
    pub fn inner(&self, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        (u.transpose() * &self.a * v)[(0, 0)]
    }

    /// ‖u‖_ã.
    pub fn norm(&self, u: &DVector<f64>) -> f64 {
        self.inner(u, u).sqrt()
    }

    /// A u, handy for repeated pairings against a fixed vector.
    pub fn apply(&self, u: &DVector<f64>) -> DVector<f64> {
        &self.a * u
    }
}

/// φ and its first three derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiJet {
    pub phi: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

/// The supported φ families. Each carries its own admissible s-range and the
/// convexity bound b0 on ‖X‖_ã.
#[derive(Debug, Clone, PartialEq)]
pub enum PhiFamily {
    /// φ(s) = 1 + s, b0 = 1.
    Randers,
    /// φ(s) = 1/s on the positive cone s ≥ s_min, b0 unbounded.
    Kropina { s_min: f64 },
    /// φ(s) = 1/(1−s) for s ≤ 1 − s_min, b0 = 1/2.
    Matsumoto { s_min: f64 },
    /// φ(s) = Σ c_k s^k with a caller-chosen b0 (infinite when unrestricted).
    Polynomial { coeffs: Vec<f64>, b0: f64 },
}

/// Default conic-domain margin for the singular families.
pub const DEFAULT_S_MIN: f64 = 0.05;

impl PhiFamily {
    pub fn name(&self) -> &'static str {
        match self {
            PhiFamily::Randers => "randers",
            PhiFamily::Kropina { .. } => "kropina",
            PhiFamily::Matsumoto { .. } => "matsumoto",
            PhiFamily::Polynomial { .. } => "polynomial",
        }
    }

    /// Upper bound on ‖X‖_ã for strong convexity.
    pub fn b0(&self) -> f64 {
        match self {
            PhiFamily::Randers => 1.0,
            PhiFamily::Kropina { .. } => f64::INFINITY,
            PhiFamily::Matsumoto { .. } => 0.5,
            PhiFamily::Polynomial { b0, .. } => *b0,
        }
    }

    /// Whether s lies in the family's admissible range.
    pub fn contains(&self, s: f64) -> bool {
        match self {
            PhiFamily::Randers | PhiFamily::Polynomial { .. } => s.is_finite(),
            PhiFamily::Kropina { s_min } => s >= *s_min,
            PhiFamily::Matsumoto { s_min } => s <= 1.0 - *s_min,
        }
    }

    fn domain_error(&self, s: f64) -> MetricError {
        let range = match self {
            PhiFamily::Randers | PhiFamily::Polynomial { .. } => "all finite s".to_string(),
            PhiFamily::Kropina { s_min } => format!("s >= {s_min}"),
            PhiFamily::Matsumoto { s_min } => format!("s <= {}", 1.0 - s_min),
        };
        MetricError::DomainError {
            family: self.name(),
            s,
            range,
        }
    }

    /// φ(s) and its first three derivatives.
    pub fn derivs(&self, s: f64) -> Result<PhiJet, MetricError> {
        if !self.contains(s) {
            return Err(self.domain_error(s));
        }
        Ok(match self {
            PhiFamily::Randers => PhiJet {
                phi: 1.0 + s,
                d1: 1.0,
                d2: 0.0,
                d3: 0.0,
            },
            PhiFamily::Kropina { .. } => {
                let inv = 1.0 / s;
                PhiJet {
                    phi: inv,
                    d1: -inv * inv,
                    d2: 2.0 * inv * inv * inv,
                    d3: -6.0 * inv * inv * inv * inv,
                }
            }
            PhiFamily::Matsumoto { .. } => {
                let inv = 1.0 / (1.0 - s);
                PhiJet {
                    phi: inv,
                    d1: inv * inv,
                    d2: 2.0 * inv * inv * inv,
                    d3: 6.0 * inv * inv * inv * inv,
                }
            }
            PhiFamily::Polynomial { coeffs, .. } => poly_jet(coeffs, s),
        })
    }
}

/// Value and first three derivatives of a polynomial by simultaneous Horner
/// recurrences; the d2/d3 accumulators carry φ″/2 and φ‴/6.
fn poly_jet(coeffs: &[f64], s: f64) -> PhiJet {
    let (mut p, mut d1, mut d2, mut d3) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for &c in coeffs.iter().rev() {
        d3 = d3 * s + d2;
        d2 = d2 * s + d1;
        d1 = d1 * s + p;
        p = p * s + c;
    }
    PhiJet {
        phi: p,
        d1,
        d2: 2.0 * d2,
        d3: 6.0 * d3,
    }
}

/// Everything scalar about the metric on m: form, drift, φ family.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricData {
    pub inner: InnerProduct,
    pub drift: DVector<f64>,
    pub phi: PhiFamily,
}

impl MetricData {
    /// α(y) = √ã(y,y); NearZeroVector at or below the floor.
    pub fn alpha(&self, y: &DVector<f64>, alpha_floor: f64) -> Result<f64, MetricError> {
        let a = self.inner.inner(y, y).max(0.0).sqrt();
        if a <= alpha_floor {
            return Err(MetricError::NearZeroVector);
        }
        Ok(a)
    }

    /// β(y) = ã(X, y). Linear, defined everywhere.
    pub fn beta(&self, y: &DVector<f64>) -> f64 {
        self.inner.inner(&self.drift, y)
    }

    /// r(y) = β(y)/α(y).
    pub fn r_value(&self, y: &DVector<f64>, alpha_floor: f64) -> Result<f64, MetricError> {
        Ok(self.beta(y) / self.alpha(y, alpha_floor)?)
    }

    /// F(y) = α(y)·φ(r(y)).
    pub fn finsler_norm(&self, y: &DVector<f64>, alpha_floor: f64) -> Result<f64, MetricError> {
        let alpha = self.alpha(y, alpha_floor)?;
        let jet = self.phi.derivs(self.beta(y) / alpha)?;
        Ok(alpha * jet.phi)
    }

    /// F(y)², the quantity all finite-difference oracles differentiate.
    pub fn finsler_norm_sq(&self, y: &DVector<f64>, alpha_floor: f64) -> Result<f64, MetricError> {
        let f = self.finsler_norm(y, alpha_floor)?;
        Ok(f * f)
    }

    /// Scan the strong-convexity condition φ(s) − s·φ′(s) + (b² − s²)·φ″(s)
    /// on an evenly spaced grid over [−b, b] with b = ‖X‖_ã, restricted to the
    /// family's admissible range. Also tracks min φ over the same grid.
    pub fn check_admissibility(&self, grid_points: usize) -> AdmissibilityReport {
        let b = self.inner.norm(&self.drift);
        let b0 = self.phi.b0();
        let norm_ok = b < b0;
        let n = grid_points.max(2);
        let mut skipped = 0usize;
        let mut convexity_min: Option<(f64, f64)> = None;
        let mut phi_min: Option<f64> = None;
        for i in 0..n {
            let s = -b + 2.0 * b * (i as f64) / ((n - 1) as f64);
            let jet = match self.phi.derivs(s) {
                Ok(j) => j,
                Err(_) => {
                    skipped += 1;
                    continue;
                }
            };
            let value = jet.phi - s * jet.d1 + (b * b - s * s) * jet.d2;
            if convexity_min.is_none_or(|(best, _)| value < best) {
                convexity_min = Some((value, s));
            }
            if phi_min.is_none_or(|best| jet.phi < best) {
                phi_min = Some(jet.phi);
            }
        }
        let pass = norm_ok
            && convexity_min.is_some_and(|(v, _)| v > 0.0)
            && phi_min.is_some_and(|v| v > 0.0);
        AdmissibilityReport {
            family: self.phi.name().to_string(),
            drift_norm: b,
            b0: b0.is_finite().then_some(b0),
            norm_ok,
            grid_points: n,
            grid_skipped: skipped,
            convexity_min: convexity_min.map(|(v, _)| v),
            convexity_argmin: convexity_min.map(|(_, s)| s),
            phi_min,
            pass,
        }
    }
}

/// Outcome of the admissibility scan. `pass` requires ‖X‖ < b0 together with
/// positive convexity values and positive φ over the admissible grid points;
/// a grid fully outside the φ domain fails. b0 = None means unbounded.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmissibilityReport {
    pub family: String,
    pub drift_norm: f64,
    pub b0: Option<f64>,
    pub norm_ok: bool,
    pub grid_points: usize,
    pub grid_skipped: usize,
    pub convexity_min: Option<f64>,
    pub convexity_argmin: Option<f64>,
    pub phi_min: Option<f64>,
    pub pass: bool,
}
