//! Fundamental tensor g_y and Cartan torsion C_y of F = α·φ(β/α), in closed
//! form, together with the finite-difference oracles on F² that every closed
//! form is validated against:
//!
//!   g_y(u,v)    = ½ ∂²/∂s∂t F²(y + su + tv)|₀
//!   C_y(u,v,z)  = ¼ ∂³/∂s∂t∂w F²(y + su + tv + wz)|₀
//!
//! The closed forms are organized in the same blocks in which they are
//! usually stated: four blocks for g_y and five for 2C_y, all expressed in
//! the pairings ã(·,·) of the arguments with y and X and the φ-jet at r.

use nalgebra::{DMatrix, DVector};

use crate::metric::{cholesky_min_pivot, MetricData, MetricError, PhiJet};

/// Relative error with an absolute floor of 1: |a−b| / max(1, |a|, |b|).
pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

/// A base point y with everything about it cached: α, β, r, the φ-jet at r,
/// and A·y, A·X for O(m) pairings against further arguments.
#[derive(Debug, Clone)]
pub struct TensorSample<'m> {
    pub metric: &'m MetricData,
    pub y: DVector<f64>,
    pub alpha: f64,
    pub beta: f64,
    pub r: f64,
    pub jet: PhiJet,
    ay: DVector<f64>,
    ax: DVector<f64>,
    ayy: f64,
}

impl<'m> TensorSample<'m> {
    /// Cache a base point. Fails when α is at or below the floor or r falls
    /// outside the φ-domain.
    pub fn new(
        metric: &'m MetricData,
        y: DVector<f64>,
        alpha_floor: f64,
    ) -> Result<Self, MetricError> {
        let ay = metric.inner.apply(&y);
        let ayy = y.dot(&ay);
        let alpha = ayy.max(0.0).sqrt();
        if alpha <= alpha_floor {
            return Err(MetricError::NearZeroVector);
        }
        let ax = metric.inner.apply(&metric.drift);
        let beta = ax.dot(&y);
        let r = beta / alpha;
        let jet = metric.phi.derivs(r)?;
        Ok(Self {
            metric,
            y,
            alpha,
            beta,
            r,
            jet,
            ay,
            ax,
            ayy,
        })
    }

    /// F(y).
    pub fn f(&self) -> f64 {
        self.alpha * self.jet.phi
    }

    /// F(y)².
    pub fn f_sq(&self) -> f64 {
        let f = self.f();
        f * f
    }

    /// Closed-form fundamental tensor g_y(u, v), four blocks.
    pub fn g(&self, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        let av = self.metric.inner.apply(v);
        let uv = u.dot(&av);
        let uy = self.ay.dot(u);
        let vy = self.ay.dot(v);
        let xu = self.ax.dot(u);
        let xv = self.ax.dot(v);
        let (phi, d1, d2) = (self.jet.phi, self.jet.d1, self.jet.d2);
        let (al, ayy, xy) = (self.alpha, self.ayy, self.beta);

        let block1 = uv * phi * phi;
        let fac_v = xv / al - xy * vy / (ayy * al);
        let block2 = uy * phi * d1 * fac_v;
        let fac_u = xu * al - uy * xy / al;
        let block3 = (d1 * d1 + phi * d2) * fac_v * fac_u;
        let block4 = phi * d1 / al * (xu * vy - uv * xy);
        block1 + block2 + block3 + block4
    }

    /// g_y(y, w) through the linear-in-w identity
    /// ã(y,w)·(φ² − φφ′r) + ã(X,w)·φ′·F(y); used as the second, independent
    /// route to base-vector pairings.
    pub fn g_base_linear(&self, w: &DVector<f64>) -> f64 {
        let (phi, d1) = (self.jet.phi, self.jet.d1);
        self.ay.dot(w) * (phi * phi - phi * d1 * self.r) + self.ax.dot(w) * d1 * self.f()
    }

    /// 2·C_y(u, v, z), five blocks.
    pub fn two_c(&self, u: &DVector<f64>, v: &DVector<f64>, z: &DVector<f64>) -> f64 {
        let au = self.metric.inner.apply(u);
        let av = self.metric.inner.apply(v);
        let xu = self.ax.dot(u);
        let xv = self.ax.dot(v);
        let xz = self.ax.dot(z);
        let uy = self.ay.dot(u);
        let vy = self.ay.dot(v);
        let zy = self.ay.dot(z);
        let uv = au.dot(v);
        let uz = au.dot(z);
        let vz = av.dot(z);
        let PhiJet { phi, d1, d2, d3 } = self.jet;
        let (al, ayy, xy) = (self.alpha, self.ayy, self.beta);

        let c1 = 3.0 * d1 * d2 + phi * d3;
        let c2 = d1 * d1 + phi * d2;
        let b1 = (c1 / ayy)
            * (xv - vy * xy / ayy)
            * (xu * al - uy * xy / al)
            * (xz - zy * xy / ayy);
        let b2 = (c2 / ayy)
            * (xv - vy * xy / ayy)
            * (xu * zy - uz * xy - uy * xz + zy * uy * xy / ayy);
        let b3 = -(c2 / (ayy * al))
            * (xu * al - uy * xy / al)
            * (zy * xv + vz * xy + vy * xz - 3.0 * vy * xy * zy / ayy);
        let b4 = (c2 / ayy)
            * (xz - zy * xy / ayy)
            * (xu * vy - uv * xy + uy * xv - vy * uy * xy / ayy);
        let b5 = (phi * d1 / al)
            * (xu * vz + uv * xz + uz * xv
                - (zy * vy * xu + uv * xy * zy + uy * xv * zy) / ayy
                - (vz * uy * xy + vy * uz * xy + vy * uy * xz) / ayy
                + 3.0 * zy * vy * uy * xy / (ayy * ayy));
        b1 + b2 + b3 + b4 + b5
    }

    /// Cartan torsion C_y(u, v, z).
    pub fn cartan(&self, u: &DVector<f64>, v: &DVector<f64>, z: &DVector<f64>) -> f64 {
        0.5 * self.two_c(u, v, z)
    }

    /// g_y over the m-basis as an exactly symmetric matrix.
    pub fn g_matrix(&self) -> DMatrix<f64> {
        let n = self.y.len();
        let basis: Vec<DVector<f64>> = (0..n)
            .map(|i| DVector::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 }))
            .collect();
        let mut g = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let value = self.g(&basis[i], &basis[j]);
                g[(i, j)] = value;
                g[(j, i)] = value;
            }
        }
        g
    }

    /// Positive-definiteness of g_y over m.
    pub fn is_positive_definite(&self) -> PdCheck {
        let (pd, min_pivot) = cholesky_min_pivot(&self.g_matrix());
        PdCheck { pd, min_pivot }
    }
}

/// Result of the pointwise strong-convexity probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdCheck {
    pub pd: bool,
    pub min_pivot: f64,
}

/// Base step for both oracles: 1e−3·max(1, α(y)). A single plain stencil at
/// any fixed step loses several digits where high φ-derivatives blow up near
/// a one-sided domain boundary (φ = 1/s near its pole), so each oracle
/// evaluates the stencil at h and h/2 and Richardson-extrapolates, cancelling
/// the leading truncation term while keeping the step large enough to stay
/// clear of round-off.
pub const ORACLE_STEP_SCALE: f64 = 1e-3;

fn oracle_step(metric: &MetricData, y: &DVector<f64>, alpha_floor: f64) -> Result<f64, MetricError> {
    Ok(ORACLE_STEP_SCALE * metric.alpha(y, alpha_floor)?.max(1.0))
}

fn g_stencil(
    metric: &MetricData,
    y: &DVector<f64>,
    u: &DVector<f64>,
    v: &DVector<f64>,
    alpha_floor: f64,
    h: f64,
) -> Result<f64, MetricError> {
    let f2 = |s: f64, t: f64| -> Result<f64, MetricError> {
        metric.finsler_norm_sq(&(y + u * s + v * t), alpha_floor)
    };
    let stencil = f2(h, h)? - f2(h, -h)? - f2(-h, h)? + f2(-h, -h)?;
    Ok(0.5 * stencil / (4.0 * h * h))
}

/// Finite-difference oracle for g_y(u,v): central second mixed difference of
/// ½F², extrapolated from steps h and h/2 (fourth-order accurate). Errors if
/// any stencil point leaves the admissible cone; the wider stencil is probed
/// first so boundary crossings surface regardless of the refinement.
pub fn g_fd(
    metric: &MetricData,
    y: &DVector<f64>,
    u: &DVector<f64>,
    v: &DVector<f64>,
    alpha_floor: f64,
) -> Result<f64, MetricError> {
    let h = oracle_step(metric, y, alpha_floor)?;
    let coarse = g_stencil(metric, y, u, v, alpha_floor, h)?;
    let fine = g_stencil(metric, y, u, v, alpha_floor, 0.5 * h)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

fn cartan_stencil(
    metric: &MetricData,
    y: &DVector<f64>,
    u: &DVector<f64>,
    v: &DVector<f64>,
    z: &DVector<f64>,
    alpha_floor: f64,
    h: f64,
) -> Result<f64, MetricError> {
    let mut stencil = 0.0;
    for su in [1.0, -1.0] {
        for sv in [1.0, -1.0] {
            for sz in [1.0, -1.0] {
                let point = y + u * (su * h) + v * (sv * h) + z * (sz * h);
                stencil += su * sv * sz * metric.finsler_norm_sq(&point, alpha_floor)?;
            }
        }
    }
    Ok(0.25 * stencil / (8.0 * h * h * h))
}

/// Finite-difference oracle for C_y(u,v,z): central third mixed difference of
/// ¼F², extrapolated from steps h and h/2. The wider stencil is probed first,
/// so a boundary crossing raises DomainError before any refinement.
pub fn cartan_fd(
    metric: &MetricData,
    y: &DVector<f64>,
    u: &DVector<f64>,
    v: &DVector<f64>,
    z: &DVector<f64>,
    alpha_floor: f64,
) -> Result<f64, MetricError> {
    let h = oracle_step(metric, y, alpha_floor)?;
    let coarse = cartan_stencil(metric, y, u, v, z, alpha_floor, h)?;
    let fine = cartan_stencil(metric, y, u, v, z, alpha_floor, 0.5 * h)?;
    Ok((8.0 * fine - coarse) / 7.0)
}
