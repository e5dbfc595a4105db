//! Run configuration: every tolerance, sample count, and seed used by the
//! workbench lives here so results are reproducible and overridable.

use serde::{Deserialize, Serialize};

/// Environment variable consulted for the RNG seed when neither the command
/// line nor the model file provides one.
pub const SEED_ENV: &str = "FRHS_SEED";

/// Default RNG seed.
pub const DEFAULT_SEED: u64 = 42;

/// Named comparison thresholds. All geometric checks read their tolerance from
/// this struct; nothing is hardcoded at call sites.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Maximum Jacobi residual accepted when validating structure constants.
    pub jacobi: f64,
    /// Bound for bilinear residuals: Riemannian natural reductivity,
    /// skew-adjointness of the adjoint action, drift orthogonality.
    pub nr: f64,
    /// Bound for the sampled fundamental-tensor reductivity residual.
    pub nr_finsler: f64,
    /// |phi'(r)| below this flags a sample as derivative-degenerate.
    pub phiprime: f64,
    /// alpha(y) at or below this counts as the zero vector.
    pub alpha_floor: f64,
    /// Gram determinants / curvature denominators at or below this are degenerate.
    pub denom_floor: f64,
    /// Allowed |K_general - K_closed| on a flag.
    pub curvature_agree: f64,
    /// Allowed relative error, closed-form fundamental tensor vs finite differences.
    pub g_fd_rel: f64,
    /// Allowed relative error, closed-form Cartan tensor vs finite differences.
    pub cartan_fd_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            jacobi: 1e-12,
            nr: 1e-10,
            nr_finsler: 1e-8,
            phiprime: 1e-8,
            alpha_floor: 1e-12,
            denom_floor: 1e-12,
            curvature_agree: 1e-8,
            g_fd_rel: 1e-6,
            cartan_fd_rel: 1e-4,
        }
    }
}

/// Partial tolerance set for overrides from a model file or the command line.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    pub jacobi: Option<f64>,
    pub nr: Option<f64>,
    pub nr_finsler: Option<f64>,
    pub phiprime: Option<f64>,
    pub alpha_floor: Option<f64>,
    pub denom_floor: Option<f64>,
    pub curvature_agree: Option<f64>,
    pub g_fd_rel: Option<f64>,
    pub cartan_fd_rel: Option<f64>,
}

impl ToleranceOverrides {
    pub fn is_empty(&self) -> bool {
        *self == Self::default()
    }

    /// Overlay another partial set; entries present in `other` win.
    pub fn overlay(&mut self, other: &ToleranceOverrides) {
        macro_rules! take {
            ($($f:ident),*) => { $( if let Some(v) = other.$f { self.$f = Some(v); } )* };
        }
        take!(
            jacobi,
            nr,
            nr_finsler,
            phiprime,
            alpha_floor,
            denom_floor,
            curvature_agree,
            g_fd_rel,
            cartan_fd_rel
        );
    }
}

impl Tolerances {
    /// Apply every override that is present.
    pub fn apply(&mut self, o: &ToleranceOverrides) {
        macro_rules! take {
            ($($f:ident),*) => { $( if let Some(v) = o.$f { self.$f = v; } )* };
        }
        take!(
            jacobi,
            nr,
            nr_finsler,
            phiprime,
            alpha_floor,
            denom_floor,
            curvature_agree,
            g_fd_rel,
            cartan_fd_rel
        );
    }
}

/// Full run configuration for sampling-based checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Seed for the deterministic sample generator.
    pub seed: u64,
    /// Number of accepted base vectors y per sampled check.
    pub n_samples: usize,
    /// Number of random probe directions appended to the basis directions.
    pub n_directions: usize,
    /// Point count of the convexity grid used by the admissibility check.
    pub convexity_grid: usize,
    pub tolerances: Tolerances,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            n_samples: 64,
            n_directions: 16,
            convexity_grid: 101,
            tolerances: Tolerances::default(),
        }
    }
}

/// Partial run configuration, as embedded in a model file under `config`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub seed: Option<u64>,
    pub n_samples: Option<usize>,
    pub n_directions: Option<usize>,
    pub convexity_grid: Option<usize>,
    #[serde(default, skip_serializing_if = "ToleranceOverrides::is_empty")]
    pub tolerances: ToleranceOverrides,
}

impl RunConfig {
    /// Apply every override that is present.
    pub fn apply(&mut self, o: &ConfigOverrides) {
        if let Some(v) = o.seed {
            self.seed = v;
        }
        if let Some(v) = o.n_samples {
            self.n_samples = v;
        }
        if let Some(v) = o.n_directions {
            self.n_directions = v;
        }
        if let Some(v) = o.convexity_grid {
            self.convexity_grid = v;
        }
        self.tolerances.apply(&o.tolerances);
    }
}

/// Seed from the environment, if set and parseable.
pub fn seed_from_env() -> Option<u64> {
    std::env::var(SEED_ENV).ok()?.trim().parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_apply_only_present_fields() {
        let mut cfg = RunConfig::default();
        let o = ConfigOverrides {
            seed: Some(7),
            n_samples: None,
            tolerances: ToleranceOverrides {
                nr_finsler: Some(1e-6),
                ..Default::default()
            },
            ..Default::default()
        };
        cfg.apply(&o);
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.n_samples, 64);
        assert_eq!(cfg.tolerances.nr_finsler, 1e-6);
        assert_eq!(cfg.tolerances.jacobi, 1e-12);
    }

    #[test]
    fn default_tolerances_are_pinned() {
        let t = Tolerances::default();
        assert_eq!(t.jacobi, 1e-12);
        assert_eq!(t.nr, 1e-10);
        assert_eq!(t.nr_finsler, 1e-8);
        assert_eq!(t.phiprime, 1e-8);
        assert_eq!(t.alpha_floor, 1e-12);
        assert_eq!(t.denom_floor, 1e-12);
        assert_eq!(t.curvature_agree, 1e-8);
        assert_eq!(t.g_fd_rel, 1e-6);
        assert_eq!(t.cartan_fd_rel, 1e-4);
    }
}
