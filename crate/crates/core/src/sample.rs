//! Seeded sampling of base vectors and probe directions. All randomness in
//! the crate flows through here, from a single user-visible seed, so every
//! run is reproducible.

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

use crate::config::RunConfig;
use crate::model::Model;
use crate::tensor::TensorSample;

#[derive(Debug, Error)]
pub enum SampleError {
    #[error(
        "could not draw {wanted} admissible base vectors: accepted {accepted}, rejected {rejected} \
         (φ-domain too narrow for this drift?)"
    )]
    Exhausted {
        wanted: usize,
        accepted: usize,
        rejected: usize,
    },
}

/// Base points on the ã-unit sphere (domain-filtered) plus a deterministic
/// pool of probe directions: the m-basis followed by random ã-unit vectors.
#[derive(Debug)]
pub struct SampleSet<'m> {
    pub samples: Vec<TensorSample<'m>>,
    pub rejected: usize,
    pub directions: Vec<DVector<f64>>,
}

fn unit_vector(rng: &mut ChaCha8Rng, model: &Model) -> DVector<f64> {
    let m = model.m_dim();
    loop {
        let v = DVector::from_fn(m, |_, _| StandardNormal.sample(rng));
        let norm = model.metric.inner.norm(&v);
        if norm > 1e-8 {
            return v / norm;
        }
    }
}

/// Draw `cfg.n_samples` base vectors on the ã-unit sphere, rejecting draws
/// outside the φ-domain, then `cfg.n_directions` probe directions. The
/// attempt budget is 100·n + 100; exceeding it reports how many draws the
/// domain rejected.
pub fn draw_samples<'m>(model: &'m Model, cfg: &RunConfig) -> Result<SampleSet<'m>, SampleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let wanted = cfg.n_samples;
    let budget = 100 * wanted + 100;
    let mut samples = Vec::with_capacity(wanted);
    let mut rejected = 0usize;
    let mut attempts = 0usize;
    while samples.len() < wanted {
        if attempts >= budget {
            return Err(SampleError::Exhausted {
                wanted,
                accepted: samples.len(),
                rejected,
            });
        }
        attempts += 1;
        let y = unit_vector(&mut rng, model);
        match TensorSample::new(&model.metric, y, cfg.tolerances.alpha_floor) {
            Ok(sample) => samples.push(sample),
            Err(_) => rejected += 1,
        }
    }
    let m = model.m_dim();
    let mut directions: Vec<DVector<f64>> = (0..m)
        .map(|i| DVector::from_fn(m, |r, _| if r == i { 1.0 } else { 0.0 }))
        .collect();
    directions.extend((0..cfg.n_directions).map(|_| unit_vector(&mut rng, model)));
    Ok(SampleSet {
        samples,
        rejected,
        directions,
    })
}
