//! Seeded random search for instances where `B_p ∧ B_q` exceeds the Hölder bound.
//!
//! Each trial draws from its own ChaCha stream, selected by the trial index,
//! so the result does not depend on how trials are spread over threads. The
//! reduction keeps the lexicographic maximum of `(gap, trial)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{bound_report, BoundReport};
use crate::error::{Error, Result};
use crate::family::{family_functions, FamilyParams};
use crate::measure::{DiscreteMeasure, ExponentPair, SampledFunction};

pub const MIN_ATOMS: usize = 2;
pub const MAX_ATOMS: usize = 256;
/// Lower end (exclusive) of the weight distribution; the upper end is 1.
pub const MIN_WEIGHT: f64 = 0.01;

/// Raw `(weights, f, g)` triple; the JSON instance format of the CLI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub weights: Vec<f64>,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
}

impl Instance {
    /// Weights uniform in `(0.01, 1]`, values uniform in `[low, high)`.
    pub fn random<R: Rng>(rng: &mut R, atoms: usize, low: f64, high: f64) -> Self {
        let weights = (0..atoms)
            .map(|_| 1.0 - (1.0 - MIN_WEIGHT) * rng.gen::<f64>())
            .collect();
        let mut value = || low + (high - low) * rng.gen::<f64>();
        let f = (0..atoms).map(|_| value()).collect();
        let g = (0..atoms).map(|_| value()).collect();
        Self { weights, f, g }
    }

    pub fn from_parts(mu: &DiscreteMeasure, f: &SampledFunction, g: &SampledFunction) -> Self {
        Self {
            weights: mu.weights().to_vec(),
            f: f.values().to_vec(),
            g: g.values().to_vec(),
        }
    }

    pub fn to_parts(&self) -> Result<(DiscreteMeasure, SampledFunction, SampledFunction)> {
        let mu = DiscreteMeasure::new(self.weights.clone())?;
        let f = SampledFunction::new(self.f.clone())?;
        let g = SampledFunction::new(self.g.clone())?;
        mu.check_paired(&f)?;
        mu.check_paired(&g)?;
        Ok((mu, f, g))
    }

    pub fn report(&self, e: ExponentPair) -> Result<BoundReport> {
        let (mu, f, g) = self.to_parts()?;
        bound_report(&mu, &f, &g, e)
    }
}

/// Generator for stream `index` under `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Instance `index` of a corpus whose atom counts vary uniformly in `atoms`.
pub fn corpus_instance(
    seed: u64,
    index: u64,
    atoms: std::ops::RangeInclusive<usize>,
    low: f64,
    high: f64,
) -> Instance {
    let mut rng = trial_rng(seed, index);
    let n = rng.gen_range(atoms);
    Instance::random(&mut rng, n, low, high)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchConfig {
    pub p: f64,
    pub atoms: usize,
    pub trials: u64,
    pub seed: u64,
    pub value_range: (f64, f64),
    /// `(m, w, t)` of a family instance to evaluate as trial 0.
    pub inject_family: Option<(f64, f64, f64)>,
}

impl SearchConfig {
    pub fn new(p: f64, atoms: usize, trials: u64, seed: u64) -> Self {
        Self {
            p,
            atoms,
            trials,
            seed,
            value_range: (0.0, 10.0),
            inject_family: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ExponentPair::new(self.p)?;
        if !(MIN_ATOMS..=MAX_ATOMS).contains(&self.atoms) {
            return Err(Error::usage(format!(
                "atoms must lie in [{MIN_ATOMS}, {MAX_ATOMS}], got {}",
                self.atoms
            )));
        }
        if self.trials == 0 {
            return Err(Error::usage("trials must be positive"));
        }
        let (low, high) = self.value_range;
        if !(low.is_finite() && high.is_finite() && low >= 0.0 && high > low) {
            return Err(Error::usage(format!(
                "value range must satisfy 0 <= low < high, got [{low}, {high})"
            )));
        }
        if let Some((m, w, t)) = self.inject_family {
            let params = FamilyParams::new(self.p, m, w)?;
            family_functions(&params, t)?;
        }
        Ok(())
    }

    /// The instance evaluated as trial `index`.
    pub fn instance(&self, index: u64) -> Result<Instance> {
        match (index, self.inject_family) {
            (0, Some((m, w, t))) => {
                let (mu, f, g) = family_functions(&FamilyParams::new(self.p, m, w)?, t)?;
                Ok(Instance::from_parts(&mu, &f, &g))
            }
            _ => {
                let (low, high) = self.value_range;
                Ok(Instance::random(&mut trial_rng(self.seed, index), self.atoms, low, high))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub p: f64,
    pub atoms: usize,
    pub trials: u64,
    pub seed: u64,
    /// Largest `symmetrized - holder` over all trials.
    pub best_gap: f64,
    pub best_trial: u64,
    pub best_instance: Instance,
    pub violations_found: u64,
}

#[derive(Clone, Copy)]
struct Tally {
    gap: f64,
    trial: u64,
    violations: u64,
}

impl Tally {
    fn merge(self, other: Tally) -> Tally {
        let best = match self.gap.total_cmp(&other.gap).then(self.trial.cmp(&other.trial)) {
            std::cmp::Ordering::Less => other,
            _ => self,
        };
        Tally {
            violations: self.violations + other.violations,
            ..best
        }
    }
}

fn evaluate(cfg: &SearchConfig, e: ExponentPair, trial: u64) -> Result<Tally> {
    let report = cfg.instance(trial)?.report(e)?;
    Ok(Tally {
        gap: report.gap(),
        trial,
        violations: u64::from(report.violates_holder_order),
    })
}

/// Runs on the current rayon pool.
pub fn random_search(cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate()?;
    let e = ExponentPair::new(cfg.p)?;
    let tally = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| evaluate(cfg, e, trial))
        .try_reduce_with(|a, b| Ok(a.merge(b)))
        .expect("at least one trial")?;
    Ok(SearchResult {
        p: cfg.p,
        atoms: cfg.atoms,
        trials: cfg.trials,
        seed: cfg.seed,
        best_gap: tally.gap,
        best_trial: tally.trial,
        best_instance: cfg.instance(tally.trial)?,
        violations_found: tally.violations,
    })
}

/// Runs on a dedicated pool of `threads` workers; the result is the same for any count.
pub fn random_search_with_threads(cfg: &SearchConfig, threads: usize) -> Result<SearchResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::usage(format!("cannot start {threads} worker threads: {e}")))?;
    pool.install(|| random_search(cfg))
}
