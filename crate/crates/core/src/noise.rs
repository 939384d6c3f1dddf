//! Noise channels and seeded Monte-Carlo estimates of logical failure rates.
//!
//! Trial `k` of a run draws its error from [`rng::stream`]`(seed, k)`, so the
//! aggregated counts do not depend on how trials are scheduled over threads.

use std::io::Write;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::{CodeLayout, Dimension, LogicalClass};
use crate::decoder;
use crate::error::{Error, Result};
use crate::pauli::PauliOperator;
use crate::rng;
use crate::stats::{wilson_interval, Z_95};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NoiseModel {
    /// X component with probability `px` and Z component with probability
    /// `pz`, independently per site.
    IndependentXz { px: f64, pz: f64 },
    /// X, Y, Z each with probability `p / 3` per site.
    Depolarizing { p: f64 },
}

fn check_prob(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "{name} = {p} is not a probability"
        )));
    }
    Ok(())
}

impl NoiseModel {
    pub fn independent_xz(px: f64, pz: f64) -> Result<Self> {
        check_prob("px", px)?;
        check_prob("pz", pz)?;
        Ok(NoiseModel::IndependentXz { px, pz })
    }

    pub fn depolarizing(p: f64) -> Result<Self> {
        check_prob("p", p)?;
        Ok(NoiseModel::Depolarizing { p })
    }

    /// Marginal probabilities that a site carries an X component and a Z
    /// component.
    pub fn component_rates(&self) -> (f64, f64) {
        match *self {
            NoiseModel::IndependentXz { px, pz } => (px, pz),
            NoiseModel::Depolarizing { p } => (2.0 * p / 3.0, 2.0 * p / 3.0),
        }
    }
}

/// Which single-parameter family a threshold scan sweeps over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseKind {
    /// Z flips only.
    Z,
    /// X flips only.
    X,
    /// Independent X and Z flips at the same rate.
    Xz,
    Depolarizing,
}

impl NoiseKind {
    pub fn model(self, p: f64) -> Result<NoiseModel> {
        match self {
            NoiseKind::Z => NoiseModel::independent_xz(0.0, p),
            NoiseKind::X => NoiseModel::independent_xz(p, 0.0),
            NoiseKind::Xz => NoiseModel::independent_xz(p, p),
            NoiseKind::Depolarizing => NoiseModel::depolarizing(p),
        }
    }
}

impl std::str::FromStr for NoiseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "z" => Ok(NoiseKind::Z),
            "x" => Ok(NoiseKind::X),
            "xz" => Ok(NoiseKind::Xz),
            "depolarizing" | "depol" => Ok(NoiseKind::Depolarizing),
            other => Err(Error::Parse(format!("unknown noise kind {other:?}"))),
        }
    }
}

/// Draws one iid error pattern. Consumes two uniforms per site for
/// `IndependentXz` and one for `Depolarizing`.
pub fn sample_error<R: Rng + ?Sized>(
    model: &NoiseModel,
    layout: &CodeLayout,
    rng: &mut R,
) -> PauliOperator {
    let mut p = PauliOperator::identity(layout.num_sites());
    for s in 0..layout.num_sites() {
        let (x, z) = match *model {
            NoiseModel::IndependentXz { px, pz } => {
                (rng.random::<f64>() < px, rng.random::<f64>() < pz)
            }
            NoiseModel::Depolarizing { p } => {
                let u: f64 = rng.random();
                if u < p / 3.0 {
                    (true, false)
                } else if u < 2.0 * p / 3.0 {
                    (true, true)
                } else if u < p {
                    (false, true)
                } else {
                    (false, false)
                }
            }
        };
        p.set_x(s, x);
        p.set_z(s, z);
    }
    p.hermitian()
}

/// Residual-class tallies.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub gauge: u64,
    pub logical_x: u64,
    pub logical_y: u64,
    pub logical_z: u64,
}

impl ClassCounts {
    fn record(&mut self, class: &LogicalClass) {
        match class {
            LogicalClass::Gauge => self.gauge += 1,
            LogicalClass::LogicalX => self.logical_x += 1,
            LogicalClass::LogicalY => self.logical_y += 1,
            LogicalClass::LogicalZ => self.logical_z += 1,
            LogicalClass::Detectable(_) => unreachable!("decoder always returns to the code space"),
        }
    }

    fn merge(mut self, other: ClassCounts) -> ClassCounts {
        self.gauge += other.gauge;
        self.logical_x += other.logical_x;
        self.logical_y += other.logical_y;
        self.logical_z += other.logical_z;
        self
    }

    pub fn total(&self) -> u64 {
        self.gauge + self.logical_x + self.logical_y + self.logical_z
    }

    pub fn failures(&self) -> u64 {
        self.logical_x + self.logical_y + self.logical_z
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialStats {
    pub trials: u64,
    pub counts: ClassCounts,
    pub failure_rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
}

impl TrialStats {
    fn from_counts(counts: ClassCounts, seed: u64) -> Self {
        let trials = counts.total();
        let failures = counts.failures();
        let (ci_low, ci_high) = wilson_interval(failures, trials, Z_95);
        TrialStats {
            trials,
            counts,
            failure_rate: failures as f64 / trials as f64,
            ci_low,
            ci_high,
            seed,
        }
    }

    /// Standard error of the failure rate under the binomial model.
    pub fn std_error(&self) -> f64 {
        (self.failure_rate * (1.0 - self.failure_rate) / self.trials as f64).sqrt()
    }
}

/// Sample, measure, decode and adjudicate `trials` independent errors.
pub fn run_trials(
    layout: &CodeLayout,
    model: &NoiseModel,
    trials: u64,
    master_seed: u64,
) -> Result<TrialStats> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let counts = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = rng::stream(master_seed, k);
            let error = sample_error(model, layout, &mut rng);
            decoder::decode_and_adjudicate(layout, &error).expect("sampled error matches layout")
        })
        .fold(ClassCounts::default, |mut acc, class| {
            acc.record(&class);
            acc
        })
        .reduce(ClassCounts::default, ClassCounts::merge);
    Ok(TrialStats::from_counts(counts, master_seed))
}

/// One CSV row of a threshold scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdRecord {
    pub dimension: usize,
    pub n: usize,
    pub p_x: f64,
    pub p_z: f64,
    pub trials: u64,
    pub seed: u64,
    pub count_gauge: u64,
    pub count_lx: u64,
    pub count_ly: u64,
    pub count_lz: u64,
    pub failure_rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

pub const THRESHOLD_CSV_HEADER: &str =
    "dimension,n,p_x,p_z,trials,seed,count_gauge,count_lx,count_ly,count_lz,failure_rate,ci_low,ci_high";

/// Runs every `(n, p)` combination, `n` outermost. Every point reuses
/// `master_seed`.
pub fn threshold_scan(
    dimension: Dimension,
    n_list: &[usize],
    p_list: &[f64],
    noise: NoiseKind,
    trials: u64,
    master_seed: u64,
) -> Result<Vec<ThresholdRecord>> {
    if n_list.is_empty() || p_list.is_empty() {
        return Err(Error::InvalidParameter(
            "n and p lists must be non-empty".into(),
        ));
    }
    let layouts = n_list
        .iter()
        .map(|&n| CodeLayout::new(dimension, n))
        .collect::<Result<Vec<_>>>()?;
    let models = p_list
        .iter()
        .map(|&p| noise.model(p))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::with_capacity(layouts.len() * models.len());
    for layout in &layouts {
        for model in &models {
            let stats = run_trials(layout, model, trials, master_seed)?;
            let (p_x, p_z) = model.component_rates();
            out.push(ThresholdRecord {
                dimension: dimension.as_usize(),
                n: layout.n(),
                p_x,
                p_z,
                trials: stats.trials,
                seed: stats.seed,
                count_gauge: stats.counts.gauge,
                count_lx: stats.counts.logical_x,
                count_ly: stats.counts.logical_y,
                count_lz: stats.counts.logical_z,
                failure_rate: stats.failure_rate,
                ci_low: stats.ci_low,
                ci_high: stats.ci_high,
            });
        }
    }
    Ok(out)
}

pub fn write_threshold_csv<W: Write>(writer: W, records: &[ThresholdRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in records {
        w.serialize(r)?;
    }
    if records.is_empty() {
        w.write_record(THRESHOLD_CSV_HEADER.split(','))?;
    }
    w.flush()?;
    Ok(())
}
