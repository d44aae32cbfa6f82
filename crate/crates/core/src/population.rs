//! Per-individual parameters: sociability, tolerance and kinematic limits.

use std::io::Write;

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Individual {
    pub id: usize,
    /// Number of surrounding individuals this person aims at.
    pub sociability: f64,
    /// Fractional slack around `sociability` that still feels comfortable.
    pub tolerance: f64,
    pub v_max: f64,
    pub a_max: f64,
}

impl Individual {
    /// Social comfort range `[s(1 - t), s(1 + t)]`.
    pub fn comfort_range(&self) -> (f64, f64) {
        (
            self.sociability * (1.0 - self.tolerance),
            self.sociability * (1.0 + self.tolerance),
        )
    }
}

/// A normal law given by its mean and variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalLaw {
    pub mean: f64,
    pub variance: f64,
}

impl NormalLaw {
    pub const fn new(mean: f64, variance: f64) -> Self {
        NormalLaw { mean, variance }
    }

    fn validate(&self, key: &str, strictly_positive: bool) -> Result<()> {
        if !(self.mean.is_finite() && self.variance.is_finite()) {
            return Err(Error::param(key, "mean and variance must be finite"));
        }
        if self.variance < 0.0 {
            return Err(Error::param(
                format!("{key}.var"),
                format!("variance {} < 0", self.variance),
            ));
        }
        if strictly_positive && self.mean <= 0.0 {
            return Err(Error::param(
                format!("{key}.mean"),
                format!("mean {} must be > 0", self.mean),
            ));
        }
        if !strictly_positive && self.mean < 0.0 {
            return Err(Error::param(
                format!("{key}.mean"),
                format!("mean {} must be >= 0", self.mean),
            ));
        }
        Ok(())
    }

    /// Draws until the value is nonnegative (or strictly positive).
    fn sample_truncated<R: Rng + ?Sized>(&self, rng: &mut R, strictly_positive: bool) -> f64 {
        if self.variance == 0.0 {
            return self.mean;
        }
        let normal = Normal::new(self.mean, self.variance.sqrt()).expect("validated normal law");
        loop {
            let x = normal.sample(rng);
            if x > 0.0 || (!strictly_positive && x == 0.0) {
                return x;
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PopulationParams {
    pub n: usize,
    pub sociability: NormalLaw,
    pub tolerance_low: f64,
    pub tolerance_high: f64,
    pub v_max: NormalLaw,
    pub a_max: NormalLaw,
}

impl Default for PopulationParams {
    fn default() -> Self {
        PopulationParams {
            n: 100,
            sociability: NormalLaw::new(2.5, 1.0),
            tolerance_low: 0.1,
            tolerance_high: 0.7,
            v_max: NormalLaw::new(1.34, 0.26),
            a_max: NormalLaw::new(1.3, 0.4),
        }
    }
}

impl PopulationParams {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::param("n", "population must be at least 1"));
        }
        self.sociability.validate("s", false)?;
        self.v_max.validate("vmax", true)?;
        self.a_max.validate("amax", true)?;
        let (lo, hi) = (self.tolerance_low, self.tolerance_high);
        if !(lo > 0.0 && lo <= hi && hi < 1.0) {
            return Err(Error::param(
                "t.low",
                format!("need 0 < t.low <= t.high < 1, got [{lo}, {hi}]"),
            ));
        }
        Ok(())
    }
}

/// Draws every individual's parameter vector, in id order.
pub fn sample_population<R: Rng + ?Sized>(
    params: &PopulationParams,
    rng: &mut R,
) -> Result<Vec<Individual>> {
    params.validate()?;
    let pop = (0..params.n)
        .map(|id| {
            let sociability = params.sociability.sample_truncated(rng, false);
            let tolerance = if params.tolerance_low == params.tolerance_high {
                params.tolerance_low
            } else {
                rng.random_range(params.tolerance_low..=params.tolerance_high)
            };
            let v_max = params.v_max.sample_truncated(rng, true);
            let a_max = params.a_max.sample_truncated(rng, true);
            Individual {
                id,
                sociability,
                tolerance,
                v_max,
                a_max,
            }
        })
        .collect();
    Ok(pop)
}

/// Writes `id,s,t,v_max,a_max` rows.
pub fn write_population_csv<W: Write>(population: &[Individual], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["id", "s", "t", "v_max", "a_max"])?;
    for ind in population {
        w.write_record([
            ind.id.to_string(),
            ind.sociability.to_string(),
            ind.tolerance.to_string(),
            ind.v_max.to_string(),
            ind.a_max.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
