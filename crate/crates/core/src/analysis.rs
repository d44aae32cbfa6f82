//! Empirical complementary CDFs and log-log tail fits.
//!
//! Exponents are read off least-squares lines in log-log (power law) or
//! log-log-log (Weibull) coordinates, the way one reads them off a plot.

use std::fmt;
use std::io::Write;

use crate::error::{Error, Result};

/// Minimum number of CCDF points a fit range must contain.
pub const MIN_FIT_POINTS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CcdfPoint {
    pub x: f64,
    /// P(X > x)
    pub p_gt: f64,
    /// P(X >= x)
    pub p_ge: f64,
}

/// Empirical CCDF on its support. The last point of a sample-built CCDF has
/// `p_gt = 0`; [`EmpiricalCcdf::tail`] skips such points.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCcdf {
    points: Vec<CcdfPoint>,
    /// Number of underlying samples, when built from samples.
    samples: Option<usize>,
}

impl EmpiricalCcdf {
    /// CCDF evaluated at every distinct sample value.
    pub fn from_samples(samples: &[f64]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySamples);
        }
        if let Some(&bad) = samples.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::InvalidSample { value: bad });
        }
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len() as f64;
        let mut points = Vec::new();
        let mut k = 0;
        while k < sorted.len() {
            let x = sorted[k];
            let mut end = k;
            while end < sorted.len() && sorted[end] == x {
                end += 1;
            }
            points.push(CcdfPoint {
                x,
                p_gt: (sorted.len() - end) as f64 / n,
                p_ge: (sorted.len() - k) as f64 / n,
            });
            k = end;
        }
        Ok(EmpiricalCcdf {
            points,
            samples: Some(sorted.len()),
        })
    }

    /// CCDF from explicit `(x, P(X > x))` points, e.g. an exact curve.
    pub fn from_points(points: &[(f64, f64)]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySamples);
        }
        for w in points.windows(2) {
            if !(w[1].0 > w[0].0 && w[1].1 < w[0].1) {
                return Err(Error::param(
                    "ccdf",
                    "points must be strictly increasing in x and decreasing in P",
                ));
            }
        }
        if points
            .iter()
            .any(|&(x, p)| !(x > 0.0 && x.is_finite() && p > 0.0 && p <= 1.0))
        {
            return Err(Error::param("ccdf", "need x > 0 and P in (0, 1]"));
        }
        Ok(EmpiricalCcdf {
            points: points
                .iter()
                .map(|&(x, p)| CcdfPoint {
                    x,
                    p_gt: p,
                    p_ge: p,
                })
                .collect(),
            samples: None,
        })
    }

    pub fn points(&self) -> &[CcdfPoint] {
        &self.points
    }

    pub fn sample_count(&self) -> Option<usize> {
        self.samples
    }

    /// Points with `P(X > x) > 0`: strictly decreasing, all positive.
    pub fn tail(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points
            .iter()
            .filter(|p| p.p_gt > 0.0)
            .map(|p| (p.x, p.p_gt))
    }

    /// `P(X > x)` as a right-continuous step function.
    pub fn p_gt_at(&self, x: f64) -> f64 {
        match self.points.partition_point(|p| p.x <= x) {
            0 => self.points[0].p_ge,
            k => self.points[k - 1].p_gt,
        }
    }

    /// Resamples the CCDF on a geometric grid with `per_decade` points per
    /// decade, keeping only grid points with positive probability. Grid
    /// points that repeat the previous probability are dropped.
    pub fn log_binned(&self, per_decade: u32) -> EmpiricalCcdf {
        let per_decade = per_decade.max(1) as f64;
        let (lo, hi) = (self.points[0].x, self.points[self.points.len() - 1].x);
        let start = (lo.log10() * per_decade).ceil() as i64;
        let stop = (hi.log10() * per_decade).floor() as i64;
        let mut points: Vec<CcdfPoint> = Vec::new();
        for m in start..=stop {
            let x = 10f64.powf(m as f64 / per_decade);
            let p = self.p_gt_at(x);
            if p <= 0.0 {
                break;
            }
            if points.last().is_some_and(|last| last.p_gt <= p) {
                continue;
            }
            points.push(CcdfPoint {
                x,
                p_gt: p,
                p_ge: p,
            });
        }
        EmpiricalCcdf {
            points,
            samples: self.samples,
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x_s", "p_gt"])?;
        for (x, p) in self.tail() {
            w.write_record([x.to_string(), p.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn ccdf(samples: &[f64]) -> Result<EmpiricalCcdf> {
    EmpiricalCcdf::from_samples(samples)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailModel {
    PowerLaw,
    Weibull,
}

impl TailModel {
    pub fn as_str(self) -> &'static str {
        match self {
            TailModel::PowerLaw => "power_law",
            TailModel::Weibull => "weibull",
        }
    }
}

impl fmt::Display for TailModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailFit {
    pub model: TailModel,
    /// Power-law exponent alpha, or Weibull shape k.
    pub exponent: f64,
    /// Weibull scale; `None` for power laws.
    pub scale: Option<f64>,
    pub x_min: f64,
    pub x_max: f64,
    /// Coefficient of determination in the transformed coordinates.
    pub r2: f64,
    pub points: usize,
}

impl TailFit {
    pub const CSV_HEADER: [&'static str; 5] = ["model", "alpha_or_k", "x_min", "x_max", "r2"];

    pub fn csv_record(&self) -> [String; 5] {
        [
            self.model.as_str().to_string(),
            self.exponent.to_string(),
            self.x_min.to_string(),
            self.x_max.to_string(),
            self.r2.to_string(),
        ]
    }
}

#[derive(Debug, Clone, Copy)]
struct Line {
    slope: f64,
    intercept: f64,
    r2: f64,
}

fn least_squares(xs: &[f64], ys: &[f64]) -> Line {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let r2 = if syy > 0.0 {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Line {
        slope,
        intercept,
        r2,
    }
}

fn points_in_range(ccdf: &EmpiricalCcdf, x_min: f64, x_max: f64) -> Result<Vec<(f64, f64)>> {
    if !(x_min > 0.0 && x_max >= x_min) {
        return Err(Error::param(
            "x_min",
            format!("bad fit range [{x_min}, {x_max}]"),
        ));
    }
    Ok(ccdf
        .tail()
        .filter(|&(x, _)| x >= x_min && x <= x_max)
        .collect())
}

/// Least-squares line through `(ln x, ln P)`; `alpha = -slope`.
pub fn fit_power_law(ccdf: &EmpiricalCcdf, x_min: f64, x_max: f64) -> Result<TailFit> {
    let pts = points_in_range(ccdf, x_min, x_max)?;
    if pts.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientPoints {
            needed: MIN_FIT_POINTS,
            found: pts.len(),
        });
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let line = least_squares(&xs, &ys);
    Ok(TailFit {
        model: TailModel::PowerLaw,
        exponent: -line.slope,
        scale: None,
        x_min,
        x_max,
        r2: line.r2,
        points: pts.len(),
    })
}

/// Least-squares line through `(ln x, ln(-ln P))`; shape `k = slope`,
/// scale `exp(-intercept / k)`. Points with `P = 1` are skipped.
pub fn fit_weibull_tail(ccdf: &EmpiricalCcdf, x_min: f64, x_max: f64) -> Result<TailFit> {
    let pts: Vec<(f64, f64)> = points_in_range(ccdf, x_min, x_max)?
        .into_iter()
        .filter(|&(_, p)| p < 1.0)
        .collect();
    if pts.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientPoints {
            needed: MIN_FIT_POINTS,
            found: pts.len(),
        });
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| (-p.1.ln()).ln()).collect();
    let line = least_squares(&xs, &ys);
    let k = line.slope;
    Ok(TailFit {
        model: TailModel::Weibull,
        exponent: k,
        scale: (k != 0.0).then(|| (-line.intercept / k).exp()),
        x_min,
        x_max,
        r2: line.r2,
        points: pts.len(),
    })
}

/// Tuning of the cut-off heuristic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffParams {
    /// Grid density used to smooth the CCDF.
    pub per_decade: u32,
    /// Grid points backed by fewer samples above them are ignored.
    pub min_tail_count: f64,
    /// Shortfall below the extrapolated power law, in natural-log units.
    pub drop: f64,
    /// Consecutive grid points that must fall short.
    pub sustain: usize,
}

impl Default for CutoffParams {
    fn default() -> Self {
        CutoffParams {
            per_decade: 20,
            min_tail_count: 5.0,
            drop: 1.0,
            sustain: 3,
        }
    }
}

/// Heuristic cut-off detector.
///
/// The CCDF is resampled on a log grid, a power law is fitted to the lower
/// half of the grid's log-span, and the cut-off is the first grid point from
/// which the CCDF stays at least a factor `e^drop` below that power law for
/// `sustain` consecutive points (or until the grid ends, if at least two
/// points remain). Returns `None` when the tail never falls away.
pub fn detect_cutoff(ccdf: &EmpiricalCcdf) -> Result<Option<f64>> {
    detect_cutoff_with(ccdf, &CutoffParams::default())
}

pub fn detect_cutoff_with(ccdf: &EmpiricalCcdf, params: &CutoffParams) -> Result<Option<f64>> {
    const MIN_POINTS: usize = 10;
    let grid = ccdf.log_binned(params.per_decade);
    let floor = ccdf
        .sample_count()
        .map_or(0.0, |n| params.min_tail_count / n as f64);
    let pts: Vec<(f64, f64)> = grid.tail().filter(|&(_, p)| p >= floor).collect();
    if pts.len() < MIN_POINTS {
        return Err(Error::InsufficientPoints {
            needed: MIN_POINTS,
            found: pts.len(),
        });
    }
    let lx: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let lp: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let mid = lx[0] + 0.5 * (lx[lx.len() - 1] - lx[0]);
    let body = lx.iter().take_while(|&&x| x <= mid).count().max(3);
    let line = least_squares(&lx[..body], &lp[..body]);
    let short: Vec<bool> = lx
        .iter()
        .zip(&lp)
        .map(|(&x, &p)| p - (line.intercept + line.slope * x) < -params.drop)
        .collect();
    for k in 0..short.len() {
        let window = &short[k..(k + params.sustain).min(short.len())];
        if window.len() >= 2.min(params.sustain) && window.iter().all(|&s| s) {
            return Ok(Some(pts[k].0));
        }
    }
    Ok(None)
}

/// Fit settings shared by the CLI, sweeps and tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub x_min: f64,
    pub x_max: f64,
    /// Log-grid density the CCDF is resampled on before fitting; 0 fits the
    /// raw CCDF.
    pub per_decade: u32,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            x_min: 10.0,
            x_max: 300.0,
            per_decade: 20,
        }
    }
}

/// Everything derived from one duration sample set.
#[derive(Debug)]
pub struct TailAnalysis {
    pub ccdf: EmpiricalCcdf,
    pub power_law: Result<TailFit>,
    pub weibull: Result<TailFit>,
    pub cutoff: Result<Option<f64>>,
}

impl TailAnalysis {
    pub fn fits(&self) -> Vec<TailFit> {
        [&self.power_law, &self.weibull]
            .into_iter()
            .filter_map(|f| f.as_ref().ok().copied())
            .collect()
    }
}

pub fn analyze_samples(samples: &[f64], opts: &FitOptions) -> Result<TailAnalysis> {
    let ccdf = ccdf(samples)?;
    let fitted = if opts.per_decade == 0 {
        ccdf.clone()
    } else {
        ccdf.log_binned(opts.per_decade)
    };
    Ok(TailAnalysis {
        power_law: fit_power_law(&fitted, opts.x_min, opts.x_max),
        weibull: fit_weibull_tail(&fitted, opts.x_min, opts.x_max),
        cutoff: detect_cutoff(&ccdf),
        ccdf,
    })
}

/// Writes the two-row fit report for one duration kind.
pub fn write_fit_report<W: Write>(fits: &[TailFit], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TailFit::CSV_HEADER)?;
    for f in fits {
        w.write_record(f.csv_record())?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn uniform_open(rng: &mut ChaCha8Rng) -> f64 {
        1.0 - rng.random::<f64>()
    }

    // Inverse-CDF samplers used as independent oracles.
    fn pareto(n: usize, alpha: f64, x_m: f64, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| x_m * uniform_open(&mut rng).powf(-1.0 / alpha))
            .collect()
    }

    fn truncated_pareto(n: usize, alpha: f64, x_m: f64, cap: f64, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tail = (x_m / cap).powf(alpha);
        (0..n)
            .map(|_| {
                let u: f64 = rng.random();
                x_m * (1.0 - u * (1.0 - tail)).powf(-1.0 / alpha)
            })
            .collect()
    }

    fn weibull(n: usize, k: f64, scale: f64, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| scale * (-uniform_open(&mut rng).ln()).powf(1.0 / k))
            .collect()
    }

    fn exponential(n: usize, mean: f64, seed: u64) -> Vec<f64> {
        weibull(n, 1.0, mean, seed)
    }

    #[test]
    fn ccdf_counts() {
        let c = ccdf(&[1.0, 2.0, 2.0, 5.0]).unwrap();
        let got: Vec<(f64, f64, f64)> = c.points().iter().map(|p| (p.x, p.p_gt, p.p_ge)).collect();
        assert_eq!(
            got,
            vec![(1.0, 0.75, 1.0), (2.0, 0.25, 0.75), (5.0, 0.0, 0.25)]
        );
        assert_eq!(c.tail().collect::<Vec<_>>(), vec![(1.0, 0.75), (2.0, 0.25)]);
        assert_eq!(c.sample_count(), Some(4));
    }

    #[test]
    fn ccdf_degenerate() {
        let c = ccdf(&[3.0, 3.0, 3.0]).unwrap();
        assert_eq!(
            c.points(),
            &[CcdfPoint {
                x: 3.0,
                p_gt: 0.0,
                p_ge: 1.0
            }]
        );
        assert_eq!(c.tail().count(), 0);
        let c = ccdf(&[7.0]).unwrap();
        assert_eq!(c.points()[0].p_ge, 1.0);
    }

    #[test]
    fn ccdf_rejects_bad_input() {
        assert!(matches!(ccdf(&[]), Err(Error::EmptySamples)));
        assert!(matches!(
            ccdf(&[1.0, 0.0]),
            Err(Error::InvalidSample { .. })
        ));
        assert!(matches!(
            ccdf(&[f64::NAN]),
            Err(Error::InvalidSample { .. })
        ));
    }

    #[test]
    fn p_gt_is_right_continuous_step() {
        let c = ccdf(&[1.0, 2.0, 2.0, 5.0]).unwrap();
        assert_eq!(c.p_gt_at(0.5), 1.0);
        assert_eq!(c.p_gt_at(1.0), 0.75);
        assert_eq!(c.p_gt_at(1.9), 0.75);
        assert_eq!(c.p_gt_at(2.0), 0.25);
        assert_eq!(c.p_gt_at(9.0), 0.0);
    }

    #[test]
    fn log_binned_is_strictly_decreasing() {
        let c = ccdf(&pareto(10_000, 1.2, 1.0, 5)).unwrap();
        let b = c.log_binned(20);
        assert!(b.points().len() > 20);
        for w in b.points().windows(2) {
            assert!(w[1].x > w[0].x && w[1].p_gt < w[0].p_gt);
        }
        for p in b.points() {
            assert_eq!(p.p_gt, c.p_gt_at(p.x));
        }
    }

    #[test]
    fn power_law_recovers_pareto_exponent() {
        let c = ccdf(&pareto(100_000, 1.5, 1.0, 1)).unwrap();
        let fit = fit_power_law(&c, 1.0, 100.0).unwrap();
        assert!(
            (1.4..=1.6).contains(&fit.exponent),
            "alpha {}",
            fit.exponent
        );
        assert!(fit.r2 > 0.99);
    }

    #[test]
    fn power_law_exact_on_exact_points() {
        let pts: Vec<(f64, f64)> = (0..20)
            .map(|i| {
                let x = 10f64.powf(1.0 + i as f64 / 10.0);
                (x, 0.9 * (x / 10.0).powf(-1.7))
            })
            .collect();
        let c = EmpiricalCcdf::from_points(&pts).unwrap();
        let fit = fit_power_law(&c, 10.0, 1000.0).unwrap();
        assert!((fit.exponent - 1.7).abs() < 1e-9);
        assert!((fit.r2 - 1.0).abs() < 1e-12);
        let w = fit_weibull_tail(&c, 10.0, 1000.0).unwrap();
        assert!(w.r2 < fit.r2);
    }

    #[test]
    fn exponential_data_fits_power_law_worse() {
        let pl = fit_power_law(
            &ccdf(&pareto(20_000, 1.2, 1.0, 2)).unwrap().log_binned(20),
            1.0,
            100.0,
        )
        .unwrap();
        let ex = fit_power_law(
            &ccdf(&exponential(20_000, 20.0, 2)).unwrap().log_binned(20),
            1.0,
            100.0,
        )
        .unwrap();
        assert!(
            ex.r2 < pl.r2 - 0.05,
            "exp r2 {} vs pareto r2 {}",
            ex.r2,
            pl.r2
        );
    }

    #[test]
    fn weibull_recovers_shape() {
        let c = ccdf(&weibull(100_000, 0.8, 30.0, 3)).unwrap();
        let fit = fit_weibull_tail(&c, 1.0, 300.0).unwrap();
        assert!((0.7..=0.9).contains(&fit.exponent), "k {}", fit.exponent);
        let scale = fit.scale.unwrap();
        assert!((scale / 30.0 - 1.0).abs() < 0.1, "scale {scale}");
    }

    #[test]
    fn weibull_exact_on_exponential_curve() {
        let pts: Vec<(f64, f64)> = (1..30)
            .map(|i| (i as f64, (-(i as f64) / 8.0).exp()))
            .collect();
        let c = EmpiricalCcdf::from_points(&pts).unwrap();
        let fit = fit_weibull_tail(&c, 1.0, 29.0).unwrap();
        assert!((fit.exponent - 1.0).abs() < 1e-6);
        assert!((fit.scale.unwrap() - 8.0).abs() < 1e-6);
    }

    #[test]
    fn fits_need_enough_points() {
        let c = ccdf(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        assert!(matches!(
            fit_power_law(&c, 1.0, 3.0),
            Err(Error::InsufficientPoints {
                needed: 5,
                found: 3
            })
        ));
        assert!(fit_power_law(&c, 1.0, 5.0).is_ok());
        // P = 1 would be at x below the sample minimum; the first point has P < 1.
        assert!(fit_weibull_tail(&c, 1.0, 5.0).is_ok());
        assert!(fit_power_law(&c, 0.0, 5.0).is_err());
    }

    #[test]
    fn cutoff_absent_on_pure_power_law() {
        let pts: Vec<(f64, f64)> = (0..60)
            .map(|i| {
                let x = 10f64.powf(i as f64 / 20.0);
                (x, x.powf(-1.2))
            })
            .collect();
        assert_eq!(
            detect_cutoff(&EmpiricalCcdf::from_points(&pts).unwrap()).unwrap(),
            None
        );
        for seed in 0..5 {
            let c = ccdf(&pareto(100_000, 1.2, 1.0, seed)).unwrap();
            assert_eq!(detect_cutoff(&c).unwrap(), None, "seed {seed}");
        }
    }

    #[test]
    fn cutoff_on_truncated_pareto() {
        // Exponents in the range the simulator produces; steeper tails leave
        // too few samples near the cap at this sample size.
        for (alpha, seed) in [(1.0, 11), (1.0, 12), (1.2, 13), (1.2, 14), (1.2, 15)] {
            let c = ccdf(&truncated_pareto(100_000, alpha, 1.0, 500.0, seed)).unwrap();
            let x = detect_cutoff(&c).unwrap().expect("cut-off");
            assert!((300.0..=500.0).contains(&x), "alpha {alpha}: cut-off {x}");
        }
    }

    #[test]
    fn cutoff_early_on_exponential() {
        let c = ccdf(&exponential(100_000, 10.0, 4)).unwrap();
        let x = detect_cutoff(&c).unwrap().expect("cut-off");
        assert!(x < 50.0, "cut-off {x}");
    }

    #[test]
    fn cutoff_needs_points() {
        let c = ccdf(&[1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(
            detect_cutoff(&c),
            Err(Error::InsufficientPoints { .. })
        ));
    }

    #[test]
    fn csv_outputs() {
        let c = ccdf(&[1.0, 2.0, 2.0, 5.0]).unwrap();
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "x_s,p_gt\n1,0.75\n2,0.25\n"
        );
        let fit = TailFit {
            model: TailModel::PowerLaw,
            exponent: 1.25,
            scale: None,
            x_min: 10.0,
            x_max: 300.0,
            r2: 0.5,
            points: 9,
        };
        let mut buf = Vec::new();
        write_fit_report(&[fit], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "model,alpha_or_k,x_min,x_max,r2\npower_law,1.25,10,300,0.5\n"
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ccdf_scale_equivariant(
            samples in prop::collection::vec(0.01f64..1000.0, 1..200),
            c in 0.001f64..1000.0,
        ) {
            let a = ccdf(&samples).unwrap();
            let scaled: Vec<f64> = samples.iter().map(|s| s * c).collect();
            let b = ccdf(&scaled).unwrap();
            prop_assert_eq!(a.points().len(), b.points().len());
            for (p, q) in a.points().iter().zip(b.points()) {
                prop_assert_eq!(p.p_gt, q.p_gt);
                prop_assert_eq!(p.p_ge, q.p_ge);
                prop_assert!((q.x - p.x * c).abs() <= 1e-12 * q.x);
            }
        }

        #[test]
        fn alpha_invariant_under_rescaling(seed in 0u64..1000, c in 0.01f64..100.0) {
            let samples = pareto(2000, 1.3, 1.0, seed);
            let scaled: Vec<f64> = samples.iter().map(|s| s * c).collect();
            let fa = fit_power_law(&ccdf(&samples).unwrap(), 1.0, 1e6);
            let fb = fit_power_law(&ccdf(&scaled).unwrap(), c, c * 1e6);
            if let (Ok(fa), Ok(fb)) = (fa, fb) {
                prop_assert!((fa.exponent - fb.exponent).abs() < 1e-6);
            }
        }

        #[test]
        fn r2_in_unit_interval(samples in prop::collection::vec(0.01f64..1000.0, 10..300)) {
            let c = ccdf(&samples).unwrap();
            for fit in [fit_power_law(&c, 0.01, 1000.0), fit_weibull_tail(&c, 0.01, 1000.0)].into_iter().flatten() {
                prop_assert!((0.0..=1.0).contains(&fit.r2));
            }
        }
    }
}
