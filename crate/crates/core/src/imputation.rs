//! Missing-citation imputation: damage protocol, metrics, baselines and the
//! experiment drivers.

use std::fmt::Write as _;

use log::{debug, info};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::CitationComplex;
use crate::seed::{derive, stage};
use crate::snn::{train, SnnModel, TrainConfig};
use crate::spectral::HodgeLaplacian;

/// Rates used when none are given.
pub const DEFAULT_RATES: [f64; 5] = [0.1, 0.2, 0.3, 0.4, 0.5];

/// Relative tolerance for an imputed value to count as correct.
pub const ACCURACY_TOLERANCE: f64 = 0.10;

/// A damaged cochain: missing entries replaced by the median of the known ones.
#[derive(Clone, Debug, PartialEq)]
pub struct ImputationTask {
    pub truth: Vec<f64>,
    pub damaged: Vec<f64>,
    pub known: Vec<bool>,
    /// The median that was written into the missing entries.
    pub fill: f64,
}

impl ImputationTask {
    pub fn missing_count(&self) -> usize {
        self.known.iter().filter(|&&k| !k).count()
    }

    pub fn known_values(&self) -> Vec<f64> {
        self.damaged
            .iter()
            .zip(&self.known)
            .filter(|(_, &k)| k)
            .map(|(&v, _)| v)
            .collect()
    }

    /// `damaged` with the missing entries taken from `prediction`.
    pub fn merge(&self, prediction: &[f64]) -> Vec<f64> {
        self.damaged
            .iter()
            .zip(prediction)
            .zip(&self.known)
            .map(|((&d, &p), &k)| if k { d } else { p })
            .collect()
    }
}

/// Median; the mean of the two middle values for an even count.
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample standard deviation (n − 1 denominator); zero for a single value.
pub fn sample_std(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    (values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (values.len() - 1) as f64).sqrt()
}

/// Number of entries removed at `rate`: round(rate·n), at least one.
pub fn missing_count(n: usize, rate: f64) -> usize {
    ((rate * n as f64).round() as usize).max(1)
}

/// Removes round(rate·n) (at least one) uniformly chosen entries and fills
/// them with the median of the rest.
pub fn damage(cochain: &[f64], rate: f64, seed: u64) -> Result<ImputationTask> {
    let n = cochain.len();
    if !(rate > 0.0 && rate < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "missing rate must lie in (0, 1), got {rate}"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 entries to damage, got {n}"
        )));
    }
    let count = missing_count(n, rate);
    if count >= n {
        return Err(Error::InvalidParameter(format!(
            "rate {rate} would remove all {n} entries"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut known = vec![true; n];
    for i in rand::seq::index::sample(&mut rng, n, count) {
        known[i] = false;
    }
    Ok(damage_with_mask(cochain, known))
}

/// Damage with an explicit mask (`true` = known).
pub fn damage_with_mask(cochain: &[f64], known: Vec<bool>) -> ImputationTask {
    let known_vals: Vec<f64> = cochain
        .iter()
        .zip(&known)
        .filter(|(_, &k)| k)
        .map(|(&v, _)| v)
        .collect();
    let fill = median(&known_vals);
    let damaged = cochain
        .iter()
        .zip(&known)
        .map(|(&v, &k)| if k { v } else { fill })
        .collect();
    ImputationTask {
        truth: cochain.to_vec(),
        damaged,
        known,
        fill,
    }
}

fn check_missing(imputed: &[f64], truth: &[f64], known: &[bool]) -> Result<usize> {
    if imputed.len() != truth.len() || truth.len() != known.len() {
        return Err(Error::ShapeMismatch {
            expected: format!("{} entries everywhere", truth.len()),
            actual: format!("{} imputed, {} mask", imputed.len(), known.len()),
        });
    }
    let missing = known.iter().filter(|&&k| !k).count();
    if missing == 0 {
        return Err(Error::InvalidParameter(
            "no missing entries to score".into(),
        ));
    }
    Ok(missing)
}

/// True when `imputed` is within 10% of `truth` (inclusive; exact match when truth is 0).
pub fn is_correct(imputed: f64, truth: f64) -> bool {
    (imputed - truth).abs() <= ACCURACY_TOLERANCE * truth.abs()
}

/// Percentage of missing entries imputed within 10% of their true value.
pub fn accuracy(imputed: &[f64], truth: &[f64], known: &[bool]) -> Result<f64> {
    let missing = check_missing(imputed, truth, known)?;
    let correct = imputed
        .iter()
        .zip(truth)
        .zip(known)
        .filter(|(_, &k)| !k)
        .filter(|((&p, &t), _)| is_correct(p, t))
        .count();
    Ok(100.0 * correct as f64 / missing as f64)
}

/// |imputed − true| for each missing entry, in simplex order.
pub fn abs_error_distribution(imputed: &[f64], truth: &[f64], known: &[bool]) -> Result<Vec<f64>> {
    check_missing(imputed, truth, known)?;
    Ok(imputed
        .iter()
        .zip(truth)
        .zip(known)
        .filter(|(_, &k)| !k)
        .map(|((p, t), _)| (p - t).abs())
        .collect())
}

/// One histogram bin `[low, high)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bin {
    pub low: f64,
    pub high: f64,
    pub count: usize,
}

/// Above this many bins only the non-empty ones are listed.
pub const MAX_DENSE_BINS: usize = 10_000;

/// Bins non-negative errors with width `bin_width`, starting at 0. Empty input
/// gives no bins; a range needing more than [`MAX_DENSE_BINS`] bins lists only
/// the non-empty ones.
pub fn histogram(errors: &[f64], bin_width: f64) -> Result<Vec<Bin>> {
    if !(bin_width.is_finite() && bin_width > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "bin width must be positive, got {bin_width}"
        )));
    }
    if let Some(e) = errors.iter().find(|e| !(e.is_finite() && **e >= 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "errors must be finite and non-negative, got {e}"
        )));
    }
    let Some(max) = errors.iter().copied().reduce(f64::max) else {
        return Ok(Vec::new());
    };
    let index = |e: f64| (e / bin_width).floor() as u64;
    let bin = |i: u64, count: usize| Bin {
        low: i as f64 * bin_width,
        high: (i + 1) as f64 * bin_width,
        count,
    };
    let last = index(max);
    if last < MAX_DENSE_BINS as u64 {
        let mut counts = vec![0usize; last as usize + 1];
        for &e in errors {
            counts[index(e) as usize] += 1;
        }
        return Ok(counts
            .into_iter()
            .enumerate()
            .map(|(i, c)| bin(i as u64, c))
            .collect());
    }
    let mut sparse = std::collections::BTreeMap::new();
    for &e in errors {
        *sparse.entry(index(e)).or_insert(0usize) += 1;
    }
    Ok(sparse.into_iter().map(|(i, c)| bin(i, c)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Statistic {
    Mean,
    Median,
}

/// Fills every missing entry with the mean or median of the known entries.
pub fn baseline_global(task: &ImputationTask, statistic: Statistic) -> Vec<f64> {
    let known = task.known_values();
    let v = match statistic {
        Statistic::Mean => mean(&known),
        Statistic::Median => median(&known),
    };
    task.known
        .iter()
        .zip(&task.damaged)
        .map(|(&k, &d)| if k { d } else { v })
        .collect()
}

/// Fills each missing k-simplex with the mean of the cochain values on its
/// faces (dimension k−1) and cofaces (dimension k+1). Neighbour dimensions are
/// undamaged. A simplex with neither falls back to the global median.
pub fn baseline_neighbors_mean(
    task: &ImputationTask,
    cc: &CitationComplex,
    dimension: usize,
) -> Result<Vec<f64>> {
    let complex = cc.complex();
    let n = complex.count(dimension);
    if task.truth.len() != n {
        return Err(Error::ShapeMismatch {
            expected: format!("{n} entries for dimension {dimension}"),
            actual: format!("{}", task.truth.len()),
        });
    }
    let below = dimension
        .checked_sub(1)
        .and_then(|p| cc.cochain(p))
        .map(|c| c.values());
    let above = cc.cochain(dimension + 1).map(|c| c.values());
    let fallback = median(&task.known_values());
    let mut out = task.damaged.clone();
    for i in (0..n).filter(|&i| !task.known[i]) {
        let mut vals: Vec<f64> = Vec::new();
        if let Some(b) = below {
            vals.extend(complex.face_positions(dimension, i).iter().map(|&f| b[f]));
        }
        if let Some(a) = above {
            vals.extend(complex.coface_positions(dimension, i).iter().map(|&t| a[t]));
        }
        out[i] = if vals.is_empty() {
            debug!(
                "simplex {i} of dimension {dimension} has no neighbours; using the global median"
            );
            fallback
        } else {
            mean(&vals)
        };
    }
    Ok(out)
}

/// Imputation methods compared in an experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Method {
    Snn,
    GlobalMean,
    GlobalMedian,
    NeighborsMean,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Snn,
        Method::GlobalMean,
        Method::GlobalMedian,
        Method::NeighborsMean,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Snn => "snn",
            Method::GlobalMean => "global_mean",
            Method::GlobalMedian => "global_median",
            Method::NeighborsMean => "neighbors_mean",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Method::ALL.into_iter().find(|m| m.name() == s)
    }
}

/// One scored (method, rate, sample) cell.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricRow {
    pub method: Method,
    pub dimension: usize,
    pub rate: f64,
    pub sample: usize,
    pub accuracy: f64,
    pub mean_abs_error: f64,
    pub abs_errors: Vec<f64>,
}

/// Mean ± sample standard deviation of accuracy for one (method, rate).
#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub method: Method,
    pub dimension: usize,
    pub rate: f64,
    pub samples: usize,
    pub mean_accuracy: f64,
    pub std_accuracy: f64,
    pub mean_abs_error: f64,
}

/// Per-cell metrics of an experiment.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MetricsReport {
    pub rows: Vec<MetricRow>,
}

impl MetricsReport {
    pub fn accuracies(&self, method: Method, rate: f64) -> Vec<f64> {
        self.rows
            .iter()
            .filter(|r| r.method == method && r.rate == rate)
            .map(|r| r.accuracy)
            .collect()
    }

    pub fn mean_accuracy(&self, method: Method, rate: f64) -> f64 {
        mean(&self.accuracies(method, rate))
    }

    /// Aggregates rows by (method, dimension, rate), in order of first appearance of the rate.
    pub fn summary(&self) -> Vec<SummaryRow> {
        summarize(
            self.rows
                .iter()
                .map(|r| (r.method, r.dimension, r.rate, r.accuracy, r.mean_abs_error)),
        )
    }

    /// CSV with columns method, dimension, rate, sample, accuracy, mean_abs_error.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("method,dimension,rate,sample,accuracy,mean_abs_error\n");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{:?},{:?}",
                r.method.name(),
                r.dimension,
                r.rate,
                r.sample,
                r.accuracy,
                r.mean_abs_error
            );
        }
        s
    }

    /// Absolute errors of all rows matching `method` and `rate`.
    pub fn errors(&self, method: Method, rate: f64) -> Vec<f64> {
        self.rows
            .iter()
            .filter(|r| r.method == method && r.rate == rate)
            .flat_map(|r| r.abs_errors.iter().copied())
            .collect()
    }
}

/// Groups (method, dimension, rate, accuracy, mean abs error) tuples.
pub fn summarize<I>(rows: I) -> Vec<SummaryRow>
where
    I: IntoIterator<Item = (Method, usize, f64, f64, f64)>,
{
    let mut keys: Vec<(Method, usize, f64)> = Vec::new();
    let mut acc: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
    for (m, d, r, a, e) in rows {
        let k = match keys
            .iter()
            .position(|&(km, kd, kr)| km == m && kd == d && kr == r)
        {
            Some(k) => k,
            None => {
                keys.push((m, d, r));
                acc.push((Vec::new(), Vec::new()));
                keys.len() - 1
            }
        };
        acc[k].0.push(a);
        acc[k].1.push(e);
    }
    let mut out: Vec<SummaryRow> = keys
        .into_iter()
        .zip(acc)
        .map(|((method, dimension, rate), (a, e))| SummaryRow {
            method,
            dimension,
            rate,
            samples: a.len(),
            mean_accuracy: mean(&a),
            std_accuracy: sample_std(&a),
            mean_abs_error: mean(&e),
        })
        .collect();
    out.sort_by(|x, y| {
        x.dimension
            .cmp(&y.dimension)
            .then(x.rate.total_cmp(&y.rate))
            .then(x.method.cmp(&y.method))
    });
    out
}

/// Affine map applied to inputs and targets when standardization is enabled.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scaling {
    pub center: f64,
    pub scale: f64,
}

impl Scaling {
    pub const IDENTITY: Scaling = Scaling {
        center: 0.0,
        scale: 1.0,
    };

    /// Mean and standard deviation of the known entries (scale 1 when they are constant).
    pub fn fit(task: &ImputationTask) -> Self {
        let known = task.known_values();
        let center = mean(&known);
        let sd = (known
            .iter()
            .map(|v| (v - center) * (v - center))
            .sum::<f64>()
            / known.len() as f64)
            .sqrt();
        Scaling {
            center,
            scale: if sd > 0.0 { sd } else { 1.0 },
        }
    }

    pub fn forward(&self, v: &[f64]) -> Vec<f64> {
        v.iter().map(|x| (x - self.center) / self.scale).collect()
    }

    pub fn inverse(&self, v: &[f64]) -> Vec<f64> {
        v.iter().map(|x| x * self.scale + self.center).collect()
    }
}

/// The Laplacian a model is trained or evaluated with, honouring the rescale flag.
pub fn model_laplacian(
    cc: &CitationComplex,
    dimension: usize,
    config: &TrainConfig,
) -> Result<HodgeLaplacian> {
    let lap = HodgeLaplacian::new(cc.complex(), dimension)?;
    if config.rescale_laplacian {
        let lmax = lap.largest_eigenvalue(1000);
        if lmax > 0.0 {
            return lap.rescaled(lmax);
        }
    }
    Ok(lap)
}

fn scaling_for(task: &ImputationTask, config: &TrainConfig) -> Scaling {
    if config.standardize {
        Scaling::fit(task)
    } else {
        Scaling::IDENTITY
    }
}

/// Trained model and its loss curve for one damaged cochain.
#[derive(Clone, Debug)]
pub struct FittedSnn {
    pub model: SnnModel,
    pub losses: Vec<f64>,
}

/// Trains a fresh model (seeded by `config.seed`) on the known entries of `task`.
pub fn fit_snn(
    lap: &HodgeLaplacian,
    task: &ImputationTask,
    config: &TrainConfig,
) -> Result<FittedSnn> {
    let scaling = scaling_for(task, config);
    let input = scaling.forward(&task.damaged);
    let model = config.init_model(lap.dimension())?;
    let out = train(model, lap, &input, &input, &task.known, config)?;
    Ok(FittedSnn {
        model: out.model,
        losses: out.losses,
    })
}

/// Applies a trained model to a damaged cochain, keeping the known entries.
pub fn snn_impute(
    model: &SnnModel,
    lap: &HodgeLaplacian,
    task: &ImputationTask,
    config: &TrainConfig,
) -> Result<Vec<f64>> {
    let scaling = scaling_for(task, config);
    let out = model.forward(lap, &scaling.forward(&task.damaged))?;
    Ok(task.merge(&scaling.inverse(&out)))
}

/// Settings for [`run_experiment`] and [`transfer_experiment`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub rates: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub train: TrainConfig,
    pub baselines_only: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            rates: DEFAULT_RATES.to_vec(),
            samples: 5,
            seed: 0,
            train: TrainConfig::default(),
            baselines_only: false,
        }
    }
}

impl ExperimentConfig {
    fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidParameter("samples must be at least 1".into()));
        }
        if self.rates.is_empty() {
            return Err(Error::InvalidParameter(
                "at least one missing rate is required".into(),
            ));
        }
        if let Some(r) = self.rates.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
            return Err(Error::InvalidParameter(format!(
                "missing rate must lie in (0, 1), got {r}"
            )));
        }
        if !self.baselines_only {
            self.train.validate()?;
        }
        Ok(())
    }

    /// Seed of the damage mask for cell (rate index, sample).
    pub fn damage_seed(&self, rate_index: usize, sample: usize) -> u64 {
        derive(
            self.seed,
            &[stage::DAMAGE, rate_index as u64, sample as u64],
        )
    }

    /// Seed of the model initialization for cell (rate index, sample).
    pub fn init_seed(&self, rate_index: usize, sample: usize) -> u64 {
        derive(self.seed, &[stage::INIT, rate_index as u64, sample as u64])
    }
}

/// Everything produced by an experiment run.
#[derive(Clone, Debug)]
pub struct ExperimentOutcome {
    pub report: MetricsReport,
    /// (rate, sample, loss history) per trained cell.
    pub losses: Vec<(f64, usize, Vec<f64>)>,
    /// Model of the last trained cell.
    pub last_model: Option<SnnModel>,
}

fn score(
    report: &mut MetricsReport,
    method: Method,
    dimension: usize,
    rate: f64,
    sample: usize,
    imputed: &[f64],
    task: &ImputationTask,
) -> Result<()> {
    let accuracy = accuracy(imputed, &task.truth, &task.known)?;
    let abs_errors = abs_error_distribution(imputed, &task.truth, &task.known)?;
    report.rows.push(MetricRow {
        method,
        dimension,
        rate,
        sample,
        accuracy,
        mean_abs_error: mean(&abs_errors),
        abs_errors,
    });
    Ok(())
}

fn score_baselines(
    report: &mut MetricsReport,
    cc: &CitationComplex,
    dimension: usize,
    rate: f64,
    sample: usize,
    task: &ImputationTask,
) -> Result<()> {
    score(
        report,
        Method::GlobalMean,
        dimension,
        rate,
        sample,
        &baseline_global(task, Statistic::Mean),
        task,
    )?;
    score(
        report,
        Method::GlobalMedian,
        dimension,
        rate,
        sample,
        &baseline_global(task, Statistic::Median),
        task,
    )?;
    let nb = baseline_neighbors_mean(task, cc, dimension)?;
    score(
        report,
        Method::NeighborsMean,
        dimension,
        rate,
        sample,
        &nb,
        task,
    )
}

fn truth(cc: &CitationComplex, dimension: usize) -> Result<&[f64]> {
    cc.cochain(dimension)
        .map(|c| c.values())
        .ok_or(Error::EmptyDimension(dimension))
}

/// Damage → train → impute → score, for every rate and sample, plus the baselines.
pub fn run_experiment(
    cc: &CitationComplex,
    dimension: usize,
    config: &ExperimentConfig,
) -> Result<ExperimentOutcome> {
    config.validate()?;
    let values = truth(cc, dimension)?;
    let lap = if config.baselines_only {
        None
    } else {
        Some(model_laplacian(cc, dimension, &config.train)?)
    };
    let mut report = MetricsReport::default();
    let mut losses = Vec::new();
    let mut last_model = None;
    for (ri, &rate) in config.rates.iter().enumerate() {
        for sample in 0..config.samples {
            let task = damage(values, rate, config.damage_seed(ri, sample))?;
            if let Some(lap) = &lap {
                let tc = TrainConfig {
                    seed: config.init_seed(ri, sample),
                    ..config.train.clone()
                };
                let fitted = fit_snn(lap, &task, &tc)?;
                let imputed = snn_impute(&fitted.model, lap, &task, &tc)?;
                score(
                    &mut report,
                    Method::Snn,
                    dimension,
                    rate,
                    sample,
                    &imputed,
                    &task,
                )?;
                info!(
                    "rate {rate} sample {sample}: snn accuracy {:.2}%, final loss {:.4}",
                    report.rows.last().map_or(0.0, |r| r.accuracy),
                    fitted.losses.last().copied().unwrap_or(f64::NAN)
                );
                losses.push((rate, sample, fitted.losses));
                last_model = Some(fitted.model);
            }
            score_baselines(&mut report, cc, dimension, rate, sample, &task)?;
        }
    }
    Ok(ExperimentOutcome {
        report,
        losses,
        last_model,
    })
}

/// Trains on `train_cc` and scores the frozen model on `eval_cc`, with the
/// same seed schedule as [`run_experiment`]: both complexes are damaged with
/// the same seed for each (rate, sample). Baselines are scored on `eval_cc`.
pub fn transfer_experiment(
    train_cc: &CitationComplex,
    eval_cc: &CitationComplex,
    dimension: usize,
    config: &ExperimentConfig,
) -> Result<ExperimentOutcome> {
    if config.baselines_only {
        return Err(Error::InvalidParameter(
            "a transfer run needs a trained model".into(),
        ));
    }
    config.validate()?;
    let train_values = truth(train_cc, dimension)?;
    let eval_values = truth(eval_cc, dimension)?;
    let train_lap = model_laplacian(train_cc, dimension, &config.train)?;
    let eval_lap = model_laplacian(eval_cc, dimension, &config.train)?;
    let mut report = MetricsReport::default();
    let mut losses = Vec::new();
    let mut last_model = None;
    for (ri, &rate) in config.rates.iter().enumerate() {
        for sample in 0..config.samples {
            let seed = config.damage_seed(ri, sample);
            let train_task = damage(train_values, rate, seed)?;
            let eval_task = damage(eval_values, rate, seed)?;
            let tc = TrainConfig {
                seed: config.init_seed(ri, sample),
                ..config.train.clone()
            };
            let fitted = fit_snn(&train_lap, &train_task, &tc)?;
            let imputed = snn_impute(&fitted.model, &eval_lap, &eval_task, &tc)?;
            score(
                &mut report,
                Method::Snn,
                dimension,
                rate,
                sample,
                &imputed,
                &eval_task,
            )?;
            score_baselines(&mut report, eval_cc, dimension, rate, sample, &eval_task)?;
            losses.push((rate, sample, fitted.losses));
            last_model = Some(fitted.model);
        }
    }
    Ok(ExperimentOutcome {
        report,
        losses,
        last_model,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{parse_corpus, project_to_complex, CorpusFormat};

    const EDGE: [f64; 5] = [150.0, 100.0, 10.0, 100.0, 4.0];

    fn toy_complex() -> CitationComplex {
        let text = "I\tA;B;C\t100\nII\tA;B\t50\nIII\tA;D\t10\nIV\tC;D\t4\n";
        let (c, _) = parse_corpus(text.as_bytes(), CorpusFormat::Tsv).unwrap();
        project_to_complex(&c, &[0, 1, 2, 3]).unwrap()
    }

    #[test]
    fn medians() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        assert_eq!(median(&[150.0, 100.0, 100.0]), 100.0);
    }

    #[test]
    fn minimum_one_missing() {
        let t = damage(&EDGE, 0.01, 3).unwrap();
        assert_eq!(t.missing_count(), 1);
        assert!(
            damage(&EDGE, 0.95, 3).is_err(),
            "all entries would be removed"
        );
        assert!(damage(&[1.0], 0.5, 3).is_err());
        assert!(damage(&EDGE, 0.0, 3).is_err());
    }

    #[test]
    fn forty_percent_of_toy_edges() {
        let t = damage(&EDGE, 0.4, 11).unwrap();
        assert_eq!(t.missing_count(), 2);
        // with AD and CD missing, the fill is the median of {150, 100, 100}
        let t = damage_with_mask(&EDGE, vec![true, true, false, true, false]);
        assert_eq!(t.fill, 100.0);
        assert_eq!(t.damaged, vec![150.0, 100.0, 100.0, 100.0, 100.0]);
    }

    #[test]
    fn damage_is_seeded_and_preserves_known() {
        let v: Vec<f64> = (0..40).map(|i| i as f64 * 1.5).collect();
        let a = damage(&v, 0.3, 77).unwrap();
        assert_eq!(a, damage(&v, 0.3, 77).unwrap());
        assert_eq!(a.missing_count(), 12);
        for i in 0..40 {
            if a.known[i] {
                assert_eq!(a.damaged[i], v[i]);
            } else {
                assert_eq!(a.damaged[i], a.fill);
            }
        }
    }

    #[test]
    fn accuracy_threshold() {
        let m = [false];
        assert_eq!(accuracy(&[110.0], &[100.0], &m).unwrap(), 100.0);
        assert_eq!(accuracy(&[111.0], &[100.0], &m).unwrap(), 0.0);
        assert_eq!(accuracy(&[0.0], &[0.0], &m).unwrap(), 100.0);
        assert_eq!(accuracy(&[0.5], &[0.0], &m).unwrap(), 0.0);
        assert!(accuracy(&[1.0], &[1.0], &[true]).is_err());
    }

    #[test]
    fn abs_errors_and_histogram() {
        assert_eq!(
            abs_error_distribution(&[90.0, 100.0], &[100.0, 100.0], &[false, false]).unwrap(),
            vec![10.0, 0.0]
        );
        assert_eq!(
            abs_error_distribution(&[5.0, 7.0], &[5.0, 7.0], &[false, true]).unwrap(),
            vec![0.0]
        );
        let h = histogram(&[0.2, 0.9, 1.0, 2.5], 1.0).unwrap();
        let counts: Vec<usize> = h.iter().map(|b| b.count).collect();
        assert_eq!(counts, vec![2, 1, 1]);
        assert_eq!((h[2].low, h[2].high), (2.0, 3.0));
        assert!(histogram(&[], 1.0).unwrap().is_empty());
        assert!(histogram(&[1.0], 0.0).is_err());
        assert!(histogram(&[f64::INFINITY], 1.0).is_err());
        let wide = histogram(&[0.5, 3e14, 3e14], 1.0).unwrap();
        assert_eq!(wide.len(), 2);
        assert_eq!((wide[1].low, wide[1].count), (3e14, 2));
    }

    #[test]
    fn global_baselines() {
        let t = damage_with_mask(&EDGE, vec![true, true, false, true, false]);
        let m = baseline_global(&t, Statistic::Mean);
        assert!((m[2] - 350.0 / 3.0).abs() < 1e-12 && (m[4] - 350.0 / 3.0).abs() < 1e-12);
        let md = baseline_global(&t, Statistic::Median);
        assert_eq!((md[2], md[4]), (100.0, 100.0));
    }

    #[test]
    fn neighbors_mean_on_toy_complex() {
        let cc = toy_complex();
        let t = damage_with_mask(&EDGE, vec![false, true, true, true, false]);
        let out = baseline_neighbors_mean(&t, &cc, 1).unwrap();
        assert!((out[0] - 410.0 / 3.0).abs() < 1e-12);
        assert_eq!(out[4], 59.0);
        // vertices use incident edges only
        let v = cc.cochain(0).unwrap().values().to_vec();
        let t = damage_with_mask(&v, vec![true, true, true, false]);
        let out = baseline_neighbors_mean(&t, &cc, 0).unwrap();
        assert_eq!(out[3], (10.0 + 4.0) / 2.0);
    }

    #[test]
    fn statistics() {
        assert_eq!(sample_std(&[5.0]), 0.0);
        assert!((sample_std(&[1.0, 2.0, 3.0, 4.0]) - (5.0f64 / 3.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(Method::from_name(m.name()), Some(m));
        }
        assert_eq!(Method::from_name("other"), None);
    }
}
