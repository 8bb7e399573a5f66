//! Defectiveness scores: binary logistic regression fitted by IRLS, and
//! externally computed score vectors.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::linalg::cholesky_solve;

/// Probabilities are kept this far away from 0 and 1.
pub const PROBABILITY_CLAMP: f64 = 1e-12;

/// A model input: a raw measure, or the ratio of two measures (a density
/// such as `McCC/LOC`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PredictorSpec {
    Measure(String),
    Ratio {
        numerator: String,
        denominator: String,
    },
}

impl PredictorSpec {
    pub fn name(&self) -> String {
        self.to_string()
    }

    /// Predictor values in dataset order.
    pub fn values(&self, d: &Dataset) -> Result<Vec<f64>> {
        match self {
            PredictorSpec::Measure(m) => d.measure_vector(m),
            PredictorSpec::Ratio {
                numerator,
                denominator,
            } => derive_predictor(d, numerator, denominator),
        }
    }

    /// Parses a comma-separated list such as `LOC,McCC/LOC`.
    pub fn parse_list(s: &str) -> Result<Vec<PredictorSpec>> {
        s.split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(str::parse)
            .collect()
    }
}

impl fmt::Display for PredictorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PredictorSpec::Measure(m) => f.write_str(m),
            PredictorSpec::Ratio {
                numerator,
                denominator,
            } => write!(f, "{numerator}/{denominator}"),
        }
    }
}

impl FromStr for PredictorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::ParsePredictor(s.to_string());
        match s.split_once('/') {
            Some((num, den)) => {
                let (num, den) = (num.trim(), den.trim());
                if num.is_empty() || den.is_empty() || den.contains('/') {
                    return Err(bad());
                }
                Ok(PredictorSpec::Ratio {
                    numerator: num.to_string(),
                    denominator: den.to_string(),
                })
            }
            None if !s.is_empty() => Ok(PredictorSpec::Measure(s.to_string())),
            None => Err(bad()),
        }
    }
}

/// Elementwise `numerator / denominator` over the dataset.
pub fn derive_predictor(d: &Dataset, numerator: &str, denominator: &str) -> Result<Vec<f64>> {
    let num = d.measure_vector(numerator)?;
    let den = d.measure_vector(denominator)?;
    num.iter()
        .zip(&den)
        .enumerate()
        .map(|(row, (&a, &b))| {
            if b > 0.0 {
                Ok(a / b)
            } else {
                Err(Error::ZeroDenominator {
                    row,
                    id: d.id(row).to_string(),
                    measure: denominator.to_string(),
                })
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IrlsOptions {
    /// Stop when the largest absolute coefficient change falls below this.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// A standardized slope beyond this magnitude is taken as evidence of
    /// (quasi-)complete separation.
    pub separation_bound: f64,
}

impl Default for IrlsOptions {
    fn default() -> Self {
        IrlsOptions {
            tolerance: 1e-8,
            max_iterations: 100,
            separation_bound: 15.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitDiagnostics {
    pub iterations: usize,
    pub log_likelihood: f64,
    pub converged: bool,
    /// Set when fitting stopped because the estimates were diverging.
    pub separation: bool,
}

/// A fitted binary logistic regression model. Coefficients are on the
/// original (unstandardized) predictor scale, intercept first.
#[derive(Debug, Clone, PartialEq)]
pub struct BlrModel {
    predictors: Vec<PredictorSpec>,
    coefficients: Vec<f64>,
    diagnostics: FitDiagnostics,
}

impl BlrModel {
    /// Builds a model from known coefficients (intercept first).
    pub fn from_coefficients(predictors: Vec<PredictorSpec>, coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.len() != predictors.len() + 1 {
            return Err(Error::DimensionMismatch {
                expected: predictors.len() + 1,
                found: coefficients.len(),
            });
        }
        Ok(BlrModel {
            predictors,
            coefficients,
            diagnostics: FitDiagnostics {
                iterations: 0,
                log_likelihood: f64::NAN,
                converged: true,
                separation: false,
            },
        })
    }

    pub fn predictors(&self) -> &[PredictorSpec] {
        &self.predictors
    }

    pub fn predictor_names(&self) -> Vec<String> {
        self.predictors.iter().map(PredictorSpec::name).collect()
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn diagnostics(&self) -> &FitDiagnostics {
        &self.diagnostics
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScoreKind {
    Probability,
    DefectCountEstimate,
    Raw,
}

impl ScoreKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScoreKind::Probability => "probability",
            ScoreKind::DefectCountEstimate => "defect-count",
            ScoreKind::Raw => "raw",
        }
    }

    fn admits(self, v: f64) -> bool {
        match self {
            ScoreKind::Probability => v > 0.0 && v < 1.0,
            ScoreKind::DefectCountEstimate => v >= 0.0 && v.is_finite(),
            // NaN is rejected later, by the ranking, with the module id.
            ScoreKind::Raw => !v.is_infinite(),
        }
    }
}

impl FromStr for ScoreKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "probability" | "prob" => Ok(ScoreKind::Probability),
            "defect-count" | "defect-count-estimate" | "count" => Ok(ScoreKind::DefectCountEstimate),
            "raw" => Ok(ScoreKind::Raw),
            _ => Err(Error::ParseOption {
                what: "score kind",
                value: s.to_string(),
            }),
        }
    }
}

/// Per-module scores aligned with dataset order.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector {
    scores: Vec<f64>,
    kind: ScoreKind,
}

impl ScoreVector {
    /// Scores in dataset order; the length must equal `n`.
    pub fn for_dataset(d: &Dataset, scores: Vec<f64>, kind: ScoreKind) -> Result<Self> {
        if scores.len() != d.len() {
            return Err(Error::DimensionMismatch {
                expected: d.len(),
                found: scores.len(),
            });
        }
        for (i, &v) in scores.iter().enumerate() {
            if !kind.admits(v) {
                return Err(Error::InvalidScore {
                    id: d.id(i).to_string(),
                    value: v,
                    kind: kind.as_str(),
                });
            }
        }
        Ok(ScoreVector { scores, kind })
    }

    /// Aligns `(id, score)` pairs to dataset order. Every dataset id must
    /// appear exactly once and no unknown id may appear.
    pub fn align_by_id(d: &Dataset, entries: &[(String, f64)], kind: ScoreKind) -> Result<Self> {
        let mut by_id: alloc::collections::BTreeMap<&str, f64> = alloc::collections::BTreeMap::new();
        let mut unknown = Vec::new();
        for (id, v) in entries {
            if by_id.insert(id.as_str(), *v).is_some() {
                unknown.push(format!("{id} (duplicate)"));
            }
        }
        let mut missing = Vec::new();
        let mut scores = Vec::with_capacity(d.len());
        for r in d.records() {
            match by_id.remove(r.id.as_str()) {
                Some(v) => scores.push(v),
                None => missing.push(r.id.clone()),
            }
        }
        unknown.extend(by_id.keys().map(|k| k.to_string()));
        if !missing.is_empty() || !unknown.is_empty() {
            return Err(Error::UnmatchedIds {
                missing: missing.join(", "),
                unknown: unknown.join(", "),
            });
        }
        Self::for_dataset(d, scores, kind)
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn kind(&self) -> ScoreKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

fn logistic(eta: f64) -> f64 {
    if eta >= 0.0 {
        1.0 / (1.0 + libm::exp(-eta))
    } else {
        let e = libm::exp(eta);
        e / (1.0 + e)
    }
}

/// `ln(1 + e^x)` without overflow.
fn softplus(x: f64) -> f64 {
    x.max(0.0) + libm::log1p(libm::exp(-x.abs()))
}

fn predictor_columns(d: &Dataset, predictors: &[PredictorSpec]) -> Result<Vec<Vec<f64>>> {
    predictors.iter().map(|p| p.values(d)).collect()
}

fn linear_predictor(coefficients: &[f64], columns: &[Vec<f64>], i: usize) -> f64 {
    coefficients[1..]
        .iter()
        .zip(columns)
        .fold(coefficients[0], |acc, (b, col)| acc + b * col[i])
}

/// Fits a logistic regression on the full dataset with default IRLS options.
pub fn fit_blr(d: &Dataset, predictors: &[PredictorSpec]) -> Result<BlrModel> {
    fit_blr_with(d, predictors, &IrlsOptions::default())
}

pub fn fit_blr_with(d: &Dataset, predictors: &[PredictorSpec], opts: &IrlsOptions) -> Result<BlrModel> {
    let columns = predictor_columns(d, predictors)?;
    let names: Vec<String> = predictors.iter().map(PredictorSpec::name).collect();
    let labels = d.labels();
    let (coefficients, diagnostics) = fit_columns(&columns, &names, &labels, opts)?;
    Ok(BlrModel {
        predictors: predictors.to_vec(),
        coefficients,
        diagnostics,
    })
}

/// Newton-Raphson (IRLS) on z-scored predictors; coefficients are mapped back
/// to the original scale before returning.
fn fit_columns(
    columns: &[Vec<f64>],
    names: &[String],
    y: &[bool],
    opts: &IrlsOptions,
) -> Result<(Vec<f64>, FitDiagnostics)> {
    let n = y.len();
    let p = columns.len();
    let k = p + 1;
    if n <= k {
        return Err(Error::TooFewModules { n, params: k });
    }
    let positives = y.iter().filter(|&&v| v).count();
    if positives == 0 || positives == n {
        return Err(Error::DegenerateLabels);
    }

    let mut means = Vec::with_capacity(p);
    let mut sds = Vec::with_capacity(p);
    for (col, name) in columns.iter().zip(names) {
        let mean = col.iter().sum::<f64>() / n as f64;
        let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
        let sd = libm::sqrt(var);
        if !sd.is_finite() || sd <= 0.0 {
            return Err(Error::SingularDesign(format!("{name} (constant)")));
        }
        means.push(mean);
        sds.push(sd);
    }
    // Row-major standardized design with a leading column of ones.
    let mut z = Vec::with_capacity(n * k);
    for i in 0..n {
        z.push(1.0);
        for ((col, mean), sd) in columns.iter().zip(&means).zip(&sds) {
            z.push((col[i] - mean) / sd);
        }
    }
    let target: Vec<f64> = y.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();

    let prevalence = positives as f64 / n as f64;
    let mut beta = alloc::vec![0.0; k];
    beta[0] = libm::log(prevalence / (1.0 - prevalence));

    let mut converged = false;
    let mut separation = false;
    let mut iterations = 0;
    let mut hessian = alloc::vec![0.0; k * k];
    let mut gradient = alloc::vec![0.0; k];
    while iterations < opts.max_iterations {
        iterations += 1;
        hessian.iter_mut().for_each(|h| *h = 0.0);
        gradient.iter_mut().for_each(|g| *g = 0.0);
        for i in 0..n {
            let row = &z[i * k..(i + 1) * k];
            let eta: f64 = row.iter().zip(&beta).map(|(a, b)| a * b).sum();
            let mu = logistic(eta);
            let w = mu * (1.0 - mu);
            let r = target[i] - mu;
            for a in 0..k {
                gradient[a] += row[a] * r;
                for b in 0..=a {
                    hessian[a * k + b] += w * row[a] * row[b];
                }
            }
        }
        for a in 0..k {
            for b in (a + 1)..k {
                hessian[a * k + b] = hessian[b * k + a];
            }
        }
        let step = match cholesky_solve(&hessian, &gradient, k) {
            Ok(step) => step,
            Err(col) => {
                if beta[1..].iter().any(|b| b.abs() > opts.separation_bound / 3.0) {
                    // weights collapsed on the way to infinity
                    separation = true;
                    break;
                }
                let culprit = if col == 0 { "(intercept)" } else { names[col - 1].as_str() };
                let earlier: Vec<&str> = names[..col.saturating_sub(1)].iter().map(String::as_str).collect();
                return Err(Error::SingularDesign(format!(
                    "{culprit} is a linear combination of [intercept{}{}]",
                    if earlier.is_empty() { "" } else { ", " },
                    earlier.join(", ")
                )));
            }
        };
        let mut max_change = 0.0f64;
        for (b, s) in beta.iter_mut().zip(&step) {
            *b += s;
            max_change = max_change.max(s.abs());
        }
        if beta[1..].iter().any(|b| b.is_nan() || b.abs() > opts.separation_bound) {
            separation = true;
            break;
        }
        if max_change < opts.tolerance {
            converged = true;
            break;
        }
    }

    let mut coefficients = alloc::vec![0.0; k];
    coefficients[0] = beta[0];
    for j in 0..p {
        coefficients[j + 1] = beta[j + 1] / sds[j];
        coefficients[0] -= beta[j + 1] * means[j] / sds[j];
    }
    let log_likelihood = (0..n)
        .map(|i| {
            let eta = linear_predictor(&coefficients, columns, i);
            target[i] * eta - softplus(eta)
        })
        .sum();
    Ok((
        coefficients,
        FitDiagnostics {
            iterations,
            log_likelihood,
            converged: converged && !separation,
            separation,
        },
    ))
}

/// Estimated defectiveness probability per module, clamped to
/// `[1e-12, 1 - 1e-12]`.
pub fn predict_proba(m: &BlrModel, d: &Dataset) -> Result<ScoreVector> {
    let columns = predictor_columns(d, &m.predictors)?;
    let scores = (0..d.len())
        .map(|i| {
            logistic(linear_predictor(&m.coefficients, &columns, i))
                .clamp(PROBABILITY_CLAMP, 1.0 - PROBABILITY_CLAMP)
        })
        .collect();
    Ok(ScoreVector {
        scores,
        kind: ScoreKind::Probability,
    })
}

/// Bernoulli log-likelihood and its analytic gradient at `coefficients`
/// (intercept first, original predictor scale).
pub fn log_likelihood_and_gradient(
    coefficients: &[f64],
    d: &Dataset,
    predictors: &[PredictorSpec],
) -> Result<(f64, Vec<f64>)> {
    if coefficients.len() != predictors.len() + 1 {
        return Err(Error::DimensionMismatch {
            expected: predictors.len() + 1,
            found: coefficients.len(),
        });
    }
    let columns = predictor_columns(d, predictors)?;
    let mut ll = 0.0;
    let mut grad = alloc::vec![0.0; coefficients.len()];
    for (i, r) in d.records().iter().enumerate() {
        let y = if r.defective { 1.0 } else { 0.0 };
        let eta = linear_predictor(coefficients, &columns, i);
        ll += y * eta - softplus(eta);
        let resid = y - logistic(eta);
        grad[0] += resid;
        for (g, col) in grad[1..].iter_mut().zip(&columns) {
            *g += resid * col[i];
        }
    }
    Ok((ll, grad))
}

/// Out-of-fold probabilities from a deterministic k-fold split (module `i`
/// is held out in fold `i mod k`).
pub fn cross_validated_scores(d: &Dataset, predictors: &[PredictorSpec], folds: usize) -> Result<ScoreVector> {
    let n = d.len();
    if folds < 2 || folds > n {
        return Err(Error::ParseOption {
            what: "fold count (2..=n)",
            value: format!("{folds}"),
        });
    }
    let columns = predictor_columns(d, predictors)?;
    let names: Vec<String> = predictors.iter().map(PredictorSpec::name).collect();
    let labels = d.labels();
    let mut scores = alloc::vec![0.0; n];
    for fold in 0..folds {
        let train: Vec<usize> = (0..n).filter(|i| i % folds != fold).collect();
        let train_cols: Vec<Vec<f64>> = columns
            .iter()
            .map(|c| train.iter().map(|&i| c[i]).collect())
            .collect();
        let train_y: Vec<bool> = train.iter().map(|&i| labels[i]).collect();
        let (coef, _) = fit_columns(&train_cols, &names, &train_y, &IrlsOptions::default())?;
        for i in (fold..n).step_by(folds) {
            scores[i] = logistic(linear_predictor(&coef, &columns, i))
                .clamp(PROBABILITY_CLAMP, 1.0 - PROBABILITY_CLAMP);
        }
    }
    Ok(ScoreVector {
        scores,
        kind: ScoreKind::Probability,
    })
}
