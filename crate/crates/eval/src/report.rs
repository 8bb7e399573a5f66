//! `report.json`, `tables.csv`, curve CSVs and the terminal summary.
//!
//! JSON keeps floats at full precision; serde_json prints the shortest
//! representation that reads back exactly, so equal inputs give equal bytes.

use std::fs;
use std::io::Write;
use std::path::Path;

use eam_core::{CellResult, ClassificationMetrics, CurvePoint, EffortBudget, RankPolicy};
use serde::Serialize;

use crate::data::RejectedRow;
use crate::error::{EvalError, Result};
use crate::pipeline::{EvaluateRequest, Evaluation, ModelSource};
use crate::svg;

pub const TOOL: &str = "eam";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct EvaluationReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub project: String,
    pub dataset: DatasetSummary,
    pub config: ConfigEcho,
    pub model: ModelDescription,
    #[serde(rename = "AUC")]
    pub auc: Option<f64>,
    pub cells: Vec<CellReport>,
    /// Flat rows keyed by (project, policy, driver, budget, metric).
    pub results: Vec<ResultRow>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct DatasetSummary {
    pub path: String,
    pub modules: usize,
    pub defective: usize,
    pub measures: Vec<String>,
    pub ignored_columns: Vec<String>,
    pub rejected_rows: Vec<RejectedSummary>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RejectedSummary {
    pub line: usize,
    pub reason: String,
}

impl From<&RejectedRow> for RejectedSummary {
    fn from(r: &RejectedRow) -> Self {
        RejectedSummary {
            line: r.line,
            reason: r.reason.clone(),
        }
    }
}

/// Every setting that influences a number in the report.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ConfigEcho {
    pub data: String,
    pub label_col: Option<String>,
    pub count_col: Option<String>,
    pub id_col: Option<String>,
    pub schema: Option<String>,
    pub predictors: Option<Vec<String>>,
    pub folds: Option<usize>,
    pub scores: Option<String>,
    pub score_kind: Option<String>,
    pub policies: Vec<String>,
    pub drivers: Vec<String>,
    pub norm: String,
    pub budgets: Vec<f64>,
    pub tie_break: String,
    pub benefit: String,
    pub popt_interp: String,
    /// PofB counts whole modules only.
    pub pofb_semantics: &'static str,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ModelDescription {
    /// `"blr"` or `"imported"`.
    pub source: &'static str,
    pub predictors: Vec<String>,
    /// Intercept first, on the original measure scale.
    pub coefficients: Option<Vec<f64>>,
    pub iterations: Option<usize>,
    pub log_likelihood: Option<f64>,
    pub converged: Option<bool>,
    pub separation: Option<bool>,
    pub score_kind: String,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CellReport {
    pub policy: String,
    pub driver: String,
    /// Path of the curve CSV, relative to the output directory.
    pub curve: String,
    #[serde(rename = "Popt")]
    pub popt: f64,
    /// Ids of modules placed last because their normalizing measure is 0.
    pub zero_measure_modules: Vec<String>,
    pub budgets: Vec<BudgetReport>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct BudgetReport {
    pub budget: f64,
    /// Modules analyzed within the budget.
    pub cutoff: usize,
    pub effort_used: f64,
    /// `PofB` or `NPofB`.
    pub metric: &'static str,
    pub value: f64,
    pub confusion: ConfusionReport,
    pub metrics: MetricsReport,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ConfusionReport {
    #[serde(rename = "TP")]
    pub tp: u64,
    #[serde(rename = "FP")]
    pub fp: u64,
    #[serde(rename = "TN")]
    pub tn: u64,
    #[serde(rename = "FN")]
    pub fn_: u64,
}

/// Threshold metrics; `null` marks an undefined value.
#[derive(Debug, Clone, Serialize, PartialEq)]
#[serde(rename_all = "UPPERCASE")]
pub struct MetricsReport {
    pub tpr: Option<f64>,
    pub tnr: Option<f64>,
    pub fpr: Option<f64>,
    pub ppv: Option<f64>,
    #[serde(rename = "Acc")]
    pub acc: Option<f64>,
    pub ba: Option<f64>,
    #[serde(rename = "Gmean")]
    pub gmean: Option<f64>,
    #[serde(rename = "F1")]
    pub f1: Option<f64>,
    pub mcc: Option<f64>,
}

impl From<&ClassificationMetrics> for MetricsReport {
    fn from(m: &ClassificationMetrics) -> Self {
        MetricsReport {
            tpr: m.tpr,
            tnr: m.tnr,
            fpr: m.fpr,
            ppv: m.ppv,
            acc: m.acc,
            ba: m.ba,
            gmean: m.gmean,
            f1: m.f1,
            mcc: m.mcc,
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ResultRow {
    pub project: String,
    /// `None` for dataset-wide values such as AUC.
    pub policy: Option<String>,
    pub driver: Option<String>,
    pub budget: Option<f64>,
    pub metric: String,
    pub value: Option<f64>,
}

/// File-name safe form of a driver label.
pub fn slug(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' { c } else { '_' })
        .collect()
}

pub fn curve_path(policy: RankPolicy, driver: &str) -> String {
    format!("curves/{}_{}.csv", policy.as_str(), slug(driver))
}

/// `20` for 0.2, `12.5` for 0.125.
pub fn budget_percent(b: EffortBudget) -> String {
    let pct = (b.fraction() * 100.0 * 1e9).round() / 1e9;
    format!("{pct}")
}

fn path_string(p: &Path) -> String {
    p.display().to_string()
}

impl EvaluationReport {
    pub fn new(req: &EvaluateRequest, ev: &Evaluation) -> Self {
        let project = req.project();
        let d = &ev.loaded.dataset;
        let suite = &req.suite;
        let (predictors, folds, scores, score_kind) = match &req.model {
            ModelSource::Fit { predictors, folds } => {
                (Some(predictors.iter().map(|p| p.to_string()).collect()), *folds, None, None)
            }
            ModelSource::Import { path, kind } => (None, None, Some(path_string(path)), Some(kind.as_str().to_string())),
        };
        let config = ConfigEcho {
            data: path_string(&req.data),
            label_col: req.load.label_col.clone(),
            count_col: req.load.count_col.clone(),
            id_col: req.load.id_col.clone(),
            schema: req.load.schema.as_deref().map(path_string),
            predictors,
            folds,
            scores,
            score_kind,
            policies: suite.policies.iter().map(|p| p.as_str().to_string()).collect(),
            drivers: suite.drivers.iter().map(|d| d.to_string()).collect(),
            norm: suite.norm_measure.clone(),
            budgets: suite.budgets.iter().map(|b| b.fraction()).collect(),
            tie_break: suite.tie_break.as_str().to_string(),
            benefit: suite.benefit.as_str().to_string(),
            popt_interp: suite.interpolation.as_str().to_string(),
            pofb_semantics: "step",
        };
        let model = match &ev.model {
            Some(m) => ModelDescription {
                source: "blr",
                predictors: m.predictor_names(),
                coefficients: Some(m.coefficients().to_vec()),
                iterations: Some(m.diagnostics().iterations),
                log_likelihood: Some(m.diagnostics().log_likelihood),
                converged: Some(m.diagnostics().converged),
                separation: Some(m.diagnostics().separation),
                score_kind: ev.scores.kind().as_str().to_string(),
            },
            None => ModelDescription {
                source: "imported",
                predictors: Vec::new(),
                coefficients: None,
                iterations: None,
                log_likelihood: None,
                converged: None,
                separation: None,
                score_kind: ev.scores.kind().as_str().to_string(),
            },
        };

        let mut results = vec![ResultRow {
            project: project.clone(),
            policy: None,
            driver: None,
            budget: None,
            metric: "AUC".into(),
            value: ev.results.auc,
        }];
        let mut cells = Vec::with_capacity(ev.results.cells.len());
        for cell in &ev.results.cells {
            let policy = cell.policy.as_str().to_string();
            let driver = cell.driver.label();
            let row = |budget: Option<f64>, metric: &str, value: Option<f64>| ResultRow {
                project: project.clone(),
                policy: Some(policy.clone()),
                driver: Some(driver.clone()),
                budget,
                metric: metric.to_string(),
                value,
            };
            results.push(row(None, "Popt", Some(cell.popt)));
            let mut budgets = Vec::with_capacity(cell.budgets.len());
            for b in &cell.budgets {
                let f = b.budget.fraction();
                results.push(row(Some(f), cell.pofb_name(), Some(b.pofb)));
                for (name, value) in b.metrics.entries() {
                    results.push(row(Some(f), name, value));
                }
                budgets.push(BudgetReport {
                    budget: f,
                    cutoff: b.cutoff,
                    effort_used: b.effort_used,
                    metric: cell.pofb_name(),
                    value: b.pofb,
                    confusion: ConfusionReport {
                        tp: b.confusion.tp,
                        fp: b.confusion.fp,
                        tn: b.confusion.tn,
                        fn_: b.confusion.fn_,
                    },
                    metrics: (&b.metrics).into(),
                });
            }
            cells.push(CellReport {
                curve: curve_path(cell.policy, &driver),
                policy,
                driver,
                popt: cell.popt,
                zero_measure_modules: cell.ranking.flagged().iter().map(|&i| d.id(i).to_string()).collect(),
                budgets,
            });
        }

        EvaluationReport {
            tool: TOOL,
            version: VERSION,
            project,
            dataset: DatasetSummary {
                path: path_string(&req.data),
                modules: d.len(),
                defective: d.positives(),
                measures: d.schema().to_vec(),
                ignored_columns: ev.loaded.ignored.clone(),
                rejected_rows: ev.loaded.rejected.iter().map(Into::into).collect(),
            },
            config,
            model,
            auc: ev.results.auc,
            cells,
            results,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn fmt2(v: Option<f64>) -> String {
    v.map_or_else(|| "undefined".into(), |x| format!("{x:.2}"))
}

/// Six significant digits, for terminal output.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let digits = (5 - x.abs().log10().floor() as i32).max(0) as usize;
    format!("{x:.digits$}")
}

/// One row per (policy, metric), one column per driver, two decimals.
pub fn tables_csv(r: &EvaluationReport) -> String {
    let mut drivers: Vec<&str> = Vec::new();
    let mut policies: Vec<&str> = Vec::new();
    for c in &r.cells {
        if !drivers.contains(&c.driver.as_str()) {
            drivers.push(&c.driver);
        }
        if !policies.contains(&c.policy.as_str()) {
            policies.push(&c.policy);
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["project", "policy", "metric"];
    header.extend(&drivers);
    w.write_record(&header).expect("in-memory write");
    for policy in policies {
        let cells: Vec<Option<&CellReport>> = drivers
            .iter()
            .map(|d| r.cells.iter().find(|c| c.policy == policy && c.driver == *d))
            .collect();
        let Some(first) = cells.iter().flatten().next() else {
            continue;
        };
        let mut rows: Vec<(String, Vec<Option<f64>>)> = Vec::new();
        for (i, b) in first.budgets.iter().enumerate() {
            let pct = budget_percent(EffortBudget::new(b.budget).expect("stored budget is valid"));
            let pick = |f: &dyn Fn(&BudgetReport) -> Option<f64>| -> Vec<Option<f64>> {
                cells.iter().map(|c| c.and_then(|c| c.budgets.get(i)).and_then(f)).collect()
            };
            rows.push((format!("{}{pct}", b.metric), pick(&|b| Some(b.value))));
        }
        rows.push(("Popt".into(), cells.iter().map(|c| c.map(|c| c.popt)).collect()));
        for (i, b) in first.budgets.iter().enumerate() {
            let pct = budget_percent(EffortBudget::new(b.budget).expect("stored budget is valid"));
            for (k, name) in ClassificationMetrics::NAMES.iter().enumerate() {
                let values = cells
                    .iter()
                    .map(|c| c.and_then(|c| c.budgets.get(i)).and_then(|b| metric_by_index(&b.metrics, k)))
                    .collect();
                rows.push((format!("{name}@{pct}"), values));
            }
        }
        for (metric, values) in rows {
            let mut rec = vec![r.project.clone(), policy.to_string(), metric];
            rec.extend(values.into_iter().map(fmt2));
            w.write_record(&rec).expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

fn metric_by_index(m: &MetricsReport, k: usize) -> Option<f64> {
    [m.tpr, m.tnr, m.fpr, m.ppv, m.acc, m.ba, m.gmean, m.f1, m.mcc][k]
}

/// Columns `policy,driver,curve,x,y`; `curve` is `model` or `optimal`.
pub fn curves_csv(cells: &[&CellResult]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["policy", "driver", "curve", "x", "y"]).expect("in-memory write");
    for cell in cells {
        let label = cell.driver.label();
        for (which, curve) in [("model", &cell.curve), ("optimal", &cell.optimal_curve)] {
            for p in curve.points() {
                w.write_record([
                    cell.policy.as_str(),
                    &label,
                    which,
                    &p.effort.to_string(),
                    &p.benefit.to_string(),
                ])
                .expect("in-memory write");
            }
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

pub fn summary(r: &EvaluationReport) -> String {
    let mut out = format!(
        "{}: {} modules, {} defective, AUC {}\n",
        r.project,
        r.dataset.modules,
        r.dataset.defective,
        r.auc.map_or_else(|| "undefined".into(), sig6)
    );
    for c in &r.cells {
        out.push_str(&format!("  {:<8} {:<28} Popt {}", c.policy, c.driver, sig6(c.popt)));
        for b in &c.budgets {
            let pct = budget_percent(EffortBudget::new(b.budget).expect("stored budget is valid"));
            out.push_str(&format!("  {}{} {}", b.metric, pct, sig6(b.value)));
        }
        out.push('\n');
    }
    out
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::File::create(path)
        .and_then(|mut f| f.write_all(contents.as_bytes()))
        .map_err(|e| EvalError::io(path, e))
}

/// Writes report.json, tables.csv, one curve CSV per cell and one SVG per
/// policy overlaying its drivers.
pub fn write_outputs(out_dir: &Path, req: &EvaluateRequest, ev: &Evaluation) -> Result<EvaluationReport> {
    let curves_dir = out_dir.join("curves");
    fs::create_dir_all(&curves_dir).map_err(|e| EvalError::io(&curves_dir, e))?;
    let report = EvaluationReport::new(req, ev);
    write_file(&out_dir.join("report.json"), &report.to_json())?;
    write_file(&out_dir.join("tables.csv"), &tables_csv(&report))?;
    for cell in &ev.results.cells {
        let path = out_dir.join(curve_path(cell.policy, &cell.driver.label()));
        write_file(&path, &curves_csv(&[cell]))?;
    }
    for &policy in &req.suite.policies {
        let series: Vec<(String, &[CurvePoint])> = ev
            .results
            .cells
            .iter()
            .filter(|c| c.policy == policy)
            .map(|c| (c.driver.label(), c.curve.points()))
            .collect();
        let title = format!("{} ({} ranking)", report.project, policy.as_str());
        let path = curves_dir.join(format!("{}.svg", policy.as_str()));
        write_file(&path, &svg::render_curves(&title, req.suite.benefit, &series))?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(sig6(2.0 / 3.0), "0.666667");
        assert_eq!(sig6(123.456789), "123.457");
        assert_eq!(sig6(0.0), "0");
        assert_eq!(sig6(1234567.0), "1234567");
    }

    #[test]
    fn budget_labels() {
        assert_eq!(budget_percent(EffortBudget::new(0.2).unwrap()), "20");
        assert_eq!(budget_percent(EffortBudget::new(0.125).unwrap()), "12.5");
        assert_eq!(budget_percent(EffortBudget::new(0.07).unwrap()), "7");
    }

    #[test]
    fn slugs_are_file_safe() {
        assert_eq!(slug("composite:LOC,McCC,0.2"), "composite_LOC_McCC_0.2");
        assert_eq!(curve_path(RankPolicy::Density, "LOC"), "curves/density_LOC.csv");
    }
}
