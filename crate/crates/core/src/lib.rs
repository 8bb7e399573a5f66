//! Effort-aware evaluation of software defect prediction models.
//!
//! The crate is `no_std` (with `alloc`). It covers the numeric side of the
//! evaluation pipeline:
//!
//! * [`dataset`]: validated module records with named code measures.
//! * [`model`]: logistic regression fitted by IRLS, score vectors.
//! * [`effort`]: effort drivers (single measure or size/complexity composite)
//!   and translation of an effort budget into a whole-module cutoff.
//! * [`ranking`]: score, density and optimal orderings.
//! * [`metrics`]: confusion matrix, threshold metrics and ROC AUC.
//! * [`curves`]: cost-efficiency curves, PofB@t and Popt.
//! * [`suite`]: the full (policy x driver x budget) evaluation grid.
//!
//! File formats, reports and the command-line tool live in `eam-eval`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod curves;
pub mod dataset;
pub mod effort;
mod error;
pub mod fixtures;
mod linalg;
pub mod metrics;
pub mod model;
pub mod ranking;
pub mod suite;

pub use crate::curves::{
    area_between, cost_efficiency_curve, pofb_at, popt, Benefit, CostEfficiencyCurve, CurvePoint,
    Interpolation,
};
pub use crate::dataset::{Dataset, ModuleRecord};
pub use crate::effort::{
    budget_to_cutoff, cumulative_effort_fractions, cutoff_for_fractions, module_effort,
    DriverForm, EffortBudget, EffortDriver, BUDGET_TOLERANCE,
};
pub use crate::error::{Error, Result};
pub use crate::metrics::{classification_metrics, confusion_at_cutoff, roc_auc, ClassificationMetrics, ConfusionMatrix};
pub use crate::model::{
    cross_validated_scores, derive_predictor, fit_blr, log_likelihood_and_gradient, predict_proba,
    BlrModel, FitDiagnostics, IrlsOptions, PredictorSpec, ScoreKind, ScoreVector,
};
pub use crate::ranking::{
    optimal_ranking, optimal_ranking_by_defects, rank_by_density, rank_by_score, RankPolicy,
    RankedList, TieBreak,
};
pub use crate::suite::{evaluate_suite, BudgetResult, CellResult, SuiteConfig, SuiteResults};
