use std::path::PathBuf;

use eam_core::{
    cross_validated_scores, evaluate_suite, fit_blr, predict_proba, BlrModel, PredictorSpec, ScoreKind, ScoreVector,
    SuiteConfig, SuiteResults,
};

use crate::data::{load_dataset, LoadOptions, Loaded};
use crate::error::Result;
use crate::scores::import_scores;

#[derive(Debug, Clone, PartialEq)]
pub enum ModelSource {
    /// Fit logistic regression on the whole dataset, or score each module
    /// out-of-fold when `folds` is set.
    Fit {
        predictors: Vec<PredictorSpec>,
        folds: Option<usize>,
    },
    Import { path: PathBuf, kind: ScoreKind },
}

#[derive(Debug, Clone)]
pub struct EvaluateRequest {
    pub data: PathBuf,
    pub load: LoadOptions,
    pub model: ModelSource,
    pub suite: SuiteConfig,
    /// Defaults to the data file stem.
    pub project: Option<String>,
}

impl EvaluateRequest {
    pub fn project(&self) -> String {
        self.project.clone().unwrap_or_else(|| {
            self.data
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "dataset".into())
        })
    }
}

#[derive(Debug, Clone)]
pub struct Evaluation {
    pub loaded: Loaded,
    pub scores: ScoreVector,
    /// The model fit on all modules, when scores come from a fit.
    pub model: Option<BlrModel>,
    pub results: SuiteResults,
}

pub fn run_evaluation(req: &EvaluateRequest) -> Result<Evaluation> {
    let loaded = load_dataset(&req.data, &req.load)?;
    let d = &loaded.dataset;
    let (scores, model) = match &req.model {
        ModelSource::Fit { predictors, folds } => {
            let model = fit_blr(d, predictors)?;
            let scores = match folds {
                Some(k) => cross_validated_scores(d, predictors, *k)?,
                None => predict_proba(&model, d)?,
            };
            (scores, Some(model))
        }
        ModelSource::Import { path, kind } => (import_scores(path, d, *kind)?, None),
    };
    let results = evaluate_suite(d, &scores, &req.suite)?;
    Ok(Evaluation {
        loaded,
        scores,
        model,
        results,
    })
}
