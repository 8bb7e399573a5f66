//! The full evaluation grid: every (ranking policy, effort driver) pair,
//! each with its curve, Popt and per-budget PofB and confusion metrics.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::curves::{curve_from_values, gains, pofb_at, popt, Benefit, CostEfficiencyCurve, Interpolation};
use crate::dataset::Dataset;
use crate::effort::{cutoff_for_fractions, EffortBudget, EffortDriver};
use crate::error::Result;
use crate::metrics::{classification_metrics, confusion_at_cutoff, roc_auc, ClassificationMetrics, ConfusionMatrix};
use crate::model::ScoreVector;
use crate::ranking::{
    optimal_ranking, optimal_ranking_by_defects, rank_by_density, rank_by_score, RankPolicy, RankedList, TieBreak,
};

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub drivers: Vec<EffortDriver>,
    pub budgets: Vec<EffortBudget>,
    pub policies: Vec<RankPolicy>,
    /// Normalizing measure of the density policy.
    pub norm_measure: String,
    pub tie_break: TieBreak,
    pub benefit: Benefit,
    pub interpolation: Interpolation,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            drivers: Vec::new(),
            budgets: Vec::new(),
            policies: vec![RankPolicy::Score],
            norm_measure: String::from("LOC"),
            tie_break: TieBreak::Ascending,
            benefit: Benefit::Modules,
            interpolation: Interpolation::Linear,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BudgetResult {
    pub budget: EffortBudget,
    /// `EP`, the number of modules analyzed.
    pub cutoff: usize,
    /// Effort fraction actually consumed by the `EP` modules.
    pub effort_used: f64,
    pub pofb: f64,
    pub confusion: ConfusionMatrix,
    pub metrics: ClassificationMetrics,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub policy: RankPolicy,
    pub driver: EffortDriver,
    pub ranking: RankedList,
    pub curve: CostEfficiencyCurve,
    pub optimal_curve: CostEfficiencyCurve,
    pub popt: f64,
    pub budgets: Vec<BudgetResult>,
}

impl CellResult {
    /// `NPofB` for the density ranking, `PofB` otherwise.
    pub fn pofb_name(&self) -> &'static str {
        match self.policy {
            RankPolicy::Density => "NPofB",
            _ => "PofB",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResults {
    /// `None` when the dataset has a single class.
    pub auc: Option<f64>,
    /// Cells in `policies x drivers` order, as configured.
    pub cells: Vec<CellResult>,
}

impl SuiteResults {
    pub fn cell(&self, policy: RankPolicy, driver: &str) -> Option<&CellResult> {
        self.cells
            .iter()
            .find(|c| c.policy == policy && c.driver.label() == driver)
    }
}

pub fn evaluate_suite(d: &Dataset, s: &ScoreVector, config: &SuiteConfig) -> Result<SuiteResults> {
    let gains = gains(d, config.benefit)?;
    let mut cells = Vec::with_capacity(config.policies.len() * config.drivers.len());
    for &policy in &config.policies {
        for drv in &config.drivers {
            cells.push(evaluate_cell(d, s, config, policy, drv, &gains)?);
        }
    }
    Ok(SuiteResults {
        auc: roc_auc(s, d).ok(),
        cells,
    })
}

fn evaluate_cell(
    d: &Dataset,
    s: &ScoreVector,
    config: &SuiteConfig,
    policy: RankPolicy,
    drv: &EffortDriver,
    gains: &[f64],
) -> Result<CellResult> {
    let values = drv.values(d)?;
    let label = drv.label();
    let optimal = match config.benefit {
        Benefit::Modules => optimal_ranking(d, drv)?,
        Benefit::Defects => optimal_ranking_by_defects(d, drv)?,
    };
    let ranking = match policy {
        RankPolicy::Score | RankPolicy::Explicit => rank_by_score(s, d, &values, config.tie_break)?,
        RankPolicy::Density => rank_by_density(s, d, &config.norm_measure, &values, config.tie_break)?,
        RankPolicy::Optimal => optimal.clone(),
    };
    let curve = curve_from_values(&ranking, &values, gains, &label, config.benefit)?;
    let optimal_curve = curve_from_values(&optimal, &values, gains, &label, config.benefit)?;
    let popt = popt(&curve, &optimal_curve, config.interpolation)?;
    let fractions: Vec<f64> = curve.points()[1..].iter().map(|p| p.effort).collect();
    let budgets = config
        .budgets
        .iter()
        .map(|&b| {
            let cutoff = cutoff_for_fractions(&fractions, b);
            let confusion = confusion_at_cutoff(&ranking, d, cutoff)?;
            Ok(BudgetResult {
                budget: b,
                cutoff,
                effort_used: curve.points()[cutoff].effort,
                pofb: pofb_at(&curve, b),
                confusion,
                metrics: classification_metrics(&confusion),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CellResult {
        policy,
        driver: drv.clone(),
        ranking,
        curve,
        optimal_curve,
        popt,
        budgets,
    })
}
