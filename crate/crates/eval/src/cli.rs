use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use eam_core::{
    Benefit, EffortBudget, EffortDriver, Interpolation, PredictorSpec, RankPolicy, ScoreKind, SuiteConfig, TieBreak,
};

use crate::data::LoadOptions;
use crate::error::{EvalError, Result};
use crate::pipeline::{run_evaluation, EvaluateRequest, Evaluation, ModelSource};
use crate::report::{self, write_outputs};
use crate::{selftest, svg};

#[derive(Debug, Parser)]
#[command(name = "eam", version, about = "Effort-aware evaluation of defect prediction models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a model on one dataset and write report.json, tables.csv and curves
    Evaluate(EvaluateArgs),
    /// Overlay the cost-efficiency curves of several effort drivers
    Compare(CompareArgs),
    /// Check the library against hand-computed values on a toy instance
    Selftest,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("model").required(true).args(["predictors", "scores"]))]
pub struct InputArgs {
    /// Dataset, CSV or ARFF
    #[arg(long)]
    pub data: PathBuf,
    /// Label column [default: Defective]
    #[arg(long)]
    pub label_col: Option<String>,
    /// Defect-count column
    #[arg(long)]
    pub count_col: Option<String>,
    /// Module id column; rows are numbered from 1 otherwise
    #[arg(long)]
    pub id_col: Option<String>,
    /// JSON file assigning column roles [default: <data stem>.schema.json if present]
    #[arg(long)]
    pub schema: Option<PathBuf>,
    /// Logistic regression predictors, e.g. `LOC,McCC/LOC`
    #[arg(long)]
    pub predictors: Option<String>,
    /// Score file: `id,score` rows or one score per line in dataset order
    #[arg(long)]
    pub scores: Option<PathBuf>,
    #[arg(long, default_value = "probability", requires = "scores")]
    pub score_kind: ScoreKind,
    /// Score each module with a model fit on the other folds
    #[arg(long, requires = "predictors")]
    pub folds: Option<usize>,
    /// Effort driver: a measure, `composite:SIZE,CPLX,LAMBDA`, optionally `*COST`
    #[arg(long = "effort", required = true)]
    pub effort: Vec<EffortDriver>,
    /// Min-max normalize composite driver inputs
    #[arg(long)]
    pub composite_normalize: bool,
    /// Normalizing measure of the density ranking
    #[arg(long, default_value = "LOC")]
    pub norm: String,
    /// Order of equal scores by driver value: asc, desc or input
    #[arg(long, default_value = "asc")]
    pub tie_break: TieBreak,
    /// modules or defects
    #[arg(long, default_value = "modules")]
    pub benefit: Benefit,
    /// linear or step
    #[arg(long, default_value = "linear")]
    pub popt_interp: Interpolation,
    /// Project name [default: data file stem]
    #[arg(long)]
    pub project: Option<String>,
    #[arg(long, default_value = "eam-out")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Ranking policy: score, density or optimal; repeatable
    #[arg(long = "rank", default_value = "score")]
    pub rank: Vec<RankPolicy>,
    /// Effort budgets as fractions
    #[arg(long, value_delimiter = ',', default_value = "0.2,0.5", value_parser = parse_budget)]
    pub budgets: Vec<EffortBudget>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value = "score")]
    pub rank: RankPolicy,
}

fn parse_budget(s: &str) -> std::result::Result<EffortBudget, String> {
    let f: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    EffortBudget::new(f).map_err(|e| e.to_string())
}

impl InputArgs {
    fn request(&self, policies: Vec<RankPolicy>, budgets: Vec<EffortBudget>) -> Result<EvaluateRequest> {
        let model = match (&self.predictors, &self.scores) {
            (Some(p), None) => ModelSource::Fit {
                predictors: PredictorSpec::parse_list(p)?,
                folds: self.folds,
            },
            (None, Some(path)) => ModelSource::Import {
                path: path.clone(),
                kind: self.score_kind,
            },
            _ => return Err(EvalError::Usage("give exactly one of --predictors and --scores".into())),
        };
        let drivers = self
            .effort
            .iter()
            .map(|d| if self.composite_normalize { d.clone().normalized() } else { d.clone() })
            .collect();
        Ok(EvaluateRequest {
            data: self.data.clone(),
            load: LoadOptions {
                label_col: self.label_col.clone(),
                count_col: self.count_col.clone(),
                id_col: self.id_col.clone(),
                schema: self.schema.clone(),
            },
            model,
            suite: SuiteConfig {
                drivers,
                budgets,
                policies,
                norm_measure: self.norm.clone(),
                tie_break: self.tie_break,
                benefit: self.benefit,
                interpolation: self.popt_interp,
            },
            project: self.project.clone(),
        })
    }
}

fn warn_about(req: &EvaluateRequest, ev: &Evaluation) {
    let path = req.data.display();
    const SHOWN: usize = 20;
    for r in ev.loaded.rejected.iter().take(SHOWN) {
        eprintln!("eam: warning: {path}: line {}: row dropped: {}", r.line, r.reason);
    }
    if ev.loaded.rejected.len() > SHOWN {
        eprintln!("eam: warning: {path}: {} more rows dropped", ev.loaded.rejected.len() - SHOWN);
    }
    if let Some(m) = &ev.model {
        let diag = m.diagnostics();
        if diag.separation {
            eprintln!("eam: warning: the classes are (quasi-)separated; coefficients are not a finite MLE");
        } else if !diag.converged {
            eprintln!("eam: warning: model fit stopped after {} iterations without converging", diag.iterations);
        }
    }
    for c in &ev.results.cells {
        if !c.ranking.flagged().is_empty() {
            eprintln!(
                "eam: warning: {} module(s) with zero {} ranked last under {} ranking",
                c.ranking.flagged().len(),
                req.suite.norm_measure,
                c.policy
            );
        }
    }
}

fn evaluate(args: &EvaluateArgs) -> Result<()> {
    let req = args.input.request(args.rank.clone(), args.budgets.clone())?;
    let ev = run_evaluation(&req)?;
    warn_about(&req, &ev);
    let report = write_outputs(&args.input.out_dir, &req, &ev)?;
    print!("{}", report::summary(&report));
    Ok(())
}

fn compare(args: &CompareArgs) -> Result<()> {
    if args.input.effort.len() < 2 {
        return Err(EvalError::Usage("compare: need ≥2 drivers (repeat --effort)".into()));
    }
    let req = args.input.request(vec![args.rank], Vec::new())?;
    let ev = run_evaluation(&req)?;
    warn_about(&req, &ev);
    let out = &args.input.out_dir;
    std::fs::create_dir_all(out).map_err(|e| EvalError::io(out, e))?;
    let cells: Vec<_> = ev.results.cells.iter().collect();
    let series: Vec<_> = cells.iter().map(|c| (c.driver.label(), c.curve.points())).collect();
    let title = format!("{}: effort drivers compared ({} ranking)", req.project(), args.rank);
    report::write_file(&out.join("compare.svg"), &svg::render_curves(&title, req.suite.benefit, &series))?;
    report::write_file(&out.join("compare.csv"), &report::curves_csv(&cells))?;
    for c in &cells {
        println!("{:<28} Popt {}", c.driver.label(), report::sig6(c.popt));
    }
    Ok(())
}

pub fn run_command(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Evaluate(a) => evaluate(a),
        Command::Compare(a) => compare(a),
        Command::Selftest => {
            let checks = selftest::run_checks();
            print!("{}", selftest::render(&checks));
            match checks.iter().filter(|c| !c.pass).count() {
                0 => Ok(()),
                n => Err(EvalError::SelftestFailed(n)),
            }
        }
    }
}

/// Parses `args` and runs; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run_command(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("eam: error: {e}");
            e.exit_code()
        }
    }
}
