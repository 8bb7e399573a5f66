use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("duplicate measure name `{0}` in schema")]
    DuplicateMeasure(String),
    #[error("module `{id}` does not match the schema: {detail}")]
    SchemaMismatch { id: String, detail: String },
    #[error("module `{id}`: measure `{measure}` has invalid value {value} (must be finite and >= 0)")]
    InvalidMeasure { id: String, measure: String, value: f64 },
    #[error("module `{id}`: defect count {count} contradicts defective={defective}")]
    CountLabelMismatch { id: String, count: u32, defective: bool },
    #[error("unknown measure `{name}`; available: {available}")]
    UnknownMeasure { name: String, available: String },
    #[error("zero denominator `{measure}` at row {row} (module `{id}`)")]
    ZeroDenominator { row: usize, id: String, measure: String },
    #[error("degenerate labels: every module has the same defectiveness label")]
    DegenerateLabels,
    #[error("too few modules ({n}) to fit {params} parameters")]
    TooFewModules { n: usize, params: usize },
    #[error("singular weighted design; collinear predictors: {0}")]
    SingularDesign(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("module `{id}`: score {value} is not a valid {kind}")]
    InvalidScore { id: String, value: f64, kind: &'static str },
    #[error("NaN score for module `{id}`")]
    NanScore { id: String },
    #[error("score ids do not match the dataset; missing: [{missing}], unknown: [{unknown}]")]
    UnmatchedIds { missing: String, unknown: String },
    #[error("composite weight lambda = {0} is outside [0, 1]")]
    InvalidLambda(f64),
    #[error("unit cost {0} must be finite and > 0")]
    InvalidUnitCost(f64),
    #[error("effort budget {0} is outside [0, 1]")]
    InvalidBudget(f64),
    #[error("degenerate driver `{0}`: total system effort is zero")]
    DegenerateDriver(String),
    #[error("driver `{0}` uses dataset-wide normalization; compute its values over a dataset")]
    DatasetLevelDriver(String),
    #[error("cutoff {ep} is outside [0, {n}]")]
    CutoffOutOfRange { ep: usize, n: usize },
    #[error("not a permutation of 0..{0}")]
    InvalidPermutation(usize),
    #[error("ROC AUC needs both defective and non-defective modules")]
    SingleClass,
    #[error("benefit=defects needs a defect count for every module")]
    MissingDefectCounts,
    #[error("curves are not comparable: {0}")]
    CurveMismatch(String),
    #[error("cannot parse effort driver `{0}`")]
    ParseDriver(String),
    #[error("cannot parse predictor `{0}`")]
    ParsePredictor(String),
    #[error("cannot parse `{value}` as {what}")]
    ParseOption { what: &'static str, value: String },
}
