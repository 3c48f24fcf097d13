use crate::measure::MeasureId;
use crate::ingest::YearRange;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced anywhere in the pipeline, from ingestion to report emission.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("missing required column `{0}` in header")]
    MissingColumn(String),

    #[error("duplicate header column `{0}`")]
    DuplicateColumn(String),

    #[error("malformed header: {0}")]
    Header(String),

    #[error("cannot serialize to tsv: {0}")]
    TsvUnrepresentable(String),

    #[error("{count} record-level parse error(s) in strict mode")]
    StrictParse { count: usize },

    #[error("empty year range: {start}:{end}")]
    EmptyYearRange { start: i32, end: i32 },

    #[error("invalid field list: {0}")]
    InvalidFields(String),

    #[error("no keywords in any record for field `{field}` in {year}")]
    EmptyVocabulary { field: String, year: i32 },

    /// A measure whose denominator vanished on this input (kulczynski on
    /// disjoint supports). Always a distinct error, never an infinity.
    #[error("{measure}: division by zero (disjoint keyword supports)")]
    DivisionByZero { measure: MeasureId },

    #[error("field `{field}`, pair {year_from}->{year_to}: {source}")]
    Pair {
        field: String,
        year_from: i32,
        year_to: i32,
        #[source]
        source: Box<Error>,
    },

    #[error("column {column} has zero sample variance; cannot standardize a degenerate corpus")]
    ZeroVarianceColumn { column: usize },

    #[error("eigensolver did not converge within {sweeps} sweeps")]
    ConvergenceFailure { sweeps: usize },

    #[error("year range {start}:{end} spans fewer than 2 years; no successive pairs")]
    NoSuccessivePairs { start: i32, end: i32 },

    #[error("field `{field}`: series does not cover the pair starting at {year_from}")]
    MissingPair { field: String, year_from: i32 },

    #[error("invalid window {t1}:{t2}; need t1 < t2")]
    InvalidWindow { t1: i32, t2: i32 },

    #[error("no dissimilarity rows for field `{0}`")]
    NoRows(String),

    #[error("need at least {need} rows, got {got}")]
    TooFewRows { need: usize, got: usize },

    #[error("period {period} lies outside the analyzed years {years}")]
    InvalidPeriod { period: YearRange, years: YearRange },
}
