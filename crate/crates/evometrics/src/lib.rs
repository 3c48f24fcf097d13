//! Quantifies the temporal evolution of a document corpus (for instance, a
//! scientific field) from bibliographic records: per-year keyword
//! relative-frequency distributions, twelve dissimilarity measures between
//! successive years, PCA-based fusion into one score, and evolution
//! amount/speed over arbitrary year windows.
//!
//! The pipeline, end to end:
//!
//! 1. [`ingest`] parses TSV/JSONL records, normalizes keywords, and
//!    partitions them into (field, year) buckets.
//! 2. [`distribution`] builds per-year keyword distributions and aligns
//!    successive pairs on their union vocabulary.
//! 3. [`measure`] evaluates the twelve dissimilarity measures per pair.
//! 4. [`pca`] standardizes the pooled measure matrix, fits a correlation
//!    PCA, and translates PC1 scores to non-negative dissimilarities.
//! 5. [`evolution`] sums translated dissimilarities into the evolution
//!    amount D(t1, t2) and speed V(t1, t2) = D/(t2 - t1).
//! 6. [`stats`] and [`report`] produce descriptive statistics and the CSV
//!    artifact set; [`pipeline`] wires it all together.

pub mod distribution;
pub mod error;
pub mod evolution;
pub mod ingest;
pub mod measure;
pub mod pca;
pub mod pipeline;
pub mod report;
pub mod stats;

pub use distribution::{align_pair, build_distribution, AlignedDistributionPair, KeywordDistribution};
pub use error::{Error, Result};
pub use evolution::{
    analyze, build_dissimilarity_matrix, evolution_amount, evolution_speed, speed_reports,
    EvolutionAnalysis, EvolutionPair, EvolutionSeries, SpeedReport,
};
pub use ingest::{
    normalize_keyword, parse_records, partition, write_jsonl, write_tsv, BibRecord, InputFormat,
    ParseIssue, ParseOutput, Partition, YearBucket, YearRange,
};
pub use measure::{all_measures, dissimilarity, DissimilarityVector, MeasureId, MEASURE_COUNT};
pub use pca::{
    fit_pca, pc1_scores, standardize, translate_scores, DissimilarityMatrix, PcaModel,
    ScoredSeries, Standardized,
};
pub use pipeline::{load_records, run_report, LoadOutcome, ReportConfig, RunSummary};
pub use stats::{
    correlation_report, descriptive_stats, measure_summary, CorpusStats, CorrelationReport,
    FieldStats, MeasureSummary, PeriodStats, SummaryStats, YearStats,
};
