//! Corpus descriptive statistics, per-measure summary statistics, and the
//! measure correlation report.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::ingest::{Partition, YearRange};
use crate::measure::{MeasureId, MEASURE_COUNT};
use crate::pca::{correlation_of, standardize, DissimilarityMatrix};

/// Article/keyword counts for one (field, year) cell. `new_keywords` counts
/// keywords first seen that year within the analyzed range; it is `None`
/// for the range's first year, which has no history to compare against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YearStats {
    pub year: i32,
    pub articles: usize,
    pub keywords: usize,
    pub distinct_keywords: usize,
    pub new_keywords: Option<usize>,
}

/// Aggregated counts for one (field, period) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodStats {
    pub period: YearRange,
    pub articles: usize,
    pub keywords: usize,
    pub distinct_keywords: usize,
    pub keywords_per_article: f64,
}

#[derive(Debug, Clone)]
pub struct FieldStats {
    pub field_code: String,
    pub periods: Vec<PeriodStats>,
    pub years: Vec<YearStats>,
}

#[derive(Debug, Clone)]
pub struct CorpusStats {
    pub fields: Vec<FieldStats>,
}

/// Per-field, per-period and per-year descriptive statistics over the
/// partitioned corpus.
pub fn descriptive_stats(partition: &Partition, periods: &[YearRange]) -> Result<CorpusStats> {
    let years = partition.years();
    for period in periods {
        if !years.covers(period) {
            return Err(Error::InvalidPeriod {
                period: *period,
                years,
            });
        }
    }

    let mut fields = Vec::with_capacity(partition.fields().len());
    for field in partition.fields() {
        let buckets: Vec<_> = partition.field_buckets(field).collect();

        let mut year_stats = Vec::with_capacity(buckets.len());
        let mut vocab_by_year: Vec<HashSet<&str>> = Vec::with_capacity(buckets.len());
        let mut seen_before: HashSet<&str> = HashSet::new();
        for (yi, bucket) in buckets.iter().enumerate() {
            let mut vocab: HashSet<&str> = HashSet::new();
            let mut keywords = 0usize;
            for record in &bucket.records {
                keywords += record.keywords.len();
                for kw in &record.keywords {
                    vocab.insert(kw.as_str());
                }
            }
            let new_keywords = if yi == 0 {
                None
            } else {
                Some(vocab.iter().filter(|kw| !seen_before.contains(*kw)).count())
            };
            year_stats.push(YearStats {
                year: bucket.year,
                articles: bucket.records.len(),
                keywords,
                distinct_keywords: vocab.len(),
                new_keywords,
            });
            seen_before.extend(vocab.iter().copied());
            vocab_by_year.push(vocab);
        }

        let period_stats = periods
            .iter()
            .map(|period| {
                let mut articles = 0usize;
                let mut keywords = 0usize;
                let mut vocab: HashSet<&str> = HashSet::new();
                for (yi, year) in years.years().enumerate() {
                    if period.contains(year) {
                        articles += year_stats[yi].articles;
                        keywords += year_stats[yi].keywords;
                        vocab.extend(vocab_by_year[yi].iter().copied());
                    }
                }
                let keywords_per_article = if articles == 0 {
                    0.0
                } else {
                    keywords as f64 / articles as f64
                };
                PeriodStats {
                    period: *period,
                    articles,
                    keywords,
                    distinct_keywords: vocab.len(),
                    keywords_per_article,
                }
            })
            .collect();

        fields.push(FieldStats {
            field_code: field.clone(),
            periods: period_stats,
            years: year_stats,
        });
    }

    Ok(CorpusStats { fields })
}

/// Six-number summary of one measure's values over a field's pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryStats {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub mean: f64,
    pub q3: f64,
    pub max: f64,
}

/// Summary statistics for each of the twelve measures, canonical order.
#[derive(Debug, Clone)]
pub struct MeasureSummary {
    pub field_code: String,
    pub per_measure: [SummaryStats; MEASURE_COUNT],
}

/// Quantile by linear interpolation between order statistics at rank
/// 1 + (n-1)p, the common spreadsheet/statistical default.
fn quantile(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * p;
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    if frac == 0.0 || lo + 1 >= n {
        sorted[lo]
    } else {
        sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
    }
}

/// Per-measure summary statistics over one field's rows.
pub fn measure_summary(matrix: &DissimilarityMatrix, field: &str) -> Result<MeasureSummary> {
    let rows: Vec<_> = matrix.field_rows(field).collect();
    if rows.is_empty() {
        return Err(Error::NoRows(field.to_string()));
    }
    let per_measure = MeasureId::ALL.map(|m| {
        let mut values: Vec<f64> = rows.iter().map(|r| r.value(m)).collect();
        values.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        SummaryStats {
            min: values[0],
            q1: quantile(&values, 0.25),
            median: quantile(&values, 0.5),
            mean,
            q3: quantile(&values, 0.75),
            max: values[values.len() - 1],
        }
    });
    Ok(MeasureSummary {
        field_code: field.to_string(),
        per_measure,
    })
}

/// The 12x12 sample correlation matrix of one field's measure values:
/// symmetric, unit diagonal, entries clamped into [-1, 1].
#[derive(Debug, Clone)]
pub struct CorrelationReport {
    pub field_code: String,
    pub matrix: Vec<Vec<f64>>,
}

pub fn correlation_report(
    matrix: &DissimilarityMatrix,
    field: &str,
) -> Result<CorrelationReport> {
    let rows: Vec<Vec<f64>> = matrix
        .field_rows(field)
        .map(|r| r.values.to_vec())
        .collect();
    if rows.len() < 3 {
        return Err(Error::TooFewRows {
            need: 3,
            got: rows.len(),
        });
    }
    let standardized = standardize(&rows)?;
    let mut corr = correlation_of(&standardized.z);
    let k = corr.len();
    for (i, row) in corr.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            if i == j {
                *v = 1.0;
            } else {
                *v = v.clamp(-1.0, 1.0);
            }
        }
    }
    debug_assert_eq!(k, MEASURE_COUNT);
    Ok(CorrelationReport {
        field_code: field.to_string(),
        matrix: corr,
    })
}
