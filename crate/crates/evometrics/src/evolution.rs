//! The per-field successive-pair pipeline: distribution building, pair
//! alignment, measure evaluation, PCA fusion, and the evolution amount and
//! speed over arbitrary year windows.

use crate::distribution::{align_pair, build_distribution};
use crate::error::{Error, Result};
use crate::ingest::{Partition, YearRange};
use crate::measure::all_measures;
use crate::pca::{
    fit_pca, pc1_scores, standardize, translate_scores, DissimilarityMatrix, PcaModel,
    ScoredSeries,
};

/// Builds the pooled dissimilarity matrix: for every field (in partition
/// order) and every successive year pair, one row of twelve measures.
pub fn build_dissimilarity_matrix(partition: &Partition) -> Result<DissimilarityMatrix> {
    let years = partition.years();
    if years.len() < 2 {
        return Err(Error::NoSuccessivePairs {
            start: years.start(),
            end: years.end(),
        });
    }

    let mut rows = Vec::with_capacity(partition.fields().len() * (years.len() - 1));
    for field in partition.fields() {
        let distributions = partition
            .field_buckets(field)
            .map(build_distribution)
            .collect::<Result<Vec<_>>>()?;
        for window in distributions.windows(2) {
            let pair = align_pair(&window[0], &window[1]);
            let year_from = window[0].year();
            let row = all_measures(&pair, field, year_from).map_err(|source| Error::Pair {
                field: field.clone(),
                year_from,
                year_to: year_from + 1,
                source: Box::new(source),
            })?;
            rows.push(row);
        }
    }
    Ok(DissimilarityMatrix::new(rows))
}

/// One field's successive-pair dissimilarity series after PCA fusion and
/// translation.
#[derive(Debug, Clone)]
pub struct EvolutionSeries {
    pub field_code: String,
    pub pairs: Vec<EvolutionPair>,
}

#[derive(Debug, Clone, Copy)]
pub struct EvolutionPair {
    pub year_from: i32,
    pub year_to: i32,
    pub raw_pc1: f64,
    pub dissimilarity: f64,
}

impl EvolutionSeries {
    fn pair_at(&self, year_from: i32) -> Option<&EvolutionPair> {
        self.pairs.iter().find(|p| p.year_from == year_from)
    }
}

/// Evolution amount D(t1, t2): the sum of translated dissimilarities over
/// the pairs (t1, t1+1) .. (t2-1, t2). Every pair in the window must be
/// present; gaps are an error, never interpolated.
pub fn evolution_amount(series: &EvolutionSeries, t1: i32, t2: i32) -> Result<f64> {
    if t1 >= t2 {
        return Err(Error::InvalidWindow { t1, t2 });
    }
    let mut sum = 0.0;
    for t in t1..t2 {
        let pair = series.pair_at(t).ok_or_else(|| Error::MissingPair {
            field: series.field_code.clone(),
            year_from: t,
        })?;
        sum += pair.dissimilarity;
    }
    Ok(sum)
}

/// Average speed of evolution V(t1, t2) = D(t1, t2) / (t2 - t1).
pub fn evolution_speed(series: &EvolutionSeries, t1: i32, t2: i32) -> Result<f64> {
    Ok(evolution_amount(series, t1, t2)? / (t2 - t1) as f64)
}

/// Evolution amount and speed of one field over one period.
#[derive(Debug, Clone)]
pub struct SpeedReport {
    pub field_code: String,
    pub t1: i32,
    pub t2: i32,
    pub amount: f64,
    pub speed: f64,
}

/// Speed reports for every (field, period) combination, fields outermost.
pub fn speed_reports(
    series: &[EvolutionSeries],
    periods: &[YearRange],
) -> Result<Vec<SpeedReport>> {
    let mut out = Vec::with_capacity(series.len() * periods.len());
    for s in series {
        for period in periods {
            let amount = evolution_amount(s, period.start(), period.end())?;
            out.push(SpeedReport {
                field_code: s.field_code.clone(),
                t1: period.start(),
                t2: period.end(),
                amount,
                speed: amount / (period.end() - period.start()) as f64,
            });
        }
    }
    Ok(out)
}

/// Everything the pipeline derives from one partitioned corpus.
#[derive(Debug)]
pub struct EvolutionAnalysis {
    pub matrix: DissimilarityMatrix,
    pub model: PcaModel,
    pub scores: ScoredSeries,
    pub series: Vec<EvolutionSeries>,
}

/// Runs the full successive-pair pipeline: matrix, one pooled PCA fit,
/// PC1 scores, translation, and the per-field series.
pub fn analyze(partition: &Partition) -> Result<EvolutionAnalysis> {
    let matrix = build_dissimilarity_matrix(partition)?;
    let rows = matrix.to_rows();
    let standardized = standardize(&rows)?;
    let model = fit_pca(&standardized)?;
    let raw = pc1_scores(&model, &rows);
    let scores = translate_scores(&raw);

    let pairs_per_field = partition.years().len() - 1;
    let mut series = Vec::with_capacity(partition.fields().len());
    for (fi, field) in partition.fields().iter().enumerate() {
        let base = fi * pairs_per_field;
        let pairs = (0..pairs_per_field)
            .map(|i| {
                let row = &matrix.rows()[base + i];
                debug_assert_eq!(row.field_code, *field);
                EvolutionPair {
                    year_from: row.year_from,
                    year_to: row.year_to,
                    raw_pc1: scores.raw[base + i],
                    dissimilarity: scores.translated[base + i],
                }
            })
            .collect();
        series.push(EvolutionSeries {
            field_code: field.clone(),
            pairs,
        });
    }

    Ok(EvolutionAnalysis {
        matrix,
        model,
        scores,
        series,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{partition, BibRecord};

    fn corpus_record(id: usize, year: i32, field: &str, keywords: &[&str]) -> BibRecord {
        BibRecord {
            id: format!("r{id}"),
            year,
            field_code: field.into(),
            keywords: keywords.iter().map(|s| s.to_string()).collect(),
            language: None,
        }
    }

    /// A small deterministic corpus whose keyword mix shifts year to year.
    fn synthetic_partition(fields: &[&str], years: YearRange) -> Partition {
        let mut records = Vec::new();
        let mut id = 0;
        let pool = [
            "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta", "iota", "kappa",
        ];
        for (fi, field) in fields.iter().enumerate() {
            for (yi, year) in years.years().enumerate() {
                for a in 0..12 {
                    let k1 = pool[(a + yi + fi) % pool.len()];
                    let k2 = pool[(a * 3 + yi * 2 + fi * 5) % pool.len()];
                    let kws: Vec<&str> = if k1 == k2 { vec![k1] } else { vec![k1, k2] };
                    records.push(corpus_record(id, year, field, &kws));
                    id += 1;
                }
            }
        }
        let field_names: Vec<String> = fields.iter().map(|s| s.to_string()).collect();
        partition(records, &field_names, years).unwrap()
    }

    fn series_with(field: &str, start: i32, ds: &[f64]) -> EvolutionSeries {
        EvolutionSeries {
            field_code: field.into(),
            pairs: ds
                .iter()
                .enumerate()
                .map(|(i, &d)| EvolutionPair {
                    year_from: start + i as i32,
                    year_to: start + i as i32 + 1,
                    raw_pc1: d,
                    dissimilarity: d,
                })
                .collect(),
        }
    }

    #[test]
    fn matrix_row_count_is_fields_times_pairs() {
        let years = YearRange::new(1991, 1993).unwrap();
        let part = synthetic_partition(&["ES", "RE"], years);
        let matrix = build_dissimilarity_matrix(&part).unwrap();
        assert_eq!(matrix.len(), 2 * 2);
        let row_keys: Vec<(&str, i32)> = matrix
            .rows()
            .iter()
            .map(|r| (r.field_code.as_str(), r.year_from))
            .collect();
        assert_eq!(
            row_keys,
            vec![("ES", 1991), ("ES", 1992), ("RE", 1991), ("RE", 1992)]
        );
    }

    #[test]
    fn single_year_range_has_no_pairs() {
        let years = YearRange::new(1991, 1991).unwrap();
        let part = synthetic_partition(&["ES"], years);
        assert!(matches!(
            build_dissimilarity_matrix(&part),
            Err(Error::NoSuccessivePairs { .. })
        ));
    }

    #[test]
    fn empty_bucket_aborts_with_diagnostic() {
        let years = YearRange::new(1991, 1992).unwrap();
        let records = vec![corpus_record(0, 1991, "ES", &["a"])];
        let part = partition(records, &["ES".to_string()], years).unwrap();
        match build_dissimilarity_matrix(&part) {
            Err(Error::EmptyVocabulary { field, year }) => {
                assert_eq!(field, "ES");
                assert_eq!(year, 1992);
            }
            other => panic!("expected EmptyVocabulary, got {other:?}"),
        }
    }

    #[test]
    fn disjoint_pair_error_names_the_pair() {
        let years = YearRange::new(1991, 1992).unwrap();
        let records = vec![
            corpus_record(0, 1991, "ES", &["a"]),
            corpus_record(1, 1992, "ES", &["b"]),
        ];
        let part = partition(records, &["ES".to_string()], years).unwrap();
        match build_dissimilarity_matrix(&part) {
            Err(Error::Pair {
                field,
                year_from,
                year_to,
                source,
            }) => {
                assert_eq!((field.as_str(), year_from, year_to), ("ES", 1991, 1992));
                assert!(matches!(*source, Error::DivisionByZero { .. }));
            }
            other => panic!("expected Pair error, got {other:?}"),
        }
    }

    #[test]
    fn amount_sums_window() {
        let s = series_with("ES", 1, &[2.0, 0.0, 4.0]);
        assert_eq!(evolution_amount(&s, 1, 4).unwrap(), 6.0);
        assert_eq!(evolution_amount(&s, 1, 2).unwrap(), 2.0);
        assert_eq!(
            evolution_amount(&s, 1, 3).unwrap() + evolution_amount(&s, 3, 4).unwrap(),
            evolution_amount(&s, 1, 4).unwrap()
        );
    }

    #[test]
    fn amount_rejects_bad_windows() {
        let s = series_with("ES", 1, &[2.0, 0.0, 4.0]);
        assert!(matches!(
            evolution_amount(&s, 3, 3),
            Err(Error::InvalidWindow { .. })
        ));
        match evolution_amount(&s, 1, 6) {
            Err(Error::MissingPair { field, year_from }) => {
                assert_eq!((field.as_str(), year_from), ("ES", 4));
            }
            other => panic!("expected MissingPair, got {other:?}"),
        }
    }

    #[test]
    fn speed_is_amount_per_year() {
        let s = series_with("ES", 1, &[2.0, 0.0, 4.0]);
        assert_eq!(evolution_speed(&s, 1, 4).unwrap(), 2.0);
        // constant series: V equals the constant on any window
        let c = series_with("RE", 1991, &[0.25; 10]);
        for (t1, t2) in [(1991, 2001), (1993, 1997), (1995, 1996)] {
            assert_eq!(evolution_speed(&c, t1, t2).unwrap(), 0.25);
        }
    }

    #[test]
    fn analyze_produces_consistent_series() {
        let years = YearRange::new(1991, 1996).unwrap();
        let part = synthetic_partition(&["ES", "RE", "MI"], years);
        let analysis = analyze(&part).unwrap();
        assert_eq!(analysis.matrix.len(), 3 * 5);
        assert_eq!(analysis.series.len(), 3);
        let min = analysis
            .scores
            .translated
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        assert_eq!(min, 0.0, "pooled translation reaches exactly zero");
        for s in &analysis.series {
            assert_eq!(s.pairs.len(), 5);
            let mut expect = 1991;
            for p in &s.pairs {
                assert_eq!(p.year_from, expect);
                assert_eq!(p.year_to, expect + 1);
                assert!(p.dissimilarity >= 0.0);
                expect += 1;
            }
        }
        // determinism: a second run over the same corpus is bit-identical
        let again = analyze(&part).unwrap();
        assert_eq!(analysis.scores.raw, again.scores.raw);
        assert_eq!(analysis.model.pc1(), again.model.pc1());
    }
}
