//! CSV emitters for every pipeline artifact. All files are UTF-8, LF,
//! comma-delimited with a header row, and byte-identical across repeated
//! runs on the same input.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::distribution::KeywordDistribution;
use crate::error::Result;
use crate::evolution::{EvolutionSeries, SpeedReport};
use crate::measure::MeasureId;
use crate::pca::{DissimilarityMatrix, PcaModel};
use crate::stats::{CorpusStats, CorrelationReport, MeasureSummary};

/// Formats with `digits` significant digits, positional when the exponent
/// allows it, trailing zeros trimmed (the classic `%g` behavior).
pub fn significant(x: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exponent) = sci.split_once('e').expect("exponential format");
    let exponent: i32 = exponent.parse().expect("numeric exponent");
    if exponent < -4 || exponent >= digits as i32 {
        format!("{}e{exponent}", trim_trailing_zeros(mantissa))
    } else {
        let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
        trim_trailing_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_trailing_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Measure values, scores, loadings, and correlations all print with 12
/// significant digits: lossless enough for analysis, stable for diffing.
fn sig12(x: f64) -> String {
    significant(x, 12)
}

fn writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
    Ok(csv::Writer::from_writer(BufWriter::new(File::create(path)?)))
}

/// `corpus_stats.csv`: per-period and per-year rows, distinguished by the
/// `scope` column. Period rows have keywords-per-article (2 decimals);
/// year rows have a new-keyword count from the second year onward.
pub fn write_corpus_stats(path: &Path, stats: &CorpusStats) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record([
        "field",
        "scope",
        "start",
        "end",
        "articles",
        "keywords",
        "distinct_keywords",
        "keywords_per_article",
        "new_keywords",
    ])?;
    for field in &stats.fields {
        for p in &field.periods {
            w.write_record([
                field.field_code.as_str(),
                "period",
                &p.period.start().to_string(),
                &p.period.end().to_string(),
                &p.articles.to_string(),
                &p.keywords.to_string(),
                &p.distinct_keywords.to_string(),
                &format!("{:.2}", p.keywords_per_article),
                "",
            ])?;
        }
        for y in &field.years {
            w.write_record([
                field.field_code.as_str(),
                "year",
                &y.year.to_string(),
                &y.year.to_string(),
                &y.articles.to_string(),
                &y.keywords.to_string(),
                &y.distinct_keywords.to_string(),
                "",
                &y.new_keywords.map(|n| n.to_string()).unwrap_or_default(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// `dissimilarity.csv`: one row per (field, successive pair), measure
/// columns in canonical order.
pub fn write_dissimilarity(path: &Path, matrix: &DissimilarityMatrix) -> Result<()> {
    let mut w = writer(path)?;
    let mut header = vec!["field".to_string(), "year_from".into(), "year_to".into()];
    header.extend(MeasureId::ALL.iter().map(|m| m.name().to_string()));
    w.write_record(&header)?;
    for row in matrix.rows() {
        let mut record = vec![
            row.field_code.clone(),
            row.year_from.to_string(),
            row.year_to.to_string(),
        ];
        record.extend(row.values.iter().map(|&v| sig12(v)));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

/// `measure_summary.csv`: six summary statistics per (field, measure).
pub fn write_measure_summaries(path: &Path, summaries: &[MeasureSummary]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["field", "measure", "min", "q1", "median", "mean", "q3", "max"])?;
    for summary in summaries {
        for (m, s) in MeasureId::ALL.iter().zip(&summary.per_measure) {
            w.write_record([
                summary.field_code.as_str(),
                m.name(),
                &sig12(s.min),
                &sig12(s.q1),
                &sig12(s.median),
                &sig12(s.mean),
                &sig12(s.q3),
                &sig12(s.max),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// `correlation.csv`: one 12x12 block per field, row-labelled by measure.
pub fn write_correlations(path: &Path, reports: &[CorrelationReport]) -> Result<()> {
    let mut w = writer(path)?;
    let mut header = vec!["field".to_string(), "measure".into()];
    header.extend(MeasureId::ALL.iter().map(|m| m.name().to_string()));
    w.write_record(&header)?;
    for report in reports {
        for (m, row) in MeasureId::ALL.iter().zip(&report.matrix) {
            let mut record = vec![report.field_code.clone(), m.name().to_string()];
            record.extend(row.iter().map(|&v| sig12(v)));
            w.write_record(&record)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// The measure subset whose pairwise scatter data is emitted: the five
/// strongly related measures worth eyeballing against each other.
pub const SCATTER_MEASURES: [MeasureId; 5] = [
    MeasureId::Clark,
    MeasureId::Czekanowski,
    MeasureId::JensenShannon,
    MeasureId::Lorentzian,
    MeasureId::ProbSymmetricChi2,
];

/// `scatter_<m1>_<m2>.csv` for every unordered pair of [`SCATTER_MEASURES`]:
/// raw value pairs ready for plotting. Returns the written file names.
pub fn write_scatter_files(dir: &Path, matrix: &DissimilarityMatrix) -> Result<Vec<String>> {
    let mut names = Vec::new();
    for (i, &m1) in SCATTER_MEASURES.iter().enumerate() {
        for &m2 in &SCATTER_MEASURES[i + 1..] {
            let name = format!("scatter_{}_{}.csv", m1.name(), m2.name());
            let mut w = writer(&dir.join(&name))?;
            w.write_record(["field", "year_from", "year_to", m1.name(), m2.name()])?;
            for row in matrix.rows() {
                w.write_record([
                    row.field_code.as_str(),
                    &row.year_from.to_string(),
                    &row.year_to.to_string(),
                    &sig12(row.value(m1)),
                    &sig12(row.value(m2)),
                ])?;
            }
            w.flush()?;
            names.push(name);
        }
    }
    Ok(names)
}

/// `pca_loadings.csv`: rows are the twelve measures in canonical order,
/// columns PC1..PC12.
pub fn write_pca_loadings(path: &Path, model: &PcaModel) -> Result<()> {
    let mut w = writer(path)?;
    let mut header = vec!["measure".to_string()];
    header.extend((1..=model.width()).map(|j| format!("pc{j}")));
    w.write_record(&header)?;
    for (m, row) in MeasureId::ALL.iter().zip(&model.loadings) {
        let mut record = vec![m.name().to_string()];
        record.extend(row.iter().map(|&v| sig12(v)));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

/// `pca_scree.csv`: eigenvalues with explained and cumulative fractions.
pub fn write_pca_scree(path: &Path, model: &PcaModel) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["component", "eigenvalue", "explained_fraction", "cumulative_fraction"])?;
    let mut cumulative = 0.0;
    for (i, (&value, &fraction)) in model
        .eigenvalues
        .iter()
        .zip(&model.explained_fraction)
        .enumerate()
    {
        cumulative += fraction;
        w.write_record([
            &(i + 1).to_string(),
            &sig12(value),
            &sig12(fraction),
            &sig12(cumulative),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `evolution.csv`: raw PC1 score and translated dissimilarity per
/// successive pair.
pub fn write_evolution(path: &Path, series: &[EvolutionSeries]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["field", "year_from", "year_to", "raw_pc1", "dissimilarity"])?;
    for s in series {
        for p in &s.pairs {
            w.write_record([
                s.field_code.as_str(),
                &p.year_from.to_string(),
                &p.year_to.to_string(),
                &sig12(p.raw_pc1),
                &sig12(p.dissimilarity),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// `speed.csv`: evolution amount and average speed per (field, period).
pub fn write_speed(path: &Path, reports: &[SpeedReport]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["field", "t1", "t2", "amount_D", "speed_V"])?;
    for r in reports {
        w.write_record([
            r.field_code.as_str(),
            &r.t1.to_string(),
            &r.t2.to_string(),
            &sig12(r.amount),
            &sig12(r.speed),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Per-distribution dump: `keyword,count,relfreq`, sorted by keyword.
pub fn write_distribution(path: &Path, distribution: &KeywordDistribution) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["keyword", "count", "relfreq"])?;
    for (keyword, count, relfreq) in distribution.entries() {
        w.write_record([keyword, &count.to_string(), &sig12(relfreq)])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes normalized records back out as canonical TSV.
pub fn write_records_tsv(path: &Path, records: &[crate::ingest::BibRecord]) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    crate::ingest::write_tsv(records, &mut out)?;
    out.flush()?;
    Ok(())
}
