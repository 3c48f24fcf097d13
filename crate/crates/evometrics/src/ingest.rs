//! Bibliographic record ingestion: TSV/JSONL parsing, keyword
//! normalization, and partitioning into per-field, per-year buckets.

use std::collections::HashSet;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One bibliographic record: an opaque id, publication year, field code,
/// and the normalized author-keyword list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BibRecord {
    pub id: String,
    pub year: i32,
    #[serde(rename = "field")]
    pub field_code: String,
    pub keywords: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub language: Option<String>,
}

/// Supported input encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Tsv,
    Jsonl,
}

impl FromStr for InputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "tsv" => Ok(InputFormat::Tsv),
            "jsonl" => Ok(InputFormat::Jsonl),
            other => Err(format!("unknown format `{other}`; expected tsv or jsonl")),
        }
    }
}

/// A record-level problem tied to a 1-based line number. These are collected
/// rather than aborting the parse; callers decide whether they are fatal.
#[derive(Debug, Clone)]
pub struct ParseIssue {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

/// Result of parsing one input stream: the good records plus any
/// record-level issues, in input order.
#[derive(Debug, Default)]
pub struct ParseOutput {
    pub records: Vec<BibRecord>,
    pub issues: Vec<ParseIssue>,
}

/// Lowercases (Unicode-aware), trims, and collapses internal whitespace runs
/// to a single space. Returns `None` when nothing remains — the token is to
/// be dropped, not reported.
pub fn normalize_keyword(raw: &str) -> Option<String> {
    let lower = raw.to_lowercase();
    let mut out = String::with_capacity(lower.len());
    for token in lower.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(token);
    }
    if out.is_empty() {
        None
    } else {
        Some(out)
    }
}

fn normalize_keyword_list<I, S>(raw: I) -> Vec<String>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for token in raw {
        if let Some(kw) = normalize_keyword(token.as_ref()) {
            if seen.insert(kw.clone()) {
                out.push(kw);
            }
        }
    }
    out
}

fn valid_year(year: i64) -> bool {
    (1000..=9999).contains(&year)
}

/// Parses a full input stream. Record-level problems (bad year, wrong column
/// count, invalid JSON) land in [`ParseOutput::issues`]; structural problems
/// with the stream itself (bad header, I/O) abort with an error.
pub fn parse_records<R: BufRead>(reader: R, format: InputFormat) -> Result<ParseOutput> {
    match format {
        InputFormat::Tsv => parse_tsv(reader),
        InputFormat::Jsonl => parse_jsonl(reader),
    }
}

const TSV_COLUMNS: [&str; 4] = ["id", "year", "field", "keywords"];
const TSV_LANGUAGE: &str = "language";

fn parse_tsv_header(line: &str) -> Result<bool> {
    let cols: Vec<&str> = line.split('\t').collect();
    let mut seen = HashSet::new();
    for col in &cols {
        if !seen.insert(*col) {
            return Err(Error::DuplicateColumn((*col).to_string()));
        }
    }
    for required in TSV_COLUMNS {
        if !cols.contains(&required) {
            return Err(Error::MissingColumn(required.to_string()));
        }
    }
    if cols[..4] != TSV_COLUMNS {
        return Err(Error::Header(format!(
            "columns must appear in the order id, year, field, keywords; got `{}`",
            cols.join(", ")
        )));
    }
    match cols.len() {
        4 => Ok(false),
        5 if cols[4] == TSV_LANGUAGE => Ok(true),
        _ => Err(Error::Header(format!(
            "unexpected column(s) after keywords: `{}`",
            cols[4..].join(", ")
        ))),
    }
}

fn parse_tsv_line(line: &str, has_language: bool) -> std::result::Result<BibRecord, String> {
    let cols: Vec<&str> = line.split('\t').collect();
    let expected = if has_language { "4 or 5" } else { "4" };
    let ok = if has_language {
        cols.len() == 4 || cols.len() == 5
    } else {
        cols.len() == 4
    };
    if !ok {
        return Err(format!("expected {expected} columns, found {}", cols.len()));
    }
    let year: i64 = cols[1]
        .trim()
        .parse()
        .map_err(|_| format!("invalid year `{}`", cols[1]))?;
    if !valid_year(year) {
        return Err(format!("invalid year `{}`: must be a 4-digit year", cols[1]));
    }
    let keywords = normalize_keyword_list(cols[3].split(';'));
    let language = cols
        .get(4)
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(str::to_string);
    Ok(BibRecord {
        id: cols[0].to_string(),
        year: year as i32,
        field_code: cols[2].to_string(),
        keywords,
        language,
    })
}

fn parse_tsv<R: BufRead>(reader: R) -> Result<ParseOutput> {
    let mut lines = reader.lines();
    let header = match lines.next() {
        Some(line) => line?,
        None => return Err(Error::Header("empty input: missing header line".into())),
    };
    let header = header.trim_end_matches('\r');
    let header = header.strip_prefix('\u{feff}').unwrap_or(header);
    let has_language = parse_tsv_header(header)?;

    let mut out = ParseOutput::default();
    for (idx, line) in lines.enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        let lineno = idx + 2; // header was line 1
        if line.is_empty() {
            continue;
        }
        match parse_tsv_line(line, has_language) {
            Ok(record) => out.records.push(record),
            Err(message) => out.issues.push(ParseIssue { line: lineno, message }),
        }
    }
    Ok(out)
}

#[derive(Deserialize)]
struct RawJsonRecord {
    id: String,
    year: i64,
    field: String,
    keywords: Vec<String>,
    #[serde(default)]
    language: Option<String>,
}

fn parse_jsonl<R: BufRead>(reader: R) -> Result<ParseOutput> {
    let mut out = ParseOutput::default();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let raw: RawJsonRecord = match serde_json::from_str(trimmed) {
            Ok(raw) => raw,
            Err(e) => {
                out.issues.push(ParseIssue {
                    line: lineno,
                    message: format!("invalid JSON record: {e}"),
                });
                continue;
            }
        };
        if !valid_year(raw.year) {
            out.issues.push(ParseIssue {
                line: lineno,
                message: format!("invalid year `{}`: must be a 4-digit year", raw.year),
            });
            continue;
        }
        out.records.push(BibRecord {
            id: raw.id,
            year: raw.year as i32,
            field_code: raw.field,
            keywords: normalize_keyword_list(raw.keywords),
            language: raw.language.filter(|s| !s.is_empty()),
        });
    }
    Ok(out)
}

fn tsv_safe(value: &str, what: &str) -> Result<()> {
    if value.contains(['\t', '\n', '\r']) {
        return Err(Error::TsvUnrepresentable(format!(
            "{what} `{value}` contains a tab or line break"
        )));
    }
    Ok(())
}

/// Writes records back out as TSV. The `language` column is emitted only when
/// at least one record carries a language tag.
pub fn write_tsv<W: Write>(records: &[BibRecord], mut w: W) -> Result<()> {
    let has_language = records.iter().any(|r| r.language.is_some());
    if has_language {
        writeln!(w, "id\tyear\tfield\tkeywords\tlanguage")?;
    } else {
        writeln!(w, "id\tyear\tfield\tkeywords")?;
    }
    for record in records {
        tsv_safe(&record.id, "id")?;
        tsv_safe(&record.field_code, "field")?;
        for kw in &record.keywords {
            tsv_safe(kw, "keyword")?;
            if kw.contains(';') {
                return Err(Error::TsvUnrepresentable(format!(
                    "keyword `{kw}` contains the `;` separator"
                )));
            }
        }
        let keywords = record.keywords.join(";");
        if has_language {
            let language = record.language.as_deref().unwrap_or("");
            tsv_safe(language, "language")?;
            writeln!(
                w,
                "{}\t{}\t{}\t{}\t{}",
                record.id, record.year, record.field_code, keywords, language
            )?;
        } else {
            writeln!(
                w,
                "{}\t{}\t{}\t{}",
                record.id, record.year, record.field_code, keywords
            )?;
        }
    }
    Ok(())
}

/// Writes records as JSON Lines, one object per record.
pub fn write_jsonl<W: Write>(records: &[BibRecord], mut w: W) -> Result<()> {
    for record in records {
        let line = serde_json::to_string(record)?;
        writeln!(w, "{line}")?;
    }
    Ok(())
}

/// An inclusive range of years, `start <= end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct YearRange {
    start: i32,
    end: i32,
}

impl YearRange {
    pub fn new(start: i32, end: i32) -> Result<Self> {
        if start > end {
            return Err(Error::EmptyYearRange { start, end });
        }
        Ok(YearRange { start, end })
    }

    pub fn start(&self) -> i32 {
        self.start
    }

    pub fn end(&self) -> i32 {
        self.end
    }

    pub fn len(&self) -> usize {
        (self.end - self.start + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, year: i32) -> bool {
        (self.start..=self.end).contains(&year)
    }

    pub fn years(&self) -> impl Iterator<Item = i32> {
        self.start..=self.end
    }

    pub fn covers(&self, inner: &YearRange) -> bool {
        self.start <= inner.start && inner.end <= self.end
    }
}

impl fmt::Display for YearRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.start, self.end)
    }
}

impl FromStr for YearRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| format!("expected A:B, got `{s}`"))?;
        let start: i32 = a.trim().parse().map_err(|_| format!("invalid year `{a}`"))?;
        let end: i32 = b.trim().parse().map_err(|_| format!("invalid year `{b}`"))?;
        YearRange::new(start, end).map_err(|_| "empty year range".to_string())
    }
}

/// All records of one (field, year) cell. May legitimately contain records
/// with zero keywords; they count toward article statistics only.
#[derive(Debug, Clone)]
pub struct YearBucket {
    pub field_code: String,
    pub year: i32,
    pub records: Vec<BibRecord>,
}

/// The corpus partitioned on (field, year). Buckets exist for the whole
/// cross product, possibly empty; records outside the filter are counted,
/// not silently dropped.
#[derive(Debug)]
pub struct Partition {
    fields: Vec<String>,
    years: YearRange,
    buckets: Vec<YearBucket>, // field-major, year ascending
    filtered_out: usize,
}

impl Partition {
    pub fn fields(&self) -> &[String] {
        &self.fields
    }

    pub fn years(&self) -> YearRange {
        self.years
    }

    pub fn filtered_out(&self) -> usize {
        self.filtered_out
    }

    fn index(&self, field: &str, year: i32) -> Option<usize> {
        let fi = self.fields.iter().position(|f| f == field)?;
        if !self.years.contains(year) {
            return None;
        }
        Some(fi * self.years.len() + (year - self.years.start()) as usize)
    }

    pub fn bucket(&self, field: &str, year: i32) -> Option<&YearBucket> {
        self.index(field, year).map(|i| &self.buckets[i])
    }

    /// Buckets in deterministic order: fields as given, years ascending.
    pub fn buckets(&self) -> impl Iterator<Item = &YearBucket> {
        self.buckets.iter()
    }

    pub fn field_buckets(&self, field: &str) -> impl Iterator<Item = &YearBucket> {
        let fi = self.fields.iter().position(|f| f == field);
        let n = self.years.len();
        let range = match fi {
            Some(fi) => fi * n..(fi + 1) * n,
            None => 0..0,
        };
        self.buckets[range].iter()
    }
}

/// Buckets every in-scope record into its (field, year) cell. `fields` keeps
/// its given order; that order is canonical everywhere downstream.
pub fn partition<I>(records: I, fields: &[String], years: YearRange) -> Result<Partition>
where
    I: IntoIterator<Item = BibRecord>,
{
    if fields.is_empty() {
        return Err(Error::InvalidFields("field list is empty".into()));
    }
    let mut seen = HashSet::new();
    for field in fields {
        if !seen.insert(field.as_str()) {
            return Err(Error::InvalidFields(format!("duplicate field `{field}`")));
        }
    }

    let n_years = years.len();
    let mut buckets: Vec<YearBucket> = fields
        .iter()
        .flat_map(|field| {
            years.years().map(move |year| YearBucket {
                field_code: field.clone(),
                year,
                records: Vec::new(),
            })
        })
        .collect();

    let mut filtered_out = 0usize;
    for record in records {
        let slot = fields
            .iter()
            .position(|f| *f == record.field_code)
            .filter(|_| years.contains(record.year))
            .map(|fi| fi * n_years + (record.year - years.start()) as usize);
        match slot {
            Some(i) => buckets[i].records.push(record),
            None => filtered_out += 1,
        }
    }

    Ok(Partition {
        fields: fields.to_vec(),
        years,
        buckets,
        filtered_out,
    })
}
