//! Command-line front end: ingest, per-corpus statistics, dissimilarity
//! matrices, PCA artifacts, evolution series, or the full report.
//!
//! Exit codes: 0 on success, 1 on data errors, 2 on usage errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use evometrics::{
    analyze, correlation_report, descriptive_stats, load_records, measure_summary, partition,
    report, run_report, speed_reports, InputFormat, ParseIssue, Partition, ReportConfig,
    YearRange,
};

#[derive(Parser)]
#[command(
    name = "evometrics",
    version,
    about = "Quantify how a document corpus evolves over time from per-year keyword distributions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and normalize records, writing them back as canonical TSV
    Ingest(IngestArgs),
    /// Emit per-field corpus statistics (articles, keywords, new keywords)
    Stats(PipelineArgs),
    /// Emit the dissimilarity matrix with summaries, correlations, and scatter data
    Dissim(PipelineArgs),
    /// Emit PCA loadings and the scree table
    Pca(PipelineArgs),
    /// Emit the evolution series and speed tables (plus their inputs)
    Evolve(PipelineArgs),
    /// Run the full pipeline: every artifact the other subcommands produce
    Report(ReportArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Input file; repeat for multiple files (concatenated in order)
    #[arg(long = "input", required = true, value_name = "PATH")]
    inputs: Vec<PathBuf>,

    /// Input encoding
    #[arg(long, default_value = "tsv", value_parser = parse_format)]
    format: InputFormat,

    /// Keep only records whose language tag matches (case-insensitive)
    #[arg(long, value_name = "TAG")]
    language: Option<String>,

    /// Escalate record-level parse errors to a fatal error
    #[arg(long)]
    strict: bool,

    /// Output directory (created if missing)
    #[arg(long, default_value = ".", value_name = "DIR")]
    out: PathBuf,
}

#[derive(Args)]
struct IngestArgs {
    #[command(flatten)]
    input: InputArgs,
}

#[derive(Args)]
struct PipelineArgs {
    #[command(flatten)]
    input: InputArgs,

    /// Comma-separated field codes, e.g. ES,ILS,MI,RE
    #[arg(long, required = true, value_delimiter = ',', value_name = "LIST")]
    fields: Vec<String>,

    /// Inclusive year range A:B
    #[arg(long, value_parser = parse_years, value_name = "A:B")]
    years: YearRange,

    /// Reporting periods A:B[,A:B...]; defaults to the decade windows for
    /// 1991:2019 and to the full range otherwise
    #[arg(long, value_delimiter = ',', value_parser = parse_years, value_name = "A:B,...")]
    periods: Option<Vec<YearRange>>,
}

#[derive(Args)]
struct ReportArgs {
    #[command(flatten)]
    pipeline: PipelineArgs,

    /// Also dump every per-year keyword distribution as CSV
    #[arg(long)]
    dump_distributions: bool,
}

fn parse_format(s: &str) -> Result<InputFormat, String> {
    s.parse()
}

fn parse_years(s: &str) -> Result<YearRange, String> {
    s.parse()
}

fn default_periods(years: YearRange) -> Vec<YearRange> {
    let decades = [(1991, 2000), (2001, 2010), (2011, 2019)];
    if (years.start(), years.end()) == (1991, 2019) {
        let mut periods: Vec<YearRange> = decades
            .iter()
            .map(|&(a, b)| YearRange::new(a, b).expect("static period"))
            .collect();
        periods.push(years);
        periods
    } else {
        vec![years]
    }
}

impl PipelineArgs {
    fn periods(&self) -> Result<Vec<YearRange>, String> {
        let periods = match &self.periods {
            Some(p) => p.clone(),
            None => default_periods(self.years),
        };
        for period in &periods {
            if !self.years.covers(period) {
                return Err(format!(
                    "period {period} lies outside the analyzed years {}",
                    self.years
                ));
            }
        }
        Ok(periods)
    }
}

fn report_issues(issues: &[(String, ParseIssue)]) {
    for (source, issue) in issues {
        eprintln!("warning: {source}:{issue}");
    }
    if !issues.is_empty() {
        eprintln!("warning: {} record(s) skipped due to parse errors", issues.len());
    }
}

fn load_partition(args: &PipelineArgs) -> Result<(Partition, Vec<(String, ParseIssue)>), evometrics::Error> {
    let loaded = load_records(
        &args.input.inputs,
        args.input.format,
        args.input.language.as_deref(),
        args.input.strict,
    )?;
    if loaded.language_filtered > 0 {
        eprintln!(
            "note: {} record(s) dropped by the language filter",
            loaded.language_filtered
        );
    }
    let part = partition(loaded.records, &args.fields, args.years)?;
    if part.filtered_out() > 0 {
        eprintln!(
            "note: {} record(s) outside the field/year scope",
            part.filtered_out()
        );
    }
    Ok((part, loaded.issues))
}

fn cmd_ingest(args: &IngestArgs) -> Result<(), evometrics::Error> {
    let loaded = load_records(
        &args.input.inputs,
        args.input.format,
        args.input.language.as_deref(),
        args.input.strict,
    )?;
    report_issues(&loaded.issues);
    if loaded.language_filtered > 0 {
        eprintln!(
            "note: {} record(s) dropped by the language filter",
            loaded.language_filtered
        );
    }
    fs::create_dir_all(&args.input.out)?;
    let path = args.input.out.join("records.tsv");
    report::write_records_tsv(&path, &loaded.records)?;
    println!(
        "wrote {} record(s) to {} ({} parse error(s))",
        loaded.records.len(),
        path.display(),
        loaded.issues.len()
    );
    Ok(())
}

fn cmd_stats(args: &PipelineArgs) -> Result<(), evometrics::Error> {
    let periods = args.periods().expect("validated before dispatch");
    let (part, issues) = load_partition(args)?;
    report_issues(&issues);
    let stats = descriptive_stats(&part, &periods)?;
    fs::create_dir_all(&args.input.out)?;
    let path = args.input.out.join("corpus_stats.csv");
    report::write_corpus_stats(&path, &stats)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_dissim(args: &PipelineArgs) -> Result<(), evometrics::Error> {
    let (part, issues) = load_partition(args)?;
    report_issues(&issues);
    let analysis = analyze(&part)?;
    fs::create_dir_all(&args.input.out)?;
    let out = &args.input.out;

    report::write_dissimilarity(&out.join("dissimilarity.csv"), &analysis.matrix)?;
    let summaries = args
        .fields
        .iter()
        .map(|f| measure_summary(&analysis.matrix, f))
        .collect::<Result<Vec<_>, _>>()?;
    report::write_measure_summaries(&out.join("measure_summary.csv"), &summaries)?;
    let correlations = args
        .fields
        .iter()
        .map(|f| correlation_report(&analysis.matrix, f))
        .collect::<Result<Vec<_>, _>>()?;
    report::write_correlations(&out.join("correlation.csv"), &correlations)?;
    let scatter = report::write_scatter_files(out, &analysis.matrix)?;
    println!(
        "wrote dissimilarity.csv, measure_summary.csv, correlation.csv and {} scatter file(s) to {}",
        scatter.len(),
        out.display()
    );
    Ok(())
}

fn cmd_pca(args: &PipelineArgs) -> Result<(), evometrics::Error> {
    let (part, issues) = load_partition(args)?;
    report_issues(&issues);
    let analysis = analyze(&part)?;
    fs::create_dir_all(&args.input.out)?;
    let out = &args.input.out;
    report::write_pca_loadings(&out.join("pca_loadings.csv"), &analysis.model)?;
    report::write_pca_scree(&out.join("pca_scree.csv"), &analysis.model)?;
    println!("wrote pca_loadings.csv and pca_scree.csv to {}", out.display());
    Ok(())
}

fn cmd_evolve(args: &PipelineArgs) -> Result<(), evometrics::Error> {
    let periods = args.periods().expect("validated before dispatch");
    let (part, issues) = load_partition(args)?;
    report_issues(&issues);
    let analysis = analyze(&part)?;
    fs::create_dir_all(&args.input.out)?;
    let out = &args.input.out;
    report::write_dissimilarity(&out.join("dissimilarity.csv"), &analysis.matrix)?;
    report::write_pca_loadings(&out.join("pca_loadings.csv"), &analysis.model)?;
    report::write_pca_scree(&out.join("pca_scree.csv"), &analysis.model)?;
    report::write_evolution(&out.join("evolution.csv"), &analysis.series)?;
    let speeds = speed_reports(&analysis.series, &periods)?;
    report::write_speed(&out.join("speed.csv"), &speeds)?;
    println!(
        "wrote dissimilarity.csv, pca_loadings.csv, pca_scree.csv, evolution.csv, speed.csv to {}",
        out.display()
    );
    Ok(())
}

fn cmd_report(args: &ReportArgs) -> Result<(), evometrics::Error> {
    let periods = args.pipeline.periods().expect("validated before dispatch");
    let config = ReportConfig {
        inputs: args.pipeline.input.inputs.clone(),
        format: args.pipeline.input.format,
        fields: args.pipeline.fields.clone(),
        years: args.pipeline.years,
        periods,
        language: args.pipeline.input.language.clone(),
        strict: args.pipeline.input.strict,
        out_dir: args.pipeline.input.out.clone(),
        dump_distributions: args.dump_distributions,
    };
    let summary = run_report(&config)?;
    report_issues(&summary.issues);
    if summary.language_filtered > 0 {
        eprintln!(
            "note: {} record(s) dropped by the language filter",
            summary.language_filtered
        );
    }
    if summary.out_of_scope > 0 {
        eprintln!("note: {} record(s) outside the field/year scope", summary.out_of_scope);
    }
    println!(
        "analyzed {} record(s); wrote {} file(s) to {}",
        summary.records,
        summary.files.len(),
        config.out_dir.display()
    );
    Ok(())
}

fn validate_usage(cli: &Cli) -> Result<(), String> {
    match &cli.command {
        Command::Ingest(_) => Ok(()),
        Command::Stats(p) | Command::Dissim(p) | Command::Pca(p) | Command::Evolve(p) => {
            p.periods().map(|_| ())
        }
        Command::Report(r) => r.pipeline.periods().map(|_| ()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    // period/years consistency is a usage error, same as clap's own
    if let Err(message) = validate_usage(&cli) {
        eprintln!("error: {message}");
        return ExitCode::from(2);
    }

    let result = match &cli.command {
        Command::Ingest(args) => cmd_ingest(args),
        Command::Stats(args) => cmd_stats(args),
        Command::Dissim(args) => cmd_dissim(args),
        Command::Pca(args) => cmd_pca(args),
        Command::Evolve(args) => cmd_evolve(args),
        Command::Report(args) => cmd_report(args),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(cause) = source {
                eprintln!("  caused by: {cause}");
                source = cause.source();
            }
            ExitCode::from(1)
        }
    }
}
