//! File formats: JSON reports, per-run CSV, trace CSV and benchmark listings.
//!
//! JSON schema:
//!
//! ```text
//! { "spec": ExperimentSpec,
//!   "per_strategy": [ { "name", "strategy", "stats", "success_rate",
//!                       "runs": [ { "nfc", "best_value", "success" } ] } ] }
//! ```
//!
//! `stats` is `null` when no run succeeded. CSV files carry a header row,
//! and all outputs end with a newline. Floats are written in shortest
//! round-trip form, so parsing reproduces every value bit for bit.

use serde::{Deserialize, Serialize};

use crate::bench::{BenchmarkId, BenchmarkSpec};
use crate::error::{Error, Result};
use crate::harness::{ExperimentReport, ExperimentSpec, NfcStats};
use crate::popinit::InitStrategy;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub nfc: u64,
    pub best_value: f64,
    pub success: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategySummary {
    pub name: String,
    pub strategy: InitStrategy,
    pub stats: Option<NfcStats>,
    pub success_rate: f64,
    pub runs: Vec<RunSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub spec: ExperimentSpec,
    pub per_strategy: Vec<StrategySummary>,
}

impl From<&ExperimentReport> for ReportFile {
    fn from(report: &ExperimentReport) -> Self {
        ReportFile {
            spec: report.spec.clone(),
            per_strategy: report
                .per_strategy
                .iter()
                .map(|s| StrategySummary {
                    name: s.name.clone(),
                    strategy: s.strategy,
                    stats: s.stats,
                    success_rate: s.success_rate,
                    runs: s
                        .runs
                        .iter()
                        .map(|r| RunSummary {
                            nfc: r.nfc,
                            best_value: r.best_value,
                            success: r.success,
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

fn ser(e: impl std::fmt::Display) -> Error {
    Error::Serialization(e.to_string())
}

pub fn report_to_json(report: &ExperimentReport) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&ReportFile::from(report)).map_err(ser)?;
    s.push('\n');
    Ok(s)
}

pub fn report_from_json(text: &str) -> Result<ReportFile> {
    serde_json::from_str(text).map_err(ser)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub strategy: String,
    pub run_index: usize,
    pub nfc: u64,
    pub best_value: f64,
    pub success: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub strategy: String,
    pub run_index: usize,
    pub nfc: u64,
    pub best_value: f64,
}

pub fn run_rows(report: &ExperimentReport) -> Vec<RunRow> {
    report
        .per_strategy
        .iter()
        .flat_map(|s| {
            s.runs.iter().enumerate().map(|(i, r)| RunRow {
                strategy: s.name.clone(),
                run_index: i,
                nfc: r.nfc,
                best_value: r.best_value,
                success: r.success,
            })
        })
        .collect()
}

pub fn trace_rows(report: &ExperimentReport) -> Vec<TraceRow> {
    report
        .per_strategy
        .iter()
        .flat_map(|s| {
            s.runs.iter().enumerate().flat_map(move |(i, r)| {
                r.trace.iter().map(move |t| TraceRow {
                    strategy: s.name.clone(),
                    run_index: i,
                    nfc: t.nfc,
                    best_value: t.best_value,
                })
            })
        })
        .collect()
}

/// Serializes `rows` as CSV. `header` is used when `rows` is empty.
fn write_csv<T: Serialize>(rows: &[T], header: &[&str]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(true).from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(header).map_err(ser)?;
    }
    for r in rows {
        w.serialize(r).map_err(ser)?;
    }
    String::from_utf8(w.into_inner().map_err(ser)?).map_err(ser)
}

fn read_csv<T: for<'de> Deserialize<'de>>(text: &str) -> Result<Vec<T>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .map(|r| r.map_err(ser))
        .collect()
}

pub fn runs_to_csv(report: &ExperimentReport) -> Result<String> {
    write_csv(
        &run_rows(report),
        &["strategy", "run_index", "nfc", "best_value", "success"],
    )
}

pub fn runs_from_csv(text: &str) -> Result<Vec<RunRow>> {
    read_csv(text)
}

pub fn traces_to_csv(report: &ExperimentReport) -> Result<String> {
    write_csv(&trace_rows(report), &["strategy", "run_index", "nfc", "best_value"])
}

pub fn traces_from_csv(text: &str) -> Result<Vec<TraceRow>> {
    read_csv(text)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRow {
    pub id: BenchmarkId,
    pub dimension: usize,
    pub bounds: String,
    pub optimum_value: f64,
}

impl From<&BenchmarkSpec> for BenchmarkRow {
    fn from(spec: &BenchmarkSpec) -> Self {
        BenchmarkRow {
            id: spec.id,
            dimension: spec.dimension,
            bounds: bounds_label(spec),
            optimum_value: spec.optimum_value,
        }
    }
}

/// `[lo, hi]^n` when every coordinate shares a range, otherwise the
/// ranges joined with ` x `.
pub fn bounds_label(spec: &BenchmarkSpec) -> String {
    let first = spec.bounds[0];
    if spec.bounds.iter().all(|b| *b == first) {
        format!("[{}, {}]^{}", first.lo, first.hi, spec.dimension)
    } else {
        spec.bounds
            .iter()
            .map(|b| format!("[{}, {}]", b.lo, b.hi))
            .collect::<Vec<_>>()
            .join(" x ")
    }
}

pub fn specs_to_json(specs: &[&BenchmarkSpec]) -> Result<String> {
    let mut s = serde_json::to_string_pretty(specs).map_err(ser)?;
    s.push('\n');
    Ok(s)
}

pub fn specs_to_csv(specs: &[&BenchmarkSpec]) -> Result<String> {
    let rows: Vec<BenchmarkRow> = specs.iter().map(|s| BenchmarkRow::from(*s)).collect();
    write_csv(&rows, &["id", "dimension", "bounds", "optimum_value"])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::get_spec;
    use crate::harness::{run_experiment, ExperimentSpec};

    fn report() -> ExperimentReport {
        let spec = ExperimentSpec {
            runs: 3,
            master_seed: 5,
            ..ExperimentSpec::new(
                BenchmarkId::Matyas,
                vec![InitStrategy::Random, InitStrategy::semi_random(0.3).unwrap()],
            )
        };
        run_experiment(&spec).unwrap()
    }

    #[test]
    fn json_round_trip_is_exact() {
        let r = report();
        let text = report_to_json(&r).unwrap();
        assert!(text.ends_with('\n'));
        let parsed = report_from_json(&text).unwrap();
        assert_eq!(parsed, ReportFile::from(&r));
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let r = report();
        let text = runs_to_csv(&r).unwrap();
        assert!(text.starts_with("strategy,run_index,nfc,best_value,success\n"));
        assert!(text.ends_with('\n'));
        assert_eq!(runs_from_csv(&text).unwrap(), run_rows(&r));
        assert_eq!(text.lines().count(), 1 + 6);

        let t = traces_to_csv(&r).unwrap();
        assert!(t.starts_with("strategy,run_index,nfc,best_value\n"));
        assert_eq!(traces_from_csv(&t).unwrap(), trace_rows(&r));
    }

    #[test]
    fn listing_formats() {
        let specs: Vec<&BenchmarkSpec> = BenchmarkId::ALL.iter().map(|&id| get_spec(id)).collect();
        let csv = specs_to_csv(&specs).unwrap();
        assert_eq!(csv.lines().count(), 8);
        assert!(csv.contains("michalewicz,5,"));
        assert!(csv.contains("-4.687658"));
        assert!(csv.contains("\"[-5, 10] x [0, 15]\""));
        let json: serde_json::Value = serde_json::from_str(&specs_to_json(&specs).unwrap()).unwrap();
        assert_eq!(json.as_array().unwrap().len(), 7);
        assert_eq!(json[5]["id"], "michalewicz");
        assert_eq!(json[5]["dimension"], 5);
    }
}
