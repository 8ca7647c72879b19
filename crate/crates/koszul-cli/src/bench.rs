//! Benchmark harness: parameter rows in, one CSV record per (row, seed)
//! out. Rows are evaluated concurrently and emitted in input order.

use std::time::Instant;

use rayon::prelude::*;

use koszul::monomial::random_ideal;
use koszul::{betti_table, EngineError, Strategy};

use crate::CliError;

#[derive(Clone, Copy, Debug)]
pub struct ParamRow {
    pub n: usize,
    pub g: usize,
    pub min_deg: u32,
    pub max_deg: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Status {
    Ok,
    Infeasible,
    Error,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Infeasible => "infeasible",
            Status::Error => "error",
        }
    }
}

pub struct BenchRecord {
    pub row: ParamRow,
    pub seed: u64,
    pub taylor: u128,
    pub checked: usize,
    pub rank_computations: usize,
    pub minimal_total: usize,
    pub minimal_distinct: usize,
    pub time_ms: u128,
    pub status: Status,
}

pub const CSV_HEADER: &str = "n,g,max_deg,min_deg,seed,taylor,checked,rank_computations,\
                              minimal_total,minimal_distinct,time_ms,status";

/// Rows are `n,g,min_deg,max_deg`; blank lines and `#` comments are
/// skipped, and a leading header line is tolerated.
pub fn parse_rows(text: &str) -> Result<Vec<ParamRow>, CliError> {
    let mut rows = Vec::new();
    let mut first_content = true;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        match parse_fields(&fields) {
            Some(row) => rows.push(row),
            None if first_content && line.chars().any(|c| c.is_ascii_alphabetic()) => {}
            None => {
                return Err(CliError::Input(format!(
                    "line {}: expected n,g,min_deg,max_deg, got {line:?}",
                    idx + 1
                )));
            }
        }
        first_content = false;
    }
    Ok(rows)
}

fn parse_fields(fields: &[&str]) -> Option<ParamRow> {
    if fields.len() != 4 {
        return None;
    }
    Some(ParamRow {
        n: fields[0].parse().ok()?,
        g: fields[1].parse().ok()?,
        min_deg: fields[2].parse().ok()?,
        max_deg: fields[3].parse().ok()?,
    })
}

pub fn run(
    rows: &[ParamRow],
    seeds: u64,
    strategy: Strategy,
    p: u64,
    omit_timing: bool,
) -> Vec<BenchRecord> {
    let jobs: Vec<(ParamRow, u64)> =
        rows.iter().flat_map(|row| (1..=seeds).map(move |seed| (*row, seed))).collect();
    jobs.into_par_iter().map(|(row, seed)| evaluate(row, seed, strategy, p, omit_timing)).collect()
}

fn evaluate(row: ParamRow, seed: u64, strategy: Strategy, p: u64, omit_timing: bool) -> BenchRecord {
    let start = Instant::now();
    let outcome = random_ideal(row.n, row.g, row.min_deg, row.max_deg, seed)
        .map_err(|_| Status::Infeasible)
        .and_then(|ideal| {
            betti_table(&ideal, strategy, p).map_err(|e| match e {
                EngineError::Family(_) => Status::Infeasible,
                _ => Status::Error,
            })
        });
    let time_ms = if omit_timing { 0 } else { start.elapsed().as_millis() };
    match outcome {
        Ok(table) => BenchRecord {
            row,
            seed,
            taylor: table.stats().taylor_size,
            checked: table.stats().multidegrees_checked,
            rank_computations: table.stats().rank_computations,
            minimal_total: table.stats().minimal_total,
            minimal_distinct: table.distinct_multidegrees(),
            time_ms,
            status: Status::Ok,
        },
        Err(status) => BenchRecord {
            row,
            seed,
            taylor: if row.g < 128 { 1u128 << row.g } else { 0 },
            checked: 0,
            rank_computations: 0,
            minimal_total: 0,
            minimal_distinct: 0,
            time_ms,
            status,
        },
    }
}

pub fn render_csv(records: &[BenchRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.row.n,
            r.row.g,
            r.row.max_deg,
            r.row.min_deg,
            r.seed,
            r.taylor,
            r.checked,
            r.rank_computations,
            r.minimal_total,
            r.minimal_distinct,
            r.time_ms,
            r.status.label()
        ));
    }
    out
}
