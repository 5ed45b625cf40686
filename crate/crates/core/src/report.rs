//! Machine-readable verification records.
//!
//! Counts and rationals are always serialized as decimal strings. JSON output
//! is one object per line; CSV has a fixed header.

use std::io::Write;
use std::time::Instant;

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::gf::FieldCtx;

/// When set (to anything but `0`), `elapsed_ms` is reported as 0 so that
/// reports can be compared byte for byte.
pub const FIXED_TIMING_ENV: &str = "FQCENSUS_FIXED_TIMING";

pub const CSV_HEADER: [&str; 15] = [
    "command",
    "p",
    "e",
    "modulus",
    "n",
    "k",
    "l",
    "m",
    "oracle_count",
    "formula_value",
    "predicted",
    "observed",
    "match",
    "elapsed_ms",
    "shards",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportParams {
    pub p: u32,
    pub e: u32,
    pub modulus: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub l: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m: Option<usize>,
}

impl ReportParams {
    pub fn for_field(field: &FieldCtx) -> Self {
        let spec = field.spec();
        ReportParams { p: spec.p, e: spec.e, modulus: spec.modulus.clone(), n: None, k: None, l: None, m: None }
    }

    pub fn n(mut self, n: usize) -> Self {
        self.n = Some(n);
        self
    }

    pub fn k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }

    pub fn l(mut self, l: usize) -> Self {
        self.l = Some(l);
        self
    }

    pub fn m(mut self, m: usize) -> Self {
        self.m = Some(m);
        self
    }
}

/// Per-problem counts of one census cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemCounts {
    pub completable: String,
    pub pencil: String,
    pub reachable: String,
    pub simple: String,
}

impl ProblemCounts {
    pub fn all(&self) -> [&str; 4] {
        [&self.completable, &self.pencil, &self.reachable, &self.simple]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub code: u64,
    /// `entries[i][j]` lists the coefficients of entry `(i, j)`, low-to-high.
    pub entries: Vec<Vec<Vec<u32>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub command: String,
    pub params: ReportParams,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub oracle_count: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub oracle_counts: Option<ProblemCounts>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub formula_value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub predicted: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub observed: Option<String>,
    #[serde(rename = "match", skip_serializing_if = "Option::is_none", default)]
    pub matched: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub total: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub skipped: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<Counterexample>,
    pub elapsed_ms: u64,
    pub shards: usize,
}

impl CensusReport {
    pub fn new(command: impl Into<String>, params: ReportParams) -> Self {
        CensusReport {
            command: command.into(),
            params,
            oracle_count: None,
            oracle_counts: None,
            formula_value: None,
            predicted: None,
            observed: None,
            matched: None,
            total: None,
            skipped: None,
            detail: None,
            counterexample: None,
            elapsed_ms: 0,
            shards: 0,
        }
    }

    /// A mismatch was found (skipped and informational records are not mismatches).
    pub fn is_mismatch(&self) -> bool {
        self.matched == Some(false)
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn csv_record(&self) -> [String; 15] {
        let opt = |v: Option<usize>| v.map_or_else(String::new, |x| x.to_string());
        let oracle = match (&self.oracle_counts, &self.oracle_count) {
            (Some(c), _) => format!(
                "completable={};pencil={};reachable={};simple={}",
                c.completable, c.pencil, c.reachable, c.simple
            ),
            (None, Some(c)) => c.clone(),
            (None, None) => String::new(),
        };
        let p = &self.params;
        [
            self.command.clone(),
            p.p.to_string(),
            p.e.to_string(),
            p.modulus.iter().map(u32::to_string).collect::<Vec<_>>().join(" "),
            opt(p.n),
            opt(p.k),
            opt(p.l),
            opt(p.m),
            oracle,
            self.formula_value.clone().unwrap_or_default(),
            self.predicted.clone().unwrap_or_default(),
            self.observed.clone().unwrap_or_default(),
            self.matched.map_or_else(String::new, |b| b.to_string()),
            self.elapsed_ms.to_string(),
            self.shards.to_string(),
        ]
    }
}

pub fn fmt_count(v: &BigUint) -> String {
    v.to_str_radix(10)
}

/// `a/b` in lowest terms (integers too, e.g. `1/1`).
pub fn fmt_rational(v: &BigRational) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

pub fn write_reports<W: Write>(out: W, reports: &[CensusReport], format: Format) -> std::io::Result<()> {
    match format {
        Format::Json => {
            let mut out = out;
            for r in reports {
                writeln!(out, "{}", r.to_json_line())?;
            }
            out.flush()
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(CSV_HEADER)?;
            for r in reports {
                w.write_record(r.csv_record())?;
            }
            w.flush()
        }
    }
}

pub fn render(reports: &[CensusReport], format: Format) -> String {
    let mut buf = Vec::new();
    write_reports(&mut buf, reports, format).expect("writing to memory");
    String::from_utf8(buf).expect("reports are UTF-8")
}

/// Wall-clock timer honoring [`FIXED_TIMING_ENV`].
pub struct Timer(Instant);

impl Timer {
    pub fn start() -> Self {
        Timer(Instant::now())
    }

    pub fn elapsed_ms(&self) -> u64 {
        if fixed_timing() {
            0
        } else {
            self.0.elapsed().as_millis() as u64
        }
    }
}

pub fn fixed_timing() -> bool {
    std::env::var(FIXED_TIMING_ENV).is_ok_and(|v| v != "0" && !v.is_empty())
}
