//! Flat, exact report formats for scan records: one JSON object per line and
//! a CSV triage summary.

use crate::sw::fmt_ratio;
use crate::verify::{ScanRecord, Wolfmann};
use serde::{Deserialize, Serialize};
use std::io::Write;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub p: u64,
    pub t: u32,
    pub q: u64,
    pub k: u32,
    pub d: u64,
    pub e: u64,
    #[serde(rename = "D")]
    pub big_d: u64,
    pub lambda: u64,
    pub n: u64,
    pub f: u64,
    pub g: u64,
    pub mu: u64,
    #[serde(rename = "dim_C")]
    pub dim_c: u32,
    pub coset_ok: bool,
    pub weights: Vec<usize>,
    pub num_weights: usize,
    pub b1: u64,
    pub b2_brute: u64,
    pub b2_paper: u64,
    pub b2_corrected: u64,
    pub projective: bool,
    pub moments_ok: bool,
    pub scaling_ok: bool,
    pub paper_b2_agrees: bool,
    pub thm_nonprojective: bool,
    pub thm_not_two_weight: bool,
    pub wolfmann: Wolfmann,
    pub key_eq_residual_brute: Option<String>,
    pub key_eq_residual_paper: Option<String>,
    pub cost: u64,
}

impl From<&ScanRecord> for ReportRecord {
    fn from(r: &ScanRecord) -> Self {
        let p = &r.params;
        ReportRecord {
            p: p.p,
            t: p.t,
            q: p.q,
            k: p.k,
            d: p.d,
            e: p.e,
            big_d: p.big_d,
            lambda: p.lambda,
            n: p.n,
            f: p.f,
            g: p.g,
            mu: p.mu,
            dim_c: r.dims.c,
            coset_ok: r.coset_ok,
            weights: r.weights_c.clone(),
            num_weights: r.num_weights,
            b1: r.dual.b1,
            b2_brute: r.dual.b2_brute,
            b2_paper: r.dual.b2_paper.expect("defined for the full code"),
            b2_corrected: r.dual.b2_corrected,
            projective: r.projective,
            moments_ok: r.moments_ok,
            scaling_ok: r.scaling_ok,
            paper_b2_agrees: r.paper_b2_agrees,
            thm_nonprojective: r.theorem_nonprojective_ok,
            thm_not_two_weight: r.theorem_not_two_weight_ok,
            wolfmann: r.wolfmann,
            key_eq_residual_brute: r.key_eq_residual_brute.as_ref().map(fmt_ratio),
            key_eq_residual_paper: r.key_eq_residual_paper.as_ref().map(fmt_ratio),
            cost: r.cost as u64,
        }
    }
}

impl ReportRecord {
    /// One JSONL line, newline included.
    pub fn to_line(&self) -> String {
        let mut s = serde_json::to_string(self).expect("plain data serializes");
        s.push('\n');
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsvRow {
    pub q: u64,
    pub k: u32,
    pub d: u64,
    pub e: u64,
    pub lambda: u64,
    pub n: u64,
    pub num_weights: usize,
    pub b2_brute: u64,
    pub b2_paper: u64,
    pub projective: bool,
    pub thm_nonprojective: bool,
    pub thm_not_two_weight: bool,
}

impl From<&ReportRecord> for CsvRow {
    fn from(r: &ReportRecord) -> Self {
        CsvRow {
            q: r.q,
            k: r.k,
            d: r.d,
            e: r.e,
            lambda: r.lambda,
            n: r.n,
            num_weights: r.num_weights,
            b2_brute: r.b2_brute,
            b2_paper: r.b2_paper,
            projective: r.projective,
            thm_nonprojective: r.thm_nonprojective,
            thm_not_two_weight: r.thm_not_two_weight,
        }
    }
}

pub const CSV_HEADER: [&str; 12] = [
    "q",
    "k",
    "d",
    "e",
    "lambda",
    "n",
    "num_weights",
    "b2_brute",
    "b2_paper",
    "projective",
    "thm_nonprojective",
    "thm_not_two_weight",
];

/// CSV summary writer; the header is written even when no rows follow.
pub struct CsvSummary<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> CsvSummary<W> {
    pub fn new(out: W) -> csv::Result<Self> {
        let mut inner = csv::WriterBuilder::new().has_headers(false).from_writer(out);
        inner.write_record(CSV_HEADER)?;
        Ok(CsvSummary { inner })
    }

    pub fn write(&mut self, r: &ReportRecord) -> csv::Result<()> {
        self.inner.serialize(CsvRow::from(r))
    }

    pub fn finish(mut self) -> std::io::Result<W> {
        self.inner.flush()?;
        self.inner.into_inner().map_err(|e| e.into_error())
    }
}
