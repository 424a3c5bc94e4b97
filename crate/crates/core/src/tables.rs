//! Regeneration of the `(n_min, n_max)` tables and comparison with the
//! published values.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::certifier::{certify, Attempt, CertifyError, Pipeline};
use crate::feasibility::nmax_formula;
use crate::known::{known_row, mg2n_threshold, TableKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Markdown,
    Csv,
}

impl Format {
    pub fn parse(s: &str) -> Option<Format> {
        match s {
            "markdown" => Some(Format::Markdown),
            "csv" => Some(Format::Csv),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub g: u32,
    pub n_min: Option<u32>,
    pub n_max: Option<u32>,
}

/// Attempts made at one cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellLog {
    pub n: u32,
    pub attempts: Vec<Attempt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discrepancy {
    pub g: u32,
    pub field: &'static str,
    pub computed: Option<u32>,
    pub expected: Option<u32>,
    /// Logs of the cells between the computed and the expected value.
    pub cells: Vec<CellLog>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DiscrepancyReport {
    pub entries: Vec<Discrepancy>,
}

impl DiscrepancyReport {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for d in &self.entries {
            let show = |v: Option<u32>| v.map_or("-".to_string(), |x| x.to_string());
            let _ = writeln!(
                out,
                "g={} {}: computed {} expected {}",
                d.g,
                d.field,
                show(d.computed),
                show(d.expected)
            );
            for cell in &d.cells {
                if cell.attempts.is_empty() {
                    let _ = writeln!(out, "  n={}: no attempt (outside the routed range)", cell.n);
                }
                for a in &cell.attempts {
                    let _ = writeln!(out, "  n={}: {a}", cell.n);
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub kind: TableKind,
    pub rows: Vec<TableRow>,
    pub report: DiscrepancyReport,
}

fn pipeline(kind: TableKind) -> Option<Pipeline> {
    match kind {
        TableKind::Thm2 => Some(Pipeline::Full),
        TableKind::Prop51 => Some(Pipeline::Weierstrass),
        TableKind::Prop52 => Some(Pipeline::Improved),
        TableKind::Mg2nReference => None,
    }
}

/// Largest `n` scanned for genus `g`.
pub fn scan_limit(g: u32) -> u32 {
    nmax_formula(g) + 2
}

/// Certify every cell of the scan range and return, per genus in order,
/// each `n` with whether it certified and its attempt log.
fn scan_all(kind: TableKind, pipe: Pipeline) -> Result<Vec<(u32, Vec<(u32, bool, Vec<Attempt>)>)>, CertifyError> {
    let cells: Vec<(u32, u32)> = kind
        .genera()
        .flat_map(|g| (1..=scan_limit(g)).map(move |n| (g, n)))
        .collect();
    let results: Vec<(u32, u32, bool, Vec<Attempt>)> = cells
        .par_iter()
        .map(|&(g, n)| {
            let out = certify(g, n, pipe)?;
            Ok((g, n, out.is_general_type(), out.attempts))
        })
        .collect::<Result<_, CertifyError>>()?;
    let mut grouped: Vec<(u32, Vec<(u32, bool, Vec<Attempt>)>)> = Vec::new();
    for (g, n, ok, attempts) in results {
        match grouped.last_mut() {
            Some((last, v)) if *last == g => v.push((n, ok, attempts)),
            _ => grouped.push((g, vec![(n, ok, attempts)])),
        }
    }
    Ok(grouped)
}

fn compare(
    g: u32,
    field: &'static str,
    computed: Option<u32>,
    expected: Option<u32>,
    cells: &[(u32, bool, Vec<Attempt>)],
) -> Option<Discrepancy> {
    if computed == expected {
        return None;
    }
    let lo = computed.into_iter().chain(expected).min().unwrap_or(1);
    let hi = computed.into_iter().chain(expected).max().unwrap_or(1);
    Some(Discrepancy {
        g,
        field,
        computed,
        expected,
        cells: cells
            .iter()
            .filter(|(n, _, _)| (lo..=hi).contains(n))
            .map(|(n, _, a)| CellLog { n: *n, attempts: a.clone() })
            .collect(),
    })
}

/// Regenerate one table. For each genus `n_min` is the first certified `n`
/// counting up from 1 and `n_max` the last certified `n` up to
/// [`scan_limit`].
pub fn gen_table(kind: TableKind) -> Result<Table, CertifyError> {
    let Some(pipe) = pipeline(kind) else {
        let rows = kind
            .genera()
            .map(|g| TableRow { g, n_min: mg2n_threshold(g), n_max: None })
            .collect();
        return Ok(Table { kind, rows, report: DiscrepancyReport::default() });
    };
    let mut rows = Vec::new();
    let mut report = DiscrepancyReport::default();
    for (g, cells) in scan_all(kind, pipe)? {
        let n_min = cells.iter().find(|c| c.1).map(|c| c.0);
        let n_max = cells.iter().rev().find(|c| c.1).map(|c| c.0);
        rows.push(TableRow { g, n_min, n_max });
        let (exp_min, exp_max) = known_row(kind, g).map_or((None, None), |(a, b)| (Some(a), b));
        report.entries.extend(compare(g, "n_min", n_min, exp_min, &cells));
        report.entries.extend(compare(g, "n_max", n_max, exp_max, &cells));
    }
    Ok(Table { kind, rows, report })
}

fn cell(v: Option<u32>) -> String {
    v.map_or("-".to_string(), |x| x.to_string())
}

impl Table {
    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Csv => {
                out.push_str("g,n_min,n_max\n");
                for r in &self.rows {
                    let max = r.n_max.map_or(String::new(), |x| x.to_string());
                    let min = r.n_min.map_or(String::new(), |x| x.to_string());
                    let _ = writeln!(out, "{},{},{}", r.g, min, max);
                }
            }
            Format::Markdown => {
                let row = |label: &str, vals: Vec<String>| format!("| {} | {} |\n", label, vals.join(" | "));
                out.push_str(&row("g", self.rows.iter().map(|r| r.g.to_string()).collect()));
                out.push_str(&format!("|---|{}\n", "---|".repeat(self.rows.len())));
                out.push_str(&row("n_min", self.rows.iter().map(|r| cell(r.n_min)).collect()));
                if self.kind != TableKind::Mg2nReference {
                    out.push_str(&row("n_max", self.rows.iter().map(|r| cell(r.n_max)).collect()));
                }
            }
        }
        out
    }
}
