//! Markdown, CSV and JSON rendering of tables and reports.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{beta_label, CoefficientKind, EquationFamily};
use crate::poly::Monomial;
use crate::types::{table, TypeFamily, View};
use crate::verify::Check;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Md,
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Format> {
        match s {
            "md" | "markdown" => Ok(Format::Md),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::Parse(format!("unknown format {s:?} (md, csv, json)"))),
        }
    }
}

/// One row of a type table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub label: String,
    pub m: u64,
    pub a: u64,
    pub b: u64,
    pub case: String,
    pub weight_class: u64,
    pub family: String,
    pub support: Vec<String>,
    pub forced_reducible: bool,
    pub fails_necessary: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableDoc {
    pub degree: u32,
    pub view: String,
    pub filtered: bool,
    pub rows: Vec<TableRow>,
}

fn zpow(k: u32) -> String {
    match k {
        0 => String::new(),
        1 => "Z".into(),
        _ => format!("Z^{k}"),
    }
}

/// The family with every complete group `Z^k * (all monomials of degree d-k in
/// X, Y)` written as `Z^k L_{d-k,Z}`.
pub fn shorthand(fam: &EquationFamily) -> String {
    let d = fam.degree();
    let support = fam.support();
    let full = |k: u32| {
        let j = d - k;
        j >= 1 && (0..=j).all(|i| support.contains(&Monomial::from_exps([i, j - i, k])))
    };
    let mut groups = Vec::new();
    let mut parts = Vec::new();
    for (m, kind) in &fam.entries {
        let k = m.exps()[2];
        if full(k) {
            groups.push(k);
            continue;
        }
        parts.push(match kind {
            CoefficientKind::Unit => m.to_string(),
            CoefficientKind::NonzeroParam => format!("α{m}"),
            CoefficientKind::FreeParam => format!("{}{m}", beta_label(d, m)),
        });
    }
    groups.sort_by(|x, y| y.cmp(x));
    groups.dedup();
    parts.extend(groups.iter().map(|&k| format!("{}L_{{{},Z}}", zpow(k), d - k)));
    parts.join(" + ")
}

pub fn table_row(t: &TypeFamily) -> TableRow {
    let fam = EquationFamily::from_type_family(t);
    TableRow {
        label: t.ctype.to_string(),
        m: t.ctype.m,
        a: t.ctype.a,
        b: t.ctype.b,
        case: t.case_tag.label().into(),
        weight_class: t.weight_class,
        family: shorthand(&fam),
        support: t.monomials.iter().map(|m| m.to_string()).collect(),
        forced_reducible: t.flags.forced_reducible,
        fails_necessary: t.flags.fails_necessary,
    }
}

pub fn table_doc(d: u32, view: View, filtered: bool) -> TableDoc {
    TableDoc {
        degree: d,
        view: match view {
            View::Published => "published",
            View::Complete => "complete",
        }
        .into(),
        filtered,
        rows: table(d, view, filtered).iter().map(table_row).collect(),
    }
}

fn md_escape(s: &str) -> String {
    s.replace('|', "\\|")
}

fn md_table(head: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = format!("| {} |\n|{}\n", head.join(" | "), "---|".repeat(head.len()));
    for r in rows {
        let cells: Vec<String> = r.iter().map(|c| md_escape(c)).collect();
        let _ = writeln!(out, "| {} |", cells.join(" | "));
    }
    out
}

fn csv_table(head: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Domain(format!("csv: {e}"));
    w.write_record(head).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Domain(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Domain(e.to_string()))
}

pub fn to_json<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| Error::Domain(format!("json: {e}")))
}

pub fn parse_table_json(s: &str) -> Result<TableDoc> {
    serde_json::from_str(s).map_err(|e| Error::Parse(format!("table json: {e}")))
}

fn flag_cell(r: &TableRow) -> String {
    match (r.forced_reducible, r.fails_necessary) {
        (false, false) => String::new(),
        (true, false) => "reducible".into(),
        (false, true) => "singular".into(),
        (true, true) => "reducible, singular".into(),
    }
}

pub fn render_table(doc: &TableDoc, fmt: Format) -> Result<String> {
    let head = ["type", "case", "family", "flags"];
    let rows: Vec<Vec<String>> = doc
        .rows
        .iter()
        .map(|r| vec![r.label.clone(), r.case.clone(), r.family.clone(), flag_cell(r)])
        .collect();
    match fmt {
        Format::Md => Ok(format!(
            "## Degree {} ({}, {} rows{})\n\n{}",
            doc.degree,
            doc.view,
            doc.rows.len(),
            if doc.filtered { "" } else { ", unfiltered" },
            md_table(&head, &rows)
        )),
        Format::Csv => {
            let rows: Vec<Vec<String>> = doc
                .rows
                .iter()
                .zip(rows)
                .map(|(r, mut v)| {
                    v.push(r.support.join(" "));
                    v
                })
                .collect();
            csv_table(&["type", "case", "family", "flags", "support"], &rows)
        }
        Format::Json => to_json(doc),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckReport {
    pub degree: u32,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<Check>,
}

impl CheckReport {
    pub fn new(degree: u32, checks: Vec<Check>) -> CheckReport {
        let passed = checks.iter().filter(|c| c.pass).count();
        CheckReport {
            degree,
            passed,
            failed: checks.len() - passed,
            checks,
        }
    }
}

pub fn render_checks(rep: &CheckReport, fmt: Format) -> Result<String> {
    let rows: Vec<Vec<String>> = rep
        .checks
        .iter()
        .map(|c| {
            vec![
                if c.pass { "PASS" } else { "FAIL" }.to_string(),
                c.name.clone(),
                c.expected.clone(),
                c.got.clone(),
            ]
        })
        .collect();
    let head = ["status", "check", "expected", "got"];
    match fmt {
        Format::Md => Ok(format!(
            "## Degree {}: {} passed, {} failed\n\n{}",
            rep.degree,
            rep.passed,
            rep.failed,
            md_table(&head, &rows)
        )),
        Format::Csv => csv_table(&head, &rows),
        Format::Json => to_json(rep),
    }
}

/// Key/value rendering for single-object reports; JSON goes through `value`.
pub fn render_record<T: Serialize>(title: &str, fields: &[(&str, String)], value: &T, fmt: Format) -> Result<String> {
    match fmt {
        Format::Md => {
            let rows: Vec<Vec<String>> = fields.iter().map(|(k, v)| vec![k.to_string(), v.clone()]).collect();
            Ok(format!("## {title}\n\n{}", md_table(&["field", "value"], &rows)))
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = fields.iter().map(|(k, v)| vec![k.to_string(), v.clone()]).collect();
            csv_table(&["field", "value"], &rows)
        }
        Format::Json => to_json(value),
    }
}
