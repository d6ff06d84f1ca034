//! Report records and their CSV, JSON and text renderings.
//!
//! CSV column orders are fixed:
//!
//! * rows: `model,n,L,omega1_0,omega2_kind,omega2,rho1,rho2,rho3,pass`
//! * verify: `n,identity,max_residual,limit,pass`
//! * qkz: `n,trotter,inhomogeneities,check,value,limit,bound,pass`

use std::collections::BTreeMap;
use std::fmt::Write as _;

use on_qkz::chain::{ChainLength, Omega2Kind, TableRow};
use on_qkz::qkz::{Bound, VerifyReport};
use on_qkz::reference::RowComparison;
use serde::Serialize;

use crate::args::Format;

/// Comparison of one cell with its published value.
#[derive(Debug, Clone, Serialize)]
pub struct CellRecord {
    pub printed: String,
    pub deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// One table row, optionally with its comparison against the reference.
#[derive(Debug, Clone, Serialize)]
pub struct RowRecord {
    pub model: String,
    pub n: usize,
    #[serde(rename = "L")]
    pub length: ChainLength,
    pub omega1_0: f64,
    pub omega2_kind: Omega2Kind,
    pub omega2: f64,
    pub rho1: f64,
    pub rho2: f64,
    pub rho3: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<BTreeMap<&'static str, CellRecord>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
}

impl RowRecord {
    pub fn new(row: &TableRow, comparison: Option<&RowComparison>) -> Self {
        let reference = comparison.map(|c| {
            c.cells
                .iter()
                .map(|cell| {
                    let record = CellRecord {
                        printed: cell.reference.text().to_owned(),
                        deviation: cell.deviation,
                        tolerance: cell.tolerance,
                        pass: cell.pass,
                    };
                    (cell.column.name(), record)
                })
                .collect()
        });
        Self {
            model: format!("O({})", row.n),
            n: row.n,
            length: row.length,
            omega1_0: row.omega1_0,
            omega2_kind: row.omega2_kind,
            omega2: row.omega2,
            rho1: row.rho1,
            rho2: row.rho2,
            rho3: row.rho3,
            reference,
            pass: comparison.map(RowComparison::pass),
        }
    }
}

#[derive(Serialize)]
struct RowCsv<'a> {
    model: &'a str,
    n: usize,
    #[serde(rename = "L")]
    length: ChainLength,
    omega1_0: f64,
    omega2_kind: Omega2Kind,
    omega2: f64,
    rho1: f64,
    rho2: f64,
    rho3: f64,
    pass: Option<bool>,
}

/// Largest residual of one identity for one model.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityRecord {
    pub n: usize,
    pub identity: &'static str,
    pub max_residual: f64,
    pub limit: f64,
    pub pass: bool,
}

#[derive(Serialize)]
struct CheckRecord<'a> {
    name: &'a str,
    value: f64,
    limit: f64,
    bound: Bound,
    pass: bool,
}

#[derive(Serialize)]
struct QkzJson<'a> {
    n: usize,
    trotter: usize,
    inhomogeneities: &'a [f64],
    checks: Vec<CheckRecord<'a>>,
    pass: bool,
}

#[derive(Serialize)]
struct QkzCsv<'a> {
    n: usize,
    trotter: usize,
    inhomogeneities: String,
    check: &'a str,
    value: f64,
    limit: f64,
    bound: Bound,
    pass: bool,
}

pub enum Report {
    Rows(Vec<RowRecord>),
    Identities(Vec<IdentityRecord>),
    Qkz(Vec<VerifyReport>),
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.json(),
            Format::Csv => self.csv(),
            Format::Text => self.text(),
        }
    }

    fn json(&self) -> String {
        let value = match self {
            Report::Rows(rows) => serde_json::to_string_pretty(rows),
            Report::Identities(records) => serde_json::to_string_pretty(records),
            Report::Qkz(reports) => {
                let records: Vec<QkzJson> = reports
                    .iter()
                    .map(|r| QkzJson {
                        n: r.n,
                        trotter: r.trotter,
                        inhomogeneities: &r.inhomogeneities,
                        checks: r
                            .checks
                            .iter()
                            .map(|c| CheckRecord {
                                name: &c.name,
                                value: c.value,
                                limit: c.limit,
                                bound: c.bound,
                                pass: c.passed(),
                            })
                            .collect(),
                        pass: r.passed(),
                    })
                    .collect();
                serde_json::to_string_pretty(&records)
            }
        };
        value.expect("report records serialize") + "\n"
    }

    fn csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        let result = match self {
            Report::Rows(rows) => rows.iter().try_for_each(|r| {
                writer.serialize(RowCsv {
                    model: &r.model,
                    n: r.n,
                    length: r.length,
                    omega1_0: r.omega1_0,
                    omega2_kind: r.omega2_kind,
                    omega2: r.omega2,
                    rho1: r.rho1,
                    rho2: r.rho2,
                    rho3: r.rho3,
                    pass: r.pass,
                })
            }),
            Report::Identities(records) => records.iter().try_for_each(|r| writer.serialize(r)),
            Report::Qkz(reports) => reports.iter().try_for_each(|r| {
                let u = r.inhomogeneities.iter().map(f64::to_string).collect::<Vec<_>>().join(";");
                r.checks.iter().try_for_each(|c| {
                    writer.serialize(QkzCsv {
                        n: r.n,
                        trotter: r.trotter,
                        inhomogeneities: u.clone(),
                        check: &c.name,
                        value: c.value,
                        limit: c.limit,
                        bound: c.bound,
                        pass: c.passed(),
                    })
                })
            }),
        };
        result.expect("writing CSV to memory cannot fail");
        String::from_utf8(writer.into_inner().expect("flush to memory")).expect("CSV is UTF-8")
    }

    fn text(&self) -> String {
        match self {
            Report::Rows(rows) => rows_text(rows),
            Report::Identities(records) => {
                let mut out = format!("{:>3}  {:<12} {:>12} {:>8}  result\n", "n", "identity", "residual", "limit");
                for r in records {
                    let _ = writeln!(
                        out,
                        "{:>3}  {:<12} {:>12.3e} {:>8.0e}  {}",
                        r.n,
                        r.identity,
                        r.max_residual,
                        r.limit,
                        verdict(r.pass)
                    );
                }
                out
            }
            Report::Qkz(reports) => {
                let mut out = String::new();
                for r in reports {
                    let _ = writeln!(out, "O({})  N = {}  u = {:?}", r.n, r.trotter, r.inhomogeneities);
                    for c in &r.checks {
                        let relation = match c.bound {
                            Bound::Below => "<",
                            Bound::Above => ">",
                        };
                        let _ = writeln!(
                            out,
                            "    {:<14} {:>12.3e} {relation} {:<8.0e} {}",
                            c.name,
                            c.value,
                            c.limit,
                            verdict(c.passed())
                        );
                    }
                }
                out
            }
        }
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "ok"
    } else {
        "FAIL"
    }
}

/// One block per model in the layout of the published tables: a line per
/// chain length, with the printed values underneath when compared.
fn rows_text(rows: &[RowRecord]) -> String {
    let mut out = String::new();
    let mut current = None;
    for r in rows {
        if current != Some(r.n) {
            if current.is_some() {
                out.push('\n');
            }
            current = Some(r.n);
            let omega2 = match r.omega2_kind {
                Omega2Kind::Value => "omega2(0)",
                Omega2Kind::Derivative => "omega2'(0)",
            };
            let _ = writeln!(
                out,
                "{}\n{:>5}  {:>20} {:>20} {:>20} {:>20} {:>20}",
                r.model, "L", "omega1(0)", omega2, "rho1", "rho2", "rho3"
            );
        }
        let _ = writeln!(
            out,
            "{:>5}  {:>20.15} {:>20.15} {:>20.15} {:>20.15} {:>20.15} ",
            r.length.to_string(),
            r.omega1_0,
            r.omega2,
            r.rho1,
            r.rho2,
            r.rho3
        );
        if let Some(reference) = &r.reference {
            let _ = write!(out, "{:>5}  ", "ref");
            for cell in reference.values() {
                let mark = if cell.pass { ' ' } else { '*' };
                let _ = write!(out, "{:>20}{mark}", cell.printed);
            }
            out.push('\n');
        }
    }
    let compared: Vec<&CellRecord> = rows.iter().flat_map(|r| r.reference.iter().flat_map(|m| m.values())).collect();
    if !compared.is_empty() {
        let failed = compared.iter().filter(|c| !c.pass).count();
        let _ = writeln!(
            out,
            "\n{} of {} cells match the published values{}",
            compared.len() - failed,
            compared.len(),
            if failed > 0 { " (* marks the others)" } else { "" }
        );
    }
    out
}
