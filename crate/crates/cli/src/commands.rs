use on_qkz::algebra::{verify_identities, IdentityKind, ModelParams};
use on_qkz::chain::{table_row, EdOptions, EigenSolver, TableRow};
use on_qkz::qkz::{boundary_states, verify_suite, Bound, SUITE_TOL};
use on_qkz::reference::{compare_row, ReferenceTables};
use on_qkz::thermo::{thermo_row, Omega2Source, Omega2Strategy};

use crate::args::{EdArgs, QkzArgs, Solver, Strategy, TableArgs, ThermoArgs, VerifyArgs};
use crate::report::{IdentityRecord, Report, RowRecord};

/// Why a command did not produce a report.
#[derive(Debug)]
pub enum Failure {
    /// Invalid combination of flags (exit code 2).
    Usage(String),
    /// A numerical routine failed (exit code 1).
    Numerical(on_qkz::Error),
}

impl From<on_qkz::Error> for Failure {
    fn from(e: on_qkz::Error) -> Self {
        Failure::Numerical(e)
    }
}

/// A report and whether every check or comparison in it passed.
pub struct Outcome {
    pub report: Report,
    pub pass: bool,
}

fn models(ns: &[usize]) -> Result<Vec<ModelParams>, Failure> {
    ns.iter()
        .map(|&n| ModelParams::new(n).map_err(|e| Failure::Usage(e.to_string())))
        .collect()
}

fn check_lengths(lengths: &[usize]) -> Result<(), Failure> {
    match lengths.iter().find(|&&l| l < 2 || l % 2 == 1) {
        Some(l) => Err(Failure::Usage(format!(
            "chain lengths must be even and at least 2, got {l}"
        ))),
        None => Ok(()),
    }
}

fn source(strategy: Strategy) -> Omega2Source {
    match strategy {
        Strategy::Auto => Omega2Source::Auto,
        Strategy::Contour => Omega2Source::Numeric(Omega2Strategy::ContourIntegral),
        Strategy::Series => Omega2Source::Numeric(Omega2Strategy::ShiftedSeries),
    }
}

fn ed_options(solver: Solver) -> EdOptions {
    let solver = match solver {
        Solver::Auto => EigenSolver::Auto,
        Solver::Dense => EigenSolver::Dense,
        Solver::Lanczos => EigenSolver::Lanczos,
    };
    EdOptions {
        solver,
        ..EdOptions::default()
    }
}

/// The published L ≥ 6 rows come from Lanczos runs; reproducing their last
/// printed digits needs the same solver.
fn table_options(length: usize) -> EdOptions {
    ed_options(if length >= 6 { Solver::Lanczos } else { Solver::Auto })
}

pub fn verify(args: &VerifyArgs) -> Result<Outcome, Failure> {
    let mut records = Vec::new();
    for p in models(&args.n)? {
        let report = verify_identities(&p, args.samples, args.seed)?;
        for kind in IdentityKind::ALL {
            let residual = report.max_residual(kind);
            records.push(IdentityRecord {
                n: p.n(),
                identity: kind.name(),
                max_residual: residual,
                limit: args.tol,
                pass: residual < args.tol,
            });
        }
        records.push(IdentityRecord {
            n: p.n(),
            identity: "hamiltonian",
            max_residual: report.hamiltonian_residual,
            limit: args.tol,
            pass: report.hamiltonian_residual < args.tol,
        });
    }
    let pass = records.iter().all(|r| r.pass);
    Ok(Outcome {
        report: Report::Identities(records),
        pass,
    })
}

pub fn qkz(args: &QkzArgs) -> Result<Outcome, Failure> {
    if args.trotter == 0 {
        return Err(Failure::Usage("the Trotter number must be positive".into()));
    }
    let u: Vec<f64> = (0..args.trotter)
        .map(|k| if k % 2 == 0 { -args.inhomogeneity } else { args.inhomogeneity })
        .collect();
    let mut reports = Vec::new();
    for p in models(&args.n)? {
        let ctx = boundary_states(&p, args.trotter, &u)?;
        let mut report = verify_suite(&ctx, args.seed)?;
        if let Some(tol) = args.tol {
            for check in &mut report.checks {
                if check.bound == Bound::Below && check.limit == SUITE_TOL {
                    check.limit = tol;
                }
            }
        }
        reports.push(report);
    }
    let pass = reports.iter().all(|r| r.passed());
    Ok(Outcome {
        report: Report::Qkz(reports),
        pass,
    })
}

pub fn ed(args: &EdArgs) -> Result<Outcome, Failure> {
    check_lengths(&args.lengths)?;
    let options = ed_options(args.solver);
    let mut rows = Vec::new();
    for p in models(&args.n)? {
        for &length in &args.lengths {
            rows.push(RowRecord::new(&table_row(&p, length, &options)?, None));
        }
    }
    Ok(Outcome {
        report: Report::Rows(rows),
        pass: true,
    })
}

pub fn thermo(args: &ThermoArgs) -> Result<Outcome, Failure> {
    let rows = models(&args.n)?
        .iter()
        .map(|p| Ok(RowRecord::new(&thermo_row(p, source(args.strategy))?, None)))
        .collect::<Result<Vec<_>, Failure>>()?;
    Ok(Outcome {
        report: Report::Rows(rows),
        pass: true,
    })
}

pub fn table(args: &TableArgs) -> Result<Outcome, Failure> {
    check_lengths(&args.lengths)?;
    let tables = ReferenceTables::embedded();
    let params = models(&args.n)?;
    if !args.no_reference {
        if let Some(p) = params.iter().find(|p| tables.rows_for(p.n()).is_empty()) {
            return Err(Failure::Usage(format!(
                "no reference data for n = {}; pass --no-reference to compute the rows anyway",
                p.n()
            )));
        }
    }
    let mut rows = Vec::new();
    for p in &params {
        let mut computed: Vec<TableRow> = args
            .lengths
            .iter()
            .map(|&l| table_row(p, l, &table_options(l)))
            .collect::<Result<_, _>>()?;
        computed.push(thermo_row(p, source(args.strategy))?);
        for row in &computed {
            let comparison = (!args.no_reference)
                .then(|| tables.row(p.n(), row.length))
                .flatten()
                .map(|reference| compare_row(p, row, reference, args.tol));
            rows.push(RowRecord::new(row, comparison.as_ref()));
        }
    }
    let pass = rows.iter().all(|r| r.pass != Some(false));
    Ok(Outcome {
        report: Report::Rows(rows),
        pass,
    })
}
