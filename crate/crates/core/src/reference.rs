//! Published table values embedded in the crate, and the per-cell
//! tolerance policy used to compare computed rows against them.
//!
//! Every cell keeps the text exactly as printed; the number of digits after
//! the decimal point fixes the cell's unit in the last place. A computed
//! value matches a cell when it lies within the cell's tolerance:
//!
//! * finite `L = 2, 4`: `max(1e-10, unit)`,
//! * finite `L ≥ 6`: one unit in the last printed place,
//! * `L = ∞`: ω₁(0) to one unit; ω̃₂ to `1e-6` absolute (n = 3, 4),
//!   `1e-5` relative (n = 5) or `1e-4` relative (n ≥ 6); ρ₁..ρ₃ to the
//!   ω tolerances pushed through the linear map from (Ω₁, Ω₂) to ρ,
//!   never tighter than one printed unit.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::algebra::ModelParams;
use crate::chain::{alpha_at_zero, ChainLength, TableRow};
use crate::error::{Error, Result};

const EMBEDDED: &str = include_str!("../data/reference_tables.toml");

/// Absolute tolerance for exactly diagonalized short chains.
pub const FINITE_ABS_TOL: f64 = 1e-10;
/// Absolute tolerance of the numeric ω̃₂(0) for n = 3, 4.
pub const OMEGA2_ABS_TOL_SMALL_N: f64 = 1e-6;
/// Relative tolerance of ω̃₂′(0) for n = 5.
pub const OMEGA2_REL_TOL_N5: f64 = 1e-5;
/// Relative tolerance of ω̃₂′(0) for n ≥ 6.
pub const OMEGA2_REL_TOL: f64 = 1e-4;

/// A number as printed, with its value and last-place unit.
#[derive(Debug, Clone, PartialEq)]
pub struct PrintedValue {
    text: String,
    value: f64,
    unit: f64,
}

impl PrintedValue {
    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    /// One unit in the last printed decimal place.
    pub fn unit(&self) -> f64 {
        self.unit
    }
}

impl FromStr for PrintedValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let text = s.trim().to_string();
        let value: f64 = text
            .parse()
            .map_err(|_| Error::Reference(format!("not a number: {text:?}")))?;
        let decimals = text.split_once('.').map_or(0, |(_, frac)| frac.len());
        let unit = 10f64.powi(-(decimals as i32));
        Ok(Self { text, value, unit })
    }
}

impl fmt::Display for PrintedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl Serialize for PrintedValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.text)
    }
}

impl<'de> Deserialize<'de> for PrintedValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// The five columns shared by every table row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Column {
    Omega1,
    Omega2,
    Rho1,
    Rho2,
    Rho3,
}

impl Column {
    pub const ALL: [Column; 5] = [
        Column::Omega1,
        Column::Omega2,
        Column::Rho1,
        Column::Rho2,
        Column::Rho3,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Column::Omega1 => "omega1_0",
            Column::Omega2 => "omega2",
            Column::Rho1 => "rho1",
            Column::Rho2 => "rho2",
            Column::Rho3 => "rho3",
        }
    }

    pub fn index(&self) -> usize {
        match self {
            Column::Omega1 => 0,
            Column::Omega2 => 1,
            Column::Rho1 => 2,
            Column::Rho2 => 3,
            Column::Rho3 => 4,
        }
    }
}

/// One published row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceRow {
    pub n: usize,
    #[serde(rename = "L")]
    pub length: ChainLength,
    pub omega1_0: PrintedValue,
    pub omega2: PrintedValue,
    pub rho1: PrintedValue,
    pub rho2: PrintedValue,
    pub rho3: PrintedValue,
}

impl ReferenceRow {
    /// Cells in column order: ω₁(0), ω̃₂, ρ₁, ρ₂, ρ₃.
    pub fn cells(&self) -> [&PrintedValue; 5] {
        [&self.omega1_0, &self.omega2, &self.rho1, &self.rho2, &self.rho3]
    }

    pub fn cell(&self, column: Column) -> &PrintedValue {
        self.cells()[column.index()]
    }

    pub fn values(&self) -> [f64; 5] {
        self.cells().map(PrintedValue::value)
    }

    /// Tolerances per column according to the module policy.
    pub fn tolerances(&self, params: &ModelParams) -> [f64; 5] {
        let units = self.cells().map(PrintedValue::unit);
        match self.length {
            ChainLength::Finite(l) if l <= 4 => units.map(|u| u.max(FINITE_ABS_TOL)),
            ChainLength::Finite(_) => units,
            ChainLength::Infinite => {
                let omega2_tol = omega2_tolerance(params, self.omega2.value());
                let rho = rho_tolerances(params, units[0], omega2_tol);
                [
                    units[0],
                    omega2_tol.max(units[1]),
                    rho[0].max(units[2]),
                    rho[1].max(units[3]),
                    rho[2].max(units[4]),
                ]
            }
        }
    }
}

/// Tolerance on the thermodynamic ω̃₂ observable.
pub fn omega2_tolerance(params: &ModelParams, reference: f64) -> f64 {
    match params.n() {
        3 | 4 => OMEGA2_ABS_TOL_SMALL_N,
        5 => OMEGA2_REL_TOL_N5 * reference.abs(),
        _ => OMEGA2_REL_TOL * reference.abs(),
    }
}

/// ρ tolerances implied by tolerances on ω₁(0) and ω̃₂.
///
/// `Ω₂` inherits the ω̃₂ tolerance through the branch map, `Ω₁ = 1 + ω₁(0) +
/// Ω₂/Δ` adds both, and `ρ_k = (b_k − S/(n+2))/(n(n−1))` with `b = (1, Ω₁, Ω₂)`
/// weighs each by `|∂ρ_k/∂Ω_j|`.
pub fn rho_tolerances(params: &ModelParams, omega1_tol: f64, omega2_tol: f64) -> [f64; 3] {
    let n = params.n() as f64;
    let delta = params.delta();
    let big2 = match params.n() {
        3 | 4 => omega2_tol,
        _ => delta * delta / alpha_at_zero(params).abs() * omega2_tol,
    };
    let big1 = omega1_tol + big2 / delta;
    let share = 1.0 / (n + 2.0);
    let denom = n * (n - 1.0);
    let weight = |d1: f64, d2: f64| ((d1 - share).abs() * big1 + (d2 - share).abs() * big2) / denom;
    [weight(0.0, 0.0), weight(1.0, 0.0), weight(0.0, 1.0)]
}

/// The embedded data file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReferenceTables {
    pub version: u32,
    #[serde(rename = "row")]
    pub rows: Vec<ReferenceRow>,
}

impl ReferenceTables {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Reference(e.to_string()))
    }

    /// The tables shipped with the crate, parsed once.
    pub fn embedded() -> &'static ReferenceTables {
        static TABLES: OnceLock<ReferenceTables> = OnceLock::new();
        TABLES.get_or_init(|| Self::parse(EMBEDDED).expect("embedded reference tables are valid"))
    }

    pub fn row(&self, n: usize, length: ChainLength) -> Option<&ReferenceRow> {
        self.rows.iter().find(|r| r.n == n && r.length == length)
    }

    /// All rows for one n, ordered by chain length (∞ last).
    pub fn rows_for(&self, n: usize) -> Vec<&ReferenceRow> {
        let mut rows: Vec<_> = self.rows.iter().filter(|r| r.n == n).collect();
        rows.sort_by_key(|r| r.length);
        rows
    }

    pub fn models(&self) -> Vec<usize> {
        let mut ns: Vec<usize> = self.rows.iter().map(|r| r.n).collect();
        ns.sort_unstable();
        ns.dedup();
        ns
    }
}

/// Comparison of one computed cell against its printed value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellComparison {
    pub column: Column,
    pub computed: f64,
    pub reference: PrintedValue,
    pub deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Comparison of a computed row against a published row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowComparison {
    pub n: usize,
    #[serde(rename = "L")]
    pub length: ChainLength,
    pub cells: Vec<CellComparison>,
}

impl RowComparison {
    pub fn pass(&self) -> bool {
        self.cells.iter().all(|c| c.pass)
    }

    pub fn cell(&self, column: Column) -> &CellComparison {
        &self.cells[column.index()]
    }

    pub fn failures(&self) -> impl Iterator<Item = &CellComparison> {
        self.cells.iter().filter(|c| !c.pass)
    }
}

/// Compares `row` against `reference` with the default tolerance policy,
/// or with a uniform absolute tolerance when `tolerance` is given.
pub fn compare_row(
    params: &ModelParams,
    row: &TableRow,
    reference: &ReferenceRow,
    tolerance: Option<f64>,
) -> RowComparison {
    let tolerances = match tolerance {
        Some(tol) => [tol; 5],
        None => reference.tolerances(params),
    };
    let computed = row.columns();
    let cells = Column::ALL
        .iter()
        .map(|&column| {
            let i = column.index();
            let reference = reference.cell(column).clone();
            let deviation = (computed[i] - reference.value()).abs();
            CellComparison {
                column,
                computed: computed[i],
                deviation,
                tolerance: tolerances[i],
                pass: deviation <= tolerances[i],
                reference,
            }
        })
        .collect();
    RowComparison {
        n: row.n,
        length: row.length,
        cells,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_unit_follows_decimals() {
        let v: PrintedValue = "-2.42539".parse().unwrap();
        assert_eq!(v.value(), -2.42539);
        assert!((v.unit() - 1e-5).abs() < 1e-20);
        let w: PrintedValue = "0.33333333333333".parse().unwrap();
        assert!((w.unit() - 1e-14).abs() < 1e-28);
        assert!("abc".parse::<PrintedValue>().is_err());
    }

    #[test]
    fn embedded_tables_cover_all_models() {
        let tables = ReferenceTables::embedded();
        assert_eq!(tables.version, 1);
        assert_eq!(tables.models(), vec![3, 4, 5, 6, 7, 8]);
        for n in 3..=8 {
            let lengths: Vec<_> = tables.rows_for(n).iter().map(|r| r.length).collect();
            assert_eq!(
                lengths,
                vec![
                    ChainLength::Finite(2),
                    ChainLength::Finite(4),
                    ChainLength::Finite(6),
                    ChainLength::Infinite
                ]
            );
        }
    }

    #[test]
    fn finite_tolerances_respect_floor() {
        let params = ModelParams::new(3).unwrap();
        let row = ReferenceTables::embedded().row(3, ChainLength::Finite(4)).unwrap();
        assert!(row.tolerances(&params).iter().all(|&t| t == FINITE_ABS_TOL));
        let row6 = ReferenceTables::embedded().row(7, ChainLength::Finite(6)).unwrap();
        let t = row6.tolerances(&ModelParams::new(7).unwrap());
        assert!((t[0] - 1e-5).abs() < 1e-18);
        assert!((t[2] - 1e-7).abs() < 1e-20);
    }

    #[test]
    fn infinite_rho_tolerance_is_propagated() {
        let params = ModelParams::new(7).unwrap();
        let row = ReferenceTables::embedded().row(7, ChainLength::Infinite).unwrap();
        let t = row.tolerances(&params);
        assert!((t[1] - 1e-4 * 0.585933).abs() < 1e-15);
        assert!(t[2] >= row.rho1.unit());
        assert!(t[4] > t[2]);
    }
}
