// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::io::Write;

/// Where a reference value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    /// A number quoted from the published experiment or its model.
    Published,
    /// Computed here from published parameters.
    Derived,
    /// An exact identity of the model.
    Analytic,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Origin::Published => "published",
            Origin::Derived => "derived",
            Origin::Analytic => "analytic",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
    pub origin: Origin,
}

impl Check {
    pub fn within(
        name: impl Into<String>,
        value: f64,
        expected: f64,
        tol: f64,
        origin: Origin,
    ) -> Self {
        Self {
            name: name.into(),
            value,
            lo: expected - tol,
            hi: expected + tol,
            origin,
        }
    }

    pub fn range(name: impl Into<String>, value: f64, lo: f64, hi: f64, origin: Origin) -> Self {
        Self {
            name: name.into(),
            value,
            lo,
            hi,
            origin,
        }
    }

    pub fn holds(name: impl Into<String>, ok: bool, origin: Origin) -> Self {
        Self::range(name, if ok { 1.0 } else { 0.0 }, 1.0, 1.0, origin)
    }

    pub fn passed(&self) -> bool {
        self.value >= self.lo && self.value <= self.hi
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        if self.lo == self.hi {
            write!(
                f,
                "{verdict} {} = {} (want {}, {})",
                self.name, self.value, self.lo, self.origin
            )
        } else {
            write!(
                f,
                "{verdict} {} = {:.6} (want [{:.6}, {:.6}], {})",
                self.name, self.value, self.lo, self.hi, self.origin
            )
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(if v { "true" } else { "false" }.into())
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Num(v) if v.is_nan() => f.write_str(""),
            Cell::Num(v) => write!(f, "{:.9}", v),
            Cell::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            ..Self::default()
        }
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn note(&mut self, n: impl Into<String>) {
        self.notes.push(n.into());
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.header.iter().position(|h| h == name)?;
        Some(
            self.rows
                .iter()
                .map(|r| match &r[idx] {
                    Cell::Num(v) => *v,
                    Cell::Text(_) => f64::NAN,
                })
                .collect(),
        )
    }

    pub fn find_check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// CSV with `,` delimiter and LF line endings.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_summary<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for n in &self.notes {
            writeln!(out, "note: {n}")?;
        }
        for c in &self.checks {
            writeln!(out, "{c}")?;
        }
        let passed = self.checks.iter().filter(|c| c.passed()).count();
        writeln!(out, "{passed}/{} checks passed", self.checks.len())
    }
}
