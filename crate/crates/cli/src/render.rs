//! Shared presentation: exact fractions with a decimal twin, and flat tables
//! rendered either as aligned text or CSV.

use risk_odds::rational::to_decimal;
use risk_odds::{Dist, Rational, SummaryStats};
use serde::Serialize;

/// Significant digits of every decimal rendering.
pub const SIGNIFICANT_DIGITS: u32 = 12;

/// An exact value as numerator/denominator strings plus a decimal approximation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Exact {
    pub num: String,
    pub den: String,
    pub approx: f64,
    #[serde(skip)]
    pub value: Rational,
}

impl Exact {
    pub fn new(value: &Rational) -> Self {
        Self {
            num: value.numer().to_string(),
            den: value.denom().to_string(),
            approx: decimal(value).parse().expect("decimal rendering parses"),
            value: value.clone(),
        }
    }
}

pub fn decimal(value: &Rational) -> String {
    to_decimal(value, SIGNIFICANT_DIGITS)
}

/// `num/den ≈ decimal`
pub fn fraction_text(value: &Rational) -> String {
    format!("{} ≈ {}", value, decimal(value))
}

pub fn real(value: f64) -> String {
    format!("{value:.12}")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stats {
    pub mean: Exact,
    pub variance: Exact,
    pub std_dev: f64,
    /// `[mean - std_dev, mean + std_dev]`
    pub band: [f64; 2],
}

impl From<&SummaryStats> for Stats {
    fn from(stats: &SummaryStats) -> Self {
        let (lo, hi) = stats.band();
        Self {
            mean: Exact::new(&stats.mean),
            variance: Exact::new(&stats.variance),
            std_dev: stats.std_dev,
            band: [lo, hi],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mass {
    pub value: u32,
    pub p: Exact,
}

pub fn masses(dist: &Dist) -> Vec<Mass> {
    dist.iter()
        .map(|(&value, p)| Mass {
            value,
            p: Exact::new(p),
        })
        .collect()
}

/// A header row and data rows of preformatted cells.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Header row, `,` separators, `\n` line endings.
    pub fn to_csv(&self) -> String {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            writer.write_record(row).expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 cells")
    }

    /// Left-aligned columns separated by two spaces.
    pub fn to_text(&self) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c:<w$}"))
                .collect();
            padded.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = line(&self.header);
        for row in &self.rows {
            out.push_str(&line(row));
        }
        out
    }
}
