//! Data series behind the five result plots, over defender counts 1..=10.

use risk_odds::rational::to_f64;
use risk_odds::{
    expected_attacker_losses, expected_survivors, multi_territory, AttackPlan, Rational, RuleSet,
};
use serde_json::{json, Value};

use crate::api::ApiError;
use crate::render::{decimal, real, Exact, Table};

pub const DEFENDER_RANGE: std::ops::RangeInclusive<u32> = 1..=10;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Count(u32),
    Exact(Rational),
    Real(f64),
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Count(n) => n.to_string(),
            Cell::Exact(r) => decimal(r),
            Cell::Real(x) => real(*x),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Count(n) => json!(n),
            Cell::Exact(r) => json!(Exact::new(r)),
            Cell::Real(x) => json!(x),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Figure {
    pub id: u8,
    pub title: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Figure {
    pub fn table(&self) -> Table {
        let mut table = Table::new(&self.columns);
        for row in &self.rows {
            table.push(row.iter().map(Cell::text).collect());
        }
        table
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let fields = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, cell)| (c.to_string(), cell.json()))
                    .collect::<serde_json::Map<_, _>>();
                Value::Object(fields)
            })
            .collect();
        json!({ "figure": self.id, "title": self.title, "columns": self.columns, "rows": rows })
    }

    /// Column values as floats, for quick checks.
    pub fn column(&self, name: &str) -> Vec<f64> {
        let idx = self
            .columns
            .iter()
            .position(|c| *c == name)
            .expect("known column");
        self.rows
            .iter()
            .map(|row| match &row[idx] {
                Cell::Count(n) => *n as f64,
                Cell::Exact(r) => to_f64(r),
                Cell::Real(x) => *x,
            })
            .collect()
    }
}

fn win(waves: &[u32], defenders: u32) -> Result<Rational, ApiError> {
    let plan = AttackPlan::new(waves.to_vec(), defenders, RuleSet::standard())?;
    Ok(multi_territory(&plan)?.win_probability)
}

fn spread_row(defenders: u32, mean: &Rational, std_dev: f64) -> Vec<Cell> {
    let centre = to_f64(mean);
    vec![
        Cell::Count(defenders),
        Cell::Exact(mean.clone()),
        Cell::Real(std_dev),
        Cell::Real(centre - std_dev),
        Cell::Real(centre + std_dev),
    ]
}

pub fn figure(id: u8) -> Result<Figure, ApiError> {
    let rules = RuleSet::standard();
    let mut rows = Vec::new();
    let (title, columns) = match id {
        1 | 2 => {
            for d in DEFENDER_RANGE {
                rows.push(vec![Cell::Count(d), Cell::Exact(win(&[3], d)?)]);
            }
            let title = if id == 1 {
                "conquest probability, three attackers vs n_d defenders"
            } else {
                "conquest probability, three attackers vs n_d defenders (plot on a log axis)"
            };
            (title, vec!["n_d", "p_win"])
        }
        3 => {
            for d in DEFENDER_RANGE {
                rows.push(vec![
                    Cell::Count(d),
                    Cell::Exact(win(&[3, 3], d)?),
                    Cell::Exact(win(&[2, 2, 2], d)?),
                ]);
            }
            (
                "conquest probability, six attackers split 3+3 vs 2+2+2",
                vec!["n_d", "p_3plus3", "p_2plus2plus2"],
            )
        }
        4 => {
            for d in DEFENDER_RANGE {
                let stats = expected_attacker_losses(3, d, &rules)?;
                rows.push(spread_row(d, &stats.mean, stats.std_dev));
            }
            (
                "expected attacker losses, three attackers, with one-sigma band",
                vec!["n_d", "mean", "std_dev", "mean_minus_sd", "mean_plus_sd"],
            )
        }
        5 => {
            for d in DEFENDER_RANGE {
                let plan = AttackPlan::new(vec![3, 3], d, rules)?;
                let stats = expected_survivors(&plan)?;
                rows.push(spread_row(d, &stats.mean, stats.std_dev));
            }
            (
                "expected surviving defenders vs six attackers from two territories, with one-sigma band",
                vec!["n_d", "mean", "std_dev", "mean_minus_sd", "mean_plus_sd"],
            )
        }
        other => {
            return Err(ApiError::bad_request(
                "figure",
                format!("figure {other} does not exist; choose 1 to 5"),
            ))
        }
    };
    Ok(Figure {
        id,
        title,
        columns,
        rows,
    })
}
