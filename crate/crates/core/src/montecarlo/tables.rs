use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::method::Method;

use super::dist::{DistributionSpec, GAMMA_ALGORITHM, PARAMETERIZATION};
use super::sim::{PowerRow, Simulator};

pub const FORMAT_VERSION: u32 = 1;

const LEVELS: [f64; 2] = [0.01, 0.05];
const COMPLETE_SIZES: [usize; 4] = [25, 50, 75, 100];
const CENSORED_SIZES: [usize; 4] = [50, 75, 100, 200];
const COMPETING: [Method; 5] = [
    Method::Delta,
    Method::Ks,
    Method::Frozini,
    Method::Sherman,
    Method::Q,
];

/// The eight published reference grids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TableId {
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
    T8,
}

impl TableId {
    pub const ALL: [TableId; 8] = [
        TableId::T1,
        TableId::T2,
        TableId::T3,
        TableId::T4,
        TableId::T5,
        TableId::T6,
        TableId::T7,
        TableId::T8,
    ];

    pub fn label(self) -> &'static str {
        ["T1", "T2", "T3", "T4", "T5", "T6", "T7", "T8"][self as usize]
    }

    pub fn title(self) -> &'static str {
        match self {
            TableId::T1 => "size, complete data, U(0,1)",
            TableId::T2 => "power, complete data, U(0,1.2)",
            TableId::T3 => "power, complete data, Exp(1)",
            TableId::T4 => "power, complete data, Gamma(1,2)",
            TableId::T5 => "power, complete data, Weibull(1,2)",
            TableId::T6 => "power, complete data, Pareto(1,1)",
            TableId::T7 => "size and power, 20% censoring",
            TableId::T8 => "size and power, 40% censoring",
        }
    }

    pub fn censoring(self) -> Option<f64> {
        match self {
            TableId::T7 => Some(0.2),
            TableId::T8 => Some(0.4),
            _ => None,
        }
    }

    pub fn sizes(self) -> [usize; 4] {
        if self.censoring().is_some() {
            CENSORED_SIZES
        } else {
            COMPLETE_SIZES
        }
    }

    /// Column order of the reference values: `(method, distribution)`.
    pub fn columns(self) -> Vec<(Method, DistributionSpec)> {
        let u = |a, b| DistributionSpec::Uniform { a, b };
        let complete = |d: DistributionSpec| COMPETING.iter().map(|&m| (m, d)).collect();
        match self {
            TableId::T1 => complete(u(0.0, 1.0)),
            TableId::T2 => complete(u(0.0, 1.2)),
            TableId::T3 => complete(DistributionSpec::Exponential { rate: 1.0 }),
            TableId::T4 => complete(DistributionSpec::Gamma {
                shape: 1.0,
                scale: 2.0,
            }),
            TableId::T5 => complete(DistributionSpec::Weibull {
                shape: 1.0,
                scale: 2.0,
            }),
            TableId::T6 => complete(DistributionSpec::Pareto {
                scale: 1.0,
                shape: 1.0,
            }),
            TableId::T7 | TableId::T8 => [
                u(0.0, 1.0),
                u(0.0, 1.2),
                DistributionSpec::Exponential { rate: 1.0 },
                DistributionSpec::Weibull {
                    shape: 1.0,
                    scale: 2.0,
                },
                DistributionSpec::Pareto {
                    scale: 1.0,
                    shape: 1.0,
                },
            ]
            .into_iter()
            .map(|d| (Method::Censored, d))
            .collect(),
        }
    }

    /// Published rejection rates: one row per sample size, columns in
    /// [`columns`](Self::columns) order with the 1% and 5% levels adjacent.
    pub fn published(self) -> [[f64; 10]; 4] {
        const ONES: [f64; 10] = [1.0; 10];
        match self {
            TableId::T1 => [
                [
                    0.0108, 0.0546, 0.0113, 0.0486, 0.0108, 0.0513, 0.0109, 0.0516, 0.0085, 0.0475,
                ],
                [
                    0.0106, 0.0534, 0.0108, 0.0491, 0.0094, 0.0464, 0.0088, 0.0485, 0.0113, 0.0483,
                ],
                [
                    0.0104, 0.0492, 0.0096, 0.0509, 0.0104, 0.0474, 0.0095, 0.0498, 0.0108, 0.0511,
                ],
                [
                    0.0102, 0.0502, 0.0103, 0.0508, 0.0102, 0.0486, 0.0095, 0.0502, 0.0096, 0.0504,
                ],
            ],
            TableId::T2 => [
                [
                    0.5335, 0.6950, 0.2374, 0.3221, 0.2643, 0.4635, 0.6012, 0.7182, 0.6721, 0.7682,
                ],
                [
                    0.8146, 0.9068, 0.3282, 0.5927, 0.4956, 0.7171, 0.8932, 0.9321, 0.8934, 0.9302,
                ],
                [
                    0.9285, 0.9682, 0.5599, 0.7997, 0.6682, 0.8562, 0.9431, 0.9732, 0.9473, 0.9651,
                ],
                [
                    0.9882, 0.9921, 0.7481, 0.9212, 0.8036, 0.9387, 0.9865, 0.9921, 0.9832, 0.9972,
                ],
            ],
            TableId::T3 => [
                [
                    0.9998, 0.9999, 0.7744, 0.8925, 0.9939, 0.9981, 0.9982, 1.0, 0.9999, 1.0,
                ],
                [1.0, 1.0, 0.9851, 0.9976, 0.9998, 1.0, 1.0, 1.0, 1.0, 1.0],
                [1.0, 1.0, 0.9999, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0],
                ONES,
            ],
            TableId::T4 => [
                [
                    0.9999, 1.0, 0.7841, 0.8981, 0.9994, 0.9988, 0.9999, 1.0, 0.9999, 1.0,
                ],
                [1.0, 1.0, 0.9863, 0.9974, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0],
                [1.0, 1.0, 0.9997, 0.9999, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0],
                ONES,
            ],
            TableId::T5 => [
                [
                    0.9999, 1.0, 0.7789, 0.8982, 0.9943, 0.9983, 0.9999, 1.0, 0.9999, 1.0,
                ],
                [1.0, 1.0, 0.9846, 0.9980, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0],
                [1.0, 1.0, 0.9999, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0],
                ONES,
            ],
            TableId::T6 => [ONES; 4],
            TableId::T7 => [
                [
                    0.0088, 0.0474, 0.6993, 0.8303, 0.9999, 1.0, 1.0, 1.0, 1.0, 1.0,
                ],
                [0.0096, 0.0506, 0.8635, 0.9387, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0],
                [0.0106, 0.0489, 0.9397, 0.9761, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0],
                [0.0106, 0.0499, 0.9984, 0.9995, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0],
            ],
            TableId::T8 => [
                [
                    0.0079, 0.0469, 0.5174, 0.6892, 0.9771, 0.9856, 1.0, 1.0, 1.0, 1.0,
                ],
                [
                    0.0091, 0.0488, 0.6537, 0.8112, 0.9972, 0.9982, 1.0, 1.0, 1.0, 1.0,
                ],
                [
                    0.0109, 0.0508, 0.8025, 0.9209, 0.9996, 0.9998, 1.0, 1.0, 1.0, 1.0,
                ],
                [0.0103, 0.0502, 0.9839, 0.9963, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0],
            ],
        }
    }

    /// Published value for one cell, if the grid has it.
    pub fn published_value(
        self,
        method: Method,
        dist: &DistributionSpec,
        n: usize,
        alpha: f64,
    ) -> Option<f64> {
        let row = self.sizes().iter().position(|&s| s == n)?;
        let col = self
            .columns()
            .iter()
            .position(|(m, d)| *m == method && d == dist)?;
        let level = LEVELS.iter().position(|&l| l == alpha)?;
        Some(self.published()[row][2 * col + level])
    }
}

impl FromStr for TableId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TableId::ALL
            .iter()
            .copied()
            .find(|t| t.label().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownTable(s.to_string()))
    }
}

/// One simulated cell next to its published counterpart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub table: String,
    pub method: Method,
    pub dist: DistributionSpec,
    pub n: usize,
    pub level: f64,
    pub censoring: Option<f64>,
    pub censoring_bound: Option<f64>,
    pub censored_fraction: Option<f64>,
    pub rejections: u64,
    pub failures: u64,
    pub reps: usize,
    pub rate: f64,
    #[serde(rename = "paper_value")]
    pub published: Option<f64>,
    pub diff: Option<f64>,
    /// Set when `|diff|` exceeds `2·√(p(1-p)/10⁴) + 0.003`.
    pub flag: Option<bool>,
}

/// Allowed deviation from a published rate `p` estimated from 10⁴
/// replications with an unknown seed.
pub fn tolerance(p: f64) -> f64 {
    2.0 * (p * (1.0 - p) / 1e4).sqrt() + 0.003
}

impl Cell {
    fn from_row(table: &str, row: PowerRow, published: Option<f64>) -> Cell {
        let diff = published.map(|p| row.rate - p);
        let flag = published.zip(diff).map(|(p, d)| d.abs() > tolerance(p));
        Cell {
            table: table.to_string(),
            method: row.method,
            dist: row.dist,
            n: row.n,
            level: row.alpha,
            censoring: row.censoring,
            censoring_bound: row.censoring_bound,
            censored_fraction: row.censored_fraction,
            rejections: row.rejections,
            failures: row.failures,
            reps: row.reps,
            rate: row.rate,
            published,
            diff,
            flag,
        }
    }
}

/// A simulated grid, with the settings needed to reproduce it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerTable {
    pub format_version: u32,
    pub table: String,
    pub title: String,
    pub reps: usize,
    pub seed: u64,
    pub calibration_reps: Option<usize>,
    pub parameterization: String,
    pub gamma_algorithm: String,
    pub q_region: String,
    pub off_support_rule: String,
    pub cells: Vec<Cell>,
}

impl PowerTable {
    fn new(
        table: &str,
        title: &str,
        reps: usize,
        seed: u64,
        calibration_reps: Option<usize>,
    ) -> Self {
        PowerTable {
            format_version: FORMAT_VERSION,
            table: table.to_string(),
            title: title.to_string(),
            reps,
            seed,
            calibration_reps,
            parameterization: PARAMETERIZATION.to_string(),
            gamma_algorithm: GAMMA_ALGORITHM.to_string(),
            q_region: "two-sided equal-tail".to_string(),
            off_support_rule: "sherman and q reject any sample with values outside [0,1]"
                .to_string(),
            cells: Vec::new(),
        }
    }

    pub fn cell(
        &self,
        method: Method,
        dist: &DistributionSpec,
        n: usize,
        level: f64,
    ) -> Option<&Cell> {
        self.cells
            .iter()
            .find(|c| c.method == method && &c.dist == dist && c.n == n && c.level == level)
    }

    pub fn flagged(&self) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(|c| c.flag == Some(true))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("power table serializes")
    }

    /// Human-readable grid, one line per cell.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{}: {}  [reps={} seed={}]",
            self.table, self.title, self.reps, self.seed
        );
        let _ = writeln!(
            out,
            "{:<9} {:<16} {:>4} {:>5} {:>8} {:>8} {:>8}  flag",
            "method", "dist", "n", "level", "rate", "paper", "diff"
        );
        for c in &self.cells {
            let fmt_opt = |v: Option<f64>, plus: bool| match v {
                Some(x) if plus => format!("{x:+.4}"),
                Some(x) => format!("{x:.4}"),
                None => "-".to_string(),
            };
            let _ = writeln!(
                out,
                "{:<9} {:<16} {:>4} {:>5} {:>8.4} {:>8} {:>8}  {}",
                c.method.label(),
                c.dist.to_string(),
                c.n,
                format!("{}%", c.level * 100.0),
                c.rate,
                fmt_opt(c.published, false),
                fmt_opt(c.diff, true),
                match c.flag {
                    Some(true) => "*",
                    _ => "",
                }
            );
        }
        let flagged = self.flagged().count();
        let _ = writeln!(
            out,
            "{flagged} of {} cells outside tolerance",
            self.cells.len()
        );
        out
    }
}

/// Parses the structured output of [`PowerTable::to_json`].
pub fn parse_power_table(text: &str) -> Result<PowerTable> {
    let table: PowerTable = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line() as u64,
        message: e.to_string(),
    })?;
    if table.format_version != FORMAT_VERSION {
        return Err(Error::Parse {
            line: 1,
            message: format!(
                "unsupported format_version {} (expected {FORMAT_VERSION})",
                table.format_version
            ),
        });
    }
    for c in &table.cells {
        c.dist.validate()?;
        if c.rejections > c.reps as u64 || !(0.0..=1.0).contains(&c.rate) {
            return Err(Error::Parse {
                line: 1,
                message: format!("cell n={} level={} has an inconsistent rate", c.n, c.level),
            });
        }
    }
    Ok(table)
}

/// Simulates every cell of a reference grid. Competitor columns are
/// skipped when `methods` excludes them.
pub fn reproduce_table(
    sim: &Simulator,
    id: TableId,
    reps: usize,
    seed: u64,
    methods: Option<&[Method]>,
) -> Result<PowerTable> {
    let uses_competitors =
        id.censoring().is_none() && methods.map_or(true, |m| m.iter().any(|m| m.is_classical()));
    let mut table = PowerTable::new(
        id.label(),
        id.title(),
        reps,
        seed,
        uses_competitors.then_some(sim.calibration_reps()),
    );
    for n in id.sizes() {
        for (method, dist) in id.columns() {
            if methods.is_some_and(|ms| !ms.contains(&method)) {
                continue;
            }
            let rows =
                sim.rejection_counts(&dist, n, reps, seed, id.censoring(), method, &LEVELS)?;
            for row in rows {
                let published = id.published_value(method, &dist, n, row.alpha);
                table.cells.push(Cell::from_row(id.label(), row, published));
            }
        }
    }
    Ok(table)
}

/// A single user-configured cell, compared with the reference grids when
/// one of them contains it.
pub fn custom_table(
    sim: &Simulator,
    config: &super::SimulationConfig,
    method: Method,
) -> Result<PowerTable> {
    let row = sim.rejection_rate(config, method)?;
    let published = TableId::ALL
        .iter()
        .filter(|t| t.censoring() == config.censoring)
        .find_map(|t| t.published_value(method, &config.dist, config.n, config.alpha));
    let mut table = PowerTable::new(
        "custom",
        &format!("{method} on {}", config.dist),
        config.reps,
        config.seed,
        method.is_classical().then_some(sim.calibration_reps()),
    );
    table.cells.push(Cell::from_row("custom", row, published));
    Ok(table)
}
