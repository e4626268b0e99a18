//! Parameter sweeps behind the two qubit figures, emitted as tables.
//!
//! Rows are computed in parallel but always assembled in grid order, so the
//! output does not depend on the number of worker threads.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::instruments::luders;
use crate::qubit::{c_closed, d1_closed, tradeoff, x_povm, z_povm};
use crate::successive::{marginals, overall_observable};
use crate::uncertainty::{bound_d1, incompatibility_mu, min_device_uncertainty};

/// Allowed disagreement between closed forms and the generic pipeline in fig2.
pub const FIG2_CROSS_CHECK_TOL: f64 = 1e-9;
/// Allowed disagreement between closed forms and the generic pipeline in fig3.
pub const FIG3_CROSS_CHECK_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepParameter {
    Theta,
    S,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::Theta => "theta",
            SweepParameter::S => "s",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub parameter: SweepParameter,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub fixed: BTreeMap<String, f64>,
}

impl SweepConfig {
    pub fn new(parameter: SweepParameter, start: f64, stop: f64, points: usize) -> Result<Self> {
        let cfg = SweepConfig {
            parameter,
            start,
            stop,
            points,
            fixed: BTreeMap::new(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// θ over [0, π/2] with 181 points.
    pub fn fig2_default() -> Self {
        SweepConfig::new(SweepParameter::Theta, 0.0, FRAC_PI_2, 181).unwrap()
    }

    /// s over [0, 1] with 101 points.
    pub fn fig3_default() -> Self {
        SweepConfig::new(SweepParameter::S, 0.0, 1.0, 101).unwrap()
    }

    pub fn with_fixed(mut self, name: &str, value: f64) -> Self {
        self.fixed.insert(name.to_string(), value);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return Err(Error::InvalidSweep(format!(
                "need at least 2 points, got {}",
                self.points
            )));
        }
        if self.start >= self.stop || self.start.is_nan() || self.stop.is_nan() {
            return Err(Error::InvalidSweep(format!(
                "start {} must be below stop {}",
                self.start, self.stop
            )));
        }
        Ok(())
    }

    /// Evenly spaced grid including both endpoints exactly.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.points - 1;
        let step = (self.stop - self.start) / n as f64;
        (0..=n)
            .map(|k| {
                if k == n {
                    self.stop
                } else {
                    self.start + k as f64 * step
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        CsvTable {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.header.len() {
            return Err(Error::InvalidSweep(format!(
                "row has {} values, header has {} columns",
                row.len(),
                self.header.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    /// Comma-separated, `\n` line endings, 16 significant digits per value.
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| format_value(v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Array of records keyed by column name.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let rec: Map<String, Value> = self
                        .header
                        .iter()
                        .zip(row)
                        .map(|(h, v)| (h.clone(), Value::from(*v)))
                        .collect();
                    Value::Object(rec)
                })
                .collect(),
        )
    }
}

pub fn format_value(v: f64) -> String {
    let mut s = String::new();
    write!(s, "{v:.15e}").unwrap();
    s
}

/// The three (s, t) settings of the θ-sweep figure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fig2Preset {
    /// s = t = 1
    A,
    /// s = 1/√2, t = 1
    B,
    /// s = t = 1/√2
    C,
}

impl Fig2Preset {
    pub fn params(self) -> (f64, f64) {
        match self {
            Fig2Preset::A => (1.0, 1.0),
            Fig2Preset::B => (FRAC_1_SQRT_2, 1.0),
            Fig2Preset::C => (FRAC_1_SQRT_2, FRAC_1_SQRT_2),
        }
    }
}

/// Columns `theta,D1,c` for Lüders Z(s) followed by X(θ, t). Every row is
/// cross-checked against the generic eigen-solver pipeline.
pub fn fig2(s: f64, t: f64, sweep: &SweepConfig) -> Result<CsvTable> {
    sweep.validate()?;
    if sweep.parameter != SweepParameter::Theta {
        return Err(Error::InvalidSweep("fig2 sweeps theta".into()));
    }
    let z = z_povm(s)?;
    let lz = luders(&z)?;
    let rows = sweep
        .grid()
        .into_par_iter()
        .map(|theta| {
            let d1 = d1_closed(s, t, theta)?.value();
            let c = c_closed(s, t, theta)?.value();
            let x = x_povm(theta, t)?;
            let d1_generic = bound_d1(&lz, &x)?.value();
            let c_generic = incompatibility_mu(&z, &x)?.value();
            for (quantity, closed, generic) in [("D1", d1, d1_generic), ("c", c, c_generic)] {
                let deviation = (closed - generic).abs();
                if deviation > FIG2_CROSS_CHECK_TOL {
                    return Err(Error::CrossCheck {
                        quantity,
                        parameter: "theta",
                        at: theta,
                        deviation,
                    });
                }
            }
            Ok(vec![theta, d1, c])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = CsvTable::new(&["theta", "D1", "c"]);
    for row in rows {
        table.push_row(row)?;
    }
    Ok(table)
}

pub fn fig2_preset(preset: Fig2Preset, sweep: &SweepConfig) -> Result<CsvTable> {
    let (s, t) = preset.params();
    fig2(s, t, sweep)
}

/// Columns `s,D_Z,D_Xprime,total`. The closed-form trade-off is checked
/// against minimal device uncertainties of the generic marginals.
pub fn fig3(sweep: &SweepConfig) -> Result<CsvTable> {
    sweep.validate()?;
    if sweep.parameter != SweepParameter::S {
        return Err(Error::InvalidSweep("fig3 sweeps s".into()));
    }
    let x = x_povm(FRAC_PI_2, 1.0)?;
    let rows = sweep
        .grid()
        .into_par_iter()
        .map(|s| {
            let t = tradeoff(s)?;
            let m = marginals(&overall_observable(&luders(&z_povm(s)?)?, &x)?)?;
            let generic = [
                ("D_Z", t.d_z.value(), min_device_uncertainty(&m.first).value()),
                (
                    "D_Xprime",
                    t.d_xprime.value(),
                    min_device_uncertainty(&m.second).value(),
                ),
            ];
            for (quantity, closed, generic) in generic {
                let deviation = (closed - generic).abs();
                if deviation > FIG3_CROSS_CHECK_TOL {
                    return Err(Error::CrossCheck {
                        quantity,
                        parameter: "s",
                        at: s,
                        deviation,
                    });
                }
            }
            Ok(vec![s, t.d_z.value(), t.d_xprime.value(), t.total.value()])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = CsvTable::new(&["s", "D_Z", "D_Xprime", "total"]);
    for row in rows {
        table.push_row(row)?;
    }
    Ok(table)
}
