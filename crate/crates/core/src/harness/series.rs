//! Tabular run output: named columns with optional cells, CSV round-trip.

use crate::error::{Error, Result};
use crate::operators::{ObjectiveValue, OperatorHandle};
use crate::schemes::Trajectory;
use crate::util::fmt_g17;

#[derive(Debug, Clone)]
pub struct Series {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Series {
    pub fn column(&self, name: &str) -> Result<usize> {
        self.headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))
    }

    /// Pairs of finite (x, y) values from two named columns.
    pub fn xy(&self, x: &str, y: &str) -> Result<Vec<(f64, f64)>> {
        let xi = self.column(x)?;
        let yi = self.column(y)?;
        Ok(self
            .rows
            .iter()
            .filter_map(|r| match (r[xi], r[yi]) {
                (Some(a), Some(b)) => Some((a, b)),
                _ => None,
            })
            .collect())
    }

    pub fn to_csv(&self) -> String {
        let integral = |h: &str| h == "index";
        let mut out = String::new();
        out.push_str(&self.headers.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .zip(&self.headers)
                .map(|(c, h)| match c {
                    Some(v) if integral(h) => format!("{}", *v as u64),
                    Some(v) => fmt_g17(*v),
                    None => String::new(),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Series> {
        let mut lines = text.lines();
        let header = lines.next().ok_or(Error::EmptyInput)?;
        let headers: Vec<String> = header.split(',').map(|s| s.to_string()).collect();
        let mut rows = Vec::new();
        for (ln, line) in lines.enumerate() {
            if line.is_empty() {
                continue;
            }
            let mut row = Vec::with_capacity(headers.len());
            for cell in line.split(',') {
                if cell.is_empty() {
                    row.push(None);
                } else {
                    let v = cell.parse::<f64>().map_err(|e| {
                        Error::ParseError(format!("csv line {}: {e}", ln + 2))
                    })?;
                    row.push(Some(v));
                }
            }
            if row.len() != headers.len() {
                return Err(Error::ParseError(format!(
                    "csv line {}: {} cells, expected {}",
                    ln + 2,
                    row.len(),
                    headers.len()
                )));
            }
            rows.push(row);
        }
        Ok(Series { headers, rows })
    }
}

/// Standard run columns: index, time, coordinates, velocity norm, distance
/// to the solution set (empty when unknown), objective value (empty when
/// absent or infinite), and the discrete partial sums sigma / tau (empty on
/// flow trajectories).
pub fn series_from_trajectory(
    op: &OperatorHandle,
    traj: &Trajectory,
    stride: usize,
) -> Series {
    let d = traj.dim();
    let mut headers = vec!["index".to_string(), "time".to_string()];
    headers.extend((0..d).map(|i| format!("x{i}")));
    headers.extend(
        ["vel_norm", "dist_S", "f_value", "sigma", "tau"]
            .iter()
            .map(|s| s.to_string()),
    );

    let discrete = !traj.continuous;
    let mut tau = 0.0;
    let mut rows = Vec::new();
    let samples = traj.samples();
    for (k, s) in samples.iter().enumerate() {
        if k > 0 {
            let lambda = s.time - samples[k - 1].time;
            tau += lambda * lambda;
        }
        if k % stride != 0 && k != samples.len() - 1 {
            continue;
        }
        let mut row: Vec<Option<f64>> = Vec::with_capacity(headers.len());
        row.push(Some(s.index as f64));
        row.push(Some(s.time));
        row.extend(s.point.coords().iter().map(|&c| Some(c)));
        row.push(s.velocity.as_ref().map(|v| v.norm()));
        row.push(op.distance_to_solutions(&s.point).ok());
        row.push(match op.objective_value(&s.point) {
            Ok(ObjectiveValue::Finite(v)) => Some(v),
            _ => None,
        });
        row.push(discrete.then_some(s.time));
        row.push(discrete.then_some(tau));
        rows.push(row);
    }
    Series { headers, rows }
}
