use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;

pub const CSV_HEADER: &str = "iter,t_cum,f,gap,step,elapsed_ms";

/// One row of a run: the state after `iter` updates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iter: usize,
    /// Cumulative step `Σ γ` so far.
    pub t_cum: f64,
    /// `f(x^(k))`.
    pub value: f64,
    /// Non-stationarity `g_P(x^(k))`.
    pub gap: f64,
    /// Step that produced this iterate (`0` for the start).
    pub step: f64,
    pub elapsed_ms: f64,
}

/// Both candidates of the two-phase method.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoPhaseDetail {
    pub x: Vec<f64>,
    pub value_x: f64,
    /// `g_P(x)`.
    pub gap_x: f64,
    pub z: Vec<f64>,
    pub value_z: f64,
    /// `g_Q(z)` on `Q = P ∩ {y ≤ ū − x}`.
    pub gap_z: f64,
    /// Number of records belonging to the first phase.
    pub phase1_records: usize,
}

/// The record of a solver run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub solver: String,
    pub records: Vec<IterationRecord>,
    /// The algorithm's output.
    pub final_point: Vec<f64>,
    pub final_value: f64,
    /// Gap at the output, when the algorithm selects by gap.
    pub final_gap: Option<f64>,
    pub best_point: Vec<f64>,
    pub best_value: f64,
    pub lipschitz: f64,
    pub diameter: f64,
    pub wall_ms: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub two_phase: Option<TwoPhaseDetail>,
    /// Every iterate, parallel to `records`, when requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Vec<f64>>>,
}

impl Trajectory {
    pub(crate) fn new(solver: &str, lipschitz: f64, diameter: f64) -> Self {
        Trajectory {
            solver: solver.to_string(),
            records: Vec::new(),
            final_point: Vec::new(),
            final_value: f64::NEG_INFINITY,
            final_gap: None,
            best_point: Vec::new(),
            best_value: f64::NEG_INFINITY,
            lipschitz,
            diameter,
            wall_ms: 0.0,
            two_phase: None,
            points: None,
        }
    }

    pub(crate) fn keep_points(mut self, keep: bool) -> Self {
        self.points = keep.then(Vec::new);
        self
    }

    /// Appends a record and updates the best iterate.
    pub(crate) fn push(&mut self, record: IterationRecord, x: &[f64]) {
        if record.value > self.best_value || self.best_point.is_empty() {
            self.best_value = record.value;
            self.best_point = x.to_vec();
        }
        self.records.push(record);
        if let Some(points) = &mut self.points {
            points.push(x.to_vec());
        }
    }

    pub fn iterations(&self) -> usize {
        self.records.last().map_or(0, |r| r.iter)
    }

    pub fn step_sum(&self) -> f64 {
        self.records.iter().map(|r| r.step).sum()
    }

    pub fn values(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.value).collect()
    }

    /// Writes the trajectory as CSV. With `timing = false` the elapsed
    /// column is written as `0`, so repeated runs give identical bytes.
    pub fn write_csv<W: Write>(&self, mut out: W, timing: bool) -> Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for r in &self.records {
            let elapsed = if timing { r.elapsed_ms } else { 0.0 };
            writeln!(
                out,
                "{},{},{},{},{},{}",
                r.iter, r.t_cum, r.value, r.gap, r.step, elapsed
            )?;
        }
        Ok(())
    }

    /// `{best_value, best_point, iterations, wall_ms}` plus the output point.
    pub fn summary(&self) -> Summary {
        Summary {
            solver: self.solver.clone(),
            best_value: self.best_value,
            best_point: self.best_point.clone(),
            final_value: self.final_value,
            final_point: self.final_point.clone(),
            final_gap: self.final_gap,
            iterations: self.iterations(),
            wall_ms: self.wall_ms,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub solver: String,
    pub best_value: f64,
    pub best_point: Vec<f64>,
    pub final_value: f64,
    pub final_point: Vec<f64>,
    pub final_gap: Option<f64>,
    pub iterations: usize,
    pub wall_ms: f64,
}
