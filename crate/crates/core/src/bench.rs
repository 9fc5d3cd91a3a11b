//! Timing harness for the ridge search on a synthetic frame.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parallel::{resolve_workers, with_workers};
use crate::synth::{render_grid, GridModel, NoiseSpec, PhaseField};
use crate::wfr::{ridge_phase, FreqGrid, WfrParams, WftEngine, WindowSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub width: usize,
    pub height: usize,
    pub window: WindowSpec,
    pub grid: FreqGrid,
    /// Worker counts to time; 0 means all available cores.
    pub workers: Vec<usize>,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            width: 256,
            height: 256,
            window: WindowSpec::default(),
            grid: FreqGrid::default(),
            workers: vec![1],
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRun {
    pub workers: usize,
    pub total_seconds: f64,
    pub seconds_per_sample: f64,
    /// Relative to the first run in the report.
    pub speedup: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub width: usize,
    pub height: usize,
    pub samples: usize,
    pub shared_bytes: usize,
    pub per_task_bytes: usize,
    pub runs: Vec<BenchRun>,
    /// Every run produced the same ridge and phase bits as the first.
    pub identical: bool,
}

impl BenchReport {
    /// Peak working set estimate for `workers` concurrent tasks.
    pub fn peak_bytes(&self, workers: usize) -> usize {
        self.shared_bytes + workers.max(1) * self.per_task_bytes
    }
}

pub fn run_bench(config: &BenchConfig) -> Result<BenchReport> {
    if config.workers.is_empty() {
        return Err(Error::invalid("bench needs at least one worker count"));
    }
    let samples = config.grid.len()?;
    let field = PhaseField::GaussianPlume {
        amplitude: 2.0,
        center_x: config.width as f64 / 2.0,
        center_y: config.height as f64 / 2.0,
        width: config.width.min(config.height) as f64 / 8.0,
    };
    let noise = NoiseSpec::new(0.01, config.seed)?;
    let image = render_grid(&GridModel::default(), &field, &noise, config.width, config.height)?.image;
    let params = WfrParams {
        window: config.window,
        grid: config.grid,
        ..WfrParams::default()
    };
    params.validate()?;
    let (shared_bytes, per_task_bytes) = WftEngine::memory_estimate(config.width, config.height, &config.window);

    let mut runs = Vec::with_capacity(config.workers.len());
    let mut reference: Option<Vec<u64>> = None;
    let mut identical = true;
    for &requested in &config.workers {
        let workers = resolve_workers(requested);
        let start = Instant::now();
        let out = with_workers(workers, || ridge_phase(&image, &params))??;
        let total = start.elapsed().as_secs_f64();
        let bits: Vec<u64> = out
            .phase
            .data()
            .iter()
            .chain(&out.ridge.magnitude)
            .map(|v| v.to_bits())
            .chain(out.ridge.xi_index.iter().chain(&out.ridge.eta_index).map(|&i| i as u64))
            .collect();
        match &reference {
            None => reference = Some(bits),
            Some(r) => identical &= *r == bits,
        }
        let base = runs.first().map_or(total, |r: &BenchRun| r.total_seconds);
        runs.push(BenchRun {
            workers,
            total_seconds: total,
            seconds_per_sample: total / samples as f64,
            speedup: base / total,
        });
    }
    Ok(BenchReport {
        width: config.width,
        height: config.height,
        samples,
        shared_bytes,
        per_task_bytes,
        runs,
        identical,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_bench_is_consistent() {
        let config = BenchConfig {
            width: 96,
            height: 80,
            grid: FreqGrid::new((0.6, 0.05, 0.8), (0.0, 0.001, 0.001)).unwrap(),
            workers: vec![1, 2],
            ..BenchConfig::default()
        };
        let report = run_bench(&config).unwrap();
        assert_eq!(report.samples, 10);
        assert_eq!(report.runs.len(), 2);
        assert!(report.identical);
        assert_eq!(report.runs[0].speedup, 1.0);
        assert!(report.peak_bytes(2) > report.peak_bytes(1));
    }

    #[test]
    fn empty_worker_list_rejected() {
        let config = BenchConfig {
            workers: vec![],
            ..BenchConfig::default()
        };
        assert!(run_bench(&config).is_err());
    }
}
