//! Seeded scatter runs, family sweeps and the verification suite.

mod csv;
mod families;
mod scatter;
mod sweep;
mod verify;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use csv::{open_output, SCATTER_SCHEMA, SWEEP_SCHEMA};
pub use families::{family_curve, family_min_d2max, FAMILY_MIN_FLOOR};
pub use scatter::{
    overlay_epsilons, run_scatter, scatter_records, write_scatter, ScatterConfig, ScatterRecord,
    OVERLAY_POINTS,
};
pub use sweep::{run_sweep, sweep_rows, write_sweep, SweepConfig, SweepPreset, SweepRow};
pub use verify::{
    check_containment, check_cptp, check_dual_path, check_eigen_oracle, check_frozen,
    check_horodecki, check_rana, containment_presets, cptp_grid, representative_settings,
    run_verify, CheckResult, VerifyConfig, VerifyReport,
};

pub const DEFAULT_SAMPLES: usize = 100_000;
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Scatter,
    Sweep,
    Verify,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunConfig {
    Scatter(ScatterConfig),
    Sweep(SweepConfig),
    Verify(VerifyConfig),
}

impl RunConfig {
    pub fn mode(&self) -> Mode {
        match self {
            RunConfig::Scatter(_) => Mode::Scatter,
            RunConfig::Sweep(_) => Mode::Sweep,
            RunConfig::Verify(_) => Mode::Verify,
        }
    }
}

/// Evenly spaced grid `start:stop:points`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Grid {
    pub fn new(start: f64, stop: f64, points: usize) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite()) {
            return Err(Error::Usage(format!(
                "grid bounds {start}:{stop} must be finite"
            )));
        }
        if points == 0 {
            return Err(Error::Usage("grid needs at least one point".into()));
        }
        if points == 1 && start != stop {
            return Err(Error::Usage("a one-point grid needs start == stop".into()));
        }
        Ok(Self {
            start,
            stop,
            points,
        })
    }

    pub fn value(&self, i: usize) -> f64 {
        if self.points == 1 {
            return self.start;
        }
        if i + 1 == self.points {
            return self.stop;
        }
        self.start + (self.stop - self.start) * i as f64 / (self.points - 1) as f64
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.points).map(|i| self.value(i))
    }
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::parse(
                0,
                format!("grid `{s}` must look like start:stop:points"),
            ));
        }
        let mut pos = 0;
        let mut num = |text: &str| -> Result<f64> {
            let here = pos;
            pos += text.len() + 1;
            text.trim()
                .parse::<f64>()
                .map_err(|_| Error::parse(here, format!("`{text}` is not a number")))
        };
        let start = num(parts[0])?;
        let stop = num(parts[1])?;
        let here = parts[0].len() + parts[1].len() + 2;
        let points = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::parse(here, format!("`{}` is not a point count", parts[2])))?;
        Grid::new(start, stop, points)
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.points)
    }
}

/// Runs `op` on a dedicated pool of `workers` threads, or on the global
/// pool when `workers` is `None`.
pub(crate) fn with_workers<T: Send>(
    workers: Option<usize>,
    op: impl FnOnce() -> T + Send,
) -> Result<T> {
    match workers {
        None => Ok(op()),
        Some(0) => Err(Error::Usage("worker count must be at least 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Usage(format!("cannot start {n} workers: {e}")))?;
            Ok(pool.install(op))
        }
    }
}
