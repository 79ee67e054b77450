//! Experiment descriptions and the flat `key = value` config format.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, ensure, Context, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    SweepE,
    SweepR,
    SweepT,
    SweepK,
    SweepPe,
    Compare,
    Validate,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::SweepE,
        Experiment::SweepR,
        Experiment::SweepT,
        Experiment::SweepK,
        Experiment::SweepPe,
        Experiment::Compare,
        Experiment::Validate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::SweepE => "sweep-e",
            Experiment::SweepR => "sweep-r",
            Experiment::SweepT => "sweep-t",
            Experiment::SweepK => "sweep-k",
            Experiment::SweepPe => "sweep-pe",
            Experiment::Compare => "compare",
            Experiment::Validate => "validate",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL.into_iter().find(|e| e.name() == s).with_context(|| format!("unknown experiment {s:?}"))
    }
}

/// Everything an experiment run depends on. Output is a pure function of
/// this value.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub experiment: Experiment,
    pub t: Vec<usize>,
    pub k: Vec<usize>,
    pub e: Vec<f64>,
    pub r: Vec<usize>,
    pub p_e: Vec<f64>,
    /// Devices in the pool (per cycle for sweeps, in total for `compare`).
    pub pool: u64,
    /// Trials per grid point; seeds per mechanism for `compare`.
    pub trials: u64,
    pub seed: u64,
    pub out: PathBuf,
    /// Barring factor of the EAB baseline in `compare`.
    pub acb_a: f64,
}

fn steps(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(|i| round9(lo + step * i as f64)).collect()
}

/// Keeps decimal grids like `0.1..1.0` free of `0.30000000000000004`.
fn round9(x: f64) -> f64 {
    (x * 1e9).round() / 1e9
}

impl ExperimentSpec {
    /// Default grid and trial count of each experiment.
    pub fn defaults(experiment: Experiment) -> Self {
        let mut s = ExperimentSpec {
            experiment,
            t: vec![500],
            k: vec![54],
            e: vec![0.6],
            r: vec![2],
            p_e: vec![0.0],
            pool: 100_000,
            trials: 100,
            seed: 1,
            out: PathBuf::from(format!("{experiment}.csv")),
            acb_a: 0.8,
        };
        match experiment {
            Experiment::SweepE => {
                s.t = vec![500, 1000];
                s.e = steps(0.1, 1.0, 0.1);
            }
            Experiment::SweepR => {
                s.t = vec![1000];
                s.r = (1..=5).collect();
            }
            Experiment::SweepT => {
                s.t = (1..=10).map(|i| 100 * i).collect();
                s.e = vec![1.0];
            }
            Experiment::SweepK => {
                s.k = (1..=7).map(|i| 10 * i).collect();
                s.e = vec![1.0];
            }
            Experiment::SweepPe => {
                s.t = vec![200, 600, 1000];
                s.p_e = vec![0.0, 0.2, 0.4];
            }
            Experiment::Compare => {
                // Drain trajectories at T = 1000 with R = 2, per-frame rates at
                // T = 1482 with R = 3; `r` pairs with `t` position by position.
                s.t = vec![1000, 1482];
                s.r = vec![2, 3];
                s.trials = 20;
            }
            Experiment::Validate => {
                s.e = steps(0.2, 1.0, 0.2);
                s.trials = 10_000;
            }
        }
        s
    }

    pub fn check(&self) -> Result<()> {
        ensure!(self.trials >= 1, "trials must be at least 1");
        for (name, len) in
            [("t", self.t.len()), ("k", self.k.len()), ("e", self.e.len()), ("r", self.r.len()), ("pe", self.p_e.len())]
        {
            ensure!(len > 0, "grid {name} is empty");
        }
        let t_min = *self.t.iter().min().expect("non-empty");
        ensure!(t_min >= 3, "T must be at least 3");
        ensure!(self.k.iter().all(|&k| k >= 1), "K must be positive");
        ensure!(self.e.iter().all(|&e| e > 0.0 && e <= 1.0), "E must lie in (0, 1]");
        ensure!(self.p_e.iter().all(|&p| (0.0..=1.0).contains(&p)), "p_e must lie in [0, 1]");
        ensure!(self.r.iter().all(|&r| r >= 1 && r < t_min), "every R must satisfy 1 <= R < min T");
        ensure!(self.pool >= 1, "pool must be positive");
        ensure!(self.acb_a > 0.0 && self.acb_a <= 1.0, "acb_a must lie in (0, 1]");
        if self.experiment == Experiment::Compare {
            ensure!(
                self.r.len() == 1 || self.r.len() == self.t.len(),
                "compare pairs R with T: give one R or one per T"
            );
        }
        Ok(())
    }

    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_config(&mut self, text: &str) -> Result<()> {
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) =
                line.split_once('=').with_context(|| format!("config line {}: expected key = value", no + 1))?;
            self.set(key.trim(), value.trim()).with_context(|| format!("config line {}", no + 1))?;
        }
        Ok(())
    }

    pub fn load_config(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        self.apply_config(&text)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "t" => self.t = parse_grid(value)?,
            "k" => self.k = parse_grid(value)?,
            "e" => self.e = parse_grid(value)?,
            "r" => self.r = parse_grid(value)?,
            "pe" | "p_e" => self.p_e = parse_grid(value)?,
            "pool" => self.pool = value.parse()?,
            "trials" => self.trials = value.parse()?,
            "seed" => self.seed = value.parse()?,
            "out" => self.out = PathBuf::from(value),
            "acb_a" => self.acb_a = value.parse()?,
            _ => bail!("unknown key {key:?}"),
        }
        Ok(())
    }
}

/// A grid is a comma list (`500,1000`) or an inclusive range
/// `start:stop:step`.
pub fn parse_grid<T: FromStr + GridValue>(s: &str) -> Result<Vec<T>>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    let parts: Vec<&str> = s.split(':').map(str::trim).collect();
    let out = match parts.as_slice() {
        [single] => single
            .split(',')
            .map(|v| v.trim().parse::<T>().with_context(|| format!("bad grid value {v:?}")))
            .collect::<Result<Vec<T>>>()?,
        [lo, hi, step] => {
            let (lo, hi, step) = (lo.parse::<f64>()?, hi.parse::<f64>()?, step.parse::<f64>()?);
            ensure!(step > 0.0 && hi >= lo, "range {s:?} must have step > 0 and stop >= start");
            steps(lo, hi, step).into_iter().map(T::from_f64).collect::<Result<Vec<T>>>()?
        }
        _ => bail!("grid {s:?} is neither a list nor start:stop:step"),
    };
    ensure!(!out.is_empty(), "grid {s:?} is empty");
    Ok(out)
}

pub trait GridValue: Sized {
    fn from_f64(x: f64) -> Result<Self>;
}

impl GridValue for f64 {
    fn from_f64(x: f64) -> Result<Self> {
        Ok(x)
    }
}

impl GridValue for usize {
    fn from_f64(x: f64) -> Result<Self> {
        ensure!(x >= 0.0 && x.fract() == 0.0, "{x} is not a non-negative integer");
        Ok(x as usize)
    }
}
