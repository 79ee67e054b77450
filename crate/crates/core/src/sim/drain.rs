//! Fixed device population released under a barring mechanism until every
//! device has succeeded. Each barring update is fed the success count
//! actually observed in the round just played.

use super::acb::{update_acb_frm, update_acb_sic};
use super::config::{EabConfig, FrmConfig, SicConfig};
use super::eab::EabState;
use super::frm::frm_frame;
use super::rng::trial_rngs;
use super::sic::{sic_cycle, SicWorkspace};

/// Safety cap on cycles per run.
pub const MAX_CYCLES: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub enum Mechanism {
    Eab(EabConfig),
    /// FRM frames grouped `frames_per_cycle` at a time.
    Frm {
        cfg: FrmConfig,
        frames_per_cycle: usize,
    },
    Sic(SicConfig),
}

impl Mechanism {
    pub fn name(&self) -> &'static str {
        match self {
            Mechanism::Eab(_) => "eab",
            Mechanism::Frm { .. } => "frm",
            Mechanism::Sic(_) => "sic",
        }
    }

    pub fn frames_per_cycle(&self) -> usize {
        match self {
            Mechanism::Eab(c) => c.t,
            Mechanism::Frm { frames_per_cycle, .. } => *frames_per_cycle,
            Mechanism::Sic(c) => c.t,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DrainResult {
    pub cycles_used: usize,
    pub successes_per_cycle: Vec<u64>,
    pub total_devices: u64,
    pub drained: bool,
    frames_per_cycle: usize,
}

impl DrainResult {
    /// Successes per frame during the first cycle.
    pub fn first_cycle_per_frame(&self) -> f64 {
        self.successes_per_cycle.first().map_or(0.0, |&s| s as f64 / self.frames_per_cycle as f64)
    }

    /// Devices still unsuccessful after each cycle.
    pub fn remaining_per_cycle(&self) -> Vec<u64> {
        let mut rem = self.total_devices;
        self.successes_per_cycle
            .iter()
            .map(|s| {
                rem -= s;
                rem
            })
            .collect()
    }
}

pub fn run_drain(mechanism: &Mechanism, total_devices: u64, seed: u64) -> DrainResult {
    let (mut rng, mut pe_rng) = trial_rngs(seed, 0);
    let mut per_cycle = Vec::new();
    let mut rem = total_devices;
    let mut buf = Vec::new();
    match mechanism {
        Mechanism::Eab(cfg) => {
            let mut st = EabState::new(total_devices);
            while st.remaining() > 0 && per_cycle.len() < MAX_CYCLES {
                per_cycle.push(st.step(cfg, &mut rng, &mut buf).successes());
            }
            rem = st.remaining();
        }
        Mechanism::Frm { cfg, frames_per_cycle } => {
            let mut cfg = cfg.clone();
            cfg.acb_b = 1.0 / total_devices.max(1) as f64;
            let mut frame = 0usize;
            while rem > 0 && per_cycle.len() <= MAX_CYCLES {
                if frame.is_multiple_of(*frames_per_cycle) {
                    per_cycle.push(0);
                }
                let s = frm_frame(&cfg, rem, &mut rng, &mut buf).successes();
                *per_cycle.last_mut().expect("cycle opened") += s;
                rem -= s;
                cfg.x = s as f64;
                cfg.acb_b = update_acb_frm(cfg.acb_b, &cfg);
                frame += 1;
            }
        }
        Mechanism::Sic(cfg) => {
            let mut cfg = cfg.clone();
            cfg.acb_c = 1.0 / total_devices.max(1) as f64;
            let mut ws = SicWorkspace::new(&cfg);
            while rem > 0 && per_cycle.len() < MAX_CYCLES {
                let s = sic_cycle(&cfg, rem, &mut rng, &mut pe_rng, &mut ws).successes();
                per_cycle.push(s);
                rem -= s;
                cfg.z_estimate = s as f64;
                cfg.acb_c = update_acb_sic(cfg.acb_c, &cfg);
            }
        }
    }
    DrainResult {
        cycles_used: per_cycle.len(),
        successes_per_cycle: per_cycle,
        total_devices,
        drained: rem == 0,
        frames_per_cycle: mechanism.frames_per_cycle(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DrainSummary {
    pub runs: Vec<DrainResult>,
    pub mean_cycles: f64,
    /// Mean successes in cycle `c` over runs (zero once a run has drained).
    pub mean_successes_per_cycle: Vec<f64>,
    pub mean_first_cycle_per_frame: f64,
}

pub fn run_drain_experiment(mechanism: &Mechanism, total_devices: u64, seeds: &[u64]) -> DrainSummary {
    let runs: Vec<DrainResult> = seeds.iter().map(|&s| run_drain(mechanism, total_devices, s)).collect();
    summarize(runs)
}

pub fn summarize(runs: Vec<DrainResult>) -> DrainSummary {
    let n = runs.len().max(1) as f64;
    let longest = runs.iter().map(|r| r.cycles_used).max().unwrap_or(0);
    let mut traj = vec![0.0; longest];
    for r in &runs {
        for (c, &s) in r.successes_per_cycle.iter().enumerate() {
            traj[c] += s as f64 / n;
        }
    }
    DrainSummary {
        mean_cycles: runs.iter().map(|r| r.cycles_used as f64).sum::<f64>() / n,
        mean_first_cycle_per_frame: runs.iter().map(|r| r.first_cycle_per_frame()).sum::<f64>() / n,
        mean_successes_per_cycle: traj,
        runs,
    }
}
