//! Monte-Carlo sweeps and the mechanism comparison.
//!
//! Trial `i` of every grid point draws from stream `i` of the base seed, so
//! points share random numbers and output does not depend on scheduling.

use anyhow::Result;
use rayon::prelude::*;

use sic_rach::analytic::{Analysis, ModelParams};
use sic_rach::sim::{
    run_drain_experiment, sic_cycle, trial_rngs, CycleResult, DrainSummary, EabConfig, FrmConfig, Mechanism, SicConfig,
    SicWorkspace,
};

use crate::spec::{Experiment, ExperimentSpec};
use crate::table::{num, opt, Table};

/// FRM success target per frame.
pub const FRM_X: f64 = 20.0;

pub const SWEEP_COLUMNS: [&str; 14] = [
    "row",
    "t",
    "k",
    "e",
    "r",
    "p_e",
    "trial",
    "trials",
    "entrants",
    "successes",
    "sic_successes",
    "per_entrant",
    "analytic_b40",
    "analytic_successes",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub t: usize,
    pub k: usize,
    pub e: f64,
    pub r: usize,
    pub p_e: f64,
}

impl Point {
    /// The pool enters through `C = 1 / pool`, so a pool of `L` devices
    /// sends `E K T` entrants per cycle on average.
    pub fn config(&self, pool: u64) -> Result<SicConfig> {
        Ok(SicConfig::new(self.t, self.k, self.e, self.r)?.with_acb_c(1.0 / pool as f64).with_p_e(self.p_e)?)
    }

    /// Analytic counterpart; defined for two replicas without packet errors.
    pub fn analysis(&self, pool: u64) -> Option<Analysis> {
        if self.r != 2 || self.p_e != 0.0 {
            return None;
        }
        ModelParams::new(self.t, self.k, self.e, pool as f64).ok().map(|p| Analysis::compute(&p))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointStats {
    pub point: Point,
    pub trials: u64,
    pub mean_entrants: f64,
    pub mean_successes: f64,
    pub mean_sic: f64,
    /// Successes over entrants, pooled across trials.
    pub per_entrant: f64,
    /// Devices reaching the final replica undecoded, per entrant.
    pub reach_final: f64,
    /// Successes of the final replica among devices reaching it.
    pub final_success: f64,
    /// Collision-free first replicas per entrant.
    pub clean_first: f64,
    pub analytic_b40: Option<f64>,
    pub analytic_successes: Option<f64>,
}

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

/// Plays `trials` independent cycles of a SIC configuration.
pub fn sic_trials(cfg: &SicConfig, pool: u64, trials: u64, seed: u64) -> Vec<CycleResult> {
    (0..trials)
        .into_par_iter()
        .map_init(
            || SicWorkspace::new(cfg),
            |ws, trial| {
                let (mut rng, mut pe_rng) = trial_rngs(seed, trial);
                sic_cycle(cfg, pool, &mut rng, &mut pe_rng, ws)
            },
        )
        .collect()
}

pub fn point_stats(point: Point, runs: &[CycleResult], pool: u64) -> PointStats {
    let sum = |f: fn(&CycleResult) -> u64| runs.iter().map(f).sum::<u64>();
    let entrants = sum(|r| r.entrants);
    let successes = sum(|r| r.successes());
    let n = runs.len() as f64;
    let analysis = point.analysis(pool);
    PointStats {
        point,
        trials: runs.len() as u64,
        mean_entrants: entrants as f64 / n,
        mean_successes: successes as f64 / n,
        mean_sic: sum(|r| r.successes_sic) as f64 / n,
        per_entrant: ratio(successes, entrants),
        reach_final: ratio(sum(|r| r.reached_final_tx), entrants),
        final_success: ratio(sum(|r| r.final_tx_successes), sum(|r| r.reached_final_tx)),
        clean_first: ratio(sum(|r| r.clean_first_tx), entrants),
        analytic_b40: analysis.as_ref().map(|a| a.steady.b40),
        analytic_successes: analysis.as_ref().map(|a| a.steady.successes_per_cycle()),
    }
}

fn point_cells(p: &Point) -> Vec<(&'static str, String)> {
    vec![("t", num(p.t)), ("k", num(p.k)), ("e", num(p.e)), ("r", num(p.r)), ("p_e", num(p.p_e))]
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub points: Vec<PointStats>,
    pub table: Table,
}

impl SweepOutput {
    /// Point with the most mean successes among those matching `filter`;
    /// the first one wins ties.
    pub fn argmax<F: Fn(&Point) -> bool>(&self, filter: F) -> Option<&PointStats> {
        self.points.iter().filter(|s| filter(&s.point)).fold(None, |best: Option<&PointStats>, s| match best {
            Some(b) if b.mean_successes >= s.mean_successes => Some(b),
            _ => Some(s),
        })
    }

    pub fn at(&self, filter: impl Fn(&Point) -> bool) -> Vec<&PointStats> {
        self.points.iter().filter(|s| filter(&s.point)).collect()
    }
}

fn grid(spec: &ExperimentSpec) -> Vec<Point> {
    let mut out = Vec::new();
    for &t in &spec.t {
        for &k in &spec.k {
            for &r in &spec.r {
                for &p_e in &spec.p_e {
                    for &e in &spec.e {
                        out.push(Point { t, k, e, r, p_e });
                    }
                }
            }
        }
    }
    out
}

/// Runs every point of the `ExperimentSpec` grid and tabulates per-trial rows, one
/// mean row per point and, for `sweep-e` and `sweep-r`, the argmax per T.
pub fn sweep(spec: &ExperimentSpec) -> Result<SweepOutput> {
    spec.check()?;
    let mut table = Table::new(&SWEEP_COLUMNS);
    let mut points = Vec::new();
    for point in grid(spec) {
        let cfg = point.config(spec.pool)?;
        let runs = sic_trials(&cfg, spec.pool, spec.trials, spec.seed);
        for (i, r) in runs.iter().enumerate() {
            let mut cells = point_cells(&point);
            cells.extend([
                ("row", "trial".to_string()),
                ("trial", num(i)),
                ("entrants", num(r.entrants)),
                ("successes", num(r.successes())),
                ("sic_successes", num(r.successes_sic)),
                ("per_entrant", num(ratio(r.successes(), r.entrants))),
            ]);
            table.push(&cells);
        }
        let st = point_stats(point, &runs, spec.pool);
        let mut cells = point_cells(&point);
        cells.extend([
            ("row", "mean".to_string()),
            ("trials", num(st.trials)),
            ("entrants", num(st.mean_entrants)),
            ("successes", num(st.mean_successes)),
            ("sic_successes", num(st.mean_sic)),
            ("per_entrant", num(st.per_entrant)),
            ("analytic_b40", opt(st.analytic_b40)),
            ("analytic_successes", opt(st.analytic_successes)),
        ]);
        table.push(&cells);
        points.push(st);
    }
    let mut out = SweepOutput { points, table };
    let label = match spec.experiment {
        Experiment::SweepE => Some("argmax_e"),
        Experiment::SweepR => Some("argmax_r"),
        _ => None,
    };
    if let Some(label) = label {
        for &t in &spec.t {
            let best = out.argmax(|p| p.t == t).expect("non-empty grid").clone();
            let mut cells = point_cells(&best.point);
            cells.extend([
                ("row", label.to_string()),
                ("trials", num(best.trials)),
                ("successes", num(best.mean_successes)),
            ]);
            out.table.push(&cells);
        }
    }
    Ok(out)
}

pub const COMPARE_COLUMNS: [&str; 12] =
    ["row", "t", "r", "mechanism", "seed", "cycle", "successes", "remaining", "runs", "cycles", "per_frame", "drained"];

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub t: usize,
    pub r: usize,
    /// EAB, FRM and SIC in that order.
    pub mechanisms: Vec<(&'static str, DrainSummary)>,
}

impl Scenario {
    pub fn get(&self, name: &str) -> &DrainSummary {
        &self.mechanisms.iter().find(|(n, _)| *n == name).expect("known mechanism").1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareOutput {
    pub scenarios: Vec<Scenario>,
    pub table: Table,
}

impl CompareOutput {
    pub fn scenario(&self, t: usize) -> Option<&Scenario> {
        self.scenarios.iter().find(|s| s.t == t)
    }
}

pub fn mechanisms(spec: &ExperimentSpec, t: usize, r: usize) -> Result<Vec<Mechanism>> {
    let k = spec.k[0];
    Ok(vec![
        Mechanism::Eab(EabConfig::new(spec.acb_a, t, k)?),
        Mechanism::Frm { cfg: FrmConfig::new(1.0, k as f64, FRM_X, k)?, frames_per_cycle: t },
        Mechanism::Sic(SicConfig::new(t, k, spec.e[0], r)?.with_p_e(spec.p_e[0])?),
    ])
}

/// Drains a pool of `spec.pool` devices with every mechanism, once per seed
/// `seed..seed + trials`, for each `(T, R)` pair of `spec`.
pub fn compare(spec: &ExperimentSpec) -> Result<CompareOutput> {
    spec.check()?;
    let seeds: Vec<u64> = (0..spec.trials).map(|i| spec.seed.wrapping_add(i)).collect();
    let mut table = Table::new(&COMPARE_COLUMNS);
    let mut scenarios = Vec::new();
    for (i, &t) in spec.t.iter().enumerate() {
        let r = if spec.r.len() == 1 { spec.r[0] } else { spec.r[i] };
        let mut mechs = Vec::new();
        for m in mechanisms(spec, t, r)? {
            let summary = run_drain_experiment(&m, spec.pool, &seeds);
            let base = [("t", num(t)), ("r", num(r)), ("mechanism", m.name().to_string())];
            for (run, seed) in summary.runs.iter().zip(&seeds) {
                for (c, (s, rem)) in run.successes_per_cycle.iter().zip(run.remaining_per_cycle()).enumerate() {
                    let mut cells = base.to_vec();
                    cells.extend([
                        ("row", "cycle".to_string()),
                        ("seed", num(seed)),
                        ("cycle", num(c + 1)),
                        ("successes", num(s)),
                        ("remaining", num(rem)),
                    ]);
                    table.push(&cells);
                }
            }
            for (c, s) in summary.mean_successes_per_cycle.iter().enumerate() {
                let mut cells = base.to_vec();
                cells.extend([
                    ("row", "mean_cycle".to_string()),
                    ("cycle", num(c + 1)),
                    ("successes", num(s)),
                    ("runs", num(seeds.len())),
                ]);
                table.push(&cells);
            }
            let mut cells = base.to_vec();
            cells.extend([
                ("row", "summary".to_string()),
                ("runs", num(seeds.len())),
                ("cycles", num(summary.mean_cycles)),
                ("per_frame", num(summary.mean_first_cycle_per_frame)),
                ("drained", num(summary.runs.iter().all(|r| r.drained))),
            ]);
            table.push(&cells);
            mechs.push((m.name(), summary));
        }
        scenarios.push(Scenario { t, r, mechanisms: mechs });
    }
    Ok(CompareOutput { scenarios, table })
}
