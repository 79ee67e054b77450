//! Experiment harness: CSV sweeps, the mechanism comparison and the
//! validation gate.

pub mod experiments;
pub mod spec;
pub mod table;
pub mod validate;

use anyhow::Result;

use spec::{Experiment, ExperimentSpec};
use table::Table;

/// Result of one experiment: its CSV table and whether it passed (always
/// true except for `validate`).
#[derive(Debug, Clone, PartialEq)]
pub struct Run {
    pub table: Table,
    pub passed: bool,
    pub summary: Vec<String>,
}

pub fn run(spec: &ExperimentSpec, opts: &validate::Options) -> Result<Run> {
    Ok(match spec.experiment {
        Experiment::Compare => {
            let out = experiments::compare(spec)?;
            let mut summary = Vec::new();
            for sc in &out.scenarios {
                for (name, m) in &sc.mechanisms {
                    summary.push(format!(
                        "T={} R={} {name}: {:.2} cycles to drain, {:.2} successes per frame in cycle 1",
                        sc.t, sc.r, m.mean_cycles, m.mean_first_cycle_per_frame
                    ));
                }
            }
            Run { table: out.table, passed: true, summary }
        }
        Experiment::Validate => {
            let report = validate::validate(spec, opts)?;
            let summary = report
                .failures()
                .map(|c| {
                    format!(
                        "FAIL {} {} [{}]: {} vs {} (tol {})",
                        c.group.name(),
                        c.name,
                        c.params,
                        c.observed,
                        c.expected,
                        c.tolerance
                    )
                })
                .chain(std::iter::once(format!(
                    "{} of {} checks passed",
                    report.checks.len() - report.failures().count(),
                    report.checks.len()
                )))
                .collect();
            Run { table: report.table(), passed: report.passed(), summary }
        }
        _ => {
            let out = experiments::sweep(spec)?;
            let summary = spec
                .t
                .iter()
                .filter_map(|&t| out.argmax(|p| p.t == t).map(|b| (t, b)))
                .map(|(t, b)| {
                    format!(
                        "T={t}: best mean {:.1} successes at K={} E={} R={} p_e={}",
                        b.mean_successes, b.point.k, b.point.e, b.point.r, b.point.p_e
                    )
                })
                .collect();
            Run { table: out.table, passed: true, summary }
        }
    })
}
