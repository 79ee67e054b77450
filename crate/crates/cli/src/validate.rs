//! The validation gate: analytic model against the exhaustive oracle, against
//! Monte-Carlo runs, and against fixed reference numbers.

use anyhow::Result;

use sic_rach::analytic::{
    count_c2, count_c3, delta_exact, entry_probability, pt1, pt2, Analysis, CountVariant, ModelParams,
};
use sic_rach::oracle::{enumerate_counts, enumerate_delta, enumerate_psic, to_f64, EnumSpace, Stage};

use crate::experiments::{point_stats, sic_trials, Point};
use crate::spec::ExperimentSpec;
use crate::table::{num, Table};

/// Oracle suite bounds: every `T` in `4..=7` with `N` in `2..=4`.
pub const ORACLE_T: std::ops::RangeInclusive<usize> = 4..=7;
pub const ORACLE_N: std::ops::RangeInclusive<usize> = 2..=4;

pub const PSIC_TOL: f64 = 0.02;
pub const B40_TOL: f64 = 0.015;
pub const PT1_TOL: f64 = 0.01;
pub const STAGE2_TOL: f64 = 0.02;

/// Reference values of `b40` at `T = 500`, `K = 54`, `L = 1e5`, one per
/// `E` in `0.2, 0.4, .., 1.0`.
pub const B40_REFERENCE: [(f64, f64); 5] = [(0.2, 0.049), (0.4, 0.099), (0.6, 0.13), (0.8, 0.11), (1.0, 0.098)];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Group {
    Oracle,
    MonteCarlo,
    Golden,
}

impl Group {
    pub fn name(self) -> &'static str {
        match self {
            Group::Oracle => "oracle",
            Group::MonteCarlo => "monte_carlo",
            Group::Golden => "golden",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub group: Group,
    pub name: &'static str,
    pub params: String,
    pub observed: f64,
    pub expected: f64,
    /// Zero means exact equality.
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Options {
    /// Added to every stage-2 SIC probability before the dependent
    /// quantities are rebuilt. Negative control for the gate itself.
    pub perturb_p_sic2: Option<f64>,
    pub skip_monte_carlo: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    fn close(&mut self, group: Group, name: &'static str, params: String, observed: f64, expected: f64, tol: f64) {
        let pass = (observed - expected).abs() <= tol;
        self.checks.push(Check { group, name, params, observed, expected, tolerance: tol, pass });
    }

    fn exact(&mut self, group: Group, name: &'static str, params: String, observed: f64, expected: f64, pass: bool) {
        self.checks.push(Check { group, name, params, observed, expected, tolerance: 0.0, pass });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a Check> + 'a {
        self.checks.iter().filter(move |c| c.name == name)
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(&["group", "check", "params", "observed", "expected", "tolerance", "pass"]);
        for c in &self.checks {
            t.push(&[
                ("group", c.group.name().to_string()),
                ("check", c.name.to_string()),
                ("params", c.params.clone()),
                ("observed", num(c.observed)),
                ("expected", num(c.expected)),
                ("tolerance", num(c.tolerance)),
                ("pass", num(c.pass)),
            ]);
        }
        t
    }
}

fn analysis(p: &ModelParams, opts: &Options) -> Analysis {
    let a = Analysis::compute(p);
    match opts.perturb_p_sic2 {
        None => a,
        Some(d) => {
            let mut sic = a.sic;
            for v in sic.p_sic2.iter_mut().skip(1) {
                *v = (*v + d).clamp(0.0, 1.0);
            }
            Analysis::from_tables(p, a.transition, sic)
        }
    }
}

fn oracle_params(t: usize, n: usize) -> ModelParams {
    ModelParams::new(t, 1, n as f64 / t as f64, 1e9).expect("valid oracle parameters")
}

/// Exact quantities and SIC probabilities over the small-`T` suite.
pub fn oracle_checks(report: &mut Report, opts: &Options) {
    let g = Group::Oracle;
    for t in ORACLE_T {
        for n in ORACLE_N {
            let space = EnumSpace::new(t, n).expect("within oracle limits");
            let p = oracle_params(t, n);
            let denom = space.configurations(n - 1);
            for i in 2..=n.min(t - 2) {
                let exact = enumerate_delta(i, space);
                let got = delta_exact(i, &p).expect("index in range");
                let scaled = got * denom as f64;
                let pass = (scaled - scaled.round()).abs() < 1e-6
                    && scaled.round() as u64 * exact.denom() == exact.numer() * denom;
                report.exact(g, "delta", format!("T={t} N={n} i={i}"), got, to_f64(exact), pass);
            }
            let pe = p.clone().with_counts(CountVariant::Enumerated);
            for k in 2..=n {
                for j in 1..t - 1 {
                    let want = enumerate_counts(j, k, Stage::Second, space) as f64;
                    let got = count_c2(j, k, &pe);
                    report.exact(g, "count_c2", format!("T={t} N={n} j={j} k={k}"), got, want, got == want);
                }
                for j in 3..=t {
                    let want = enumerate_counts(j, k, Stage::Third, space) as f64;
                    let got = count_c3(j, k, &pe);
                    report.exact(g, "count_c3", format!("T={t} N={n} j={j} k={k}"), got, want, got == want);
                }
            }
            let o = enumerate_psic(space);
            let a = analysis(&p, opts);
            for j in 1..t - 1 {
                if o.reach2[j] > 0 {
                    let params = format!("T={t} N={n} j={j}");
                    report.close(g, "p_sic2", params, a.sic.p_sic2[j], to_f64(o.p_sic2[j]), PSIC_TOL);
                }
            }
            for j in 0..t - 2 {
                if o.reach3[j] > 0 {
                    let params = format!("T={t} N={n} j={j}");
                    report.close(g, "p_sic3", params, a.sic.p_sic3[j], to_f64(o.p_sic3[j]), PSIC_TOL);
                }
            }
        }
    }
}

/// Per-entrant success and its components, simulated at every `E` of the
/// spec with `T = t[0]`, `K = k[0]` and two replicas.
pub fn monte_carlo_checks(report: &mut Report, spec: &ExperimentSpec, opts: &Options) -> Result<()> {
    let g = Group::MonteCarlo;
    let (t, k) = (spec.t[0], spec.k[0]);
    for &e in &spec.e {
        let point = Point { t, k, e, r: 2, p_e: 0.0 };
        let runs = sic_trials(&point.config(spec.pool)?, spec.pool, spec.trials, spec.seed);
        let st = point_stats(point, &runs, spec.pool);
        let a = analysis(&ModelParams::new(t, k, e, spec.pool as f64)?, opts);
        let params = format!("T={t} K={k} E={e} trials={}", spec.trials);
        report.close(g, "b40", params.clone(), st.per_entrant, a.steady.b40, B40_TOL);
        report.close(g, "p_t1", params.clone(), st.clean_first, a.transition.p_t1, PT1_TOL);
        report.close(g, "psi", params.clone(), st.reach_final, a.transition.psi, STAGE2_TOL);
        report.close(g, "p_t2", params, st.final_success, a.transition.p_t2, STAGE2_TOL);
    }
    Ok(())
}

pub fn golden_checks(report: &mut Report, opts: &Options) -> Result<()> {
    let g = Group::Golden;
    report.close(
        g,
        "entry_probability",
        "E=1 K=54 T=500 L=1e5".into(),
        entry_probability(1.0, 54, 500, 1e5)?,
        0.27,
        1e-12,
    );
    report.close(
        g,
        "entry_probability",
        "E=0.6 K=54 T=1482 L=1e5".into(),
        entry_probability(0.6, 54, 1482, 1e5)?,
        0.480168,
        1e-12,
    );
    let p = ModelParams::new(500, 54, 0.6, 1e5)?;
    let v = pt1(&p);
    report.close(g, "p_t1", "N=300 T=500".into(), v, 0.3018, 5e-4);
    report.close(g, "big_gamma2", "N=300 T=500".into(), 1.0 - v, 0.6982, 5e-4);
    report.close(g, "p_t2", "psi=0.6 N=300 T=500".into(), pt2(&p, 0.6), 0.4880, 5e-4);
    report.close(g, "delta", "i=2 N=2 T=4".into(), delta_exact(2, &oracle_params(4, 2))?, 1.0 / 6.0, 1e-12);
    let p6 = oracle_params(6, 3);
    for (j, k, want) in [(4, 2, 2.0), (5, 3, 8.0), (3, 2, 2.0)] {
        let got = count_c3(j, k, &p6);
        report.exact(g, "count_c3", format!("j={j} k={k}"), got, want, got == want);
    }
    for (e, want) in B40_REFERENCE {
        let a = analysis(&ModelParams::new(500, 54, e, 1e5)?, opts);
        report.close(g, "b40_reference", format!("T=500 K=54 E={e}"), a.steady.per_contender(), want, B40_TOL);
    }
    Ok(())
}

pub fn validate(spec: &ExperimentSpec, opts: &Options) -> Result<Report> {
    spec.check()?;
    let mut report = Report::default();
    oracle_checks(&mut report, opts);
    if !opts.skip_monte_carlo {
        monte_carlo_checks(&mut report, spec, opts)?;
    }
    golden_checks(&mut report, opts)?;
    Ok(report)
}
