//! Acceptance criteria, one test each. Every test writes a single
//! `PASS`/`FAIL` line straight to stdout (bypassing capture) and then
//! asserts on the same outcome.

use std::io::Write;
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use sic_rach::analytic::{slot_wait_distributions, Analysis, ModelParams};
use sic_rach_cli::experiments::{compare, sweep};
use sic_rach_cli::spec::{Experiment, ExperimentSpec};
use sic_rach_cli::validate::{self, Check, Options, Report};

fn verdict(criterion: &str, pass: bool, detail: &str) {
    let line = format!("{} criterion {criterion}: {detail}\n", if pass { "PASS" } else { "FAIL" });
    let mut out = std::io::stdout().lock();
    out.write_all(line.as_bytes()).unwrap();
    out.flush().unwrap();
}

fn note(line: &str) {
    let mut out = std::io::stdout().lock();
    out.write_all(format!("    {line}\n").as_bytes()).unwrap();
}

/// The default validation run, shared by the criteria that read it.
fn default_validation() -> &'static (Report, Duration) {
    static RUN: OnceLock<(Report, Duration)> = OnceLock::new();
    RUN.get_or_init(|| {
        let spec = ExperimentSpec::defaults(Experiment::Validate);
        let start = Instant::now();
        let r = validate::validate(&spec, &Options::default()).unwrap();
        (r, start.elapsed())
    })
}

fn worst<'a>(checks: impl Iterator<Item = &'a Check>) -> (usize, usize, f64) {
    let (mut n, mut bad, mut dev) = (0, 0, 0.0f64);
    for c in checks {
        n += 1;
        bad += usize::from(!c.pass);
        dev = dev.max((c.observed - c.expected).abs());
    }
    (n, bad, dev)
}

#[test]
fn criterion_01_oracle_equivalence() {
    let start = Instant::now();
    let mut r = Report::default();
    validate::oracle_checks(&mut r, &Options::default());
    let elapsed = start.elapsed();
    let mut pass = elapsed < Duration::from_secs(300);
    let mut parts = Vec::new();
    for name in ["delta", "count_c2", "count_c3", "p_sic2", "p_sic3"] {
        let (n, bad, dev) = worst(r.named(name));
        pass &= n > 0 && bad == 0;
        parts.push(format!("{name} {}/{n} (max dev {dev:.4})", n - bad));
    }
    verdict("1 (oracle equivalence)", pass, &format!("{}; {:.1}s", parts.join(", "), elapsed.as_secs_f64()));
    for c in r.failures().take(12) {
        note(&format!("{} [{}]: analytic {:.4} vs oracle {:.4}", c.name, c.params, c.observed, c.expected));
    }
    assert!(pass);
}

#[test]
fn criterion_02_analytic_vs_simulation() {
    let (r, elapsed) = default_validation();
    let sim: Vec<&Check> = r.named("b40").collect();
    let reference: Vec<&Check> = r.named("b40_reference").collect();
    let sim_ok = sim.len() == 5 && sim.iter().all(|c| c.pass);
    let ref_ok = reference.len() == 5 && reference.iter().all(|c| c.pass);
    let fmt = |cs: &[&Check]| {
        cs.iter()
            .map(|c| format!("{} {:.4}/{:.4}", c.params.split(' ').nth(2).unwrap_or(""), c.observed, c.expected))
            .collect::<Vec<_>>()
            .join(", ")
    };
    verdict(
        "2 (analytic vs simulation)",
        sim_ok && ref_ok,
        &format!(
            "simulated/analytic b40 [{}]; reference [{}]; {:.0}s",
            fmt(&sim),
            fmt(&reference),
            elapsed.as_secs_f64()
        ),
    );
    assert!(sim_ok && ref_ok);
}

#[test]
fn stage_probabilities_vs_simulation() {
    let (r, _) = default_validation();
    let mut pass = true;
    let mut parts = Vec::new();
    for name in ["p_t1", "psi", "p_t2"] {
        let checks: Vec<&Check> = r.named(name).filter(|c| c.group == validate::Group::MonteCarlo).collect();
        let (n, bad, dev) = worst(checks.into_iter());
        pass &= n > 0 && bad == 0;
        parts.push(format!("{name} {}/{n} (max dev {dev:.4})", n - bad));
    }
    verdict("2x (stage probabilities vs simulation)", pass, &parts.join(", "));
    assert!(pass);
}

#[test]
fn criterion_03_optimal_entry_fraction() {
    let spec = ExperimentSpec::defaults(Experiment::SweepE);
    let out = sweep(&spec).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for &t in &spec.t {
        let best = out.argmax(|p| p.t == t).unwrap();
        pass &= (best.point.e - 0.6).abs() < 1e-9;
        parts.push(format!("T={t} argmax E={} ({:.1} successes)", best.point.e, best.mean_successes));
    }
    verdict("3 (optimal entry fraction)", pass, &parts.join(", "));
    assert!(pass);
}

#[test]
fn criterion_04_repetition_rate_shape() {
    let spec = ExperimentSpec::defaults(Experiment::SweepR);
    let out = sweep(&spec).unwrap();
    let s: Vec<f64> = spec.r.iter().map(|&r| out.at(|p| p.r == r)[0].mean_successes).collect();
    let r1_lowest = s[1..].iter().all(|&v| s[0] < v);
    let interior = s[1..s.len() - 1].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let peaked = interior > s[0] && interior > s[s.len() - 1];
    verdict(
        "4 (repetition rate shape)",
        r1_lowest && peaked,
        &format!("successes by R=1..5 {s:?}; R=1 lowest {r1_lowest}; interior max above both ends {peaked}"),
    );
    assert!(r1_lowest && peaked);
}

#[test]
fn criterion_05_mechanism_comparison() {
    let spec = ExperimentSpec::defaults(Experiment::Compare);
    assert!(spec.trials >= 20);
    let out = compare(&spec).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for sc in &out.scenarios {
        for (name, target) in [("eab", 8.0), ("frm", 5.0), ("sic", 4.0)] {
            let c = sc.get(name).mean_cycles;
            pass &= (c - target).abs() <= 1.0 && sc.get(name).runs.iter().all(|r| r.drained);
            parts.push(format!("T={} {name} {c:.2} cycles", sc.t));
        }
    }
    let frame = out.scenario(1482).unwrap();
    for (name, target, tol) in [("eab", 20.0, 2.0), ("frm", 20.0, 2.0), ("sic", 33.0, 3.0)] {
        let v = frame.get(name).mean_first_cycle_per_frame;
        pass &= (v - target).abs() <= tol;
        parts.push(format!("T=1482 {name} {v:.2} per frame"));
    }
    verdict("5 (mechanism comparison)", pass, &parts.join(", "));
    assert!(pass);
}

#[test]
fn criterion_06_normalisation() {
    let mut worst_dev = 0.0f64;
    for t in [3usize, 10, 100, 500, 1482, 2000] {
        let w = slot_wait_distributions(&ModelParams::new(t, 1, 1.0 / t as f64, 1e9).unwrap());
        let g = (t - 2) as f64 / t as f64;
        for dev in
            [w.alpha.iter().sum::<f64>() - 1.0, w.beta.iter().sum::<f64>() - 1.0, w.gamma.iter().sum::<f64>() - g]
        {
            worst_dev = worst_dev.max(dev.abs());
        }
    }
    let pass = worst_dev <= 1e-12;
    verdict("6 (normalisation)", pass, &format!("max deviation {worst_dev:e}"));
    assert!(pass);
}

fn first_rise(v: &[f64]) -> Option<usize> {
    v.windows(2).position(|w| w[1] > w[0] + 1e-15)
}

#[test]
fn criterion_07_monotonicity() {
    let mut pass = true;
    let mut parts = Vec::new();
    for t in [200usize, 500, 1000] {
        for e in [0.6, 1.0] {
            let a = Analysis::compute(&ModelParams::new(t, 54, e, 1e5).unwrap());
            let s2 = first_rise(&a.sic.p_sic2[1..]).map(|i| i + 1);
            let s3 = first_rise(&a.sic.p_sic3);
            pass &= s2.is_none() && s3.is_none();
            let show = |r: Option<usize>| r.map_or("ok".to_string(), |i| format!("rises after {i}"));
            parts.push(format!("T={t} E={e}: p_sic2 {} p_sic3 {}", show(s2), show(s3)));
        }
    }
    let peaks: Vec<f64> = [200usize, 400, 600, 800, 1000]
        .iter()
        .map(|&t| {
            let a = Analysis::compute(&ModelParams::new(t, 54, 0.6, 1e5).unwrap());
            a.sic.p_sic2.iter().cloned().fold(0.0, f64::max)
        })
        .collect();
    let peaks_ok = peaks.windows(2).all(|w| w[1] <= w[0]);
    pass &= peaks_ok;
    parts.push(format!("peak p_sic2 over T=200..1000 {peaks:.5?} non-increasing {peaks_ok}"));
    verdict("7 (monotonicity)", pass, &parts.join("; "));
    assert!(pass);
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let cov: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

#[test]
fn criterion_08_trends() {
    let successes =
        |t: usize, k: usize| Analysis::compute(&ModelParams::new(t, k, 1.0, 1e5).unwrap()).steady.successes_per_cycle();
    let ts: Vec<f64> = (1..=10).map(|i| 100.0 * i as f64).collect();
    let by_t: Vec<f64> = ts.iter().map(|&t| successes(t as usize, 54)).collect();
    let ks: Vec<f64> = (1..=7).map(|i| 10.0 * i as f64).collect();
    let by_k: Vec<f64> = ks.iter().map(|&k| successes(500, k as usize)).collect();
    let inc = |v: &[f64]| v.windows(2).all(|w| w[1] > w[0]);
    let (rt, rk) = (pearson(&ts, &by_t), pearson(&ks, &by_k));
    let pass = inc(&by_t) && inc(&by_k) && rt > 0.99 && rk > 0.99;
    verdict(
        "8 (trends)",
        pass,
        &format!("over T increasing {} r={rt:.5}; over K increasing {} r={rk:.5}", inc(&by_t), inc(&by_k)),
    );
    assert!(pass);
}

#[test]
fn criterion_09_packet_errors() {
    let spec = ExperimentSpec::defaults(Experiment::SweepPe);
    assert_eq!(spec.p_e, vec![0.0, 0.2, 0.4]);
    let out = sweep(&spec).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for &t in &spec.t {
        let m: Vec<f64> = spec.p_e.iter().map(|&q| out.at(|p| p.t == t && p.p_e == q)[0].mean_successes).collect();
        pass &= m[2] < m[1] && m[1] < m[0];
        parts.push(format!("T={t} {m:.1?}"));
    }
    verdict("9 (packet errors)", pass, &parts.join(", "));
    assert!(pass);
}

#[test]
fn criterion_10_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let spec = ExperimentSpec::defaults(Experiment::Validate);
    let (first, _) = default_validation();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    first.table().write_file(&a).unwrap();
    validate::validate(&spec, &Options::default()).unwrap().table().write_file(&b).unwrap();
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let pass = !x.is_empty() && x == y;
    verdict(
        "10 (determinism)",
        pass,
        &format!("two validate runs, {} and {} bytes, identical {}", x.len(), y.len(), x == y),
    );
    assert!(pass);
}

#[test]
fn validate_rejects_perturbed_sic_probabilities() {
    let dir = tempfile::tempdir().unwrap();
    let run = |extra: &[&str]| {
        let out = dir.path().join("v.csv");
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_sic-rach"));
        cmd.args(["validate", "--trials", "20", "--e", "0.6", "--out"]).arg(&out).args(extra);
        let status = cmd.output().unwrap().status;
        let text = std::fs::read_to_string(&out).unwrap();
        let p_sic2_fails = text.lines().filter(|l| l.contains(",p_sic2,") && l.ends_with(",false")).count();
        (status.success(), p_sic2_fails)
    };
    let (_, base) = run(&[]);
    let (ok, perturbed) = run(&["--perturb-psic2", "0.1"]);
    let pass = !ok && perturbed > base;
    verdict("validate negative control", pass, &format!("nonzero exit {}, p_sic2 breaches {base} -> {perturbed}", !ok));
    assert!(pass);
}
