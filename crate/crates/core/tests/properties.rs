use proptest::prelude::*;
use rand::Rng;

use sic_rach::analytic::*;
use sic_rach::sim::*;

fn waits(t: usize) -> SlotWaits {
    slot_wait_distributions(&ModelParams::new(t, 1, 1.0 / t as f64, 1e9).unwrap())
}

proptest! {
    #[test]
    fn slot_waits_normalised(t in 3usize..2000) {
        let w = waits(t);
        prop_assert!((w.alpha.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!((w.beta.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!((w.gamma.iter().sum::<f64>() + w.gamma_residual - 1.0).abs() < 1e-12);
        prop_assert_eq!(w.gamma_residual, 2.0 / t as f64);
        prop_assert_eq!(&w.alpha, &w.beta);
    }

    #[test]
    fn slot_waits_strictly_decreasing(t in 4usize..600) {
        let w = waits(t);
        prop_assert!(w.alpha.windows(2).all(|p| p[1] < p[0]));
        prop_assert!(w.gamma.windows(2).all(|p| p[1] < p[0]));
    }

    #[test]
    fn model_probabilities_in_unit_interval(t in 4usize..260, k in 1usize..60, e in 0.05f64..=1.0) {
        let p = ModelParams::new(t, k, e, 1e6).unwrap();
        let a = Analysis::compute(&p);
        let tr = &a.transition;
        prop_assert_eq!(tr.big_gamma2 + tr.p_t1, 1.0);
        for v in [p.entry_probability(), tr.p_t1, tr.p_t2, tr.big_gamma2, tr.big_gamma3, tr.psi, a.steady.b40] {
            prop_assert!((0.0..=1.0).contains(&v), "{}", v);
        }
        prop_assert!(a.sic.p_sic2.iter().chain(&a.sic.p_sic3).all(|v| (0.0..=1.0).contains(v)));
        prop_assert!(a.sic.delta.iter().all(|v| *v >= 0.0));
        prop_assert_eq!(a.sic.p_sic2[0], 0.0);
    }

    #[test]
    fn analysis_is_deterministic(t in 4usize..200, e in 0.05f64..=1.0) {
        let p = ModelParams::new(t, 54, e, 1e6).unwrap();
        prop_assert_eq!(Analysis::compute(&p), Analysis::compute(&p));
    }
}

#[test]
fn normal_approximation_tracks_exact_delta() {
    let p = ModelParams::new(120, 1, 0.6, 1e9).unwrap();
    let mut checked = 0;
    for i in 2..=p.n_int() {
        let ex = delta_exact(i, &p).unwrap();
        if ex > 1e-9 {
            let ap = delta_approx(i, &p).unwrap();
            assert!((ap / ex - 1.0).abs() < 0.10, "i={i}: {ap} vs {ex}");
            checked += 1;
        }
    }
    assert!(checked >= 3);
}

#[test]
fn peak_sic_probability_falls_with_cycle_length() {
    let mut last = f64::INFINITY;
    for t in [200, 400, 600, 800, 1000] {
        let a = Analysis::compute(&ModelParams::new(t, 54, 0.6, 1e5).unwrap());
        let peak = a.sic.p_sic2.iter().cloned().fold(0.0, f64::max);
        assert!(peak <= last, "T={t}");
        last = peak;
    }
}

/// A random ledger: every device picks 1..=R distinct slots with a
/// preamble per replica.
fn random_devices(rng: &mut SimRng, t: usize, k: usize, n: usize, r: usize) -> Vec<Vec<(usize, usize)>> {
    (0..n)
        .map(|_| {
            let reps = rng.random_range(1..=r.min(t));
            let mut slots: Vec<usize> = Vec::new();
            while slots.len() < reps {
                let s = rng.random_range(0..t);
                if !slots.contains(&s) {
                    slots.push(s);
                }
            }
            slots.into_iter().map(|s| (s, rng.random_range(0..k))).collect()
        })
        .collect()
}

fn fill(l: &mut FrameLedger, devs: &[Vec<(usize, usize)>]) {
    for (d, reps) in devs.iter().enumerate() {
        for &(s, p) in reps {
            l.record(d as u32, s, p);
        }
    }
}

#[test]
fn peeling_fixpoint_independent_of_order() {
    let (mut rng, _) = trial_rngs(2024, 0);
    let mut nontrivial = 0;
    for _ in 0..1000 {
        let t = rng.random_range(2..16);
        let k = rng.random_range(1..4);
        let n = rng.random_range(0..30);
        let devs = random_devices(&mut rng, t, k, n, 4);
        let mut asc = FrameLedger::new(t, k, n, 4);
        let mut desc = FrameLedger::new(t, k, n, 4).with_order(PeelOrder::Descending);
        fill(&mut asc, &devs);
        fill(&mut desc, &devs);
        asc.peel(t - 1);
        desc.peel(t - 1);
        assert_eq!(asc.decoded(), desc.decoded());
        if !asc.decoded().is_empty() && asc.decoded().len() < n {
            nontrivial += 1;
        }
    }
    assert!(nontrivial > 100);
}

#[test]
fn peeling_steps_replay_with_packet_errors() {
    let (mut rng, mut coin) = trial_rngs(7, 0);
    for _ in 0..500 {
        let t = rng.random_range(2..12);
        let k = rng.random_range(1..3);
        let n = rng.random_range(1..25);
        let devs = random_devices(&mut rng, t, k, n, 3);
        let mut l = FrameLedger::new(t, k, n, 3);
        fill(&mut l, &devs);
        l.peel_with(t - 1, |_| coin.random_bool(0.7));
        l.verify_steps().unwrap();
        for st in l.steps() {
            let expected = if st.accepted { DeviceState::Decoded } else { DeviceState::Dropped };
            assert_eq!(l.device_state(st.device), expected);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cycles_reproducible_and_conserving(seed in any::<u64>(), pool in 0u64..400, r in 1usize..4, pe in 0.0f64..0.5) {
        let cfg = SicConfig::new(40, 3, 1.0, r).unwrap().with_acb_c(0.01).with_p_e(pe).unwrap();
        let a = run_sic_cycle(&cfg, pool, seed);
        prop_assert_eq!(&a, &run_sic_cycle(&cfg, pool, seed));
        prop_assert_eq!(a.entrants, a.successes() + a.unresolved_devices);
        prop_assert_eq!(a.per_slot_successes.iter().sum::<u64>(), a.successes());
        prop_assert!(a.entrants <= pool);
        prop_assert!(a.pe_drops <= a.unresolved_devices);
    }
}

#[test]
fn single_replica_matches_single_cycle_barring() {
    // With one replica there is nothing to cancel, so both mechanisms reduce
    // to slotted contention over T x K cells.
    let (t, k, n, trials) = (10usize, 5usize, 50u64, 4000u64);
    let sic = SicConfig::new(t, k, 1.0, 1).unwrap().with_acb_c(1.0);
    let eab = EabConfig::new(1.0, t, k).unwrap();
    let (mut s_sum, mut e_sum, mut sic_cancel) = (0.0, 0.0, 0);
    for seed in 0..trials {
        let a = run_sic_cycle(&sic, n, seed);
        sic_cancel += a.successes_sic;
        s_sum += a.successes() as f64;
        e_sum += run_eab_cycle(&eab, n, seed + trials).successes() as f64;
    }
    assert_eq!(sic_cancel, 0);
    let exact = n as f64 * (1.0 - 1.0 / (t * k) as f64).powi(n as i32 - 1);
    let (ms, me) = (s_sum / trials as f64, e_sum / trials as f64);
    // Per-trial standard deviation is about 2.5 successes.
    assert!((ms - exact).abs() < 0.15 && (me - exact).abs() < 0.15, "{ms} {me} {exact}");
}

#[test]
fn packet_errors_never_add_successes() {
    let mut prev = f64::INFINITY;
    for pe in [0.0, 0.1, 0.3, 0.6] {
        let cfg = SicConfig::new(100, 8, 1.0, 2).unwrap().with_acb_c(1.0).with_p_e(pe).unwrap();
        let total: u64 = (0..200).map(|s| run_sic_cycle(&cfg, 800, s).successes()).sum();
        let mean = total as f64 / 200.0;
        assert!(mean < prev, "p_e={pe}: {mean} vs {prev}");
        prev = mean;
    }
}

#[test]
fn first_transmission_frequency_matches_pt1() {
    let p = ModelParams::new(500, 54, 0.6, 1e5).unwrap();
    let cfg = SicConfig::new(500, 54, 0.6, 2).unwrap().with_acb_c(1e-5);
    let mut ws = SicWorkspace::new(&cfg);
    let (mut ent, mut clean) = (0u64, 0u64);
    for tr in 0..20 {
        let (mut a, mut b) = trial_rngs(5, tr);
        let r = sic_cycle(&cfg, 100_000, &mut a, &mut b, &mut ws);
        ent += r.entrants;
        clean += r.clean_first_tx;
    }
    assert!((clean as f64 / ent as f64 - pt1(&p)).abs() < 0.01);
}
