//! Extended access barring: barred devices retry the barring draw every
//! cycle, admitted devices stay in contention until they succeed.

use rand::Rng;
use rand_distr::{Binomial, Distribution};

use super::config::EabConfig;
use super::rng::{trial_rngs, SimRng};
use super::CycleResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EabState {
    pub barred: u64,
    pub contending: u64,
}

impl EabState {
    pub fn new(pool: u64) -> Self {
        EabState { barred: pool, contending: 0 }
    }

    pub fn remaining(&self) -> u64 {
        self.barred + self.contending
    }

    /// Barring draw followed by one contention round.
    pub fn step(&mut self, cfg: &EabConfig, rng: &mut SimRng, counts: &mut Vec<u32>) -> CycleResult {
        let admitted = binomial(self.barred, cfg.acb_a, rng);
        self.barred -= admitted;
        self.contending += admitted;
        let res = contention_round(cfg.t, cfg.k, self.contending, rng, counts);
        self.contending -= res.successes();
        res
    }
}

pub(crate) fn binomial(n: u64, p: f64, rng: &mut SimRng) -> u64 {
    if n == 0 || p <= 0.0 {
        0
    } else if p >= 1.0 {
        n
    } else {
        Binomial::new(n, p).expect("probability in (0, 1)").sample(rng)
    }
}

/// `n` devices each pick one of `t` slots and one of `k` preambles; sole
/// occupants of a cell succeed.
pub fn contention_round(t: usize, k: usize, n: u64, rng: &mut SimRng, counts: &mut Vec<u32>) -> CycleResult {
    counts.clear();
    counts.resize(t * k, 0);
    for _ in 0..n {
        counts[rng.random_range(0..t * k)] += 1;
    }
    let mut res = CycleResult::empty(n, t);
    for (c, &v) in counts.iter().enumerate() {
        if v == 1 {
            res.per_slot_successes[c / k] += 1;
            res.successes_first_tx += 1;
        }
    }
    res.clean_first_tx = res.successes_first_tx;
    res.unresolved_devices = n - res.successes_first_tx;
    res
}

pub fn run_eab_cycle(cfg: &EabConfig, pool_size: u64, seed: u64) -> CycleResult {
    let (mut rng, _) = trial_rngs(seed, 0);
    EabState::new(pool_size).step(cfg, &mut rng, &mut Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lone_open_device_succeeds() {
        let cfg = EabConfig::new(1.0, 10, 3).unwrap();
        let r = run_eab_cycle(&cfg, 1, 5);
        assert_eq!((r.entrants, r.successes()), (1, 1));
    }

    #[test]
    fn admitted_devices_persist() {
        let cfg = EabConfig::new(0.5, 2, 1).unwrap();
        let (mut rng, _) = trial_rngs(1, 0);
        let mut st = EabState::new(1000);
        let mut buf = Vec::new();
        let r = st.step(&cfg, &mut rng, &mut buf);
        assert_eq!(st.barred + r.entrants, 1000);
        assert_eq!(st.contending, r.entrants - r.successes());
        let before = st.contending;
        let r2 = st.step(&cfg, &mut rng, &mut buf);
        assert!(r2.entrants >= before);
    }
}
