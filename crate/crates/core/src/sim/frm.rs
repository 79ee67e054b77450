use rand::Rng;

use super::config::FrmConfig;
use super::eab::binomial;
use super::rng::{trial_rngs, SimRng};
use super::CycleResult;

/// One frame: each of `pool` devices enters with probability `min(1, B W)`
/// and picks a preamble; sole users of a preamble succeed.
pub fn frm_frame(cfg: &FrmConfig, pool: u64, rng: &mut SimRng, counts: &mut Vec<u32>) -> CycleResult {
    let n = binomial(pool, cfg.entry_probability(), rng);
    counts.clear();
    counts.resize(cfg.k, 0);
    for _ in 0..n {
        counts[rng.random_range(0..cfg.k)] += 1;
    }
    let s = counts.iter().filter(|&&v| v == 1).count() as u64;
    let mut res = CycleResult::empty(n, 1);
    res.successes_first_tx = s;
    res.clean_first_tx = s;
    res.per_slot_successes[0] = s;
    res.unresolved_devices = n - s;
    res
}

pub fn run_frm_frame(cfg: &FrmConfig, pool_size: u64, seed: u64) -> CycleResult {
    let (mut rng, _) = trial_rngs(seed, 0);
    frm_frame(cfg, pool_size, &mut rng, &mut Vec::new())
}
