use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Generators for one trial: the first drives entry, slot and preamble
/// draws, the second only the packet-error draws, so that changing `p_e`
/// leaves the schedule of a trial untouched.
pub fn trial_rngs(seed: u64, trial: u64) -> (SimRng, SimRng) {
    let mut main = ChaCha8Rng::seed_from_u64(seed);
    main.set_stream(2 * trial);
    let mut aux = ChaCha8Rng::seed_from_u64(seed);
    aux.set_stream(2 * trial + 1);
    (main, aux)
}
