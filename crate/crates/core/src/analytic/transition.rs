//! Slot-wait distributions and per-transmission success probabilities.

use super::params::ModelParams;
use crate::numeric::choose2;

/// Waiting-time distributions of a device that picks two distinct slots
/// uniformly from a cycle of `T` slots.
#[derive(Debug, Clone, PartialEq)]
pub struct SlotWaits {
    /// `alpha[j]`: probability of waiting `j` slots before the first transmission.
    pub alpha: Vec<f64>,
    /// `beta[j]`: probability of `j` idle slots between the two transmissions.
    pub beta: Vec<f64>,
    /// `gamma[j]`: probability of `j + 1` slots remaining after the second
    /// transmission (`j = 0..T-3`).
    pub gamma: Vec<f64>,
    /// Mass of the second transmission landing in the last slot, where no
    /// waiting state exists. Equals `2 / T`.
    pub gamma_residual: f64,
}

/// All transition quantities of the model for one parameterisation.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionTables {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub gamma: Vec<f64>,
    pub gamma_residual: f64,
    pub p_t1: f64,
    pub psi: f64,
    pub p_t2: f64,
    pub big_gamma2: f64,
    pub big_gamma3: f64,
}

pub fn slot_wait_distributions(p: &ModelParams) -> SlotWaits {
    let t = p.t as f64;
    let norm = t * (t - 1.0);
    let alpha: Vec<f64> = (0..p.t - 1).map(|j| 2.0 * (t - j as f64 - 1.0) / norm).collect();
    let gamma = (0..p.t.saturating_sub(2)).map(|j| 2.0 * (t - j as f64 - 2.0) / norm).collect();
    SlotWaits { beta: alpha.clone(), alpha, gamma, gamma_residual: 2.0 / t }
}

/// Probability that a given slot is free of the other `x - 1` same-preamble
/// contenders, each of which occupies two of the `T` slots; capped at one.
fn clear_slot(t: usize, contenders: f64) -> f64 {
    (1.0 - 2.0 / t as f64).powf(contenders - 1.0).min(1.0)
}

/// Success probability of the first transmission, `(1 - 2/T)^(N-1)`.
pub fn pt1(p: &ModelParams) -> f64 {
    clear_slot(p.t, p.n())
}

/// Probability that the first transmission collides, `1 - P_t1`.
pub fn big_gamma2(p: &ModelParams) -> f64 {
    1.0 - pt1(p)
}

/// Probability that both transmissions collide and the device enters the
/// waiting stage.
pub fn big_gamma3(p: &ModelParams) -> f64 {
    let pairs = p.pairs();
    let p_tau = 1.0 - choose2(p.t - 2) / pairs;
    let n = p.n();
    // The bracket vanishes at N = 1 and is meaningless below it.
    if n <= 1.0 {
        return 0.0;
    }
    let bracket = 1.0 - (1.0 + (n - 1.0) * p_tau) * (1.0 - p_tau).powf(n - 1.0);
    bracket / (pairs * p_tau)
}

/// Probability that an entrant fails its first transmission and every SIC
/// opportunity before its second one, i.e. reaches state `(2, 0)`.
pub fn psi(p_t1: f64, beta: &[f64], p_sic2: &[f64]) -> f64 {
    let mut survive = 1.0;
    let mut acc = beta[0];
    for i in 1..beta.len() {
        survive *= 1.0 - p_sic2[i];
        acc += survive * beta[i];
    }
    ((1.0 - p_t1) * acc).clamp(0.0, 1.0)
}

/// Success probability of the second transmission among the `psi N`
/// survivors; one when fewer than one other contender is expected.
pub fn pt2(p: &ModelParams, psi: f64) -> f64 {
    clear_slot(p.t, psi * p.n())
}
