use super::params::ModelParams;
use super::sic::{sic_tables, SicTables};
use super::transition::{self, TransitionTables};

/// Stationary distribution with one unit of entrant mass per cycle
/// (`b10 = 1`, hence `b00 = 1 / P`).
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState {
    pub b00: f64,
    pub b10: f64,
    /// First transmission failed, `j` slots before the second one.
    pub b2: Vec<f64>,
    /// Both transmissions failed, `j + 1` slots left in the cycle.
    pub b3: Vec<f64>,
    /// Success probability per entrant.
    pub b40: f64,
    entry_probability: f64,
    entrants_per_cycle: f64,
}

impl SteadyState {
    /// `b40` relative to a unit contention state (`b00 = 1`), i.e. success
    /// probability per contending device.
    pub fn per_contender(&self) -> f64 {
        self.b40 * self.entry_probability
    }

    pub fn successes_per_cycle(&self) -> f64 {
        self.b40 * self.entrants_per_cycle
    }
}

/// `out[j] = scale * sum_{k >= j} w[k] * prod_{l = j+1..=k} (1 - q[l])`.
fn survival_weighted(w: &[f64], q: &[f64], scale: f64) -> Vec<f64> {
    let mut out = vec![0.0; w.len()];
    let mut acc = 0.0;
    for j in (0..w.len()).rev() {
        let carry = q.get(j + 1).map_or(0.0, |v| 1.0 - v);
        acc = w[j] + acc * carry;
        out[j] = scale * acc;
    }
    out
}

pub fn steady_state(p: &ModelParams, tr: &TransitionTables, sic: &SicTables) -> SteadyState {
    let b2 = survival_weighted(&tr.beta, &sic.p_sic2, 1.0 - tr.p_t1);
    let b3 = survival_weighted(&tr.gamma, &sic.p_sic3, (1.0 - tr.p_t2) * b2[0]);
    let sic_mass: f64 = sic.p_sic2.iter().zip(&b2).skip(1).map(|(a, b)| a * b).sum::<f64>()
        + sic.p_sic3.iter().zip(&b3).map(|(a, b)| a * b).sum::<f64>();
    let b40 = (tr.p_t1 + tr.p_t2 * b2[0] + sic_mass).clamp(0.0, 1.0);
    let pe = p.entry_probability();
    SteadyState {
        b00: 1.0 / pe,
        b10: 1.0,
        b2,
        b3,
        b40,
        entry_probability: pe,
        entrants_per_cycle: p.entrants_per_cycle(),
    }
}

/// Every table of the model for one parameterisation.
#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub params: ModelParams,
    pub transition: TransitionTables,
    pub sic: SicTables,
    pub steady: SteadyState,
}

impl Analysis {
    pub fn compute(params: &ModelParams) -> Analysis {
        let waits = transition::slot_wait_distributions(params);
        let p_t1 = transition::pt1(params);
        let big_gamma2 = 1.0 - p_t1;
        let big_gamma3 = transition::big_gamma3(params);
        let sic = sic_tables(params, big_gamma2, big_gamma3);
        let psi = transition::psi(p_t1, &waits.beta, &sic.p_sic2);
        let transition = TransitionTables {
            alpha: waits.alpha,
            beta: waits.beta,
            gamma: waits.gamma,
            gamma_residual: waits.gamma_residual,
            p_t1,
            psi,
            p_t2: transition::pt2(params, psi),
            big_gamma2,
            big_gamma3,
        };
        Self::from_tables(params, transition, sic)
    }

    /// Rebuilds `psi`, `P_t2` and the stationary distribution from possibly
    /// altered SIC tables.
    pub fn from_tables(params: &ModelParams, mut transition: TransitionTables, sic: SicTables) -> Analysis {
        transition.psi = transition::psi(transition.p_t1, &transition.beta, &sic.p_sic2);
        transition.p_t2 = transition::pt2(params, transition.psi);
        let steady = steady_state(params, &transition, &sic);
        Analysis { params: params.clone(), transition, sic, steady }
    }
}
