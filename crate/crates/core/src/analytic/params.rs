use crate::error::{domain, Result};

/// Cycle length above which the normal/Stirling approximations replace the
/// exact combinatorics.
pub const DEFAULT_APPROX_THRESHOLD: usize = 100;

/// Which arrangement-counting functions feed the SIC recursions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CountVariant {
    /// The closed forms as published, including the Stirling forms above the
    /// approximation threshold.
    #[default]
    Published,
    /// Counts of labelled descending-cascade arrangements, which agree with
    /// exhaustive enumeration for every `k` (and with the published forms for
    /// `k <= 3` in stage 2 and `k = 2` in stage 3).
    Enumerated,
}

/// Knobs of the single-device Markov model for repetition rate two.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    /// Slots per radio-frame cycle.
    pub t: usize,
    /// Orthogonal preambles.
    pub k: usize,
    /// Entry-control fraction.
    pub e: f64,
    /// Average number of devices contending at the start of a cycle.
    pub l: f64,
    /// Probability of remaining asleep.
    pub p_sleep: f64,
    pub approx_threshold: usize,
    pub counts: CountVariant,
}

/// `P = E K T / L`, the probability that a contending device enters the cycle.
pub fn entry_probability(e: f64, k: usize, t: usize, l: f64) -> Result<f64> {
    if !(l > 0.0) || !(e > 0.0) {
        return domain(format!("entry probability needs E > 0 and L > 0 (E={e}, L={l})"));
    }
    let p = e * k as f64 * t as f64 / l;
    if p > 1.0 + 1e-12 {
        return domain(format!("E*K*T = {} exceeds L = {l}", e * k as f64 * t as f64));
    }
    Ok(p.min(1.0))
}

impl ModelParams {
    pub fn new(t: usize, k: usize, e: f64, l: f64) -> Result<Self> {
        if t < 2 {
            return domain(format!("T = {t}: a device needs two distinct slots"));
        }
        if k == 0 {
            return domain("K must be positive");
        }
        if !(e > 0.0 && e <= 1.0) {
            return domain(format!("E = {e} outside (0, 1]"));
        }
        entry_probability(e, k, t, l)?;
        Ok(ModelParams {
            t,
            k,
            e,
            l,
            p_sleep: 0.0,
            approx_threshold: DEFAULT_APPROX_THRESHOLD,
            counts: CountVariant::Published,
        })
    }

    pub fn with_p_sleep(mut self, p_sleep: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_sleep) {
            return domain(format!("P_sleep = {p_sleep} outside [0, 1]"));
        }
        self.p_sleep = p_sleep;
        Ok(self)
    }

    pub fn with_approx_threshold(mut self, threshold: usize) -> Self {
        self.approx_threshold = threshold.max(1);
        self
    }

    pub fn with_counts(mut self, counts: CountVariant) -> Self {
        self.counts = counts;
        self
    }

    /// Expected number of entrants sharing one preamble, `N = E T`.
    pub fn n(&self) -> f64 {
        self.e * self.t as f64
    }

    /// `N` rounded for the exact combinatorial forms.
    pub fn n_int(&self) -> usize {
        self.n().round() as usize
    }

    pub fn entry_probability(&self) -> f64 {
        // Validated at construction.
        (self.e * self.k as f64 * self.t as f64 / self.l).min(1.0)
    }

    /// Mean entrants per cycle, `E K T`.
    pub fn entrants_per_cycle(&self) -> f64 {
        self.e * self.k as f64 * self.t as f64
    }

    pub fn approximate(&self) -> bool {
        self.t > self.approx_threshold
    }

    /// Number of distinct slot pairs, `C(T, 2)`.
    pub(crate) fn pairs(&self) -> f64 {
        crate::numeric::choose2(self.t)
    }
}
