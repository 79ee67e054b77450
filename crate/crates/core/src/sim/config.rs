use crate::error::{domain, Result};

/// Parameters of the SIC-based mechanism.
#[derive(Debug, Clone, PartialEq)]
pub struct SicConfig {
    pub t: usize,
    pub k: usize,
    pub e: f64,
    /// Transmissions per entrant, each in a distinct slot.
    pub r: usize,
    /// Barring factor `C`: an awake device enters with probability `min(1, C Y)`.
    pub acb_c: f64,
    /// Successes per cycle fed to the barring update.
    pub z_estimate: f64,
    pub p_e: f64,
    pub p_sleep: f64,
}

impl SicConfig {
    pub fn new(t: usize, k: usize, e: f64, r: usize) -> Result<Self> {
        if t < 1 || k < 1 {
            return domain(format!("T = {t}, K = {k} must be positive"));
        }
        if r < 1 || (r >= t && t > 1) || r > t {
            return domain(format!("repetition rate R = {r} must satisfy 1 <= R < T = {t}"));
        }
        if !(e > 0.0) {
            return domain(format!("E = {e} must be positive"));
        }
        Ok(SicConfig { t, k, e, r, acb_c: 1.0, z_estimate: 0.0, p_e: 0.0, p_sleep: 0.0 })
    }

    pub fn with_acb_c(mut self, c: f64) -> Self {
        self.acb_c = c;
        self
    }

    pub fn with_p_e(mut self, p_e: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_e) {
            return domain(format!("p_e = {p_e} outside [0, 1]"));
        }
        self.p_e = p_e;
        Ok(self)
    }

    pub fn with_p_sleep(mut self, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return domain(format!("p_sleep = {p} outside [0, 1]"));
        }
        self.p_sleep = p;
        Ok(self)
    }

    /// Target entrants per cycle, `Y = E K T`.
    pub fn y(&self) -> f64 {
        self.e * (self.k * self.t) as f64
    }

    pub fn entry_probability(&self) -> f64 {
        (1.0 - self.p_sleep) * (self.acb_c * self.y()).clamp(0.0, 1.0)
    }
}

/// Parameters of extended access barring.
#[derive(Debug, Clone, PartialEq)]
pub struct EabConfig {
    pub acb_a: f64,
    pub t: usize,
    pub k: usize,
}

impl EabConfig {
    pub fn new(acb_a: f64, t: usize, k: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&acb_a) {
            return domain(format!("ACB parameter {acb_a} outside [0, 1]"));
        }
        if t < 1 || k < 1 {
            return domain("T and K must be positive");
        }
        Ok(EabConfig { acb_a, t, k })
    }
}

/// Parameters of the fast RACH mechanism, one frame at a time.
#[derive(Debug, Clone, PartialEq)]
pub struct FrmConfig {
    pub acb_b: f64,
    /// Target accesses per frame.
    pub w: f64,
    /// Successes per frame fed to the barring update.
    pub x: f64,
    pub k: usize,
}

impl FrmConfig {
    pub fn new(acb_b: f64, w: f64, x: f64, k: usize) -> Result<Self> {
        if !(w > 0.0) || !(x >= 0.0) || k < 1 {
            return domain(format!("FRM needs W > 0, X >= 0, K >= 1 (W={w}, X={x}, K={k})"));
        }
        Ok(FrmConfig { acb_b, w, x, k })
    }

    pub fn entry_probability(&self) -> f64 {
        (self.acb_b * self.w).clamp(0.0, 1.0)
    }
}
