//! Barring-factor recursions: the next factor is the reciprocal of the
//! estimated number of devices still unsuccessful, capped by the target
//! number of accesses.

use super::config::{FrmConfig, SicConfig};

fn next_factor(current: f64, cap_accesses: f64, successes: f64) -> f64 {
    (1.0 / cap_accesses).min(1.0 / (1.0f64).max(1.0 / current - successes))
}

pub fn update_acb_frm(b_t: f64, cfg: &FrmConfig) -> f64 {
    next_factor(b_t, cfg.w, cfg.x)
}

pub fn update_acb_sic(c_c: f64, cfg: &SicConfig) -> f64 {
    next_factor(c_c, cfg.y(), cfg.z_estimate)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frm_examples() {
        let cfg = FrmConfig::new(0.01, 54.0, 20.0, 54).unwrap();
        assert!((update_acb_frm(0.01, &cfg) - 0.0125).abs() < 1e-15);
        assert!((update_acb_frm(0.5, &cfg) - 1.0 / 54.0).abs() < 1e-15);
    }

    #[test]
    fn frm_iteration_reaches_cap_after_expected_steps() {
        let cfg = FrmConfig::new(1e-5, 54.0, 20.0, 54).unwrap();
        let mut b = 1e-5;
        let mut steps = 0usize;
        while b < 1.0 / 54.0 {
            b = update_acb_frm(b, &cfg);
            steps += 1;
        }
        // 1/b falls by 20 per step from 1e5 until it reaches 54.
        assert_eq!(steps, ((100_000.0f64 - 54.0) / 20.0).ceil() as usize);
    }

    #[test]
    fn sic_examples() {
        let mut cfg = SicConfig::new(1482, 54, 0.6, 3).unwrap();
        let y = cfg.y();
        cfg.z_estimate = 33.0 * 1482.0;
        let next = update_acb_sic(1e-5, &cfg);
        assert!((next - (1.0 / y).min(1.0 / (1e5 - 33.0 * 1482.0))).abs() < 1e-18);
        cfg.z_estimate = 0.0;
        assert_eq!(update_acb_sic(1e-5, &cfg), 1e-5);
        assert_eq!(update_acb_sic(0.5, &cfg), 1.0 / y);
        cfg.z_estimate = 10.0;
        assert_eq!(update_acb_sic(0.2, &cfg), 1.0 / y);
    }
}
