//! Probabilities of success through successive interference cancellation.
//!
//! `delta[i]` is the probability that a collided device is rescued by a
//! cascade of `i - 1` other same-preamble devices occupying `i` slots. The
//! counting functions weight those cascades by the number of slot
//! arrangements compatible with a given waiting state, and the two SIC
//! recursions turn them into per-state success probabilities.
//!
//! All products are formed in the log domain; the approximations used for
//! long cycles (normal approximation of the binomial in `delta`, Stirling
//! form of the binomial coefficients in the published counts) are selected
//! by [`ModelParams::approximate`].

use std::f64::consts::PI;

use super::params::{CountVariant, ModelParams};
use crate::error::{domain, Result};
use crate::numeric::{choose2, ln_binom_stirling, LnFactorial, LnSum};

#[derive(Debug, Clone, PartialEq)]
pub struct SicTables {
    /// `delta[i]` for `i = 0..=T-2`; entries below 2 are zero.
    pub delta: Vec<f64>,
    /// `c2[j][k]`, materialised only in exact mode (`T` at or below the
    /// approximation threshold).
    pub c2: Option<Vec<Vec<f64>>>,
    /// `c3[j][k]` for `j = 0..=T`, exact mode only.
    pub c3: Option<Vec<Vec<f64>>>,
    /// `p_sic2[j]` for `j = 0..=T-2`, with `p_sic2[0] = 0`.
    pub p_sic2: Vec<f64>,
    /// `p_sic3[j]` for waiting states `j = 0..=T-3`.
    pub p_sic3: Vec<f64>,
}

/// `(k-2)(k-1)/2 + 1`, the number of chain shapes with at most one jump.
fn shapes(k: usize) -> f64 {
    ((k - 2) * (k - 1) / 2 + 1) as f64
}

/// Binomial coefficient in `f64`, exact while the result stays below 2^53.
fn binom_f64(n: i64, k: i64) -> f64 {
    if n < 0 || k < 0 || k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut r = 1.0;
    for i in 0..k {
        r = r * (n - i) as f64 / (i + 1) as f64;
    }
    r.round()
}

fn factorial_f64(n: usize) -> f64 {
    (1..=n).map(|v| v as f64).product()
}

pub(crate) fn ln_table(p: &ModelParams) -> LnFactorial {
    LnFactorial::new(p.t + p.n_int() + 2)
}

/// `ln delta_i` with the exact binomial form, `-inf` outside its support.
fn ln_delta_exact(i: usize, p: &ModelParams, lf: &LnFactorial) -> f64 {
    let n = p.n_int();
    if i < 2 || i > n || i + 2 > p.t {
        return f64::NEG_INFINITY;
    }
    let pairs = p.pairs();
    let keep = choose2(p.t - i) / pairs;
    lf.ln_binom(n - 1, i - 1) - (i - 1) as f64 * pairs.ln() + 2.0 * lf.ln_fact(i - 1) + (n - i) as f64 * keep.ln()
}

/// `ln delta_i` with the binomial replaced by its normal approximation.
fn ln_delta_approx(i: usize, p: &ModelParams, lf: &LnFactorial) -> f64 {
    if i < 2 || i + 2 > p.t {
        return f64::NEG_INFINITY;
    }
    let n = p.n();
    let pairs = p.pairs();
    let p_d = 1.0 - choose2(p.t - i) / pairs;
    let q_d = 1.0 - p_d;
    let var = n * p_d * q_d;
    let dev = i as f64 - n * p_d;
    (i as f64 / n).ln() - (i - 1) as f64 * pairs.ln() + 2.0 * lf.ln_fact(i - 1)
        - i as f64 * p_d.ln()
        - 0.5 * (2.0 * PI * var).ln()
        - dev * dev / (2.0 * var)
}

/// Exact `delta_i` for `2 <= i <= min(N, T-2)`.
pub fn delta_exact(i: usize, p: &ModelParams) -> Result<f64> {
    if i < 2 {
        return domain(format!("delta index {i} below 2"));
    }
    if i > p.n_int() {
        return domain(format!("delta index {i} exceeds N = {}", p.n_int()));
    }
    if i + 2 > p.t {
        return domain(format!("delta index {i} exceeds T - 2 = {}", p.t as i64 - 2));
    }
    Ok(ln_delta_exact(i, p, &ln_table(p)).exp())
}

/// Normal-approximation `delta_i`, intended for `T` above the approximation
/// threshold.
pub fn delta_approx(i: usize, p: &ModelParams) -> Result<f64> {
    if i < 2 || i + 2 > p.t {
        return domain(format!("delta index {i} outside 2..=T-2"));
    }
    Ok(ln_delta_approx(i, p, &ln_table(p)).exp())
}

/// `ln delta_i` in whichever form the parameterisation calls for.
fn ln_delta(i: usize, p: &ModelParams, lf: &LnFactorial) -> f64 {
    if p.approximate() {
        ln_delta_approx(i, p, lf)
    } else {
        ln_delta_exact(i, p, lf)
    }
}

/// `ln C(n, k)`, or its Stirling stand-in in approximate mode.
fn ln_coef(p: &ModelParams, lf: &LnFactorial, n: i64, k: i64) -> f64 {
    if p.approximate() {
        ln_binom_stirling(n, k)
    } else {
        lf.ln_binom_i(n, k)
    }
}

/// Stage-2 arrangement count `C2(j, k)`: `k` devices cascading into a
/// collided device within the `T - j` slots that precede state `(2, j)`.
pub fn count_c2(j: usize, k: usize, p: &ModelParams) -> f64 {
    if k < 2 || j < 1 || j + k > p.t {
        return 0.0;
    }
    let m = (p.t - j) as i64;
    let k_i = k as i64;
    match p.counts {
        CountVariant::Enumerated => binom_f64(m, k_i) * factorial_f64(k - 1).powi(2),
        CountVariant::Published if !p.approximate() || k == 2 => {
            (k_i..=m).map(|l| (l - 1) as f64 * binom_f64(l - 2, k_i - 2) * shapes(k)).sum()
        }
        CountVariant::Published => {
            let lf = LnFactorial::new(2);
            let mut s = LnSum::default();
            for l in k_i..=m {
                s.add_ln(((l - 1) as f64).ln() + ln_coef(p, &lf, l - 2, k_i - 2));
            }
            s.value() * shapes(k)
        }
    }
}

/// Stage-3 arrangement count `C3(j, k)` for the waiting state `T - j`.
pub fn count_c3(j: usize, k: usize, p: &ModelParams) -> f64 {
    if k < 2 || j < 3 || j > p.t || j < k + 1 {
        return 0.0;
    }
    let (a, b) = ((j - 3) as i64, (k - 2) as i64);
    match p.counts {
        CountVariant::Enumerated => 2.0 * binom_f64(a, b) * factorial_f64(k - 1).powi(2),
        CountVariant::Published if !p.approximate() || k == 2 => 2.0 * binom_f64(a, b) * shapes(k),
        CountVariant::Published => 2.0 * ln_binom_stirling(a, b).exp() * shapes(k),
    }
}

/// Log-domain `C3(j, k)` used inside the recursion.
fn ln_c3(j: usize, k: usize, p: &ModelParams, lf: &LnFactorial) -> f64 {
    if k < 2 || j < k + 1 {
        return f64::NEG_INFINITY;
    }
    let (a, b) = ((j - 3) as i64, (k - 2) as i64);
    let base = 2f64.ln();
    match p.counts {
        CountVariant::Enumerated => base + lf.ln_binom_i(a, b) + 2.0 * lf.ln_fact(k - 1),
        CountVariant::Published => base + ln_coef(p, lf, a, b) + shapes(k).ln(),
    }
}

fn ratio_or_zero(ln_num: f64, den: f64) -> f64 {
    if !(den > 0.0) || !den.is_finite() {
        return 0.0;
    }
    if ln_num == f64::NEG_INFINITY {
        return 0.0;
    }
    (ln_num - den.ln()).exp().clamp(0.0, 1.0)
}

/// `delta[i]` for `i = 0..=T-2` (zeros below 2).
pub fn delta_table(p: &ModelParams) -> Vec<f64> {
    let lf = ln_table(p);
    (0..p.t - 1).map(|i| ln_delta(i, p, &lf).exp()).collect()
}

/// Stage-2 SIC probabilities, filled from `j = T-2` down to `j = 1`.
///
/// A non-positive denominator yields zero and every value is clamped to
/// `[0, 1]`.
pub fn psic2(p: &ModelParams, big_gamma2: f64) -> Vec<f64> {
    let t = p.t;
    let lf = ln_table(p);
    let ln_d: Vec<f64> = (0..t).map(|i| ln_delta(i, p, &lf)).collect();
    let mut out = vec![0.0; t - 1];
    // Running log-sum over l of the published summand, one per k.
    let mut partial = vec![LnSum::default(); t + 1];
    let mut higher_mass = 0.0;
    for j in (1..t.saturating_sub(1)).rev() {
        let m = t - j;
        if p.counts == CountVariant::Published {
            let l = m as i64;
            for k in 2..=m {
                let term = ((l - 1) as f64).ln() + ln_coef(p, &lf, l - 2, k as i64 - 2);
                partial[k].add_ln(term);
            }
        }
        let mut num = LnSum::default();
        for (k, ln_dk) in ln_d.iter().enumerate().take(m + 1).skip(2) {
            if *ln_dk == f64::NEG_INFINITY {
                continue;
            }
            let ln_c = match p.counts {
                CountVariant::Published => partial[k].ln() + shapes(k).ln(),
                CountVariant::Enumerated => lf.ln_binom(m, k) + 2.0 * lf.ln_fact(k - 1),
            };
            num.add_ln(ln_c + ln_dk);
        }
        let den = (choose2(m) - higher_mass) * big_gamma2;
        out[j] = ratio_or_zero(num.ln(), den);
        higher_mass += choose2(m) * out[j];
    }
    out
}

/// Stage-3 SIC probabilities indexed by waiting state `0..=T-3`.
///
/// Row `j = 3..=T` of the recursion fills state `T - j`; the subtraction in
/// the denominator runs over the states already filled (higher states).
pub fn psic3(p: &ModelParams, big_gamma3: f64) -> Vec<f64> {
    let t = p.t;
    if t < 3 {
        return Vec::new();
    }
    let lf = ln_table(p);
    let ln_d: Vec<f64> = (0..t).map(|i| ln_delta(i, p, &lf)).collect();
    let mut out = vec![0.0; t - 2];
    let mut higher_mass = 0.0;
    for j in 3..=t {
        let mut num = LnSum::default();
        for (k, ln_dk) in ln_d.iter().enumerate().take(j).skip(2) {
            if *ln_dk == f64::NEG_INFINITY {
                continue;
            }
            num.add_ln(ln_c3(j, k, p, &lf) + ln_dk);
        }
        let half_c2 = ln_c3(j, 2, p, &lf).exp() / 2.0;
        let den = (half_c2 - higher_mass) * big_gamma3;
        let state = t - j;
        out[state] = ratio_or_zero(num.ln(), den);
        higher_mass += half_c2 * out[state];
    }
    out
}

pub fn sic_tables(p: &ModelParams, big_gamma2: f64, big_gamma3: f64) -> SicTables {
    let (c2, c3) = if p.approximate() {
        (None, None)
    } else {
        let t = p.t;
        let c2 = (0..t).map(|j| (0..=t).map(|k| count_c2(j, k, p)).collect()).collect();
        let c3 = (0..=t).map(|j| (0..=t).map(|k| count_c3(j, k, p)).collect()).collect();
        (Some(c2), Some(c3))
    };
    SicTables { delta: delta_table(p), c2, c3, p_sic2: psic2(p, big_gamma2), p_sic3: psic3(p, big_gamma3) }
}
