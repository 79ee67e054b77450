//! Log-domain combinatorics.
//!
//! Every factorial and binomial in the analytic model is evaluated as a
//! natural logarithm so that cycle lengths in the thousands do not overflow.

use std::f64::consts::PI;

/// Table of `ln(n!)` for `n = 0..=max`, built by cumulative summation.
#[derive(Debug, Clone)]
pub struct LnFactorial {
    table: Vec<f64>,
}

impl LnFactorial {
    pub fn new(max: usize) -> Self {
        let mut table = Vec::with_capacity(max + 1);
        table.push(0.0);
        let mut acc = 0.0;
        for n in 1..=max {
            acc += (n as f64).ln();
            table.push(acc);
        }
        LnFactorial { table }
    }

    pub fn max(&self) -> usize {
        self.table.len() - 1
    }

    /// `ln(n!)`. Panics if `n` exceeds the table size.
    pub fn ln_fact(&self, n: usize) -> f64 {
        self.table[n]
    }

    /// `ln C(n, k)`, or `-inf` when the coefficient is zero (`k > n`).
    pub fn ln_binom(&self, n: usize, k: usize) -> f64 {
        if k > n {
            return f64::NEG_INFINITY;
        }
        self.table[n] - self.table[k] - self.table[n - k]
    }

    /// Signed-argument variant: `C(n, k) = 0` for `n < 0`, `k < 0` or `k > n`.
    pub fn ln_binom_i(&self, n: i64, k: i64) -> f64 {
        if n < 0 || k < 0 || k > n {
            return f64::NEG_INFINITY;
        }
        self.ln_binom(n as usize, k as usize)
    }
}

/// Stirling-form stand-in for `ln C(n, k)`: `ln( n^k / (sqrt(2 pi k) (k/e)^k) )`.
///
/// This replaces `k!` by its Stirling approximation and `n!/(n-k)!` by `n^k`.
/// Exact (`0`) for `k = 0`; `-inf` when `n < k` so that empty ranges stay
/// empty, matching the exact coefficient.
pub fn ln_binom_stirling(n: i64, k: i64) -> f64 {
    if n < 0 || k < 0 || k > n {
        return f64::NEG_INFINITY;
    }
    if k == 0 {
        return 0.0;
    }
    let (nf, kf) = (n as f64, k as f64);
    kf * nf.ln() - 0.5 * (2.0 * PI * kf).ln() - kf * (kf.ln() - 1.0)
}

/// `C(n, 2)` as a float; zero for `n < 2`.
pub fn choose2(n: usize) -> f64 {
    if n < 2 {
        0.0
    } else {
        (n * (n - 1)) as f64 / 2.0
    }
}

/// `ln(exp(a) + exp(b))` without overflow.
pub fn ln_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Running log-domain sum.
#[derive(Debug, Clone, Copy)]
pub struct LnSum(f64);

impl Default for LnSum {
    fn default() -> Self {
        LnSum(f64::NEG_INFINITY)
    }
}

impl LnSum {
    pub fn add_ln(&mut self, term: f64) {
        self.0 = ln_add(self.0, term);
    }

    pub fn ln(&self) -> f64 {
        self.0
    }

    pub fn value(&self) -> f64 {
        self.0.exp()
    }
}
