//! Exhaustive enumeration over small single-preamble instances.
//!
//! Every device picks an unordered pair of distinct slots; device 0 is the
//! tagged device. Decoding here is a bitmask re-implementation kept
//! separate from [`crate::sim::FrameLedger`] so the two can cross-check
//! each other.

use num_rational::Ratio;

use crate::error::{Error, Result};

pub type Frac = Ratio<u64>;

pub const MAX_T: usize = 8;
pub const MAX_N: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumSpace {
    pub t: usize,
    pub n: usize,
}

impl EnumSpace {
    pub fn new(t: usize, n: usize) -> Result<Self> {
        if !(2..=MAX_T).contains(&t) || !(1..=MAX_N).contains(&n) {
            return Err(Error::EnumSpace(format!("T = {t}, N = {n} (limits T <= {MAX_T}, N <= {MAX_N})")));
        }
        Ok(EnumSpace { t, n })
    }

    pub fn pairs(&self) -> Vec<u16> {
        pairs_in(self.t)
    }

    /// `C(T, 2)^n`.
    pub fn configurations(&self, n: usize) -> u64 {
        (self.pairs().len() as u64).pow(n as u32)
    }
}

fn pairs_in(width: usize) -> Vec<u16> {
    let mut v = Vec::new();
    for a in 0..width {
        for b in a + 1..width {
            v.push((1u16 << a) | (1u16 << b));
        }
    }
    v
}

/// Calls `f` on every element of `choices^n`.
fn for_each_tuple(choices: &[u16], n: usize, mut f: impl FnMut(&[u16])) {
    if n == 0 {
        f(&[]);
        return;
    }
    if choices.is_empty() {
        return;
    }
    let mut idx = vec![0usize; n];
    let mut cur: Vec<u16> = vec![choices[0]; n];
    loop {
        f(&cur);
        let mut pos = 0;
        loop {
            idx[pos] += 1;
            if idx[pos] < choices.len() {
                cur[pos] = choices[idx[pos]];
                break;
            }
            idx[pos] = 0;
            cur[pos] = choices[0];
            pos += 1;
            if pos == n {
                return;
            }
        }
    }
}

/// Slot boundary at which each device is decoded when devices stop
/// transmitting once decoded and decoding runs to a fixpoint after every
/// slot. A device occupies slot `x` at boundary `s >= x` iff it is still
/// undecoded.
pub fn causal_decode(masks: &[u16], t: usize) -> Vec<Option<usize>> {
    let mut out = vec![None; masks.len()];
    for s in 0..t {
        loop {
            let mut progressed = false;
            for x in 0..=s {
                let mut sole = None;
                let mut count = 0;
                for (d, &m) in masks.iter().enumerate() {
                    if out[d].is_none() && m & (1 << x) != 0 {
                        count += 1;
                        sole = Some(d);
                    }
                }
                if count == 1 {
                    out[sole.expect("one occupant")] = Some(s);
                    progressed = true;
                }
            }
            if !progressed {
                break;
            }
        }
    }
    out
}

/// Whether `partners` unravel top-down over `slots_desc`: each listed slot
/// holds exactly one still-undecoded partner, which is then removed.
fn descending_cascade(partners: &[u16], slots_desc: &[usize]) -> bool {
    let mut left: u32 = (1 << partners.len()) - 1;
    for &s in slots_desc {
        let mut hit = None;
        for (d, &m) in partners.iter().enumerate() {
            if left & (1 << d) != 0 && m & (1 << s) != 0 {
                if hit.is_some() {
                    return false;
                }
                hit = Some(d);
            }
        }
        match hit {
            Some(d) => left &= !(1 << d),
            None => return false,
        }
    }
    left == 0
}

fn slots_desc(mask: u16, below: usize) -> Vec<usize> {
    (below + 1..16).rev().filter(|&s| mask & (1 << s) != 0).collect()
}

/// Probability that the tagged device, transmitting in slots `0` and
/// `T - 1`, is released by exactly `i - 1` other devices confined to slots
/// `0..i` that unravel from slot `i - 1` down to slot `1`, while the
/// remaining `N - i` devices avoid those slots.
pub fn enumerate_delta(i: usize, space: EnumSpace) -> Frac {
    let (t, n) = (space.t, space.n);
    let total = space.configurations(n - 1);
    if i < 2 || i > n || i + 2 > t {
        return Frac::new(0, total);
    }
    let block: u16 = (1 << i) - 1;
    let order: Vec<usize> = (1..i).rev().collect();
    let mut hits = 0u64;
    let mut inside = Vec::with_capacity(n);
    for_each_tuple(&space.pairs(), n - 1, |others| {
        inside.clear();
        for &m in others {
            if m & block == m {
                inside.push(m);
            } else if m & block != 0 {
                return;
            }
        }
        if inside.len() == i - 1 && descending_cascade(&inside, &order) {
            hits += 1;
        }
    });
    Frac::new(hits, total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    /// Between the two transmissions.
    Second,
    /// After both transmissions, waiting for the cycle to end.
    Third,
}

/// Labelled arrangements of `k - 1` partner devices releasing the tagged
/// device through a top-down cascade.
///
/// `Stage::Second`: a window of `T - j` slots; the tagged device's one
/// transmission is the lowest of exactly `k` occupied slots.
///
/// `Stage::Third`: a window of `j` slots; the tagged device holds slots 0
/// and 1, exactly `k + 1` slots are occupied including the last one, and
/// the partners touch only one of the two tagged slots.
pub fn enumerate_counts(j: usize, k: usize, stage: Stage, space: EnumSpace) -> u64 {
    if k < 2 || k > space.n {
        return 0;
    }
    let partners = k - 1;
    let mut count = 0u64;
    match stage {
        Stage::Second => {
            if j >= space.t {
                return 0;
            }
            let m = space.t - j;
            if k > m {
                return 0;
            }
            for_each_tuple(&pairs_in(m), partners, |ps| {
                let used = ps.iter().fold(0u16, |a, &b| a | b);
                for a in 0..m {
                    let occ = used | (1 << a);
                    if occ.count_ones() as usize == k
                        && occ.trailing_zeros() as usize == a
                        && descending_cascade(ps, &slots_desc(occ, a))
                    {
                        count += 1;
                    }
                }
            });
        }
        Stage::Third => {
            if j < 3 || j > space.t || k + 1 > j {
                return 0;
            }
            for_each_tuple(&pairs_in(j), partners, |ps| {
                let used = ps.iter().fold(0u16, |a, &b| a | b);
                let occ = used | 0b11;
                if occ.count_ones() as usize != k + 1 || occ & (1 << (j - 1)) == 0 {
                    return;
                }
                for x in 0..2 {
                    let y = 1 - x;
                    if used & (1 << y) == 0 && descending_cascade(ps, &slots_desc(occ & !0b11, 1)) {
                        count += 1;
                    }
                }
            });
        }
    }
    count
}

/// Exact decoding statistics of the tagged device.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleSic {
    /// Decoded at the boundary of its first transmission.
    pub p_t1: Frac,
    /// Reaches its second transmission undecoded (unconditional).
    pub psi: Frac,
    /// Decoded at the boundary of its second transmission, given it got there.
    pub p_t2: Frac,
    /// `p_sic2[j]`: decoded after slot `r_max - j` given undecoded before it.
    pub p_sic2: Vec<Frac>,
    /// `p_sic3[j]`: decoded after slot `T - 1 - j` given undecoded before it.
    pub p_sic3: Vec<Frac>,
    pub reach2: Vec<u64>,
    pub reach3: Vec<u64>,
}

fn ratio(num: u64, den: u64) -> Frac {
    if den == 0 {
        Frac::from_integer(0)
    } else {
        Frac::new(num, den)
    }
}

pub fn enumerate_psic(space: EnumSpace) -> OracleSic {
    let t = space.t;
    let mut reach2 = vec![0u64; t - 1];
    let mut succ2 = vec![0u64; t - 1];
    let mut reach3 = vec![0u64; t.saturating_sub(2)];
    let mut succ3 = vec![0u64; t.saturating_sub(2)];
    let (mut total, mut first, mut second, mut second_ok) = (0u64, 0u64, 0u64, 0u64);
    for_each_tuple(&space.pairs(), space.n, |conf| {
        total += 1;
        let r = causal_decode(conf, t)[0];
        let a = conf[0].trailing_zeros() as usize;
        let b = 15 - conf[0].leading_zeros() as usize;
        if r == Some(a) {
            first += 1;
            return;
        }
        for s in a + 1..b {
            reach2[b - s] += 1;
            if r == Some(s) {
                succ2[b - s] += 1;
                return;
            }
        }
        second += 1;
        if r == Some(b) {
            second_ok += 1;
            return;
        }
        for s in b + 1..t {
            reach3[t - 1 - s] += 1;
            if r == Some(s) {
                succ3[t - 1 - s] += 1;
                return;
            }
        }
    });
    OracleSic {
        p_t1: ratio(first, total),
        psi: ratio(second, total),
        p_t2: ratio(second_ok, second),
        p_sic2: succ2.iter().zip(&reach2).map(|(&s, &r)| ratio(s, r)).collect(),
        p_sic3: succ3.iter().zip(&reach3).map(|(&s, &r)| ratio(s, r)).collect(),
        reach2,
        reach3,
    }
}

pub fn to_f64(r: Frac) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}
