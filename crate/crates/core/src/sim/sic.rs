//! One cycle of the SIC-based mechanism: entrants transmit `R` replicas in
//! distinct slots, stop once decoded, and the base station peels the ledger
//! at every slot boundary.

use rand::seq::index;
use rand::Rng;
use rand_distr::{Binomial, Distribution};

use super::config::SicConfig;
use super::ledger::{DeviceState, FrameLedger};
use super::rng::{trial_rngs, SimRng};
use super::trace::{Outcome, TraceEvent};
use super::CycleResult;

/// Pre-drawn replicas of every entrant, slots ascending per device.
/// Drawn schedules give every device `R` replicas; hand-built ones may give
/// a device fewer.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    r: usize,
    starts: Vec<u32>,
    slots: Vec<u32>,
    preambles: Vec<u32>,
}

impl Schedule {
    pub fn new(r: usize) -> Self {
        Schedule { r, starts: vec![0], slots: Vec::new(), preambles: Vec::new() }
    }

    /// Appends a device with between one and `R` replicas in distinct slots.
    pub fn push(&mut self, replicas: &[(usize, usize)]) {
        assert!(!replicas.is_empty() && replicas.len() <= self.r);
        let mut v = replicas.to_vec();
        v.sort_unstable();
        assert!(v.windows(2).all(|w| w[0].0 != w[1].0), "replica slots must be distinct");
        for (s, p) in v {
            self.slots.push(s as u32);
            self.preambles.push(p as u32);
        }
        self.starts.push(self.slots.len() as u32);
    }

    /// Upper bound on replicas per device.
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        self.starts.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn span(&self, device: usize) -> std::ops::Range<usize> {
        self.starts[device] as usize..self.starts[device + 1] as usize
    }

    pub fn replicas(&self, device: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.span(device).map(move |i| (self.slots[i] as usize, self.preambles[i] as usize))
    }

    /// Draws `n` entrants for `cfg`.
    pub fn draw(cfg: &SicConfig, n: usize, rng: &mut SimRng) -> Self {
        let mut s = Schedule::new(cfg.r);
        s.slots.reserve(n * cfg.r);
        s.preambles.reserve(n * cfg.r);
        s.starts.reserve(n);
        let mut buf = Vec::with_capacity(cfg.r);
        for _ in 0..n {
            buf.clear();
            if 4 * cfg.r <= cfg.t {
                while buf.len() < cfg.r {
                    let v = rng.random_range(0..cfg.t as u32);
                    if !buf.contains(&v) {
                        buf.push(v);
                    }
                }
            } else {
                buf.extend(index::sample(rng, cfg.t, cfg.r).iter().map(|v| v as u32));
            }
            buf.sort_unstable();
            for &v in &buf {
                s.slots.push(v);
                s.preambles.push(rng.random_range(0..cfg.k as u32));
            }
            s.starts.push(s.slots.len() as u32);
        }
        s
    }
}

/// Reusable buffers for [`run_sic_schedule`].
#[derive(Debug, Clone)]
pub struct SicWorkspace {
    pub ledger: FrameLedger,
    offsets: Vec<u32>,
    items: Vec<u32>,
    owner: Vec<u32>,
    scheduled: Vec<u32>,
}

impl SicWorkspace {
    pub fn new(cfg: &SicConfig) -> Self {
        SicWorkspace {
            ledger: FrameLedger::new(cfg.t, cfg.k, 0, cfg.r),
            offsets: Vec::new(),
            items: Vec::new(),
            owner: Vec::new(),
            scheduled: vec![0; cfg.t * cfg.k],
        }
    }
}

/// Plays `schedule` through one cycle. Packet errors are drawn from
/// `pe_rng` in decoding order.
pub fn run_sic_schedule(
    cfg: &SicConfig,
    schedule: &Schedule,
    pe_rng: &mut SimRng,
    ws: &mut SicWorkspace,
) -> CycleResult {
    let (t, k) = (cfg.t, cfg.k);
    let n = schedule.len();
    assert!(schedule.r() <= cfg.r, "schedule exceeds the configured repetition rate");
    ws.ledger.reset(n);
    ws.owner.clear();
    for d in 0..n {
        ws.owner.extend(schedule.span(d).map(|_| d as u32));
    }

    // Bucket replica indices by slot.
    ws.offsets.clear();
    ws.offsets.resize(t + 1, 0);
    ws.scheduled.fill(0);
    for (i, &s) in schedule.slots.iter().enumerate() {
        ws.offsets[s as usize + 1] += 1;
        ws.scheduled[s as usize * k + schedule.preambles[i] as usize] += 1;
    }
    for s in 0..t {
        ws.offsets[s + 1] += ws.offsets[s];
    }
    ws.items.clear();
    ws.items.resize(schedule.slots.len(), 0);
    let mut fill = ws.offsets.clone();
    for (i, &s) in schedule.slots.iter().enumerate() {
        ws.items[fill[s as usize] as usize] = i as u32;
        fill[s as usize] += 1;
    }

    let mut res = CycleResult::empty(n as u64, t);
    let p_e = cfg.p_e;
    for s in 0..t {
        for &i in &ws.items[ws.offsets[s] as usize..ws.offsets[s + 1] as usize] {
            let d = ws.owner[i as usize];
            if ws.ledger.device_state(d) == DeviceState::Decoded {
                continue;
            }
            ws.ledger.record(d, s, schedule.preambles[i as usize] as usize);
            if i + 1 == schedule.starts[d as usize + 1] {
                res.reached_final_tx += 1;
            }
        }
        let newly = ws.ledger.peel_with(s, |_| p_e == 0.0 || !pe_rng.random_bool(p_e));
        res.per_slot_successes[s] = newly.len() as u64;
    }

    for d in 0..n {
        let span = schedule.span(d);
        let repeats = span.len() > 1;
        let (first_slot, first_pre) = (schedule.slots[span.start] as usize, schedule.preambles[span.start] as usize);
        let last_slot = schedule.slots[span.end - 1] as usize;
        if ws.scheduled[first_slot * k + first_pre] == 1 {
            res.clean_first_tx += 1;
        }
        match ws.ledger.device_state(d as u32) {
            DeviceState::Decoded => {
                let (slot, _) = ws.ledger.decode_cell(d as u32).expect("decoded device has a cell");
                if !ws.ledger.decoded_directly(d as u32) {
                    res.successes_sic += 1;
                } else if slot == first_slot {
                    res.successes_first_tx += 1;
                } else {
                    res.successes_later_tx += 1;
                }
                if ws.ledger.decoded_directly(d as u32) && slot == last_slot && repeats {
                    res.final_tx_successes += 1;
                }
            }
            DeviceState::Dropped => res.pe_drops += 1,
            DeviceState::Pending => {}
        }
    }
    res.unresolved_devices = res.entrants - res.successes();
    res
}

/// Samples the entrants of a cycle from `pool` devices, then plays it.
pub fn sic_cycle(
    cfg: &SicConfig,
    pool: u64,
    rng: &mut SimRng,
    pe_rng: &mut SimRng,
    ws: &mut SicWorkspace,
) -> CycleResult {
    let p = cfg.entry_probability();
    let n = if pool == 0 || p <= 0.0 { 0 } else { Binomial::new(pool, p).expect("probability in [0, 1]").sample(rng) };
    let schedule = Schedule::draw(cfg, n as usize, rng);
    run_sic_schedule(cfg, &schedule, pe_rng, ws)
}

pub fn run_sic_cycle(cfg: &SicConfig, pool_size: u64, seed: u64) -> CycleResult {
    let (mut rng, mut pe_rng) = trial_rngs(seed, 0);
    let mut ws = SicWorkspace::new(cfg);
    sic_cycle(cfg, pool_size, &mut rng, &mut pe_rng, &mut ws)
}

/// Per-transmission outcomes of the cycle last played in `ws`, ordered by
/// slot, preamble and device. Receptions of an already dropped device are
/// omitted.
pub fn trace_events(ws: &SicWorkspace, cycle: u32) -> Vec<TraceEvent> {
    let l = &ws.ledger;
    let mut out = Vec::new();
    for d in 0..l.n_devices() as u32 {
        let decoded_at = l.decode_cell(d);
        let state = l.device_state(d);
        for (slot, preamble) in l.entries_of(d) {
            let outcome = if decoded_at == Some((slot, preamble)) {
                match state {
                    DeviceState::Dropped => Outcome::PeDrop,
                    _ if l.decoded_directly(d) => Outcome::Success,
                    _ => Outcome::SicSuccess,
                }
            } else if l.occupancy(slot, preamble) > 1 {
                Outcome::Collision
            } else {
                continue;
            };
            out.push(TraceEvent { cycle, slot, preamble, device: d, outcome });
        }
    }
    out.sort_by_key(|e| (e.slot, e.preamble, e.device));
    out
}
