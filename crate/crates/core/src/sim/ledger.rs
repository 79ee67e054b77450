//! Slot x preamble ledger of one cycle and the peeling decoder over it.
//!
//! Each cell keeps the number of live (not cancelled) entries and the XOR
//! of their device ids, so a cell with one live entry names its device
//! directly. Candidate cells wait in a min-heap keyed by processing order;
//! stale candidates are discarded when popped.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeviceState {
    Pending,
    /// Decoded and cancelled from every cell.
    Decoded,
    /// Decoded but lost to a packet error: its entries stay in the ledger
    /// and it is never decoded again in this cycle.
    Dropped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellStatus {
    Idle,
    /// One live entry that has not (or cannot) be decoded.
    Unresolved,
    SingletonSuccess,
    Collided,
    CancelledToSingleton,
    /// Every entry cancelled by decodes elsewhere.
    Cleared,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeelOrder {
    Ascending,
    Descending,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeelStep {
    pub slot: usize,
    pub preamble: usize,
    pub device: u32,
    pub accepted: bool,
}

#[derive(Debug, Clone)]
pub struct FrameLedger {
    t: usize,
    k: usize,
    max_entries: usize,
    order: PeelOrder,
    live: Vec<u32>,
    xor: Vec<u32>,
    ever: Vec<u32>,
    decoded_here: Vec<u32>,
    entries: Vec<u32>,
    n_entries: Vec<u8>,
    state: Vec<DeviceState>,
    decode_cell: Vec<u32>,
    queue: BinaryHeap<Reverse<u32>>,
    deferred: Vec<u32>,
    steps: Vec<PeelStep>,
    newly: Vec<u32>,
}

impl FrameLedger {
    pub fn new(t: usize, k: usize, n_devices: usize, max_entries: usize) -> Self {
        assert!(max_entries <= u8::MAX as usize);
        assert!(((t * k) as u64) < NONE as u64 && (n_devices as u64) < NONE as u64);
        let cells = t * k;
        let mut l = FrameLedger {
            t,
            k,
            max_entries,
            order: PeelOrder::Ascending,
            live: vec![0; cells],
            xor: vec![0; cells],
            ever: vec![0; cells],
            decoded_here: vec![NONE; cells],
            entries: Vec::new(),
            n_entries: Vec::new(),
            state: Vec::new(),
            decode_cell: Vec::new(),
            queue: BinaryHeap::new(),
            deferred: Vec::new(),
            steps: Vec::new(),
            newly: Vec::new(),
        };
        l.reset(n_devices);
        l
    }

    pub fn with_order(mut self, order: PeelOrder) -> Self {
        self.order = order;
        self
    }

    /// Clears the ledger for a new cycle, keeping allocations.
    pub fn reset(&mut self, n_devices: usize) {
        self.live.fill(0);
        self.xor.fill(0);
        self.ever.fill(0);
        self.decoded_here.fill(NONE);
        self.entries.clear();
        self.entries.resize(n_devices * self.max_entries, NONE);
        self.n_entries.clear();
        self.n_entries.resize(n_devices, 0);
        self.state.clear();
        self.state.resize(n_devices, DeviceState::Pending);
        self.decode_cell.clear();
        self.decode_cell.resize(n_devices, NONE);
        self.queue.clear();
        self.steps.clear();
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_devices(&self) -> usize {
        self.state.len()
    }

    fn cell(&self, slot: usize, preamble: usize) -> usize {
        slot * self.k + preamble
    }

    fn key(&self, cell: usize) -> u32 {
        match self.order {
            PeelOrder::Ascending => cell as u32,
            PeelOrder::Descending => {
                let (s, p) = (cell / self.k, cell % self.k);
                ((self.t - 1 - s) * self.k + p) as u32
            }
        }
    }

    fn cell_of_key(&self, key: u32) -> usize {
        match self.order {
            PeelOrder::Ascending => key as usize,
            PeelOrder::Descending => {
                let (s, p) = (key as usize / self.k, key as usize % self.k);
                (self.t - 1 - s) * self.k + p
            }
        }
    }

    /// Adds a received transmission of `device`.
    pub fn record(&mut self, device: u32, slot: usize, preamble: usize) {
        let d = device as usize;
        assert!(slot < self.t && preamble < self.k);
        debug_assert!(self.state[d] != DeviceState::Decoded, "decoded devices stay silent");
        let n = self.n_entries[d] as usize;
        assert!(n < self.max_entries, "device {device} exceeds its replica budget");
        let c = self.cell(slot, preamble);
        let base = d * self.max_entries;
        assert!(
            self.entries[base..base + n].iter().all(|&e| e as usize / self.k != slot),
            "device {device} already transmitted in slot {slot}"
        );
        self.entries[base + n] = c as u32;
        self.n_entries[d] += 1;
        self.live[c] += 1;
        self.xor[c] ^= device;
        self.ever[c] += 1;
        if self.live[c] == 1 {
            self.queue.push(Reverse(self.key(c)));
        }
    }

    fn cells_of(&self, device: usize) -> &[u32] {
        let base = device * self.max_entries;
        &self.entries[base..base + self.n_entries[device] as usize]
    }

    /// Runs peeling to a fixpoint over cells in slots `0..=up_to_slot`.
    /// `decide` is asked once per decodable device; `false` drops it. Returns
    /// the devices accepted in this call, in decoding order.
    pub fn peel_with(&mut self, up_to_slot: usize, mut decide: impl FnMut(u32) -> bool) -> &[u32] {
        self.newly.clear();
        while let Some(Reverse(key)) = self.queue.pop() {
            let c = self.cell_of_key(key);
            if c / self.k > up_to_slot {
                self.deferred.push(key);
                continue;
            }
            if self.live[c] != 1 {
                continue;
            }
            let d = self.xor[c];
            if self.state[d as usize] != DeviceState::Pending {
                continue;
            }
            let accepted = decide(d);
            self.steps.push(PeelStep { slot: c / self.k, preamble: c % self.k, device: d, accepted });
            self.decode_cell[d as usize] = c as u32;
            if !accepted {
                self.state[d as usize] = DeviceState::Dropped;
                continue;
            }
            self.state[d as usize] = DeviceState::Decoded;
            self.decoded_here[c] = d;
            self.newly.push(d);
            let base = d as usize * self.max_entries;
            for i in 0..self.n_entries[d as usize] as usize {
                let e = self.entries[base + i] as usize;
                self.live[e] -= 1;
                self.xor[e] ^= d;
                if self.live[e] == 1 {
                    self.queue.push(Reverse(self.key(e)));
                }
            }
        }
        for key in self.deferred.drain(..) {
            self.queue.push(Reverse(key));
        }
        &self.newly
    }

    pub fn peel(&mut self, up_to_slot: usize) -> Vec<u32> {
        self.peel_with(up_to_slot, |_| true).to_vec()
    }

    pub fn device_state(&self, device: u32) -> DeviceState {
        self.state[device as usize]
    }

    /// `(slot, preamble)` where the device was decoded (or dropped).
    pub fn decode_cell(&self, device: u32) -> Option<(usize, usize)> {
        match self.decode_cell[device as usize] {
            NONE => None,
            c => Some((c as usize / self.k, c as usize % self.k)),
        }
    }

    /// Whether the device was decoded from a cell that never held anyone else.
    pub fn decoded_directly(&self, device: u32) -> bool {
        match self.decode_cell[device as usize] {
            NONE => false,
            c => self.ever[c as usize] == 1,
        }
    }

    /// Number of transmissions ever recorded in a cell.
    pub fn occupancy(&self, slot: usize, preamble: usize) -> u32 {
        self.ever[self.cell(slot, preamble)]
    }

    pub fn entries_of(&self, device: u32) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.cells_of(device as usize).iter().map(|&c| (c as usize / self.k, c as usize % self.k))
    }

    pub fn status(&self, slot: usize, preamble: usize) -> CellStatus {
        let c = self.cell(slot, preamble);
        if self.ever[c] == 0 {
            CellStatus::Idle
        } else if self.decoded_here[c] != NONE {
            if self.ever[c] == 1 {
                CellStatus::SingletonSuccess
            } else {
                CellStatus::CancelledToSingleton
            }
        } else {
            match self.live[c] {
                0 => CellStatus::Cleared,
                1 => CellStatus::Unresolved,
                _ => CellStatus::Collided,
            }
        }
    }

    pub fn steps(&self) -> &[PeelStep] {
        &self.steps
    }

    /// Devices in the `Decoded` state, ascending.
    pub fn decoded(&self) -> Vec<u32> {
        (0..self.state.len() as u32).filter(|&d| self.state[d as usize] == DeviceState::Decoded).collect()
    }

    /// Replays the step log against the recorded entries: every step must
    /// find its device alone among the entries not yet cancelled, which
    /// makes every chain of cancellations start at a natural singleton.
    pub fn verify_steps(&self) -> Result<(), String> {
        let mut members: Vec<Vec<u32>> = vec![Vec::new(); self.t * self.k];
        for d in 0..self.state.len() {
            for &c in self.cells_of(d) {
                members[c as usize].push(d as u32);
            }
        }
        let mut cancelled = vec![false; self.state.len()];
        for (i, st) in self.steps.iter().enumerate() {
            let c = self.cell(st.slot, st.preamble);
            let live: Vec<u32> = members[c].iter().copied().filter(|&d| !cancelled[d as usize]).collect();
            if live != [st.device] {
                return Err(format!("step {i}: cell ({}, {}) holds {live:?}", st.slot, st.preamble));
            }
            if st.accepted {
                cancelled[st.device as usize] = true;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ledger(t: usize, n: usize, devices: &[&[usize]]) -> FrameLedger {
        let mut l = FrameLedger::new(t, 1, n, 4);
        for (d, slots) in devices.iter().enumerate() {
            for &s in *slots {
                l.record(d as u32, s, 0);
            }
        }
        l
    }

    #[test]
    fn empty_ledger_peels_nothing() {
        let mut l = FrameLedger::new(5, 3, 0, 2);
        assert!(l.peel(4).is_empty());
        assert_eq!(l.status(0, 0), CellStatus::Idle);
    }

    #[test]
    fn chain_of_four_resolves_in_one_pass() {
        let mut l = ledger(4, 4, &[&[0, 1], &[1, 2], &[2, 3], &[3]]);
        let mut got = l.peel(3);
        got.sort();
        assert_eq!(got, vec![0, 1, 2, 3]);
        assert_eq!(l.status(3, 0), CellStatus::CancelledToSingleton);
        assert!(l.verify_steps().is_ok());
    }

    #[test]
    fn identical_pairs_form_a_stopping_set() {
        let mut l = ledger(4, 2, &[&[1, 2], &[1, 2]]);
        assert!(l.peel(3).is_empty());
        assert_eq!(l.status(1, 0), CellStatus::Collided);
    }

    #[test]
    fn three_device_example() {
        // Slots {1}, {1,2}, {2,3}: only the last device is ever alone.
        let mut l = ledger(4, 3, &[&[1], &[1, 2], &[2, 3]]);
        let mut got = l.peel(3);
        got.sort();
        assert_eq!(got, vec![0, 1, 2]);
        assert_eq!(l.status(3, 0), CellStatus::SingletonSuccess);
        assert!(l.decoded_directly(2));
        assert!(!l.decoded_directly(0));
    }

    #[test]
    fn up_to_slot_limits_and_defers() {
        let mut l = ledger(4, 2, &[&[0, 3], &[0]]);
        assert!(l.peel(2).is_empty());
        assert_eq!(l.peel(3).len(), 2);
    }

    #[test]
    fn dropped_device_blocks_its_cells() {
        let mut l = ledger(3, 2, &[&[0, 1], &[1]]);
        let got = l.peel_with(2, |d| d != 0).to_vec();
        assert!(got.is_empty());
        assert_eq!(l.device_state(0), DeviceState::Dropped);
        assert_eq!(l.status(0, 0), CellStatus::Unresolved);
        assert_eq!(l.status(1, 0), CellStatus::Collided);
        assert!(l.verify_steps().is_ok());
    }

    #[test]
    fn descending_order_reaches_same_fixpoint() {
        let devs: &[&[usize]] = &[&[0, 2], &[2, 4], &[4], &[1, 3], &[1, 3]];
        let mut a = ledger(5, 5, devs);
        let mut b = ledger(5, 5, devs);
        b.order = PeelOrder::Descending;
        a.peel(4);
        b.peel(4);
        assert_eq!(a.decoded(), b.decoded());
        assert_eq!(a.decoded(), vec![0, 1, 2]);
    }
}
