//! Seeded slot-level simulation of extended access barring, the fast RACH
//! mechanism and SIC-based random access.

pub mod acb;
pub mod config;
pub mod drain;
pub mod eab;
pub mod frm;
pub mod ledger;
pub mod rng;
pub mod sic;
pub mod trace;

pub use acb::{update_acb_frm, update_acb_sic};
pub use config::{EabConfig, FrmConfig, SicConfig};
pub use drain::{run_drain, run_drain_experiment, DrainResult, DrainSummary, Mechanism};
pub use eab::{run_eab_cycle, EabState};
pub use frm::run_frm_frame;
pub use ledger::{CellStatus, DeviceState, FrameLedger, PeelOrder, PeelStep};
pub use rng::{trial_rngs, SimRng};
pub use sic::{run_sic_cycle, run_sic_schedule, sic_cycle, trace_events, Schedule, SicWorkspace};
pub use trace::{write_trace, Outcome, TraceEvent};

/// Outcome of one cycle (or one FRM frame).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleResult {
    pub entrants: u64,
    /// Decoded from a clean first transmission.
    pub successes_first_tx: u64,
    /// Decoded from a clean later transmission.
    pub successes_later_tx: u64,
    /// Decoded after cancellation of other devices.
    pub successes_sic: u64,
    /// Decodable but lost to a packet error; counted as unresolved.
    pub pe_drops: u64,
    pub unresolved_devices: u64,
    /// Successes by the slot boundary at which they were decoded.
    pub per_slot_successes: Vec<u64>,
    /// Entrants whose first transmission would be alone in its cell had
    /// every entrant transmitted all of its replicas.
    pub clean_first_tx: u64,
    /// Entrants still undecoded when their last replica was due.
    pub reached_final_tx: u64,
    /// Entrants decoded by a clean last replica.
    pub final_tx_successes: u64,
}

impl CycleResult {
    pub fn empty(entrants: u64, slots: usize) -> Self {
        CycleResult {
            entrants,
            successes_first_tx: 0,
            successes_later_tx: 0,
            successes_sic: 0,
            pe_drops: 0,
            unresolved_devices: entrants,
            per_slot_successes: vec![0; slots],
            clean_first_tx: 0,
            reached_final_tx: 0,
            final_tx_successes: 0,
        }
    }

    pub fn successes(&self) -> u64 {
        self.successes_first_tx + self.successes_later_tx + self.successes_sic
    }
}
