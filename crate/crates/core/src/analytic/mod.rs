//! Markov-chain model of a device using SIC-based random access with two
//! transmissions per cycle.

pub mod params;
pub mod sic;
pub mod steady;
pub mod transition;

pub use params::{entry_probability, CountVariant, ModelParams, DEFAULT_APPROX_THRESHOLD};
pub use sic::{count_c2, count_c3, delta_approx, delta_exact, psic2, psic3, SicTables};
pub use steady::{steady_state, Analysis, SteadyState};
pub use transition::{big_gamma2, big_gamma3, psi, pt1, pt2, slot_wait_distributions, SlotWaits, TransitionTables};
