//! Phases on the circle.
//!
//! Averaging angles directly is meaningless near the wrap point, so phase
//! estimates are first located on a short arc, mapped isometrically onto
//! `[0, 1]`, averaged there, and mapped back.

mod arc;
mod protocol;

pub use arc::{arc_map, arc_unmap, circ_diff, Angle, Arc, ARC_TOL};
pub use protocol::{lowdepth_phase_estimate, PhaseOutcome, PhasePlan};
