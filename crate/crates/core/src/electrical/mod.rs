//! Voltages, currents and the harmonic conjugate.

mod conjugate;
mod levels;
pub mod solver;
mod voltage;

pub use conjugate::{
    closure_defect, conjugate, default_base, dual_increment, interpolate_w, modulo,
    random_dual_cycle, Conjugate,
};
pub use levels::{Levels, LEVEL_TOL};
pub use voltage::{
    flow, flow_strength, interpolate_h, solve_voltage, Oriented, Voltage, DEGENERATE, SOLVER_TOL,
};
