//! Semi-Lagrangian 1D2V Vlasov–Poisson solver for electrons and ions.
//!
//! The electron equation is split into free streaming in `x` (operator 1),
//! the magnetic/drift rotation in `v_z` (operator 2) and the electric and
//! magnetic kick in `v_x` (operator 3). Each sub-flow is an exact shift
//! along one axis, evaluated with cubic splines.

pub mod advect;
pub mod config;
pub mod diagnostics;
pub mod field;
pub mod flows;
pub mod grid;
pub mod phase_space;
pub mod run;
pub mod snapshot;

pub use advect::Advection;
pub use config::{EcdiConfig, FieldSchedule, Species};
pub use diagnostics::{
    dominant_mode, energy_breakdown, energy_breakdown_with_field, energy_deviation, fit_log_linear, growth_rates,
    mode_amplitudes, total_energy, work_power, EnergyBreakdown, EnergyDeviation, GrowthRate, LogLinearFit,
    MIN_FIT_SAMPLES,
};
pub use field::{diagnostic_field, field_from_density, solve_field};
pub use flows::{field_hook_point, OperatorTiming, VlasovFlows, OPERATOR_NAMES};
pub use grid::Axis;
pub use phase_space::{edge_ratio, gaussian, initialize, velocity_profile, PhaseSpace, PlasmaParams};
pub use run::{run, run_from, write_outputs, EnergySample, ModeSample, VlasovRun, NEGATIVITY_LIMIT};
pub use snapshot::{read_snapshot, write_snapshot, Snapshot, SNAPSHOT_MAGIC};
