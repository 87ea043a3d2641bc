//! Simulation library for interference loss of a macroscopic object's
//! center-of-mass motion caused by entanglement with its own internal
//! dynamics.
//!
//! The center of mass is treated as a classical path that imprints
//! time-dependent perturbations (instantaneous kicks or continuous
//! couplings) on a finite-dimensional internal Hilbert space. The crate
//! provides:
//!
//! - dense state/operator primitives with eigendecomposition-based
//!   propagators ([`hilbert`]);
//! - internal-model factories: harmonic ladder and GOE random-matrix
//!   Hamiltonians, seeded kick generators, initial states ([`models`]);
//! - time-ordered evolution along kick schedules, echo fidelity traces,
//!   and split-operator stepping for continuous couplings
//!   ([`propagation`]);
//! - two-branch interferometer scenarios and fringe visibility
//!   ([`interferometry`]);
//! - clockwise/counter-clockwise loop overlaps and disorder ensembles
//!   ([`weak_localization`]).
//!
//! Everything is deterministic under fixed seeds: ensemble and trace
//! fan-out is keyed by index (ChaCha streams per sample), so results do
//! not depend on the worker count. The `parallel` feature (default)
//! enables a rayon-backed fan-out; without it the same code runs
//! sequentially.

pub mod error;
pub mod exec;
pub mod hilbert;
pub mod interferometry;
pub mod models;
pub mod propagation;
pub mod weak_localization;

pub use error::{Error, Result};
pub use hilbert::{
    commutator_max_abs, eigendecompose, free_propagator, kick_operator, overlap,
    HermitianOperator, Spectrum, StateVector, UnitaryOperator, HERMITICITY_TOL, NORM_TOL,
    UNITARITY_TOL,
};
pub use interferometry::{
    build_scenario, screen_pattern, visibility, Scenario, ScenarioKind, ScreenConfig,
    VisibilityResult,
};
pub use models::{
    build_hamiltonian, build_kick, derive_seed, initial_state, InitialStateSpec, KickBasis,
    KickGeneratorSpec, ModelKind, ModelSpec,
};
pub use propagation::{
    echo_overlap, evolve_schedule, fidelity_trace, fidelity_trace_seq,
    interaction_picture_overlap, trotter_evolve, ContinuousCoupling, FidelityTrace, KickEvent,
    KickTemplate, PathSchedule,
};
pub use weak_localization::{
    ensemble_overlap, ensemble_overlap_seq, loop_overlap, loop_schedules, DisorderKickKind,
    EnsembleParams, EnsembleStats, Histogram, LoopOverlapResult, LoopSpec,
};
