//! Finite-stage diagonalization against a roster of strategies, with
//! replayable certificates.

pub mod certificate;
pub mod class;
pub mod construction;
pub mod roster;
pub mod schedule;

pub use certificate::{
    Certificate, CertificateError, EntryRecord, Outcome, ReplayBudgets, Variant, DEFAULT_EVAL_BUDGET,
    DEFAULT_RACE_BUDGET, SIZE_C1, SIZE_C2, SIZE_C3,
};
pub use class::DiagonalClass;
pub use construction::{
    choose_bit, divergence_probe, greedy_step, replay_certificate, run_construction, Construction, ConstructionBudgets,
    DiagonalError, DiagonalState, Term,
};
pub use roster::{builtin_entry, builtin_roster, EntryKind, RosterEntry, UnknownRosterId, BUILTIN_ROSTER};
pub use schedule::{schedule_from_order, Schedule, ScheduleError, BUILTIN_SCHEDULES};
