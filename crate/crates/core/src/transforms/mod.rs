//! Transforms between strategies and martingales: averaging, monotonization,
//! totalization against effectively closed classes, and class conjugation.

mod averaging;
mod class;
mod totalize;

pub use averaging::{average_martingale, averaging_horizon, monotonize, AveragedMartingale, DEFAULT_AVERAGING_CAP};
pub use class::{conjugate_class, ClassParseError, ClassRef, ClosedClass, ConjugatedClass, Pattern, StagedClass};
pub use totalize::{
    totalize_martingale, totalize_strategy, totalize_strategy_lazy, InactiveMarking, RaceEvent, TotalizedMartingale,
};
