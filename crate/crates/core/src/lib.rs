//! Betting strategies over bit sequences: martingales, scan rules, the
//! transforms between them, diagonalization constructions with replayable
//! certificates, and a small description system used as a complexity oracle.

pub mod budget;
pub mod capital;
pub mod catalog;
pub mod checkpoints;
pub mod complexity;
pub mod diagonalize;
pub mod martingale;
pub mod source;
pub mod splitting;
pub mod strategy;
pub mod suites;
pub mod transforms;
pub mod word;

pub use budget::Budget;
pub use capital::Capital;
pub use word::Word;
