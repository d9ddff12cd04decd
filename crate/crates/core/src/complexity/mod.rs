//! A prefix-free description system standing in for plain conditional
//! complexity.

pub mod code;
pub mod description;

pub use description::{
    complexity_upper, decode, encode_program, enumerate_low, literal_len, parse_program, prefix_violations, repeat_len,
    run_program, ComplexityBound, DecodeError, LowEnumeration, Program, CERT_SEARCH_BITS,
};
