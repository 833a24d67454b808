//! First Čech cohomology of one-dimensional substitution tiling spaces.
//!
//! The computation builds the transition complex `S` of a primitive aperiodic
//! substitution, follows the edge map induced by substitution to its eventual
//! range, and splits the transposed transition matrix along the component
//! vectors of `S`:
//!
//! ```
//! use tilecoh_core::{compute_cohomology, parse_substitution, Options};
//!
//! let fib = parse_substitution("1 -> 1 2; 2 -> 1").unwrap();
//! let res = compute_cohomology(&fib, &Options::default()).unwrap();
//! assert_eq!(res.pretty, "Z^2");
//! ```

pub mod complex;
#[cfg(feature = "corpus")]
pub mod corpus;
pub mod error;
pub mod fixtures;
pub mod lattice;
pub mod parse;
pub mod perron;
pub mod pipeline;
pub mod substitution;

pub use error::{Error, ParseError, Position, Result};
pub use parse::{parse_batch, parse_substitution};
pub use pipeline::{
    compute_cohomology, invariance_suite, CohomologyResult, InvarianceReport, InvariantTuple,
    Options, SuiteOptions,
};
pub use substitution::{Letter, Substitution};
