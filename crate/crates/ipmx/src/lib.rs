//! Internal pattern matching index.
//!
//! Preprocesses a text into an expected-linear-size structure answering
//! queries about its subwords, where every query argument is itself a
//! subword given by its position interval:
//!
//! - occurrences of one subword in another (constant time when the target
//!   window is at most twice the pattern length, reported as a single
//!   arithmetic progression),
//! - prefix-suffix matches, full period enumeration, 2-periodicity,
//! - cyclic equivalence of two subwords,
//! - bounded longest common prefix and generalized substring compression
//!   (the LZ77 parse of one subword against another as context).
//!
//! Every query family ships with a brute-force oracle used by the property
//! tests and the `selftest` command.

pub mod bench;
pub mod compression;
pub mod corpus;
pub mod dbf;
pub mod error;
pub mod index;
pub mod oracle;
pub mod periodic;
pub mod queries;
pub mod rng;
pub mod runs;
pub mod sampling;
pub mod selftest;
pub mod succinct;
pub mod text;
pub mod wavelet;

mod suffix;

pub use error::{Error, Result};
pub use index::{layer, IndexConfig, IpmIndex};
pub use text::{ArithProgression, Fragment, Text, TextIndex};
