//! File formats, experiment harness and command-line plumbing around
//! [`corrpat_core`].

pub mod harness;
pub mod output;
pub mod stats;
pub mod tables;
pub mod tsv;

pub use output::{Format, Table, Value};
pub use tsv::{parse_wordlist, read_wordlist, serialize_wordlist, WordlistError};
