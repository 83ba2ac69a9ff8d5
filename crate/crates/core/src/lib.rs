//! Regularity of sound-correspondence patterns in cognate-coded wordlists.
//!
//! The pipeline runs from a [`Wordlist`] to phonetic [`Alignment`]s, from
//! alignment columns ([`Site`]s) to correspondence [`Pattern`]s inferred by a
//! greedy clique cover, and from there to balanced (geometric-mean) recurrence
//! scores per cognate set and per dataset. A leave-one-out procedure masks one
//! word at a time and reports the form whose removal raises the cognate set's
//! mean log-recurrence the most.
//!
//! The crate is `no_std` and only needs `alloc`. Reading and writing files,
//! parallel experiment orchestration and the command-line tool live in the
//! companion `corrpat` crate.
//!
//! ```
//! use corrpat_core::regularity::cogset_score;
//!
//! let skewed = cogset_score(&[1, 1, 1, 15]).unwrap();
//! let even = cogset_score(&[2, 2, 2, 2]).unwrap();
//! assert!(skewed < even);
//! ```
#![no_std]

extern crate alloc;

pub mod alignment;
pub mod detect;
mod error;
pub mod experiment;
pub mod patterns;
pub mod regularity;
pub mod seed;
pub mod segment;
pub mod simulate;
pub mod wordlist;

pub use alignment::{Alignment, AlignmentRow, Cell};
pub use detect::DetectionResult;
pub use error::{Error, Result};
pub use patterns::{Entry, Pattern, PatternCollection, Site, SiteId, SiteTable};
pub use regularity::RegularityReport;
pub use segment::{Klass, Segment};
pub use simulate::{GroundTruth, SimulationConfig};
pub use wordlist::{Inventory, WordForm, Wordlist};
