use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A token that cannot be a segment (empty, whitespace, gap or missing symbol).
    InvalidSegment(String),
    /// A word form without segments.
    EmptyForm { id: u64 },
    DuplicateId(u64),
    UnknownDoculect(String),
    /// An alignment row whose sounds differ from the form it claims to align.
    AlignmentMismatch { id: u64 },
    /// An alignment that breaks the shape invariants (ragged rows, all-gap column, ...).
    MalformedAlignment { cogid: i64, reason: &'static str },
    InvalidSample { requested: usize, available: usize },
    EmptyCognateSet,
    InconsistentReport { recurrences: usize, total_sites: usize },
    UnknownMember { cogid: i64, doculect: usize },
    TooSmall { cogid: i64, members: usize },
    InvalidConfig(&'static str),
    InvalidRate(f64),
    InjectionImpossible { cogid: i64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidSegment(token) => write!(f, "invalid segment {token:?}"),
            Error::EmptyForm { id } => write!(f, "word form {id} has no segments"),
            Error::DuplicateId(id) => write!(f, "duplicate word form id {id}"),
            Error::UnknownDoculect(name) => write!(f, "unknown doculect {name:?}"),
            Error::AlignmentMismatch { id } => {
                write!(f, "alignment of form {id} does not match its segments")
            }
            Error::MalformedAlignment { cogid, reason } => {
                write!(f, "malformed alignment for cognate set {cogid}: {reason}")
            }
            Error::InvalidSample { requested, available } => write!(
                f,
                "cannot sample {requested} doculects from {available}"
            ),
            Error::EmptyCognateSet => f.write_str("cognate set has no sites to score"),
            Error::InconsistentReport { recurrences, total_sites } => write!(
                f,
                "inconsistent report: {recurrences} recurrences for {total_sites} sites"
            ),
            Error::UnknownMember { cogid, doculect } => write!(
                f,
                "doculect #{doculect} has no word in cognate set {cogid}"
            ),
            Error::TooSmall { cogid, members } => {
                write!(f, "cognate set {cogid} has only {members} member(s)")
            }
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            Error::InvalidRate(rate) => write!(f, "rate {rate} is outside [0, 1]"),
            Error::InjectionImpossible { cogid } => write!(
                f,
                "cannot inject a replacement into cognate set {cogid}"
            ),
        }
    }
}

impl core::error::Error for Error {}
