//! Tab-separated wordlist files.
//!
//! The header must name ID, DOCULECT, CONCEPT, TOKENS and COGID in any order
//! and case; an ALIGNMENT column is optional. TOKENS and ALIGNMENT hold
//! segments separated by single spaces, with "-" marking a gap.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use corrpat_core::segment::GAP;
use corrpat_core::{Alignment, AlignmentRow, Cell, Segment, WordForm, Wordlist};
use log::warn;

#[derive(Debug, thiserror::Error)]
pub enum WordlistError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("form {id}: alignment does not reproduce the tokens")]
    AlignmentMismatch { id: u64 },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] corrpat_core::Error),
}

fn parse_error(line: usize, message: impl Into<String>) -> WordlistError {
    WordlistError::Parse { line, message: message.into() }
}

const REQUIRED: [&str; 5] = ["ID", "DOCULECT", "CONCEPT", "TOKENS", "COGID"];

struct Columns {
    id: usize,
    doculect: usize,
    concept: usize,
    tokens: usize,
    cogid: usize,
    alignment: Option<usize>,
    width: usize,
}

fn header(line: &str) -> Result<Columns, WordlistError> {
    let names: Vec<String> = line.split('\t').map(|h| h.trim().to_uppercase()).collect();
    let find = |name: &str| names.iter().position(|h| h == name);
    let mut idx = [0; 5];
    for (slot, name) in idx.iter_mut().zip(REQUIRED) {
        *slot = find(name).ok_or_else(|| parse_error(1, format!("missing {name} column")))?;
    }
    for (i, name) in names.iter().enumerate() {
        if names[..i].contains(name) {
            return Err(parse_error(1, format!("duplicate {name} column")));
        }
    }
    Ok(Columns {
        id: idx[0],
        doculect: idx[1],
        concept: idx[2],
        tokens: idx[3],
        cogid: idx[4],
        alignment: find("ALIGNMENT"),
        width: names.len(),
    })
}

fn segments(field: &str, line: usize) -> Result<Vec<Segment>, WordlistError> {
    if field.is_empty() {
        return Err(parse_error(line, "empty TOKENS"));
    }
    field.split(' ').map(|t| Segment::new(t).map_err(|e| parse_error(line, e.to_string()))).collect()
}

fn cells(field: &str, line: usize) -> Result<Vec<Cell>, WordlistError> {
    field
        .split(' ')
        .map(|t| {
            if t == GAP {
                Ok(Cell::Gap)
            } else {
                Segment::new(t).map(Cell::Sound).map_err(|e| parse_error(line, e.to_string()))
            }
        })
        .collect()
}

/// Parses a wordlist. Doculects are ordered by first appearance.
///
/// Alignment rows are kept only for cognate sets in which every member has
/// one and all rows have the same width; other sets are realigned later.
pub fn parse_wordlist(text: &str) -> Result<Wordlist, WordlistError> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut lines = text.split('\n').map(|l| l.strip_suffix('\r').unwrap_or(l)).enumerate();
    let cols = match lines.next() {
        Some((_, l)) if !l.trim().is_empty() => header(l)?,
        _ => return Err(parse_error(1, "missing header")),
    };

    let mut doculects: Vec<String> = Vec::new();
    let mut forms = Vec::new();
    let mut rows: BTreeMap<i64, Vec<AlignmentRow>> = BTreeMap::new();
    let mut ids = BTreeSet::new();
    for (i, raw) in lines {
        let line = i + 1;
        if raw.is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split('\t').collect();
        if fields.len() != cols.width {
            return Err(parse_error(line, format!("expected {} columns, found {}", cols.width, fields.len())));
        }
        let id: u64 = fields[cols.id].trim().parse().map_err(|_| parse_error(line, "ID is not a non-negative integer"))?;
        let cogid: i64 = fields[cols.cogid].trim().parse().map_err(|_| parse_error(line, "COGID is not an integer"))?;
        if !ids.insert(id) {
            return Err(parse_error(line, format!("duplicate ID {id}")));
        }
        let doculect = fields[cols.doculect].to_string();
        if doculect.is_empty() {
            return Err(parse_error(line, "empty DOCULECT"));
        }
        let segments = segments(fields[cols.tokens], line)?;
        if let Some(a) = cols.alignment.map(|c| fields[c]).filter(|a| !a.is_empty()) {
            let row = AlignmentRow { form_id: id, cells: cells(a, line)? };
            if !row.reproduces(&segments) {
                return Err(WordlistError::AlignmentMismatch { id });
            }
            if cogid > 0 {
                rows.entry(cogid).or_default().push(row);
            }
        }
        if !doculects.contains(&doculect) {
            doculects.push(doculect.clone());
        }
        forms.push(WordForm { id, doculect, concept: fields[cols.concept].to_string(), segments, cogid });
    }

    // members are the first form of each doculect in a set
    let mut members: BTreeMap<i64, BTreeMap<&str, u64>> = BTreeMap::new();
    for f in forms.iter().filter(|f| f.is_cognate_coded()) {
        members.entry(f.cogid).or_default().entry(&f.doculect).or_insert(f.id);
    }
    let mut alignments = BTreeMap::new();
    for (cogid, rows) in rows {
        let alignment = Alignment { cogid, rows };
        let complete = alignment.rows.len() >= 2
            && members[&cogid].values().all(|id| alignment.rows.iter().any(|r| r.form_id == *id));
        if complete && alignment.check_shape().is_ok() {
            alignments.insert(cogid, alignment);
        } else {
            warn!("cognate set {cogid}: provided alignment is incomplete or ragged, it will be recomputed");
        }
    }
    Ok(Wordlist::new(doculects, forms, alignments)?)
}

pub fn read_wordlist(path: &Path) -> Result<Wordlist, WordlistError> {
    let text = fs::read_to_string(path).map_err(|source| WordlistError::Io { path: path.to_path_buf(), source })?;
    parse_wordlist(&text)
}

fn join<'a>(tokens: impl Iterator<Item = &'a str>) -> String {
    tokens.collect::<Vec<_>>().join(" ")
}

/// Writes a wordlist in the format read by [`parse_wordlist`]. The ALIGNMENT
/// column is emitted only when the wordlist holds alignments.
pub fn serialize_wordlist(wl: &Wordlist) -> String {
    let with_alignment = !wl.alignments().is_empty();
    let mut rows: BTreeMap<u64, &AlignmentRow> = BTreeMap::new();
    for a in wl.alignments().values() {
        for r in &a.rows {
            rows.insert(r.form_id, r);
        }
    }
    let mut out = String::from("ID\tDOCULECT\tCONCEPT\tTOKENS\tCOGID");
    if with_alignment {
        out.push_str("\tALIGNMENT");
    }
    out.push('\n');
    for f in wl.forms() {
        let tokens = join(f.segments.iter().map(Segment::token));
        let _ = write!(out, "{}\t{}\t{}\t{}\t{}", f.id, f.doculect, f.concept, tokens, f.cogid);
        if with_alignment {
            out.push('\t');
            if let Some(r) = rows.get(&f.id) {
                out.push_str(&join(r.cells.iter().map(Cell::token)));
            }
        }
        out.push('\n');
    }
    out
}

/// Dataset selection thresholds. Both default to zero, which accepts everything.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DatasetFilter {
    pub min_doculects: usize,
    pub min_concepts: usize,
}

impl DatasetFilter {
    /// Describes why `wl` falls short, or `None` if it passes.
    pub fn reject_reason(&self, wl: &Wordlist) -> Option<String> {
        let concepts: BTreeSet<&str> = wl.forms().iter().map(|f| f.concept.as_str()).collect();
        if wl.doculects().len() < self.min_doculects {
            Some(format!("{} doculects, need {}", wl.doculects().len(), self.min_doculects))
        } else if concepts.len() < self.min_concepts {
            Some(format!("{} concepts, need {}", concepts.len(), self.min_concepts))
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEAD: &str = "ID\tDOCULECT\tCONCEPT\tTOKENS\tCOGID";

    #[test]
    fn minimal_row() {
        let wl = parse_wordlist(&format!("{HEAD}\n1\tL1\thand\tk a n\t7\n")).unwrap();
        assert_eq!(wl.forms().len(), 1);
        assert_eq!(wl.forms()[0].segments.len(), 3);
    }

    #[test]
    fn header_is_case_insensitive_and_crlf_is_accepted() {
        let text = "cogid\ttokens\tconcept\tdoculect\tid\r\n7\tk a n\thand\tL1\t1\r\n7\tk a\thand\tL2\t2\r\n";
        let wl = parse_wordlist(text).unwrap();
        assert_eq!(wl.doculects(), ["L1", "L2"]);
        assert_eq!(wl.form(2).unwrap().segments.len(), 2);
    }

    #[test]
    fn gap_padded_alignment() {
        let text = format!("{HEAD}\tALIGNMENT\n1\tL1\thand\tk a n\t7\tk a n -\n2\tL2\thand\tk a n a\t7\tk a n a\n");
        let wl = parse_wordlist(&text).unwrap();
        assert_eq!(wl.alignment(7).unwrap().row(1).unwrap().cells.len(), 4);
    }

    #[test]
    fn mismatched_alignment() {
        let text = format!("{HEAD}\tALIGNMENT\n1\tL1\thand\tk a n\t7\tk a m -\n");
        assert!(matches!(parse_wordlist(&text), Err(WordlistError::AlignmentMismatch { id: 1 })));
    }

    #[test]
    fn incomplete_alignment_is_dropped() {
        let text = format!("{HEAD}\tALIGNMENT\n1\tL1\thand\tk a n\t7\tk a n\n2\tL2\thand\tk a\t7\t\n");
        assert!(parse_wordlist(&text).unwrap().alignments().is_empty());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let line = |text: &str| match parse_wordlist(text) {
            Err(WordlistError::Parse { line, .. }) => line,
            other => panic!("{other:?}"),
        };
        assert_eq!(line("ID\tDOCULECT\tTOKENS\tCOGID\n"), 1);
        assert_eq!(line(""), 1);
        assert_eq!(line(&format!("{HEAD}\n1\tL1\thand\tk a n\t7\n2\tL1\thand\tk\n")), 3);
        assert_eq!(line(&format!("{HEAD}\n1\tL1\thand\t\t7\n")), 2);
        assert_eq!(line(&format!("{HEAD}\nx\tL1\thand\tk\t7\n")), 2);
        assert_eq!(line(&format!("{HEAD}\n1\tL1\thand\tk\t7.5\n")), 2);
        assert_eq!(line(&format!("{HEAD}\n1\tL1\thand\tk  a\t7\n")), 2);
        assert_eq!(line(&format!("{HEAD}\n1\tL1\thand\tk\t7\n1\tL2\thand\tk\t7\n")), 3);
    }

    #[test]
    fn non_cognate_rows_are_kept() {
        let wl = parse_wordlist(&format!("{HEAD}\n1\tL1\thand\tk a n\t0\n2\tL2\thand\tk a n\t-3\n")).unwrap();
        assert_eq!(wl.forms().len(), 2);
        assert!(wl.cognate_sets().is_empty());
    }

    #[test]
    fn serialize_round_trip() {
        let text = format!(
            "{HEAD}\tALIGNMENT\n1\tL1\thand\tk a n\t7\tk a n\n2\tL2\thand\tk a\t7\tk a -\n3\tL2\tfoot\tp e\t0\t\n"
        );
        let wl = parse_wordlist(&text).unwrap();
        assert_eq!(serialize_wordlist(&wl), text);
        assert_eq!(parse_wordlist(&serialize_wordlist(&wl)).unwrap(), wl);
    }

    #[test]
    fn filter_thresholds() {
        let wl = parse_wordlist(&format!("{HEAD}\n1\tL1\thand\tk a n\t7\n2\tL2\thand\tk a\t7\n")).unwrap();
        assert_eq!(DatasetFilter::default().reject_reason(&wl), None);
        assert!(DatasetFilter { min_doculects: 3, min_concepts: 0 }.reject_reason(&wl).is_some());
        assert!(DatasetFilter { min_doculects: 0, min_concepts: 2 }.reject_reason(&wl).is_some());
    }
}
