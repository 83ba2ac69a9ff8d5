//! Builders for the tables written by the command-line tool.

use std::collections::BTreeMap;

use corrpat_core::simulate::{Merger, Simulation};
use corrpat_core::{Cell, DetectionResult, PatternCollection, RegularityReport, Segment, SiteTable, Wordlist};

use crate::output::{Table, Value};

fn joined<'a>(tokens: impl Iterator<Item = &'a str>) -> String {
    tokens.collect::<Vec<_>>().join(" ")
}

/// The wordlist in input-file layout. With TSV output this is exactly the
/// text produced by [`crate::tsv::serialize_wordlist`].
pub fn wordlist_table(name: &str, wl: &Wordlist) -> Table {
    let with_alignment = !wl.alignments().is_empty();
    let mut cols = vec!["ID", "DOCULECT", "CONCEPT", "TOKENS", "COGID"];
    if with_alignment {
        cols.push("ALIGNMENT");
    }
    let mut rows: BTreeMap<u64, String> = BTreeMap::new();
    for a in wl.alignments().values() {
        for r in &a.rows {
            rows.insert(r.form_id, joined(r.cells.iter().map(Cell::token)));
        }
    }
    let mut t = Table::new(name, &cols);
    for f in wl.forms() {
        let mut row = vec![
            f.id.into(),
            f.doculect.as_str().into(),
            f.concept.as_str().into(),
            joined(f.segments.iter().map(Segment::token)).into(),
            f.cogid.into(),
        ];
        if with_alignment {
            row.push(rows.get(&f.id).cloned().map_or(Value::Text(String::new()), Value::Text));
        }
        t.push(row);
    }
    t
}

/// One row per pattern, unresolved doculects printed as "?", plus the site
/// assignment. Pattern ids start at 1.
pub fn pattern_tables(table: &SiteTable, pc: &PatternCollection) -> [Table; 2] {
    let mut cols = vec!["PATTERN_ID", "RECURRENCE"];
    cols.extend(table.doculects().iter().map(String::as_str));
    let mut patterns = Table::new("patterns", &cols);
    for (i, p) in pc.patterns.iter().enumerate() {
        let mut row = vec![Value::from(i + 1), p.recurrence().into()];
        row.extend(p.values.iter().map(|&e| Value::from(table.render(e, "?"))));
        patterns.push(row);
    }
    let mut sites = Table::new("sites", &["COGID", "COLUMN", "PATTERN_ID"]);
    for (id, &p) in &pc.assignment {
        sites.push(vec![id.cogid.into(), id.column.into(), (p + 1).into()]);
    }
    [patterns, sites]
}

pub fn regularity_tables(report: &RegularityReport) -> [Table; 2] {
    let mut cogsets = Table::new("cogsets", &["COGID", "N_SITES", "SCORE"]);
    for (cogid, c) in &report.per_cogset {
        cogsets.push(vec![(*cogid).into(), c.recurrences.len().into(), c.score.into()]);
    }
    let mut sites = Table::new("sites", &["COGID", "COLUMN", "RECURRENCE", "NORMALIZED_LOG"]);
    for s in &report.per_site {
        sites.push(vec![s.cogid.into(), s.column.into(), s.recurrence.into(), s.normalized_log.into()]);
    }
    [cogsets, sites]
}

pub fn score_table(report: &RegularityReport) -> Table {
    let mut t = Table::new("score", &["DATASET_SCORE", "TOTAL_SITES"]);
    t.push(vec![report.dataset_score.into(), report.total_sites.into()]);
    t
}

fn doculect_of(wl: &Wordlist, id: Option<u64>) -> Value {
    id.and_then(|id| wl.form(id)).map(|f| f.doculect.as_str()).into()
}

pub fn detection_table(wl: &Wordlist, results: &[DetectionResult]) -> Table {
    let mut t = Table::new("detect", &["COGID", "BASELINE", "BEST_FORM_ID", "BEST_DOCULECT", "GAIN"]);
    for r in results {
        t.push(vec![r.cogid.into(), r.baseline.into(), r.best.into(), doculect_of(wl, r.best), r.best_gain.into()]);
    }
    t
}

/// Long format: every member of every reported set with its gain.
pub fn gains_table(wl: &Wordlist, results: &[DetectionResult]) -> Table {
    let mut t = Table::new("gains", &["COGID", "FORM_ID", "DOCULECT", "GAIN", "IS_BEST"]);
    for r in results {
        for (&id, &gain) in &r.per_word {
            let best = usize::from(r.best == Some(id));
            t.push(vec![r.cogid.into(), id.into(), doculect_of(wl, Some(id)), gain.into(), best.into()]);
        }
    }
    t
}

pub fn merger_table(sim: &Simulation) -> Table {
    let mut t = Table::new("mergers", &["DOCULECT", "ORDER", "SOURCE", "TARGET"]);
    for (d, mergers) in sim.wordlist.doculects().iter().zip(&sim.mergers) {
        for (i, Merger { source, target }) in mergers.iter().enumerate() {
            t.push(vec![d.as_str().into(), (i + 1).into(), source.token().into(), target.token().into()]);
        }
    }
    t
}

pub fn truth_table(replaced: &BTreeMap<i64, u64>) -> Table {
    let mut t = Table::new("truth", &["COGID", "REPLACED_FORM_ID"]);
    for (&cogid, &id) in replaced {
        t.push(vec![cogid.into(), id.into()]);
    }
    t
}

pub fn noise_table<'a>(positions: impl IntoIterator<Item = &'a (u64, usize)>) -> Table {
    let mut t = Table::new("noise", &["FORM_ID", "POSITION"]);
    for &(id, pos) in positions {
        t.push(vec![id.into(), pos.into()]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::output::Format;
    use crate::tsv::{parse_wordlist, serialize_wordlist};
    use corrpat_core::alignment::complete_alignments;
    use corrpat_core::patterns::infer_patterns;

    const FIG: &str = "ID\tDOCULECT\tCONCEPT\tTOKENS\tCOGID\n\
        1\tL1\tA\tk a n\t1\n2\tL2\tA\tk a n\t1\n3\tL3\tA\tk o n\t1\n4\tL4\tA\tk a n\t1\n\
        5\tL1\tB\tk u n\t2\n6\tL2\tB\tk u n\t2\n7\tL3\tB\tk u n\t2\n\
        8\tL1\tC\tx i\t3\n9\tL2\tC\tk i\t3\n10\tL3\tC\tk e\t3\n11\tL4\tC\tk i\t3\n";

    #[test]
    fn wordlist_table_matches_serializer() {
        let wl = complete_alignments(&parse_wordlist(FIG).unwrap()).unwrap();
        assert_eq!(wordlist_table("w", &wl).render(Format::Tsv), serialize_wordlist(&wl));
        let plain = parse_wordlist(FIG).unwrap();
        assert_eq!(wordlist_table("w", &plain).render(Format::Tsv), serialize_wordlist(&plain));
    }

    #[test]
    fn unresolved_slots_print_as_question_marks() {
        let wl = parse_wordlist(FIG).unwrap();
        let table = SiteTable::from_wordlist(&wl);
        let pc = infer_patterns(table.sites());
        let [patterns, sites] = pattern_tables(&table, &pc);
        assert_eq!(sites.rows.len(), table.sites().len());
        let tsv = patterns.to_tsv();
        assert!(tsv.starts_with("PATTERN_ID\tRECURRENCE\tL1\tL2\tL3\tL4\n"));
        assert!(tsv.lines().any(|l| l.ends_with("\t2\tn\tn\tn\tn")), "{tsv}");
        assert!(tsv.lines().any(|l| l.ends_with("\t1\tu\tu\tu\t?")), "{tsv}");
    }
}
