//! Phonetic alignment of cognate sets.
//!
//! Pairwise alignment is a global dynamic program over a class-based scorer;
//! multiple alignment merges sequences one at a time into a profile, aligning
//! each new sequence against the profile's per-column consensus.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::segment::Segment;
use crate::wordlist::{WordForm, Wordlist};
use crate::{Error, Result};

const IDENTICAL: i32 = 2;
const SAME_CLASS: i32 = 1;
const DIFFERENT_CLASS: i32 = -2;
const GAP_PENALTY: i32 = -1;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Cell {
    Sound(Segment),
    Gap,
}

impl Cell {
    pub fn token(&self) -> &str {
        match self {
            Cell::Sound(s) => s.token(),
            Cell::Gap => crate::segment::GAP,
        }
    }

    pub fn is_gap(&self) -> bool {
        matches!(self, Cell::Gap)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignmentRow {
    pub form_id: u64,
    pub cells: Vec<Cell>,
}

impl AlignmentRow {
    /// True when removing the gaps yields exactly `segments`.
    pub fn reproduces(&self, segments: &[Segment]) -> bool {
        let mut sounds = self.cells.iter().filter_map(|c| match c {
            Cell::Sound(s) => Some(s),
            Cell::Gap => None,
        });
        segments.iter().all(|s| sounds.next() == Some(s)) && sounds.next().is_none()
    }
}

/// Matrix view of one cognate set: one row per word form, one column per site.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alignment {
    pub cogid: i64,
    pub rows: Vec<AlignmentRow>,
}

impl Alignment {
    pub fn width(&self) -> usize {
        self.rows.first().map_or(0, |r| r.cells.len())
    }

    pub fn row(&self, form_id: u64) -> Option<&AlignmentRow> {
        self.rows.iter().find(|r| r.form_id == form_id)
    }

    /// Rows share one width of at least one column, and no column is all gaps.
    pub fn check_shape(&self) -> Result<()> {
        let width = self.width();
        let malformed = |reason| Error::MalformedAlignment { cogid: self.cogid, reason };
        if width == 0 {
            return Err(malformed("empty alignment"));
        }
        if self.rows.iter().any(|r| r.cells.len() != width) {
            return Err(malformed("rows differ in width"));
        }
        if (0..width).any(|c| self.rows.iter().all(|r| r.cells[c].is_gap())) {
            return Err(malformed("all-gap column"));
        }
        Ok(())
    }

    /// Keeps the rows of the listed forms and drops columns that become all gaps.
    /// Returns `None` when fewer than two rows survive.
    pub fn restrict(&self, form_ids: &BTreeSet<u64>) -> Option<Alignment> {
        let rows: Vec<AlignmentRow> =
            self.rows.iter().filter(|r| form_ids.contains(&r.form_id)).cloned().collect();
        if rows.len() < 2 {
            return None;
        }
        let mut a = Alignment { cogid: self.cogid, rows };
        a.drop_gap_columns();
        Some(a)
    }

    pub(crate) fn drop_gap_columns(&mut self) {
        let width = self.width();
        let keep: Vec<bool> =
            (0..width).map(|c| self.rows.iter().any(|r| !r.cells[c].is_gap())).collect();
        for row in &mut self.rows {
            let mut col = 0;
            row.cells.retain(|_| {
                col += 1;
                keep[col - 1]
            });
        }
    }
}

/// One step of a pairwise alignment path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlignOp {
    /// `x[i]` against `y[j]`.
    Pair(usize, usize),
    /// `x[i]` against a gap in `y`.
    GapInY(usize),
    /// A gap in `x` against `y[j]`.
    GapInX(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairwiseAlignment {
    pub ops: Vec<AlignOp>,
    pub score: i32,
}

impl PairwiseAlignment {
    pub fn aligned_x(&self, x: &[Segment]) -> Vec<Cell> {
        self.ops
            .iter()
            .map(|op| match *op {
                AlignOp::Pair(i, _) | AlignOp::GapInY(i) => Cell::Sound(x[i].clone()),
                AlignOp::GapInX(_) => Cell::Gap,
            })
            .collect()
    }

    pub fn aligned_y(&self, y: &[Segment]) -> Vec<Cell> {
        self.ops
            .iter()
            .map(|op| match *op {
                AlignOp::Pair(_, j) | AlignOp::GapInX(j) => Cell::Sound(y[j].clone()),
                AlignOp::GapInY(_) => Cell::Gap,
            })
            .collect()
    }
}

/// Score of aligning two segments against each other.
pub fn pair_score(a: &Segment, b: &Segment) -> i32 {
    if a == b {
        IDENTICAL
    } else if a.klass() == b.klass() {
        SAME_CLASS
    } else {
        DIFFERENT_CLASS
    }
}

/// Score of a single gap cell.
pub const fn gap_score() -> i32 {
    GAP_PENALTY
}

/// Global alignment maximizing the summed cell scores.
///
/// Traceback prefers a pair over a gap in `y` over a gap in `x`, which makes
/// the result unique for a given input.
pub fn pairwise_align(x: &[Segment], y: &[Segment]) -> PairwiseAlignment {
    let (n, m) = (x.len(), y.len());
    let mut dp = vec![vec![0i32; m + 1]; n + 1];
    for i in 1..=n {
        dp[i][0] = dp[i - 1][0] + GAP_PENALTY;
    }
    for j in 1..=m {
        dp[0][j] = dp[0][j - 1] + GAP_PENALTY;
    }
    for i in 1..=n {
        for j in 1..=m {
            let diag = dp[i - 1][j - 1] + pair_score(&x[i - 1], &y[j - 1]);
            let up = dp[i - 1][j] + GAP_PENALTY;
            let left = dp[i][j - 1] + GAP_PENALTY;
            dp[i][j] = diag.max(up).max(left);
        }
    }

    let mut ops = Vec::with_capacity(n + m);
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        if i > 0 && j > 0 && dp[i][j] == dp[i - 1][j - 1] + pair_score(&x[i - 1], &y[j - 1]) {
            ops.push(AlignOp::Pair(i - 1, j - 1));
            i -= 1;
            j -= 1;
        } else if i > 0 && dp[i][j] == dp[i - 1][j] + GAP_PENALTY {
            ops.push(AlignOp::GapInY(i - 1));
            i -= 1;
        } else {
            ops.push(AlignOp::GapInX(j - 1));
            j -= 1;
        }
    }
    ops.reverse();
    PairwiseAlignment { ops, score: dp[n][m] }
}

/// Most frequent sound of each profile column; ties go to the earliest row.
fn consensus(profile: &[Vec<Cell>]) -> Vec<Segment> {
    let width = profile.first().map_or(0, Vec::len);
    (0..width)
        .map(|c| {
            let mut counts: Vec<(&Segment, usize)> = Vec::new();
            for row in profile {
                if let Cell::Sound(s) = &row[c] {
                    match counts.iter_mut().find(|(seg, _)| *seg == s) {
                        Some((_, n)) => *n += 1,
                        None => counts.push((s, 1)),
                    }
                }
            }
            let mut best = counts[0];
            for &(s, n) in &counts[1..] {
                if n > best.1 {
                    best = (s, n);
                }
            }
            best.0.clone()
        })
        .collect()
}

/// Progressive multiple alignment of the members of one cognate set.
///
/// Members are first put in doculect order (then by id) so the result does not
/// depend on the order they are passed in. The guide order is by summed
/// pairwise score, most similar first.
pub fn progressive_align(cogid: i64, members: &[&WordForm], doculects: &[String]) -> Alignment {
    let rank = |d: &str| doculects.iter().position(|x| x == d).unwrap_or(usize::MAX);
    let mut sorted: Vec<&WordForm> = members.to_vec();
    sorted.sort_by_key(|f| (rank(&f.doculect), f.id));
    let n = sorted.len();

    let mut totals = vec![0i64; n];
    for a in 0..n {
        for b in a + 1..n {
            let s = i64::from(pairwise_align(&sorted[a].segments, &sorted[b].segments).score);
            totals[a] += s;
            totals[b] += s;
        }
    }
    let mut guide: Vec<usize> = (0..n).collect();
    guide.sort_by(|&a, &b| totals[b].cmp(&totals[a]).then(a.cmp(&b)));

    // profile rows are indexed by position in `sorted`
    let mut profile: Vec<Option<Vec<Cell>>> = vec![None; n];
    let first = guide[0];
    profile[first] = Some(sorted[first].segments.iter().cloned().map(Cell::Sound).collect());
    let mut width = sorted[first].segments.len();

    for &next in &guide[1..] {
        let present: Vec<Vec<Cell>> = profile.iter().flatten().cloned().collect();
        let cons = consensus(&present);
        let seq = &sorted[next].segments;
        let path = pairwise_align(seq, &cons);

        let mut new_row = Vec::with_capacity(path.ops.len());
        let mut inserted = Vec::new(); // positions (in the new width) of fresh columns
        for (pos, op) in path.ops.iter().enumerate() {
            match *op {
                AlignOp::Pair(i, _) => new_row.push(Cell::Sound(seq[i].clone())),
                AlignOp::GapInY(i) => {
                    new_row.push(Cell::Sound(seq[i].clone()));
                    inserted.push(pos);
                }
                AlignOp::GapInX(_) => new_row.push(Cell::Gap),
            }
        }
        for row in profile.iter_mut().flatten() {
            for &pos in &inserted {
                row.insert(pos, Cell::Gap);
            }
        }
        width += inserted.len();
        debug_assert_eq!(new_row.len(), width);
        profile[next] = Some(new_row);
    }

    let rows = sorted
        .iter()
        .zip(profile)
        .map(|(f, cells)| AlignmentRow { form_id: f.id, cells: cells.expect("every member merged") })
        .collect();
    let mut alignment = Alignment { cogid, rows };
    alignment.drop_gap_columns();
    alignment
}

/// One alignment per cognate set of the wordlist.
///
/// A provided alignment is used when it has a row for every member; otherwise
/// the set is aligned from scratch.
pub fn cognate_alignments(wl: &Wordlist) -> Vec<Alignment> {
    wl.cognate_sets()
        .into_iter()
        .map(|set| {
            let ids: BTreeSet<u64> = set.members.iter().map(|m| m.id).collect();
            if let Some(given) = wl.alignment(set.cogid) {
                if ids.iter().all(|id| given.row(*id).is_some()) {
                    if let Some(mut a) = given.restrict(&ids) {
                        a.rows.sort_by_key(|r| set.members.iter().position(|m| m.id == r.form_id));
                        return a;
                    }
                }
                log::warn!("alignment for cognate set {} is incomplete; realigning", set.cogid);
            }
            progressive_align(set.cogid, &set.members, wl.doculects())
        })
        .collect()
}

/// The wordlist with an alignment stored for every cognate set, so later
/// edits (subsampling, injections) reuse the alignment shape instead of
/// realigning perturbed forms.
pub fn complete_alignments(wl: &Wordlist) -> Result<Wordlist> {
    let alignments = cognate_alignments(wl).into_iter().map(|a| (a.cogid, a)).collect();
    Wordlist::new(wl.doculects().to_vec(), wl.forms().to_vec(), alignments)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn segs(s: &str) -> Vec<Segment> {
        s.split(' ').map(|t| Segment::new(t).unwrap()).collect()
    }

    fn tokens(cells: &[Cell]) -> String {
        cells.iter().map(Cell::token).collect::<Vec<_>>().join(" ")
    }

    fn wf(id: u64, doculect: &str, s: &str) -> WordForm {
        WordForm { id, doculect: doculect.to_string(), concept: "x".into(), segments: segs(s), cogid: 1 }
    }

    #[test]
    fn identity_alignment() {
        let x = segs("k a n");
        let p = pairwise_align(&x, &x);
        assert_eq!(p.score, 6);
        assert!(p.ops.iter().all(|op| matches!(op, AlignOp::Pair(..))));
    }

    #[test]
    fn trailing_gap() {
        let (x, y) = (segs("k a n"), segs("k a"));
        let p = pairwise_align(&x, &y);
        assert_eq!(p.score, 3);
        assert_eq!(tokens(&p.aligned_x(&x)), "k a n");
        assert_eq!(tokens(&p.aligned_y(&y)), "k a -");
    }

    #[test]
    fn vowel_mismatch_is_same_class() {
        let (x, y) = (segs("r a l e"), segs("r a l a"));
        let p = pairwise_align(&x, &y);
        assert_eq!(p.score, 7);
        assert_eq!(tokens(&p.aligned_y(&y)), "r a l a");
    }

    #[test]
    fn two_identical_forms() {
        let a = wf(1, "A", "t a k i");
        let b = wf(2, "B", "t a k i");
        let al = progressive_align(1, &[&a, &b], &["A".into(), "B".into()]);
        assert_eq!(al.width(), 4);
        assert_eq!(al.rows[0].cells, al.rows[1].cells);
    }

    #[test]
    fn kan_kana() {
        let a = wf(1, "A", "k a n");
        let b = wf(2, "B", "k a n a");
        let al = progressive_align(1, &[&b, &a], &["A".into(), "B".into()]);
        assert_eq!(al.width(), 4);
        assert_eq!(al.rows[0].form_id, 1);
        assert_eq!(tokens(&al.rows[0].cells), "k a n -");
        assert_eq!(tokens(&al.rows[1].cells), "k a n a");
    }

    #[test]
    fn restrict_drops_emptied_columns() {
        let a = wf(1, "A", "k a n a");
        let b = wf(2, "B", "k a n");
        let c = wf(3, "C", "k a n");
        let al = progressive_align(1, &[&a, &b, &c], &["A".into(), "B".into(), "C".into()]);
        assert_eq!(al.width(), 4);
        let ids: BTreeSet<u64> = [2, 3].into_iter().collect();
        let r = al.restrict(&ids).unwrap();
        assert_eq!(r.width(), 3);
        r.check_shape().unwrap();
        assert!(al.restrict(&[2].into_iter().collect()).is_none());
    }

    #[test]
    fn shape_check() {
        let bad = Alignment {
            cogid: 3,
            rows: vec![
                AlignmentRow { form_id: 1, cells: vec![Cell::Gap, Cell::Sound(Segment::new("a").unwrap())] },
                AlignmentRow { form_id: 2, cells: vec![Cell::Gap, Cell::Sound(Segment::new("a").unwrap())] },
            ],
        };
        assert!(matches!(bad.check_shape(), Err(Error::MalformedAlignment { cogid: 3, .. })));
    }
}
