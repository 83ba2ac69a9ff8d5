//! Comparative wordlists: word forms, cognate grouping, doculect subsampling and
//! per-doculect segment inventories.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::alignment::{Alignment, Cell};
use crate::segment::{Klass, Segment};
use crate::{Error, Result};

/// One lexical entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordForm {
    pub id: u64,
    pub doculect: String,
    pub concept: String,
    pub segments: Vec<Segment>,
    /// Cognate set id; values `<= 0` mark forms without cognate coding.
    pub cogid: i64,
}

impl WordForm {
    pub fn is_cognate_coded(&self) -> bool {
        self.cogid > 0
    }
}

/// The members of one cognate set, ordered by doculect.
#[derive(Debug, Clone, PartialEq)]
pub struct CognateSet<'a> {
    pub cogid: i64,
    pub members: Vec<&'a WordForm>,
}

/// Consonants and vowels attested for one doculect. Tones and markers are left out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inventory {
    pub doculect: String,
    pub consonants: BTreeSet<Segment>,
    pub vowels: BTreeSet<Segment>,
}

impl Inventory {
    /// The phones of the given class, or `None` for tones and markers.
    pub fn phones(&self, klass: Klass) -> Option<&BTreeSet<Segment>> {
        match klass {
            Klass::Consonant => Some(&self.consonants),
            Klass::Vowel => Some(&self.vowels),
            Klass::Tone | Klass::Marker => None,
        }
    }
}

/// A validated comparative wordlist. Immutable once built, apart from the
/// crate-internal segment rewriting used by the simulator.
#[derive(Debug, Clone, PartialEq)]
pub struct Wordlist {
    doculects: Vec<String>,
    doculect_index: BTreeMap<String, usize>,
    forms: Vec<WordForm>,
    alignments: BTreeMap<i64, Alignment>,
}

impl Wordlist {
    pub fn new(
        doculects: Vec<String>,
        forms: Vec<WordForm>,
        alignments: BTreeMap<i64, Alignment>,
    ) -> Result<Self> {
        let mut doculect_index = BTreeMap::new();
        for (i, d) in doculects.iter().enumerate() {
            if doculect_index.insert(d.clone(), i).is_some() {
                return Err(Error::InvalidConfig("doculect listed twice"));
            }
        }
        let mut ids = BTreeSet::new();
        for form in &forms {
            if !doculect_index.contains_key(&form.doculect) {
                return Err(Error::UnknownDoculect(form.doculect.clone()));
            }
            if form.segments.is_empty() {
                return Err(Error::EmptyForm { id: form.id });
            }
            if !ids.insert(form.id) {
                return Err(Error::DuplicateId(form.id));
            }
        }
        let mut wl = Wordlist { doculects, doculect_index, forms, alignments };
        for (cogid, alignment) in &wl.alignments {
            if alignment.cogid != *cogid {
                return Err(Error::MalformedAlignment { cogid: *cogid, reason: "keyed under another cogid" });
            }
            wl.check_alignment(alignment)?;
        }
        // rows in doculect order, then form order
        let rank: BTreeMap<u64, (usize, usize)> =
            wl.forms.iter().enumerate().map(|(i, f)| (f.id, (wl.doculect_index[&f.doculect], i))).collect();
        for alignment in wl.alignments.values_mut() {
            alignment.rows.sort_by_key(|r| rank[&r.form_id]);
        }
        Ok(wl)
    }

    /// Builds a wordlist whose doculect order is the order of first appearance.
    pub fn from_forms(forms: Vec<WordForm>) -> Result<Self> {
        let mut doculects: Vec<String> = Vec::new();
        for form in &forms {
            if !doculects.contains(&form.doculect) {
                doculects.push(form.doculect.clone());
            }
        }
        Wordlist::new(doculects, forms, BTreeMap::new())
    }

    fn check_alignment(&self, alignment: &Alignment) -> Result<()> {
        alignment.check_shape()?;
        if alignment.rows.len() < 2 {
            return Err(Error::MalformedAlignment { cogid: alignment.cogid, reason: "fewer than two rows" });
        }
        for row in &alignment.rows {
            let form = self
                .form(row.form_id)
                .ok_or(Error::MalformedAlignment { cogid: alignment.cogid, reason: "row for unknown form" })?;
            if form.cogid != alignment.cogid {
                return Err(Error::MalformedAlignment { cogid: alignment.cogid, reason: "row from another cognate set" });
            }
            if !row.reproduces(&form.segments) {
                return Err(Error::AlignmentMismatch { id: form.id });
            }
        }
        Ok(())
    }

    pub fn doculects(&self) -> &[String] {
        &self.doculects
    }

    pub fn doculect_index(&self, doculect: &str) -> Option<usize> {
        self.doculect_index.get(doculect).copied()
    }

    pub fn forms(&self) -> &[WordForm] {
        &self.forms
    }

    pub fn form(&self, id: u64) -> Option<&WordForm> {
        self.forms.iter().find(|f| f.id == id)
    }

    pub fn alignments(&self) -> &BTreeMap<i64, Alignment> {
        &self.alignments
    }

    pub fn alignment(&self, cogid: i64) -> Option<&Alignment> {
        self.alignments.get(&cogid)
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    /// Cognate sets with at least two members, by ascending cogid.
    ///
    /// A doculect contributes at most one word per set; later doublets are
    /// skipped with a warning.
    pub fn cognate_sets(&self) -> Vec<CognateSet<'_>> {
        let mut groups: BTreeMap<i64, Vec<&WordForm>> = BTreeMap::new();
        for form in self.forms.iter().filter(|f| f.is_cognate_coded()) {
            let members = groups.entry(form.cogid).or_default();
            if members.iter().any(|m| m.doculect == form.doculect) {
                log::warn!(
                    "cognate set {} has several forms for {}; keeping the first, skipping form {}",
                    form.cogid,
                    form.doculect,
                    form.id
                );
                continue;
            }
            members.push(form);
        }
        groups
            .into_iter()
            .filter(|(_, members)| members.len() >= 2)
            .map(|(cogid, mut members)| {
                members.sort_by_key(|m| self.doculect_index[&m.doculect]);
                CognateSet { cogid, members }
            })
            .collect()
    }

    /// Keeps `k` doculects drawn uniformly without replacement. The original
    /// doculect order is preserved.
    pub fn subsample(&self, k: usize, seed: u64) -> Result<Wordlist> {
        let n = self.doculects.len();
        if k == 0 || k > n {
            return Err(Error::InvalidSample { requested: k, available: n });
        }
        let mut picked: Vec<usize> = if k == n {
            (0..n).collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            index::sample(&mut rng, n, k).into_vec()
        };
        picked.sort_unstable();
        let doculects: Vec<String> = picked.iter().map(|&i| self.doculects[i].clone()).collect();
        self.restrict(doculects)
    }

    /// Projection onto the given doculects. Alignments lose the rows of
    /// dropped forms and any column left without a sound.
    pub fn restrict(&self, doculects: Vec<String>) -> Result<Wordlist> {
        let keep: BTreeSet<&str> = doculects.iter().map(String::as_str).collect();
        let forms: Vec<WordForm> =
            self.forms.iter().filter(|f| keep.contains(f.doculect.as_str())).cloned().collect();
        let ids: BTreeSet<u64> = forms.iter().map(|f| f.id).collect();
        let alignments = self
            .alignments
            .iter()
            .filter_map(|(&cogid, a)| a.restrict(&ids).map(|a| (cogid, a)))
            .collect();
        Wordlist::new(doculects, forms, alignments)
    }

    pub fn inventory(&self, doculect: &str) -> Result<Inventory> {
        if !self.doculect_index.contains_key(doculect) {
            return Err(Error::UnknownDoculect(doculect.to_string()));
        }
        let mut inv = Inventory {
            doculect: doculect.to_string(),
            consonants: BTreeSet::new(),
            vowels: BTreeSet::new(),
        };
        for seg in self.forms.iter().filter(|f| f.doculect == doculect).flat_map(|f| &f.segments) {
            match seg.klass() {
                Klass::Consonant => inv.consonants.insert(seg.clone()),
                Klass::Vowel => inv.vowels.insert(seg.clone()),
                Klass::Tone | Klass::Marker => false,
            };
        }
        Ok(inv)
    }

    /// Inventories for every doculect, in doculect order.
    pub fn inventories(&self) -> Vec<Inventory> {
        self.doculects.iter().map(|d| self.inventory(d).expect("listed doculect")).collect()
    }

    pub fn total_segments(&self) -> usize {
        self.forms.iter().map(|f| f.segments.len()).sum()
    }

    /// Rewrites one segment of the form at `form_idx`, keeping its alignment row in step.
    pub(crate) fn set_segment(&mut self, form_idx: usize, seg_idx: usize, segment: Segment) {
        let form = &mut self.forms[form_idx];
        form.segments[seg_idx] = segment.clone();
        let (id, cogid) = (form.id, form.cogid);
        if let Some(row) = self
            .alignments
            .get_mut(&cogid)
            .and_then(|a| a.rows.iter_mut().find(|r| r.form_id == id))
        {
            if let Some(cell) = row.cells.iter_mut().filter(|c| matches!(c, Cell::Sound(_))).nth(seg_idx) {
                *cell = Cell::Sound(segment);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn form(id: u64, doculect: &str, tokens: &str, cogid: i64) -> WordForm {
        WordForm {
            id,
            doculect: doculect.into(),
            concept: "c".into(),
            segments: tokens.split(' ').map(|t| Segment::new(t).unwrap()).collect(),
            cogid,
        }
    }

    #[test]
    fn singletons_are_not_cognate_sets() {
        let wl = Wordlist::from_forms(vec![
            form(1, "A", "k a", 5),
            form(2, "B", "k a", 5),
            form(3, "C", "g a", 5),
            form(4, "A", "m a", 6),
            form(5, "B", "m a", 0),
        ])
        .unwrap();
        let sets = wl.cognate_sets();
        assert_eq!(sets.len(), 1);
        assert_eq!(sets[0].cogid, 5);
        assert_eq!(sets[0].members.len(), 3);
    }

    #[test]
    fn empty_wordlist_has_no_sets() {
        let wl = Wordlist::from_forms(vec![]).unwrap();
        assert!(wl.cognate_sets().is_empty());
    }

    #[test]
    fn members_follow_doculect_order_and_doublets_keep_first() {
        let wl = Wordlist::new(
            vec!["A".into(), "B".into()],
            vec![form(1, "B", "k a", 5), form(2, "A", "k a", 5), form(3, "B", "g a", 5)],
            BTreeMap::new(),
        )
        .unwrap();
        let sets = wl.cognate_sets();
        let ids: Vec<u64> = sets[0].members.iter().map(|m| m.id).collect();
        assert_eq!(ids, vec![2, 1]);
    }

    #[test]
    fn inventory_partitions_by_class() {
        let wl = Wordlist::from_forms(vec![form(1, "A", "k a n", 1), form(2, "A", "r a l e", 2)]).unwrap();
        let inv = wl.inventory("A").unwrap();
        let cons: Vec<&str> = inv.consonants.iter().map(|s| s.token()).collect();
        let vows: Vec<&str> = inv.vowels.iter().map(|s| s.token()).collect();
        assert_eq!(cons, vec!["k", "l", "n", "r"]);
        assert_eq!(vows, vec!["a", "e"]);
    }

    #[test]
    fn inventory_of_single_vowel_and_tones() {
        let wl = Wordlist::from_forms(vec![form(1, "A", "a", 1), form(2, "B", "m a ⁵⁵", 1)]).unwrap();
        let inv = wl.inventory("A").unwrap();
        assert!(inv.consonants.is_empty());
        assert_eq!(inv.vowels.len(), 1);
        let inv = wl.inventory("B").unwrap();
        assert_eq!(inv.consonants.len() + inv.vowels.len(), 2);
        assert!(matches!(wl.inventory("Z"), Err(Error::UnknownDoculect(_))));
    }

    #[test]
    fn subsample_identity_and_bounds() {
        let wl = Wordlist::from_forms(vec![form(1, "A", "a", 1), form(2, "B", "a", 1), form(3, "C", "a", 1)]).unwrap();
        assert_eq!(wl.subsample(3, 9).unwrap().doculects(), wl.doculects());
        assert!(matches!(wl.subsample(4, 9), Err(Error::InvalidSample { .. })));
        assert!(matches!(wl.subsample(0, 9), Err(Error::InvalidSample { .. })));
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            Wordlist::new(vec!["A".into()], vec![form(1, "B", "a", 1)], BTreeMap::new()),
            Err(Error::UnknownDoculect(_))
        ));
        assert!(matches!(
            Wordlist::from_forms(vec![form(1, "A", "a", 1), form(1, "B", "a", 1)]),
            Err(Error::DuplicateId(1))
        ));
        let mut empty = form(1, "A", "a", 1);
        empty.segments.clear();
        assert!(matches!(Wordlist::from_forms(vec![empty]), Err(Error::EmptyForm { id: 1 })));
    }
}
