//! Alignment sites and correspondence patterns.
//!
//! Every alignment column becomes a [`Site`]: a doculect-indexed vector of
//! sounds, gaps and missing entries. Sites are grouped into [`Pattern`]s by a
//! greedy clique cover over the compatibility relation, where two vectors are
//! compatible when they agree wherever both hold a concrete value. Gaps are
//! concrete; only missing entries act as wildcards.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::alignment::{cognate_alignments, Alignment, Cell};
use crate::wordlist::Wordlist;
use crate::{Error, Result};

/// Interned segment token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub u32);

/// One slot of a site or pattern vector. In a pattern, `Missing` means the
/// slot is unresolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Entry {
    Missing,
    Gap,
    Sound(Symbol),
}

impl Entry {
    pub fn is_concrete(self) -> bool {
        !matches!(self, Entry::Missing)
    }
}

/// Column `column` of the alignment of cognate set `cogid`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SiteId {
    pub cogid: i64,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Site {
    pub id: SiteId,
    pub values: Vec<Entry>,
}

impl Site {
    pub fn concrete_count(&self) -> usize {
        concrete_count(&self.values)
    }
}

pub fn concrete_count(values: &[Entry]) -> usize {
    values.iter().filter(|e| e.is_concrete()).count()
}

/// A word taking part in a cognate set's alignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Member {
    pub form_id: u64,
    pub doculect: usize,
}

/// The members and the slice of sites that belong to one cognate set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CogsetSites {
    pub cogid: i64,
    pub members: Vec<Member>,
    pub sites: Range<usize>,
}

/// All sites of a wordlist together with the symbol table they refer to.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteTable {
    doculects: Vec<String>,
    symbols: Vec<String>,
    symbol_index: BTreeMap<String, Symbol>,
    sites: Vec<Site>,
    cogsets: Vec<CogsetSites>,
}

/// What a pattern predicts for one doculect.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reflex<'a> {
    Sound(&'a str),
    Gap,
    Unknown,
}

impl SiteTable {
    /// Aligns every cognate set (provided alignments first) and extracts its sites.
    pub fn from_wordlist(wl: &Wordlist) -> SiteTable {
        Self::extract(wl, &cognate_alignments(wl))
    }

    /// One site per alignment column. Doculects without a row get `Missing`;
    /// a doculect with several rows contributes its first one.
    pub fn extract(wl: &Wordlist, alignments: &[Alignment]) -> SiteTable {
        let mut table = SiteTable {
            doculects: wl.doculects().to_vec(),
            symbols: Vec::new(),
            symbol_index: BTreeMap::new(),
            sites: Vec::new(),
            cogsets: Vec::new(),
        };
        let n = table.doculects.len();
        for alignment in alignments {
            let mut members: Vec<Member> = Vec::new();
            let mut rows: Vec<(usize, &[Cell])> = Vec::new();
            for row in &alignment.rows {
                let Some(doculect) = wl.form(row.form_id).and_then(|f| wl.doculect_index(&f.doculect)) else {
                    log::warn!("alignment row for unknown form {} ignored", row.form_id);
                    continue;
                };
                if members.iter().any(|m| m.doculect == doculect) {
                    log::warn!(
                        "cognate set {} has several rows for {}; using the first",
                        alignment.cogid,
                        table.doculects[doculect]
                    );
                    continue;
                }
                members.push(Member { form_id: row.form_id, doculect });
                rows.push((doculect, &row.cells));
            }
            let start = table.sites.len();
            for column in 0..alignment.width() {
                let mut values = vec![Entry::Missing; n];
                for &(doculect, cells) in &rows {
                    values[doculect] = match &cells[column] {
                        Cell::Gap => Entry::Gap,
                        Cell::Sound(s) => Entry::Sound(table.intern(s.token())),
                    };
                }
                table.sites.push(Site { id: SiteId { cogid: alignment.cogid, column }, values });
            }
            table.cogsets.push(CogsetSites {
                cogid: alignment.cogid,
                members,
                sites: start..table.sites.len(),
            });
        }
        table
    }

    pub fn intern(&mut self, token: &str) -> Symbol {
        if let Some(&s) = self.symbol_index.get(token) {
            return s;
        }
        let s = Symbol(self.symbols.len() as u32);
        self.symbols.push(token.to_string());
        self.symbol_index.insert(token.to_string(), s);
        s
    }

    pub fn symbol(&self, token: &str) -> Option<Symbol> {
        self.symbol_index.get(token).copied()
    }

    pub fn token(&self, symbol: Symbol) -> &str {
        &self.symbols[symbol.0 as usize]
    }

    pub fn doculects(&self) -> &[String] {
        &self.doculects
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn cogsets(&self) -> &[CogsetSites] {
        &self.cogsets
    }

    pub fn cogset(&self, cogid: i64) -> Option<&CogsetSites> {
        self.cogsets.iter().find(|c| c.cogid == cogid)
    }

    pub fn cogset_sites(&self, cogset: &CogsetSites) -> &[Site] {
        &self.sites[cogset.sites.clone()]
    }

    /// Renders one entry; `missing` is the text used for missing/unresolved slots.
    pub fn render<'a>(&'a self, entry: Entry, missing: &'a str) -> &'a str {
        match entry {
            Entry::Missing => missing,
            Entry::Gap => crate::segment::GAP,
            Entry::Sound(s) => self.token(s),
        }
    }

    /// The reflex a pattern predicts for `doculect`.
    pub fn predict_reflex(&self, pattern: &Pattern, doculect: &str) -> Result<Reflex<'_>> {
        let d = self
            .doculects
            .iter()
            .position(|x| x == doculect)
            .ok_or_else(|| Error::UnknownDoculect(doculect.to_string()))?;
        Ok(match pattern.values[d] {
            Entry::Missing => Reflex::Unknown,
            Entry::Gap => Reflex::Gap,
            Entry::Sound(s) => Reflex::Sound(self.token(s)),
        })
    }
}

/// Two sites (or a site and a pattern) are compatible when they agree on every
/// slot where both are concrete.
pub fn compatible(a: &[Entry], b: &[Entry]) -> bool {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).all(|(x, y)| match (x, y) {
        (Entry::Missing, _) | (_, Entry::Missing) => true,
        _ => x == y,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    pub values: Vec<Entry>,
    /// Assigned sites, in ascending id order.
    pub sites: Vec<SiteId>,
}

impl Pattern {
    pub fn recurrence(&self) -> usize {
        self.sites.len()
    }

    pub fn reflex(&self, doculect: usize) -> Entry {
        self.values[doculect]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternCollection {
    pub patterns: Vec<Pattern>,
    pub assignment: BTreeMap<SiteId, usize>,
    pub total_sites: usize,
    /// Refinement passes run before the cover stabilized.
    pub refinement_passes: usize,
}

impl PatternCollection {
    pub fn pattern_of(&self, site: SiteId) -> Option<&Pattern> {
        self.assignment.get(&site).map(|&i| &self.patterns[i])
    }

    pub fn largest_recurrence(&self) -> usize {
        self.patterns.iter().map(Pattern::recurrence).max().unwrap_or(0)
    }
}

/// Maximum number of refinement passes after the initial greedy cover.
pub const MAX_REFINEMENT_PASSES: usize = 10;

fn fuse(into: &mut [Entry], from: &[Entry]) {
    for (slot, &v) in into.iter_mut().zip(from) {
        if *slot == Entry::Missing {
            *slot = v;
        }
    }
}

/// Greedy clique cover of the site compatibility graph.
///
/// Sites are visited from most to least concrete (ties by id). Each joins the
/// first compatible pattern, filling its unresolved slots, or opens a new one.
/// Refinement passes then move a site to the largest compatible pattern when
/// that pattern is strictly larger than the site's own, until nothing moves.
pub fn infer_patterns(sites: &[Site]) -> PatternCollection {
    let mut order: Vec<usize> = (0..sites.len()).collect();
    order.sort_by(|&a, &b| {
        sites[b]
            .concrete_count()
            .cmp(&sites[a].concrete_count())
            .then(sites[a].id.cmp(&sites[b].id))
    });

    let mut values: Vec<Vec<Entry>> = Vec::new();
    let mut sizes: Vec<usize> = Vec::new();
    let mut assign = vec![usize::MAX; sites.len()];

    for &s in &order {
        let site = &sites[s].values;
        match values.iter().position(|p| compatible(site, p)) {
            Some(p) => {
                fuse(&mut values[p], site);
                sizes[p] += 1;
                assign[s] = p;
            }
            None => {
                assign[s] = values.len();
                values.push(site.clone());
                sizes.push(1);
            }
        }
    }

    let mut passes = 0;
    while passes < MAX_REFINEMENT_PASSES {
        passes += 1;
        let mut moved = false;
        for &s in &order {
            let own = assign[s];
            let site = &sites[s].values;
            let mut best: Option<usize> = None;
            for (p, pv) in values.iter().enumerate() {
                if p == own || sizes[p] == 0 || !compatible(site, pv) {
                    continue;
                }
                if best.is_none_or(|b| sizes[p] > sizes[b]) {
                    best = Some(p);
                }
            }
            if let Some(b) = best.filter(|&b| sizes[b] > sizes[own]) {
                sizes[own] -= 1;
                sizes[b] += 1;
                fuse(&mut values[b], site);
                assign[s] = b;
                moved = true;
            }
        }
        // drop emptied patterns and rebuild value vectors from the members
        let mut remap = vec![usize::MAX; sizes.len()];
        let mut next = 0;
        for (p, &size) in sizes.iter().enumerate() {
            if size > 0 {
                remap[p] = next;
                next += 1;
            }
        }
        let width = sites.first().map_or(0, |s| s.values.len());
        values = vec![vec![Entry::Missing; width]; next];
        sizes = vec![0; next];
        for &s in &order {
            let p = remap[assign[s]];
            assign[s] = p;
            fuse(&mut values[p], &sites[s].values);
            sizes[p] += 1;
        }
        if !moved {
            break;
        }
    }

    let mut members: Vec<Vec<SiteId>> = vec![Vec::new(); values.len()];
    let mut assignment = BTreeMap::new();
    for (s, &p) in assign.iter().enumerate() {
        members[p].push(sites[s].id);
        assignment.insert(sites[s].id, p);
    }
    let patterns = values
        .into_iter()
        .zip(members)
        .map(|(values, mut sites)| {
            sites.sort_unstable();
            Pattern { values, sites }
        })
        .collect();
    PatternCollection { patterns, assignment, total_sites: sites.len(), refinement_passes: passes }
}

/// Recurrence of the largest pattern compatible with `values`, or 1 if none is.
pub fn site_recurrence(values: &[Entry], pc: &PatternCollection) -> usize {
    pc.patterns
        .iter()
        .filter(|p| compatible(values, &p.values))
        .map(Pattern::recurrence)
        .max()
        .unwrap_or(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    const K: Entry = Entry::Sound(Symbol(0));
    const X: Entry = Entry::Sound(Symbol(1));
    const N: Entry = Entry::Sound(Symbol(2));
    const M: Entry = Entry::Missing;

    fn site(cogid: i64, column: usize, values: &[Entry]) -> Site {
        Site { id: SiteId { cogid, column }, values: values.to_vec() }
    }

    #[test]
    fn wildcards_match_anything() {
        assert!(compatible(&[K, K, K, K], &[K, K, K, M]));
        assert!(!compatible(&[X, K, K, K], &[K, K, K, K]));
        assert!(compatible(&[M, M, M, K], &[X, N, K, M]));
        assert!(!compatible(&[M, M, M, K], &[X, N, K, Entry::Gap]));
        assert!(!compatible(&[Entry::Gap, K], &[K, K]));
    }

    #[test]
    fn identical_sites_form_one_pattern() {
        let sites: Vec<Site> = (0..5).map(|c| site(1, c, &[K, N, X])).collect();
        let pc = infer_patterns(&sites);
        assert_eq!(pc.patterns.len(), 1);
        assert_eq!(pc.patterns[0].recurrence(), 5);
    }

    #[test]
    fn unresolved_slot_is_filled_by_fusion() {
        let sites = vec![site(1, 0, &[K, K, M]), site(2, 0, &[K, M, N])];
        let pc = infer_patterns(&sites);
        assert_eq!(pc.patterns.len(), 1);
        assert_eq!(pc.patterns[0].values, vec![K, K, N]);
    }

    #[test]
    fn refinement_moves_sites_to_bigger_patterns() {
        // (M,M,X) first lands in the pattern opened by (K,M,X)
        let sites = vec![
            site(1, 0, &[K, N, M]),
            site(2, 0, &[K, M, X]),
            site(3, 0, &[M, N, X]),
            site(4, 0, &[M, N, X]),
            site(5, 0, &[M, N, X]),
            site(6, 0, &[M, M, X]),
        ];
        let pc = infer_patterns(&sites);
        for p in &pc.patterns {
            for a in &p.sites {
                for b in &p.sites {
                    let va = &sites.iter().find(|s| s.id == *a).unwrap().values;
                    let vb = &sites.iter().find(|s| s.id == *b).unwrap().values;
                    assert!(compatible(va, vb));
                }
            }
        }
        assert_eq!(pc.assignment.len(), sites.len());
        assert!(pc.refinement_passes <= 3);
    }

    #[test]
    fn recurrence_floor() {
        let pc = infer_patterns(&[site(1, 0, &[K, K]), site(1, 1, &[N, N])]);
        assert_eq!(site_recurrence(&[X, X], &pc), 1);
        assert_eq!(site_recurrence(&[M, K], &pc), 1);
    }
}
