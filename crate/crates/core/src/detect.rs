//! Leave-one-out detection of irregular word forms.
//!
//! For one cognate set, each member word is masked in turn (its cells become
//! missing) and the masked sites are matched against the pattern collection.
//! The word whose masking raises the set's mean log-recurrence the most is the
//! candidate culprit.
//!
//! Masked sites are scored against the collection inferred from the unmasked
//! data. A masked site that becomes compatible with a pattern other than its
//! own is counted as joining it, so that pattern's recurrence grows by one.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::patterns::{
    compatible, concrete_count, infer_patterns, site_recurrence, CogsetSites, Entry, PatternCollection, Site, SiteTable,
};
use crate::{Error, Result};

/// Gains closer than this are treated as equal.
pub const GAIN_EPSILON: f64 = 1e-12;

/// A masked site needs at least this many concrete entries to count as evidence.
pub const MIN_CONCRETE: usize = 2;

/// Smallest cognate set for which a culprit is named.
pub const MIN_MEMBERS_FOR_CANDIDATE: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionResult {
    pub cogid: i64,
    /// Mean log-recurrence of the unmasked sites.
    pub baseline: f64,
    pub per_word: BTreeMap<u64, f64>,
    pub best: Option<u64>,
    pub best_gain: f64,
}

/// How masked sites are scored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Rescoring {
    /// Match masked sites against the existing collection.
    #[default]
    Fixed,
    /// Re-infer the whole collection for every masking. Only viable on small data.
    Reinfer,
}

/// Sets `doculect` to missing in every site and drops sites left with fewer
/// than [`MIN_CONCRETE`] concrete entries.
pub fn mask_word(sites: &[Site], doculect: usize) -> Result<Vec<Site>> {
    if !sites.iter().any(|s| s.values[doculect].is_concrete()) {
        let cogid = sites.first().map_or(0, |s| s.id.cogid);
        return Err(Error::UnknownMember { cogid, doculect });
    }
    Ok(sites
        .iter()
        .filter_map(|s| {
            let mut masked = s.clone();
            masked.values[doculect] = Entry::Missing;
            (concrete_count(&masked.values) >= MIN_CONCRETE).then_some(masked)
        })
        .collect())
}

/// Recurrence of a masked site scored against a fixed collection. Staying in
/// its own pattern leaves that pattern's size unchanged; joining any other
/// compatible pattern adds the site to it.
pub fn masked_recurrence(masked: &Site, pc: &PatternCollection) -> usize {
    let own = pc.assignment.get(&masked.id).copied();
    pc.patterns
        .iter()
        .enumerate()
        .filter(|(_, p)| compatible(&masked.values, &p.values))
        .map(|(i, p)| if Some(i) == own { p.recurrence() } else { p.recurrence() + 1 })
        .max()
        .unwrap_or(1)
}

fn mean_log(recurrences: impl Iterator<Item = usize>) -> Option<f64> {
    let (sum, n) = recurrences.fold((0.0, 0usize), |(s, n), r| (s + libm::log(r as f64), n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Picks the largest positive gain, ties to the lowest form id.
fn choose(per_word: &BTreeMap<u64, f64>, members: usize) -> (Option<u64>, f64) {
    let mut best: Option<(u64, f64)> = None;
    for (&id, &gain) in per_word {
        // ids iterate ascending, so only a strictly larger gain replaces
        if best.is_none_or(|(_, g)| gain > g + GAIN_EPSILON) {
            best = Some((id, gain));
        }
    }
    let best_gain = best.map_or(0.0, |(_, g)| g);
    let named = best.filter(|&(_, g)| members >= MIN_MEMBERS_FOR_CANDIDATE && g > GAIN_EPSILON);
    (named.map(|(id, _)| id), best_gain)
}

/// Leave-one-out gains for one cognate set against a fixed collection.
pub fn loo_gains(cogset: &CogsetSites, sites: &[Site], pc: &PatternCollection) -> Result<DetectionResult> {
    if cogset.members.len() < 2 {
        return Err(Error::TooSmall { cogid: cogset.cogid, members: cogset.members.len() });
    }
    let baseline = mean_log(sites.iter().map(|s| site_recurrence(&s.values, pc))).ok_or(Error::EmptyCognateSet)?;
    let mut per_word = BTreeMap::new();
    for member in &cogset.members {
        let masked = mask_word(sites, member.doculect)?;
        let gain = mean_log(masked.iter().map(|s| masked_recurrence(s, pc))).map_or(0.0, |m| m - baseline);
        per_word.insert(member.form_id, gain);
    }
    let (best, best_gain) = choose(&per_word, cogset.members.len());
    Ok(DetectionResult { cogid: cogset.cogid, baseline, per_word, best, best_gain })
}

/// Leave-one-out gains where the collection is re-inferred after each masking.
pub fn loo_gains_reinferred(table: &SiteTable, cogset: &CogsetSites, pc: &PatternCollection) -> Result<DetectionResult> {
    if cogset.members.len() < 2 {
        return Err(Error::TooSmall { cogid: cogset.cogid, members: cogset.members.len() });
    }
    let own = table.cogset_sites(cogset);
    let baseline = mean_log(own.iter().map(|s| site_recurrence(&s.values, pc))).ok_or(Error::EmptyCognateSet)?;
    let mut per_word = BTreeMap::new();
    for member in &cogset.members {
        let masked = mask_word(own, member.doculect)?;
        let mut all: Vec<Site> = table.sites()[..cogset.sites.start].to_vec();
        all.extend(masked.iter().cloned());
        all.extend_from_slice(&table.sites()[cogset.sites.end..]);
        let repc = infer_patterns(&all);
        let gain = mean_log(masked.iter().map(|s| site_recurrence(&s.values, &repc))).map_or(0.0, |m| m - baseline);
        per_word.insert(member.form_id, gain);
    }
    let (best, best_gain) = choose(&per_word, cogset.members.len());
    Ok(DetectionResult { cogid: cogset.cogid, baseline, per_word, best, best_gain })
}

/// Runs leave-one-out detection on every cognate set scoring below
/// `score_threshold`, lowest baseline first.
pub fn detect_irregular(
    table: &SiteTable,
    pc: &PatternCollection,
    score_threshold: f64,
    rescoring: Rescoring,
) -> Result<Vec<DetectionResult>> {
    let mut results = Vec::new();
    for cogset in table.cogsets() {
        let sites = table.cogset_sites(cogset);
        let result = match rescoring {
            Rescoring::Fixed => loo_gains(cogset, sites, pc)?,
            Rescoring::Reinfer => loo_gains_reinferred(table, cogset, pc)?,
        };
        if libm::exp(result.baseline) < score_threshold {
            results.push(result);
        }
    }
    results.sort_by(|a, b| a.baseline.total_cmp(&b.baseline).then(a.cogid.cmp(&b.cogid)));
    Ok(results)
}
