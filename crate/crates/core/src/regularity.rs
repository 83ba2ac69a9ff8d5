//! Balanced average recurrence scores.
//!
//! A cognate set's score is the geometric mean of its site recurrences, so a
//! single highly recurrent site cannot mask a run of one-off sites. The
//! dataset score normalizes each recurrence by the number of sites before
//! taking the geometric mean, which makes it comparable across datasets.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::patterns::{site_recurrence, PatternCollection, SiteTable};
use crate::{Error, Result};

fn mean_ln(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + libm::log(v), n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Mean natural log of the recurrences, or `None` when empty.
pub fn mean_log_recurrence(recurrences: &[usize]) -> Option<f64> {
    mean_ln(recurrences.iter().map(|&r| r as f64))
}

/// Geometric mean of a cognate set's site recurrences.
pub fn cogset_score(recurrences: &[usize]) -> Result<f64> {
    if recurrences.contains(&0) {
        return Err(Error::InconsistentReport { recurrences: recurrences.len(), total_sites: 0 });
    }
    mean_log_recurrence(recurrences).map(libm::exp).ok_or(Error::EmptyCognateSet)
}

/// Geometric mean of `recurrence / total_sites` over every site of a dataset.
pub fn dataset_score(recurrences: &[usize], total_sites: usize) -> Result<f64> {
    let inconsistent = Error::InconsistentReport { recurrences: recurrences.len(), total_sites };
    if total_sites == 0
        || recurrences.len() != total_sites
        || recurrences.iter().any(|&r| r == 0 || r > total_sites)
    {
        return Err(inconsistent);
    }
    let n = total_sites as f64;
    let m = mean_ln(recurrences.iter().map(|&r| r as f64 / n)).ok_or(inconsistent)?;
    Ok(libm::exp(m))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CogsetRegularity {
    pub recurrences: Vec<usize>,
    pub score: f64,
}

/// Recurrence of one site, with its normalized log value for plotting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiteScore {
    pub cogid: i64,
    pub column: usize,
    pub recurrence: usize,
    /// `ln(recurrence / total_sites)`.
    pub normalized_log: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegularityReport {
    pub dataset_score: f64,
    pub per_cogset: BTreeMap<i64, CogsetRegularity>,
    pub per_site: Vec<SiteScore>,
    pub total_sites: usize,
}

impl RegularityReport {
    /// Median of the per-cognate-set scores.
    pub fn median_cogset_score(&self) -> Option<f64> {
        let mut scores: Vec<f64> = self.per_cogset.values().map(|c| c.score).collect();
        if scores.is_empty() {
            return None;
        }
        scores.sort_by(f64::total_cmp);
        let mid = scores.len() / 2;
        Some(if scores.len() % 2 == 1 { scores[mid] } else { (scores[mid - 1] + scores[mid]) / 2.0 })
    }
}

/// Scores every site of `table` against `pc`.
pub fn report(table: &SiteTable, pc: &PatternCollection) -> Result<RegularityReport> {
    let total_sites = table.sites().len();
    let n = total_sites as f64;
    let mut per_cogset = BTreeMap::new();
    let mut per_site = Vec::with_capacity(total_sites);
    let mut all = Vec::with_capacity(total_sites);
    for cogset in table.cogsets() {
        let recurrences: Vec<usize> =
            table.cogset_sites(cogset).iter().map(|s| site_recurrence(&s.values, pc)).collect();
        for (site, &r) in table.cogset_sites(cogset).iter().zip(&recurrences) {
            per_site.push(SiteScore {
                cogid: site.id.cogid,
                column: site.id.column,
                recurrence: r,
                normalized_log: libm::log(r as f64 / n),
            });
        }
        all.extend_from_slice(&recurrences);
        let score = cogset_score(&recurrences)?;
        per_cogset.insert(cogset.cogid, CogsetRegularity { recurrences, score });
    }
    Ok(RegularityReport { dataset_score: dataset_score(&all, total_sites)?, per_cogset, per_site, total_sites })
}
