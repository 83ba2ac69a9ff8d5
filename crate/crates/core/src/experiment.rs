//! Single experimental trials: perturb a wordlist with known replacements and
//! check whether leave-one-out detection recovers them.

use alloc::collections::BTreeMap;

use crate::detect::loo_gains;
use crate::patterns::{infer_patterns, SiteTable};
use crate::seed::{self, stream};
use crate::simulate::{inject_noise, inject_replacements, simulate, SimulationConfig};
use crate::wordlist::Wordlist;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialOutcome {
    pub n_injected: usize,
    pub n_correct: usize,
}

impl TrialOutcome {
    /// `None` when nothing could be injected.
    pub fn accuracy(&self) -> Option<f64> {
        (self.n_injected > 0).then(|| self.n_correct as f64 / self.n_injected as f64)
    }
}

/// Infers patterns on the perturbed wordlist and counts the injected forms
/// that leave-one-out detection names as the best candidate of their set.
pub fn score_injections(perturbed: &Wordlist, replaced: &BTreeMap<i64, u64>) -> Result<TrialOutcome> {
    let table = SiteTable::from_wordlist(perturbed);
    let pc = infer_patterns(table.sites());
    let mut n_correct = 0;
    for (&cogid, &form_id) in replaced {
        let Some(cogset) = table.cogset(cogid) else { continue };
        let result = loo_gains(cogset, table.cogset_sites(cogset), &pc)?;
        if result.best == Some(form_id) {
            n_correct += 1;
        }
    }
    Ok(TrialOutcome { n_injected: replaced.len(), n_correct })
}

/// Simulate, add phone noise, inject replacements, detect.
pub fn simulated_trial(cfg: &SimulationConfig, noise: f64, fraction: f64, seed: u64) -> Result<TrialOutcome> {
    let cfg = SimulationConfig { seed, ..cfg.clone() };
    let sim = simulate(&cfg)?;
    let (noised, _) = inject_noise(&sim.wordlist, noise, seed)?;
    let (perturbed, replaced) = inject_replacements(&noised, fraction, seed)?;
    score_injections(&perturbed, &replaced)
}

/// Subsample `k` doculects, inject replacements, detect.
///
/// `wl` should carry alignments for its cognate sets (see
/// [`crate::alignment::complete_alignments`]); sets without one are aligned
/// after injection.
pub fn injection_trial(wl: &Wordlist, k: usize, fraction: f64, seed: u64) -> Result<TrialOutcome> {
    let sub = wl.subsample(k, seed::derive(seed, &[stream::SUBSAMPLE]))?;
    let (perturbed, replaced) = inject_replacements(&sub, fraction, seed)?;
    score_injections(&perturbed, &replaced)
}
