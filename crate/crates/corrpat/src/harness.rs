//! Seeded experiment runs.
//!
//! Every trial gets its own seed derived from the master seed, the dataset
//! label, the condition and the run index, so results do not depend on the
//! order in which a thread pool finishes them. Trials run on the current
//! rayon pool and come back in key order.

use std::fmt;

use corrpat_core::alignment::complete_alignments;
use corrpat_core::experiment::{injection_trial, simulated_trial, TrialOutcome};
use corrpat_core::patterns::{infer_patterns, SiteTable};
use corrpat_core::regularity::{report, SiteScore};
use corrpat_core::seed;
use corrpat_core::{SimulationConfig, Wordlist};
use rayon::prelude::*;

use crate::output::{Table, Value};
use crate::stats;

/// Share of eligible cognate sets receiving a replacement.
pub const DEFAULT_FRACTION: f64 = 0.2;

/// Noise rates of the simulated sweep: 0 and 5% to 50% in steps of 5%.
pub fn default_noise_grid() -> Vec<f64> {
    (0..=10).map(|i| i as f64 / 20.0).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Condition {
    /// Simulated data with the given phone-noise rate.
    Sim { noise: f64 },
    /// A real wordlist subsampled to this many doculects.
    Real { sample_size: usize },
}

impl Condition {
    fn tag(&self) -> u64 {
        match self {
            Condition::Sim { .. } => 1,
            Condition::Real { .. } => 2,
        }
    }

    fn key(&self) -> u64 {
        match *self {
            Condition::Sim { noise } => noise.to_bits(),
            Condition::Real { sample_size } => sample_size as u64,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Condition::Sim { .. } => "sim",
            Condition::Real { .. } => "real",
        }
    }

    pub fn value(&self) -> Value {
        match *self {
            Condition::Sim { noise } => Value::Real(noise),
            Condition::Real { sample_size } => Value::from(sample_size),
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::Sim { noise } => write!(f, "sim({noise:.2})"),
            Condition::Real { sample_size } => write!(f, "real({sample_size})"),
        }
    }
}

/// Seed for one trial.
pub fn trial_seed(master: u64, dataset: &str, condition: Condition, run: usize) -> u64 {
    seed::derive(master, &[seed::label(dataset), condition.tag(), condition.key(), run as u64])
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub dataset: String,
    pub condition: Condition,
    pub run: usize,
    pub seed: u64,
    /// `Err` holds the reason a trial was skipped.
    pub outcome: Result<TrialOutcome, String>,
}

impl TrialResult {
    pub fn accuracy(&self) -> Option<f64> {
        self.outcome.as_ref().ok().and_then(TrialOutcome::accuracy)
    }
}

fn finish(dataset: &str, condition: Condition, run: usize, seed: u64, outcome: corrpat_core::Result<TrialOutcome>) -> TrialResult {
    let outcome = match outcome {
        Ok(o) if o.n_injected == 0 => Err("no eligible cognate set".to_string()),
        Ok(o) => Ok(o),
        Err(e) => Err(e.to_string()),
    };
    if let Err(reason) = &outcome {
        log::warn!("{dataset} {condition} run {run} skipped: {reason}");
    }
    TrialResult { dataset: dataset.to_string(), condition, run, seed, outcome }
}

/// Simulated experiment: for each rate and run, simulate a family, add
/// phone noise, inject replacements and detect them.
pub fn run_simulated(
    cfg: &SimulationConfig,
    rates: &[f64],
    runs: usize,
    fraction: f64,
    master: u64,
) -> corrpat_core::Result<Vec<TrialResult>> {
    cfg.validate()?;
    for &r in rates.iter().chain([&fraction]) {
        if !(0.0..=1.0).contains(&r) {
            return Err(corrpat_core::Error::InvalidRate(r));
        }
    }
    let keys: Vec<(f64, usize)> = rates.iter().flat_map(|&r| (0..runs).map(move |run| (r, run))).collect();
    Ok(keys
        .into_par_iter()
        .map(|(noise, run)| {
            let condition = Condition::Sim { noise };
            let seed = trial_seed(master, "sim", condition, run);
            finish("sim", condition, run, seed, simulated_trial(cfg, noise, fraction, seed))
        })
        .collect())
}

/// Injection experiment on one wordlist: for each sample size and run,
/// subsample doculects, inject replacements and detect them. Sets without a
/// usable alignment are aligned once up front.
pub fn run_injection(
    dataset: &str,
    wl: &Wordlist,
    sample_sizes: &[usize],
    runs: usize,
    fraction: f64,
    master: u64,
) -> corrpat_core::Result<Vec<TrialResult>> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(corrpat_core::Error::InvalidRate(fraction));
    }
    let aligned = complete_alignments(wl)?;
    let keys: Vec<(usize, usize)> = sample_sizes.iter().flat_map(|&k| (0..runs).map(move |run| (k, run))).collect();
    Ok(keys
        .into_par_iter()
        .map(|(k, run)| {
            let condition = Condition::Real { sample_size: k };
            let seed = trial_seed(master, dataset, condition, run);
            finish(dataset, condition, run, seed, injection_trial(&aligned, k, fraction, seed))
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub dataset: String,
    pub condition: Condition,
    pub n_runs: usize,
    pub n_skipped: usize,
    pub mean: Option<f64>,
    pub sd: Option<f64>,
}

/// Mean and sample standard deviation of accuracy per (dataset, condition),
/// in order of first appearance. Skipped trials are counted, not averaged.
pub fn summarize(trials: &[TrialResult]) -> Vec<SummaryRow> {
    let mut groups: Vec<(String, Condition, Vec<&TrialResult>)> = Vec::new();
    for t in trials {
        match groups.iter_mut().find(|(d, c, _)| *d == t.dataset && *c == t.condition) {
            Some(g) => g.2.push(t),
            None => groups.push((t.dataset.clone(), t.condition, vec![t])),
        }
    }
    groups
        .into_iter()
        .map(|(dataset, condition, ts)| {
            let acc: Vec<f64> = ts.iter().filter_map(|t| t.accuracy()).collect();
            SummaryRow {
                dataset,
                condition,
                n_runs: ts.len(),
                n_skipped: ts.len() - acc.len(),
                mean: stats::mean(&acc),
                sd: stats::sd(&acc),
            }
        })
        .collect()
}

pub fn trials_table(trials: &[TrialResult]) -> Table {
    let mut t = Table::new(
        "trials",
        &["DATASET", "CONDITION", "VALUE", "RUN", "SEED", "STATUS", "N_INJECTED", "N_CORRECT", "ACCURACY", "NOTE"],
    );
    for r in trials {
        let (status, injected, correct, note) = match &r.outcome {
            Ok(o) => ("ok", Value::from(o.n_injected), Value::from(o.n_correct), Value::Empty),
            Err(reason) => ("skipped", Value::Empty, Value::Empty, Value::from(reason.as_str())),
        };
        t.push(vec![
            r.dataset.as_str().into(),
            r.condition.kind().into(),
            r.condition.value(),
            r.run.into(),
            Value::Text(r.seed.to_string()),
            status.into(),
            injected,
            correct,
            r.accuracy().into(),
            note,
        ]);
    }
    t
}

pub fn summary_table(rows: &[SummaryRow]) -> Table {
    let mut t = Table::new("summary", &["DATASET", "CONDITION", "VALUE", "N_RUNS", "N_SKIPPED", "MEAN_ACCURACY", "SD_ACCURACY"]);
    for r in rows {
        t.push(vec![
            r.dataset.as_str().into(),
            r.condition.kind().into(),
            r.condition.value(),
            r.n_runs.into(),
            r.n_skipped.into(),
            r.mean.into(),
            r.sd.into(),
        ]);
    }
    t
}

/// Long-format accuracy per completed trial, one file per experiment kind.
pub fn accuracy_plot_table(trials: &[TrialResult]) -> Table {
    let sim = trials.first().is_none_or(|t| matches!(t.condition, Condition::Sim { .. }));
    let (name, value) = if sim { ("plotdata/accuracy_by_noise", "NOISE") } else { ("plotdata/accuracy_by_sample_size", "SAMPLE_SIZE") };
    let mut t = Table::new(name, &["DATASET", value, "RUN", "ACCURACY"]);
    for r in trials {
        if let Some(acc) = r.accuracy() {
            t.push(vec![r.dataset.as_str().into(), r.condition.value(), r.run.into(), acc.into()]);
        }
    }
    t
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Sweep {
    pub sites: Vec<(String, SiteScore)>,
    pub scores: Vec<(String, f64)>,
    pub failures: Vec<(String, String)>,
}

/// Regularity of each labeled dataset. A dataset that failed to load or
/// score is reported in `failures` and the sweep continues.
pub fn regularity_sweep(datasets: Vec<(String, Result<Wordlist, String>)>) -> Sweep {
    type Scored = Result<(Vec<SiteScore>, f64), String>;
    let scored: Vec<(String, Scored)> = datasets
        .into_par_iter()
        .map(|(label, wl)| {
            let result = wl.and_then(|wl| {
                let wl = complete_alignments(&wl).map_err(|e| e.to_string())?;
                let table = SiteTable::from_wordlist(&wl);
                if table.sites().is_empty() {
                    return Err("no alignment sites".to_string());
                }
                let pc = infer_patterns(table.sites());
                let r = report(&table, &pc).map_err(|e| e.to_string())?;
                Ok((r.per_site, r.dataset_score))
            });
            (label, result)
        })
        .collect();
    let mut sweep = Sweep::default();
    for (label, result) in scored {
        match result {
            Ok((sites, score)) => {
                sweep.sites.extend(sites.into_iter().map(|s| (label.clone(), s)));
                sweep.scores.push((label, score));
            }
            Err(e) => {
                log::warn!("{label}: {e}");
                sweep.failures.push((label, e));
            }
        }
    }
    sweep
}

pub fn sweep_tables(sweep: &Sweep) -> Vec<Table> {
    let mut sites = Table::new("plotdata/site_recurrence", &["DATASET", "COGID", "COLUMN", "RECURRENCE", "NORMALIZED_LOG"]);
    for (label, s) in &sweep.sites {
        sites.push(vec![label.as_str().into(), s.cogid.into(), s.column.into(), s.recurrence.into(), s.normalized_log.into()]);
    }
    let mut scores = Table::new("plotdata/dataset_scores", &["DATASET", "SCORE"]);
    for (label, score) in &sweep.scores {
        scores.push(vec![label.as_str().into(), (*score).into()]);
    }
    let mut failures = Table::new("failures", &["DATASET", "ERROR"]);
    for (label, e) in &sweep.failures {
        failures.push(vec![label.as_str().into(), e.as_str().into()]);
    }
    vec![sites, scores, failures]
}

#[cfg(test)]
mod tests {
    use super::*;
    use corrpat_core::simulate::simulate;

    fn small() -> SimulationConfig {
        SimulationConfig { n_concepts: 40, n_daughters: 6, ..SimulationConfig::default() }
    }

    #[test]
    fn grid() {
        let g = default_noise_grid();
        assert_eq!(g.len(), 11);
        assert_eq!(g[0], 0.0);
        assert!((g[10] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn seeds_depend_on_every_key_part() {
        let c = Condition::Sim { noise: 0.1 };
        let s = trial_seed(7, "sim", c, 0);
        assert_ne!(s, trial_seed(8, "sim", c, 0));
        assert_ne!(s, trial_seed(7, "x", c, 0));
        assert_ne!(s, trial_seed(7, "sim", Condition::Sim { noise: 0.2 }, 0));
        assert_ne!(s, trial_seed(7, "sim", c, 1));
        assert_ne!(trial_seed(7, "d", Condition::Real { sample_size: 5 }, 0), trial_seed(7, "d", Condition::Sim { noise: f64::from_bits(5) }, 0));
    }

    #[test]
    fn simulated_runs_are_ordered_and_deterministic() {
        let a = run_simulated(&small(), &[0.0, 0.2], 3, 0.2, 1).unwrap();
        let b = run_simulated(&small(), &[0.0, 0.2], 3, 0.2, 1).unwrap();
        assert_eq!(a, b);
        let keys: Vec<_> = a.iter().map(|t| (t.condition, t.run)).collect();
        assert_eq!(keys[0], (Condition::Sim { noise: 0.0 }, 0));
        assert_eq!(keys[5], (Condition::Sim { noise: 0.2 }, 2));
        assert!(run_simulated(&small(), &[1.5], 1, 0.2, 1).is_err());
    }

    #[test]
    fn oversized_samples_are_recorded_as_skipped() {
        let wl = simulate(&small()).unwrap().wordlist;
        let trials = run_injection("d", &wl, &[6, 7], 2, 0.2, 0).unwrap();
        assert_eq!(trials.len(), 4);
        assert!(trials[..2].iter().all(|t| t.outcome.is_ok()));
        assert!(trials[2..].iter().all(|t| t.outcome.is_err()));
        let summary = summarize(&trials);
        assert_eq!(summary[1].n_skipped, 2);
        assert_eq!(summary[1].mean, None);
    }

    #[test]
    fn identity_subsample_differs_only_by_injection() {
        let cfg = SimulationConfig { n_daughters: 5, ..small() };
        let wl = simulate(&cfg).unwrap().wordlist;
        let trials = run_injection("d", &wl, &[5], 4, 0.2, 3).unwrap();
        assert!(trials.iter().all(|t| t.outcome.as_ref().unwrap().n_injected == 8));
    }

    #[test]
    fn summary_matches_recomputation() {
        let trials = run_simulated(&small(), &[0.1], 4, 0.2, 9).unwrap();
        let acc: Vec<f64> = trials.iter().map(|t| t.accuracy().unwrap()).collect();
        let row = &summarize(&trials)[0];
        assert_eq!(row.n_runs, 4);
        assert!((row.mean.unwrap() - acc.iter().sum::<f64>() / 4.0).abs() < 1e-12);
    }

    #[test]
    fn sweep_reports_failures_and_continues() {
        let wl = simulate(&small()).unwrap().wordlist;
        let sweep = regularity_sweep(vec![
            ("a".into(), Ok(wl.clone())),
            ("bad".into(), Err("line 3: boom".into())),
            ("b".into(), Ok(wl)),
        ]);
        assert_eq!(sweep.scores.len(), 2);
        assert_eq!(sweep.scores[0].1, sweep.scores[1].1);
        assert_eq!(sweep.failures, [("bad".to_string(), "line 3: boom".to_string())]);
    }
}
