//! Simulated wordlists with known ground truth.
//!
//! Proto-forms are drawn from a small CVCV lexicon, each daughter applies zero
//! or more unconditioned mergers, and the resulting cognate sets are perfectly
//! regular. Irregularity is then added in two ways: phone-level noise spread
//! over the whole wordlist, and whole-word replacements in a fraction of the
//! cognate sets. Both draw replacement phones of the same class from the
//! doculect's own inventory.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alignment::{Alignment, AlignmentRow, Cell};
use crate::seed::{self, stream};
use crate::segment::{Klass, Segment};
use crate::wordlist::{Inventory, WordForm, Wordlist};
use crate::{Error, Result};

/// Consonants available to the simulator, used in this order.
pub const CONSONANT_POOL: &[&str] = &[
    "p", "t", "k", "m", "n", "s", "l", "r", "j", "w", "b", "d", "g", "f", "h", "ŋ", "v", "z", "x", "ʔ",
];
/// Vowels available to the simulator, used in this order.
pub const VOWEL_POOL: &[&str] = &["i", "e", "a", "u", "o", "ə", "ɛ", "ɔ"];

/// The only syllable template the simulator produces.
pub const SYLLABLE_TEMPLATE: &str = "CVCV";

pub const PROTO_DOCULECT: &str = "Proto";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationConfig {
    pub n_concepts: usize,
    pub n_consonants: usize,
    pub n_vowels: usize,
    pub n_daughters: usize,
    pub max_mergers: usize,
    pub seed: u64,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig { n_concepts: 200, n_consonants: 10, n_vowels: 4, n_daughters: 10, max_mergers: 2, seed: 0 }
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_concepts == 0 || self.n_daughters == 0 {
            return Err(Error::InvalidConfig("need at least one concept and one daughter"));
        }
        if self.n_consonants < 2 || self.n_vowels < 2 {
            return Err(Error::InvalidConfig("need at least two consonants and two vowels"));
        }
        if self.n_consonants > CONSONANT_POOL.len() || self.n_vowels > VOWEL_POOL.len() {
            return Err(Error::InvalidConfig("inventory larger than the built-in phone pool"));
        }
        Ok(())
    }

    pub fn consonants(&self) -> Vec<Segment> {
        CONSONANT_POOL[..self.n_consonants].iter().map(|t| Segment::new(t).expect("pool phone")).collect()
    }

    pub fn vowels(&self) -> Vec<Segment> {
        VOWEL_POOL[..self.n_vowels].iter().map(|t| Segment::new(t).expect("pool phone")).collect()
    }
}

/// An unconditioned merger: every `source` becomes `target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Merger {
    pub source: Segment,
    pub target: Segment,
}

impl fmt::Display for Merger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "*/{}/, */{}/ > /{}/", self.source, self.target, self.target)
    }
}

/// What was perturbed, for scoring detection runs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroundTruth {
    /// Cognate set id to the id of the injected form.
    pub replaced: BTreeMap<i64, u64>,
    /// `(form id, segment index)` of every noised segment.
    pub noise_positions: BTreeSet<(u64, usize)>,
}

/// A simulated dataset before any noise or injection.
#[derive(Debug, Clone, PartialEq)]
pub struct Simulation {
    pub proto: Wordlist,
    pub mergers: Vec<Vec<Merger>>,
    pub wordlist: Wordlist,
}

pub fn daughter_name(index: usize) -> String {
    format!("L{:02}", index + 1)
}

/// Proto-forms for every concept, one CVCV word each. Cognate ids start at 1.
pub fn generate_proto(cfg: &SimulationConfig) -> Result<Wordlist> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(cfg.seed, &[stream::PROTO]));
    let (consonants, vowels) = (cfg.consonants(), cfg.vowels());
    let forms = (0..cfg.n_concepts)
        .map(|c| {
            let segments = SYLLABLE_TEMPLATE
                .chars()
                .map(|slot| {
                    let pool = if slot == 'C' { &consonants } else { &vowels };
                    pool[rng.gen_range(0..pool.len())].clone()
                })
                .collect();
            WordForm {
                id: c as u64 + 1,
                doculect: PROTO_DOCULECT.into(),
                concept: format!("concept{:03}", c + 1),
                segments,
                cogid: c as i64 + 1,
            }
        })
        .collect();
    Wordlist::new(alloc::vec![PROTO_DOCULECT.into()], forms, BTreeMap::new())
}

/// Draws between zero and `max_mergers` mergers for one daughter.
///
/// Each merger picks consonants or vowels with equal probability, then two
/// distinct phones of that class, then which of the two survives.
pub fn sample_mergers(cfg: &SimulationConfig, daughter: usize) -> Result<Vec<Merger>> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(cfg.seed, &[stream::MERGERS, daughter as u64]));
    let (consonants, vowels) = (cfg.consonants(), cfg.vowels());
    let k = rng.gen_range(0..=cfg.max_mergers);
    Ok((0..k)
        .map(|_| {
            let pool = if rng.gen_bool(0.5) { &consonants } else { &vowels };
            let pair = index::sample(&mut rng, pool.len(), 2);
            let (a, b) = (pool[pair.index(0)].clone(), pool[pair.index(1)].clone());
            if rng.gen_bool(0.5) {
                Merger { source: b, target: a }
            } else {
                Merger { source: a, target: b }
            }
        })
        .collect())
}

/// Applies the mergers in order to one segment.
pub fn apply_mergers(segment: &Segment, mergers: &[Merger]) -> Segment {
    mergers.iter().fold(segment.clone(), |seg, m| if seg == m.source { m.target.clone() } else { seg })
}

/// Derives one daughter per merger list from the proto wordlist.
///
/// Daughter forms keep the proto length, so each cognate set is aligned
/// column by column without gaps.
pub fn evolve(proto: &Wordlist, mergers: &[Vec<Merger>]) -> Result<Wordlist> {
    let n_forms = proto.forms().len() as u64;
    let doculects: Vec<String> = (0..mergers.len()).map(daughter_name).collect();
    let mut forms = Vec::with_capacity(mergers.len() * proto.forms().len());
    for (d, changes) in mergers.iter().enumerate() {
        for (i, p) in proto.forms().iter().enumerate() {
            forms.push(WordForm {
                id: d as u64 * n_forms + i as u64 + 1,
                doculect: doculects[d].clone(),
                concept: p.concept.clone(),
                segments: p.segments.iter().map(|s| apply_mergers(s, changes)).collect(),
                cogid: p.cogid,
            });
        }
    }
    let mut rows: BTreeMap<i64, Vec<AlignmentRow>> = BTreeMap::new();
    for f in forms.iter().filter(|f| f.is_cognate_coded()) {
        rows.entry(f.cogid).or_default().push(AlignmentRow {
            form_id: f.id,
            cells: f.segments.iter().cloned().map(Cell::Sound).collect(),
        });
    }
    let alignments = rows
        .into_iter()
        .filter(|(_, r)| r.len() >= 2)
        .map(|(cogid, rows)| (cogid, Alignment { cogid, rows }))
        .collect();
    Wordlist::new(doculects, forms, alignments)
}

/// Proto lexicon, mergers and daughters for a configuration.
pub fn simulate(cfg: &SimulationConfig) -> Result<Simulation> {
    let proto = generate_proto(cfg)?;
    let mergers = (0..cfg.n_daughters).map(|d| sample_mergers(cfg, d)).collect::<Result<Vec<_>>>()?;
    let wordlist = evolve(&proto, &mergers)?;
    Ok(Simulation { proto, mergers, wordlist })
}

fn check_rate(rate: f64) -> Result<()> {
    if (0.0..=1.0).contains(&rate) {
        Ok(())
    } else {
        Err(Error::InvalidRate(rate))
    }
}

/// `floor(rate * n)`, tolerant of representation error in `rate`.
fn portion(rate: f64, n: usize) -> usize {
    (libm::floor(rate * n as f64 + 1e-9) as usize).min(n)
}

fn different_phone<R: Rng>(rng: &mut R, inventory: &Inventory, current: &Segment) -> Option<Segment> {
    let candidates: Vec<&Segment> = inventory.phones(current.klass())?.iter().filter(|s| *s != current).collect();
    candidates.choose(rng).map(|s| (*s).clone())
}

/// Replaces `floor(rate * total segments)` segments, chosen without
/// replacement, by a different phone of the same class from the doculect's
/// inventory. Alignment rows are rewritten in place.
pub fn inject_noise(wl: &Wordlist, rate: f64, seed: u64) -> Result<(Wordlist, BTreeSet<(u64, usize)>)> {
    check_rate(rate)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(seed, &[stream::NOISE]));
    let inventories = wl.inventories();
    let slots: Vec<(usize, usize)> = wl
        .forms()
        .iter()
        .enumerate()
        .flat_map(|(f, form)| (0..form.segments.len()).map(move |s| (f, s)))
        .collect();
    let mut chosen = index::sample(&mut rng, slots.len(), portion(rate, slots.len())).into_vec();
    chosen.sort_unstable();

    let mut out = wl.clone();
    let mut positions = BTreeSet::new();
    for slot in chosen {
        let (f, s) = slots[slot];
        let form = &wl.forms()[f];
        let d = wl.doculect_index(&form.doculect).expect("validated doculect");
        match different_phone(&mut rng, &inventories[d], &form.segments[s]) {
            Some(seg) => {
                out.set_segment(f, s, seg);
                positions.insert((form.id, s));
            }
            None => log::warn!("no alternative phone for segment {s} of form {}", form.id),
        }
    }
    Ok((out, positions))
}

/// Replaces one randomly chosen word in `floor(fraction * eligible)` cognate
/// sets of at least three members (at least one set when `fraction > 0`).
///
/// Every consonant and vowel of the chosen word becomes a different phone of
/// the same class; tones and markers are kept. Sets where that is impossible
/// are skipped and another set is drawn.
pub fn inject_replacements(wl: &Wordlist, fraction: f64, seed: u64) -> Result<(Wordlist, BTreeMap<i64, u64>)> {
    check_rate(fraction)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(seed, &[stream::REPLACE]));
    let inventories = wl.inventories();
    let mut eligible: Vec<(i64, Vec<u64>)> = wl
        .cognate_sets()
        .into_iter()
        .filter(|s| s.members.len() >= 3)
        .map(|s| (s.cogid, s.members.iter().map(|m| m.id).collect()))
        .collect();
    let mut target = portion(fraction, eligible.len());
    if fraction > 0.0 && target == 0 && !eligible.is_empty() {
        target = 1;
    }
    eligible.shuffle(&mut rng);

    let mut out = wl.clone();
    let mut replaced = BTreeMap::new();
    for (cogid, members) in eligible {
        if replaced.len() == target {
            break;
        }
        let id = *members.choose(&mut rng).expect("at least three members");
        let f = wl.forms().iter().position(|x| x.id == id).expect("member of wordlist");
        let form = &wl.forms()[f];
        let inventory = &inventories[wl.doculect_index(&form.doculect).expect("validated doculect")];
        let new: Option<Vec<Option<Segment>>> = form
            .segments
            .iter()
            .map(|seg| match seg.klass() {
                Klass::Consonant | Klass::Vowel => different_phone(&mut rng, inventory, seg).map(Some),
                Klass::Tone | Klass::Marker => Some(None),
            })
            .collect();
        let Some(new) = new else {
            log::warn!("{}", Error::InjectionImpossible { cogid });
            continue;
        };
        for (s, seg) in new.into_iter().enumerate() {
            if let Some(seg) = seg {
                out.set_segment(f, s, seg);
            }
        }
        replaced.insert(cogid, id);
    }
    Ok((out, replaced))
}
