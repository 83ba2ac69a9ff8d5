#![allow(dead_code)]

use corrpat_core::{Segment, WordForm, Wordlist};
use proptest::prelude::*;

pub fn seg(t: &str) -> Segment {
    Segment::new(t).unwrap()
}

pub fn segs(s: &str) -> Vec<Segment> {
    s.split(' ').map(seg).collect()
}

pub fn form(id: u64, doculect: &str, concept: &str, tokens: &str, cogid: i64) -> WordForm {
    WordForm { id, doculect: doculect.into(), concept: concept.into(), segments: segs(tokens), cogid }
}

/// The four-language, three-concept toy wordlist: concept A has /o/ in L3,
/// concept B lacks L4, concept C has /x/ in L1.
pub fn figure_two() -> Wordlist {
    Wordlist::from_forms(vec![
        form(1, "L1", "A", "k a n", 1),
        form(2, "L2", "A", "k a n", 1),
        form(3, "L3", "A", "k o n", 1),
        form(4, "L4", "A", "k a n", 1),
        form(5, "L1", "B", "k u n", 2),
        form(6, "L2", "B", "k u n", 2),
        form(7, "L3", "B", "k u n", 2),
        form(8, "L1", "C", "x i", 3),
        form(9, "L2", "C", "k i", 3),
        form(10, "L3", "C", "k e", 3),
        form(11, "L4", "C", "k i", 3),
    ])
    .unwrap()
}

pub const ALPHABET: &[&str] = &["p", "t", "k", "m", "a", "i", "u", "e"];

pub fn tokens(max_len: usize) -> impl Strategy<Value = Vec<Segment>> {
    prop::collection::vec(prop::sample::select(ALPHABET), 1..=max_len)
        .prop_map(|v| v.into_iter().map(seg).collect())
}

/// Random wordlists: up to `max_doculects` doculects and `max_concepts`
/// concepts, each doculect attesting a concept with probability 3/4.
pub fn wordlists(max_doculects: usize, max_concepts: usize) -> impl Strategy<Value = Wordlist> {
    (2..=max_doculects, 1..=max_concepts)
        .prop_flat_map(|(nd, nc)| prop::collection::vec((any::<u8>(), tokens(4)), nd * nc).prop_map(move |cells| (nd, cells)))
        .prop_filter_map("empty", |(nd, cells)| {
            let mut forms = Vec::new();
            for (i, (coin, segments)) in cells.into_iter().enumerate() {
                if coin % 4 == 3 {
                    continue;
                }
                let (c, d) = (i / nd, i % nd);
                forms.push(WordForm {
                    id: i as u64 + 1,
                    doculect: format!("D{d}"),
                    concept: format!("c{c}"),
                    segments,
                    cogid: c as i64 + 1,
                });
            }
            Wordlist::from_forms(forms).ok().filter(|wl| !wl.is_empty())
        })
}
