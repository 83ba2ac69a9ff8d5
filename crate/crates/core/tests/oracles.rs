//! Exhaustive-search oracles for the alignment and cover heuristics.

mod common;

use common::tokens;
use corrpat_core::alignment::{gap_score, pair_score, pairwise_align};
use corrpat_core::patterns::{compatible, infer_patterns, Symbol};
use corrpat_core::{Cell, Entry, Segment, Site, SiteId};
use proptest::prelude::*;

/// Best score over every global alignment, by enumeration.
fn brute_best(x: &[Segment], y: &[Segment]) -> i32 {
    match (x, y) {
        ([], []) => 0,
        ([], _) => gap_score() * y.len() as i32,
        (_, []) => gap_score() * x.len() as i32,
        ([a, xs @ ..], [b, ys @ ..]) => {
            let pair = pair_score(a, b) + brute_best(xs, ys);
            let gap_y = gap_score() + brute_best(xs, y);
            let gap_x = gap_score() + brute_best(x, ys);
            pair.max(gap_y).max(gap_x)
        }
    }
}

fn rescore(ax: &[Cell], ay: &[Cell]) -> i32 {
    ax.iter()
        .zip(ay)
        .map(|(a, b)| match (a, b) {
            (Cell::Sound(a), Cell::Sound(b)) => pair_score(a, b),
            (Cell::Gap, Cell::Gap) => panic!("double gap column"),
            _ => gap_score(),
        })
        .sum()
}

fn ungapped(cells: &[Cell]) -> Vec<Segment> {
    cells.iter().filter_map(|c| if let Cell::Sound(s) = c { Some(s.clone()) } else { None }).collect()
}

proptest! {
    #[test]
    fn pairwise_alignment_is_optimal(x in tokens(5), y in tokens(5)) {
        let pa = pairwise_align(&x, &y);
        prop_assert_eq!(pa.score, brute_best(&x, &y));
        let (ax, ay) = (pa.aligned_x(&x), pa.aligned_y(&y));
        prop_assert_eq!(ax.len(), ay.len());
        prop_assert_eq!(rescore(&ax, &ay), pa.score);
        prop_assert_eq!(ungapped(&ax), x);
        prop_assert_eq!(ungapped(&ay), y);
    }
}

/// All set partitions of `0..n`, as block labels.
fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, n: usize, labels: &mut Vec<usize>, blocks: usize, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(labels.clone());
            return;
        }
        for b in 0..=blocks {
            labels.push(b);
            go(i + 1, n, labels, blocks.max(b + 1), out);
            labels.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), 0, &mut out);
    out
}

fn min_clique_cover(sites: &[Site]) -> usize {
    partitions(sites.len())
        .into_iter()
        .filter(|labels| {
            (0..sites.len()).all(|i| {
                (0..i).all(|j| labels[i] != labels[j] || compatible(&sites[i].values, &sites[j].values))
            })
        })
        .map(|labels| labels.iter().max().map_or(0, |m| m + 1))
        .min()
        .unwrap()
}

fn entry() -> impl Strategy<Value = Entry> {
    prop_oneof![
        1 => Just(Entry::Missing),
        1 => Just(Entry::Gap),
        4 => (0u32..3).prop_map(|s| Entry::Sound(Symbol(s))),
    ]
}

fn sites(n: std::ops::RangeInclusive<usize>, doculects: usize) -> impl Strategy<Value = Vec<Site>> {
    prop::collection::vec(prop::collection::vec(entry(), doculects), n).prop_map(|rows| {
        rows.into_iter()
            .enumerate()
            .map(|(i, values)| Site { id: SiteId { cogid: i as i64 + 1, column: 0 }, values })
            .collect()
    })
}

#[test]
fn partition_counts_are_bell_numbers() {
    let bell: Vec<usize> = (0..=6).map(|n| partitions(n).len()).collect();
    assert_eq!(bell, [1, 1, 2, 5, 15, 52, 203]);
}

proptest! {
    #[test]
    fn greedy_cover_is_sound_and_bounded_by_the_minimum(sites in sites(1..=6, 3)) {
        let pc = infer_patterns(&sites);
        prop_assert!(pc.patterns.len() >= min_clique_cover(&sites));
        for p in &pc.patterns {
            for (i, a) in p.sites.iter().enumerate() {
                for b in &p.sites[..i] {
                    let va = &sites.iter().find(|s| s.id == *a).unwrap().values;
                    let vb = &sites.iter().find(|s| s.id == *b).unwrap().values;
                    prop_assert!(compatible(va, vb));
                }
            }
        }
        prop_assert_eq!(pc.assignment.len(), sites.len());
    }
}
