mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rrfuse::corpus::window_ranges;
use rrfuse::fusion::{interpolate, min_max_normalize, rrf_fuse};
use rrfuse::trec::{parse_run, write_run};
use rrfuse::{FusionConfig, InterpolationConfig, Normalization, RankedList, Run};

fn ranked(docs: Vec<u8>, scores: Vec<i32>) -> RankedList {
    let unique: BTreeSet<u8> = docs.into_iter().collect();
    let scored = unique
        .into_iter()
        .zip(scores)
        .map(|(d, s)| (format!("d{d}"), f64::from(s) / 8.0));
    RankedList::from_scored("q", "t", scored, usize::MAX)
}

fn list_strategy() -> impl Strategy<Value = RankedList> {
    (
        prop::collection::vec(any::<u8>(), 0..40),
        prop::collection::vec(-800i32..800, 40),
    )
        .prop_map(|(d, s)| ranked(d, s))
}

proptest! {
    #[test]
    fn windows_cover_every_sentence(n in 1usize..200, window in 1usize..20, stride_frac in 0.0f64..1.0) {
        let stride = 1 + ((window - 1) as f64 * stride_frac) as usize;
        let w = window_ranges(n, window, stride).unwrap();
        prop_assert_eq!(w[0].0, 0);
        prop_assert_eq!(w.last().unwrap().1, n - 1);
        for pair in w.windows(2) {
            prop_assert_eq!(pair[1].0, pair[0].0 + stride);
            prop_assert!(pair[1].0 <= pair[0].1 + 1);
        }
        for &(s, e) in &w {
            prop_assert!(e - s < window);
        }
    }

    #[test]
    fn rrf_ignores_scores(a in list_strategy(), b in list_strategy()) {
        let cfg = FusionConfig::default();
        let base = rrf_fuse(&[&a, &b], &cfg, "r").unwrap();
        let flat = |l: &RankedList| {
            let n = l.len();
            RankedList::from_scored("q", "t", l.doc_ids().enumerate().map(|(i, d)| (d.to_string(), (n - i) as f64)), usize::MAX)
        };
        let again = rrf_fuse(&[&flat(&a), &flat(&b)], &cfg, "r").unwrap();
        prop_assert_eq!(base.entries(), again.entries());
    }

    #[test]
    fn rrf_is_symmetric_in_its_inputs(a in list_strategy(), b in list_strategy(), c in list_strategy()) {
        let cfg = FusionConfig::default();
        let x = rrf_fuse(&[&a, &b, &c], &cfg, "r").unwrap();
        let y = rrf_fuse(&[&c, &a, &b], &cfg, "r").unwrap();
        prop_assert_eq!(x.entries(), y.entries());
    }

    #[test]
    fn min_max_bounds(a in list_strategy()) {
        let n = min_max_normalize(&a);
        prop_assert!(n.entries().iter().all(|e| (0.0..=1.0).contains(&e.score)));
        prop_assert!(n.doc_ids().eq(a.doc_ids()));
    }

    #[test]
    fn alpha_one_keeps_first_ordering(a in list_strategy(), b in list_strategy()) {
        // documents above the first list's minimum keep their relative order
        let cfg = InterpolationConfig { alpha: 1.0, normalization: Normalization::MinMax };
        let out = interpolate(&a, &b, &cfg, usize::MAX, "i").unwrap();
        let min = a.entries().last().map_or(0.0, |e| e.score);
        let above: Vec<&str> = a.entries().iter().filter(|e| e.score > min).map(|e| e.doc_id.as_str()).collect();
        let got: Vec<&str> = out.doc_ids().filter(|d| above.contains(d)).collect();
        prop_assert_eq!(&got[..], &out.doc_ids().take(above.len()).collect::<Vec<_>>()[..]);
        prop_assert_eq!(got, above);
    }

    #[test]
    fn run_files_round_trip(lists in prop::collection::vec(list_strategy(), 1..5)) {
        let run = Run::from_lists("sys", lists.into_iter().enumerate().map(|(i, l)| {
            RankedList::from_scored(format!("q{i}"), "sys", l.entries().iter().map(|e| (e.doc_id.clone(), e.score)), usize::MAX)
        }));
        let mut first = Vec::new();
        write_run(&run, &mut first).unwrap();
        let mut second = Vec::new();
        write_run(&parse_run("p", first.as_slice()).unwrap(), &mut second).unwrap();
        prop_assert_eq!(first, second);
    }
}
