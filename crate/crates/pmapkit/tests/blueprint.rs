use std::collections::{BTreeMap, BTreeSet};

use pmapkit::blueprint::{end_profile, truncate, Card, FiniteGraph, GraphBlueprint as B, Truncation};
use proptest::prelude::*;

fn leaf() -> impl Strategy<Value = B> {
    prop_oneof![
        Just(B::LochNess),
        (1u32..4).prop_map(B::Hungry),
        Just(B::Millipede),
        Just(B::Ladder),
        Just(B::ray()),
        Just(B::lasso()),
        Just(B::Finite(FiniteGraph::new(2, vec![(0, 1), (0, 1), (1, 1)], vec![1]))),
    ]
}

fn blueprint() -> impl Strategy<Value = B> {
    leaf().prop_recursive(3, 8, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| B::wedge(a, b, ("root", "root"))),
            inner.clone().prop_map(B::comb),
            proptest::option::of(inner).prop_map(B::spray),
        ]
    })
}

fn edge_set(t: &Truncation) -> BTreeSet<(Vec<i64>, Vec<i64>)> {
    t.edges
        .iter()
        .map(|&(a, b)| {
            let (x, y) = (t.vertices[a].id.clone(), t.vertices[b].id.clone());
            if x <= y { (x, y) } else { (y, x) }
        })
        .collect()
}

/// Multiset of edges, so parallel edges count.
fn edge_counts(t: &Truncation) -> BTreeMap<(Vec<i64>, Vec<i64>), usize> {
    let mut m = BTreeMap::new();
    for &(a, b) in &t.edges {
        let (x, y) = (t.vertices[a].id.clone(), t.vertices[b].id.clone());
        *m.entry(if x <= y { (x, y) } else { (y, x) }).or_insert(0) += 1;
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn truncations_are_monotone(b in blueprint(), r in 0u32..5) {
        let small = truncate(&b, r).unwrap();
        let big = truncate(&b, r + 1).unwrap();
        let ids: BTreeSet<_> = small.vertices.iter().map(|v| v.id.clone()).collect();
        let big_ids: BTreeSet<_> = big.vertices.iter().map(|v| v.id.clone()).collect();
        prop_assert!(ids.is_subset(&big_ids));
        // Induced: big's edges among small's vertices are exactly small's.
        let restricted: BTreeMap<_, _> = edge_counts(&big)
            .into_iter()
            .filter(|((x, y), _)| ids.contains(x) && ids.contains(y))
            .collect();
        prop_assert_eq!(restricted, edge_counts(&small));
        prop_assert!(small.rank() <= big.rank());
        prop_assert!(edge_set(&small).is_subset(&edge_set(&big)));
    }

    #[test]
    fn json_round_trips(b in blueprint()) {
        let text = serde_json::to_string(&b).unwrap();
        let back: B = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, b);
    }

    #[test]
    fn profiles_are_consistent(b in blueprint()) {
        let p = end_profile(&b).unwrap();
        prop_assert!(p.check().is_ok());
    }

    #[test]
    fn finite_trees_do_not_change_profiles(b in blueprint(), len in 1u32..4) {
        let path = B::Finite(FiniteGraph::new(len + 1, (0..len).map(|i| (i, i + 1)).collect(), vec![]));
        let w = B::wedge(b.clone(), path, ("root", "v1"));
        prop_assert_eq!(end_profile(&w).unwrap(), end_profile(&b).unwrap());
    }
}

#[test]
fn finite_rank_is_the_limit_of_truncation_ranks() {
    let cases = [
        B::lasso(),
        B::Finite(FiniteGraph::new(3, vec![(0, 1), (1, 2), (2, 0), (1, 1)], vec![2, 2])),
        B::wedge(B::lasso(), B::comb(B::ray()), ("root", "root")),
        B::spray(None),
    ];
    for b in cases {
        let p = end_profile(&b).unwrap();
        let ranks: Vec<usize> = (0..8).map(|r| truncate(&b, r).unwrap().rank()).collect();
        assert!(ranks.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(Card::Finite(*ranks.last().unwrap() as u64), p.rank, "{b:?}");
    }
    let ln: Vec<usize> = (0..8).map(|r| truncate(&B::LochNess, r).unwrap().rank()).collect();
    assert!(ln.windows(2).all(|w| w[0] <= w[1]) && ln[7] > ln[0]);
}

/// In the comb of rays wedged to Loch Ness, every neighborhood of the comb's
/// spine end contains the end of some tooth.
#[test]
fn comb_spine_end_is_a_limit_of_tooth_ends() {
    let b = B::wedge(B::LochNess, B::comb(B::ray()), ("root", "root"));
    assert!(end_profile(&b).unwrap().el_complement_has_accumulation);
    for d in 0..=16u32 {
        let radius = d + 12;
        let t = truncate(&b, radius).unwrap();
        let far = t.index_of(&format!("b.s{radius}")).expect("far spine vertex");
        let mut adj = vec![vec![]; t.vertices.len()];
        for &(x, y) in &t.edges {
            adj[x].push(y);
            adj[y].push(x);
        }
        let mut seen = BTreeSet::from([far]);
        let mut stack = vec![far];
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if t.vertices[w].distance > d && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        let tooth_reaches_out = seen
            .iter()
            .any(|&v| t.vertices[v].boundary && t.vertices[v].label.starts_with("b.t"));
        assert!(tooth_reaches_out, "depth {d}");
    }
}
