use std::collections::BTreeSet;

use hynb::Hypergraph;
use proptest::prelude::*;

/// Up to `max_m` distinct sorted `q`-subsets of `0..n`.
fn edge_set(n: usize, q: usize, max_m: usize) -> impl Strategy<Value = Vec<Vec<usize>>> {
    prop::collection::vec(
        prop::sample::subsequence((0..n).collect::<Vec<_>>(), q),
        0..=max_m,
    )
    .prop_map(|es| {
        es.into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect::<Vec<_>>()
    })
}

fn instance() -> impl Strategy<Value = Hypergraph> {
    (2usize..=5, 6usize..=30).prop_flat_map(|(q, n)| {
        edge_set(n, q, 3 * n).prop_map(move |es| Hypergraph::new(n, q, es).unwrap())
    })
}

proptest! {
    #[test]
    fn degrees_sum_to_qm(g in instance()) {
        prop_assert_eq!(g.degrees().iter().sum::<usize>(), g.q() * g.m());
        prop_assert_eq!(g.oriented_count(), g.q() * g.m());
    }

    #[test]
    fn text_format_round_trips(g in instance()) {
        let mut buf = Vec::new();
        g.write_text(&mut buf).unwrap();
        let back = Hypergraph::read_text(buf.as_slice()).unwrap();
        prop_assert_eq!(&back, &g);
        let mut again = Vec::new();
        back.write_text(&mut again).unwrap();
        prop_assert_eq!(buf, again);
    }

    #[test]
    fn oriented_ids_are_consistent(g in instance()) {
        for id in 0..g.oriented_count() {
            let (v, e) = g.oriented_pair(id);
            prop_assert!(g.edge(e).contains(&v));
            prop_assert_eq!(g.oriented_id(v, e), Some(id));
        }
        for v in 0..g.n() {
            prop_assert_eq!(g.incident_oriented(v).len(), g.degree(v));
        }
    }

    #[test]
    fn balls_grow_with_radius(g in instance(), root in 0usize..6) {
        let mut prev = g.ball(root, 0);
        prop_assert_eq!(prev.vertices.clone(), vec![root]);
        for t in 1..4 {
            let b = g.ball(root, t);
            prop_assert!(prev.vertex_set().is_subset(&b.vertex_set()));
            prop_assert!(b.distances.iter().all(|&d| d <= t));
            // Excess never decreases as the ball grows.
            prop_assert!(b.excess(g.q()) >= prev.excess(g.q()));
            prev = b;
        }
    }
}

#[test]
fn edges_are_canonicalised() {
    let g = Hypergraph::new(5, 3, vec![vec![4, 0, 2], vec![1, 3, 2]]).unwrap();
    let edges: Vec<&[usize]> = g.edges().collect();
    assert!(edges.contains(&&[0, 2, 4][..]));
    assert!(edges.contains(&&[1, 2, 3][..]));
}

#[test]
fn malformed_input_is_rejected() {
    for text in [
        "3 2 1\n0 0\n",
        "3 2 1\n0 3\n",
        "3 2 2\n0 1\n",
        "3 2 1\n0 1 2\n",
        "3 x 1\n0 1\n",
        "3 2 2\n0 1\n1 0\n",
    ] {
        assert!(
            Hypergraph::read_text(text.as_bytes()).is_err(),
            "{text:?} accepted"
        );
    }
}

#[test]
fn comments_and_empty_graph() {
    let g = Hypergraph::read_text("# empty\n4 3 0\n".as_bytes()).unwrap();
    assert_eq!((g.n(), g.q(), g.m()), (4, 3, 0));
    assert_eq!(g.mean_degree(), 0.0);
    assert!(g.is_tangle_free(3).0);
}
