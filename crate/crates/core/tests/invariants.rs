use c4lab::field::GaloisField;
use c4lab::graph::{count_c4, count_c4_bruteforce, up_p2_stats, Graph};
use c4lab::incidence::{verify_projective_plane, IncidenceStructure};
use c4lab::plane::ProjectivePlane;
use c4lab::polarity::{orthogonal_polarity, orthogonal_polarity_graph, verify_polarity};
use c4lab::supersat::matching_experiment;
use proptest::prelude::*;

fn graph_strategy() -> impl Strategy<Value = Graph> {
    (2usize..20).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        prop::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut k = 0;
            for u in 0..n as u32 {
                for v in u + 1..n as u32 {
                    if bits[k] {
                        edges.push((u, v));
                    }
                    k += 1;
                }
            }
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn fast_count_matches_bruteforce(g in graph_strategy()) {
        prop_assert_eq!(count_c4(&g).unwrap(), count_c4_bruteforce(&g).unwrap());
    }

    #[test]
    fn edge_list_round_trip(g in graph_strategy()) {
        let back = Graph::from_edge_list(&g.to_edge_list()).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn two_paths_plus_uncovered_bounds_pairs(g in graph_strategy()) {
        let s = up_p2_stats(&g, 1);
        let n = g.n() as u64;
        // each pair is either uncovered or covered by at least one 2-path
        prop_assert!(s.p2 + s.up >= n * (n - 1) / 2);
        if count_c4(&g).unwrap() == 0 {
            prop_assert_eq!(s.p2 + s.up, n * (n - 1) / 2);
        }
    }

    #[test]
    fn field_axioms(q in prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27]), a in 0u32..27, b in 0u32..27, c in 0u32..27) {
        let f = GaloisField::for_order(q).unwrap();
        let (a, b, c) = (a % f.q(), b % f.q(), c % f.q());
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(f.sub(a, b), b), a);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
    }
}

#[test]
fn planes_and_polarities_up_to_order_32() {
    for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32] {
        let p = ProjectivePlane::from_order(q).unwrap();
        assert!(verify_projective_plane(p.structure()).is_pass(), "q={q}");
        let text = p.structure().to_text();
        assert_eq!(&IncidenceStructure::from_text(&text).unwrap(), p.structure());
        let pi = orthogonal_polarity(&p);
        assert!(verify_polarity(&pi).holds, "q={q}");
        assert_eq!(pi.absolute_points().len() as u64, q + 1, "q={q}");
    }
}

#[test]
fn even_order_polarity_graphs() {
    for q in [2u64, 4, 8, 16, 32] {
        let g = orthogonal_polarity_graph(q).unwrap();
        assert_eq!(g.graph.m() as u64, q * (q + 1) * (q + 1) / 2);
        assert_eq!(count_c4(&g.graph).unwrap(), 0);
    }
}

#[test]
fn matching_count_is_t_times_q_minus_one() {
    for (q, t) in [(4u64, 1u64), (4, 2), (8, 3), (16, 8), (32, 5)] {
        let r = matching_experiment(q, t, 0).unwrap();
        assert_eq!(r.measured_u64("c4"), Some(t * (q - 1)), "q={q} t={t}");
        let r = matching_experiment(q, t, 99).unwrap();
        assert_eq!(r.measured_u64("c4"), Some(t * (q - 1)), "q={q} t={t} shuffled");
    }
}
