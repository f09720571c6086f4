//! Star heights three ways: the recursion over simple cycles/paths, the
//! star count of the ensemble expression, and the closed form for connected
//! undirected graphs, all cross-checked with the cycle-rank lower bound.

mod common;

use common::{c5, k3, labeled_automaton, lk3, random_connected_undirected, rng, suite, v};
use quiver_walks::{
    cycle_rank, factorize_ensemble, star_height_cycles, star_height_graph, star_height_of_expr,
    star_height_open,
};

#[test]
fn recursion_matches_expression_height() {
    for (name, q) in suite() {
        for a in q.vertices() {
            let closed = factorize_ensemble(&q, a, a).unwrap();
            assert_eq!(
                star_height_cycles(&q, a).unwrap(),
                star_height_of_expr(&closed),
                "{name}: closed walks at {a:?}"
            );
            for b in q.vertices() {
                if b == a {
                    continue;
                }
                let open = factorize_ensemble(&q, a, b).unwrap();
                assert_eq!(
                    star_height_open(&q, a, b).unwrap(),
                    star_height_of_expr(&open),
                    "{name}: open walks ({a:?}, {b:?})"
                );
            }
        }
    }
}

#[test]
fn closed_form_matches_recursion_on_random_graphs() {
    let mut r = rng(0x9e3779b97f4a7c15);
    for case in 0..30 {
        let with_loops = case % 2 == 1;
        let q = random_connected_undirected(&mut r, 7, with_loops);
        let rank = cycle_rank(&q).unwrap();
        for a in q.vertices() {
            let report = star_height_graph(&q, a).unwrap();
            let by_cycles = star_height_cycles(&q, a).unwrap();
            assert_eq!(
                report.height, by_cycles,
                "case {case}: closed form vs recursion at {a:?}"
            );
            assert!(report.height >= rank, "case {case}: cycle-rank lower bound");
            assert_eq!(report.witness.head(), a);
            assert_eq!(report.witness.len(), report.longest_path_length);
            assert!(report.witness.is_trivial() || report.witness.is_simple_path());
            for b in q.vertices() {
                if b == a {
                    continue;
                }
                assert_eq!(
                    star_height_open(&q, a, b).unwrap(),
                    by_cycles,
                    "case {case}: open height ({a:?}, {b:?})"
                );
            }
        }
    }
}

#[test]
fn spot_heights_on_named_graphs() {
    let q = k3();
    for a in q.vertices() {
        assert_eq!(star_height_graph(&q, a).unwrap().height, 2);
    }
    let q = lk3();
    for a in q.vertices() {
        assert_eq!(star_height_graph(&q, a).unwrap().height, 3);
    }
    let q = c5();
    for a in q.vertices() {
        assert_eq!(star_height_graph(&q, a).unwrap().height, 4);
    }
}

#[test]
fn automaton_exit_language_has_three_star_levels() {
    // The pinned language (a(cc*b)*cc*a)*a(cc*b)*cc*d nests stars three
    // deep: c* inside (cc*b)* inside the leading starred block.
    let q = labeled_automaton();
    let (a, d) = (v(&q, "1"), v(&q, "4"));
    assert_eq!(star_height_open(&q, a, d).unwrap(), 3);
    let expr = factorize_ensemble(&q, a, d).unwrap();
    assert_eq!(star_height_of_expr(&expr), 3);
}
