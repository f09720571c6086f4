//! Generating functions and matrix path sums against their linear-algebra
//! oracles: exact rational equality with the resolvent, series coefficients
//! against walk counts, and block-inverse agreement for matrix weights.

mod common;

use common::{
    c5, has_noncommuting_cycles, k3, labeled_automaton, lk3, p4, p5, random_connected_quiver,
    random_weighted_quiver, rng, six_vertex_quiver, v,
};
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use quiver_walks::{
    block_matrix, block_resolvent_entry, dressed_weight, genfunc, make_family, resolvent_entry,
    weighted_path_sum, Family, Quiver, WeightedQuiver,
};
use std::collections::{BTreeMap, BTreeSet};

fn fixed_quivers() -> Vec<(&'static str, Quiver)> {
    vec![
        ("complete(3)", k3()),
        ("complete_with_loops(3)", lk3()),
        ("cycle(5)", c5()),
        ("path(4)", p4()),
        ("path(5)", p5()),
        ("labeled automaton", labeled_automaton()),
        ("six-vertex quiver", six_vertex_quiver()),
    ]
}

#[test]
fn generating_function_matches_the_resolvent_everywhere() {
    let mut graphs: Vec<(String, Quiver)> = fixed_quivers()
        .into_iter()
        .map(|(n, q)| (n.to_string(), q))
        .collect();
    let mut r = rng(0x517cc1b727220a95);
    for i in 0..20 {
        graphs.push((format!("random #{i}"), random_connected_quiver(&mut r, 6)));
    }
    for (name, q) in &graphs {
        for a in q.vertices() {
            for b in q.vertices() {
                let g = genfunc(q, a, b).unwrap();
                let oracle = resolvent_entry(q, a, b).unwrap();
                assert_eq!(g, oracle, "{name}: pair ({a:?}, {b:?})");
            }
        }
    }
}

#[test]
fn series_coefficients_count_walks() {
    for (name, q) in fixed_quivers() {
        for a in q.vertices() {
            for b in q.vertices() {
                let coeffs = genfunc(&q, a, b).unwrap().series(13).unwrap();
                let counts = q.count_walks(a, b, 12).unwrap();
                assert_eq!(coeffs.len(), counts.len());
                for (k, (c, n)) in coeffs.iter().zip(&counts).enumerate() {
                    assert_eq!(
                        c,
                        &BigRational::from_integer(BigInt::from(n.clone())),
                        "{name}: ({a:?}, {b:?}) length {k}"
                    );
                }
            }
        }
    }
}

#[test]
fn bethe_truncation_counts_closed_walks() {
    // Within the truncation radius the tree looks like the infinite lattice,
    // so closed walks at the root of the coordination-2 tree are lattice
    // excursions: central binomial numbers at even lengths, none at odd.
    let q = make_family(Family::TruncatedBethe {
        degree: 2,
        radius: 8,
    })
    .unwrap();
    let root = v(&q, "0");
    let counts = q.count_walks(root, root, 12).unwrap();
    let even: Vec<u64> = [1u64, 2, 6, 20, 70, 252, 924].to_vec();
    for (k, want) in even.iter().enumerate() {
        assert_eq!(counts[2 * k], (*want).into(), "even length {}", 2 * k);
    }
    for k in (1..counts.len()).step_by(2) {
        assert_eq!(counts[k], 0u32.into(), "odd length {k}");
    }
    let coeffs = genfunc(&q, root, root).unwrap().series(13).unwrap();
    for (k, n) in counts.iter().enumerate() {
        assert_eq!(
            coeffs[k],
            BigRational::from_integer(BigInt::from(n.clone()))
        );
    }

    // Same cross-check on the coordination-3 truncation.
    let q3 = make_family(Family::TruncatedBethe {
        degree: 3,
        radius: 6,
    })
    .unwrap();
    let root3 = v(&q3, "0");
    let counts3 = q3.count_walks(root3, root3, 12).unwrap();
    let coeffs3 = genfunc(&q3, root3, root3).unwrap().series(13).unwrap();
    for (k, n) in counts3.iter().enumerate() {
        assert_eq!(
            coeffs3[k],
            BigRational::from_integer(BigInt::from(n.clone())),
            "coordination 3, length {k}"
        );
    }
}

#[test]
fn weighted_sums_match_the_block_inverse() {
    let mut r = rng(0x2545f4914f6cdd1d);
    let mut noncommuting = 0usize;
    for case in 0..50 {
        let wq = random_weighted_quiver(&mut r);
        let (m, _) = block_matrix(&wq);
        assert!(m.singular_values().max() < 0.5, "case {case}: norm regime");
        if has_noncommuting_cycles(&wq) {
            noncommuting += 1;
        }
        let verts: Vec<_> = wq.quiver().vertices().collect();
        for &a in &verts {
            for &b in &verts {
                let got = weighted_path_sum(&wq, a, b).unwrap();
                let want = block_resolvent_entry(&wq, a, b).unwrap();
                let rel = (&got - &want).norm() / want.norm().max(1.0);
                assert!(
                    rel <= 1e-10,
                    "case {case}: pair ({a:?}, {b:?}) off by {rel:e}"
                );
            }
        }
    }
    assert!(
        noncommuting >= 10,
        "only {noncommuting} instances had non-commuting weights"
    );
}

#[test]
fn multiplication_order_is_right_to_left() {
    // Two vertices, one edge each way, weights that do not commute. The
    // path-sum term for the single simple path 1→2 is
    // dressed(2 | without 1) · w(1→2) · dressed(1); reversing that order
    // must give a different matrix.
    let q = Quiver::new(
        vec!["1".to_string(), "2".to_string()],
        &[("1", "2"), ("2", "1")],
    )
    .unwrap();
    let (a, b) = (v(&q, "1"), v(&q, "2"));
    let dims: BTreeMap<_, _> = [(a, 2), (b, 2)].into();
    let upper =
        DMatrix::from_row_slice(2, 2, &[0.4, 0.4, 0.0, 0.4]).map(|x| Complex64::new(x, 0.0));
    let lower =
        DMatrix::from_row_slice(2, 2, &[0.4, 0.0, 0.4, 0.4]).map(|x| Complex64::new(x, 0.0));
    let fwd = (&upper * &lower - &lower * &upper).norm();
    assert!(fwd > 1e-3, "weights must not commute");
    let weights: BTreeMap<_, _> = [((a, b), upper.clone()), ((b, a), lower)].into();
    let wq = WeightedQuiver::new(q, dims, weights).unwrap();

    let dressed_source = dressed_weight(&wq, a, &BTreeSet::new()).unwrap();
    let dressed_target = dressed_weight(&wq, b, &BTreeSet::from([a])).unwrap();
    let displayed = &dressed_target * &upper * &dressed_source;
    let permuted = &dressed_source * &upper * &dressed_target;

    let got = weighted_path_sum(&wq, a, b).unwrap();
    assert!((&got - &displayed).norm() <= 1e-12 * displayed.norm().max(1.0));
    assert!(
        (&displayed - &permuted).norm() > 1e-6,
        "permuting the factor order must change the result"
    );
    let oracle = block_resolvent_entry(&wq, a, b).unwrap();
    assert!((&got - &oracle).norm() <= 1e-10 * oracle.norm().max(1.0));
}

#[test]
fn pentagon_entries_by_distance() {
    let q = c5();
    for d in 1..=2u32 {
        let a = v(&q, "0");
        let b = v(&q, &d.to_string());
        let g = genfunc(&q, a, b).unwrap();
        assert_eq!(g, resolvent_entry(&q, a, b).unwrap(), "distance {d}");
    }
}
