//! End-to-end acceptance: nine timed checks covering factorization,
//! ensembles, generating functions, matrix path sums, language extraction,
//! star heights, and the Bethe-tree truncation. Each check prints one
//! pass/fail line (visible with `--nocapture`) and fails if it exceeds its
//! pinned time bound.

mod common;

use common::{
    expand_regex, has_noncommuting_cycles, label_string, labeled_automaton,
    random_connected_quiver, random_connected_undirected, random_weighted_quiver, rng,
    six_vertex_quiver, suite, v, w,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use quiver_walks::{
    all_canonical_factorizations, block_matrix, block_resolvent_entry, cycle_rank, expand,
    factorize, factorize_ensemble, genfunc, make_family, normalize_tree, parse_tree, render_expr,
    resolvent_entry, star_height_cycles, star_height_graph, star_height_of_expr, star_height_open,
    trees_equivalent, weighted_path_sum, Family, Poly, Quiver, RationalFn, RenderMode,
};
use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

const CAP: usize = 10_000_000;

/// Runs one acceptance check against its wall-clock budget and prints the
/// verdict line.
fn criterion(n: u32, what: &str, bound: Duration, body: impl FnOnce()) {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(body));
    let elapsed = start.elapsed();
    let verdict = match &outcome {
        Ok(()) if elapsed <= bound => "PASS",
        _ => "FAIL",
    };
    println!("criterion {n} ({what}): {verdict} in {elapsed:?} (bound {bound:?})");
    if let Err(cause) = outcome {
        resume_unwind(cause);
    }
    assert!(
        elapsed <= bound,
        "criterion {n} exceeded its time bound: {elapsed:?} > {bound:?}"
    );
}

fn k4_loops() -> Quiver {
    make_family(Family::CompleteWithLoops(4)).unwrap()
}

fn k3() -> Quiver {
    make_family(Family::Complete(3)).unwrap()
}

#[test]
fn c1_long_walk_factorization() {
    criterion(1, "long-walk factorization", Duration::from_secs(1), || {
        let q = k4_loops();
        let walk = w(&q, "133112343442333");
        let tree = factorize(&walk);
        let pinned = parse_tree(&q, "((123⊙33²)⊙((2342⊙44)⊙343))⊙((131⊙33)⊙11)").unwrap();
        assert!(trees_equivalent(&tree, &pinned).unwrap());
        assert_eq!(
            normalize_tree(&tree).unwrap(),
            normalize_tree(&pinned).unwrap()
        );
    });
}

#[test]
fn c2_factorization_uniqueness_at_desk_scale() {
    criterion(
        2,
        "factorization uniqueness",
        Duration::from_secs(300),
        || {
            let q = k3();
            let a = v(&q, "1");
            for b in q.vertices() {
                for walk in q.enumerate_walks(a, b, 8, CAP).unwrap() {
                    let reference = normalize_tree(&factorize(&walk)).unwrap();
                    let trees = all_canonical_factorizations(&walk, 8).unwrap();
                    assert!(trees.contains(&factorize(&walk)), "{walk}");
                    for t in &trees {
                        assert_eq!(
                            normalize_tree(t).unwrap(),
                            reference,
                            "second equivalence class for {walk}"
                        );
                    }
                }
            }
        },
    );
}

#[test]
fn c3_ensembles_expand_to_all_walks() {
    criterion(3, "ensemble expansion", Duration::from_secs(300), || {
        for (name, q) in suite() {
            for a in q.vertices() {
                for b in q.vertices() {
                    let expr = factorize_ensemble(&q, a, b).unwrap();
                    let derived: BTreeSet<_> = expand(&expr, 8, CAP).unwrap().into_keys().collect();
                    let listed = q.enumerate_walks(a, b, 8, CAP).unwrap();
                    assert_eq!(derived, listed, "{name}: ({a:?}, {b:?})");
                }
            }
        }
    });
}

#[test]
fn c4_generating_functions_against_the_resolvent() {
    criterion(4, "generating functions", Duration::from_secs(300), || {
        let mut graphs: Vec<(String, Quiver)> = suite()
            .into_iter()
            .map(|(n, q)| (n.to_string(), q))
            .collect();
        let mut r = rng(0x6a09e667f3bcc908);
        for i in 0..20 {
            graphs.push((format!("random #{i}"), random_connected_quiver(&mut r, 6)));
        }
        for (name, q) in &graphs {
            for a in q.vertices() {
                for b in q.vertices() {
                    let g = genfunc(q, a, b).unwrap();
                    assert_eq!(g, resolvent_entry(q, a, b).unwrap(), "{name} ({a:?},{b:?})");
                    let coeffs = g.series(13).unwrap();
                    let counts = q.count_walks(a, b, 12).unwrap();
                    for (k, n) in counts.iter().enumerate() {
                        assert_eq!(
                            coeffs[k],
                            BigRational::from_integer(BigInt::from(n.clone())),
                            "{name} ({a:?},{b:?}) length {k}"
                        );
                    }
                }
            }
        }
    });
}

#[test]
fn c5_closed_forms() {
    criterion(5, "closed forms", Duration::from_secs(2), || {
        let q = six_vertex_quiver();
        let got = genfunc(&q, v(&q, "1"), v(&q, "1")).unwrap();
        let want = RationalFn::new(
            Poly::from_integers(&[1, -1, -1, -1]),
            Poly::from_integers(&[1, -2, 0, -1, 2, 0, 1]),
        )
        .unwrap();
        assert_eq!(got, want);

        let c5 = make_family(Family::Cycle(5)).unwrap();
        let want = RationalFn::new(
            Poly::from_integers(&[1, -1, -1]),
            Poly::from_integers(&[1, -1, -3, 2]),
        )
        .unwrap();
        for a in c5.vertices() {
            assert_eq!(genfunc(&c5, a, a).unwrap(), want);
        }
    });
}

#[test]
fn c6_matrix_path_sums() {
    criterion(6, "matrix path sums", Duration::from_secs(60), || {
        let mut r = rng(0xbb67ae8584caa73b);
        let mut noncommuting = 0usize;
        for case in 0..50 {
            let wq = random_weighted_quiver(&mut r);
            let (m, _) = block_matrix(&wq);
            assert!(m.singular_values().max() < 0.5);
            if has_noncommuting_cycles(&wq) {
                noncommuting += 1;
            }
            let verts: Vec<_> = wq.quiver().vertices().collect();
            for &a in &verts {
                for &b in &verts {
                    let got = weighted_path_sum(&wq, a, b).unwrap();
                    let want = block_resolvent_entry(&wq, a, b).unwrap();
                    let rel = (&got - &want).norm() / want.norm().max(1.0);
                    assert!(rel <= 1e-10, "case {case} ({a:?},{b:?}): {rel:e}");
                }
            }
        }
        assert!(noncommuting >= 10, "only {noncommuting} non-commuting");
    });
}

#[test]
fn c7_language_extraction() {
    criterion(7, "language extraction", Duration::from_secs(1), || {
        let q = labeled_automaton();
        let expr = factorize_ensemble(&q, v(&q, "1"), v(&q, "4")).unwrap();
        let rendered = render_expr(&expr, RenderMode::Language, true).unwrap();
        assert_eq!(rendered, "(a(cc*b)*cc*a)*a(cc*b)*cc*d");
        let strings = expand_regex(&rendered, 10);
        let mut from_walks: BTreeMap<String, usize> = BTreeMap::new();
        for walk in q.enumerate_walks(v(&q, "1"), v(&q, "4"), 10, CAP).unwrap() {
            *from_walks.entry(label_string(&walk)).or_insert(0) += 1;
        }
        assert_eq!(strings, from_walks);
    });
}

#[test]
fn c8_star_heights() {
    criterion(8, "star heights", Duration::from_secs(300), || {
        for (name, q) in suite() {
            for a in q.vertices() {
                let closed = factorize_ensemble(&q, a, a).unwrap();
                assert_eq!(
                    star_height_cycles(&q, a).unwrap(),
                    star_height_of_expr(&closed),
                    "{name} at {a:?}"
                );
                for b in q.vertices() {
                    if b == a {
                        continue;
                    }
                    let open = factorize_ensemble(&q, a, b).unwrap();
                    assert_eq!(
                        star_height_open(&q, a, b).unwrap(),
                        star_height_of_expr(&open),
                        "{name} ({a:?},{b:?})"
                    );
                }
            }
        }
        let mut r = rng(0x3c6ef372fe94f82b);
        for case in 0..30 {
            let q = random_connected_undirected(&mut r, 7, case % 2 == 1);
            let rank = cycle_rank(&q).unwrap();
            for a in q.vertices() {
                let height = star_height_graph(&q, a).unwrap().height;
                assert_eq!(height, star_height_cycles(&q, a).unwrap(), "case {case}");
                assert!(height >= rank);
            }
        }
        for (spec, want) in [
            (Family::Complete(3), 2),
            (Family::CompleteWithLoops(3), 3),
            (Family::Cycle(5), 4),
        ] {
            let q = make_family(spec).unwrap();
            for a in q.vertices() {
                assert_eq!(star_height_graph(&q, a).unwrap().height, want);
            }
        }
    });
}

#[test]
fn c9_bethe_truncation() {
    criterion(9, "Bethe truncation", Duration::from_secs(120), || {
        let q = make_family(Family::TruncatedBethe {
            degree: 2,
            radius: 8,
        })
        .unwrap();
        let root = v(&q, "0");
        let counts = q.count_walks(root, root, 12).unwrap();
        for (k, want) in [1u64, 2, 6, 20, 70, 252, 924].iter().enumerate() {
            assert_eq!(counts[2 * k], (*want).into(), "even length {}", 2 * k);
        }
        for k in (1..counts.len()).step_by(2) {
            assert_eq!(counts[k], 0u32.into(), "odd length {k}");
        }

        let q3 = make_family(Family::TruncatedBethe {
            degree: 3,
            radius: 6,
        })
        .unwrap();
        let root3 = v(&q3, "0");
        let coeffs = genfunc(&q3, root3, root3).unwrap().series(13).unwrap();
        let counts3 = q3.count_walks(root3, root3, 12).unwrap();
        for (k, n) in counts3.iter().enumerate() {
            assert_eq!(
                coeffs[k],
                BigRational::from_integer(BigInt::from(n.clone())),
                "length {k}"
            );
        }
    });
}
