//! Shared fixtures for the integration suites: the standing set of small
//! quivers, seeded random graph generators, and a bounded regular-expression
//! expander used to cross-check language renderings.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use quiver_walks::{
    block_matrix, make_family, parse_walk, walk_weight, Family, Quiver, VertexId, Walk,
    WeightedQuiver,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

pub fn v(q: &Quiver, name: &str) -> VertexId {
    q.require_vertex(name).unwrap()
}

pub fn w(q: &Quiver, text: &str) -> Walk {
    parse_walk(q, text).unwrap()
}

pub fn k3() -> Quiver {
    make_family(Family::Complete(3)).unwrap()
}

pub fn lk3() -> Quiver {
    make_family(Family::CompleteWithLoops(3)).unwrap()
}

pub fn c5() -> Quiver {
    make_family(Family::Cycle(5)).unwrap()
}

pub fn p4() -> Quiver {
    make_family(Family::Path(4)).unwrap()
}

pub fn p5() -> Quiver {
    make_family(Family::Path(5)).unwrap()
}

/// Four-state automaton: a feedback triangle 1→2→3→1 with a loop on 3, a
/// back-edge 3→2, and a single exit 3→4. Labeled so distinct edges out of
/// one vertex carry distinct symbols.
pub fn labeled_automaton() -> Quiver {
    let q = Quiver::new(
        (1..=4).map(|i| i.to_string()).collect(),
        &[
            ("1", "2"),
            ("2", "3"),
            ("3", "3"),
            ("3", "2"),
            ("3", "1"),
            ("3", "4"),
        ],
    )
    .unwrap();
    let lab = |t: &str, h: &str, s: &str| ((v(&q, t), v(&q, h)), s.to_string());
    let labels = [
        lab("1", "2", "a"),
        lab("2", "3", "c"),
        lab("3", "3", "c"),
        lab("3", "2", "b"),
        lab("3", "1", "a"),
        lab("3", "4", "d"),
    ];
    q.with_labels(&labels).unwrap()
}

/// Six-vertex quiver with two loops, a directed triangle, a 2-cycle and a
/// directed square sharing vertex 4.
pub fn six_vertex_quiver() -> Quiver {
    Quiver::new(
        (1..=6).map(|i| i.to_string()).collect(),
        &[
            ("1", "1"),
            ("1", "2"),
            ("2", "3"),
            ("3", "1"),
            ("2", "4"),
            ("4", "2"),
            ("4", "4"),
            ("4", "5"),
            ("5", "6"),
            ("6", "4"),
        ],
    )
    .unwrap()
}

/// The standing six-quiver suite used by the cross-oracle checks.
pub fn suite() -> Vec<(&'static str, Quiver)> {
    vec![
        ("complete(3)", k3()),
        ("complete_with_loops(3)", lk3()),
        ("cycle(5)", c5()),
        ("path(4)", p4()),
        ("labeled automaton", labeled_automaton()),
        ("six-vertex quiver", six_vertex_quiver()),
    ]
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random weakly-connected digraph on 2..=max_n vertices: a bidirectional
/// spanning path plus random extra edges and the occasional loop.
pub fn random_connected_quiver(rng: &mut ChaCha8Rng, max_n: usize) -> Quiver {
    let n = rng.gen_range(2..=max_n) as u32;
    let mut edges = Vec::new();
    for i in 0..n - 1 {
        edges.push((i, i + 1));
        edges.push((i + 1, i));
    }
    for t in 0..n {
        for h in 0..n {
            if t != h && rng.gen_bool(0.3) {
                edges.push((t, h));
            }
        }
        if rng.gen_bool(0.25) {
            edges.push((t, t));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let names = (0..n).map(|i| i.to_string()).collect();
    Quiver::from_indexed(names, &edges).unwrap()
}

/// Random connected undirected graph (as a bidirectional digraph) on
/// 2..=max_n vertices: a random spanning tree, extra undirected edges, and
/// loops on a random subset of vertices when `with_loops` is set.
pub fn random_connected_undirected(rng: &mut ChaCha8Rng, max_n: usize, with_loops: bool) -> Quiver {
    let n = rng.gen_range(2..=max_n) as u32;
    let mut edges = Vec::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        edges.push((i, j));
        edges.push((j, i));
    }
    for t in 0..n {
        for h in t + 1..n {
            if rng.gen_bool(0.3) {
                edges.push((t, h));
                edges.push((h, t));
            }
        }
    }
    if with_loops {
        for t in 0..n {
            if rng.gen_bool(0.4) {
                edges.push((t, t));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let names = (0..n).map(|i| i.to_string()).collect();
    Quiver::from_indexed(names, &edges).unwrap()
}

/// Random weighted quiver on ≤ 5 vertices with per-vertex dimensions 1–3
/// and complex edge matrices rescaled so the block transfer matrix has
/// norm 0.4 — safely inside the convergence regime.
pub fn random_weighted_quiver(r: &mut ChaCha8Rng) -> WeightedQuiver {
    let q = random_connected_quiver(r, 5);
    let dims: BTreeMap<_, _> = q.vertices().map(|u| (u, r.gen_range(1..=3))).collect();
    let mut weights: BTreeMap<_, DMatrix<Complex64>> = BTreeMap::new();
    for (t, h) in q.edges() {
        let m = DMatrix::from_fn(dims[&h], dims[&t], |_, _| {
            Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
        });
        weights.insert((t, h), m);
    }
    let raw = WeightedQuiver::new(q.clone(), dims.clone(), weights.clone()).unwrap();
    let (m, _) = block_matrix(&raw);
    let scale = 0.4 / m.singular_values().max();
    for w in weights.values_mut() {
        *w *= Complex64::new(scale, 0.0);
    }
    WeightedQuiver::new(q, dims, weights).unwrap()
}

/// True when two closed-walk weights at one vertex fail to commute — the
/// instance genuinely exercises matrix order.
pub fn has_noncommuting_cycles(wq: &WeightedQuiver) -> bool {
    for a in wq.quiver().vertices() {
        let cycles = wq.quiver().enumerate_walks(a, a, 4, 100_000).unwrap();
        let mats: Vec<DMatrix<Complex64>> = cycles
            .iter()
            .filter(|c| !c.is_trivial())
            .map(|c| walk_weight(wq, c).unwrap())
            .collect();
        for i in 0..mats.len() {
            for j in i + 1..mats.len() {
                let comm = &mats[i] * &mats[j] - &mats[j] * &mats[i];
                if comm.norm() > 1e-8 * mats[i].norm() * mats[j].norm() {
                    return true;
                }
            }
        }
    }
    false
}

/// The label sequence of a walk, concatenated into one string.
pub fn label_string(walk: &Walk) -> String {
    let q = walk.quiver();
    walk.vertices()
        .windows(2)
        .map(|e| q.edge_label(e[0], e[1]).expect("edge must be labeled"))
        .collect()
}

/// Bounded expansion of a plain regular expression (single-character
/// symbols, parentheses, `*`, `+` for union, implicit concatenation) into
/// the multiset of derived strings of length at most `max_len`. Serves as an
/// oracle independent of the walk-expression machinery.
pub fn expand_regex(pattern: &str, max_len: usize) -> BTreeMap<String, usize> {
    #[derive(Debug)]
    enum Re {
        Sym(char),
        Seq(Vec<Re>),
        Alt(Vec<Re>),
        Star(Box<Re>),
    }

    struct Parser<'a> {
        chars: std::iter::Peekable<std::str::Chars<'a>>,
    }

    impl Parser<'_> {
        fn alt(&mut self) -> Re {
            let mut terms = vec![self.seq()];
            while self.chars.peek() == Some(&'+') {
                self.chars.next();
                terms.push(self.seq());
            }
            if terms.len() == 1 {
                terms.pop().unwrap()
            } else {
                Re::Alt(terms)
            }
        }

        fn seq(&mut self) -> Re {
            let mut parts = Vec::new();
            while let Some(&c) = self.chars.peek() {
                if c == ')' || c == '+' {
                    break;
                }
                parts.push(self.atom());
            }
            Re::Seq(parts)
        }

        fn atom(&mut self) -> Re {
            let c = self.chars.next().expect("unexpected end of pattern");
            let mut node = if c == '(' {
                let inner = self.alt();
                assert_eq!(self.chars.next(), Some(')'), "unbalanced parenthesis");
                inner
            } else {
                assert!(c.is_alphanumeric(), "unexpected symbol {c:?}");
                Re::Sym(c)
            };
            while self.chars.peek() == Some(&'*') {
                self.chars.next();
                node = Re::Star(Box::new(node));
            }
            node
        }
    }

    fn walk_lengths(re: &Re, max_len: usize) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        match re {
            Re::Sym(c) => {
                if max_len >= 1 {
                    out.insert(c.to_string(), 1);
                }
            }
            Re::Alt(terms) => {
                for t in terms {
                    for (s, k) in walk_lengths(t, max_len) {
                        *out.entry(s).or_insert(0) += k;
                    }
                }
            }
            Re::Seq(parts) => {
                out.insert(String::new(), 1);
                for p in parts {
                    let rhs = walk_lengths(p, max_len);
                    let mut next = BTreeMap::new();
                    for (a, ka) in &out {
                        for (b, kb) in &rhs {
                            if a.len() + b.len() <= max_len {
                                *next.entry(format!("{a}{b}")).or_insert(0) += ka * kb;
                            }
                        }
                    }
                    out = next;
                }
            }
            Re::Star(body) => {
                let unit = walk_lengths(body, max_len);
                out.insert(String::new(), 1);
                let mut layer: BTreeMap<String, usize> = out.clone();
                loop {
                    let mut next = BTreeMap::new();
                    for (a, ka) in &layer {
                        for (b, kb) in &unit {
                            if !b.is_empty() && a.len() + b.len() <= max_len {
                                *next.entry(format!("{a}{b}")).or_insert(0) += ka * kb;
                            }
                        }
                    }
                    if next.is_empty() {
                        break;
                    }
                    for (s, k) in &next {
                        *out.entry(s.clone()).or_insert(0) += k;
                    }
                    layer = next;
                }
            }
        }
        out
    }

    let compact: String = pattern.chars().filter(|c| !c.is_whitespace()).collect();
    let mut parser = Parser {
        chars: compact.chars().peekable(),
    };
    let ast = parser.alt();
    assert!(parser.chars.next().is_none(), "trailing input in pattern");
    walk_lengths(&ast, max_len)
}
