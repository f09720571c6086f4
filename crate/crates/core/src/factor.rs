//! Factorization of walks into irreducible factors.
//!
//! A factor tree is a binary composition tree: leaves hold walks and each
//! internal node composes its right subtree into its left one. `factorize`
//! splits a walk until every leaf is irreducible, always expanding the
//! leftmost reducible leaf, so its output is deterministic. Distinct
//! complete trees for the same walk differ only by reassociation and by
//! reordering of factors attached at independent positions;
//! `normalize_tree` rewrites these away so that `trees_equivalent` can
//! compare factorizations structurally.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::quiver::{Quiver, VertexId};
use crate::walk::{NestResult, Walk};

/// Longest walk `all_canonical_factorizations` accepts by default.
pub const DEFAULT_FACTOR_BOUND: usize = 8;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FactorTree {
    Leaf(Walk),
    Nest(Box<FactorTree>, Box<FactorTree>),
}

impl FactorTree {
    pub fn leaf(w: Walk) -> FactorTree {
        FactorTree::Leaf(w)
    }

    pub fn nest(a: FactorTree, b: FactorTree) -> FactorTree {
        FactorTree::Nest(Box::new(a), Box::new(b))
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, FactorTree::Leaf(_))
    }

    /// Composes the tree back into a walk; zero when some node pairs
    /// non-composably.
    pub fn recompose(&self) -> NestResult {
        match self {
            FactorTree::Leaf(w) => NestResult::Walk(w.clone()),
            FactorTree::Nest(a, b) => {
                let (wa, wb) = match (a.recompose(), b.recompose()) {
                    (NestResult::Walk(wa), NestResult::Walk(wb)) => (wa, wb),
                    _ => return NestResult::Zero,
                };
                wa.nest(&wb)
            }
        }
    }

    pub fn leaves(&self) -> Vec<&Walk> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a Walk>) {
        match self {
            FactorTree::Leaf(w) => out.push(w),
            FactorTree::Nest(a, b) => {
                a.collect_leaves(out);
                b.collect_leaves(out);
            }
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            FactorTree::Leaf(_) => 1,
            FactorTree::Nest(a, b) => 1 + a.node_count() + b.node_count(),
        }
    }

    /// True when every leaf is a simple path or simple cycle.
    pub fn is_complete(&self) -> bool {
        self.leaves().iter().all(|w| w.is_irreducible())
    }

    /// Detects a composition chain of `k` copies of one walk; returns the
    /// walk and `k` (1 for a bare leaf).
    fn as_repeated_leaf(&self) -> Option<(&Walk, usize)> {
        match self {
            FactorTree::Leaf(w) => Some((w, 1)),
            FactorTree::Nest(a, b) => {
                let FactorTree::Leaf(wb) = b.as_ref() else {
                    return None;
                };
                let (wa, k) = a.as_repeated_leaf()?;
                (wa == wb).then_some((wa, k + 1))
            }
        }
    }

    pub fn to_text(&self, ascii: bool) -> String {
        if let Some((w, k)) = self.as_repeated_leaf() {
            if k >= 2 {
                return format!("{w}{}", power_suffix(k, ascii));
            }
        }
        match self {
            FactorTree::Leaf(w) => w.to_string(),
            FactorTree::Nest(a, b) => {
                let op = if ascii { " . " } else { "⊙" };
                format!(
                    "{}{op}{}",
                    render_operand(a, ascii),
                    render_operand(b, ascii)
                )
            }
        }
    }
}

fn render_operand(t: &FactorTree, ascii: bool) -> String {
    let s = t.to_text(ascii);
    let atomic = t.is_leaf() || t.as_repeated_leaf().map(|(_, k)| k >= 2).unwrap_or(false);
    if atomic {
        s
    } else {
        format!("({s})")
    }
}

fn power_suffix(k: usize, ascii: bool) -> String {
    if ascii {
        return format!("^{k}");
    }
    const SUP: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    k.to_string()
        .chars()
        .map(|c| SUP[c.to_digit(10).unwrap() as usize])
        .collect()
}

impl fmt::Display for FactorTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text(false))
    }
}

impl fmt::Debug for FactorTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FactorTree({})", self.to_text(false))
    }
}

/// One decomposition of a reducible walk into a small tree of strictly
/// shorter walks.
fn decompose_step(w: &Walk) -> FactorTree {
    debug_assert!(!w.is_irreducible());
    let verts = w.vertices();
    let n = verts.len();
    if w.is_cycle() {
        let base = verts[0];
        let internal: Vec<usize> = (1..n - 1).filter(|&i| verts[i] == base).collect();
        if !internal.is_empty() {
            // The walk is a run of shorter cycles at its own base; compose
            // them left to right.
            let mut cuts = vec![0];
            cuts.extend(internal);
            cuts.push(n - 1);
            let mut tree: Option<FactorTree> = None;
            for pair in cuts.windows(2) {
                let seg = w.segment(pair[0], pair[1]);
                let leaf = FactorTree::leaf(seg);
                tree = Some(match tree {
                    None => leaf,
                    Some(t) => FactorTree::nest(t, leaf),
                });
            }
            return tree.expect("at least two segments");
        }
    }
    // Peel the earliest revisited vertex: the stretch between its first and
    // last visit is a cycle hanging off the remainder.
    let (lo, hi) = if w.is_cycle() { (1, n - 2) } else { (0, n - 1) };
    for p in lo..=hi {
        let eta = verts[p];
        let last = (p + 1..=hi).rev().find(|&q| verts[q] == eta);
        if let Some(last) = last {
            let s = w.segment(p, last);
            let r = w.excise(p, last);
            return FactorTree::nest(FactorTree::leaf(r), FactorTree::leaf(s));
        }
    }
    unreachable!("reducible walk with no revisited vertex");
}

fn expand_leftmost(t: &FactorTree) -> Option<FactorTree> {
    match t {
        FactorTree::Leaf(w) => (!w.is_irreducible()).then(|| decompose_step(w)),
        FactorTree::Nest(a, b) => {
            if let Some(a2) = expand_leftmost(a) {
                return Some(FactorTree::nest(a2, (**b).clone()));
            }
            expand_leftmost(b).map(|b2| FactorTree::nest((**a).clone(), b2))
        }
    }
}

/// Fully factorizes a walk, also reporting how many decomposition rounds
/// were taken. The round count never exceeds the walk's length.
pub fn factorize_counted(w: &Walk) -> (FactorTree, usize) {
    let mut tree = FactorTree::leaf(w.clone());
    let mut steps = 0;
    while let Some(next) = expand_leftmost(&tree) {
        tree = next;
        steps += 1;
    }
    debug_assert_eq!(tree.recompose().walk(), Some(w));
    (tree, steps)
}

pub fn factorize(w: &Walk) -> FactorTree {
    factorize_counted(w).0
}

/// Rewrites a tree into the normal form used for equivalence testing.
///
/// Trivial factors are dropped first. A tree whose remaining leaves are all
/// prime is replaced by the factorization of its recomposed walk — the
/// canonical shape every equivalent tree must share — provided both trees
/// use the same factor multiset; a multiset mismatch is left to the local
/// rules below, so genuinely inequivalent factorizations of one walk still
/// compare as distinct instead of being silently merged. Trees with
/// composite leaves keep their granularity and are only reassociated to the
/// left and attachment-sorted where recomposition provably survives.
pub fn normalize_tree(t: &FactorTree) -> Result<FactorTree> {
    let NestResult::Walk(w) = t.recompose() else {
        return Err(Error::ZeroRecomposition);
    };
    let stripped = strip_trivial(t);
    if stripped.is_complete() {
        let canonical = factorize(&w);
        if leaf_multiset(&stripped) == leaf_multiset(&canonical) {
            return Ok(canonical);
        }
    }
    let cap = 4 * t.node_count() * t.node_count() + 16;
    let mut cur = stripped;
    for _ in 0..cap {
        let next = rewrite_pass(&cur);
        if next == cur {
            return Ok(cur);
        }
        cur = next;
    }
    Ok(cur)
}

/// Deletes trivial-walk leaves, which nest as local identities wherever the
/// tree composes at all.
fn strip_trivial(t: &FactorTree) -> FactorTree {
    let FactorTree::Nest(a, b) = t else {
        return t.clone();
    };
    let a = strip_trivial(a);
    let b = strip_trivial(b);
    if matches!(&b, FactorTree::Leaf(w) if w.is_trivial()) {
        return a;
    }
    if matches!(&a, FactorTree::Leaf(w) if w.is_trivial()) {
        return b;
    }
    FactorTree::nest(a, b)
}

fn leaf_multiset(t: &FactorTree) -> Vec<&Walk> {
    let mut leaves = t.leaves();
    leaves.sort();
    leaves
}

fn rewrite_pass(t: &FactorTree) -> FactorTree {
    let FactorTree::Nest(a, b) = t else {
        return t.clone();
    };
    let a = rewrite_pass(a);
    let b = rewrite_pass(b);
    // Drop trivial factors: they compose as identities wherever the tree
    // composes at all.
    if let FactorTree::Leaf(wb) = &b {
        if wb.is_trivial() {
            return a;
        }
    }
    if let FactorTree::Leaf(wa) = &a {
        if wa.is_trivial() {
            return b;
        }
    }
    let mut node = FactorTree::nest(a, b);
    node = reassociate_left(node);
    sort_spine(node)
}

/// (a ⊙ (b ⊙ c)) → ((a ⊙ b) ⊙ c) whenever both sides compose to the same
/// walk.
fn reassociate_left(node: FactorTree) -> FactorTree {
    let FactorTree::Nest(a, bc) = &node else {
        return node;
    };
    let FactorTree::Nest(b, c) = bc.as_ref() else {
        return node;
    };
    let cand = FactorTree::nest(
        FactorTree::nest((**a).clone(), (**b).clone()),
        (**c).clone(),
    );
    match (node.recompose(), cand.recompose()) {
        (NestResult::Walk(w1), NestResult::Walk(w2)) if w1 == w2 => reassociate_left(cand),
        _ => node,
    }
}

/// One bubble pass over the factors hanging off the left spine: adjacent
/// factors swap when the later one attaches strictly deeper in the prefix
/// walk and the swap provably composes to the same walk.
fn sort_spine(node: FactorTree) -> FactorTree {
    let mut spine = Vec::new();
    fn collect(t: &FactorTree, out: &mut Vec<FactorTree>) {
        match t {
            FactorTree::Nest(a, b) => {
                collect(a, out);
                out.push((**b).clone());
            }
            leaf => out.push(leaf.clone()),
        }
    }
    collect(&node, &mut spine);
    if spine.len() < 3 {
        return node;
    }
    let original = match node.recompose() {
        NestResult::Walk(w) => w,
        NestResult::Zero => return node,
    };
    let rebuild = |parts: &[FactorTree]| -> FactorTree {
        let mut it = parts.iter().cloned();
        let first = it.next().expect("non-empty spine");
        it.fold(first, FactorTree::nest)
    };
    for i in 1..spine.len() - 1 {
        let prefix = rebuild(&spine[..i]);
        let NestResult::Walk(pw) = prefix.recompose() else {
            return node;
        };
        let (Some(wa), Some(wb)) = (
            spine[i].recompose().into_walk(),
            spine[i + 1].recompose().into_walk(),
        ) else {
            return node;
        };
        let qa = pw.last_occurrence(wa.head());
        let qb = pw.last_occurrence(wb.head());
        if let (Some(qa), Some(qb)) = (qa, qb) {
            if qb > qa {
                let mut swapped = spine.clone();
                swapped.swap(i, i + 1);
                let cand = rebuild(&swapped);
                if cand.recompose().walk() == Some(&original) {
                    spine = swapped;
                }
            }
        }
    }
    rebuild(&spine)
}

/// Whether two factor trees are factorizations of the same walk that agree
/// up to reassociation, trivial factors, and reordering of independently
/// attached factors.
pub fn trees_equivalent(a: &FactorTree, b: &FactorTree) -> Result<bool> {
    let NestResult::Walk(wa) = a.recompose() else {
        return Err(Error::ZeroRecomposition);
    };
    let NestResult::Walk(wb) = b.recompose() else {
        return Err(Error::ZeroRecomposition);
    };
    if wa != wb {
        return Ok(false);
    }
    Ok(normalize_tree(a)? == normalize_tree(b)?)
}

/// Every complete factorization tree of `w`: all leaves irreducible and
/// every node a valid composition. Exhaustive, so the walk length is capped.
pub fn all_canonical_factorizations(w: &Walk, bound: usize) -> Result<BTreeSet<FactorTree>> {
    if w.len() > bound {
        return Err(Error::FactorBound {
            len: w.len(),
            bound,
        });
    }
    let mut memo: HashMap<Vec<VertexId>, BTreeSet<FactorTree>> = HashMap::new();
    Ok(all_canonical_factorizations_rec(w, &mut memo))
}

fn all_canonical_factorizations_rec(
    w: &Walk,
    memo: &mut HashMap<Vec<VertexId>, BTreeSet<FactorTree>>,
) -> BTreeSet<FactorTree> {
    let key = w.vertices().to_vec();
    if let Some(hit) = memo.get(&key) {
        return hit.clone();
    }
    let mut out = BTreeSet::new();
    if w.is_irreducible() {
        out.insert(FactorTree::leaf(w.clone()));
    }
    for (x, y) in w.proper_splits() {
        let xs = all_canonical_factorizations_rec(&x, memo);
        let ys = all_canonical_factorizations_rec(&y, memo);
        for tx in &xs {
            for ty in &ys {
                out.insert(FactorTree::nest(tx.clone(), ty.clone()));
            }
        }
    }
    memo.insert(key, out.clone());
    out
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

/// Parses a walk from text: single characters are vertex names when every
/// vertex of the quiver has a one-character name, otherwise names are
/// separated by whitespace or commas. One surrounding pair of parentheses
/// is ignored.
pub fn parse_walk(q: &Quiver, text: &str) -> Result<Walk> {
    let mut s = text.trim();
    if s.starts_with('(') && s.ends_with(')') && balanced_wrap(s) {
        s = s[1..s.len() - 1].trim();
    }
    if s.is_empty() {
        return Err(Error::EmptyWalk);
    }
    let names: Vec<String> = if s.contains(char::is_whitespace) || s.contains(',') {
        s.split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(str::to_string)
            .collect()
    } else if q.single_char_names() {
        s.chars().map(|c| c.to_string()).collect()
    } else {
        vec![s.to_string()]
    };
    walk_of_names(q, &names)
}

fn walk_of_names(q: &Quiver, names: &[String]) -> Result<Walk> {
    let verts = names
        .iter()
        .map(|n| q.require_vertex(n))
        .collect::<Result<Vec<_>>>()?;
    Walk::new(q.clone(), verts)
}

fn balanced_wrap(s: &str) -> bool {
    let mut depth = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth = depth.saturating_sub(1);
                if depth == 0 && i + 1 < s.len() {
                    return false;
                }
            }
            _ => {}
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    LParen,
    RParen,
    LBrace,
    RBrace,
    Plus,
    Op,
    StarOp,
    Power(usize),
    Name(String),
}

pub(crate) fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        match c {
            c if c.is_whitespace() || c == ',' => {
                chars.next();
            }
            '(' => {
                chars.next();
                out.push((i, Tok::LParen));
            }
            ')' => {
                chars.next();
                out.push((i, Tok::RParen));
            }
            '{' => {
                chars.next();
                out.push((i, Tok::LBrace));
            }
            '}' => {
                chars.next();
                out.push((i, Tok::RBrace));
            }
            '+' => {
                chars.next();
                out.push((i, Tok::Plus));
            }
            '⊙' | '.' => {
                chars.next();
                out.push((i, Tok::Op));
            }
            '∗' | '*' => {
                chars.next();
                out.push((i, Tok::StarOp));
            }
            '^' => {
                chars.next();
                let mut digits = String::new();
                while let Some(&(_, d)) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                let k: usize = digits.parse().map_err(|_| Error::Parse {
                    offset: i,
                    message: "expected digits after ^".into(),
                })?;
                out.push((i, Tok::Power(k)));
            }
            c if is_superscript(c) => {
                let mut k = 0usize;
                while let Some(&(_, d)) = chars.peek() {
                    if let Some(v) = superscript_value(d) {
                        k = k * 10 + v;
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push((i, Tok::Power(k)));
            }
            first => {
                let mut name = String::from(first);
                chars.next();
                while let Some(&(_, d)) = chars.peek() {
                    if d.is_whitespace()
                        || matches!(
                            d,
                            '(' | ')' | '{' | '}' | '+' | '⊙' | '.' | '^' | ',' | '∗' | '*'
                        )
                        || is_superscript(d)
                    {
                        break;
                    }
                    name.push(d);
                    chars.next();
                }
                out.push((i, Tok::Name(name)));
            }
        }
    }
    Ok(out)
}

fn is_superscript(c: char) -> bool {
    superscript_value(c).is_some()
}

fn superscript_value(c: char) -> Option<usize> {
    "⁰¹²³⁴⁵⁶⁷⁸⁹".chars().position(|s| s == c)
}

struct TreeParser<'a> {
    q: &'a Quiver,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

/// Parses the textual form produced by [`FactorTree::to_text`]; `.` and `⊙`
/// both compose, `^k` and superscript digits raise to a power, and
/// parenthesized groups hold either sub-trees or whitespace-separated
/// vertex names.
pub fn parse_tree(q: &Quiver, text: &str) -> Result<FactorTree> {
    let toks = lex(text)?;
    let end = toks.len();
    let mut p = TreeParser {
        q,
        toks,
        pos: 0,
        end,
    };
    let t = p.expr()?;
    if p.pos != p.end {
        return Err(Error::Parse {
            offset: p.offset(),
            message: "unexpected trailing input".into(),
        });
    }
    Ok(t)
}

impl TreeParser<'_> {
    fn offset(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(i, _)| *i)
            .unwrap_or_else(|| self.toks.last().map(|(i, _)| *i + 1).unwrap_or(0))
    }

    fn peek(&self) -> Option<&Tok> {
        (self.pos < self.end).then(|| &self.toks[self.pos].1)
    }

    fn expr(&mut self) -> Result<FactorTree> {
        let mut acc = self.term()?;
        while matches!(self.peek(), Some(Tok::Op)) {
            self.pos += 1;
            let rhs = self.term()?;
            acc = FactorTree::nest(acc, rhs);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<FactorTree> {
        let atom = self.atom()?;
        if let Some(Tok::Power(k)) = self.peek() {
            let k = *k;
            let off = self.offset();
            self.pos += 1;
            if k == 0 {
                return Err(Error::Parse {
                    offset: off,
                    message: "power must be at least 1".into(),
                });
            }
            let mut acc = atom.clone();
            for _ in 1..k {
                acc = FactorTree::nest(acc, atom.clone());
            }
            return Ok(acc);
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<FactorTree> {
        match self.peek().cloned() {
            Some(Tok::Name(name)) => {
                self.pos += 1;
                Ok(FactorTree::leaf(self.walk_from_names(&[name])?))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                // A group is a sub-expression unless it holds only bare
                // names, in which case it is a spelled-out walk.
                let mut depth = 1usize;
                let mut names_only = true;
                let mut names = Vec::new();
                let mut j = self.pos;
                while j < self.end {
                    match &self.toks[j].1 {
                        Tok::LParen => {
                            depth += 1;
                            names_only = false;
                        }
                        Tok::RParen => {
                            depth -= 1;
                            if depth == 0 {
                                break;
                            }
                        }
                        Tok::Name(n) => names.push(n.clone()),
                        _ => names_only = false,
                    }
                    j += 1;
                }
                if depth != 0 {
                    return Err(Error::Parse {
                        offset: self.offset(),
                        message: "unbalanced parenthesis".into(),
                    });
                }
                if names_only && !names.is_empty() {
                    self.pos = j + 1;
                    return Ok(FactorTree::leaf(self.walk_from_names(&names)?));
                }
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(Error::Parse {
                        offset: self.offset(),
                        message: "expected )".into(),
                    }),
                }
            }
            _ => Err(Error::Parse {
                offset: self.offset(),
                message: "expected a walk or (".into(),
            }),
        }
    }

    fn walk_from_names(&self, names: &[String]) -> Result<Walk> {
        if names.len() == 1 {
            return parse_walk(self.q, &names[0]);
        }
        walk_of_names(self.q, names)
    }
}
