//! Walks and the nesting product.
//!
//! A walk is a vertex sequence whose consecutive pairs are edges; its length
//! is its edge count. Nesting `a ⊙ b` substitutes the full vertex sequence of
//! a cycle `b` for the last appearance of its base vertex in `a`; pairs that
//! are not canonical nest to the distinguished zero, which is absorbing.
//! Trivial walks act as local identities.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::quiver::{Quiver, VertexId};

/// A walk on a quiver. Equality, ordering (shortlex) and hashing look only at
/// the vertex sequence, so walks on a subquiver compare naturally with walks
/// on the parent graph.
#[derive(Clone)]
pub struct Walk {
    quiver: Quiver,
    verts: Vec<VertexId>,
}

impl PartialEq for Walk {
    fn eq(&self, other: &Self) -> bool {
        self.verts == other.verts
    }
}

impl Eq for Walk {}

impl PartialOrd for Walk {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Walk {
    fn cmp(&self, other: &Self) -> Ordering {
        self.verts
            .len()
            .cmp(&other.verts.len())
            .then_with(|| self.verts.cmp(&other.verts))
    }
}

impl Hash for Walk {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.verts.hash(state);
    }
}

impl fmt::Display for Walk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.quiver.single_char_names() {
            for &v in &self.verts {
                write!(f, "{}", self.quiver.vertex_name(v))?;
            }
            Ok(())
        } else {
            write!(f, "(")?;
            for (i, &v) in self.verts.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.quiver.vertex_name(v))?;
            }
            write!(f, ")")
        }
    }
}

impl fmt::Debug for Walk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Walk({self})")
    }
}

/// Result of a nesting product: a walk, or the absorbing zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NestResult {
    Zero,
    Walk(Walk),
}

impl NestResult {
    pub fn is_zero(&self) -> bool {
        matches!(self, NestResult::Zero)
    }

    pub fn walk(&self) -> Option<&Walk> {
        match self {
            NestResult::Zero => None,
            NestResult::Walk(w) => Some(w),
        }
    }

    pub fn into_walk(self) -> Option<Walk> {
        match self {
            NestResult::Zero => None,
            NestResult::Walk(w) => Some(w),
        }
    }
}

impl Walk {
    /// Validates the sequence against the quiver: non-empty, all vertices
    /// present, every consecutive pair an edge.
    pub fn new(quiver: Quiver, verts: Vec<VertexId>) -> Result<Walk> {
        if verts.is_empty() {
            return Err(Error::EmptyWalk);
        }
        for &v in &verts {
            if !quiver.has_vertex(v) {
                return Err(Error::VertexNotPresent(quiver.vertex_name(v).to_string()));
            }
        }
        for pair in verts.windows(2) {
            if !quiver.has_edge(pair[0], pair[1]) {
                return Err(Error::NotAWalk(
                    quiver.vertex_name(pair[0]).to_string(),
                    quiver.vertex_name(pair[1]).to_string(),
                ));
            }
        }
        Ok(Walk { quiver, verts })
    }

    /// Internal constructor for sequences already known to be walks.
    pub(crate) fn new_unchecked(quiver: Quiver, verts: Vec<VertexId>) -> Walk {
        debug_assert!(!verts.is_empty());
        Walk { quiver, verts }
    }

    /// The length-zero walk at `v`.
    pub fn trivial(quiver: &Quiver, v: VertexId) -> Result<Walk> {
        Walk::new(quiver.clone(), vec![v])
    }

    /// Re-validates this vertex sequence on another quiver (e.g. lifting a
    /// subquiver cycle to the parent graph).
    pub fn on_quiver(&self, quiver: &Quiver) -> Result<Walk> {
        Walk::new(quiver.clone(), self.verts.clone())
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.verts
    }

    /// Edge count; zero for a trivial walk, which still visits a vertex.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.verts.len() - 1
    }

    pub fn is_trivial(&self) -> bool {
        self.verts.len() == 1
    }

    /// First vertex.
    pub fn head(&self) -> VertexId {
        self.verts[0]
    }

    /// Last vertex.
    pub fn tail(&self) -> VertexId {
        *self.verts.last().unwrap()
    }

    /// Equal endpoints. The trivial walk counts as a cycle.
    pub fn is_cycle(&self) -> bool {
        self.head() == self.tail()
    }

    /// Distinct endpoints.
    pub fn is_open(&self) -> bool {
        !self.is_cycle()
    }

    pub fn visits(&self, v: VertexId) -> bool {
        self.verts.contains(&v)
    }

    pub fn vertex_set(&self) -> BTreeSet<VertexId> {
        self.verts.iter().copied().collect()
    }

    /// All vertices pairwise distinct. Trivial walks qualify.
    pub fn is_simple_path(&self) -> bool {
        let set: BTreeSet<_> = self.verts.iter().collect();
        set.len() == self.verts.len()
    }

    /// A cycle whose internal vertices are pairwise distinct and different
    /// from the base. Trivial walks qualify.
    pub fn is_simple_cycle(&self) -> bool {
        if !self.is_cycle() {
            return false;
        }
        if self.is_trivial() {
            return true;
        }
        let base = self.head();
        let inner = &self.verts[1..self.verts.len() - 1];
        let set: BTreeSet<_> = inner.iter().collect();
        set.len() == inner.len() && !inner.contains(&base)
    }

    /// Irreducible walks are exactly the simple paths and simple cycles.
    pub fn is_irreducible(&self) -> bool {
        self.is_simple_path() || self.is_simple_cycle()
    }

    pub(crate) fn same_quiver(&self, other: &Walk) -> bool {
        self.quiver == other.quiver
    }

    /// Index of the last appearance of `v`, if visited.
    pub fn last_occurrence(&self, v: VertexId) -> Option<usize> {
        self.verts.iter().rposition(|&u| u == v)
    }

    /// The sub-walk over positions `i..=j`.
    pub(crate) fn segment(&self, i: usize, j: usize) -> Walk {
        debug_assert!(i < j && j < self.verts.len());
        Walk::new_unchecked(self.quiver.clone(), self.verts[i..=j].to_vec())
    }

    /// The walk with positions `i..=j` collapsed to the single vertex at `i`;
    /// only meaningful when the two positions hold the same vertex.
    pub(crate) fn excise(&self, i: usize, j: usize) -> Walk {
        debug_assert!(i < j && j < self.verts.len());
        debug_assert_eq!(self.verts[i], self.verts[j]);
        let mut verts = Vec::with_capacity(self.verts.len() - (j - i));
        verts.extend_from_slice(&self.verts[..=i]);
        verts.extend_from_slice(&self.verts[j + 1..]);
        Walk::new_unchecked(self.quiver.clone(), verts)
    }

    /// Canonical-pair test: `b` must be a cycle off some vertex `base` that
    /// `a` visits, and either both are cycles off `base`, or no vertex other
    /// than `base` seen strictly before the last appearance of `base` in `a`
    /// is visited by `b`.
    pub fn is_canonical_pair(a: &Walk, b: &Walk) -> Result<bool> {
        if !a.same_quiver(b) {
            return Err(Error::DifferentQuivers);
        }
        if !b.is_cycle() {
            return Ok(false);
        }
        let base = b.head();
        let Some(cut) = a.last_occurrence(base) else {
            return Ok(false);
        };
        if a.is_cycle() && a.head() == base {
            return Ok(true);
        }
        let b_set = b.vertex_set();
        Ok(a.verts[..cut]
            .iter()
            .all(|&v| v == base || !b_set.contains(&v)))
    }

    /// Nesting product. Trivial walks short-circuit as local identities:
    /// `(v) ⊙ w = w ⊙ (v) = w` for any `w` visiting `v` (this is slightly
    /// wider than the canonical-pair test, which asks the right operand to be
    /// a cycle). Everything else follows the substitution rule, with zero for
    /// non-canonical pairs.
    ///
    /// Panics if the walks live on different quivers.
    pub fn nest(&self, b: &Walk) -> NestResult {
        assert!(
            self.same_quiver(b),
            "nesting needs both walks on the same quiver"
        );
        if self.is_trivial() {
            return if b.visits(self.head()) {
                NestResult::Walk(b.clone())
            } else {
                NestResult::Zero
            };
        }
        if b.is_trivial() {
            return if self.visits(b.head()) {
                NestResult::Walk(self.clone())
            } else {
                NestResult::Zero
            };
        }
        match Walk::is_canonical_pair(self, b) {
            Ok(true) => {}
            _ => return NestResult::Zero,
        }
        let cut = self.last_occurrence(b.head()).unwrap();
        let mut verts = Vec::with_capacity(self.verts.len() + b.verts.len() - 1);
        verts.extend_from_slice(&self.verts[..cut]);
        verts.extend_from_slice(&b.verts);
        verts.extend_from_slice(&self.verts[cut + 1..]);
        NestResult::Walk(Walk::new_unchecked(self.quiver.clone(), verts))
    }

    /// The index in `self` where a cycle off `base` would be substituted.
    /// Depends only on `self` and the base vertex, which is what makes
    /// one-sided distributivity over unions work.
    pub fn cut_position(&self, base: VertexId) -> Option<usize> {
        self.last_occurrence(base)
    }

    /// Concatenation: defined when `self` ends where `b` starts, zero
    /// otherwise. For cycles off a common base this agrees with nesting.
    pub fn concat(&self, b: &Walk) -> NestResult {
        assert!(
            self.same_quiver(b),
            "concatenation needs both walks on the same quiver"
        );
        if self.tail() != b.head() {
            return NestResult::Zero;
        }
        let mut verts = self.verts.clone();
        verts.extend_from_slice(&b.verts[1..]);
        NestResult::Walk(Walk::new_unchecked(self.quiver.clone(), verts))
    }

    /// `p`-fold nesting power of a cycle; the zeroth power is the trivial
    /// walk at the base. Open walks only admit the first power.
    pub fn nest_power(&self, p: u32) -> Result<Walk> {
        if self.is_open() {
            if p == 1 {
                return Ok(self.clone());
            }
            return Err(Error::OpenWalkPower(p));
        }
        if p == 0 {
            return Walk::trivial(&self.quiver, self.head());
        }
        let mut acc = self.clone();
        for _ in 1..p {
            acc = match acc.concat(self) {
                NestResult::Walk(w) => w,
                NestResult::Zero => unreachable!("cycle powers always concatenate"),
            };
        }
        Ok(acc)
    }

    /// Proper two-factor splittings: every pair `(x, y)` of non-trivial walks
    /// with `x ⊙ y == self`. Candidates are the contiguous cycle segments of
    /// the vertex sequence; each is verified by recomposition.
    pub fn proper_splits(&self) -> Vec<(Walk, Walk)> {
        let n = self.verts.len();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if self.verts[i] != self.verts[j] {
                    continue;
                }
                if i == 0 && j == n - 1 {
                    continue; // the outer factor would be trivial
                }
                let y = Walk::new_unchecked(self.quiver.clone(), self.verts[i..=j].to_vec());
                let mut xv = Vec::with_capacity(n - (j - i));
                xv.extend_from_slice(&self.verts[..=i]);
                xv.extend_from_slice(&self.verts[j + 1..]);
                let x = Walk::new_unchecked(self.quiver.clone(), xv);
                if let NestResult::Walk(w) = x.nest(&y) {
                    if w == *self && seen.insert((x.verts.clone(), y.verts.clone())) {
                        out.push((x, y));
                    }
                }
            }
        }
        out
    }

    /// Divisibility: `d` divides `self` when walks `a`, `b` (possibly
    /// trivial) exist with `self = (a ⊙ d) ⊙ b` or `self = a ⊙ (d ⊙ b)`.
    /// Exhaustive search over splittings; lengths above `bound` error.
    pub fn divides(d: &Walk, w: &Walk, bound: usize) -> Result<bool> {
        if w.len() > bound {
            return Err(Error::LengthBound {
                len: w.len(),
                bound,
            });
        }
        if d.is_trivial() {
            return Ok(w.visits(d.head()));
        }
        if d == w {
            return Ok(true);
        }
        let splits = w.proper_splits();
        // One trivial companion: w = a ⊙ d or w = d ⊙ b.
        if splits.iter().any(|(x, y)| x == d || y == d) {
            return Ok(true);
        }
        // w = (a ⊙ d) ⊙ b with everything non-trivial.
        for (u, _b) in &splits {
            if u.proper_splits().iter().any(|(_, dd)| dd == d) {
                return Ok(true);
            }
        }
        // w = a ⊙ (d ⊙ b) with everything non-trivial.
        for (_a, y) in &splits {
            if y.proper_splits().iter().any(|(dd, _)| dd == d) {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{make_family, Family};

    fn lk4() -> Quiver {
        make_family(Family::CompleteWithLoops(4)).unwrap()
    }

    fn w(q: &Quiver, s: &str) -> Walk {
        let verts: Vec<VertexId> = s
            .chars()
            .map(|c| q.require_vertex(&c.to_string()).unwrap())
            .collect();
        Walk::new(q.clone(), verts).unwrap()
    }

    #[test]
    fn classification() {
        let q = lk4();
        let t = w(&q, "1");
        assert!(t.is_trivial() && t.is_cycle() && !t.is_open());
        assert!(t.is_simple_path() && t.is_simple_cycle() && t.is_irreducible());
        let open = w(&q, "123");
        assert!(open.is_open() && open.is_simple_path() && open.is_irreducible());
        let cyc = w(&q, "1231");
        assert!(cyc.is_cycle() && cyc.is_simple_cycle() && cyc.is_irreducible());
        let not_simple = w(&q, "1331");
        assert!(!not_simple.is_simple_cycle() && !not_simple.is_irreducible());
        assert_eq!(w(&q, "12321").len(), 4);
    }

    #[test]
    fn nesting_matches_worked_products() {
        let q = lk4();
        // 11 ⊙ 131 keeps the nested cycle at the last 1.
        assert_eq!(
            w(&q, "11").nest(&w(&q, "131")),
            NestResult::Walk(w(&q, "1131"))
        );
        // 131 ⊙ 11 differs: nesting does not commute.
        assert_eq!(
            w(&q, "131").nest(&w(&q, "11")),
            NestResult::Walk(w(&q, "1311"))
        );
        // (12 ⊙ 242) ⊙ 11 = 11242, but 12 ⊙ (242 ⊙ 11) = 0: not associative.
        let left = w(&q, "12").nest(&w(&q, "242")).into_walk().unwrap();
        assert_eq!(left.nest(&w(&q, "11")), NestResult::Walk(w(&q, "11242")));
        assert_eq!(w(&q, "242").nest(&w(&q, "11")), NestResult::Zero);
    }

    #[test]
    fn canonical_pair_clauses() {
        let q = lk4();
        // Both cycles off 1: always canonical.
        assert!(Walk::is_canonical_pair(&w(&q, "1231"), &w(&q, "11")).unwrap());
        // 212 visits 1? No: right operand must be a cycle off a visited vertex.
        assert!(!Walk::is_canonical_pair(&w(&q, "242"), &w(&q, "11")).unwrap());
        // Open walk with an early vertex shared with the cycle: not canonical.
        assert!(!Walk::is_canonical_pair(&w(&q, "212"), &w(&q, "121")).unwrap());
        // Open right operand: never canonical.
        assert!(!Walk::is_canonical_pair(&w(&q, "121"), &w(&q, "12")).unwrap());
        let other = make_family(Family::CompleteWithLoops(4)).unwrap();
        let other = other
            .delete_vertex(other.require_vertex("4").unwrap())
            .unwrap();
        assert_eq!(
            Walk::is_canonical_pair(&w(&q, "121"), &w(&other, "121")),
            Err(Error::DifferentQuivers)
        );
    }

    #[test]
    fn trivial_walks_are_local_identities() {
        let q = lk4();
        let t1 = w(&q, "1");
        let open = w(&q, "12");
        assert_eq!(t1.nest(&open), NestResult::Walk(open.clone()));
        assert_eq!(open.nest(&t1), NestResult::Walk(open.clone()));
        let t3 = w(&q, "3");
        assert_eq!(open.nest(&t3), NestResult::Zero);
        assert_eq!(t3.nest(&open), NestResult::Zero);
    }

    #[test]
    fn lengths_add_and_cut_is_stable() {
        let q = lk4();
        let a = w(&q, "1231");
        for b in ["11", "121", "11231"].map(|s| w(&q, s)) {
            if let NestResult::Walk(p) = a.nest(&b) {
                assert_eq!(p.len(), a.len() + b.len());
            }
        }
        // The substitution point depends only on the left operand and base.
        let c = w(&q, "12321");
        let b1 = w(&q, "232");
        let b2 = w(&q, "22");
        assert_eq!(c.cut_position(b1.head()), c.cut_position(b2.head()));
    }

    #[test]
    fn powers() {
        let q = lk4();
        let c = w(&q, "121");
        assert_eq!(c.nest_power(0).unwrap(), w(&q, "1"));
        assert_eq!(c.nest_power(3).unwrap(), w(&q, "1212121"));
        let open = w(&q, "12");
        assert_eq!(open.nest_power(1).unwrap(), open);
        assert!(matches!(open.nest_power(2), Err(Error::OpenWalkPower(2))));
        assert!(matches!(open.nest_power(0), Err(Error::OpenWalkPower(0))));
    }

    #[test]
    fn divisibility_basics() {
        let q = lk4();
        let walk = w(&q, "13311");
        assert!(Walk::divides(&w(&q, "33"), &walk, 12).unwrap());
        assert!(Walk::divides(&w(&q, "11"), &walk, 12).unwrap());
        assert!(Walk::divides(&w(&q, "1331"), &walk, 12).unwrap());
        // 131 is a leaf of the factorization (131 ⊙ 33) ⊙ 11, yet no
        // two-sided chain (a ⊙ 131) ⊙ b or a ⊙ (131 ⊙ b) recomposes the
        // walk: products do not reassociate, so factors need not divide.
        assert!(!Walk::divides(&w(&q, "131"), &walk, 12).unwrap());
        assert!(Walk::divides(&walk, &walk, 12).unwrap());
        assert!(Walk::divides(&w(&q, "1"), &walk, 12).unwrap());
        assert!(!Walk::divides(&w(&q, "121"), &walk, 12).unwrap());
        assert!(!Walk::divides(&w(&q, "2"), &walk, 12).unwrap());
        let long = w(&q, "12121212121212");
        assert!(matches!(
            Walk::divides(&w(&q, "121"), &long, 12),
            Err(Error::LengthBound { len: 13, bound: 12 })
        ));
    }

    #[test]
    fn proper_splits_recompose() {
        let q = lk4();
        let walk = w(&q, "13311");
        let splits = walk.proper_splits();
        assert!(!splits.is_empty());
        for (x, y) in &splits {
            assert!(!x.is_trivial() && !y.is_trivial());
            assert_eq!(x.nest(y), NestResult::Walk(walk.clone()));
        }
        // A simple cycle admits no proper splitting.
        assert!(w(&q, "1231").proper_splits().is_empty());
    }
}
