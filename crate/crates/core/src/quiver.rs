//! Finite directed graphs with at most one edge per ordered vertex pair.
//!
//! Self-loops are allowed; an undirected graph is modelled as a digraph with
//! both orientations of every edge. Vertex ids are dense indices into a name
//! table that is shared, unchanged, by every subquiver obtained through
//! vertex deletion, so walks taken on a subquiver compare naturally with
//! walks on the parent graph.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::walk::Walk;

/// Dense index into a quiver's vertex table.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub(crate) u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

const RESERVED_NAME_CHARS: &[char] = &['(', ')', '{', '}', '.', '^', '*', ',', '⊙', '∗'];

fn check_name(name: &str) -> Result<()> {
    if name.is_empty()
        || name.chars().any(|c| c.is_whitespace())
        || name.contains(RESERVED_NAME_CHARS)
    {
        return Err(Error::BadVertexName(name.to_string()));
    }
    Ok(())
}

struct Inner {
    names: Arc<Vec<String>>,
    /// Membership per id; deletion clears entries without renumbering.
    active: Vec<bool>,
    /// Sorted out-neighbour lists; empty for inactive vertices.
    out: Vec<Vec<VertexId>>,
    labels: BTreeMap<(VertexId, VertexId), String>,
}

/// A quiver. Cheap to clone; vertex deletion produces a new value sharing
/// the same name table.
#[derive(Clone)]
pub struct Quiver {
    inner: Arc<Inner>,
}

impl fmt::Debug for Quiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Quiver(")?;
        let mut first = true;
        for v in self.vertices() {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{}", self.vertex_name(v))?;
        }
        write!(f, ";")?;
        for (u, v) in self.edges() {
            write!(f, " {}->{}", self.vertex_name(u), self.vertex_name(v))?;
        }
        write!(f, ")")
    }
}

impl PartialEq for Quiver {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.inner, &other.inner) {
            return true;
        }
        (Arc::ptr_eq(&self.inner.names, &other.inner.names)
            || self.inner.names == other.inner.names)
            && self.inner.active == other.inner.active
            && self.inner.out == other.inner.out
    }
}

impl Eq for Quiver {}

impl Quiver {
    /// Builds a quiver from vertex names and named edges.
    pub fn new<S: AsRef<str>>(names: Vec<String>, edges: &[(S, S)]) -> Result<Quiver> {
        let mut seen = BTreeSet::new();
        for n in &names {
            check_name(n)?;
            if !seen.insert(n.clone()) {
                return Err(Error::DuplicateVertex(n.clone()));
            }
        }
        let lookup: BTreeMap<&str, u32> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i as u32))
            .collect();
        let mut idx_edges = Vec::with_capacity(edges.len());
        for (t, h) in edges {
            let t = *lookup
                .get(t.as_ref())
                .ok_or_else(|| Error::UnknownVertex(t.as_ref().to_string()))?;
            let h = *lookup
                .get(h.as_ref())
                .ok_or_else(|| Error::UnknownVertex(h.as_ref().to_string()))?;
            idx_edges.push((t, h));
        }
        Self::from_indexed(names, &idx_edges)
    }

    /// Builds a quiver from vertex names and edges given as table indices.
    pub fn from_indexed(names: Vec<String>, edges: &[(u32, u32)]) -> Result<Quiver> {
        let n = names.len();
        let mut out: Vec<Vec<VertexId>> = vec![Vec::new(); n];
        let mut seen = BTreeSet::new();
        for &(t, h) in edges {
            if t as usize >= n {
                return Err(Error::UnknownVertex(format!("#{t}")));
            }
            if h as usize >= n {
                return Err(Error::UnknownVertex(format!("#{h}")));
            }
            if !seen.insert((t, h)) {
                return Err(Error::DuplicateEdge(
                    names[t as usize].clone(),
                    names[h as usize].clone(),
                ));
            }
            out[t as usize].push(VertexId(h));
        }
        for l in &mut out {
            l.sort();
        }
        Ok(Quiver {
            inner: Arc::new(Inner {
                names: Arc::new(names),
                active: vec![true; n],
                out,
                labels: BTreeMap::new(),
            }),
        })
    }

    /// Attaches edge labels ("tail,head" keyed by ids). Missing edges error.
    pub fn with_labels(self, labels: &[((VertexId, VertexId), String)]) -> Result<Quiver> {
        let mut map = BTreeMap::new();
        for ((t, h), lab) in labels {
            if !self.has_edge(*t, *h) {
                return Err(Error::MissingEdge(
                    self.vertex_name(*t).to_string(),
                    self.vertex_name(*h).to_string(),
                ));
            }
            map.insert((*t, *h), lab.clone());
        }
        let inner = &self.inner;
        Ok(Quiver {
            inner: Arc::new(Inner {
                names: inner.names.clone(),
                active: inner.active.clone(),
                out: inner.out.clone(),
                labels: map,
            }),
        })
    }

    /// Number of (active) vertices.
    pub fn vertex_count(&self) -> usize {
        self.inner.active.iter().filter(|a| **a).count()
    }

    /// Number of directed edges.
    pub fn edge_count(&self) -> usize {
        self.inner.out.iter().map(Vec::len).sum()
    }

    /// Active vertices in ascending id order.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.inner
            .active
            .iter()
            .enumerate()
            .filter(|(_, a)| **a)
            .map(|(i, _)| VertexId(i as u32))
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.inner.active.get(v.index()).copied().unwrap_or(false)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.inner.names[v.index()]
    }

    /// Looks a vertex up by name; inactive vertices do not resolve.
    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.inner
            .names
            .iter()
            .position(|n| n == name)
            .map(|i| VertexId(i as u32))
            .filter(|v| self.has_vertex(*v))
    }

    /// Like `vertex_by_name` but with the error the CLI reports.
    pub fn require_vertex(&self, name: &str) -> Result<VertexId> {
        self.vertex_by_name(name)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn out_neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.inner.out[v.index()]
    }

    pub fn has_edge(&self, t: VertexId, h: VertexId) -> bool {
        self.has_vertex(t) && self.inner.out[t.index()].binary_search(&h).is_ok()
    }

    /// All edges in (tail, head) ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.vertices()
            .flat_map(|v| self.out_neighbors(v).iter().map(move |&u| (v, u)))
    }

    pub fn edge_label(&self, t: VertexId, h: VertexId) -> Option<&str> {
        self.inner.labels.get(&(t, h)).map(String::as_str)
    }

    /// True when every vertex name is a single character; walk rendering then
    /// uses the compact concatenated form.
    pub fn single_char_names(&self) -> bool {
        self.vertices()
            .all(|v| self.vertex_name(v).chars().count() == 1)
    }

    /// Sorted active ids; used as a memoization key for subgraph recursions.
    pub fn active_key(&self) -> Vec<u32> {
        self.vertices().map(|v| v.0).collect()
    }

    /// The subquiver with `remove` deleted: same name table and ids, minus the
    /// removed vertices and every edge touching them.
    pub fn delete_vertices(&self, remove: &BTreeSet<VertexId>) -> Result<Quiver> {
        for v in remove {
            if !self.has_vertex(*v) {
                return Err(Error::VertexNotPresent(
                    self.inner
                        .names
                        .get(v.index())
                        .cloned()
                        .unwrap_or_else(|| format!("#{}", v.0)),
                ));
            }
        }
        let inner = &self.inner;
        let mut active = inner.active.clone();
        for v in remove {
            active[v.index()] = false;
        }
        let mut out: Vec<Vec<VertexId>> = vec![Vec::new(); inner.out.len()];
        for (i, l) in inner.out.iter().enumerate() {
            if active[i] {
                out[i] = l.iter().copied().filter(|u| active[u.index()]).collect();
            }
        }
        let labels = inner
            .labels
            .iter()
            .filter(|((t, h), _)| active[t.index()] && active[h.index()])
            .map(|(k, v)| (*k, v.clone()))
            .collect();
        Ok(Quiver {
            inner: Arc::new(Inner {
                names: inner.names.clone(),
                active,
                out,
                labels,
            }),
        })
    }

    /// Convenience: delete a single vertex.
    pub fn delete_vertex(&self, v: VertexId) -> Result<Quiver> {
        self.delete_vertices(&BTreeSet::from([v]))
    }

    /// True when every edge has its reverse (self-loops are their own reverse).
    pub fn is_bidirectional(&self) -> bool {
        self.edges().all(|(t, h)| self.has_edge(h, t))
    }

    /// First edge lacking a reverse, for error reporting.
    pub fn first_one_way_edge(&self) -> Option<(VertexId, VertexId)> {
        self.edges().find(|&(t, h)| !self.has_edge(h, t))
    }

    /// Weak connectivity over the underlying undirected graph.
    pub fn is_connected(&self) -> bool {
        let mut verts = self.vertices();
        let Some(start) = verts.next() else {
            return true;
        };
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        // Directions ignored: gather in-neighbours by scanning out-lists.
        let mut undirected: BTreeMap<VertexId, BTreeSet<VertexId>> = BTreeMap::new();
        for (t, h) in self.edges() {
            undirected.entry(t).or_default().insert(h);
            undirected.entry(h).or_default().insert(t);
        }
        while let Some(v) = queue.pop_front() {
            if let Some(ns) = undirected.get(&v) {
                for &u in ns {
                    if seen.insert(u) {
                        queue.push_back(u);
                    }
                }
            }
        }
        self.vertices().all(|v| seen.contains(&v))
    }

    /// All simple paths from `a` to `w` (every vertex distinct), in shortlex
    /// order. Equal endpoints are an error: the trivial path is the only
    /// simple path from a vertex to itself and enters through the star's
    /// zeroth power, not through this enumeration.
    pub fn simple_paths(&self, a: VertexId, w: VertexId) -> Result<Vec<Walk>> {
        self.check_present(a)?;
        self.check_present(w)?;
        if a == w {
            return Err(Error::SameEndpoints(self.vertex_name(a).to_string()));
        }
        let mut acc = Vec::new();
        let mut stack = vec![a];
        let mut on_path = BTreeSet::from([a]);
        self.path_dfs(w, &mut stack, &mut on_path, &mut acc);
        acc.sort();
        Ok(acc)
    }

    fn path_dfs(
        &self,
        target: VertexId,
        stack: &mut Vec<VertexId>,
        on_path: &mut BTreeSet<VertexId>,
        acc: &mut Vec<Walk>,
    ) {
        let cur = *stack.last().unwrap();
        for &u in self.out_neighbors(cur) {
            if u == target {
                let mut verts = stack.clone();
                verts.push(u);
                acc.push(Walk::new_unchecked(self.clone(), verts));
                continue;
            }
            if on_path.contains(&u) {
                continue;
            }
            stack.push(u);
            on_path.insert(u);
            self.path_dfs(target, stack, on_path, acc);
            stack.pop();
            on_path.remove(&u);
        }
    }

    /// All non-trivial simple cycles based at `v` (internal vertices distinct
    /// and different from `v`; the self-loop counts), in shortlex order.
    pub fn simple_cycles_at(&self, v: VertexId) -> Result<Vec<Walk>> {
        self.check_present(v)?;
        let mut acc = Vec::new();
        let mut stack = vec![v];
        let mut internal = BTreeSet::new();
        self.cycle_dfs(v, &mut stack, &mut internal, &mut acc);
        acc.sort();
        Ok(acc)
    }

    fn cycle_dfs(
        &self,
        base: VertexId,
        stack: &mut Vec<VertexId>,
        internal: &mut BTreeSet<VertexId>,
        acc: &mut Vec<Walk>,
    ) {
        let cur = *stack.last().unwrap();
        for &u in self.out_neighbors(cur) {
            if u == base {
                let mut verts = stack.clone();
                verts.push(u);
                acc.push(Walk::new_unchecked(self.clone(), verts));
                continue;
            }
            if internal.contains(&u) {
                continue;
            }
            stack.push(u);
            internal.insert(u);
            self.cycle_dfs(base, stack, internal, acc);
            stack.pop();
            internal.remove(&u);
        }
    }

    /// Exact walk counts from `a` to `w` for every length `0..=max_len`.
    pub fn count_walks(&self, a: VertexId, w: VertexId, max_len: usize) -> Result<Vec<BigUint>> {
        self.check_present(a)?;
        self.check_present(w)?;
        let n = self.inner.names.len();
        let mut cur: Vec<BigUint> = vec![BigUint::zero(); n];
        cur[a.index()] = BigUint::one();
        let mut counts = Vec::with_capacity(max_len + 1);
        counts.push(cur[w.index()].clone());
        for _ in 0..max_len {
            let mut next: Vec<BigUint> = vec![BigUint::zero(); n];
            for v in self.vertices() {
                if cur[v.index()].is_zero() {
                    continue;
                }
                for &u in self.out_neighbors(v) {
                    let add = cur[v.index()].clone();
                    next[u.index()] += add;
                }
            }
            counts.push(next[w.index()].clone());
            cur = next;
        }
        Ok(counts)
    }

    /// Every walk from `a` to `w` of length at most `max_len`, shortlex
    /// ordered and duplicate-free. `cap` bounds the number of walks explored;
    /// exceeding it is an error.
    pub fn enumerate_walks(
        &self,
        a: VertexId,
        w: VertexId,
        max_len: usize,
        cap: usize,
    ) -> Result<BTreeSet<Walk>> {
        self.check_present(a)?;
        self.check_present(w)?;
        let mut out = BTreeSet::new();
        let mut frontier: Vec<Vec<VertexId>> = vec![vec![a]];
        let mut explored = 1usize;
        if a == w {
            out.insert(Walk::new_unchecked(self.clone(), vec![a]));
        }
        for _ in 0..max_len {
            let mut next = Vec::new();
            for prefix in &frontier {
                let cur = *prefix.last().unwrap();
                for &u in self.out_neighbors(cur) {
                    let mut verts = prefix.clone();
                    verts.push(u);
                    explored += 1;
                    if explored > cap || out.len() >= cap {
                        return Err(Error::CapExceeded(cap));
                    }
                    if u == w {
                        out.insert(Walk::new_unchecked(self.clone(), verts.clone()));
                    }
                    next.push(verts);
                }
            }
            frontier = next;
        }
        Ok(out)
    }

    fn check_present(&self, v: VertexId) -> Result<()> {
        if self.has_vertex(v) {
            Ok(())
        } else {
            Err(Error::VertexNotPresent(
                self.inner
                    .names
                    .get(v.index())
                    .cloned()
                    .unwrap_or_else(|| format!("#{}", v.0)),
            ))
        }
    }
}

/// Built-in graph families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Complete bidirectional graph on `1..=n`, no loops.
    Complete(u32),
    /// Complete bidirectional graph on `1..=n` with a loop on every vertex.
    CompleteWithLoops(u32),
    /// Bidirectional cycle, vertices `0..n-1` clockwise.
    Cycle(u32),
    /// Bidirectional path 1 - 2 - ... - n.
    Path(u32),
    /// Radius-`radius` ball of the degree-`degree` Bethe lattice rooted at
    /// vertex 0, vertices numbered in BFS order.
    TruncatedBethe { degree: u32, radius: u32 },
}

impl Family {
    /// Parses a spec such as `cycle(5)` or `truncated_bethe(3,2)`.
    pub fn parse(spec: &str) -> Result<Family> {
        let spec = spec.trim();
        let (name, rest) = match spec.find('(') {
            Some(i) if spec.ends_with(')') => (&spec[..i], &spec[i + 1..spec.len() - 1]),
            _ => {
                return Err(Error::UnknownFamily(spec.to_string()));
            }
        };
        let params: Vec<u32> = rest
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::BadFamilyParams(format!("`{}` is not a number", p.trim())))
            })
            .collect::<Result<_>>()?;
        let want = |k: usize| -> Result<()> {
            if params.len() == k {
                Ok(())
            } else {
                Err(Error::BadFamilyParams(format!(
                    "`{name}` takes {k} parameter(s), got {}",
                    params.len()
                )))
            }
        };
        match name {
            "complete" => {
                want(1)?;
                Ok(Family::Complete(params[0]))
            }
            "complete_with_loops" => {
                want(1)?;
                Ok(Family::CompleteWithLoops(params[0]))
            }
            "cycle" => {
                want(1)?;
                Ok(Family::Cycle(params[0]))
            }
            "path" => {
                want(1)?;
                Ok(Family::Path(params[0]))
            }
            "truncated_bethe" => {
                want(2)?;
                Ok(Family::TruncatedBethe {
                    degree: params[0],
                    radius: params[1],
                })
            }
            _ => Err(Error::UnknownFamily(name.to_string())),
        }
    }
}

/// Generates a member of a built-in family with its canonical labelling.
pub fn make_family(family: Family) -> Result<Quiver> {
    match family {
        Family::Complete(n) | Family::CompleteWithLoops(n) => {
            if n == 0 {
                return Err(Error::BadFamilyParams("need at least 1 vertex".into()));
            }
            let with_loops = matches!(family, Family::CompleteWithLoops(_));
            let names: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
            let mut edges = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    if i != j || with_loops {
                        edges.push((i, j));
                    }
                }
            }
            Quiver::from_indexed(names, &edges)
        }
        Family::Cycle(n) => {
            if n < 3 {
                return Err(Error::BadFamilyParams(
                    "a cycle needs at least 3 vertices".into(),
                ));
            }
            let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
            let mut edges = Vec::new();
            for i in 0..n {
                let j = (i + 1) % n;
                edges.push((i, j));
                edges.push((j, i));
            }
            Quiver::from_indexed(names, &edges)
        }
        Family::Path(n) => {
            if n == 0 {
                return Err(Error::BadFamilyParams("need at least 1 vertex".into()));
            }
            let names: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
            let mut edges = Vec::new();
            for i in 0..n.saturating_sub(1) {
                edges.push((i, i + 1));
                edges.push((i + 1, i));
            }
            Quiver::from_indexed(names, &edges)
        }
        Family::TruncatedBethe { degree, radius } => {
            if degree == 0 {
                return Err(Error::BadFamilyParams(
                    "coordination number must be positive".into(),
                ));
            }
            // BFS order: the root gets `degree` children, every later internal
            // vertex gets `degree - 1`.
            let mut names = vec!["0".to_string()];
            let mut edges: Vec<(u32, u32)> = Vec::new();
            let mut frontier = vec![0u32];
            let mut next_id = 1u32;
            for depth in 0..radius {
                let mut next = Vec::new();
                for &v in &frontier {
                    let kids = if depth == 0 { degree } else { degree - 1 };
                    for _ in 0..kids {
                        let c = next_id;
                        next_id += 1;
                        names.push(c.to_string());
                        edges.push((v, c));
                        edges.push((c, v));
                        next.push(c);
                    }
                }
                frontier = next;
            }
            Quiver::from_indexed(names, &edges)
        }
    }
}
