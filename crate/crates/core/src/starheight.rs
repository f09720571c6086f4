//! Star heights of walk languages.
//!
//! The recursion mirrors how walk sums are assembled: the closed walks at a
//! vertex sit under one star whose body dresses each cycle's internal
//! vertices on successively smaller subgraphs, so the height at a vertex is
//! one more than the deepest height among those internals (zero when no
//! cycle passes through). For connected undirected graphs the recursion
//! collapses to a closed form read off a longest simple path. Cycle rank is
//! provided as an independent lower-bound oracle.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::quiver::{Quiver, VertexId};
use crate::walk::Walk;

/// Longest-path search and cycle rank refuse graphs larger than this.
pub const DEFAULT_VERTEX_BOUND: usize = 12;

type HeightMemo = HashMap<(Vec<u32>, VertexId), u32>;

/// Star height of the set of closed walks at `mu`: zero when no cycle
/// passes through `mu`, otherwise one more than the largest height among
/// cycle internals, each taken on the subgraph that deletes `mu` and the
/// internals before it.
pub fn star_height_cycles(q: &Quiver, mu: VertexId) -> Result<u32> {
    Walk::trivial(q, mu)?;
    let mut memo = HeightMemo::new();
    cycles_height_rec(q, mu, &mut memo)
}

fn cycles_height_rec(h: &Quiver, mu: VertexId, memo: &mut HeightMemo) -> Result<u32> {
    let key = (h.active_key(), mu);
    if let Some(&hit) = memo.get(&key) {
        return Ok(hit);
    }
    let cycles = h.simple_cycles_at(mu)?;
    let value = if cycles.is_empty() {
        0
    } else {
        let mut inner = 0;
        for c in &cycles {
            let verts = c.vertices();
            let mut sub = if verts.len() > 2 {
                Some(h.delete_vertex(mu)?)
            } else {
                None
            };
            for j in 1..verts.len().saturating_sub(1) {
                let s = sub.as_ref().expect("internal vertices imply a subgraph");
                inner = inner.max(cycles_height_rec(s, verts[j], memo)?);
                if j + 1 < verts.len() - 1 {
                    sub = Some(s.delete_vertex(verts[j])?);
                }
            }
        }
        1 + inner
    };
    memo.insert(key, value);
    Ok(value)
}

/// Star height of the set of walks from `a` to `w` for distinct endpoints:
/// the maximum, over simple paths and over each path vertex, of the closed
/// height at that vertex on the subgraph deleting the vertices before it.
pub fn star_height_open(q: &Quiver, a: VertexId, w: VertexId) -> Result<u32> {
    Walk::trivial(q, a)?;
    Walk::trivial(q, w)?;
    if a == w {
        return Err(Error::SameEndpoints(q.vertex_name(a).to_string()));
    }
    let mut memo = HeightMemo::new();
    let mut best = 0;
    for p in q.simple_paths(a, w)? {
        let verts = p.vertices().to_vec();
        best = best.max(cycles_height_rec(q, verts[0], &mut memo)?);
        let mut h = q.delete_vertex(verts[0])?;
        for i in 1..verts.len() {
            best = best.max(cycles_height_rec(&h, verts[i], &mut memo)?);
            if i + 1 < verts.len() {
                h = h.delete_vertex(verts[i])?;
            }
        }
    }
    Ok(best)
}

/// Longest simple paths out of `a`: the maximum length, and for each vertex
/// where some maximum-length path ends, the first such path found with
/// neighbours explored in ascending order, flagged by whether that endpoint
/// carries a loop. Entries are sorted by endpoint. The trivial path counts,
/// so an isolated vertex reports length zero with itself as endpoint.
pub fn longest_simple_paths_from(q: &Quiver, a: VertexId) -> Result<(usize, Vec<(Walk, bool)>)> {
    longest_simple_paths_bounded(q, a, DEFAULT_VERTEX_BOUND)
}

/// `longest_simple_paths_from` with an explicit vertex-count bound.
pub fn longest_simple_paths_bounded(
    q: &Quiver,
    a: VertexId,
    bound: usize,
) -> Result<(usize, Vec<(Walk, bool)>)> {
    Walk::trivial(q, a)?;
    let n = q.vertex_count();
    if n > bound {
        return Err(Error::VertexBound { n, bound });
    }
    let mut best = 0usize;
    let mut ends: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    let mut path = vec![a];
    let mut visited = BTreeSet::from([a]);
    explore(q, &mut path, &mut visited, &mut best, &mut ends);
    let witnesses = ends
        .into_iter()
        .map(|(end, verts)| {
            let walk = Walk::new(q.clone(), verts)?;
            Ok((walk, q.has_edge(end, end)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((best, witnesses))
}

fn explore(
    q: &Quiver,
    path: &mut Vec<VertexId>,
    visited: &mut BTreeSet<VertexId>,
    best: &mut usize,
    ends: &mut BTreeMap<VertexId, Vec<VertexId>>,
) {
    let here = *path.last().expect("path starts non-empty");
    let len = path.len() - 1;
    if len > *best {
        *best = len;
        ends.clear();
    }
    if len == *best {
        ends.entry(here).or_insert_with(|| path.clone());
    }
    for &u in q.out_neighbors(here) {
        if !visited.insert(u) {
            continue;
        }
        path.push(u);
        explore(q, path, visited, best, ends);
        path.pop();
        visited.remove(&u);
    }
}

/// Star height of a connected undirected graph read off a longest path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarHeightReport {
    /// Star height of the closed walks at the queried vertex.
    pub height: u32,
    /// Length of a longest simple path out of the queried vertex.
    pub longest_path_length: usize,
    /// One longest path; ends on a looped vertex whenever any does.
    pub witness: Walk,
    /// Whether the witness ends on a vertex with a loop.
    pub endpoint_has_loop: bool,
}

/// Closed form for connected undirected graphs: the height at `a` is the
/// longest-simple-path length out of `a`, plus one exactly when some
/// longest path ends on a looped vertex.
pub fn star_height_graph(q: &Quiver, a: VertexId) -> Result<StarHeightReport> {
    Walk::trivial(q, a)?;
    if let Some((t, h)) = q.first_one_way_edge() {
        return Err(Error::NotUndirected(
            q.vertex_name(t).to_string(),
            q.vertex_name(h).to_string(),
        ));
    }
    if !q.is_connected() {
        return Err(Error::NotConnected);
    }
    let (len, ends) = longest_simple_paths_from(q, a)?;
    let (witness, endpoint_has_loop) = match ends.iter().find(|(_, looped)| *looped) {
        Some((walk, _)) => (walk.clone(), true),
        None => (ends[0].0.clone(), false),
    };
    let height = len as u32 + u32::from(endpoint_has_loop);
    Ok(StarHeightReport {
        height,
        longest_path_length: len,
        witness,
        endpoint_has_loop,
    })
}

type RankMemo = HashMap<Vec<u32>, u32>;

/// Cycle rank: zero for acyclic graphs; one plus the cheapest vertex
/// deletion for strongly connected graphs with a cycle; otherwise the
/// maximum over cyclic strongly connected components. A lower bound for
/// the star heights above.
pub fn cycle_rank(q: &Quiver) -> Result<u32> {
    let n = q.vertex_count();
    if n > DEFAULT_VERTEX_BOUND {
        return Err(Error::VertexBound {
            n,
            bound: DEFAULT_VERTEX_BOUND,
        });
    }
    let mut memo = RankMemo::new();
    cycle_rank_rec(q, &mut memo)
}

fn cycle_rank_rec(q: &Quiver, memo: &mut RankMemo) -> Result<u32> {
    let key = q.active_key();
    if let Some(&hit) = memo.get(&key) {
        return Ok(hit);
    }
    let comps = strongly_connected_components(q);
    let cyclic: Vec<&Vec<VertexId>> = comps
        .iter()
        .filter(|c| c.len() > 1 || q.has_edge(c[0], c[0]))
        .collect();
    let value = if cyclic.is_empty() {
        0
    } else if comps.len() == 1 {
        let mut cheapest = u32::MAX;
        for v in q.vertices() {
            cheapest = cheapest.min(cycle_rank_rec(&q.delete_vertex(v)?, memo)?);
        }
        1 + cheapest
    } else {
        let mut deepest = 0;
        for comp in cyclic {
            let others: BTreeSet<VertexId> = q.vertices().filter(|v| !comp.contains(v)).collect();
            deepest = deepest.max(cycle_rank_rec(&q.delete_vertices(&others)?, memo)?);
        }
        deepest
    };
    memo.insert(key, value);
    Ok(value)
}

/// Kosaraju's two passes; components come out with sorted members.
fn strongly_connected_components(q: &Quiver) -> Vec<Vec<VertexId>> {
    let mut order = Vec::new();
    let mut seen = BTreeSet::new();
    for s in q.vertices() {
        if seen.contains(&s) {
            continue;
        }
        let mut stack = vec![(s, false)];
        while let Some((v, expanded)) = stack.pop() {
            if expanded {
                order.push(v);
                continue;
            }
            if !seen.insert(v) {
                continue;
            }
            stack.push((v, true));
            for &u in q.out_neighbors(v).iter().rev() {
                if !seen.contains(&u) {
                    stack.push((u, false));
                }
            }
        }
    }
    let mut rin: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for (t, h) in q.edges() {
        rin.entry(h).or_default().push(t);
    }
    let mut comps = Vec::new();
    let mut assigned = BTreeSet::new();
    for &v in order.iter().rev() {
        if assigned.contains(&v) {
            continue;
        }
        let mut comp = Vec::new();
        let mut stack = vec![v];
        assigned.insert(v);
        while let Some(u) = stack.pop() {
            comp.push(u);
            for &t in rin.get(&u).map(Vec::as_slice).unwrap_or(&[]) {
                if assigned.insert(t) {
                    stack.push(t);
                }
            }
        }
        comp.sort();
        comps.push(comp);
    }
    comps
}
