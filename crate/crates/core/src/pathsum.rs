//! Sums of walks evaluated as finite continued fractions.
//!
//! The scalar side computes exact walk generating functions: the sum over
//! simple paths of edge weights times dressed-vertex values, where the
//! dressed value of a vertex is the formal inverse of one minus the weight
//! of every simple cycle off it, with cycle internals dressed on
//! successively vertex-deleted subgraphs. The numeric side evaluates the
//! same continued fraction over matrix weights. Each side has an
//! independent oracle: exact fraction-free elimination on I − zA, and one
//! dense inversion of the block transfer matrix.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::quiver::{Quiver, VertexId};
use crate::ratfn::RationalFn;
use crate::walk::Walk;

/// Bracket matrices whose reciprocal condition number falls below this are
/// reported singular instead of inverted into noise.
pub const RCOND_THRESHOLD: f64 = 1e-12;

/// Per-edge scalar weights, keyed (tail, head). Edges absent from the map
/// weigh the indeterminate z.
pub type EdgeWeights = BTreeMap<(VertexId, VertexId), RationalFn>;

type ScalarMemo = HashMap<(Vec<u32>, VertexId), RationalFn>;
type MatrixMemo = HashMap<(Vec<u32>, VertexId), DMatrix<Complex64>>;

fn edge_weight(weights: &EdgeWeights, t: VertexId, h: VertexId) -> RationalFn {
    weights.get(&(t, h)).cloned().unwrap_or_else(RationalFn::z)
}

fn deleted_names(root: &Quiver, h: &Quiver) -> Vec<String> {
    root.vertices()
        .filter(|v| !h.has_vertex(*v))
        .map(|v| root.vertex_name(v).to_string())
        .collect()
}

/// Generating function of all walks from `a` to `w` with every edge
/// weighing z: coefficient k of its series counts the walks of length k.
pub fn genfunc(q: &Quiver, a: VertexId, w: VertexId) -> Result<RationalFn> {
    genfunc_weighted(q, a, w, &EdgeWeights::new())
}

/// Generating function with per-edge scalar weights (unlisted edges weigh
/// z), as a sum over simple paths of edge weights and dressed vertices.
pub fn genfunc_weighted(
    q: &Quiver,
    a: VertexId,
    w: VertexId,
    weights: &EdgeWeights,
) -> Result<RationalFn> {
    Walk::trivial(q, a)?;
    Walk::trivial(q, w)?;
    let mut memo = ScalarMemo::new();
    if a == w {
        return dressed_scalar_rec(q, q, weights, a, &mut memo);
    }
    let mut total = RationalFn::zero();
    for p in q.simple_paths(a, w)? {
        let verts = p.vertices().to_vec();
        let mut term = dressed_scalar_rec(q, q, weights, verts[0], &mut memo)?;
        let mut h = q.delete_vertex(verts[0])?;
        for i in 1..verts.len() {
            term = &term * &edge_weight(weights, verts[i - 1], verts[i]);
            term = &term * &dressed_scalar_rec(q, &h, weights, verts[i], &mut memo)?;
            if i + 1 < verts.len() {
                h = h.delete_vertex(verts[i])?;
            }
        }
        total = &total + &term;
    }
    Ok(total)
}

/// Dressed value of `v` on the subgraph of `q` that deletes `deleted`.
pub fn dressed_genfunc(
    q: &Quiver,
    weights: &EdgeWeights,
    v: VertexId,
    deleted: &BTreeSet<VertexId>,
) -> Result<RationalFn> {
    let sub = q.delete_vertices(deleted)?;
    dressed_scalar_rec(q, &sub, weights, v, &mut ScalarMemo::new())
}

fn dressed_scalar_rec(
    root: &Quiver,
    h: &Quiver,
    weights: &EdgeWeights,
    v: VertexId,
    memo: &mut ScalarMemo,
) -> Result<RationalFn> {
    let key = (h.active_key(), v);
    if let Some(hit) = memo.get(&key) {
        return Ok(hit.clone());
    }
    let mut sum = RationalFn::zero();
    for c in h.simple_cycles_at(v)? {
        let verts = c.vertices();
        let mut term = edge_weight(weights, verts[0], verts[1]);
        let mut sub = if verts.len() > 2 {
            Some(h.delete_vertex(v)?)
        } else {
            None
        };
        for j in 1..verts.len() - 1 {
            let s = sub.as_ref().expect("internal vertices imply a subgraph");
            term = &term * &dressed_scalar_rec(root, s, weights, verts[j], memo)?;
            term = &term * &edge_weight(weights, verts[j], verts[j + 1]);
            if j + 1 < verts.len() - 1 {
                sub = Some(s.delete_vertex(verts[j])?);
            }
        }
        sum = &sum + &term;
    }
    let bracket = &RationalFn::one() - &sum;
    let value = bracket.inverse().map_err(|_| Error::MissingInverse {
        vertex: root.vertex_name(v).to_string(),
        deleted: deleted_names(root, h),
    })?;
    memo.insert(key, value.clone());
    Ok(value)
}

/// Oracle for `genfunc`: the same function computed as an entry of
/// (I − zA)⁻¹ by exact fraction-free elimination over polynomials.
pub fn resolvent_entry(q: &Quiver, a: VertexId, w: VertexId) -> Result<RationalFn> {
    Walk::trivial(q, a)?;
    Walk::trivial(q, w)?;
    let verts: Vec<VertexId> = q.vertices().collect();
    let pos: HashMap<VertexId, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let entry = |i: usize, j: usize| -> Poly {
        let mut p = Poly::zero();
        if i == j {
            p = Poly::one();
        }
        if q.has_edge(verts[i], verts[j]) {
            p = &p - &Poly::x();
        }
        p
    };
    let n = verts.len();
    let full: Vec<Vec<Poly>> = (0..n)
        .map(|i| (0..n).map(|j| entry(i, j)).collect())
        .collect();
    let den = bareiss_det(full);
    let (ia, iw) = (pos[&a], pos[&w]);
    let minor: Vec<Vec<Poly>> = (0..n)
        .filter(|&i| i != iw)
        .map(|i| (0..n).filter(|&j| j != ia).map(|j| entry(i, j)).collect())
        .collect();
    let mut num = bareiss_det(minor);
    if (ia + iw) % 2 == 1 {
        num = -&num;
    }
    RationalFn::new(num, den)
}

/// Fraction-free determinant: every intermediate entry is a minor of the
/// (row-permuted) input, so the single division per entry is exact.
fn bareiss_det(mut m: Vec<Vec<Poly>>) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one();
    }
    let mut negated = false;
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return Poly::zero();
            };
            m.swap(k, r);
            negated = !negated;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = t.div_exact(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negated {
        -&det
    } else {
        det
    }
}

// ---------------------------------------------------------------------------
// Matrix weights
// ---------------------------------------------------------------------------

/// A quiver whose edges carry complex matrices: the weight of edge (μ, ν)
/// maps the d_μ-dimensional space at μ to the d_ν-dimensional space at ν.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedQuiver {
    quiver: Quiver,
    dims: BTreeMap<VertexId, usize>,
    weights: BTreeMap<(VertexId, VertexId), DMatrix<Complex64>>,
}

impl WeightedQuiver {
    /// Validates that every edge carries a weight of shape d_head × d_tail
    /// and that no weight is keyed on a missing edge. Vertices absent from
    /// `dims` get dimension 1.
    pub fn new(
        quiver: Quiver,
        dims: BTreeMap<VertexId, usize>,
        weights: BTreeMap<(VertexId, VertexId), DMatrix<Complex64>>,
    ) -> Result<WeightedQuiver> {
        let dims: BTreeMap<VertexId, usize> = quiver
            .vertices()
            .map(|v| (v, dims.get(&v).copied().unwrap_or(1)))
            .collect();
        for (t, h) in quiver.edges() {
            let Some(m) = weights.get(&(t, h)) else {
                return Err(Error::MissingWeight(
                    quiver.vertex_name(t).to_string(),
                    quiver.vertex_name(h).to_string(),
                ));
            };
            let (want_rows, want_cols) = (dims[&h], dims[&t]);
            if m.nrows() != want_rows || m.ncols() != want_cols {
                return Err(Error::WeightShape {
                    edge_tail: quiver.vertex_name(t).to_string(),
                    edge_head: quiver.vertex_name(h).to_string(),
                    rows: m.nrows(),
                    cols: m.ncols(),
                    want_rows,
                    want_cols,
                });
            }
        }
        for &(t, h) in weights.keys() {
            if !quiver.has_edge(t, h) {
                return Err(Error::MissingEdge(
                    quiver.vertex_name(t).to_string(),
                    quiver.vertex_name(h).to_string(),
                ));
            }
        }
        Ok(WeightedQuiver {
            quiver,
            dims,
            weights,
        })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn dim(&self, v: VertexId) -> usize {
        self.dims[&v]
    }

    pub fn weight(&self, t: VertexId, h: VertexId) -> Option<&DMatrix<Complex64>> {
        self.weights.get(&(t, h))
    }

    fn weight_checked(&self, t: VertexId, h: VertexId) -> &DMatrix<Complex64> {
        self.weights
            .get(&(t, h))
            .expect("constructor validated every edge weight")
    }
}

/// Weight of one walk: the right-to-left product of its edge weights, of
/// shape d_tail × d_head; a trivial walk weighs the identity.
pub fn walk_weight(wq: &WeightedQuiver, walk: &Walk) -> Result<DMatrix<Complex64>> {
    let verts = walk.vertices();
    let d0 = *wq
        .dims
        .get(&verts[0])
        .ok_or_else(|| Error::VertexNotPresent(walk.quiver().vertex_name(verts[0]).to_string()))?;
    let mut m = DMatrix::identity(d0, d0);
    for pair in verts.windows(2) {
        let w = wq.weight(pair[0], pair[1]).ok_or_else(|| {
            Error::MissingWeight(
                walk.quiver().vertex_name(pair[0]).to_string(),
                walk.quiver().vertex_name(pair[1]).to_string(),
            )
        })?;
        m = w * m;
    }
    Ok(m)
}

/// Effective weight of `v` dressed on the subgraph deleting `deleted`.
pub fn dressed_weight(
    wq: &WeightedQuiver,
    v: VertexId,
    deleted: &BTreeSet<VertexId>,
) -> Result<DMatrix<Complex64>> {
    let sub = wq.quiver().delete_vertices(deleted)?;
    dressed_matrix_rec(wq, &sub, v, &mut MatrixMemo::new())
}

fn dressed_matrix_rec(
    wq: &WeightedQuiver,
    h: &Quiver,
    v: VertexId,
    memo: &mut MatrixMemo,
) -> Result<DMatrix<Complex64>> {
    let key = (h.active_key(), v);
    if let Some(hit) = memo.get(&key) {
        return Ok(hit.clone());
    }
    let d = wq.dim(v);
    let mut sum = DMatrix::<Complex64>::zeros(d, d);
    for c in h.simple_cycles_at(v)? {
        let verts = c.vertices();
        let mut term = wq.weight_checked(verts[0], verts[1]).clone();
        let mut sub = if verts.len() > 2 {
            Some(h.delete_vertex(v)?)
        } else {
            None
        };
        for j in 1..verts.len() - 1 {
            let s = sub.as_ref().expect("internal vertices imply a subgraph");
            term = dressed_matrix_rec(wq, s, verts[j], memo)? * term;
            term = wq.weight_checked(verts[j], verts[j + 1]) * term;
            if j + 1 < verts.len() - 1 {
                sub = Some(s.delete_vertex(verts[j])?);
            }
        }
        sum += term;
    }
    let bracket = DMatrix::identity(d, d) - sum;
    let value = invert_bracket(bracket, wq.quiver(), h, v)?;
    memo.insert(key, value.clone());
    Ok(value)
}

fn invert_bracket(
    bracket: DMatrix<Complex64>,
    root: &Quiver,
    h: &Quiver,
    v: VertexId,
) -> Result<DMatrix<Complex64>> {
    let singular = |rcond: f64| Error::SingularBracket {
        vertex: root.vertex_name(v).to_string(),
        deleted: deleted_names(root, h),
        rcond,
    };
    let sv = bracket.clone().singular_values();
    let (mx, mn) = (sv.max(), sv.min());
    let rcond = if mx > 0.0 { mn / mx } else { 0.0 };
    if rcond < RCOND_THRESHOLD {
        return Err(singular(rcond));
    }
    bracket.try_inverse().ok_or_else(|| singular(rcond))
}

/// Sum of the weights of every walk from `a` to `w` (shape d_w × d_a),
/// evaluated as a finite continued fraction: for each simple path, the
/// product — right to left — of the dressed source, then alternately each
/// edge weight and the next vertex dressed on the subgraph deleting all
/// earlier path vertices.
pub fn weighted_path_sum(
    wq: &WeightedQuiver,
    a: VertexId,
    w: VertexId,
) -> Result<DMatrix<Complex64>> {
    Walk::trivial(wq.quiver(), a)?;
    Walk::trivial(wq.quiver(), w)?;
    let mut memo = MatrixMemo::new();
    if a == w {
        return dressed_matrix_rec(wq, wq.quiver(), a, &mut memo);
    }
    let mut total = DMatrix::<Complex64>::zeros(wq.dim(w), wq.dim(a));
    for p in wq.quiver().simple_paths(a, w)? {
        let verts = p.vertices().to_vec();
        let mut term = dressed_matrix_rec(wq, wq.quiver(), verts[0], &mut memo)?;
        let mut h = wq.quiver().delete_vertex(verts[0])?;
        for i in 1..verts.len() {
            term = wq.weight_checked(verts[i - 1], verts[i]) * term;
            term = dressed_matrix_rec(wq, &h, verts[i], &mut memo)? * term;
            if i + 1 < verts.len() {
                h = h.delete_vertex(verts[i])?;
            }
        }
        total += term;
    }
    Ok(total)
}

/// The block transfer matrix M — block (head, tail) of each edge holds its
/// weight — together with each vertex's row/column offset. Powers of M
/// accumulate walk weights, so when the series converges the sum of all
/// walks a→w is the (w, a) block of (I − M)⁻¹.
pub fn block_matrix(wq: &WeightedQuiver) -> (DMatrix<Complex64>, BTreeMap<VertexId, usize>) {
    let mut offsets = BTreeMap::new();
    let mut n = 0usize;
    for v in wq.quiver().vertices() {
        offsets.insert(v, n);
        n += wq.dim(v);
    }
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for (t, h) in wq.quiver().edges() {
        let w = wq.weight_checked(t, h);
        m.view_mut((offsets[&h], offsets[&t]), (wq.dim(h), wq.dim(t)))
            .copy_from(w);
    }
    (m, offsets)
}

/// Oracle for `weighted_path_sum`: one dense inversion of I − M.
pub fn block_resolvent_entry(
    wq: &WeightedQuiver,
    a: VertexId,
    w: VertexId,
) -> Result<DMatrix<Complex64>> {
    Walk::trivial(wq.quiver(), a)?;
    Walk::trivial(wq.quiver(), w)?;
    let (m, offsets) = block_matrix(wq);
    let n = m.nrows();
    let bracket = DMatrix::identity(n, n) - m;
    let singular = |rcond: f64| Error::SingularBracket {
        vertex: "(block matrix)".to_string(),
        deleted: Vec::new(),
        rcond,
    };
    let sv = bracket.clone().singular_values();
    let (mx, mn) = (sv.max(), sv.min());
    let rcond = if mx > 0.0 { mn / mx } else { 0.0 };
    if rcond < RCOND_THRESHOLD {
        return Err(singular(rcond));
    }
    let inv = bracket.try_inverse().ok_or_else(|| singular(rcond))?;
    Ok(inv
        .view((offsets[&w], offsets[&a]), (wq.dim(w), wq.dim(a)))
        .into_owned())
}
