//! Ensembles of walks as star expressions.
//!
//! A walk expression denotes a set of walks: atoms are single walks, unions
//! collect alternatives, nest products compose every pair, and the star of a
//! set of cycles at a common base collects all finite compositions,
//! including the empty one. `factorize_ensemble` builds, for any two vertices,
//! an expression whose expansion is exactly the set of walks between them,
//! each produced by exactly one derivation: a simple path (or the star of
//! the cycle ensemble, when the endpoints coincide) dressed at every vertex
//! with the star of the cycle ensemble on the subgraph that deletes the
//! earlier vertices.

use std::collections::BTreeSet;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::factor::{lex, parse_walk, Tok};
use crate::quiver::{Quiver, VertexId};
use crate::walk::{NestResult, Walk};

#[derive(Clone, PartialEq, Eq)]
pub enum WalkExpr {
    /// A single walk.
    Atom(Walk),
    /// Set union; empty means the empty set.
    Union(Vec<WalkExpr>),
    /// Elementwise nesting of the right set into the left.
    NestProd(Box<WalkExpr>, Box<WalkExpr>),
    /// All finite compositions of cycles from the body; the trivial walk
    /// kept here is the base point and the zeroth power.
    Star(Box<WalkExpr>, Walk),
}

impl WalkExpr {
    pub fn atom(w: Walk) -> WalkExpr {
        WalkExpr::Atom(w)
    }

    pub fn nest_prod(a: WalkExpr, b: WalkExpr) -> WalkExpr {
        WalkExpr::NestProd(Box::new(a), Box::new(b))
    }

    pub fn star(body: WalkExpr, unit: Walk) -> WalkExpr {
        debug_assert!(unit.is_trivial());
        WalkExpr::Star(Box::new(body), unit)
    }

    /// A union, with singletons unwrapped.
    pub fn union(mut terms: Vec<WalkExpr>) -> WalkExpr {
        if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            WalkExpr::Union(terms)
        }
    }

    pub fn is_empty_union(&self) -> bool {
        matches!(self, WalkExpr::Union(items) if items.is_empty())
    }

    /// The base vertex the expression's walks start from, when determined.
    pub fn base(&self) -> Option<VertexId> {
        match self {
            WalkExpr::Atom(w) => Some(w.head()),
            WalkExpr::NestProd(a, _) => a.base(),
            WalkExpr::Union(items) => items.first().and_then(WalkExpr::base),
            WalkExpr::Star(_, unit) => Some(unit.head()),
        }
    }

    /// True when the expression can only denote trivial walks.
    fn is_trivial_only(&self) -> bool {
        match self {
            WalkExpr::Atom(w) => w.is_trivial(),
            WalkExpr::Union(items) => items.iter().all(WalkExpr::is_trivial_only),
            WalkExpr::NestProd(a, b) => a.is_trivial_only() && b.is_trivial_only(),
            WalkExpr::Star(body, _) => body.is_trivial_only(),
        }
    }
}

impl fmt::Display for WalkExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_vertex(self, false))
    }
}

impl fmt::Debug for WalkExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WalkExpr({self})")
    }
}

type EnsembleMemo = HashMap<(Vec<u32>, VertexId), WalkExpr>;

/// The ensemble of all non-trivial cycles at `v`: each simple cycle at `v`,
/// dressed at every internal vertex with the star of the cycle ensemble on
/// the subgraph deleting the base and the earlier internal vertices.
/// Returns a (possibly empty) union.
pub fn cycle_ensemble(q: &Quiver, v: VertexId) -> Result<WalkExpr> {
    let mut memo = EnsembleMemo::new();
    cycle_ensemble_memo(q, q, v, &mut memo)
}

fn cycle_ensemble_memo(
    root: &Quiver,
    h: &Quiver,
    v: VertexId,
    memo: &mut EnsembleMemo,
) -> Result<WalkExpr> {
    let key = (h.active_key(), v);
    if let Some(hit) = memo.get(&key) {
        return Ok(hit.clone());
    }
    let mut terms = Vec::new();
    for c in h.simple_cycles_at(v)? {
        let verts = c.vertices().to_vec();
        let mut expr = WalkExpr::atom(c.on_quiver(root)?);
        // Dress internal vertices from the last backwards; the star at the
        // deepest deletion level composes first.
        let internals = &verts[1..verts.len() - 1];
        for i in (0..internals.len()).rev() {
            let mut removed: BTreeSet<VertexId> = internals[..i].iter().copied().collect();
            removed.insert(v);
            let sub = h.delete_vertices(&removed)?;
            let body = cycle_ensemble_memo(root, &sub, internals[i], memo)?;
            if body.is_empty_union() {
                continue; // an empty star is an identity
            }
            let unit = Walk::trivial(root, internals[i])?;
            expr = WalkExpr::nest_prod(expr, WalkExpr::star(body, unit));
        }
        terms.push(expr);
    }
    let out = WalkExpr::union(terms);
    memo.insert(key, out.clone());
    Ok(out)
}

/// An expression for the set of all walks from `a` to `w`. Coinciding
/// endpoints give the star of the cycle ensemble; otherwise each simple
/// path is dressed at every vertex, the source last.
pub fn factorize_ensemble(q: &Quiver, a: VertexId, w: VertexId) -> Result<WalkExpr> {
    let mut memo = EnsembleMemo::new();
    if a == w {
        let body = cycle_ensemble_memo(q, q, a, &mut memo)?;
        return Ok(WalkExpr::star(body, Walk::trivial(q, a)?));
    }
    let mut terms = Vec::new();
    for p in q.simple_paths(a, w)? {
        let verts = p.vertices().to_vec();
        let mut expr = WalkExpr::atom(p);
        for i in (0..verts.len()).rev() {
            let removed: BTreeSet<VertexId> = verts[..i].iter().copied().collect();
            let sub = q.delete_vertices(&removed)?;
            let body = cycle_ensemble_memo(q, &sub, verts[i], &mut memo)?;
            if body.is_empty_union() {
                continue;
            }
            let unit = Walk::trivial(q, verts[i])?;
            expr = WalkExpr::nest_prod(expr, WalkExpr::star(body, unit));
        }
        terms.push(expr);
    }
    Ok(WalkExpr::union(terms))
}

/// Expands an expression into every walk of length at most `max_len`,
/// counted with the number of distinct derivations producing it. `cap`
/// bounds the number of distinct walks held at any point.
pub fn expand(expr: &WalkExpr, max_len: usize, cap: usize) -> Result<BTreeMap<Walk, BigUint>> {
    let mut out = BTreeMap::new();
    match expr {
        WalkExpr::Atom(w) => {
            if w.len() <= max_len {
                out.insert(w.clone(), BigUint::one());
            }
        }
        WalkExpr::Union(items) => {
            for item in items {
                for (w, c) in expand(item, max_len, cap)? {
                    *out.entry(w).or_default() += c;
                }
                if out.len() > cap {
                    return Err(Error::CapExceeded(cap));
                }
            }
        }
        WalkExpr::NestProd(a, b) => {
            let ea = expand(a, max_len, cap)?;
            let eb = expand(b, max_len, cap)?;
            for (wa, ca) in &ea {
                for (wb, cb) in &eb {
                    if wa.len() + wb.len() > max_len {
                        continue;
                    }
                    if let NestResult::Walk(w) = wa.nest(wb) {
                        *out.entry(w).or_default() += ca * cb;
                    }
                }
                if out.len() > cap {
                    return Err(Error::CapExceeded(cap));
                }
            }
        }
        WalkExpr::Star(body, unit) => {
            let eb = expand(body, max_len, cap)?;
            // Trivial walks in the body compose as identities and would make
            // derivation counts meaningless; the set they generate is the
            // unit alone, so they are dropped.
            let body_walks: Vec<(&Walk, &BigUint)> =
                eb.iter().filter(|(w, _)| !w.is_trivial()).collect();
            out.insert(unit.clone(), BigUint::one());
            let mut layer = out.clone();
            while !layer.is_empty() {
                let mut next: BTreeMap<Walk, BigUint> = BTreeMap::new();
                for (s, cs) in &layer {
                    for (b, cb) in &body_walks {
                        if s.len() + b.len() > max_len {
                            continue;
                        }
                        if let NestResult::Walk(w) = s.nest(b) {
                            *next.entry(w).or_default() += cs * *cb;
                        }
                    }
                }
                for (w, c) in &next {
                    *out.entry(w.clone()).or_default() += c;
                }
                if out.len() > cap {
                    return Err(Error::CapExceeded(cap));
                }
                layer = next;
            }
        }
    }
    Ok(out)
}

/// Star height of the expression: stars nest one level deeper than their
/// bodies, except stars that can only produce trivial walks, which denote a
/// single point.
pub fn star_height_of_expr(expr: &WalkExpr) -> u32 {
    match expr {
        WalkExpr::Atom(_) => 0,
        WalkExpr::Union(items) => items.iter().map(star_height_of_expr).max().unwrap_or(0),
        WalkExpr::NestProd(a, b) => star_height_of_expr(a).max(star_height_of_expr(b)),
        WalkExpr::Star(body, _) => {
            if body.is_trivial_only() {
                0
            } else {
                1 + star_height_of_expr(body)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderMode {
    /// Walks spelled as vertex sequences with explicit ⊙, {…}∗ and +.
    Vertex,
    /// Concatenated edge tokens like (12)(23), stars on sub-blocks.
    Edge,
    /// Edge labels concatenated into a regular expression.
    Language,
}

/// Renders an expression. Vertex mode always succeeds; edge and language
/// modes need expressions shaped like dressed walks (which everything this
/// module builds is) and language mode needs every edge labelled.
pub fn render_expr(expr: &WalkExpr, mode: RenderMode, ascii: bool) -> Result<String> {
    match mode {
        RenderMode::Vertex => Ok(render_vertex(expr, ascii)),
        RenderMode::Edge => render_tokens(expr, false),
        RenderMode::Language => render_tokens(expr, true),
    }
}

fn render_vertex(expr: &WalkExpr, ascii: bool) -> String {
    match expr {
        WalkExpr::Atom(w) => w.to_string(),
        WalkExpr::Union(items) => {
            if items.is_empty() {
                "{}".to_string()
            } else {
                items
                    .iter()
                    .map(|e| render_vertex(e, ascii))
                    .collect::<Vec<_>>()
                    .join(" + ")
            }
        }
        WalkExpr::NestProd(a, b) => {
            let op = if ascii { "." } else { "⊙" };
            format!(
                "{}{op}{}",
                vertex_operand(a, ascii),
                vertex_operand(b, ascii)
            )
        }
        WalkExpr::Star(body, _) => {
            let star = if ascii { "*" } else { "∗" };
            let inner = if body.is_empty_union() {
                String::new()
            } else {
                render_vertex(body, ascii)
            };
            format!("{{{inner}}}{star}")
        }
    }
}

fn vertex_operand(e: &WalkExpr, ascii: bool) -> String {
    let s = render_vertex(e, ascii);
    match e {
        WalkExpr::Union(_) | WalkExpr::NestProd(..) => format!("({s})"),
        _ => s,
    }
}

/// Edge- and language-mode rendering. `None` from a helper means the term
/// denotes the empty set and disappears from unions.
fn render_tokens(expr: &WalkExpr, labeled: bool) -> Result<String> {
    match expr {
        WalkExpr::Union(items) => {
            let mut parts = Vec::new();
            for item in items {
                if let Some(s) = term_tokens(item, labeled)? {
                    parts.push(s);
                }
            }
            Ok(parts.join(" + "))
        }
        _ => Ok(term_tokens(expr, labeled)?.unwrap_or_default()),
    }
}

fn term_tokens(expr: &WalkExpr, labeled: bool) -> Result<Option<String>> {
    match expr {
        WalkExpr::Star(body, _) => {
            let s = render_tokens(body, labeled)?;
            if s.is_empty() {
                return Ok(Some("()*".to_string()));
            }
            Ok(Some(wrap_star(&s)))
        }
        WalkExpr::Union(_) => {
            let s = render_tokens(expr, labeled)?;
            Ok((!s.is_empty()).then_some(s))
        }
        WalkExpr::Atom(_) | WalkExpr::NestProd(..) => {
            let Some((walk, inserts)) = dressed_skeleton(expr, labeled)? else {
                return Ok(None);
            };
            serialize_skeleton(&walk, &inserts, labeled).map(Some)
        }
    }
}

/// A dressed walk for token rendering: the underlying skeleton walk plus
/// the rendered insertions at each vertex position.
fn dressed_skeleton(expr: &WalkExpr, labeled: bool) -> Result<Option<(Walk, Vec<Vec<String>>)>> {
    match expr {
        WalkExpr::Atom(w) => Ok(Some((w.clone(), vec![Vec::new(); w.vertices().len()]))),
        WalkExpr::NestProd(a, b) => {
            let Some((walk, mut inserts)) = dressed_skeleton(a, labeled)? else {
                return Ok(None);
            };
            let Some(base) = b.base() else {
                return Ok(None); // composing with the empty set
            };
            let Some(pos) = walk.last_occurrence(base) else {
                return Ok(None); // every product would be zero
            };
            let Some(text) = insert_tokens(b, labeled)? else {
                return Ok(None);
            };
            inserts[pos].push(text);
            Ok(Some((walk, inserts)))
        }
        WalkExpr::Star(..) | WalkExpr::Union(_) => Err(Error::Render(
            "a dressed walk must be anchored on a walk atom, not a star or union".into(),
        )),
    }
}

fn insert_tokens(expr: &WalkExpr, labeled: bool) -> Result<Option<String>> {
    match expr {
        WalkExpr::Star(..) => term_tokens(expr, labeled),
        WalkExpr::Union(items) if items.is_empty() => Ok(None),
        WalkExpr::Union(_) => {
            let s = render_tokens(expr, labeled)?;
            Ok((!s.is_empty()).then(|| format!("({s})")))
        }
        WalkExpr::Atom(_) | WalkExpr::NestProd(..) => term_tokens(expr, labeled),
    }
}

fn serialize_skeleton(walk: &Walk, inserts: &[Vec<String>], labeled: bool) -> Result<String> {
    let verts = walk.vertices();
    let q = walk.quiver();
    let mut out = String::new();
    for s in &inserts[0] {
        out.push_str(s);
    }
    for pos in 1..verts.len() {
        out.push_str(&edge_token(q, verts[pos - 1], verts[pos], labeled)?);
        for s in &inserts[pos] {
            out.push_str(s);
        }
    }
    Ok(out)
}

fn edge_token(q: &Quiver, t: VertexId, h: VertexId, labeled: bool) -> Result<String> {
    if labeled {
        return q.edge_label(t, h).map(str::to_string).ok_or_else(|| {
            Error::MissingLabel(q.vertex_name(t).to_string(), q.vertex_name(h).to_string())
        });
    }
    if q.single_char_names() {
        Ok(format!("({}{})", q.vertex_name(t), q.vertex_name(h)))
    } else {
        Ok(format!("({} {})", q.vertex_name(t), q.vertex_name(h)))
    }
}

/// Stars bind to a single token (one label character, or one `(xy)` edge
/// token) without parentheses; anything longer is wrapped.
fn wrap_star(s: &str) -> String {
    if is_single_unit(s) {
        format!("{s}*")
    } else {
        format!("({s})*")
    }
}

fn is_single_unit(s: &str) -> bool {
    let mut chars = s.chars();
    if chars.clone().count() == 1 {
        return true;
    }
    if !(s.starts_with('(') && s.ends_with(')')) {
        return false;
    }
    let inner: String = {
        let mut c: Vec<char> = chars.by_ref().collect();
        c.pop();
        c.remove(0);
        c.into_iter().collect()
    };
    !inner.contains('(') && !inner.contains(')')
}

// ---------------------------------------------------------------------------
// Parsing (vertex mode)
// ---------------------------------------------------------------------------

/// Parses the vertex-mode rendering back into an expression: `+` unions,
/// `⊙`/`.` products, `{…}∗` stars, parenthesized groups (holding either
/// sub-expressions or spelled-out walks).
pub fn parse_walk_expr(q: &Quiver, text: &str) -> Result<WalkExpr> {
    let toks = lex(text)?;
    let end = toks.len();
    let mut p = ExprParser {
        q,
        toks,
        pos: 0,
        end,
    };
    let e = p.union()?;
    if p.pos != p.end {
        return Err(Error::Parse {
            offset: p.offset(),
            message: "unexpected trailing input".into(),
        });
    }
    Ok(e)
}

struct ExprParser<'a> {
    q: &'a Quiver,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl ExprParser<'_> {
    fn offset(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(i, _)| *i)
            .unwrap_or_else(|| self.toks.last().map(|(i, _)| *i + 1).unwrap_or(0))
    }

    fn peek(&self) -> Option<&Tok> {
        (self.pos < self.end).then(|| &self.toks[self.pos].1)
    }

    fn union(&mut self) -> Result<WalkExpr> {
        let mut terms = vec![self.product()?];
        while matches!(self.peek(), Some(Tok::Plus)) {
            self.pos += 1;
            terms.push(self.product()?);
        }
        Ok(WalkExpr::union(terms))
    }

    fn product(&mut self) -> Result<WalkExpr> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(Tok::Op)) {
            self.pos += 1;
            let rhs = self.factor()?;
            acc = WalkExpr::nest_prod(acc, rhs);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<WalkExpr> {
        match self.peek().cloned() {
            Some(Tok::LBrace) => {
                self.pos += 1;
                let body = self.union()?;
                if !matches!(self.peek(), Some(Tok::RBrace)) {
                    return Err(Error::Parse {
                        offset: self.offset(),
                        message: "expected }".into(),
                    });
                }
                self.pos += 1;
                if !matches!(self.peek(), Some(Tok::StarOp)) {
                    return Err(Error::Parse {
                        offset: self.offset(),
                        message: "expected ∗ after }".into(),
                    });
                }
                self.pos += 1;
                let Some(base) = body.base() else {
                    return Err(Error::Parse {
                        offset: self.offset(),
                        message: "cannot infer the base vertex of an empty star".into(),
                    });
                };
                Ok(WalkExpr::star(body, Walk::trivial(self.q, base)?))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                // Same disambiguation as factor trees: a group of bare names
                // is a spelled-out walk.
                let mut depth = 1usize;
                let mut names_only = true;
                let mut names = Vec::new();
                let mut j = self.pos;
                while j < self.end {
                    match &self.toks[j].1 {
                        Tok::LParen | Tok::LBrace => {
                            depth += 1;
                            names_only = false;
                        }
                        Tok::RBrace => depth -= 1,
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
                    let joined = names.join(" ");
                    return Ok(WalkExpr::atom(parse_walk(self.q, &joined)?));
                }
                let inner = self.union()?;
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
            Some(Tok::Name(name)) => {
                self.pos += 1;
                Ok(WalkExpr::atom(parse_walk(self.q, &name)?))
            }
            _ => Err(Error::Parse {
                offset: self.offset(),
                message: "expected a walk, ( or {".into(),
            }),
        }
    }
}
