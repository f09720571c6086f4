//! Walks on quivers: exact algebra, factorization, and path sums.
//!
//! A quiver here is a finite directed graph with at most one edge per
//! ordered vertex pair, loops allowed. Walks on a quiver form a partial
//! algebra under a nesting product that splices one closed walk into
//! another at the last visit to its base vertex; with the zero element for
//! undefined products, every walk factors uniquely into irreducible cycles
//! once the order of expansion is fixed. The same recursion that drives
//! factorization also produces, for any ordered vertex pair, a finite
//! starred expression denoting the (usually infinite) set of all walks
//! between them, an exact rational generating function counting those
//! walks, a matrix-valued path sum when edges carry linear maps, and the
//! star height of the walk language.
//!
//! Module map:
//! - [`quiver`]: graphs, vertex deletion, walk enumeration, built-in
//!   families.
//! - [`walk`]: walks and the nesting product.
//! - [`factor`]: factorization trees, normalization, and equivalence.
//! - [`ensemble`]: starred expressions for whole walk sets, expansion, and
//!   rendering in vertex, edge, or label alphabets.
//! - [`pathsum`]: exact generating functions and matrix path sums, each
//!   with an independent linear-algebra oracle.
//! - [`starheight`]: star heights by recursion and by a closed form for
//!   connected undirected graphs; cycle rank.
//! - [`poly`], [`ratfn`]: exact polynomial and rational-function
//!   arithmetic over big rationals.
//! - [`graphfile`]: JSON input/output for graphs and edge weights.

pub mod ensemble;
pub mod error;
pub mod factor;
pub mod graphfile;
pub mod pathsum;
pub mod poly;
pub mod quiver;
pub mod ratfn;
pub mod starheight;
pub mod walk;

pub use crate::ensemble::{
    cycle_ensemble, expand, factorize_ensemble, parse_walk_expr, render_expr, star_height_of_expr,
    RenderMode, WalkExpr,
};
pub use crate::error::{Error, Result};
pub use crate::factor::{
    all_canonical_factorizations, factorize, factorize_counted, normalize_tree, parse_tree,
    parse_walk, trees_equivalent, FactorTree, DEFAULT_FACTOR_BOUND,
};
pub use crate::graphfile::{graph_to_json, load_graph, GraphData};
pub use crate::pathsum::{
    block_matrix, block_resolvent_entry, dressed_genfunc, dressed_weight, genfunc,
    genfunc_weighted, resolvent_entry, walk_weight, weighted_path_sum, EdgeWeights, WeightedQuiver,
    RCOND_THRESHOLD,
};
pub use crate::poly::Poly;
pub use crate::quiver::{make_family, Family, Quiver, VertexId};
pub use crate::ratfn::RationalFn;
pub use crate::starheight::{
    cycle_rank, longest_simple_paths_bounded, longest_simple_paths_from, star_height_cycles,
    star_height_graph, star_height_open, StarHeightReport, DEFAULT_VERTEX_BOUND,
};
pub use crate::walk::{NestResult, Walk};

/// Default ceiling on how many walks an enumeration or expansion may
/// produce before giving up.
pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;
