//! Second-neighborhood toolkit for loop-free, digon-free digraphs.
//!
//! A vertex `u` is *satisfactory* when `|N1(u)| <= |N2(u)|`, where `N_k(u)` is
//! the set of vertices at directed distance exactly `k`. Seymour's Second
//! Neighborhood Conjecture states every such digraph has one. This crate
//! computes the neighborhood statistics, evaluates the necessary conditions
//! any minimal counterexample must meet, builds the product that turns one
//! counterexample into infinitely many, and searches small graph spaces.
//!
//! Modules:
//! - [`digraph`]: the immutable graph type, BFS layers, profiles, deletions.
//! - [`structure`]: connectivity, cycles, girth, triangle and diamond bases.
//! - [`filter`]: the eight-condition minimal-counterexample filter.
//! - [`product`]: product construction and its closed-form profile.
//! - [`search`]: exhaustive enumeration, random models, parallel search.
//! - [`io`]: the text edge-list format and JSON rendering.

pub mod digraph;
pub mod error;
pub mod filter;
pub mod io;
pub mod product;
pub mod search;
pub mod structure;

pub use digraph::{
    Digraph, Direction, Distance, Edge, NeighborhoodProfile, Relabeling, VertexId, VertexSet,
};
pub use error::GraphError;
pub use filter::{
    avoiding_reach, check_condition, run_filter, AvoidingReach, ConditionVerdict, FilterError,
    FilterReport, Status, Witness, EVALUATION_ORDER,
};
pub use io::{parse_digraph, render_json, write_digraph, write_labeling, ParseError};
pub use product::{
    build_product, is_valid_second_factor, predicted_profile, PredictedProfile, ProductLabeling,
};
pub use search::{
    enumerate_digon_free, graph_at_index, random_acyclic, random_digon_free, random_tournament,
    random_triangle_free, run_search, Model, SearchError, SearchMode, SearchReport, SearchSpec,
};
pub use structure::{
    diamond_base_targets, has_directed_cycle, has_transitive_triangle, is_strongly_connected,
    min_outdegree_vertex, triangle_base_count, underlying_girth, DiamondWitness, GirthValue,
};
