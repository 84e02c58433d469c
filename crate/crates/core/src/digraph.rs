//! Immutable loop-free, digon-free digraphs with exact BFS-layer neighborhoods.
//!
//! Adjacency is stored as one bitset row per vertex in each direction, so
//! first and second neighborhoods reduce to a handful of word-wide unions.
//! Every derivation (`delete_edge`, `delete_vertex`, `induced_subgraph`)
//! returns a fresh graph and leaves the receiver untouched.

use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// Dense vertex index in `[0, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(u32);

impl VertexId {
    #[inline]
    pub const fn new(index: usize) -> Self {
        VertexId(index as u32)
    }

    #[inline]
    pub const fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for VertexId {
    fn from(index: usize) -> Self {
        VertexId::new(index)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Ordered pair `(tail, head)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub tail: VertexId,
    pub head: VertexId,
}

impl Edge {
    pub fn new(tail: impl Into<VertexId>, head: impl Into<VertexId>) -> Self {
        Edge {
            tail: tail.into(),
            head: head.into(),
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.tail, self.head)
    }
}

/// Direction in which a BFS layer is grown.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Out,
    In,
}

/// Directed distance; unreachable vertices are `Infinite`, never a large number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(u32),
    Infinite,
}

impl Distance {
    pub fn is_finite(self) -> bool {
        matches!(self, Distance::Finite(_))
    }
}

/// A set of vertices of one particular graph, backed by a bitset sized to its
/// vertex count.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexSet {
    bits: FixedBitSet,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet {
            bits: FixedBitSet::with_capacity(n),
        }
    }

    pub fn full(n: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        VertexSet { bits }
    }

    pub fn from_ids<I>(n: usize, ids: I) -> Self
    where
        I: IntoIterator<Item = VertexId>,
    {
        let mut set = VertexSet::empty(n);
        for v in ids {
            set.insert(v);
        }
        set
    }

    pub(crate) fn from_bits(bits: FixedBitSet) -> Self {
        VertexSet { bits }
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.bits.contains(v.index())
    }

    pub fn insert(&mut self, v: VertexId) {
        self.bits.insert(v.index());
    }

    pub fn remove(&mut self, v: VertexId) {
        self.bits.set(v.index(), false);
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.bits.ones().map(VertexId::new)
    }

    pub fn first(&self) -> Option<VertexId> {
        self.bits.minimum().map(VertexId::new)
    }

    pub fn to_vec(&self) -> Vec<VertexId> {
        self.iter().collect()
    }

    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        self.bits.intersection_count(&other.bits)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        self.bits.intersect_with(&other.bits);
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        self.bits.difference_with(&other.bits);
    }
}

/// Maps the dense ids of a derived graph back to the ids of its source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relabeling {
    original: Vec<VertexId>,
    source_n: usize,
}

impl Relabeling {
    /// Source id of derived vertex `new`.
    pub fn original(&self, new: VertexId) -> VertexId {
        self.original[new.index()]
    }

    /// Derived id of source vertex `old`, if it survived.
    pub fn relabeled(&self, old: VertexId) -> Option<VertexId> {
        self.original
            .binary_search(&old)
            .ok()
            .map(VertexId::new)
    }

    pub fn len(&self) -> usize {
        self.original.len()
    }

    pub fn is_empty(&self) -> bool {
        self.original.is_empty()
    }

    pub fn source_vertex_count(&self) -> usize {
        self.source_n
    }
}

/// Per-vertex first/second neighborhood sizes and anti-satisfaction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighborhoodProfile {
    pub vertex: VertexId,
    pub n1: usize,
    pub n2: usize,
    pub anti_satisfaction: i64,
    pub satisfactory: bool,
}

impl NeighborhoodProfile {
    pub fn new(vertex: VertexId, n1: usize, n2: usize) -> Self {
        let anti_satisfaction = n1 as i64 - n2 as i64;
        NeighborhoodProfile {
            vertex,
            n1,
            n2,
            anti_satisfaction,
            satisfactory: anti_satisfaction <= 0,
        }
    }

    pub fn is_sink(&self) -> bool {
        self.n1 == 0
    }
}

/// Loop-free, digon-free directed graph on vertices `0..n`, `n >= 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    out: Vec<FixedBitSet>,
    inn: Vec<FixedBitSet>,
    edge_count: usize,
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Digraph")
            .field("n", &self.n)
            .field("edges", &self.edges().map(|e| (e.tail.0, e.head.0)).collect::<Vec<_>>())
            .finish()
    }
}

impl Digraph {
    /// Validates and builds a graph. Offending data are reported in sorted
    /// `(u, v)` order, so the first error is independent of input order.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::EmptyVertexSet);
        }
        let mut sorted = edges.to_vec();
        sorted.sort_unstable();
        let mut out = vec![FixedBitSet::with_capacity(n); n];
        for (i, &(u, v)) in sorted.iter().enumerate() {
            if u >= n {
                return Err(GraphError::VertexOutOfRange { vertex: u, n });
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n });
            }
            if u == v {
                return Err(GraphError::LoopEdge(u));
            }
            if i > 0 && sorted[i - 1] == (u, v) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            if sorted.binary_search(&(v, u)).is_ok() {
                return Err(GraphError::DigonPair(u, v));
            }
            out[u].insert(v);
        }
        Ok(Self::from_out_rows(n, out))
    }

    /// Builds from out-rows already known to be loop- and digon-free.
    pub(crate) fn from_out_rows(n: usize, out: Vec<FixedBitSet>) -> Self {
        debug_assert_eq!(out.len(), n);
        let mut inn = vec![FixedBitSet::with_capacity(n); n];
        let mut edge_count = 0;
        for (u, row) in out.iter().enumerate() {
            debug_assert!(!row.contains(u));
            for v in row.ones() {
                debug_assert!(!out[v].contains(u));
                inn[v].insert(u);
                edge_count += 1;
            }
        }
        Digraph {
            n,
            out,
            inn,
            edge_count,
        }
    }

    pub fn single_vertex() -> Self {
        Self::from_out_rows(1, vec![FixedBitSet::with_capacity(1)])
    }

    /// Directed cycle `0 -> 1 -> ... -> n-1 -> 0`. Fails below three vertices.
    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edges(n, &edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.n).map(VertexId::new)
    }

    /// Edges in canonical `(tail, head)` order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.out.iter().enumerate().flat_map(|(u, row)| {
            row.ones().map(move |v| Edge::new(u, v))
        })
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u.index() < self.n && self.out[u.index()].contains(v.index())
    }

    pub fn check_vertex(&self, u: VertexId) -> Result<(), GraphError> {
        if u.index() < self.n {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange {
                vertex: u.index(),
                n: self.n,
            })
        }
    }

    pub fn check_edge(&self, e: Edge) -> Result<(), GraphError> {
        if self.has_edge(e.tail, e.head) {
            Ok(())
        } else {
            Err(GraphError::NoSuchEdge(e.tail.index(), e.head.index()))
        }
    }

    #[inline]
    pub(crate) fn out_row(&self, u: usize) -> &FixedBitSet {
        &self.out[u]
    }

    #[inline]
    pub(crate) fn in_row(&self, u: usize) -> &FixedBitSet {
        &self.inn[u]
    }

    pub fn out_degree(&self, u: VertexId) -> usize {
        self.out[u.index()].count_ones(..)
    }

    pub fn in_degree(&self, u: VertexId) -> usize {
        self.inn[u.index()].count_ones(..)
    }

    pub fn out_neighbors(&self, u: VertexId) -> Result<VertexSet, GraphError> {
        self.check_vertex(u)?;
        Ok(VertexSet::from_bits(self.out[u.index()].clone()))
    }

    /// `N_{-1}(u)`.
    pub fn in_neighbors(&self, u: VertexId) -> Result<VertexSet, GraphError> {
        self.check_vertex(u)?;
        Ok(VertexSet::from_bits(self.inn[u.index()].clone()))
    }

    /// Vertices at distance exactly `k` from `u` (or to `u`, for `Direction::In`).
    pub fn kth_neighborhood(
        &self,
        u: VertexId,
        k: usize,
        direction: Direction,
    ) -> Result<VertexSet, GraphError> {
        self.check_vertex(u)?;
        if k == 0 {
            return Err(GraphError::NonPositiveK);
        }
        let rows = match direction {
            Direction::Out => &self.out,
            Direction::In => &self.inn,
        };
        let mut visited = FixedBitSet::with_capacity(self.n);
        visited.insert(u.index());
        let mut frontier = visited.clone();
        for _ in 0..k {
            let mut next = FixedBitSet::with_capacity(self.n);
            for x in frontier.ones() {
                next.union_with(&rows[x]);
            }
            next.difference_with(&visited);
            visited.union_with(&next);
            frontier = next;
            if frontier.is_clear() {
                break;
            }
        }
        Ok(VertexSet::from_bits(frontier))
    }

    /// Single-source directed distances from `u`.
    pub fn distances_from(&self, u: VertexId) -> Result<Vec<Distance>, GraphError> {
        self.check_vertex(u)?;
        let mut dist = vec![Distance::Infinite; self.n];
        dist[u.index()] = Distance::Finite(0);
        let mut visited = FixedBitSet::with_capacity(self.n);
        visited.insert(u.index());
        let mut frontier = visited.clone();
        let mut layer = 0u32;
        while !frontier.is_clear() {
            layer += 1;
            let mut next = FixedBitSet::with_capacity(self.n);
            for x in frontier.ones() {
                next.union_with(&self.out[x]);
            }
            next.difference_with(&visited);
            for v in next.ones() {
                dist[v] = Distance::Finite(layer);
            }
            visited.union_with(&next);
            frontier = next;
        }
        Ok(dist)
    }

    /// `W(u)`: every vertex at finite distance from `u`, `u` included.
    pub fn walkable_neighborhood(&self, u: VertexId) -> Result<VertexSet, GraphError> {
        self.check_vertex(u)?;
        Ok(VertexSet::from_bits(self.reach(u.index(), Direction::Out)))
    }

    pub(crate) fn reach(&self, u: usize, direction: Direction) -> FixedBitSet {
        let rows = match direction {
            Direction::Out => &self.out,
            Direction::In => &self.inn,
        };
        let mut visited = FixedBitSet::with_capacity(self.n);
        visited.insert(u);
        let mut stack = vec![u];
        while let Some(x) = stack.pop() {
            for y in rows[x].ones() {
                if !visited.put(y) {
                    stack.push(y);
                }
            }
        }
        visited
    }

    /// Second out-neighborhood as a raw bitset; the hot path for profiles.
    pub(crate) fn second_row(&self, u: usize) -> FixedBitSet {
        let first = &self.out[u];
        let mut second = FixedBitSet::with_capacity(self.n);
        for w in first.ones() {
            second.union_with(&self.out[w]);
        }
        second.difference_with(first);
        second.set(u, false);
        second
    }

    pub fn profile(&self, u: VertexId) -> Result<NeighborhoodProfile, GraphError> {
        self.check_vertex(u)?;
        Ok(self.profile_unchecked(u.index()))
    }

    pub(crate) fn profile_unchecked(&self, u: usize) -> NeighborhoodProfile {
        let n1 = self.out[u].count_ones(..);
        let n2 = self.second_row(u).count_ones(..);
        NeighborhoodProfile::new(VertexId::new(u), n1, n2)
    }

    /// Profiles of every vertex, indexed by vertex id.
    pub fn profiles(&self) -> Vec<NeighborhoodProfile> {
        (0..self.n).map(|u| self.profile_unchecked(u)).collect()
    }

    pub fn anti_satisfaction(&self, u: VertexId) -> Result<i64, GraphError> {
        Ok(self.profile(u)?.anti_satisfaction)
    }

    /// Vertices with `|N1| <= |N2|`. Empty exactly for counterexamples.
    pub fn satisfactory_vertices(&self) -> VertexSet {
        let mut set = VertexSet::empty(self.n);
        for u in 0..self.n {
            if self.profile_unchecked(u).satisfactory {
                set.insert(VertexId::new(u));
            }
        }
        set
    }

    /// First satisfactory vertex by id, stopping at the first hit.
    pub fn first_satisfactory_vertex(&self) -> Option<NeighborhoodProfile> {
        (0..self.n)
            .map(|u| self.profile_unchecked(u))
            .find(|p| p.satisfactory)
    }

    pub fn induced_subgraph(&self, subset: &VertexSet) -> Result<(Digraph, Relabeling), GraphError> {
        let kept: Vec<VertexId> = subset.iter().collect();
        if let Some(&bad) = kept.iter().find(|v| v.index() >= self.n) {
            return Err(GraphError::VertexOutOfRange {
                vertex: bad.index(),
                n: self.n,
            });
        }
        if kept.is_empty() {
            return Err(GraphError::EmptySubset);
        }
        Ok(self.induced_on_sorted(kept))
    }

    fn induced_on_sorted(&self, kept: Vec<VertexId>) -> (Digraph, Relabeling) {
        let m = kept.len();
        let mut new_id = vec![usize::MAX; self.n];
        for (i, v) in kept.iter().enumerate() {
            new_id[v.index()] = i;
        }
        let mut out = vec![FixedBitSet::with_capacity(m); m];
        for (i, v) in kept.iter().enumerate() {
            for w in self.out[v.index()].ones() {
                if new_id[w] != usize::MAX {
                    out[i].insert(new_id[w]);
                }
            }
        }
        let relabeling = Relabeling {
            original: kept,
            source_n: self.n,
        };
        (Digraph::from_out_rows(m, out), relabeling)
    }

    pub fn delete_edge(&self, e: Edge) -> Result<Digraph, GraphError> {
        self.check_edge(e)?;
        let mut out = self.out.clone();
        out[e.tail.index()].set(e.head.index(), false);
        Ok(Digraph::from_out_rows(self.n, out))
    }

    pub fn delete_vertex(&self, u: VertexId) -> Result<(Digraph, Relabeling), GraphError> {
        self.check_vertex(u)?;
        if self.n == 1 {
            return Err(GraphError::WouldBeEmpty);
        }
        let kept = self.vertices().filter(|&v| v != u).collect();
        Ok(self.induced_on_sorted(kept))
    }

    /// Same graph with every edge reversed.
    pub fn reversed(&self) -> Digraph {
        Digraph {
            n: self.n,
            out: self.inn.clone(),
            inn: self.out.clone(),
            edge_count: self.edge_count,
        }
    }
}
