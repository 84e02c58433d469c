//! Structural predicates: connectivity, cycles, underlying girth, and the
//! transitive-triangle / 2-directed-diamond base counts.

use std::collections::VecDeque;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::digraph::{Digraph, Direction, Edge, VertexId, VertexSet};
use crate::error::GraphError;

/// Four distinct vertices with edges `(t,u),(u,w),(t,v),(v,w)`. The edges
/// `(t,u)` and `(t,v)` are its bases and `w` is its apex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiamondWitness {
    pub t: VertexId,
    pub u: VertexId,
    pub v: VertexId,
    pub w: VertexId,
}

impl DiamondWitness {
    pub fn is_valid_in(&self, g: &Digraph) -> bool {
        let ids = [self.t, self.u, self.v, self.w];
        let distinct = (0..4).all(|i| (i + 1..4).all(|j| ids[i] != ids[j]));
        distinct
            && g.has_edge(self.t, self.u)
            && g.has_edge(self.u, self.w)
            && g.has_edge(self.t, self.v)
            && g.has_edge(self.v, self.w)
    }
}

/// Length of the shortest cycle of the undirected shadow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum GirthValue {
    Finite(usize),
    Infinite,
}

impl fmt::Display for GirthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GirthValue::Finite(g) => write!(f, "{g}"),
            GirthValue::Infinite => f.write_str("inf"),
        }
    }
}

pub fn is_strongly_connected(g: &Digraph) -> bool {
    let n = g.vertex_count();
    g.reach(0, Direction::Out).count_ones(..) == n && g.reach(0, Direction::In).count_ones(..) == n
}

/// Kahn's algorithm: a cycle exists iff some vertex is never peeled.
pub fn has_directed_cycle(g: &Digraph) -> bool {
    let n = g.vertex_count();
    let mut indegree: Vec<usize> = g.vertices().map(|v| g.in_degree(v)).collect();
    let mut queue: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut peeled = 0;
    while let Some(x) = queue.pop() {
        peeled += 1;
        for y in g.out_row(x).ones() {
            indegree[y] -= 1;
            if indegree[y] == 0 {
                queue.push(y);
            }
        }
    }
    peeled < n
}

/// Some directed cycle, listed in traversal order, or `None` for a DAG.
pub fn find_directed_cycle(g: &Digraph) -> Option<Vec<VertexId>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Color {
        White,
        Grey,
        Black,
    }
    let n = g.vertex_count();
    let mut color = vec![Color::White; n];
    let mut parent = vec![usize::MAX; n];
    for root in 0..n {
        if color[root] != Color::White {
            continue;
        }
        let mut stack: Vec<(usize, Vec<usize>)> = vec![(root, g.out_row(root).ones().collect())];
        color[root] = Color::Grey;
        while let Some((x, pending)) = stack.last_mut() {
            let x = *x;
            match pending.pop() {
                Some(y) => match color[y] {
                    Color::White => {
                        color[y] = Color::Grey;
                        parent[y] = x;
                        stack.push((y, g.out_row(y).ones().collect()));
                    }
                    Color::Grey => {
                        let mut cycle = vec![VertexId::new(x)];
                        let mut cur = x;
                        while cur != y {
                            cur = parent[cur];
                            cycle.push(VertexId::new(cur));
                        }
                        cycle.reverse();
                        return Some(cycle);
                    }
                    Color::Black => {}
                },
                None => {
                    color[x] = Color::Black;
                    stack.pop();
                }
            }
        }
    }
    None
}

/// BFS from every vertex of the undirected shadow; adequate at desk scale.
pub fn underlying_girth(g: &Digraph) -> GirthValue {
    let n = g.vertex_count();
    let shadow: Vec<FixedBitSet> = (0..n)
        .map(|u| {
            let mut row = g.out_row(u).clone();
            row.union_with(g.in_row(u));
            row
        })
        .collect();
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    for source in 0..n {
        dist.fill(usize::MAX);
        parent.fill(usize::MAX);
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            if 2 * dist[x] >= best {
                break;
            }
            for y in shadow[x].ones() {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    parent[y] = x;
                    queue.push_back(y);
                } else if parent[x] != y {
                    best = best.min(dist[x] + dist[y] + 1);
                }
            }
        }
    }
    if best == usize::MAX {
        GirthValue::Infinite
    } else {
        GirthValue::Finite(best)
    }
}

pub fn has_transitive_triangle(g: &Digraph) -> bool {
    g.edges().any(|e| {
        g.out_row(e.tail.index())
            .intersection_count(g.out_row(e.head.index()))
            > 0
    })
}

/// `|N1(u) ∩ N1(v)|` for `e = (u, v)`: the transitive triangles with base `e`.
pub fn triangle_base_count(g: &Digraph, e: Edge) -> Result<usize, GraphError> {
    g.check_edge(e)?;
    Ok(g
        .out_row(e.tail.index())
        .intersection_count(g.out_row(e.head.index())))
}

/// Distinct apexes `w` of 2-directed diamonds having `e = (t, u)` as a base.
///
/// `w` must lie in `N1(u)` and be reached from `t` through some `v != u`.
/// Distinctness of `t, u, v, w` follows from loop- and digon-freeness.
pub fn diamond_base_targets(g: &Digraph, e: Edge) -> Result<VertexSet, GraphError> {
    g.check_edge(e)?;
    Ok(VertexSet::from_bits(diamond_apexes(g, e)))
}

pub(crate) fn diamond_apexes(g: &Digraph, e: Edge) -> FixedBitSet {
    let (t, u) = (e.tail.index(), e.head.index());
    let mut via_other = FixedBitSet::with_capacity(g.vertex_count());
    for v in g.out_row(t).ones().filter(|&v| v != u) {
        via_other.union_with(g.out_row(v));
    }
    via_other.intersect_with(g.out_row(u));
    via_other
}

/// One concrete diamond per apex of `e`, for reporting.
pub fn diamond_witnesses(g: &Digraph, e: Edge) -> Result<Vec<DiamondWitness>, GraphError> {
    let apexes = diamond_base_targets(g, e)?;
    Ok(apexes
        .iter()
        .map(|w| {
            let v = g
                .out_row(e.tail.index())
                .ones()
                .find(|&v| v != e.head.index() && g.out_row(v).contains(w.index()))
                .expect("apex has a second path");
            DiamondWitness {
                t: e.tail,
                u: e.head,
                v: VertexId::new(v),
                w,
            }
        })
        .collect())
}

/// Vertex of minimum out-degree, ties to the smallest id.
pub fn min_outdegree_vertex(g: &Digraph) -> VertexId {
    g.vertices()
        .min_by_key(|&v| (g.out_degree(v), v))
        .expect("digraphs are nonempty")
}
