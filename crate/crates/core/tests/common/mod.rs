//! Brute-force reference implementations used as test oracles.
//!
//! Everything here works from the edge list alone: an adjacency matrix,
//! Floyd-Warshall distances, and explicit enumeration of walks, triples and
//! quadruples. None of it calls into the bitset code paths under test.

#![allow(dead_code)]

use proptest::prelude::*;
use seymour_core::{Digraph, Status};

pub struct Oracle {
    pub n: usize,
    pub adj: Vec<Vec<bool>>,
    pub dist: Vec<Vec<Option<usize>>>,
}

impl Oracle {
    pub fn new(g: &Digraph) -> Self {
        let n = g.vertex_count();
        let mut adj = vec![vec![false; n]; n];
        for e in g.edges() {
            adj[e.tail.index()][e.head.index()] = true;
        }
        let dist = floyd_warshall(&adj);
        Oracle { n, adj, dist }
    }

    pub fn layer(&self, u: usize, k: usize) -> Vec<usize> {
        (0..self.n).filter(|&v| self.dist[u][v] == Some(k)).collect()
    }

    pub fn in_layer(&self, u: usize, k: usize) -> Vec<usize> {
        (0..self.n).filter(|&v| self.dist[v][u] == Some(k)).collect()
    }

    pub fn n1(&self, u: usize) -> usize {
        self.layer(u, 1).len()
    }

    pub fn n2(&self, u: usize) -> usize {
        self.layer(u, 2).len()
    }

    pub fn anti(&self, u: usize) -> i64 {
        self.n1(u) as i64 - self.n2(u) as i64
    }

    pub fn satisfactory(&self, u: usize) -> bool {
        self.n1(u) <= self.n2(u)
    }

    pub fn walkable(&self, u: usize) -> Vec<usize> {
        (0..self.n).filter(|&v| self.dist[u][v].is_some()).collect()
    }

    pub fn strongly_connected(&self) -> bool {
        (0..self.n).all(|u| (0..self.n).all(|v| self.dist[u][v].is_some()))
    }

    /// Directed cycle among the vertices flagged in `within`.
    pub fn has_cycle_within(&self, within: &[bool]) -> bool {
        let restricted: Vec<Vec<bool>> = (0..self.n)
            .map(|u| (0..self.n).map(|v| within[u] && within[v] && self.adj[u][v]).collect())
            .collect();
        // Closed walk x -> ... -> x: some out-neighbor y of x reaches x.
        let d = floyd_warshall(&restricted);
        (0..self.n).any(|x| (0..self.n).any(|y| restricted[x][y] && d[y][x].is_some()))
    }

    pub fn has_cycle(&self) -> bool {
        self.has_cycle_within(&vec![true; self.n])
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in 0..self.n {
                if self.adj[u][v] {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Targets in `{v} ∪ N1(v)` reached from `u` by some walk of length 1 or
    /// 2 whose steps are all different from `(u, v)`.
    pub fn avoiding_covered(&self, u: usize, v: usize) -> (Vec<usize>, Vec<usize>) {
        let mut targets: Vec<usize> = (0..self.n).filter(|&w| self.adj[v][w]).collect();
        targets.push(v);
        targets.sort_unstable();
        let step = |a: usize, b: usize| self.adj[a][b] && (a, b) != (u, v);
        let mut covered = Vec::new();
        let mut missing = Vec::new();
        for &target in &targets {
            let one = step(u, target);
            let two = (0..self.n).any(|x| step(u, x) && step(x, target));
            if one || two {
                covered.push(target);
            } else {
                missing.push(target);
            }
        }
        (covered, missing)
    }

    pub fn triangle_bases(&self, u: usize, v: usize) -> usize {
        (0..self.n).filter(|&c| self.adj[u][c] && self.adj[v][c]).count()
    }

    /// Apexes `w` over all ordered quadruples `(t,u,v,w)` of distinct vertices.
    pub fn diamond_apexes(&self, t: usize, u: usize) -> Vec<usize> {
        let mut apexes = Vec::new();
        for w in 0..self.n {
            let found = (0..self.n).any(|v| {
                let ids = [t, u, v, w];
                let distinct = (0..4).all(|i| (i + 1..4).all(|j| ids[i] != ids[j]));
                distinct && self.adj[t][u] && self.adj[u][w] && self.adj[t][v] && self.adj[v][w]
            });
            if found {
                apexes.push(w);
            }
        }
        apexes
    }

    /// Condition `k` evaluated literally from its statement.
    pub fn condition(&self, k: u8) -> Status {
        let verdict = |ok: bool| if ok { Status::Pass } else { Status::Fail };
        let all = 0..self.n;
        match k {
            0 => verdict(all.clone().all(|u| !self.satisfactory(u))),
            1 => verdict(self.strongly_connected()),
            2 => verdict(all.clone().all(|u| matches!(self.anti(u), 1 | 2))),
            3 => verdict(
                self.edges()
                    .into_iter()
                    .all(|(u, v)| self.avoiding_covered(u, v).1.len() <= 1),
            ),
            4 => verdict(self.edges().into_iter().all(|(u, v)| {
                self.triangle_bases(u, v) >= 1 || !self.diamond_apexes(u, v).is_empty()
            })),
            5 => {
                let applicable: Vec<_> = self
                    .edges()
                    .into_iter()
                    .filter(|&(u, v)| self.n1(u) <= self.n1(v))
                    .collect();
                if applicable.is_empty() {
                    return Status::NotApplicable;
                }
                verdict(applicable.into_iter().all(|(u, v)| {
                    let need = self.n1(v) - self.n1(u) + 1;
                    self.triangle_bases(u, v) >= need && self.diamond_apexes(u, v).len() >= need
                }))
            }
            6 => verdict(
                all.clone()
                    .all(|u| self.in_layer(u, 1).into_iter().any(|w| self.anti(w) == 1)),
            ),
            7 => {
                let unit: Vec<bool> = all.map(|u| self.anti(u) == 1).collect();
                verdict(self.has_cycle_within(&unit))
            }
            _ => panic!("no condition {k}"),
        }
    }
}

pub fn floyd_warshall(adj: &[Vec<bool>]) -> Vec<Vec<Option<usize>>> {
    let n = adj.len();
    let mut d = vec![vec![None; n]; n];
    for u in 0..n {
        d[u][u] = Some(0);
        for v in 0..n {
            if adj[u][v] {
                d[u][v] = Some(1);
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|c| a + b < c) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}

/// Builds a graph from per-pair states: 0 absent, 1 `i -> j`, 2 `j -> i`.
pub fn from_pair_states(n: usize, states: &[u8]) -> Digraph {
    let mut edges = Vec::new();
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            match states[k] {
                1 => edges.push((i, j)),
                2 => edges.push((j, i)),
                _ => {}
            }
            k += 1;
        }
    }
    Digraph::from_edges(n, &edges).expect("pair states are digon-free")
}

pub fn arb_digraph(min_n: usize, max_n: usize) -> impl Strategy<Value = Digraph> {
    (min_n..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(0u8..3, n * n.saturating_sub(1) / 2)
            .prop_map(move |states| from_pair_states(n, &states))
    })
}

pub fn ids(set: &seymour_core::VertexSet) -> Vec<usize> {
    set.iter().map(|v| v.index()).collect()
}
