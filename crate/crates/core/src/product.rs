//! Counterexample-multiplying product: every vertex of `D` is replaced by a
//! copy of `H`, and each edge `(d1, d2)` of `D` becomes a complete one-way
//! connection from copy `d1` to copy `d2`.
//!
//! Product vertex `(d, h)` is encoded row-major as `d * |V(H)| + h`.

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::digraph::{Digraph, VertexId};
use crate::error::GraphError;

/// Bijection between `V(D) x V(H)` and the product's dense ids.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ProductLabeling {
    pub d_count: usize,
    pub h_count: usize,
}

impl ProductLabeling {
    pub fn new(d_count: usize, h_count: usize) -> Self {
        ProductLabeling { d_count, h_count }
    }

    pub fn vertex_count(&self) -> usize {
        self.d_count * self.h_count
    }

    pub fn encode(&self, d: VertexId, h: VertexId) -> VertexId {
        debug_assert!(d.index() < self.d_count && h.index() < self.h_count);
        VertexId::new(d.index() * self.h_count + h.index())
    }

    pub fn decode(&self, v: VertexId) -> (VertexId, VertexId) {
        debug_assert!(v.index() < self.vertex_count());
        (
            VertexId::new(v.index() / self.h_count),
            VertexId::new(v.index() % self.h_count),
        )
    }

    /// `(product, d, h)` for every product vertex, in id order.
    pub fn rows(&self) -> impl Iterator<Item = (VertexId, VertexId, VertexId)> + '_ {
        (0..self.vertex_count()).map(move |p| {
            let v = VertexId::new(p);
            let (d, h) = self.decode(v);
            (v, d, h)
        })
    }
}

/// Closed-form neighborhood sizes of a product vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PredictedProfile {
    pub n1: usize,
    pub n2: usize,
    pub anti_satisfaction: i64,
}

/// `H` qualifies when no vertex has negative anti-satisfaction.
pub fn is_valid_second_factor(h: &Digraph) -> bool {
    h.profiles().iter().all(|p| p.anti_satisfaction >= 0)
}

pub fn build_product(d_graph: &Digraph, h_graph: &Digraph) -> (Digraph, ProductLabeling) {
    let labeling = ProductLabeling::new(d_graph.vertex_count(), h_graph.vertex_count());
    let (dn, hn) = (labeling.d_count, labeling.h_count);
    let total = labeling.vertex_count();
    let mut out = Vec::with_capacity(total);
    for d in 0..dn {
        // Every vertex of copy d shares the same between-copy row.
        let mut between = FixedBitSet::with_capacity(total);
        for d2 in d_graph.out_row(d).ones() {
            between.insert_range(d2 * hn..(d2 + 1) * hn);
        }
        for h in 0..hn {
            let mut row = between.clone();
            for h2 in h_graph.out_row(h).ones() {
                row.insert(d * hn + h2);
            }
            out.push(row);
        }
    }
    (Digraph::from_out_rows(total, out), labeling)
}

/// Predicted `(|N1|, |N2|)` of product vertex `(d, h)` from factor profiles
/// alone: `|N_i,H(h)| + |V(H)| * |N_i,D(d)|`.
pub fn predicted_profile(
    d_graph: &Digraph,
    h_graph: &Digraph,
    d: VertexId,
    h: VertexId,
) -> Result<PredictedProfile, GraphError> {
    let pd = d_graph.profile(d)?;
    let ph = h_graph.profile(h)?;
    let hn = h_graph.vertex_count();
    let n1 = ph.n1 + hn * pd.n1;
    let n2 = ph.n2 + hn * pd.n2;
    Ok(PredictedProfile {
        n1,
        n2,
        anti_satisfaction: n1 as i64 - n2 as i64,
    })
}
