use thiserror::Error;

/// Violations of the digraph invariants and bad operation arguments.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("loop edge at vertex {0}")]
    LoopEdge(usize),
    #[error("digon: both ({0},{1}) and ({1},{0}) present")]
    DigonPair(usize, usize),
    #[error("duplicate edge ({0},{1})")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("a digraph needs at least one vertex")]
    EmptyVertexSet,
    #[error("neighborhood index k must be positive")]
    NonPositiveK,
    #[error("induced subgraph requested on an empty vertex set")]
    EmptySubset,
    #[error("no edge ({0},{1}) in graph")]
    NoSuchEdge(usize, usize),
    #[error("deleting the only vertex would leave an empty graph")]
    WouldBeEmpty,
}
