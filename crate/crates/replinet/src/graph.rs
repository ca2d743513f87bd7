//! Finite weighted directed graphs over vertex set {0, .., n-1}.
//!
//! Weights are stored as a dense row-major matrix. Entry `(v, w)` is the
//! weight of the arc from `v` to `w`; zero means no arc. Self-loops are
//! rejected, so the diagonal is always zero. Vertices are 0-indexed in the
//! API; file formats and CSV output shift to 1-indexed labels at the
//! serialization boundary.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("graph needs at least one vertex")]
    Empty,
    #[error("vertex {v} out of range for {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("self-loop on vertex {v} is not allowed")]
    SelfLoop { v: usize },
    #[error("duplicate edge ({from}, {to})")]
    DuplicateEdge { from: usize, to: usize },
    #[error("edge ({from}, {to}) has non-positive weight {weight}")]
    NonPositiveWeight { from: usize, to: usize, weight: f64 },
    #[error("star graphs need at least 3 vertices, got {n}")]
    StarTooSmall { n: usize },
    #[error("heavy edge ({a}, {b}) is not an edge of the closed star")]
    HeavyEdgeNotInStar { a: usize, b: usize },
    #[error("heavy weight must be positive and finite, got {weight}")]
    BadHeavyWeight { weight: f64 },
}

/// Weighted directed graph with a dense adjacency matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    // row-major, n*n entries, diagonal zero, all entries >= 0 and finite
    weights: Vec<f64>,
}

impl Graph {
    /// Builds a graph from a directed edge list. Each `(from, to, weight)`
    /// adds one arc; weights must be positive and finite, self-loops and
    /// repeated arcs are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut weights = vec![0.0; n * n];
        for &(from, to, weight) in edges {
            for v in [from, to] {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { v, n });
                }
            }
            if from == to {
                return Err(GraphError::SelfLoop { v: from });
            }
            if !(weight > 0.0 && weight.is_finite()) {
                return Err(GraphError::NonPositiveWeight { from, to, weight });
            }
            let slot = &mut weights[from * n + to];
            if *slot != 0.0 {
                return Err(GraphError::DuplicateEdge { from, to });
            }
            *slot = weight;
        }
        Ok(Graph { n, weights })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Weight of the arc `v -> w`; zero when the arc is absent.
    pub fn weight(&self, v: usize, w: usize) -> f64 {
        self.check_vertex(v);
        self.check_vertex(w);
        self.weights[v * self.n + w]
    }

    /// Row of outgoing arc weights for `v`.
    pub fn row(&self, v: usize) -> &[f64] {
        self.check_vertex(v);
        &self.weights[v * self.n..(v + 1) * self.n]
    }

    /// Total outgoing weight of `v`. Zero for a vertex with no out-arcs.
    pub fn out_weight_sum(&self, v: usize) -> f64 {
        self.row(v).iter().sum()
    }

    /// Neighborhood structure of `v`: out-neighbors follow arcs leaving `v`,
    /// plain neighbors ignore direction.
    pub fn neighborhood(&self, v: usize) -> NeighborhoodReport {
        self.check_vertex(v);
        let mut out_neighbors = Vec::new();
        let mut neighbors = Vec::new();
        for w in 0..self.n {
            let outgoing = self.weights[v * self.n + w] > 0.0;
            let incoming = self.weights[w * self.n + v] > 0.0;
            if outgoing {
                out_neighbors.push(w);
            }
            if outgoing || incoming {
                neighbors.push(w);
            }
        }
        NeighborhoodReport {
            degree: neighbors.len(),
            out_degree: out_neighbors.len(),
            weight_sum: self.out_weight_sum(v),
            neighbors,
            out_neighbors,
        }
    }

    fn check_vertex(&self, v: usize) {
        assert!(v < self.n, "vertex {v} out of range for {} vertices", self.n);
    }
}

/// Neighborhood census for one vertex. Vertex lists are sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborhoodReport {
    pub neighbors: Vec<usize>,
    pub out_neighbors: Vec<usize>,
    pub degree: usize,
    pub out_degree: usize,
    pub weight_sum: f64,
}

/// The three benchmark star topologies on `n` vertices, hub at index 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarKind {
    /// Hub connected to every peripheral vertex, all weights 1.
    Open,
    /// Open star plus the peripheral cycle 1-2-..-(n-1)-1, all weights 1.
    Closed,
    /// Closed star with selected edges reweighted to `heavy_weight`.
    WeightedAsymmetric,
}

/// Builds one of the benchmark stars. All edges are bidirectional (one arc
/// each way, equal weights). For [`StarKind::WeightedAsymmetric`] the
/// `heavy_edges` pairs (0-indexed, unordered) select closed-star edges whose
/// two arcs get `heavy_weight` instead of 1; pairs outside the closed star
/// are rejected. The other kinds take no heavy edges.
pub fn build_star(
    kind: StarKind,
    n: usize,
    heavy_weight: f64,
    heavy_edges: &[(usize, usize)],
) -> Result<Graph, GraphError> {
    if n < 3 {
        return Err(GraphError::StarTooSmall { n });
    }
    let mut undirected: Vec<(usize, usize, f64)> = Vec::new();
    for p in 1..n {
        undirected.push((0, p, 1.0));
    }
    if kind != StarKind::Open {
        for p in 1..n {
            let q = if p == n - 1 { 1 } else { p + 1 };
            undirected.push((p.min(q), p.max(q), 1.0));
        }
    }
    if kind == StarKind::WeightedAsymmetric {
        if !(heavy_weight > 0.0 && heavy_weight.is_finite()) {
            return Err(GraphError::BadHeavyWeight { weight: heavy_weight });
        }
        for &(a, b) in heavy_edges {
            for v in [a, b] {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { v, n });
                }
            }
            let key = (a.min(b), a.max(b));
            match undirected.iter_mut().find(|(x, y, _)| (*x, *y) == key) {
                Some(edge) => edge.2 = heavy_weight,
                None => return Err(GraphError::HeavyEdgeNotInStar { a, b }),
            }
        }
    }
    let mut arcs = Vec::with_capacity(2 * undirected.len());
    for (a, b, w) in undirected {
        arcs.push((a, b, w));
        arcs.push((b, a, w));
    }
    Graph::from_edges(n, &arcs)
}
