//! Problem instances: an undirected graph with integer edge costs and
//! demands, a depot vertex, and a vehicle capacity.

use std::collections::HashMap;

use thiserror::Error;

/// Vertex index, `0..vertex_count`.
pub type Vertex = usize;

/// Edge identifier: the index of the edge in [`Graph::edges`].
pub type EdgeId = usize;

/// An undirected edge with an exact integer cost and demand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub u: Vertex,
    pub v: Vertex,
    pub cost: u64,
    pub demand: u64,
}

impl Edge {
    /// The endpoint opposite to `x`; panics if `x` is not an endpoint.
    pub fn other(&self, x: Vertex) -> Vertex {
        if x == self.u {
            self.v
        } else {
            assert_eq!(x, self.v, "vertex {x} is not an endpoint");
            self.u
        }
    }

    /// True if `{a, b}` equals this edge's endpoint pair.
    pub fn joins(&self, a: Vertex, b: Vertex) -> bool {
        (self.u == a && self.v == b) || (self.u == b && self.v == a)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InstanceError {
    #[error("edge {id}: self-loop at vertex {vertex}")]
    SelfLoop { id: EdgeId, vertex: Vertex },
    #[error("edge {id}: endpoint {vertex} out of range (graph has {vertex_count} vertices)")]
    VertexOutOfRange {
        id: EdgeId,
        vertex: Vertex,
        vertex_count: usize,
    },
    #[error("edges {first} and {second} join the same vertex pair")]
    DuplicateEdge { first: EdgeId, second: EdgeId },
    #[error("graph must have at least one vertex")]
    NoVertices,
    #[error("depot {depot} out of range (graph has {vertex_count} vertices)")]
    DepotOutOfRange { depot: Vertex, vertex_count: usize },
    #[error("capacity must be positive")]
    ZeroCapacity,
    #[error("edge {id} demand {demand} exceeds capacity {capacity}")]
    DemandExceedsCapacity {
        id: EdgeId,
        demand: u64,
        capacity: u64,
    },
    #[error("total edge cost too large for exact 64-bit accounting")]
    CostRange,
}

/// A simple undirected graph with integer edge costs and demands.
///
/// Edges are identified by their index in insertion order. Self-loops and
/// parallel edges are rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<Edge>,
    by_pair: HashMap<(Vertex, Vertex), EdgeId>,
}

impl Graph {
    pub fn new(vertex_count: usize, edges: Vec<Edge>) -> Result<Self, InstanceError> {
        if vertex_count == 0 {
            return Err(InstanceError::NoVertices);
        }
        let mut by_pair = HashMap::new();
        for (id, e) in edges.iter().enumerate() {
            if e.u == e.v {
                return Err(InstanceError::SelfLoop { id, vertex: e.u });
            }
            for vertex in [e.u, e.v] {
                if vertex >= vertex_count {
                    return Err(InstanceError::VertexOutOfRange {
                        id,
                        vertex,
                        vertex_count,
                    });
                }
            }
            let key = (e.u.min(e.v), e.u.max(e.v));
            if let Some(&first) = by_pair.get(&key) {
                return Err(InstanceError::DuplicateEdge { first, second: id });
            }
            by_pair.insert(key, id);
        }
        Ok(Graph {
            vertex_count,
            edges,
            by_pair,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    /// The edge joining `a` and `b`, if present.
    pub fn edge_between(&self, a: Vertex, b: Vertex) -> Option<EdgeId> {
        self.by_pair.get(&(a.min(b), a.max(b))).copied()
    }

    /// Ids of edges with positive demand, in id order.
    pub fn required_edges(&self) -> Vec<EdgeId> {
        (0..self.edges.len())
            .filter(|&id| self.edges[id].demand > 0)
            .collect()
    }

    /// Sum of all edge costs; the basic unit of the cost-range check.
    pub fn total_cost(&self) -> u128 {
        self.edges.iter().map(|e| e.cost as u128).sum()
    }
}

/// A full problem instance: graph, depot, and vehicle capacity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    pub depot: Vertex,
    pub capacity: u64,
}

impl Instance {
    /// Builds an instance, checking depot range, positive capacity, the
    /// per-edge demand bound `d(e) <= W`, and that exact 64-bit cost
    /// accounting cannot overflow on any tour the toolkit constructs.
    ///
    /// Reachability of required edges from the depot is not checked here;
    /// it is verified where shortest-path data is first needed.
    pub fn new(graph: Graph, depot: Vertex, capacity: u64) -> Result<Self, InstanceError> {
        if depot >= graph.vertex_count {
            return Err(InstanceError::DepotOutOfRange {
                depot,
                vertex_count: graph.vertex_count,
            });
        }
        if capacity == 0 {
            return Err(InstanceError::ZeroCapacity);
        }
        for (id, e) in graph.edges.iter().enumerate() {
            if e.demand > 0 && e.demand > capacity {
                return Err(InstanceError::DemandExceedsCapacity {
                    id,
                    demand: e.demand,
                    capacity,
                });
            }
        }
        // Every tour the solvers build has at most 4*(E+2) shortest-path or
        // service legs, each of cost at most the total edge cost.
        let legs = 4 * (graph.edges.len() as u128 + 2);
        if graph.total_cost().saturating_mul(legs) > u64::MAX as u128 {
            return Err(InstanceError::CostRange);
        }
        Ok(Instance {
            graph,
            depot,
            capacity,
        })
    }

    pub fn required_edges(&self) -> Vec<EdgeId> {
        self.graph.required_edges()
    }

    /// Total demand over all edges.
    pub fn total_demand(&self) -> u64 {
        self.graph.edges().iter().map(|e| e.demand).sum()
    }
}
