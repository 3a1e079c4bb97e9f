//! The vertex-splitting transformation from TSP to arc routing, and the
//! built-in four-city family that shows why it does not preserve
//! approximation ratios: the arc-routing tour may deadhead over shortest
//! paths and revisit vertices, so its optimum can stay bounded while the
//! TSP optimum grows.

use thiserror::Error;

use crate::instance::{Edge, Graph, Instance, InstanceError, Vertex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TspError {
    #[error("cost table is not square")]
    NotSquare,
    #[error("cost table is not symmetric at ({u}, {v})")]
    Asymmetric { u: usize, v: usize },
    #[error("diagonal entry ({v}, {v}) must be zero")]
    NonzeroDiagonal { v: usize },
    #[error("off-diagonal cost at ({u}, {v}) must be positive")]
    ZeroCost { u: usize, v: usize },
    #[error("capacity {capacity} is below the vertex count {vertices}")]
    CapacityTooSmall { capacity: u64, vertices: usize },
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

/// A complete symmetric TSP instance given by its cost table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TspInstance {
    costs: Vec<Vec<u64>>,
}

impl TspInstance {
    pub fn new(costs: Vec<Vec<u64>>) -> Result<Self, TspError> {
        let n = costs.len();
        for row in &costs {
            if row.len() != n {
                return Err(TspError::NotSquare);
            }
        }
        for (u, row) in costs.iter().enumerate() {
            if row[u] != 0 {
                return Err(TspError::NonzeroDiagonal { v: u });
            }
            for v in (u + 1)..n {
                if row[v] != costs[v][u] {
                    return Err(TspError::Asymmetric { u, v });
                }
                if row[v] == 0 {
                    return Err(TspError::ZeroCost { u, v });
                }
            }
        }
        Ok(TspInstance { costs })
    }

    pub fn vertex_count(&self) -> usize {
        self.costs.len()
    }

    pub fn cost(&self, u: usize, v: usize) -> u64 {
        self.costs[u][v]
    }
}

/// Splits every TSP vertex `v` into two copies joined by a cost-zero,
/// demand-one edge; every TSP edge `{u, v}` becomes four zero-demand
/// edges between the copies of `u` and the copies of `v`, keeping the
/// original cost. The depot is the first copy of vertex 0.
///
/// The capacity must be at least the vertex count so one vehicle can
/// serve every split edge.
pub fn tsp_to_carp(tsp: &TspInstance, capacity: u64) -> Result<Instance, TspError> {
    let n = tsp.vertex_count();
    if capacity < n as u64 {
        return Err(TspError::CapacityTooSmall {
            capacity,
            vertices: n,
        });
    }
    let first = |v: usize| -> Vertex { 2 * v };
    let second = |v: usize| -> Vertex { 2 * v + 1 };

    let mut edges = Vec::new();
    for v in 0..n {
        edges.push(Edge {
            u: first(v),
            v: second(v),
            cost: 0,
            demand: 1,
        });
    }
    for u in 0..n {
        for v in (u + 1)..n {
            let cost = tsp.cost(u, v);
            for a in [first(u), second(u)] {
                for b in [first(v), second(v)] {
                    edges.push(Edge {
                        u: a,
                        v: b,
                        cost,
                        demand: 0,
                    });
                }
            }
        }
    }
    let graph = Graph::new(2 * n, edges)?;
    Ok(Instance::new(graph, 0, capacity)?)
}

/// The four-city counterexample family: three unit edges forming the path
/// 1-4-3-2 and three edges of cost `ell` closing the clique. The TSP
/// optimum is `ell + 3`, while the transformed arc-routing optimum stays
/// bounded as `ell` grows (out-and-back over the unit path costs 6).
pub fn fig1_tsp(ell: u64) -> TspInstance {
    assert!(ell >= 1, "edge cost must be positive");
    let table = vec![
        vec![0, ell, ell, 1],
        vec![ell, 0, 1, ell],
        vec![ell, 1, 0, 1],
        vec![1, ell, 1, 0],
    ];
    TspInstance::new(table).expect("table is symmetric and positive")
}

/// The transformed counterexample as an arc-routing instance.
pub fn fig1_instance(ell: u64, capacity: u64) -> Result<Instance, TspError> {
    tsp_to_carp(&fig1_tsp(ell), capacity)
}
