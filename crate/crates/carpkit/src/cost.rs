//! Interchangeable edge cost functions and route/solution cost accounting.
//!
//! Three modes share one evaluator: the instance's original costs, the
//! down-triangle costs (shortest-path costs on zero-demand edges, original
//! costs on required edges), and the full-triangle costs (shortest-path
//! costs everywhere). The latter two are built by
//! [`crate::reduction::ReductionArtifacts`].

use crate::instance::{EdgeId, Instance};
use crate::solution::{Route, Solution};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostMode {
    Original,
    DownTriangle,
    FullTriangle,
}

impl std::fmt::Display for CostMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CostMode::Original => write!(f, "original"),
            CostMode::DownTriangle => write!(f, "down-triangle"),
            CostMode::FullTriangle => write!(f, "full-triangle"),
        }
    }
}

/// A per-edge cost table under one of the three modes.
///
/// Every traversal of an edge is charged, served and deadhead alike;
/// multiplicity counts.
#[derive(Debug, Clone)]
pub struct CostFunction {
    mode: CostMode,
    costs: Vec<u64>,
}

impl CostFunction {
    /// The instance's own edge costs.
    pub fn original(instance: &Instance) -> Self {
        CostFunction {
            mode: CostMode::Original,
            costs: instance.graph.edges().iter().map(|e| e.cost).collect(),
        }
    }

    pub(crate) fn from_table(mode: CostMode, costs: Vec<u64>) -> Self {
        CostFunction { mode, costs }
    }

    pub fn mode(&self) -> CostMode {
        self.mode
    }

    pub fn edge_cost(&self, e: EdgeId) -> u64 {
        self.costs[e]
    }

    /// Sum of step costs over the route. Requires a structurally valid
    /// route (every step's edge id in range).
    pub fn route_cost(&self, route: &Route) -> u64 {
        let total: u128 = route.steps.iter().map(|s| self.costs[s.edge] as u128).sum();
        u64::try_from(total).expect("route cost exceeds 64-bit range")
    }

    pub fn solution_cost(&self, solution: &Solution) -> u64 {
        let total: u128 = solution
            .routes
            .iter()
            .map(|r| self.route_cost(r) as u128)
            .sum();
        u64::try_from(total).expect("solution cost exceeds 64-bit range")
    }
}
