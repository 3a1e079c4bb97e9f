//! Routes and solutions: closed walks through the depot made of directed
//! edge traversals, each flagged as serving or deadheading.

use crate::instance::{EdgeId, Vertex};

/// One directed traversal of an edge within a route.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    pub edge: EdgeId,
    pub from: Vertex,
    pub to: Vertex,
    /// True when this traversal satisfies the edge's demand.
    pub served: bool,
}

impl Step {
    pub fn serve(edge: EdgeId, from: Vertex, to: Vertex) -> Self {
        Step {
            edge,
            from,
            to,
            served: true,
        }
    }

    pub fn deadhead(edge: EdgeId, from: Vertex, to: Vertex) -> Self {
        Step {
            edge,
            from,
            to,
            served: false,
        }
    }
}

/// A closed walk through the depot. The empty route is permitted and
/// carries no cost and no service.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Route {
    pub steps: Vec<Step>,
}

impl Route {
    pub fn new(steps: Vec<Step>) -> Self {
        Route { steps }
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Ids of edges this route serves, in traversal order.
    pub fn served_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.steps.iter().filter(|s| s.served).map(|s| s.edge)
    }
}

/// A set of routes; feasibility demands every positive-demand edge be
/// served exactly once across all routes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Solution {
    pub routes: Vec<Route>,
}

impl Solution {
    pub fn new(routes: Vec<Route>) -> Self {
        Solution { routes }
    }

    pub fn empty() -> Self {
        Solution { routes: Vec::new() }
    }

    /// Total number of steps over all routes.
    pub fn step_count(&self) -> usize {
        self.routes.iter().map(|r| r.steps.len()).sum()
    }
}
