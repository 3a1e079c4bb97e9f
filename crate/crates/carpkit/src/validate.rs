//! Feasibility validation for solutions against an instance.
//!
//! A verdict is the (possibly empty) list of violations; the empty list
//! means the solution is feasible. Validation is pure: identical inputs
//! yield identical verdicts.

use std::collections::HashMap;

use crate::instance::{EdgeId, Instance, Vertex};
use crate::solution::Solution;

/// One violated feasibility condition, naming the route where applicable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Step references an edge id not present in the instance.
    UnknownEdge {
        route: usize,
        step: usize,
        edge: EdgeId,
    },
    /// Step endpoints do not match the referenced edge's endpoints.
    EndpointMismatch {
        route: usize,
        step: usize,
        edge: EdgeId,
    },
    /// Consecutive steps do not share the connecting vertex.
    DiscontiguousWalk { route: usize, step: usize },
    /// Walk does not end where it started.
    OpenWalk { route: usize },
    /// Walk never passes through the depot.
    DepotNotVisited { route: usize },
    /// A zero-demand edge is flagged as served.
    ServedZeroDemand { route: usize, edge: EdgeId },
    /// An edge is flagged served more than once within one route.
    RepeatedServiceInRoute { route: usize, edge: EdgeId },
    /// Total served demand of the route exceeds the capacity.
    CapacityExceeded {
        route: usize,
        load: u64,
        capacity: u64,
    },
    /// A positive-demand edge is not served by any route.
    EdgeUnserved { edge: EdgeId },
    /// A positive-demand edge is served by more than one route or more
    /// than once overall.
    EdgeServedMultiply {
        edge: EdgeId,
        routes: usize,
        times: usize,
    },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::UnknownEdge { route, step, edge } => {
                write!(f, "route {route} step {step}: unknown edge {edge}")
            }
            Violation::EndpointMismatch { route, step, edge } => write!(
                f,
                "route {route} step {step}: endpoints do not match edge {edge}"
            ),
            Violation::DiscontiguousWalk { route, step } => {
                write!(f, "route {route} step {step}: walk is not contiguous")
            }
            Violation::OpenWalk { route } => write!(f, "route {route}: walk is not closed"),
            Violation::DepotNotVisited { route } => {
                write!(f, "route {route}: does not pass through the depot")
            }
            Violation::ServedZeroDemand { route, edge } => {
                write!(f, "route {route}: serves zero-demand edge {edge}")
            }
            Violation::RepeatedServiceInRoute { route, edge } => {
                write!(f, "route {route}: edge {edge} served twice in one route")
            }
            Violation::CapacityExceeded {
                route,
                load,
                capacity,
            } => write!(
                f,
                "route {route}: served demand {load} exceeds capacity {capacity}"
            ),
            Violation::EdgeUnserved { edge } => write!(f, "edge {edge} unserved"),
            Violation::EdgeServedMultiply {
                edge,
                routes,
                times,
            } => {
                if *routes > 1 {
                    write!(f, "edge {edge} served by {routes} routes")
                } else {
                    write!(f, "edge {edge} served {times} times")
                }
            }
        }
    }
}

/// Checks all route and solution invariants; returns every violation found.
///
/// Empty routes are accepted: they cost nothing and serve nothing.
pub fn validate(instance: &Instance, solution: &Solution) -> Vec<Violation> {
    let mut violations = Vec::new();
    let edges = instance.graph.edges();
    // edge id -> (serving routes, total serving count)
    let mut service: HashMap<EdgeId, (Vec<usize>, usize)> = HashMap::new();

    for (ri, route) in solution.routes.iter().enumerate() {
        if route.steps.is_empty() {
            continue;
        }
        let mut structural = true;
        let mut visits_depot = false;
        let mut load: u64 = 0;
        let mut served_here: HashMap<EdgeId, usize> = HashMap::new();
        let mut prev_to: Option<Vertex> = None;

        for (si, step) in route.steps.iter().enumerate() {
            if step.edge >= edges.len() {
                violations.push(Violation::UnknownEdge {
                    route: ri,
                    step: si,
                    edge: step.edge,
                });
                structural = false;
                continue;
            }
            let e = &edges[step.edge];
            if !e.joins(step.from, step.to) {
                violations.push(Violation::EndpointMismatch {
                    route: ri,
                    step: si,
                    edge: step.edge,
                });
                structural = false;
            }
            if let Some(prev) = prev_to {
                if prev != step.from {
                    violations.push(Violation::DiscontiguousWalk {
                        route: ri,
                        step: si,
                    });
                    structural = false;
                }
            }
            prev_to = Some(step.to);
            if step.from == instance.depot || step.to == instance.depot {
                visits_depot = true;
            }
            if step.served {
                if e.demand == 0 {
                    violations.push(Violation::ServedZeroDemand {
                        route: ri,
                        edge: step.edge,
                    });
                } else {
                    load = load.saturating_add(e.demand);
                    *served_here.entry(step.edge).or_insert(0) += 1;
                }
            }
        }

        if structural {
            let first = route.steps.first().unwrap().from;
            let last = route.steps.last().unwrap().to;
            if first != last {
                violations.push(Violation::OpenWalk { route: ri });
            }
        }
        if !visits_depot {
            violations.push(Violation::DepotNotVisited { route: ri });
        }
        if load > instance.capacity {
            violations.push(Violation::CapacityExceeded {
                route: ri,
                load,
                capacity: instance.capacity,
            });
        }
        let mut served_ids: Vec<EdgeId> = served_here.keys().copied().collect();
        served_ids.sort_unstable();
        for edge in served_ids {
            let count = served_here[&edge];
            if count > 1 {
                violations.push(Violation::RepeatedServiceInRoute { route: ri, edge });
            }
            let entry = service.entry(edge).or_default();
            entry.0.push(ri);
            entry.1 += count;
        }
    }

    for (id, e) in edges.iter().enumerate() {
        if e.demand == 0 {
            continue;
        }
        match service.get(&id) {
            None => violations.push(Violation::EdgeUnserved { edge: id }),
            Some((routes, total)) => {
                if routes.len() > 1 || *total > 1 {
                    violations.push(Violation::EdgeServedMultiply {
                        edge: id,
                        routes: routes.len(),
                        times: *total,
                    });
                }
            }
        }
    }

    violations
}
