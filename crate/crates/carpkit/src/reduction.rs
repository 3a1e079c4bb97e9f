//! The cost-function reduction to the triangle-inequality case and the
//! solution transformations that carry approximate solutions back.
//!
//! [`metric_closure`] derives two modified cost tables from an instance:
//! the down-triangle costs keep original costs on required edges and use
//! shortest-path costs on zero-demand edges; the full-triangle costs use
//! shortest-path costs everywhere. Required edges that are strictly more
//! expensive than the shortest path between their endpoints ("shortcut
//! edges") are collected together with the total saving; the saving is
//! exactly the gap between optima of the original and the fully metric
//! instance.
//!
//! [`normalize_solution`] rewrites a metric-feasible solution so each
//! shortcut edge is traversed exactly once (its serving traversal), at
//! unchanged full-triangle cost. [`lift_solution`] expands every deadhead
//! traversal that the down-triangle costs priced below the original edge
//! cost into an explicit shortest path, producing a solution for the
//! original instance at unchanged cost.

use thiserror::Error;

use crate::apsp::Apsp;
use crate::cost::{CostFunction, CostMode};
use crate::instance::{Edge, EdgeId, Graph, Instance, InstanceError, Vertex};
use crate::solution::{Route, Solution, Step};
use crate::validate::{validate, Violation};

#[derive(Debug, Error)]
pub enum ReductionError {
    #[error("disconnected instance: vertex {vertex} of required edge {edge} is unreachable from the depot")]
    Disconnected { edge: EdgeId, vertex: Vertex },
    #[error("solution infeasible for the {mode} instance: {}",
            .violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InfeasibleInput {
        mode: CostMode,
        violations: Vec<Violation>,
    },
    #[error("solution does not traverse required shortcut edge {edge}")]
    MissingShortcutEdge { edge: EdgeId },
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

/// Shortest-path data and the derived cost tables for one instance.
#[derive(Debug, Clone)]
pub struct ReductionArtifacts {
    apsp: Apsp,
    down: Vec<u64>,
    full: Vec<u64>,
    shortcut_edges: Vec<EdgeId>,
    saving: u64,
}

impl ReductionArtifacts {
    /// Shortest-path distance under the original costs.
    pub fn distance(&self, u: Vertex, v: Vertex) -> u64 {
        self.apsp.distance(u, v)
    }

    /// One shortest path as deadhead steps; deterministic.
    pub fn path_steps(&self, u: Vertex, v: Vertex) -> Vec<Step> {
        self.apsp.path_steps(u, v)
    }

    pub fn apsp(&self) -> &Apsp {
        &self.apsp
    }

    /// Required edges strictly more expensive than the shortest path
    /// between their endpoints, in id order.
    pub fn shortcut_edges(&self) -> &[EdgeId] {
        &self.shortcut_edges
    }

    /// Total cost decrease over the shortcut edges when moving from the
    /// down-triangle to the full-triangle costs.
    pub fn saving(&self) -> u64 {
        self.saving
    }

    pub fn down_cost(&self, e: EdgeId) -> u64 {
        self.down[e]
    }

    pub fn full_cost(&self, e: EdgeId) -> u64 {
        self.full[e]
    }

    /// Down-triangle cost table: original costs on required edges,
    /// shortest-path costs on zero-demand edges.
    pub fn down_costs(&self) -> CostFunction {
        CostFunction::from_table(CostMode::DownTriangle, self.down.clone())
    }

    /// Full-triangle cost table: shortest-path costs on every edge.
    pub fn full_costs(&self) -> CostFunction {
        CostFunction::from_table(CostMode::FullTriangle, self.full.clone())
    }
}

/// Computes shortest-path distances under the original costs and derives
/// both modified cost tables.
///
/// Fails when some required edge's endpoint is unreachable from the depot.
pub fn metric_closure(instance: &Instance) -> Result<ReductionArtifacts, ReductionError> {
    let costs: Vec<u64> = instance.graph.edges().iter().map(|e| e.cost).collect();
    let apsp = Apsp::compute(&instance.graph, &costs);

    for (id, e) in instance.graph.edges().iter().enumerate() {
        if e.demand == 0 {
            continue;
        }
        for vertex in [e.u, e.v] {
            if !apsp.reachable(instance.depot, vertex) {
                return Err(ReductionError::Disconnected { edge: id, vertex });
            }
        }
    }

    let mut down = Vec::with_capacity(instance.graph.edges().len());
    let mut full = Vec::with_capacity(instance.graph.edges().len());
    let mut shortcut_edges = Vec::new();
    let mut saving: u64 = 0;
    for (id, e) in instance.graph.edges().iter().enumerate() {
        // The edge itself is a path between its endpoints, so the distance
        // is finite and at most the edge cost.
        let d = apsp.distance(e.u, e.v);
        debug_assert!(d <= e.cost);
        full.push(d);
        if e.demand > 0 {
            down.push(e.cost);
            if e.cost != d {
                shortcut_edges.push(id);
                saving += e.cost - d;
            }
        } else {
            down.push(d);
        }
    }

    Ok(ReductionArtifacts {
        apsp,
        down,
        full,
        shortcut_edges,
        saving,
    })
}

/// Returns the instance with costs replaced by the chosen modified table;
/// graph topology, demands, depot, and capacity are unchanged.
pub fn reduced_instance(
    instance: &Instance,
    artifacts: &ReductionArtifacts,
    mode: CostMode,
) -> Instance {
    let table: &[u64] = match mode {
        CostMode::DownTriangle => &artifacts.down,
        CostMode::FullTriangle => &artifacts.full,
        CostMode::Original => {
            return instance.clone();
        }
    };
    let edges = instance
        .graph
        .edges()
        .iter()
        .zip(table)
        .map(|(e, &cost)| Edge {
            u: e.u,
            v: e.v,
            cost,
            demand: e.demand,
        })
        .collect();
    let graph = Graph::new(instance.graph.vertex_count(), edges)
        .expect("reduced graph shares the validated topology");
    Instance::new(graph, instance.depot, instance.capacity)
        .expect("reduced costs are pointwise at most the original costs")
}

fn feasible_for(
    instance: &Instance,
    solution: &Solution,
    mode: CostMode,
) -> Result<(), ReductionError> {
    let violations = validate(instance, solution);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(ReductionError::InfeasibleInput { mode, violations })
    }
}

/// Rewrites a solution feasible for the full-triangle instance so that
/// every shortcut edge occurs in exactly one route and exactly once (its
/// serving traversal). Non-serving traversals are replaced by an explicit
/// shortest path between the same endpoints; the full-triangle cost is
/// unchanged.
pub fn normalize_solution(
    instance: &Instance,
    solution: &Solution,
    artifacts: &ReductionArtifacts,
) -> Result<Solution, ReductionError> {
    let metric = reduced_instance(instance, artifacts, CostMode::FullTriangle);
    feasible_for(&metric, solution, CostMode::FullTriangle)?;

    let is_shortcut = |e: EdgeId| artifacts.shortcut_edges.binary_search(&e).is_ok();
    let routes = solution
        .routes
        .iter()
        .map(|route| {
            let mut steps = Vec::with_capacity(route.steps.len());
            for step in &route.steps {
                if !step.served && is_shortcut(step.edge) {
                    // A shortest path between the endpoints cannot itself
                    // use this edge: any walk through it costs at least the
                    // edge cost, which strictly exceeds the distance.
                    steps.extend(artifacts.path_steps(step.from, step.to));
                } else {
                    steps.push(*step);
                }
            }
            Route::new(steps)
        })
        .collect();
    Ok(Solution::new(routes))
}

/// Expands every deadhead traversal whose down-triangle cost is below the
/// original edge cost into an explicit shortest path, yielding a solution
/// feasible for the original instance whose original cost equals the
/// input's down-triangle cost.
pub fn lift_solution(
    instance: &Instance,
    solution: &Solution,
    artifacts: &ReductionArtifacts,
) -> Result<Solution, ReductionError> {
    let down = reduced_instance(instance, artifacts, CostMode::DownTriangle);
    feasible_for(&down, solution, CostMode::DownTriangle)?;

    let edges = instance.graph.edges();
    let routes = solution
        .routes
        .iter()
        .map(|route| {
            let mut steps = Vec::with_capacity(route.steps.len());
            for step in &route.steps {
                let e = &edges[step.edge];
                if !step.served && artifacts.down[step.edge] < e.cost {
                    steps.extend(artifacts.path_steps(step.from, step.to));
                } else {
                    steps.push(*step);
                }
            }
            Route::new(steps)
        })
        .collect();
    Ok(Solution::new(routes))
}

/// Costs of one solution under both modified tables, with the saving.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CostGap {
    pub down_cost: u64,
    pub full_cost: u64,
    pub saving: u64,
}

impl CostGap {
    /// Whether the full-triangle cost is at most the down-triangle cost
    /// minus the saving.
    pub fn holds(&self) -> bool {
        self.full_cost <= self.down_cost - self.saving
    }
}

/// Evaluates a solution under both modified cost tables.
///
/// Requires the solution to traverse every shortcut edge at least once;
/// feasible solutions always do, since shortcut edges are required.
pub fn cost_gap(
    solution: &Solution,
    artifacts: &ReductionArtifacts,
) -> Result<CostGap, ReductionError> {
    for &edge in &artifacts.shortcut_edges {
        let traversed = solution
            .routes
            .iter()
            .any(|r| r.steps.iter().any(|s| s.edge == edge));
        if !traversed {
            return Err(ReductionError::MissingShortcutEdge { edge });
        }
    }
    Ok(CostGap {
        down_cost: artifacts.down_costs().solution_cost(solution),
        full_cost: artifacts.full_costs().solution_cost(solution),
        saving: artifacts.saving,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge(u: Vertex, v: Vertex, cost: u64, demand: u64) -> Edge {
        Edge { u, v, cost, demand }
    }

    /// Three vertices; the only required edge costs 10 but has a 5-cost
    /// bypass through the middle vertex.
    fn shortcut_triangle() -> Instance {
        let g = Graph::new(
            3,
            vec![edge(0, 1, 2, 0), edge(1, 2, 3, 0), edge(0, 2, 10, 1)],
        )
        .unwrap();
        Instance::new(g, 0, 1).unwrap()
    }

    #[test]
    fn single_edge_closure_is_identity() {
        let g = Graph::new(2, vec![edge(0, 1, 4, 1)]).unwrap();
        let inst = Instance::new(g, 0, 1).unwrap();
        let art = metric_closure(&inst).unwrap();
        assert_eq!(art.down_cost(0), 4);
        assert_eq!(art.full_cost(0), 4);
        assert!(art.shortcut_edges().is_empty());
        assert_eq!(art.saving(), 0);
    }

    #[test]
    fn shortcut_triangle_closure() {
        // Exhaustive path enumeration on the 3-vertex graph: the two walks
        // from the depot to vertex 2 cost 10 (direct) and 2+3=5 (via 1).
        let inst = shortcut_triangle();
        let art = metric_closure(&inst).unwrap();
        assert_eq!(art.distance(0, 2), 5);
        assert_eq!(art.down_cost(2), 10);
        assert_eq!(art.full_cost(2), 5);
        assert_eq!(art.shortcut_edges(), &[2]);
        assert_eq!(art.saving(), 5);
    }

    #[test]
    fn disconnected_required_edge_is_rejected() {
        let g = Graph::new(4, vec![edge(0, 1, 1, 0), edge(2, 3, 1, 1)]).unwrap();
        let inst = Instance::new(g, 0, 1).unwrap();
        match metric_closure(&inst) {
            Err(ReductionError::Disconnected { edge: 1, .. }) => {}
            other => panic!("expected disconnected error, got {other:?}"),
        }
    }

    #[test]
    fn reduced_instance_swaps_costs() {
        let inst = shortcut_triangle();
        let art = metric_closure(&inst).unwrap();
        let full = reduced_instance(&inst, &art, CostMode::FullTriangle);
        let costs: Vec<u64> = full.graph.edges().iter().map(|e| e.cost).collect();
        assert_eq!(costs, vec![2, 3, 5]);
        let down = reduced_instance(&inst, &art, CostMode::DownTriangle);
        let costs: Vec<u64> = down.graph.edges().iter().map(|e| e.cost).collect();
        assert_eq!(costs, vec![2, 3, 10]);
        // Demands, depot, capacity unchanged.
        assert_eq!(full.depot, inst.depot);
        assert_eq!(full.capacity, inst.capacity);
        let demands: Vec<u64> = full.graph.edges().iter().map(|e| e.demand).collect();
        assert_eq!(demands, vec![0, 0, 1]);
    }

    #[test]
    fn closure_is_identity_on_metric_instances() {
        let g = Graph::new(
            3,
            vec![edge(0, 1, 2, 1), edge(1, 2, 3, 0), edge(0, 2, 4, 1)],
        )
        .unwrap();
        let inst = Instance::new(g, 0, 2).unwrap();
        let art = metric_closure(&inst).unwrap();
        for (id, e) in inst.graph.edges().iter().enumerate() {
            assert_eq!(art.down_cost(id), e.cost);
            assert_eq!(art.full_cost(id), e.cost);
        }
        assert!(art.shortcut_edges().is_empty());
    }

    #[test]
    fn normalize_rewrites_deadhead_over_shortcut_edge() {
        let inst = shortcut_triangle();
        let art = metric_closure(&inst).unwrap();
        // Serve the required edge, then return over it again: full-triangle
        // cost 5 + 5 = 10.
        let sol = Solution::new(vec![Route::new(vec![
            Step::serve(2, 0, 2),
            Step::deadhead(2, 2, 0),
        ])]);
        assert_eq!(art.full_costs().solution_cost(&sol), 10);
        let norm = normalize_solution(&inst, &sol, &art).unwrap();
        let expected = Solution::new(vec![Route::new(vec![
            Step::serve(2, 0, 2),
            Step::deadhead(1, 2, 1),
            Step::deadhead(0, 1, 0),
        ])]);
        assert_eq!(norm, expected);
        assert_eq!(art.full_costs().solution_cost(&norm), 10);
    }

    #[test]
    fn normalize_without_shortcut_edges_is_identity() {
        let g = Graph::new(2, vec![edge(0, 1, 4, 1)]).unwrap();
        let inst = Instance::new(g, 0, 1).unwrap();
        let art = metric_closure(&inst).unwrap();
        let sol = Solution::new(vec![Route::new(vec![
            Step::serve(0, 0, 1),
            Step::deadhead(0, 1, 0),
        ])]);
        let norm = normalize_solution(&inst, &sol, &art).unwrap();
        assert_eq!(norm, sol);
    }

    #[test]
    fn normalize_rewrites_non_serving_route_crossing() {
        let inst = shortcut_triangle();
        let art = metric_closure(&inst).unwrap();
        // Route 0 serves; route 1 merely crosses the shortcut edge.
        let serving = Route::new(vec![
            Step::serve(2, 0, 2),
            Step::deadhead(1, 2, 1),
            Step::deadhead(0, 1, 0),
        ]);
        let crossing = Route::new(vec![
            Step::deadhead(2, 0, 2),
            Step::deadhead(1, 2, 1),
            Step::deadhead(0, 1, 0),
        ]);
        let sol = Solution::new(vec![serving.clone(), crossing]);
        let before = art.full_costs().solution_cost(&sol);
        let norm = normalize_solution(&inst, &sol, &art).unwrap();
        assert_eq!(art.full_costs().solution_cost(&norm), before);
        // Shortcut edge now occurs exactly once overall.
        let occurrences: usize = norm
            .routes
            .iter()
            .map(|r| r.steps.iter().filter(|s| s.edge == 2).count())
            .sum();
        assert_eq!(occurrences, 1);
        assert_eq!(norm.routes[0], serving);
    }

    #[test]
    fn normalize_rejects_infeasible_input() {
        let inst = shortcut_triangle();
        let art = metric_closure(&inst).unwrap();
        let err = normalize_solution(&inst, &Solution::empty(), &art).unwrap_err();
        match err {
            ReductionError::InfeasibleInput { violations, .. } => {
                assert!(!violations.is_empty());
            }
            other => panic!("expected infeasible input, got {other:?}"),
        }
    }

    #[test]
    fn lift_preserves_normalized_route() {
        let inst = shortcut_triangle();
        let art = metric_closure(&inst).unwrap();
        let norm = Solution::new(vec![Route::new(vec![
            Step::serve(2, 0, 2),
            Step::deadhead(1, 2, 1),
            Step::deadhead(0, 1, 0),
        ])]);
        let lifted = lift_solution(&inst, &norm, &art).unwrap();
        assert_eq!(lifted, norm);
        assert_eq!(CostFunction::original(&inst).solution_cost(&lifted), 15);
        assert_eq!(art.down_costs().solution_cost(&norm), 15);
    }

    #[test]
    fn lift_expands_priced_down_deadhead() {
        // Deadheading a zero-demand edge of cost 9 with a 4-cost bypass
        // through vertex 2.
        let g = Graph::new(
            4,
            vec![
                edge(0, 3, 5, 1),
                edge(0, 1, 9, 0),
                edge(0, 2, 2, 0),
                edge(2, 1, 2, 0),
                edge(1, 3, 5, 0),
            ],
        )
        .unwrap();
        let inst = Instance::new(g, 0, 1).unwrap();
        let art = metric_closure(&inst).unwrap();
        assert_eq!(art.distance(0, 1), 4);
        let sol = Solution::new(vec![Route::new(vec![
            Step::serve(0, 0, 3),
            Step::deadhead(4, 3, 1),
            Step::deadhead(1, 1, 0),
        ])]);
        assert_eq!(art.down_costs().solution_cost(&sol), 14);
        let lifted = lift_solution(&inst, &sol, &art).unwrap();
        let expected = Solution::new(vec![Route::new(vec![
            Step::serve(0, 0, 3),
            Step::deadhead(4, 3, 1),
            Step::deadhead(3, 1, 2),
            Step::deadhead(2, 2, 0),
        ])]);
        assert_eq!(lifted, expected);
        assert_eq!(CostFunction::original(&inst).solution_cost(&lifted), 14);
        assert!(validate(&inst, &lifted).is_empty());
    }

    #[test]
    fn lift_is_identity_on_metric_instances() {
        let g = Graph::new(
            3,
            vec![edge(0, 1, 2, 1), edge(1, 2, 3, 0), edge(0, 2, 4, 0)],
        )
        .unwrap();
        let inst = Instance::new(g, 0, 1).unwrap();
        let art = metric_closure(&inst).unwrap();
        let sol = Solution::new(vec![Route::new(vec![
            Step::serve(0, 0, 1),
            Step::deadhead(0, 1, 0),
        ])]);
        assert_eq!(lift_solution(&inst, &sol, &art).unwrap(), sol);
    }

    #[test]
    fn cost_gap_on_optimal_solution_is_tight() {
        let inst = shortcut_triangle();
        let art = metric_closure(&inst).unwrap();
        let sol = Solution::new(vec![Route::new(vec![
            Step::serve(2, 0, 2),
            Step::deadhead(1, 2, 1),
            Step::deadhead(0, 1, 0),
        ])]);
        let gap = cost_gap(&sol, &art).unwrap();
        assert_eq!(gap.down_cost, 15);
        assert_eq!(gap.full_cost, 10);
        assert_eq!(gap.saving, 5);
        assert!(gap.holds());
        assert_eq!(gap.full_cost, gap.down_cost - gap.saving);
    }

    #[test]
    fn cost_gap_strict_when_edge_traversed_twice() {
        let inst = shortcut_triangle();
        let art = metric_closure(&inst).unwrap();
        let sol = Solution::new(vec![Route::new(vec![
            Step::serve(2, 0, 2),
            Step::deadhead(2, 2, 0),
        ])]);
        let gap = cost_gap(&sol, &art).unwrap();
        assert_eq!(gap.down_cost, 20);
        assert_eq!(gap.full_cost, 10);
        assert!(gap.holds());
        assert!(gap.full_cost < gap.down_cost - gap.saving);
    }

    #[test]
    fn cost_gap_requires_shortcut_traversal() {
        let inst = shortcut_triangle();
        let art = metric_closure(&inst).unwrap();
        let sol = Solution::new(vec![Route::new(vec![
            Step::deadhead(0, 0, 1),
            Step::deadhead(0, 1, 0),
        ])]);
        match cost_gap(&sol, &art) {
            Err(ReductionError::MissingShortcutEdge { edge: 2 }) => {}
            other => panic!("expected missing-edge error, got {other:?}"),
        }
    }

    #[test]
    fn cost_gap_trivial_without_shortcut_edges() {
        let g = Graph::new(2, vec![edge(0, 1, 4, 1)]).unwrap();
        let inst = Instance::new(g, 0, 1).unwrap();
        let art = metric_closure(&inst).unwrap();
        let sol = Solution::new(vec![Route::new(vec![
            Step::serve(0, 0, 1),
            Step::deadhead(0, 1, 0),
        ])]);
        let gap = cost_gap(&sol, &art).unwrap();
        assert_eq!(gap.saving, 0);
        assert!(gap.full_cost <= gap.down_cost);
    }
}
