//! Constant-factor heuristic for instances satisfying the triangle
//! inequality, and the end-to-end pipeline that composes it with the
//! cost-function reduction.
//!
//! The heuristic is route-first/cluster-second: build one giant tour
//! serving every required edge once (spanning connectors + odd-degree
//! matching + Euler circuit), then cut the service sequence into
//! capacity-feasible segments by a shortest path in an auxiliary acyclic
//! graph, which is optimal over all consecutive splits of the fixed
//! sequence.

use thiserror::Error;

use crate::cost::{CostFunction, CostMode};
use crate::euler::euler_circuit;
use crate::exact::{solve_exact, OracleError};
use crate::instance::{EdgeId, Instance, Vertex};
use crate::matching::min_weight_matching;
use crate::reduction::{
    lift_solution, metric_closure, normalize_solution, reduced_instance, ReductionArtifacts,
    ReductionError,
};
use crate::solution::{Route, Solution, Step};
use crate::validate::{validate, Violation};

#[derive(Debug, Error)]
pub enum ApproxError {
    #[error("instance has no required edges")]
    NoRequiredEdges,
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error("pipeline produced an infeasible solution: {}",
            .violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Internal { violations: Vec<Violation> },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// One serving traversal in the giant tour.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ServiceVisit {
    pub edge: EdgeId,
    pub from: Vertex,
    pub to: Vertex,
}

/// A depot-rooted service order covering every required edge exactly once;
/// moves between consecutive services are implicit shortest paths.
#[derive(Debug, Clone)]
pub struct GiantTour {
    pub services: Vec<ServiceVisit>,
    /// True when the odd-degree correction used the greedy fallback.
    pub matching_heuristic: bool,
}

/// Builds the giant tour: connect the required-edge components and the
/// depot with a minimum spanning structure over shortest-path distances,
/// fix odd degrees with a minimum-weight matching, extract an Euler
/// circuit, and project it to the service order.
pub fn build_giant_tour(
    instance: &Instance,
    artifacts: &ReductionArtifacts,
) -> Result<GiantTour, ApproxError> {
    let required = instance.required_edges();
    if required.is_empty() {
        return Err(ApproxError::NoRequiredEdges);
    }
    let n = instance.graph.vertex_count();

    // Components spanned by required edges, with the depot always present.
    let mut comp: Vec<usize> = (0..n).collect();
    fn find(comp: &mut [usize], x: usize) -> usize {
        let mut root = x;
        while comp[root] != root {
            root = comp[root];
        }
        let mut at = x;
        while comp[at] != root {
            let next = comp[at];
            comp[at] = root;
            at = next;
        }
        root
    }
    for &id in &required {
        let e = instance.graph.edge(id);
        let (a, b) = (find(&mut comp, e.u), find(&mut comp, e.v));
        if a != b {
            comp[a.max(b)] = a.min(b);
        }
    }
    let mut relevant: Vec<Vertex> = required
        .iter()
        .flat_map(|&id| {
            let e = instance.graph.edge(id);
            [e.u, e.v]
        })
        .chain([instance.depot])
        .collect();
    relevant.sort_unstable();
    relevant.dedup();

    // Spanning structure over components by Prim from the depot's
    // component; each chosen connector is the closest vertex pair.
    let mut in_tree = vec![false; n];
    let depot_root = find(&mut comp, instance.depot);
    in_tree[depot_root] = true;
    let mut connectors: Vec<(Vertex, Vertex)> = Vec::new();
    loop {
        let mut best: Option<(u64, Vertex, Vertex)> = None;
        for &u in &relevant {
            if !in_tree[find(&mut comp, u)] {
                continue;
            }
            for &v in &relevant {
                if in_tree[find(&mut comp, v)] {
                    continue;
                }
                let d = artifacts.distance(u, v);
                let cand = (d, u, v);
                if best.is_none_or(|b| cand < b) {
                    best = Some(cand);
                }
            }
        }
        match best {
            Some((_, u, v)) => {
                in_tree[find(&mut comp, v)] = true;
                connectors.push((u, v));
            }
            None => break,
        }
    }

    // Odd-degree correction under shortest-path distances.
    let mut degree = vec![0usize; n];
    for &id in &required {
        let e = instance.graph.edge(id);
        degree[e.u] += 1;
        degree[e.v] += 1;
    }
    for &(u, v) in &connectors {
        degree[u] += 1;
        degree[v] += 1;
    }
    let odd: Vec<Vertex> = (0..n).filter(|&v| degree[v] % 2 == 1).collect();
    let matching = min_weight_matching(&odd, |a, b| artifacts.distance(a, b));

    // Multigraph: required edges first (id order), then connectors, then
    // matching pairs; Euler tie-breaks prefer the smallest index.
    let mut multigraph: Vec<(Vertex, Vertex)> = required
        .iter()
        .map(|&id| {
            let e = instance.graph.edge(id);
            (e.u, e.v)
        })
        .collect();
    multigraph.extend(connectors.iter().copied());
    multigraph.extend(matching.pairs.iter().copied());

    let circuit = euler_circuit(n, &multigraph, instance.depot);
    let services = circuit
        .iter()
        .filter(|t| t.edge < required.len())
        .map(|t| ServiceVisit {
            edge: required[t.edge],
            from: t.from,
            to: t.to,
        })
        .collect();

    Ok(GiantTour {
        services,
        matching_heuristic: matching.heuristic,
    })
}

/// A partition of the service sequence into consecutive segments, each
/// within capacity, with the summed route cost of the cut.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitPlan {
    /// Half-open index ranges into the service sequence.
    pub segments: Vec<(usize, usize)>,
    pub cost: u64,
}

/// Optimally cuts the giant tour into capacity-feasible routes.
///
/// Node `i` of the auxiliary acyclic graph means "first `i` services
/// done"; the arc `(i, j)` routes services `i+1..=j` as one vehicle:
/// depot to first service, the in-sequence services with shortest-path
/// moves between them, and back to the depot. The arc exists only when
/// the segment's demand fits the capacity. The returned cut is a shortest
/// path in that graph, so it is optimal over all consecutive splits.
pub fn split_optimally(
    tour: &GiantTour,
    instance: &Instance,
    artifacts: &ReductionArtifacts,
) -> SplitPlan {
    let services = &tour.services;
    let k = services.len();
    if k == 0 {
        return SplitPlan {
            segments: Vec::new(),
            cost: 0,
        };
    }

    let mut prefix_demand = vec![0u64; k + 1];
    let mut prefix_serve = vec![0u64; k + 1];
    let mut prefix_link = vec![0u64; k + 1];
    for i in 0..k {
        let e = instance.graph.edge(services[i].edge);
        prefix_demand[i + 1] = prefix_demand[i] + e.demand;
        prefix_serve[i + 1] = prefix_serve[i] + e.cost;
        prefix_link[i + 1] = if i == 0 {
            0
        } else {
            prefix_link[i] + artifacts.distance(services[i - 1].to, services[i].from)
        };
    }

    const UNSET: u64 = u64::MAX;
    let mut best = vec![UNSET; k + 1];
    let mut pred = vec![0usize; k + 1];
    best[0] = 0;
    for j in 1..=k {
        for i in 0..j {
            if best[i] == UNSET {
                continue;
            }
            if prefix_demand[j] - prefix_demand[i] > instance.capacity {
                continue;
            }
            let arc = artifacts.distance(instance.depot, services[i].from)
                + (prefix_serve[j] - prefix_serve[i])
                + (prefix_link[j] - prefix_link[i + 1])
                + artifacts.distance(services[j - 1].to, instance.depot);
            let cand = best[i] + arc;
            if cand < best[j] {
                best[j] = cand;
                pred[j] = i;
            }
        }
    }
    debug_assert_ne!(best[k], UNSET, "single services always fit");

    let mut segments = Vec::new();
    let mut j = k;
    while j > 0 {
        let i = pred[j];
        segments.push((i, j));
        j = i;
    }
    segments.reverse();
    SplitPlan {
        segments,
        cost: best[k],
    }
}

/// A feasible solution for the metric instance, with the flag recording
/// whether the matching fallback engaged (the factor claim then lapses).
#[derive(Debug, Clone)]
pub struct MetricApproximation {
    pub solution: Solution,
    pub matching_heuristic: bool,
}

/// Runs the route-first/cluster-second heuristic on a full-triangle
/// instance and materializes one route per segment, with all moves
/// expanded into explicit shortest-path walks.
pub fn approximate_metric(
    instance: &Instance,
    artifacts: &ReductionArtifacts,
) -> Result<MetricApproximation, ApproxError> {
    let tour = build_giant_tour(instance, artifacts)?;
    let plan = split_optimally(&tour, instance, artifacts);

    let mut routes = Vec::with_capacity(plan.segments.len());
    for &(a, b) in &plan.segments {
        let mut steps = Vec::new();
        let mut at = instance.depot;
        for visit in &tour.services[a..b] {
            steps.extend(artifacts.path_steps(at, visit.from));
            steps.push(Step::serve(visit.edge, visit.from, visit.to));
            at = visit.to;
        }
        steps.extend(artifacts.path_steps(at, instance.depot));
        routes.push(Route::new(steps));
    }
    let solution = Solution::new(routes);

    let violations = validate(instance, &solution);
    if !violations.is_empty() {
        return Err(ApproxError::Internal { violations });
    }
    debug_assert_eq!(
        CostFunction::original(instance).solution_cost(&solution),
        plan.cost
    );
    Ok(MetricApproximation {
        solution,
        matching_heuristic: tour.matching_heuristic,
    })
}

/// A valid lower bound on the optimum of a metric instance: every serving
/// route traverses its served edges and must reach the service area from
/// the depot and return, and at least ceil(total demand / capacity)
/// serving routes are needed.
pub fn lower_bound(instance: &Instance, artifacts: &ReductionArtifacts) -> u64 {
    let required = instance.required_edges();
    if required.is_empty() {
        return 0;
    }
    let serve_total: u64 = required.iter().map(|&e| artifacts.full_cost(e)).sum();
    let demand_total: u64 = required
        .iter()
        .map(|&e| instance.graph.edge(e).demand)
        .sum();
    let route_count = demand_total.div_ceil(instance.capacity);
    let reach = required
        .iter()
        .map(|&id| {
            let e = instance.graph.edge(id);
            artifacts
                .distance(instance.depot, e.u)
                .min(artifacts.distance(instance.depot, e.v))
        })
        .min()
        .unwrap();
    serve_total + 2 * route_count * reach
}

/// Costs, bounds, and consistency checks for one pipeline run.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub required_count: usize,
    pub capacity: u64,
    pub route_count: usize,
    /// Cost of the metric-instance solution under full-triangle costs.
    pub metric_cost: u64,
    /// Cost of the normalized solution under down-triangle costs.
    pub down_cost: u64,
    /// Cost of the lifted solution under the original costs.
    pub final_cost: u64,
    pub saving: u64,
    /// Whether final_cost == metric_cost + saving held exactly.
    pub identity_ok: bool,
    pub lower_bound: u64,
    pub matching_heuristic: bool,
    pub exact_optimum: Option<u64>,
    pub ratio: Option<f64>,
}

impl SolveReport {
    /// Line-oriented key-value rendering; field order is fixed and the
    /// block carries no timestamps, so identical runs emit identical text.
    pub fn to_text(&self) -> String {
        let mut out = String::from("report 1\n");
        out.push_str(&format!("vertices {}\n", self.vertex_count));
        out.push_str(&format!("edges {}\n", self.edge_count));
        out.push_str(&format!("required {}\n", self.required_count));
        out.push_str(&format!("capacity {}\n", self.capacity));
        out.push_str(&format!("routes {}\n", self.route_count));
        out.push_str(&format!("metric_cost {}\n", self.metric_cost));
        out.push_str(&format!("down_cost {}\n", self.down_cost));
        out.push_str(&format!("final_cost {}\n", self.final_cost));
        out.push_str(&format!("saving {}\n", self.saving));
        out.push_str(&format!(
            "identity {}\n",
            if self.identity_ok { "ok" } else { "FAIL" }
        ));
        out.push_str(&format!("lower_bound {}\n", self.lower_bound));
        out.push_str(&format!(
            "matching {}\n",
            if self.matching_heuristic {
                "heuristic"
            } else {
                "exact"
            }
        ));
        if let Some(opt) = self.exact_optimum {
            out.push_str(&format!("exact {opt}\n"));
        }
        if let Some(ratio) = self.ratio {
            out.push_str(&format!("ratio {ratio:.6}\n"));
        }
        out
    }
}

/// The full pipeline: metric closure, heuristic on the full-triangle
/// instance, normalization, lift, and validation against the original
/// instance. The final cost always equals the metric cost plus the saving.
pub fn solve(
    instance: &Instance,
    oracle_limit: usize,
) -> Result<(Solution, SolveReport), ApproxError> {
    let artifacts = metric_closure(instance)?;
    let required = instance.required_edges();

    let (final_solution, metric_cost, down_cost, matching_heuristic) = if required.is_empty() {
        (Solution::empty(), 0, 0, false)
    } else {
        let metric_instance = reduced_instance(instance, &artifacts, CostMode::FullTriangle);
        let approx = approximate_metric(&metric_instance, &artifacts)?;
        let metric_cost = artifacts.full_costs().solution_cost(&approx.solution);
        let normalized = normalize_solution(instance, &approx.solution, &artifacts)?;
        let down_cost = artifacts.down_costs().solution_cost(&normalized);
        let lifted = lift_solution(instance, &normalized, &artifacts)?;
        (lifted, metric_cost, down_cost, approx.matching_heuristic)
    };

    let violations = validate(instance, &final_solution);
    if !violations.is_empty() {
        return Err(ApproxError::Internal { violations });
    }
    let final_cost = CostFunction::original(instance).solution_cost(&final_solution);

    let exact_optimum = match solve_exact(instance, &CostFunction::original(instance), oracle_limit)
    {
        Ok(res) => Some(res.optimum),
        Err(OracleError::TooManyRequired { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let ratio = exact_optimum.map(|opt| {
        if opt == 0 {
            1.0
        } else {
            final_cost as f64 / opt as f64
        }
    });

    let report = SolveReport {
        vertex_count: instance.graph.vertex_count(),
        edge_count: instance.graph.edges().len(),
        required_count: required.len(),
        capacity: instance.capacity,
        route_count: final_solution.routes.len(),
        metric_cost,
        down_cost,
        final_cost,
        saving: artifacts.saving(),
        identity_ok: final_cost == metric_cost + artifacts.saving(),
        lower_bound: lower_bound(instance, &artifacts),
        matching_heuristic,
        exact_optimum,
        ratio,
    };
    Ok((final_solution, report))
}
