//! Brute-force exact solver for desk-scale instances.
//!
//! Required edges are partitioned into capacity-feasible blocks by
//! enumerating restricted-growth strings with demand pruning. For each
//! block, the cheapest depot-rooted closed walk serving the whole block is
//! found by dynamic programming over (served subset, last edge,
//! orientation), with moves between services charged at shortest-path
//! distance and expanded to explicit graph walks in the witness.

use std::collections::HashMap;

use thiserror::Error;

use crate::apsp::Apsp;
use crate::cost::CostFunction;
use crate::instance::{EdgeId, Instance, Vertex};
use crate::solution::{Route, Solution, Step};

/// Default cap on the number of required edges the oracle accepts.
pub const DEFAULT_ORACLE_LIMIT: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance has {required} required edges; oracle limit is {limit}")]
    TooManyRequired { required: usize, limit: usize },
    #[error("edge {edge} demand {demand} exceeds capacity {capacity}")]
    InfeasibleEdge {
        edge: EdgeId,
        demand: u64,
        capacity: u64,
    },
    #[error("vertex {vertex} of required edge {edge} is unreachable from the depot")]
    Disconnected { edge: EdgeId, vertex: Vertex },
    #[error("block demand {demand} exceeds capacity {capacity}")]
    BlockOverCapacity { demand: u64, capacity: u64 },
}

/// The exact optimum with a witness solution and a search counter.
#[derive(Debug, Clone)]
pub struct ExactResult {
    pub optimum: u64,
    pub witness: Solution,
    /// Number of complete demand-feasible partitions evaluated.
    pub explored: u64,
}

struct OracleContext<'a> {
    instance: &'a Instance,
    cf: &'a CostFunction,
    apsp: Apsp,
    required: Vec<EdgeId>,
}

impl<'a> OracleContext<'a> {
    fn new(instance: &'a Instance, cf: &'a CostFunction) -> Result<Self, OracleError> {
        let costs: Vec<u64> = (0..instance.graph.edges().len())
            .map(|e| cf.edge_cost(e))
            .collect();
        let apsp = Apsp::compute(&instance.graph, &costs);
        let required = instance.required_edges();
        for &id in &required {
            let e = instance.graph.edge(id);
            if e.demand > instance.capacity {
                return Err(OracleError::InfeasibleEdge {
                    edge: id,
                    demand: e.demand,
                    capacity: instance.capacity,
                });
            }
            for vertex in [e.u, e.v] {
                if !apsp.reachable(instance.depot, vertex) {
                    return Err(OracleError::Disconnected { edge: id, vertex });
                }
            }
        }
        Ok(OracleContext {
            instance,
            cf,
            apsp,
            required,
        })
    }

    /// Endpoints of edge `id` in traversal order for the given orientation.
    fn oriented(&self, id: EdgeId, flipped: bool) -> (Vertex, Vertex) {
        let e = self.instance.graph.edge(id);
        if flipped {
            (e.v, e.u)
        } else {
            (e.u, e.v)
        }
    }

    /// Minimum cost of a depot-rooted closed walk serving exactly `block`
    /// (indices into an edge id list), with DP parents for the witness.
    fn block_walk(&self, block: &[EdgeId]) -> (u64, Vec<(EdgeId, bool)>) {
        let k = block.len();
        assert!(k > 0 && k <= 16, "block size out of range");
        let depot = self.instance.depot;
        let full = (1usize << k) - 1;
        const UNSET: u64 = u64::MAX;
        // dp[mask][i][o]: cheapest walk serving `mask`, last serving
        // block[i] with orientation o, standing at that traversal's end.
        let mut dp = vec![UNSET; (full + 1) * k * 2];
        let mut parent: Vec<Option<(usize, bool)>> = vec![None; (full + 1) * k * 2];
        let idx = |mask: usize, i: usize, o: usize| (mask * k + i) * 2 + o;

        for (i, &e) in block.iter().enumerate() {
            for o in 0..2 {
                let (start, _) = self.oriented(e, o == 1);
                let cost = self.apsp.distance(depot, start) + self.cf.edge_cost(e);
                dp[idx(1 << i, i, o)] = cost;
            }
        }
        for mask in 1..=full {
            for i in 0..k {
                if mask & (1 << i) == 0 {
                    continue;
                }
                for o in 0..2 {
                    let cur = dp[idx(mask, i, o)];
                    if cur == UNSET {
                        continue;
                    }
                    let (_, end) = self.oriented(block[i], o == 1);
                    for (j, &next_edge) in block.iter().enumerate() {
                        if mask & (1 << j) != 0 {
                            continue;
                        }
                        for oj in 0..2 {
                            let (start, _) = self.oriented(next_edge, oj == 1);
                            let cand =
                                cur + self.apsp.distance(end, start) + self.cf.edge_cost(next_edge);
                            let slot = idx(mask | (1 << j), j, oj);
                            if cand < dp[slot] {
                                dp[slot] = cand;
                                parent[slot] = Some((i, o == 1));
                            }
                        }
                    }
                }
            }
        }

        let mut best = UNSET;
        let mut last = (0usize, false);
        for i in 0..k {
            for o in 0..2 {
                let cur = dp[idx(full, i, o)];
                if cur == UNSET {
                    continue;
                }
                let (_, end) = self.oriented(block[i], o == 1);
                let total = cur + self.apsp.distance(end, depot);
                if total < best {
                    best = total;
                    last = (i, o == 1);
                }
            }
        }
        assert_ne!(best, UNSET, "required endpoints are reachable");

        // Reconstruct the service order.
        let mut order = Vec::with_capacity(k);
        let mut mask = full;
        let mut cur = last;
        loop {
            order.push((block[cur.0], cur.1));
            let p = parent[idx(mask, cur.0, cur.1 as usize)];
            mask &= !(1 << cur.0);
            match p {
                Some((pi, po)) => cur = (pi, po),
                None => break,
            }
        }
        order.reverse();
        (best, order)
    }

    /// Materializes a service order into an explicit route on the graph.
    fn route_for_order(&self, order: &[(EdgeId, bool)]) -> Route {
        let depot = self.instance.depot;
        let mut steps = Vec::new();
        let mut at = depot;
        for &(e, flipped) in order {
            let (start, end) = self.oriented(e, flipped);
            steps.extend(self.apsp.path_steps(at, start));
            steps.push(Step::serve(e, start, end));
            at = end;
        }
        steps.extend(self.apsp.path_steps(at, depot));
        Route::new(steps)
    }
}

/// Enumerates restricted-growth strings: `assignment[i]` is the block of
/// required edge `i`, with `assignment[i] <= max(assignment[..i]) + 1`.
/// Blocks whose demand would exceed the capacity are pruned as they grow;
/// block walk costs are memoized by subset mask.
struct PartitionSearch<'a> {
    ctx: &'a OracleContext<'a>,
    demands: Vec<u64>,
    assignment: Vec<usize>,
    block_demand: Vec<u64>,
    block_cost: HashMap<u32, u64>,
    best: Option<(u64, Vec<u32>)>,
    explored: u64,
}

impl PartitionSearch<'_> {
    fn cost_of(&mut self, mask: u32) -> u64 {
        if let Some(&c) = self.block_cost.get(&mask) {
            return c;
        }
        let block: Vec<EdgeId> = (0..self.demands.len())
            .filter(|&i| mask & (1 << i) != 0)
            .map(|i| self.ctx.required[i])
            .collect();
        let (c, _) = self.ctx.block_walk(&block);
        self.block_cost.insert(mask, c);
        c
    }

    fn descend(&mut self, i: usize, max_label: usize) {
        if i == self.demands.len() {
            self.explored += 1;
            let mut masks = vec![0u32; max_label];
            for (idx, &label) in self.assignment.iter().enumerate() {
                masks[label] |= 1 << idx;
            }
            let total: u64 = masks.iter().map(|&mask| self.cost_of(mask)).sum();
            if self.best.as_ref().is_none_or(|(b, _)| total < *b) {
                self.best = Some((total, masks));
            }
            return;
        }
        for label in 0..=max_label {
            let load = self.block_demand[label] + self.demands[i];
            if load > self.ctx.instance.capacity {
                continue;
            }
            self.assignment[i] = label;
            self.block_demand[label] = load;
            self.descend(i + 1, max_label.max(label + 1));
            self.block_demand[label] -= self.demands[i];
        }
    }
}

/// Cheapest depot-rooted closed walk serving exactly the given edge set.
///
/// The witness route expands all moves between services into explicit
/// shortest-path walks, so it validates against the instance graph.
pub fn best_route_for_set(
    instance: &Instance,
    cf: &CostFunction,
    edge_set: &[EdgeId],
) -> Result<(u64, Route), OracleError> {
    if edge_set.is_empty() {
        return Ok((0, Route::default()));
    }
    let demand: u64 = edge_set
        .iter()
        .map(|&e| instance.graph.edge(e).demand)
        .sum();
    if demand > instance.capacity {
        return Err(OracleError::BlockOverCapacity {
            demand,
            capacity: instance.capacity,
        });
    }
    let ctx = OracleContext::new(instance, cf)?;
    let (cost, order) = ctx.block_walk(edge_set);
    Ok((cost, ctx.route_for_order(&order)))
}

/// Exact optimum over all partitions of the required edges into
/// capacity-feasible blocks.
pub fn solve_exact(
    instance: &Instance,
    cf: &CostFunction,
    limit: usize,
) -> Result<ExactResult, OracleError> {
    let ctx = OracleContext::new(instance, cf)?;
    let m = ctx.required.len();
    if m > limit {
        return Err(OracleError::TooManyRequired { required: m, limit });
    }
    if m == 0 {
        return Ok(ExactResult {
            optimum: 0,
            witness: Solution::empty(),
            explored: 1,
        });
    }

    let demands: Vec<u64> = ctx
        .required
        .iter()
        .map(|&e| instance.graph.edge(e).demand)
        .collect();
    let mut search = PartitionSearch {
        ctx: &ctx,
        demands,
        assignment: vec![0; m],
        block_demand: vec![0; m],
        block_cost: HashMap::new(),
        best: None,
        explored: 0,
    };
    search.descend(0, 0);
    let PartitionSearch { best, explored, .. } = search;
    let (optimum, masks) = best.expect("every required edge fits some block");
    let routes = masks
        .iter()
        .map(|&mask| {
            let block: Vec<EdgeId> = (0..m)
                .filter(|&i| mask & (1 << i) != 0)
                .map(|i| ctx.required[i])
                .collect();
            let (_, order) = ctx.block_walk(&block);
            ctx.route_for_order(&order)
        })
        .collect();

    Ok(ExactResult {
        optimum,
        witness: Solution::new(routes),
        explored,
    })
}
